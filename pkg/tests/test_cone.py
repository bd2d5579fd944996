"""Tits cone certificates, faces, sphericity, prenilpotency, intervals."""

import itertools
import random
from fractions import Fraction

import pytest

from masure.cone import (
    FaceDescriptor,
    InCone,
    NotInCone,
    NotInTitsCone,
    NotPrenilpotent,
    PairNotPrenilpotent,
    Prenilpotent,
    closed_interval,
    face_of,
    is_spherical,
    normalize_to_dominant,
    prenilpotent_pair,
    rank2_geometry,
    search_prenilpotent,
)
from masure.kmdata import (
    RootVector,
    affine_sl2_data,
    delta_coefficients,
    finite_a2_data,
    rank2_data,
)
from masure.weyl import enumerate_real_roots, simple_real_root

AFF = affine_sl2_data()
A2 = finite_a2_data()
R15 = rank2_data(1, 5)
R33 = rank2_data(3, 3)


def _delta_value(data, v):
    delta = delta_coefficients(data)
    return sum(Fraction(delta[i]) * data.pair(data.simple_roots[i], v)
               for i in range(data.n))


class TestNormalize:
    def test_finite_always_in_cone(self):
        rng = random.Random(1)
        for _ in range(50):
            v = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(2))
            cert = normalize_to_dominant(A2, v)
            assert isinstance(cert, InCone)
            for i in range(2):
                assert A2.pair(A2.simple_roots[i], cert.image) >= 0
            assert cert.w.act_y(v) == cert.image

    def test_affine_scaling_element(self):
        cert = normalize_to_dominant(AFF, (0, 0, 1))  # delta = 1 here
        assert isinstance(cert, InCone)

    def test_rank2_coroot_refuted(self):
        cert = normalize_to_dominant(R15, (1, 0))
        assert isinstance(cert, NotInCone)

    def test_affine_delta_criterion_200(self):
        rng = random.Random(2)
        for _ in range(200):
            v = tuple(Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(3))
            cert = normalize_to_dominant(AFF, v)
            dv = _delta_value(AFF, v)
            inessential = all(AFF.pair(AFF.simple_roots[i], v) == 0 for i in range(2))
            in_cone = dv > 0 or inessential
            assert isinstance(cert, InCone) == in_cone

    def test_sign_coherence_affine(self):
        rng = random.Random(3)
        for _ in range(60):
            v = tuple(Fraction(rng.randint(-5, 5)) for _ in range(3))
            plus = isinstance(normalize_to_dominant(AFF, v), InCone)
            minus = isinstance(normalize_to_dominant(AFF, tuple(-x for x in v)), InCone)
            if plus and minus:
                # only the inessential line is in both cones
                assert all(AFF.pair(AFF.simple_roots[i], v) == 0 for i in range(2))

    def test_rank2_gamma_side_samples(self):
        geo = rank2_geometry(R15)
        rng = random.Random(4)
        count = 0
        for _ in range(300):
            v = (Fraction(rng.randint(-8, 8)), Fraction(rng.randint(-8, 8)))
            if v == (0, 0):
                continue
            if geo.strictly_in_gamma(v):
                count += 1
                cert = normalize_to_dominant(R15, v)
                assert isinstance(cert, NotInCone)
        assert count > 20  # the sample really hits the gamma side

    def test_rank2_cone_side_certified(self):
        # dominant vectors normalize immediately; their Weyl translates too
        cert = normalize_to_dominant(R15, (-20, -9))
        assert isinstance(cert, InCone)
        from masure.weyl import weyl_element

        w = weyl_element(R15, (0, 1, 0))
        moved = w.act_y((-20, -9))
        cert2 = normalize_to_dominant(R15, moved)
        assert isinstance(cert2, InCone)
        assert cert2.image == cert.image

    def test_eigenline_boundary_symmetry(self):
        # the refutation region is symmetric under v -> -v
        geo = rank2_geometry(R33)
        rng = random.Random(5)
        for _ in range(100):
            v = (Fraction(rng.randint(-7, 7)), Fraction(rng.randint(-7, 7)))
            if v == (0, 0):
                continue
            assert geo.strictly_in_gamma(v) == geo.strictly_in_gamma(tuple(-x for x in v))


class TestFaces:
    def test_dominant_interior(self):
        f = face_of(A2, (1, 1))
        assert f.subset == () and f.sign == 1 and f.w.is_identity()

    def test_zero_full_subset(self):
        f = face_of(AFF, (0, 0, 0))
        assert set(f.subset) == {0, 1}

    def test_inessential_full_subset(self):
        f = face_of(AFF, (0, 1, 0))  # central direction: all alpha_i vanish
        assert set(f.subset) == {0, 1}

    def test_negative_side(self):
        f = face_of(A2, (-1, -1))
        assert f.sign in (-1, 1)  # finite type: cone is everything

    def test_not_in_cone(self):
        with pytest.raises(NotInTitsCone):
            face_of(R15, (1, 0))


class TestSphericity:
    def test_empty(self):
        assert is_spherical(AFF, ())

    def test_affine_full_not(self):
        assert not is_spherical(AFF, (0, 1))

    def test_single_node(self):
        assert is_spherical(AFF, (1,))
        assert is_spherical(R15, (0,))

    def test_finite_full(self):
        assert is_spherical(A2, (0, 1))


class TestPrenilpotency:
    def test_finite_opposite(self):
        a = simple_real_root(A2, 0)
        v = prenilpotent_pair(A2, a, a.negate())
        assert isinstance(v, NotPrenilpotent)

    def test_finite_non_opposite(self):
        a, b = simple_real_root(A2, 0), simple_real_root(A2, 1)
        v = prenilpotent_pair(A2, a, b.negate())
        assert isinstance(v, Prenilpotent)
        for root in (a.root, -b.root):
            assert v.to_positive.act_root(root).is_positive()
            assert v.to_negative.act_root(root).is_negative()

    def test_affine_opposite_finite_parts(self):
        a1 = simple_real_root(AFF, 1)
        a0 = simple_real_root(AFF, 0)  # = delta - alpha
        v = prenilpotent_pair(AFF, a1, a0)
        assert isinstance(v, NotPrenilpotent)

    def test_affine_same_finite_part(self):
        rs = enumerate_real_roots(AFF, 9)
        a = simple_real_root(AFF, 1)
        b = rs.find(RootVector((2, 3)))  # alpha + 2 delta
        v = prenilpotent_pair(AFF, a, b)
        assert isinstance(v, Prenilpotent)

    def test_rank2_exactly_one(self):
        roots = list(enumerate_real_roots(R15, 9).roots)
        for x, y in itertools.combinations(roots, 2):
            one = isinstance(prenilpotent_pair(R15, x, y), Prenilpotent)
            other = isinstance(prenilpotent_pair(R15, x, y.negate()), Prenilpotent)
            assert one != other

    def test_closed_forms_match_search(self):
        for data in (A2, AFF, R15):
            pos = list(enumerate_real_roots(data, 5).roots)
            signed = pos + [r.negate() for r in pos]
            for x, y in itertools.combinations(signed, 2):
                closed = prenilpotent_pair(data, x, y, 8)
                searched = search_prenilpotent(data, x, y, 8)
                assert isinstance(closed, Prenilpotent) == isinstance(searched, Prenilpotent)


class TestClosedInterval:
    def test_a2(self):
        a, b = simple_real_root(A2, 0), simple_real_root(A2, 1)
        got = closed_interval(A2, a, b)
        assert [r.coeffs for r in got] == [(0, 1), (1, 0), (1, 1)]

    def test_same_root(self):
        a = simple_real_root(A2, 0)
        assert closed_interval(A2, a, a) == [a.root]

    def test_affine_gap(self):
        rs = enumerate_real_roots(AFF, 9)
        a = simple_real_root(AFF, 1)
        b = rs.find(RootVector((2, 3)))
        got = closed_interval(AFF, a, b)
        assert sorted(r.coeffs for r in got) == [(0, 1), (2, 3)]

    def test_rejects_non_prenilpotent(self):
        a = simple_real_root(A2, 0)
        with pytest.raises(PairNotPrenilpotent):
            closed_interval(A2, a, a.negate())

    def test_interval_roots_are_real(self):
        # every non-endpoint member must be a genuine positive combination
        a, b = simple_real_root(A2, 0), simple_real_root(A2, 1)
        coords = enumerate_real_roots(A2, 3).coords_set()
        for r in closed_interval(A2, a, b):
            assert r.coeffs in coords
