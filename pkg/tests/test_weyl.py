"""Weyl words, lengths, inversion sets, real-root enumeration."""

import itertools

from masure.kmdata import (
    RootVector,
    affine_sl2_data,
    finite_a2_data,
    rank2_data,
    simple_root_vector,
)
from masure.weyl import (
    all_elements_up_to_length,
    brute_inversion_set,
    enumerate_real_roots,
    inversion_set,
    length_and_reduce,
    reflect_vector,
    reflection,
    simple_real_root,
    simple_reflect,
    weyl_element,
)

AFF = affine_sl2_data()
A2 = finite_a2_data()
R15 = rank2_data(1, 5)


class TestSimpleReflect:
    def test_negates_own_coroot(self):
        v = AFF.simple_coroots[1]
        assert simple_reflect(AFF, 1, v) == tuple(-c for c in v)

    def test_fixes_wall(self):
        # alpha_1 = (2,0,0) vanishes on (0,1,0)
        v = (0, 1, 0)
        assert simple_reflect(AFF, 1, v) == v

    def test_involution(self):
        v = (3, -2, 5)
        assert simple_reflect(AFF, 1, simple_reflect(AFF, 1, v)) == tuple(map(int, v))


class TestLengthAndReduce:
    def test_square_is_identity(self):
        assert length_and_reduce(AFF, (1, 1)) == (0, ())

    def test_infinite_dihedral_word(self):
        l, red = length_and_reduce(AFF, (1, 0, 1, 0))
        assert (l, red) == (4, (1, 0, 1, 0))
        # oracle: the brute-force inversion count over roots of height <= 9
        w = weyl_element(AFF, (1, 0, 1, 0))
        assert len(brute_inversion_set(AFF, w, 9)) == 4

    def test_braid_relation_a2(self):
        w1 = weyl_element(A2, (1, 0, 1))
        w2 = weyl_element(A2, (0, 1, 0))
        assert w1.length() == 3
        assert w1.y_mat == w2.y_mat

    def test_descent_criterion(self):
        # l(r_i w) < l(w) iff w^{-1}.alpha_i is a negative root
        for w in all_elements_up_to_length(AFF, 5):
            for i in range(2):
                lower = length_and_reduce(AFF, (i,) + w.word)[0] < w.length()
                image = w.inverse().act_root(simple_root_vector(2, i))
                assert lower == image.is_negative()


class TestInversionSets:
    def test_identity(self):
        assert inversion_set(AFF, weyl_element(AFF, ())) == []

    def test_r0_r1(self):
        w = weyl_element(AFF, (0, 1))
        got = {r.root.coeffs for r in inversion_set(AFF, w)}
        assert got == {(0, 1), (1, 2)}  # alpha_1 and alpha_0 + 2 alpha_1
        # both roots indeed map negative
        for r in inversion_set(AFF, w):
            assert w.act_root(r.root).is_negative()

    def test_longest_a2(self):
        w = weyl_element(A2, (0, 1, 0))
        got = {r.root.coeffs for r in inversion_set(A2, w)}
        assert got == {(1, 0), (0, 1), (1, 1)}

    def test_matches_brute_force(self):
        for data in (AFF, A2, R15):
            for w in all_elements_up_to_length(data, 6):
                inv = inversion_set(data, w)
                assert len(inv) == w.length()
                low = {r.root.coeffs for r in inv if r.height() <= 40}
                assert low == brute_inversion_set(data, w, 40)

    def test_witnesses_valid(self):
        w = weyl_element(AFF, (0, 1, 0, 1))
        for r in inversion_set(AFF, w):
            u = weyl_element(AFF, r.witness_word)
            assert u.act_root(simple_root_vector(2, r.witness_index)) == r.root


class TestEnumeration:
    def test_affine_h5(self):
        rs = enumerate_real_roots(AFF, 5)
        assert rs.coords_set() == {(0, 1), (1, 0), (1, 2), (2, 1), (2, 3), (3, 2)}
        assert {h: len(v) for h, v in rs.by_height().items()} == {1: 2, 3: 2, 5: 2}

    def test_affine_form(self):
        for r in enumerate_real_roots(AFF, 21).roots:
            m, n = r.root.coeffs
            assert abs(m - n) == 1

    def test_a2(self):
        assert enumerate_real_roots(A2, 2).coords_set() == {(1, 0), (0, 1), (1, 1)}

    def test_height_one_is_simple(self):
        for data in (AFF, A2, R15):
            rs = enumerate_real_roots(data, 1)
            assert rs.coords_set() == {simple_root_vector(data.n, i).coeffs
                                       for i in range(data.n)}

    def test_no_duplicates(self):
        rs = enumerate_real_roots(R15, 20)
        assert len(rs.roots) == len(rs.coords_set())

    def test_witness_reflection_negates(self):
        for r in enumerate_real_roots(AFF, 9).roots:
            w = reflection(AFF, r)
            assert w.act_root(r.root) == -r.root

    def test_closure_under_simple_reflections(self):
        bound = 9
        for data in (AFF, R15):
            rs = enumerate_real_roots(data, bound)
            coords = rs.coords_set()
            for r in rs.roots:
                for i in range(data.n):
                    img = weyl_element(data, (i,)).act_root(r.root)
                    if img.is_positive() and img.height() <= bound:
                        assert img.coeffs in coords
                    elif img.is_negative():
                        assert (-img).coeffs in coords


class TestReflection:
    def test_simple(self):
        r = reflection(AFF, simple_real_root(AFF, 1))
        assert r.word == (1,)

    def test_conjugate(self):
        # alpha_0 + 2 alpha_1 = r_1(alpha_0): reflection is r_1 r_0 r_1
        rs = enumerate_real_roots(AFF, 3)
        alpha = rs.find(RootVector((1, 2)))
        w = reflection(AFF, alpha)
        assert w.y_mat == weyl_element(AFF, (1, 0, 1)).y_mat
        # fixes the wall ker(alpha); covector is (2, 0, 1)
        assert AFF.root_covector(alpha.root) == (2, 0, 1)
        for kernel_vec in ((1, 0, -2), (0, 1, 0)):
            assert AFF.eval_root(alpha.root, kernel_vec) == 0
            assert w.act_y(kernel_vec) == kernel_vec

    def test_involution(self):
        for alpha in enumerate_real_roots(R15, 9).roots:
            w = reflection(R15, alpha)
            assert (w * w).is_identity()

    def test_displayed_formula(self):
        for alpha in enumerate_real_roots(AFF, 7).roots:
            w = reflection(AFF, alpha)
            for v in [(1, 2, 3), (0, 1, 0), (-2, 5, 1)]:
                assert w.act_y(v) == reflect_vector(AFF, alpha, v)


def test_group_elements_counts():
    # infinite dihedral: 1 identity + 2 per length
    els = all_elements_up_to_length(AFF, 8)
    assert len(els) == 17
    assert sorted(w.length() for w in els) == sorted([0] + [l for l in range(1, 9) for _ in range(2)])
