"""Divided-power exponential coefficients and the completed unipotent group."""

import random
from fractions import Fraction

import pytest

from masure.loop import (
    GF,
    QQ,
    BadConstantTerm,
    LoopError,
    ModulusMismatch,
    NotInUmaPlus,
    SeriesMatrix,
    SeriesRing,
    TruncSeries,
    check_binomial_specialization,
    check_convolution,
    exp_imaginary,
    gm_from_generating_function,
    gm_poly,
    matrix_identity,
    one_minus_rtn,
    poly_str,
    poly_total_degree,
    product_from_params,
    series,
    series_one,
    series_to_product_params,
    series_zero,
    uma_factorize,
    uma_membership,
)

R2 = SeriesRing(GF, 2)
R3 = SeriesRing(GF, 3)
RQ = SeriesRing(QQ)

HALF = Fraction(1, 2)


class TestPolynomials:
    def test_first_values(self):
        assert gm_poly(0) == {(): 1}
        assert gm_poly(1) == {(1,): 1}
        assert gm_poly(2) == {(2,): HALF, (0, 1): HALF}
        assert gm_poly(3) == {(3,): Fraction(1, 6), (1, 1): HALF,
                              (0, 0, 1): Fraction(1, 3)}

    def test_recurrence_equals_generating_function(self):
        for n in range(13):
            assert gm_poly(n) == gm_from_generating_function(n)

    def test_weighted_homogeneity(self):
        for n in range(1, 10):
            for e in gm_poly(n):
                assert sum((j + 1) * k for j, k in enumerate(e)) == n

    def test_binomial_specialization(self):
        assert all(check_binomial_specialization(n) for n in range(9))

    def test_binomial_value_n2(self):
        # L_2 at Z_j = Z: Z(Z+1)/2
        spec = {}
        for e, c in gm_poly(2).items():
            d = poly_total_degree(e)
            spec[d] = spec.get(d, Fraction(0)) + c
        assert spec == {1: HALF, 2: HALF}

    def test_convolution(self):
        assert all(check_convolution(n) for n in range(7))

    def test_no_constant_term(self):
        for n in range(1, 13):
            assert () not in gm_poly(n)

    def test_leading_term(self):
        import math

        for n in range(1, 13):
            p = gm_poly(n)
            lead = tuple([n])
            assert p[lead] == Fraction(1, math.factorial(n))
            for e in p:
                if e != lead:
                    assert poly_total_degree(e) <= n - 1

    def test_printing(self):
        assert poly_str(gm_poly(1)) == "Z1"
        assert "Z2" in poly_str(gm_poly(2))


class TestTruncSeries:
    def test_arithmetic(self):
        a = series(R2, (1, 1), 4)
        b = series(R2, (1, 0, 1), 4)
        assert (a * b).coeffs == (1, 1, 1, 1)
        assert (a + b).coeffs == (0, 1, 1, 0)

    def test_inverse(self):
        a = series(R3, (1, 2, 0, 1), 6)
        assert (a * a.inverse()) == series_one(R3, 6)
        aq = series(RQ, (Fraction(1), Fraction(1, 2)), 5)
        assert aq * aq.inverse() == series_one(RQ, 5)

    def test_modulus_mismatch(self):
        with pytest.raises(ModulusMismatch):
            series(R2, (1,), 3) + series(R2, (1,), 4)

    def test_nonunit_inverse(self):
        with pytest.raises(ZeroDivisionError):
            series(R2, (0, 1), 3).inverse()

    def test_bad_modulus(self):
        with pytest.raises(LoopError):
            series(R2, (1,), 0)


class TestExpImaginary:
    def test_zero_is_identity(self):
        m = exp_imaginary(R2, 0, 1, 5)
        ident = matrix_identity(R2, 5)
        assert (m.a, m.b, m.c, m.d) == (ident.a, ident.b, ident.c, ident.d)

    def test_char2_geometric(self):
        m = exp_imaginary(R2, 1, 1, 4)
        # oracle: 1/(1-t) mod t^4 = 1 + t + t^2 + t^3 over F_2
        assert m.a.coeffs == (1, 1, 1, 1)
        assert m.d.coeffs == (1, 1, 0, 0)

    def test_group_like_product(self):
        a = exp_imaginary(RQ, Fraction(2), 1, 6)
        b = exp_imaginary(RQ, Fraction(-1, 2), 1, 6)
        prod = a * b
        # stays in the imaginary subgroup: diagonal, entries 1 mod t
        assert prod.b == series_zero(RQ, 6) and prod.c == series_zero(RQ, 6)
        assert prod.a.congruent_one_mod_t() and prod.d.congruent_one_mod_t()
        assert prod.d == one_minus_rtn(RQ, Fraction(2), 1, 6) * \
            one_minus_rtn(RQ, Fraction(-1, 2), 1, 6)

    def test_bad_direction(self):
        with pytest.raises(LoopError):
            exp_imaginary(R2, 1, 0, 4)


class TestProductParams:
    def test_one(self):
        assert series_to_product_params(series_one(R2, 5)) == (0, 0, 0, 0)

    def test_one_minus_t(self):
        f = series(RQ, (1, -1), 5)
        assert series_to_product_params(f) == (1, 0, 0, 0)

    def test_char2_one_plus_t(self):
        f = series(R2, (1, 1), 4)
        params = series_to_product_params(f)
        assert product_from_params(R2, params, 4) == f

    def test_bijection_roundtrip(self):
        rng = random.Random(40)
        for ring in (R2, R3, RQ):
            for _ in range(60):
                n = 10
                if ring.kind == GF:
                    cs = [rng.randrange(ring.p) for _ in range(n)]
                else:
                    cs = [Fraction(rng.randint(-5, 5), rng.randint(1, 4))
                          for _ in range(n)]
                cs[0] = 1
                f = series(ring, cs, n)
                params = series_to_product_params(f)
                assert product_from_params(ring, params, n) == f
                params2 = tuple(
                    rng.randrange(ring.p) if ring.kind == GF
                    else Fraction(rng.randint(-3, 3), rng.randint(1, 3))
                    for _ in range(n - 1))
                g = product_from_params(ring, params2, n)
                assert series_to_product_params(g) == params2

    def test_bad_constant_term(self):
        with pytest.raises(BadConstantTerm):
            series_to_product_params(series(R2, (0, 1), 4))


class TestUma:
    def test_identity_member(self):
        m = matrix_identity(R2, 6)
        assert uma_membership(m)
        low, diag, up = uma_factorize(m)
        ident = matrix_identity(R2, 6)
        assert (low.c, diag.a, up.b) == (ident.b, ident.a, ident.b)

    def test_exp_imaginary_factors_trivially(self):
        m = exp_imaginary(RQ, Fraction(3), 2, 8)
        low, diag, up = uma_factorize(m)
        assert low.c == series_zero(RQ, 8)
        assert up.b == series_zero(RQ, 8)
        assert diag.a == m.a

    def test_pattern_rejection(self):
        one, zero = series_one(R2, 4), series_zero(R2, 4)
        bad = SeriesMatrix(one, zero, series(R2, (1,), 4), one)  # c not in tR
        assert not uma_membership(bad)
        with pytest.raises(NotInUmaPlus):
            uma_factorize(bad)

    def test_det_enforced(self):
        one = series_one(R2, 4)
        with pytest.raises(LoopError):
            SeriesMatrix(one, one, series(R2, (0, 1), 4), one)

    def test_factor_roundtrip_unique(self):
        rng = random.Random(41)
        for ring in (R2, RQ):
            for _ in range(40):
                n = 12
                one, zero = series_one(ring, n), series_zero(ring, n)

                def rnd(unit=False, in_t=False):
                    if ring.kind == GF:
                        cs = [rng.randrange(ring.p) for _ in range(n)]
                    else:
                        cs = [Fraction(rng.randint(-3, 3), rng.randint(1, 3))
                              for _ in range(n)]
                    if unit:
                        cs[0] = 1
                    if in_t:
                        cs[0] = 0
                    return series(ring, cs, n)

                low = SeriesMatrix(one, zero, rnd(in_t=True), one)
                da = rnd(unit=True)
                diag = SeriesMatrix(da, zero, zero, da.inverse())
                up = SeriesMatrix(one, rnd(), zero, one)
                m = low * diag * up
                l2, d2, u2 = uma_factorize(m)
                assert (l2.c, d2.a, d2.d, u2.b) == (low.c, diag.a, diag.d, up.b)
