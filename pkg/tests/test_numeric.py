import math
from fractions import Fraction as F

import mpmath
import pytest

from zetanorm.combinatorics import MzvIndex
from zetanorm.numeric import (
    ConvergenceError,
    PrecisionContext,
    cdf_Zinf,
    cdf_Zn,
    cross_moment,
    eval_zeta_poly,
    kolbig_check,
    mc_norm_moment,
    mzv_numeric,
    mzv_numeric_with_error,
    quad_I,
    quad_I_xform,
    quad_moment_indep2,
    quad_moment_pair,
    snp_quadrature,
    sup_cdf_distance,
    zeta_value,
)
from zetanorm.zeta_algebra import ZetaPolynomial, reduce_height_one

CTX = PrecisionContext()
mp30 = mpmath.MPContext()
mp30.dps = 40


def z(k):
    return mp30.zeta(k)


def test_context_validation():
    with pytest.raises(ValueError):
        PrecisionContext(digits=10)
    with pytest.raises(ValueError):
        PrecisionContext(sum_terms=999)
    with pytest.raises(ValueError):
        PrecisionContext(quad_rel_tol=0)
    with pytest.raises(ValueError):
        PrecisionContext(rng_seed=-1)


@pytest.mark.parametrize("k", range(2, 16))
def test_zeta_value_against_mpmath(k):
    assert abs(zeta_value(k, CTX) - z(k)) < 1e-29
    hi = PrecisionContext(digits=60)
    mp60 = mpmath.MPContext()
    mp60.dps = 70
    assert abs(zeta_value(k, hi) - mp60.zeta(k)) < mp60.mpf(10) ** -58


def test_zeta_value_examples():
    assert mpmath.nstr(zeta_value(2, CTX), 11, strip_zeros=False) == "1.6449340668"
    assert mpmath.nstr(zeta_value(3, CTX), 11, strip_zeros=False) == "1.2020569032"
    assert mpmath.nstr(zeta_value(6, CTX), 11, strip_zeros=False) == "1.0173430620"
    with pytest.raises(ValueError):
        zeta_value(1, CTX)


def test_zeta_value_precision_ceiling():
    with pytest.raises(ConvergenceError):
        zeta_value(3, PrecisionContext(digits=600))


def test_eval_zeta_poly():
    assert abs(eval_zeta_poly(ZetaPolynomial.parse("1/8*z2"), CTX) - 0.2056167584) < 1e-10
    assert abs(eval_zeta_poly(ZetaPolynomial.parse("1/8*z3"), CTX) - 0.1502571129) < 1e-10
    assert eval_zeta_poly(ZetaPolynomial.constant(F(3, 4)), CTX) == mpmath.mpf(0.75)


def test_mzv_numeric_examples():
    assert abs(mzv_numeric(MzvIndex((2,), True), CTX) + mp30.pi**2 / 12) < 1e-13
    assert abs(mzv_numeric(MzvIndex((2, 1), True), CTX) - z(3) / 8) < 1e-13
    lhs = mzv_numeric(MzvIndex((4, 1), True), CTX)
    assert abs(lhs - (-F(29, 32) * z(5) + z(2) * z(3) / 2)) < 1e-13
    lhs = mzv_numeric(MzvIndex((2, 1, 1), True), CTX)
    assert abs(lhs - (-z(4) / 16 + mzv_numeric(MzvIndex((3, 1), True), CTX) / 2)) < 1e-13


@pytest.mark.parametrize("n", range(2, 11))
def test_alternating_single(n):
    assert abs(mzv_numeric(MzvIndex((n,), True), CTX) - (2 ** (1 - n) - 1) * z(n)) < 1e-9


def test_alternating_one():
    assert abs(mzv_numeric(MzvIndex((1,), True), CTX) + math.log(2)) < 1e-9


def test_mzv_numeric_rejects_divergent():
    with pytest.raises(ValueError):
        mzv_numeric(MzvIndex((1, 1)), CTX)


def test_mzv_error_estimate_and_tolerance():
    _, err = mzv_numeric_with_error(MzvIndex((3, 1, 1)), CTX)
    assert 0 < err < 1e-12
    with pytest.raises(ConvergenceError):
        mzv_numeric(MzvIndex((2, 1, 1)), PrecisionContext(sum_terms=1000, mzv_tol=1e-30))


@pytest.mark.parametrize("idx", [MzvIndex((2, 1)), MzvIndex((3, 1, 1)), MzvIndex((2, 1), True), MzvIndex((5, 1, 1, 1), True)])
def test_mzv_truncation_independence(idx):
    # the tail treatment makes the value insensitive to the truncation point
    a = mzv_numeric(idx, PrecisionContext(sum_terms=5000))
    b = mzv_numeric(idx, CTX)
    assert abs(a - b) < 1e-11


@pytest.mark.parametrize("w", range(2, 10))
def test_reduction_oracle(w):
    for q in range(2, w + 1):
        val = eval_zeta_poly(reduce_height_one(q, w - q), CTX)
        assert abs(val - mzv_numeric(MzvIndex.height_one(q, w - q), CTX)) < 1e-7


def test_snp_examples():
    assert abs(snp_quadrature(1, 1, -1, CTX) + mp30.pi**2 / 12) < 1e-12
    assert abs(snp_quadrature(1, 1, 1, CTX) - z(2)) < 1e-12
    assert abs(snp_quadrature(3, 1, -1, CTX) + F(7, 8) * z(4)) < 1e-12


@pytest.mark.parametrize("n,p", [(n, p) for n in range(1, 6) for p in range(1, 7 - n)])
def test_snp_against_nested_sums(n, p):
    for zz, bar in ((1, False), (-1, True)):
        ref = mzv_numeric(MzvIndex.height_one(n + 1, p - 1, bar=bar), CTX)
        assert abs(snp_quadrature(n, p, zz, CTX) - ref) < 1e-6
    assert kolbig_check(n, p, CTX) < 1e-6


def test_snp_domain():
    with pytest.raises(ValueError):
        snp_quadrature(0, 1, 1, CTX)
    with pytest.raises(ValueError):
        snp_quadrature(1, 1, 2, CTX)


def test_quad_I_basic():
    assert abs(quad_I(1, CTX) - 1) < 1e-25
    vals = [quad_I(n, CTX) for n in (2, 4, 8, 16, 32)]
    assert all(v >= 0.75 for v in vals)
    assert all(a > b for a, b in zip(vals, vals[1:]))
    # n = 2 against an independent mpmath integration of the x-form
    exact = mp30.quad(lambda x: mp30.sqrt(x**2 + (1 - x) ** 2), [0, 0.5, 1])
    assert abs(quad_I(2, CTX) - exact) < 1e-25


@pytest.mark.parametrize("n", [2, 5, 10, 50, 100])
def test_quad_forms_agree(n):
    assert abs(quad_I(n, CTX) - quad_I_xform(n, CTX)) < 10 * CTX.quad_rel_tol


def test_quad_moment_pair():
    assert abs(quad_moment_pair(10, 1, CTX) - quad_I(10, CTX)) < 1e-10
    approx = F(7, 12) + mp30.pi**2 / 48 / 40**2
    assert abs(quad_moment_pair(40, 2, CTX) - approx) < 5 / 40**3
    # fractional s, against a direct x-form integral
    direct = 2 * mp30.quad(lambda x: (x**20 + (1 - x) ** 20) ** (mp30.mpf(1) / 40), [0.5, 0.75, 1])
    assert abs(quad_moment_pair(20, F(1, 2), CTX) - direct) < 1e-20


def test_quad_moment_indep2():
    assert abs(quad_moment_indep2(10**6, 1, CTX) - mpmath.mpf(2) / 3) < 1e-5
    assert abs(quad_moment_indep2(20, 1, CTX) - F(2, 3) * (1 + mp30.pi**2 / 4800)) < 1e-4
    assert abs(quad_moment_indep2(20, 2, CTX) - F(1, 2) * (1 + 2 * mp30.pi**2 / 4800)) < 1e-4
    # low-precision 2-d quadrature of E((U1^n + U2^n)^(s/n))
    mp15 = mpmath.MPContext()
    mp15.dps = 15
    n = 6
    two_d = mp15.quad(lambda x, y: (x**n + y**n) ** (mp15.mpf(2) / n), [0, 1], [0, 1])
    assert abs(quad_moment_indep2(n, 2, CTX) - two_d) < 1e-10


def test_cross_moment():
    assert abs(cross_moment(40, CTX) - F(7, 12)) < 2 / 40**2
    d20 = cross_moment(20, CTX) - F(7, 12)
    d40 = cross_moment(40, CTX) - F(7, 12)
    assert 3 < d20 / d40 < 5
    assert all(cross_moment(n, CTX) >= mp30.mpf(7) / 12 for n in (2, 5, 10, 80))


def test_quadrature_domain():
    with pytest.raises(ValueError):
        quad_I(0, CTX)
    with pytest.raises(ValueError):
        quad_moment_pair(10, 0, CTX)


def test_mc_determinism_across_workers():
    a = mc_norm_moment(3, 20, 1, 200_000, CTX, workers=1)
    b = mc_norm_moment(3, 20, 1, 200_000, CTX, workers=3)
    assert a == b
    c = mc_norm_moment(3, 20, 1, 200_000, PrecisionContext(rng_seed=7))
    assert c != a


def test_mc_examples():
    est, se = mc_norm_moment(3, 10**6, 1, 10**6, CTX)
    assert abs(est - 0.75) < 4 * se
    est, se = mc_norm_moment(3, 20, 1, 10**6, CTX)
    assert abs(est - 0.753084) < 4 * se
    est, se = mc_norm_moment(2, 20, 2, 10**6, CTX)
    assert abs(est - float(quad_moment_indep2(20, 2, CTX))) < 4 * se


def test_mc_domain():
    with pytest.raises(ValueError):
        mc_norm_moment(1, 20, 1, 10**4, CTX)
    with pytest.raises(ValueError):
        mc_norm_moment(2, 20, 1, 10, CTX)


def test_cdf_examples():
    for n in (2, 10, 100):
        assert cdf_Zn(1.0, n) == 1.0
        assert cdf_Zn(2 ** (1 / n - 1), n) == 0.0
        assert cdf_Zn(0.3, n) == 0.0
    assert cdf_Zinf(0.8) == pytest.approx(0.6)
    assert cdf_Zinf(0.2) == 0 and cdf_Zinf(1.5) == 1


def test_cdf_matches_empirical():
    # F_n(z) = P(g(U) <= z); invert on a fine grid of U
    n = 5
    us = [(i + 0.5) / 20000 for i in range(20000)]
    g = sorted((u**n + (1 - u) ** n) ** (1 / n) for u in us)
    for q in (0.1, 0.4, 0.8):
        zq = g[int(q * len(g))]
        assert abs(cdf_Zn(zq, n) - q) < 1e-3


def test_sup_cdf_distance():
    reports = [sup_cdf_distance(n) for n in (16, 32, 64)]
    for r in reports:
        assert 0 <= r.sup_distance <= 1
        assert r.max_signed <= 0.0
        assert r.sup_distance == pytest.approx(2 ** (1 / r.n) - 1, rel=1e-9)
    scaled = [r.sup_distance * r.n for r in reports]
    assert max(scaled) / min(scaled) <= 2
    assert scaled[-1] == pytest.approx(math.log(2), rel=0.01)
    with pytest.raises(ValueError):
        sup_cdf_distance(10, grid_size=8)
