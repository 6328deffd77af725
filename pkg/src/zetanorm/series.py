"""Asymptotic-expansion coefficients of ``I(n)`` and of the moments ``E(Z_n^s)``.

``I(n) = int_0^1 (x^n + (1-x)^n)^(1/n) dx = sum_p I_p n^-p`` with ``I_0 = 3/4``,
``I_1 = 0``.  Each ``I_p`` (``p >= 2``) is available in two bases:

* :func:`ip_alt_form` -- a rational combination of alternating MZVs
  ``zeta(bar j, {1}_(p-j))`` weighted by ``a_n = E_(2n+1)(0)/2``;
* :func:`ip_poly_form` -- an exact polynomial in single zeta values, obtained
  from height-one values ``zeta(k+1, {1}_(p-k-1))`` with weights ``rho_k``.

Moments of ``Z_n = ||(U, 1-U)||_n`` come from :func:`moment_coeff_int`
(integer ``s``, via the ``gamma`` family) and :func:`moment_coeff_real`
(any ``s > 0``, via partial Bell polynomials).  The real-``s`` weights carry
a factor ``2^-s``; without it the two routes disagree already at ``s = 1``.

For ``r`` independent uniforms, ``E(Z_n^s) -> r/(r+s)`` (the ``Beta(r, 1)``
moment).  This prefactor is used throughout; ``r/(r-1+s)`` would give
``E(max(U1, U2)) = 1`` at ``s = 1``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Union

from .combinatorics import (
    MzvIndex,
    WeightedStarIndex,
    a_coeff,
    bell_partial,
    euler_at_zero,
    falling_factorial,
    gamma_coeffs,
    truncated_mzv,
    truncated_star,
    truncated_star_weighted,
)
from .numeric import PrecisionContext, DEFAULT_CONTEXT, eval_zeta_poly, mp_context, mzv_numeric
from .zeta_algebra import FormalCombination, ZetaPolynomial, reduce_height_one

__all__ = [
    "PRINTED_TABLE_DEPTH",
    "AsymptoticSeries",
    "MomentSpec",
    "printed_table",
    "reference_table",
    "TABLE_ERRATA",
    "ip_alt_form",
    "poly_weight",
    "rho",
    "ip_poly_form",
    "i_series",
    "moment_constant",
    "moment_coeff_int_form",
    "moment_coeff_int",
    "moment_coeff_real_weights",
    "moment_coeff_real",
    "moment_series",
    "r2_moment_form",
    "r2_moment_coeff",
    "r2_moment",
    "rdim_prefactor",
    "rdim_leading",
    "eval_truncated",
    "eval_coefficient",
    "r3_bracket",
    "r3_bracket_direct",
    "r3_summand",
]

Number = Union[int, Fraction, float]

PRINTED_TABLE_DEPTH = 12

# I_2 .. I_12 exactly as published, even values kept as single factors
_PRINTED = {
    2: "1/8*z2",
    3: "1/8*z3",
    4: "-3/32*z4",
    5: "-1/8*z2*z3",
    6: "83/256*z6 - 1/16*z3^2",
    7: "3/16*z7 + 27/64*z3*z4 + 3/16*z2*z5",
    8: "-2533/1536*z8 + 3/16*z3*z5 + 5/32*z2*z3^2",
    9: "-5/6*z9 - 289/128*z3*z6 - 135/64*z4*z5 - 9/8*z2*z7 + 5/96*z3^3",
    10: "293937/20480*z10 - 87/32*z3*z7 - 9/16*z5^2 - 81/64*z3^2*z4 - 21/16*z2*z3*z5",
    11: (
        "63/8*z11 + 58007/3072*z3*z8 + 5187/256*z5*z6 + 135/8*z4*z7 + 115/12*z2*z9"
        " - 13/48*z2*z3^3 - 21/32*z3^2*z5"
    ),
    12: (
        "-2095281645/11321344*z12 + 115/12*z3*z9 + 81/8*z5*z7 + 5765/512*z3^2*z6"
        " + 1323/64*z3*z4*z5 + 45/4*z2*z3*z7 + 45/8*z2*z5^2 - 13/192*z3^4"
    ),
}

# (p, monomial) -> (printed coefficient, value implied by both expansions)
TABLE_ERRATA = {
    (10, (3, 7)): (Fraction(-87, 32), Fraction(-9, 8)),
    (11, (4, 7)): (Fraction(135, 8), Fraction(297, 16)),
}


def printed_table() -> dict[int, ZetaPolynomial]:
    """The published ``I_2 .. I_12``, verbatim."""
    return {p: ZetaPolynomial.parse(t) for p, t in _PRINTED.items()}


def reference_table() -> dict[int, ZetaPolynomial]:
    """Published table with the entries in :data:`TABLE_ERRATA` replaced.

    The two replaced coefficients are confirmed numerically: the alternating
    route agrees with the corrected forms to ~1e-14, and differs from the
    printed ones by ~1.9 (``I_10``) and ~1.8 (``I_11``).
    """
    out = printed_table()
    for (p, mono), (printed, fixed) in TABLE_ERRATA.items():
        out[p] = out[p] + ZetaPolynomial({mono: fixed - printed})
    return out


@dataclass
class AsymptoticSeries:
    """Coefficients of ``n^-p``, ``p = 0 .. P``.

    Entries are ``ZetaPolynomial`` (exact) or plain numbers.
    """

    coeffs: list
    meta: str = ""
    params: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, p):
        return self.coeffs[p]

    def __len__(self):
        return len(self.coeffs)

    def to_json(self, ctx: PrecisionContext | None = None) -> dict:
        ctx = ctx or DEFAULT_CONTEXT
        out = {}
        for p, c in enumerate(self.coeffs):
            entry = {"decimal": _decimal(eval_coefficient(c, ctx), ctx)}
            if isinstance(c, ZetaPolynomial):
                entry["exact"] = c.to_text()
            elif isinstance(c, (int, Fraction)):
                entry["exact"] = str(Fraction(c))
            out[str(p)] = entry
        return out


def _decimal(x, ctx: PrecisionContext) -> str:
    import mpmath

    return mpmath.nstr(x, ctx.digits, strip_zeros=False) if not isinstance(x, str) else x


@dataclass(frozen=True)
class MomentSpec:
    s: Number
    r: int = 1
    model: str = "dependent-pair"

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError("moment order s must be positive")
        if self.model not in ("dependent-pair", "independent"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.model == "independent" and self.r < 2:
            raise ValueError("independent model needs r >= 2")
        if self.model == "dependent-pair" and self.r != 1:
            raise ValueError("dependent-pair model is encoded by r = 1")


# --------------------------------------------------------------------------
# I_p


def _check_p(p: int) -> None:
    if p < 2:
        raise ValueError(f"p must be >= 2, got {p}")


def ip_alt_form(p: int) -> FormalCombination:
    """``I_p = (-1)^p sum_{j=2}^p a_floor((j-1)/2) zeta(bar j, {1}_(p-j))``."""
    _check_p(p)
    sign = (-1) ** p
    return FormalCombination(
        (sign * a_coeff((j - 1) // 2), MzvIndex.height_one(j, p - j, bar=True)) for j in range(2, p + 1)
    )


def poly_weight(p: int, k: int) -> Fraction:
    """``w(p, k) = sum_{j<k} C(k-1, j) a_floor((p-1-j)/2)``."""
    _check_p(p)
    if not 1 <= k <= p - 1:
        raise ValueError(f"k must lie in 1..{p - 1}")
    return sum((comb(k - 1, j) * a_coeff((p - 1 - j) // 2) for j in range(k)), Fraction(0))


def rho(p: int, k: int) -> Fraction:
    """Weight of ``zeta(k+1, {1}_(p-k-1))`` in ``I_p``: ``(-1)^(p+k) w(p, k) / 2``."""
    return (-1) ** (p + k) * poly_weight(p, k) / 2


@functools.lru_cache(maxsize=None)
def ip_poly_form(p: int) -> ZetaPolynomial:
    """``I_p`` as an even-normalized rational polynomial in single zeta values."""
    _check_p(p)
    out = ZetaPolynomial()
    for k in range(1, p):
        out = out + reduce_height_one(k + 1, p - k - 1).scale(rho(p, k))
    return out


def i_series(P: int) -> AsymptoticSeries:
    if P < 0:
        raise ValueError("P must be >= 0")
    coeffs: list = [ZetaPolynomial.constant(Fraction(3, 4)), ZetaPolynomial()][: P + 1]
    coeffs += [ip_poly_form(p) for p in range(2, P + 1)]
    return AsymptoticSeries(coeffs, meta="I(n) = int_0^1 (x^n + (1-x)^n)^(1/n) dx", params={"P": P})


def eval_coefficient(c, ctx: PrecisionContext | None = None):
    ctx = ctx or DEFAULT_CONTEXT
    mp = mp_context(ctx.digits)
    if isinstance(c, ZetaPolynomial):
        return eval_zeta_poly(c, ctx)
    if isinstance(c, FormalCombination):
        return c.evaluate(lambda idx: mzv_numeric(idx, ctx), one=mp.mpf(1))
    if isinstance(c, Fraction):
        return mp.mpf(c.numerator) / c.denominator
    return mp.mpf(c)


def eval_truncated(series: AsymptoticSeries, n, P: int | None = None, ctx: PrecisionContext | None = None):
    """``sum_{p <= P} coeff_p / n^p``."""
    ctx = ctx or DEFAULT_CONTEXT
    if P is None:
        P = series.order
    if not 0 <= P <= series.order:
        raise ValueError(f"P must lie in 0..{series.order}")
    mp = mp_context(ctx.digits)
    x = mp.mpf(n)
    if x <= 0:
        raise ValueError("n must be positive")
    return mp.fsum(eval_coefficient(series.coeffs[p], ctx) / x**p for p in range(P + 1))


# --------------------------------------------------------------------------
# moments of Z_n = ||(U, 1-U)||_n


def _exact(s) -> Fraction | None:
    if isinstance(s, bool):
        raise TypeError("s must be a number")
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s)
    if isinstance(s, float) and s.is_integer():
        return Fraction(int(s))
    return None


def moment_constant(s, ctx: PrecisionContext | None = None):
    """``E(Z_inf^s) = 2 (1 - 2^-(s+1)) / (s+1)``; exact for integer ``s``."""
    q = _exact(s)
    if q is not None and q.denominator == 1:
        return 2 * (1 - Fraction(1, 2 ** (int(q) + 1))) / (q + 1)
    mp = mp_context((ctx or DEFAULT_CONTEXT).digits)
    x = mp.mpf(q.numerator) / q.denominator if q is not None else mp.mpf(s)
    return 2 * (1 - mp.power(2, -(x + 1))) / (x + 1)


def moment_coeff_int_form(s: int, p: int) -> FormalCombination:
    """Coefficient of ``n^-p`` in ``E(Z_n^s)`` for integer ``s >= 1`` as alternating MZVs."""
    if isinstance(s, bool) or int(s) != s or s < 1:
        raise ValueError("s must be a positive integer")
    s = int(s)
    _check_p(p)
    gam = gamma_coeffs(s)
    terms = []
    for k in range(1, p):
        inner = sum(
            (g * (-1) ** (j - 1) * euler_at_zero(p - k + j - 1) for j, g in enumerate(gam, start=1)),
            Fraction(0),
        )
        w = (-1) ** p * Fraction(s**k, s + 1) * inner
        terms.append((w, MzvIndex.height_one(p + 1 - k, k - 1, bar=True)))
    return FormalCombination(terms)


def moment_coeff_int(s: int, p: int, ctx: PrecisionContext | None = None):
    return eval_coefficient(moment_coeff_int_form(s, p), ctx)


def moment_coeff_real_weights(s, p: int, ctx: PrecisionContext | None = None) -> list:
    """``[(weight, index)]`` of the real-``s`` coefficient of ``n^-p``.

    Weights are Fractions when ``s`` is an integer (then ``2^-s`` is rational),
    mpmath numbers otherwise.
    """
    _check_p(p)
    q = _exact(s)
    if q is None:
        if not s > 0:
            raise ValueError("s must be positive")
    elif q <= 0:
        raise ValueError("s must be positive")
    exact = q is not None and q.denominator == 1
    if exact:
        S = q
        two_pow = Fraction(1, 2 ** int(q))
    else:
        mp = mp_context((ctx or DEFAULT_CONTEXT).digits)
        S = mp.mpf(q.numerator) / q.denominator if q is not None else mp.mpf(s)
        two_pow = mp.power(2, -S)
    es = [euler_at_zero(i) for i in range(1, p)]
    out = []
    for k in range(1, p):
        j = p - k
        bell = 0
        for ell in range(1, j + 1):
            b = bell_partial(j, ell, es[: j - ell + 1])
            if not b:
                continue
            ff = falling_factorial(S + 1, ell) if exact else _falling_mp(S + 1, ell)
            bell = bell + ff * (b if exact else mp.mpf(b.numerator) / b.denominator)
        w = (-1) ** p * S**k / (S + 1) * two_pow * bell
        out.append((w, MzvIndex.height_one(p + 1 - k, k - 1, bar=True)))
    return out


def _falling_mp(x, ell: int):
    out = x * 0 + 1
    for i in range(ell):
        out *= x - i
    return out


def moment_coeff_real(s, p: int, ctx: PrecisionContext | None = None):
    """Coefficient of ``n^-p`` in ``E(Z_n^s)`` for real ``s > 0`` (Bell-polynomial route)."""
    ctx = ctx or DEFAULT_CONTEXT
    mp = mp_context(ctx.digits)
    total = mp.zero
    for w, idx in moment_coeff_real_weights(s, p, ctx):
        if isinstance(w, Fraction):
            w = mp.mpf(w.numerator) / w.denominator
        total += w * mzv_numeric(idx, ctx)
    return total


def moment_series(s, P: int, real: bool = False, ctx: PrecisionContext | None = None) -> AsymptoticSeries:
    """Numeric coefficients of ``E(Z_n^s)`` up to ``n^-P``; constant term exact for integer ``s``."""
    if P < 0:
        raise ValueError("P must be >= 0")
    q = _exact(s)
    integer = q is not None and q.denominator == 1
    if not real and not integer:
        raise ValueError("non-integer s needs the real-s route")
    coeffs: list = [moment_constant(s, ctx), Fraction(0)][: P + 1]
    for p in range(2, P + 1):
        coeffs.append(moment_coeff_real(s, p, ctx) if real else moment_coeff_int(int(q), p, ctx))
    return AsymptoticSeries(
        coeffs, meta="E(Z_n^s), Z_n = ||(U, 1-U)||_n", params={"s": str(s), "P": P, "real": real}
    )


# --------------------------------------------------------------------------
# r independent uniforms


def rdim_prefactor(r: int, s) -> Fraction:
    """``E(max(U_1..U_r)^s) = r / (r + s)``."""
    if r < 2:
        raise ValueError("r must be >= 2")
    q = _exact(s)
    if q is not None:
        if q <= 0:
            raise ValueError("s must be positive")
        return Fraction(r) / (r + q)
    if not s > 0:
        raise ValueError("s must be positive")
    return r / (r + s)


def rdim_leading(r: int, s, n, ctx: PrecisionContext | None = None):
    """Two-term approximation ``r/(r+s) (1 + s (r-1) pi^2 / (12 n^2))`` of ``E(||U||_n^s)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    mp = mp_context((ctx or DEFAULT_CONTEXT).digits)
    pre = rdim_prefactor(r, s)
    pre = mp.mpf(pre.numerator) / pre.denominator if isinstance(pre, Fraction) else mp.mpf(pre)
    q = _exact(s)
    S = mp.mpf(q.numerator) / q.denominator if q is not None else mp.mpf(s)
    return pre * (1 + S * (r - 1) * mp.pi**2 / (12 * mp.mpf(n) ** 2))


def r2_moment_form(s, p: int) -> FormalCombination:
    """Bracket coefficient of ``(-1)^p n^-p`` for ``r = 2`` and rational ``s``."""
    _check_p(p)
    q = _exact(s)
    if q is None:
        raise TypeError("r2_moment_form needs a rational s")
    if q <= 0:
        raise ValueError("s must be positive")
    return FormalCombination(
        (-(q ** (p - ell - 1)), MzvIndex.height_one(ell + 2, p - ell - 2, bar=True)) for ell in range(p - 1)
    )


def r2_moment_coeff(s, p: int, ctx: PrecisionContext | None = None):
    """``sum_{l=0}^{p-2} s^(p-l-1) (-zeta(bar(l+2), {1}_(p-l-2)))``."""
    _check_p(p)
    ctx = ctx or DEFAULT_CONTEXT
    if _exact(s) is not None:
        return eval_coefficient(r2_moment_form(s, p), ctx)
    if not s > 0:
        raise ValueError("s must be positive")
    mp = mp_context(ctx.digits)
    S = mp.mpf(s)
    return mp.fsum(
        -(S ** (p - ell - 1)) * mzv_numeric(MzvIndex.height_one(ell + 2, p - ell - 2, bar=True), ctx)
        for ell in range(p - 1)
    )


def r2_moment(s, n, P: int, ctx: PrecisionContext | None = None):
    """``2/(2+s) (1 + sum_{p=2}^P (-1)^p r2_moment_coeff(s, p) / n^p)``."""
    ctx = ctx or DEFAULT_CONTEXT
    mp = mp_context(ctx.digits)
    x = mp.mpf(n)
    bracket = 1 + mp.fsum((-1) ** p * r2_moment_coeff(s, p, ctx) / x**p for p in range(2, P + 1))
    pre = rdim_prefactor(2, s)
    pre = mp.mpf(pre.numerator) / pre.denominator if isinstance(pre, Fraction) else mp.mpf(pre)
    return pre * bracket


def _star_part(m: int, r: int) -> Fraction:
    # z*_m({1}_r; {1}_(r-1), 2) - z*_m({1}_r), which equals sum_{j<=m} C(m,j)/j^r
    weighted = truncated_star_weighted(WeightedStarIndex((1,) * r, (1,) * (r - 1) + (2,), m))
    return weighted - truncated_star(m, (1,) * r)


def r3_bracket(m: int, l1: int, l2: int) -> Fraction:
    """``sum_{j=1}^{m-1} C(m, j) / (j^(l1+1) (m-j)^(l2+1))`` through weighted star values."""
    if m < 1 or l1 < 0 or l2 < 0:
        raise ValueError("need m >= 1 and l1, l2 >= 0")
    total = Fraction(0)
    for a, b in ((l1, l2), (l2, l1)):
        for i in range(1, a + 2):
            e = a + 2 - i
            total += Fraction(comb(i + b - 1, b), m ** (i + b)) * (_star_part(m, e) - Fraction(1, m**e))
    return total


def r3_bracket_direct(m: int, l1: int, l2: int) -> Fraction:
    if m < 1 or l1 < 0 or l2 < 0:
        raise ValueError("need m >= 1 and l1, l2 >= 0")
    return sum(
        (Fraction(comb(m, j), j ** (l1 + 1) * (m - j) ** (l2 + 1)) for j in range(1, m)), Fraction(0)
    )


def r3_summand(m: int, l1: int, l2: int, k: int) -> Fraction:
    """The ``m``-th term of the ``r = 3`` correction for fixed ``(l1, l2, k)``.

    ``(-1)^(m-k) zeta_(m-1)({1}_(k-1)) r3_bracket(m, l1, l2) / m``.  The sum over
    ``m`` is not carried out: it diverges without resummation.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    return (-1) ** (m - k) * truncated_mzv(m - 1, (1,) * (k - 1)) * r3_bracket(m, l1, l2) / m
