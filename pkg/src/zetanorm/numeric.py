"""High-precision numerics and independent oracles.

* ``zeta_value`` -- single zeta values at ``ctx.digits`` (exact ratio times
  ``pi^k`` for even ``k``, direct sum plus Euler-Maclaurin tail for odd ``k``).
* ``mzv_numeric`` -- (alternating) multiple zeta values from nested partial
  sums computed by the hot kernel, with a tail treatment that depends on the
  leading sign (iterated averaging for alternating series, an exact split
  into lower-bounded tail sums with rational asymptotic expansions otherwise).
  Results are good to roughly 1e-13 absolute; they come from float64 sums.
* quadratures of the integrals around ``I(n)`` and ``E(Z_n^s)``,
  Monte Carlo for ``||U||_n`` with a counter-based generator, and the exact
  distribution function of ``Z_n = ||(U, 1-U)||_n``.

mpmath work runs in per-thread contexts so that no global precision is
mutated; functions here are safe to call from several threads.
"""

from __future__ import annotations

import functools
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import mpmath

from . import kernels
from .combinatorics import MzvIndex, bernoulli, binomial
from .zeta_algebra import ZetaPolynomial, even_zeta_ratio

__all__ = [
    "ConvergenceError",
    "PrecisionContext",
    "CdfReport",
    "DEFAULT_CONTEXT",
    "mp_context",
    "zeta_value",
    "eval_zeta_poly",
    "mzv_numeric",
    "mzv_numeric_with_error",
    "snp_quadrature",
    "kolbig_check",
    "quad_I",
    "quad_I_xform",
    "quad_moment_pair",
    "quad_moment_indep2",
    "mc_norm_moment",
    "cdf_Zn",
    "cdf_Zinf",
    "sup_cdf_distance",
    "cross_moment",
]


class ConvergenceError(ArithmeticError):
    """A numeric routine could not reach its requested accuracy."""


@dataclass(frozen=True)
class PrecisionContext:
    digits: int = 30
    sum_terms: int = 10**6
    accel_order: int = 8
    quad_rel_tol: float = 1e-12
    rng_seed: int = 20180310
    mzv_tol: float = 1e-8

    def __post_init__(self):
        if self.digits < 15:
            raise ValueError("digits must be >= 15")
        if self.sum_terms < 1000:
            raise ValueError("sum_terms must be >= 1000")
        if self.accel_order < 1:
            raise ValueError("accel_order must be >= 1")
        if not (self.quad_rel_tol > 0 and self.mzv_tol > 0):
            raise ValueError("tolerances must be positive")
        if not 0 <= self.rng_seed < 2**64:
            raise ValueError("rng_seed must be a 64-bit unsigned integer")


DEFAULT_CONTEXT = PrecisionContext()

_tls = threading.local()


def mp_context(digits: int) -> mpmath.ctx_mp.MPContext:
    """Thread-local mpmath context at ``digits`` decimal digits."""
    cache = getattr(_tls, "ctxs", None)
    if cache is None:
        cache = _tls.ctxs = {}
    mp = cache.get(digits)
    if mp is None:
        mp = mpmath.MPContext()
        mp.dps = digits
        cache[digits] = mp
    return mp


def _ctx(ctx):
    return DEFAULT_CONTEXT if ctx is None else ctx


def _mpf(mp, x):
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


# --------------------------------------------------------------------------
# single zeta values

_DIRECT_TERMS = 1000


@functools.lru_cache(maxsize=None)
def _zeta_cached(k: int, digits: int):
    mp = mp_context(digits + 10)
    if k % 2 == 0:
        r = even_zeta_ratio(k)
        val = mp.mpf(r.numerator) / r.denominator * mp.pi**k
    else:
        N = _DIRECT_TERMS
        head = mp.fsum(mp.mpf(n) ** (-k) for n in range(1, N))
        # Euler-Maclaurin for sum_{n>=N} n^-k
        Nk = mp.mpf(N)
        tail = Nk ** (1 - k) / (k - 1) + Nk ** (-k) / 2
        eps = mp.mpf(10) ** (-(digits + 5))
        rising = mp.mpf(k)  # k (k+1) ... (k+2j-2)
        j = 1
        while True:
            b = bernoulli(2 * j)
            term = mp.mpf(b.numerator) / b.denominator / mp.factorial(2 * j) * rising * Nk ** (-k - 2 * j + 1)
            tail += term
            if abs(term) < eps:
                break
            if j > 60:
                raise ConvergenceError(f"zeta({k}) tail did not converge at {digits} digits")
            rising *= (k + 2 * j - 1) * (k + 2 * j)
            j += 1
        val = head + tail
    return mp_context(digits).mpf(val)


def zeta_value(k: int, ctx: PrecisionContext | None = None):
    """``zeta(k)`` for integer ``k >= 2`` at ``ctx.digits``."""
    if k < 2:
        raise ValueError(f"zeta_value needs k >= 2, got {k}")
    return _zeta_cached(int(k), _ctx(ctx).digits)


def eval_zeta_poly(p: ZetaPolynomial, ctx: PrecisionContext | None = None):
    ctx = _ctx(ctx)
    mp = mp_context(ctx.digits)
    return p.evaluate(lambda k: zeta_value(k, ctx), one=mp.mpf(1))


# --------------------------------------------------------------------------
# multiple zeta values


def _hurwitz_tail_expansion(b: int, order: int) -> dict[int, Fraction]:
    """Coefficients ``c_e`` with ``sum_{n>x} n^-b ~ sum_e c_e x^-e`` (integer ``x``, ``b >= 2``)."""
    out = {b - 1: Fraction(1, b - 1), b: Fraction(-1, 2)}
    rising = Fraction(b)
    for j in range(1, order + 1):
        e = b + 2 * j - 1
        out[e] = out.get(e, Fraction(0)) + bernoulli(2 * j) / factorial(2 * j) * rising
        rising *= (b + 2 * j - 1) * (b + 2 * j)
    return out


def _tail_expansions(args: tuple[int, ...], span: int) -> list[dict[int, Fraction]]:
    """Asymptotic expansions of ``T_x(args[:j]) = sum_{n1>...>nj>x} prod n_i^-args_i``.

    Entry ``j - 1`` covers the prefix of length ``j``; exponents beyond the
    leading one plus ``span`` are dropped.
    """
    out = []
    current = {0: Fraction(1)}
    for a in args:
        nxt: dict[int, Fraction] = {}
        for e, c in current.items():
            for e2, c2 in _hurwitz_tail_expansion(a + e, span // 2 + 1).items():
                nxt[e2] = nxt.get(e2, Fraction(0)) + c * c2
        lead = min(nxt)
        current = {e: c for e, c in nxt.items() if e <= lead + span and c}
        out.append(current)
    return out


@functools.lru_cache(maxsize=4096)
def _mzv_cached(args: tuple[int, ...], bar_first: bool, n_terms: int, accel: int, backend: str):
    if bar_first:
        _, tail = kernels.nested_sums(args, True, n_terms, accel + 1)
        levels = [list(map(float, tail))]
        for _ in range(accel):
            prev = levels[-1]
            levels.append([(prev[i] + prev[i + 1]) / 2 for i in range(len(prev) - 1)])
        value = levels[-1][-1]
        err = abs(levels[-1][-1] - levels[-2][-1])
        return value, err + 1e-15 * (1 + abs(value))
    suffix, _ = kernels.nested_sums(args, False, n_terms, 1)
    mp = mp_context(30)
    x = mp.mpf(n_terms)
    expansions = _tail_expansions(args, span=10)
    total = mp.mpf(suffix[0])
    err = 0.0
    for j, exp in enumerate(expansions, start=1):
        inner = mp.mpf(suffix[j]) if j < len(args) else mp.mpf(1)
        terms = {e: mp.mpf(c.numerator) / c.denominator * x ** (-e) for e, c in exp.items()}
        total += inner * mp.fsum(terms.values())
        err += float(abs(inner * terms[max(terms)]))
    value = float(total)
    return value, err + 4e-16 * len(args) * (1 + abs(value))


def mzv_numeric_with_error(index: MzvIndex, ctx: PrecisionContext | None = None):
    """``(value, error_estimate)`` for a convergent (alternating) MZV."""
    ctx = _ctx(ctx)
    if not isinstance(index, MzvIndex):
        index = MzvIndex(tuple(index))
    if not index.is_convergent():
        raise ValueError(f"{index} diverges (unbarred leading 1)")
    value, err = _mzv_cached(index.args, index.bar_first, ctx.sum_terms, ctx.accel_order, kernels.backend())
    if err > ctx.mzv_tol:
        raise ConvergenceError(f"{index}: error estimate {err:.3g} exceeds {ctx.mzv_tol:.3g}")
    return mp_context(ctx.digits).mpf(value), err


def mzv_numeric(index: MzvIndex, ctx: PrecisionContext | None = None):
    """Nested-sum value of ``zeta(i1, ..., ik)``, leading entry optionally barred."""
    return mzv_numeric_with_error(index, ctx)[0]


# --------------------------------------------------------------------------
# quadrature


def _quad(mp, f, points, ctx: PrecisionContext, what: str):
    val, err = mp.quad(f, points, error=True, maxdegree=10)
    if err > ctx.quad_rel_tol * max(abs(val), mp.mpf(1e-30)):
        raise ConvergenceError(f"{what}: quadrature error {mpmath.nstr(err, 3)} above tolerance")
    return val


def snp_quadrature(n: int, p: int, z: int, ctx: PrecisionContext | None = None):
    """``S_{n,p}(z) = (-1)^(n+p-1)/((n-1)! p!) int_0^1 log^(n-1)(t) log^p(1 - z t) dt / t`` for ``z = +-1``.

    With ``t = exp(-v)`` the integrand becomes ``v^(n-1) log^p(1 - z e^-v)``
    on ``[0, inf)``, which decays exponentially.
    """
    if n < 1 or p < 1:
        raise ValueError("n, p must be >= 1")
    if z not in (1, -1):
        raise ValueError("z must be +1 or -1")
    ctx = _ctx(ctx)
    mp = mp_context(ctx.digits)

    def f(v):
        if v == 0:
            return mp.zero if n > 1 or z == -1 else mp.ninf
        if z == 1:
            lg = mp.log(-mp.expm1(-v))
        else:
            lg = mp.log1p(mp.exp(-v))
        return v ** (n - 1) * lg**p

    val = _quad(mp, f, [0, mp.mpf(1) / 8, 1, 4, 16, 64, mp.inf], ctx, f"S_{n},{p}({z})")
    return (-1) ** p * val / (factorial(n - 1) * factorial(p))


def kolbig_check(n: int, p: int, ctx: PrecisionContext | None = None):
    """Residual ``|LHS - RHS|`` of the linear relation between ``sigma_{j,q}`` and ``s_{n,p}``.

    ``sigma_{j,q} = (-1)^q zeta(bar(j+1), {1}_(q-1))`` and
    ``s_{n,p} = zeta(n+1, {1}_(p-1))``, all from :func:`mzv_numeric`.
    """
    if n < 1 or p < 1:
        raise ValueError("n, p must be >= 1")

    def sigma(j, q):
        return (-1) ** q * mzv_numeric(MzvIndex.height_one(j + 1, q - 1, bar=True), ctx)

    lhs = sum(int(binomial(n + p - j - 1, p - 1)) * sigma(j, n + p - j) for j in range(1, n + 1))
    lhs += sum(int(binomial(n + p - j - 1, n - 1)) * sigma(j, n + p - j) for j in range(1, p + 1))
    rhs = mzv_numeric(MzvIndex.height_one(n + 1, p - 1), ctx)
    return abs(lhs - rhs)


def _norm2(mp, a, b, n):
    # (a^n + b^n)^(1/n) without overflow or underflow
    hi, lo = (a, b) if a >= b else (b, a)
    if hi == 0:
        return mp.zero
    return hi * (1 + (lo / hi) ** n) ** (mp.one / n)


def _u_points(mp, n):
    pts = [mp.zero]
    for w in (mp.mpf(10) / n, mp.mpf(3) / n, mp.mpf(1) / n):
        if w < mp.mpf(1) / 2:
            pts.append(1 - w)
    pts.append(mp.one)
    return sorted(set(pts))


def quad_moment_pair(n, s, ctx: PrecisionContext | None = None):
    """``E(Z_n^s) = 2 int_0^1 (1+u^n)^(s/n) / (1+u)^(s+2) du`` for the pair ``(U, 1-U)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if s <= 0:
        raise ValueError("s must be > 0")
    ctx = _ctx(ctx)
    mp = mp_context(ctx.digits)
    n = _mpf(mp, n)
    s = _mpf(mp, s)

    def f(u):
        return (1 + u**n) ** (s / n) / (1 + u) ** (s + 2)

    return 2 * _quad(mp, f, _u_points(mp, n), ctx, f"E(Z_{n}^{s})")


def quad_I(n, ctx: PrecisionContext | None = None):
    """``I(n)`` from the smooth form ``2 int_0^1 (1+u^n)^(1/n) / (1+u)^3 du``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return quad_moment_pair(n, 1, ctx)


def quad_I_xform(n, ctx: PrecisionContext | None = None):
    """``I(n) = int_0^1 (x^n + (1-x)^n)^(1/n) dx`` integrated directly."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ctx = _ctx(ctx)
    mp = mp_context(ctx.digits)
    nn = _mpf(mp, n)
    half = mp.mpf(1) / 2
    pts = {mp.zero, half, mp.one}
    for w in (mp.mpf(10) / nn, mp.mpf(3) / nn, mp.mpf(1) / nn):
        if w < half:
            pts.update({half - w, half + w})
    return _quad(mp, lambda x: _norm2(mp, x, 1 - x, nn), sorted(pts), ctx, f"I({n}) x-form")


def quad_moment_indep2(n, s, ctx: PrecisionContext | None = None):
    """``E((U1^n + U2^n)^(s/n)) = 2/(2+s) int_0^1 (1+u^n)^(s/n) du``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if s <= 0:
        raise ValueError("s must be > 0")
    ctx = _ctx(ctx)
    mp = mp_context(ctx.digits)
    n = _mpf(mp, n)
    s = _mpf(mp, s)
    val = _quad(mp, lambda u: (1 + u**n) ** (s / n), _u_points(mp, n), ctx, f"indep2 n={n}")
    return 2 / (2 + s) * val


def cross_moment(n, ctx: PrecisionContext | None = None):
    """``E(Z_n Z_inf) = int_0^1 (x^n + (1-x)^n)^(1/n) max(x, 1-x) dx``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ctx = _ctx(ctx)
    mp = mp_context(ctx.digits)
    nn = _mpf(mp, n)
    half = mp.mpf(1) / 2
    pts = {half, mp.one}
    for w in (mp.mpf(3) / nn, mp.mpf(1) / nn):
        if w < half:
            pts.add(half + w)
    val = _quad(mp, lambda x: _norm2(mp, x, 1 - x, nn) * x, sorted(pts), ctx, f"E(Z_{n} Z_inf)")
    return 2 * val


# --------------------------------------------------------------------------
# Monte Carlo

_BLOCK = 1 << 16


def mc_norm_moment(r: int, n, s, samples: int, ctx: PrecisionContext | None = None, workers: int = 1):
    """Sample mean of ``||(U_1..U_r)||_n^s`` and its standard error.

    Samples are split into fixed blocks of 65536; block sums are combined
    with ``math.fsum`` in block order, so the estimate depends only on
    ``(seed, samples)`` and not on ``workers``.
    """
    if r < 2:
        raise ValueError("r must be >= 2")
    if samples < 1000:
        raise ValueError("samples must be >= 1000")
    if n <= 0 or s <= 0:
        raise ValueError("n and s must be positive")
    ctx = _ctx(ctx)
    seed = ctx.rng_seed
    blocks = [(start, min(_BLOCK, samples - start)) for start in range(0, samples, _BLOCK)]

    def run(block):
        start, count = block
        return kernels.norm_moment_block(seed, start, count, r, float(n), float(s))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, blocks))
    else:
        parts = [run(b) for b in blocks]
    total = math.fsum(p[0] for p in parts)
    total_sq = math.fsum(p[1] for p in parts)
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0) * samples / (samples - 1)
    return mean, math.sqrt(var / samples)


# --------------------------------------------------------------------------
# distribution function of Z_n = ||(U, 1-U)||_n


def _g(x: float, n: float) -> float:
    hi, lo = (x, 1.0 - x) if x >= 0.5 else (1.0 - x, x)
    return hi * (1.0 + (lo / hi) ** n) ** (1.0 / n)


def cdf_Zn(z: float, n) -> float:
    """``P(Z_n <= z)``; ``Z_n = g(U)`` with ``g`` symmetric about 1/2 and increasing on [1/2, 1]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    n = float(n)
    if z >= 1.0:
        return 1.0
    # g is flat at 1/2, so rounding in the minimum would leak ~sqrt(eps) mass
    if z <= max(_g(0.5, n), 2.0 ** (1.0 / n - 1.0)):
        return 0.0
    lo, hi = 0.5, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _g(mid, n) <= z:
            lo = mid
        else:
            hi = mid
    return 2.0 * lo - 1.0


def cdf_Zinf(z: float) -> float:
    """``P(max(U, 1-U) <= z)``: uniform on [1/2, 1]."""
    return min(max(2.0 * z - 1.0, 0.0), 1.0)


@dataclass
class CdfReport:
    n: float
    grid: list[float] = field(repr=False)
    sup_distance: float = 0.0
    argmax: float = 0.0
    max_signed: float = 0.0  # max of F_n - F_inf; <= 0 when Z_n >= Z_inf pathwise

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "grid_size": len(self.grid),
            "sup_distance": self.sup_distance,
            "argmax": self.argmax,
            "sup_times_n": self.sup_distance * self.n,
            "max_signed": self.max_signed,
        }


def sup_cdf_distance(n, grid_size: int = 256) -> CdfReport:
    """``sup_z |F_n(z) - F_inf(z)|`` on a grid of [1/2, 1], refined around the best point.

    The left end of the support of ``Z_n``, ``2^(1/n - 1)``, is always a grid
    point since ``F_n`` jumps away from zero there.
    """
    if grid_size < 64:
        raise ValueError("grid_size must be >= 64")
    nf = float(n)
    z0 = _g(0.5, nf)
    grid = sorted({0.5 + 0.5 * i / (grid_size - 1) for i in range(grid_size)} | {z0})

    def diff(z):
        return cdf_Zn(z, nf) - cdf_Zinf(z)

    vals = [diff(z) for z in grid]
    best = max(range(len(grid)), key=lambda i: abs(vals[i]))
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, len(grid) - 1)]
    # golden-section search for a larger |difference| between the neighbours
    phi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    for _ in range(80):
        c = b - phi * (b - a)
        d = a + phi * (b - a)
        if abs(diff(c)) >= abs(diff(d)):
            b = d
        else:
            a = c
    zs = grid + [0.5 * (a + b)]
    vals.append(diff(zs[-1]))
    i = max(range(len(zs)), key=lambda j: abs(vals[j]))
    return CdfReport(n=nf, grid=grid, sup_distance=abs(vals[i]), argmax=zs[i], max_signed=max(vals))
