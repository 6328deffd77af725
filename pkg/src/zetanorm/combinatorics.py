"""Exact rational combinatorics.

Every quantity here is a :class:`fractions.Fraction` (or a list of them):
Bernoulli numbers, Euler polynomials at rational points, Stirling numbers,
truncated (star, weighted) multiple zeta values, partial Bell polynomials
and the coefficient families that enter the moment expansions.

Memo tables are append-only and guarded by a lock, so concurrent callers
always observe the same values.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

__all__ = [
    "MzvIndex",
    "WeightedStarIndex",
    "bernoulli",
    "euler_at_zero",
    "euler_at",
    "a_coeff",
    "beta_coeff",
    "stirling_first",
    "stirling_second",
    "truncated_mzv",
    "stirling_mzv_check",
    "truncated_star",
    "truncated_star_weighted",
    "binom_pow_sum",
    "gamma_coeffs",
    "c_coeffs",
    "bell_partial",
    "bell_partial_multiindex",
    "generalized_euler_at_zero",
    "generalized_euler_at_zero_stirling",
    "binomial",
    "falling_factorial",
    "partial_fraction_rhs",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class MzvIndex:
    """Index ``(i1, ..., ik)`` of a (possibly alternating) multiple zeta value.

    ``bar_first`` marks the leading exponent as alternating, i.e. the
    outermost summation variable carries a factor ``(-1)**n1``.
    """

    args: tuple[int, ...]
    bar_first: bool = False

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(int(a) for a in self.args))
        if any(a < 1 for a in self.args):
            raise ValueError(f"MZV arguments must be positive, got {self.args}")
        if self.bar_first and not self.args:
            raise ValueError("an empty index cannot carry a bar")

    @classmethod
    def height_one(cls, q: int, m: int, bar: bool = False) -> "MzvIndex":
        """``(q, 1, ..., 1)`` with ``m`` trailing ones."""
        return cls((q,) + (1,) * m, bar)

    @property
    def depth(self) -> int:
        return len(self.args)

    @property
    def weight(self) -> int:
        return sum(self.args)

    def is_convergent(self) -> bool:
        return bool(self.args) and (self.bar_first or self.args[0] >= 2)

    def __str__(self) -> str:
        parts = [str(a) for a in self.args]
        if self.bar_first:
            parts[0] += "̄"
        return "ζ(" + ",".join(parts) + ")"


@dataclass(frozen=True)
class WeightedStarIndex:
    """Data of a truncated weighted zeta-star value ``z*_r(args; weights)``."""

    args: tuple[int, ...]
    weights: tuple[Fraction, ...]
    r: int = field(default=1)

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(int(a) for a in self.args))
        object.__setattr__(self, "weights", tuple(Fraction(x) for x in self.weights))
        if len(self.args) != len(self.weights):
            raise ValueError("args and weights must have equal length")
        if self.r < 1:
            raise ValueError("truncation r must be >= 1")


# --------------------------------------------------------------------------
# Bernoulli and Euler numbers

_lock = threading.Lock()
_bernoulli: list[Fraction] = [_ONE]


def bernoulli(n: int) -> Fraction:
    """Bernoulli number ``B_n`` with ``B_1 = -1/2``.

    Uses the recurrence ``sum_{k<=n} C(n+1, k) B_k = 0`` with memoization.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n < len(_bernoulli):
        return _bernoulli[n]
    with _lock:
        while len(_bernoulli) <= n:
            m = len(_bernoulli)
            acc = sum((comb(m + 1, k) * _bernoulli[k] for k in range(m)), _ZERO)
            _bernoulli.append(-acc / (m + 1))
    return _bernoulli[n]


def euler_at_zero(n: int) -> Fraction:
    """``E_n(0)``, the Euler polynomial at zero.

    ``E_n(0) = -2 (2^(n+1) - 1) B_(n+1) / (n+1)``; vanishes for even ``n >= 2``.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    return -2 * (2 ** (n + 1) - 1) * bernoulli(n + 1) / (n + 1)


def euler_at(n: int, x) -> Fraction:
    """``E_n(x) = sum_k C(n, k) E_k(0) x^(n-k)`` for rational ``x``."""
    x = Fraction(x)
    return sum((comb(n, k) * euler_at_zero(k) * x ** (n - k) for k in range(n + 1)), _ZERO)


def a_coeff(n: int) -> Fraction:
    """``a_n = (1 - 2^(2n+2)) B_(2n+2) / (2n+2)``, which also equals ``E_(2n+1)(0) / 2``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return (1 - 2 ** (2 * n + 2)) * bernoulli(2 * n + 2) / (2 * n + 2)


def beta_coeff(j: int) -> Fraction:
    """Coefficient of ``r^-(j+1)`` in the expansion of ``int_0^1 u^r/(1+u)^3 du``."""
    if j < 0:
        raise ValueError("j must be >= 0")
    sign = 1 if (j + 1) % 2 == 0 else -1
    return sign * euler_at_zero(2 * ((j + 1) // 2) + 1) / 4


# --------------------------------------------------------------------------
# Stirling numbers

_stirling1: list[list[int]] = [[1]]
_stirling2: list[list[int]] = [[1]]


def _grow_rows(table: list[list[int]], m: int, second_kind: bool) -> None:
    with _lock:
        while len(table) <= m:
            prev = table[-1]
            n = len(table) - 1  # index of prev row
            row = [0] * (n + 2)
            for k in range(1, n + 2):
                left = prev[k - 1]
                right = prev[k] if k <= n else 0
                row[k] = left + (k * right if second_kind else -n * right)
            table.append(row)


def stirling_first(m: int, k: int) -> Fraction:
    """Signed Stirling number of the first kind: ``x(x-1)...(x-m+1) = sum_k s(m,k) x^k``."""
    if m < 0 or k < 0:
        raise ValueError("arguments must be non-negative")
    if k > m:
        return _ZERO
    if m >= len(_stirling1):
        _grow_rows(_stirling1, m, second_kind=False)
    return Fraction(_stirling1[m][k])


def stirling_second(r: int, j: int) -> Fraction:
    """Stirling number of the second kind (set partitions of ``r`` into ``j`` blocks)."""
    if r < 0 or j < 0:
        raise ValueError("arguments must be non-negative")
    if j > r:
        return _ZERO
    if r >= len(_stirling2):
        _grow_rows(_stirling2, r, second_kind=True)
    return Fraction(_stirling2[r][j])


# --------------------------------------------------------------------------
# truncated multiple zeta values


def _args_of(index) -> tuple[int, ...]:
    if isinstance(index, MzvIndex):
        if index.bar_first:
            raise ValueError("truncated_mzv takes unbarred indices")
        return index.args
    return tuple(int(a) for a in index)


def truncated_mzv(r: int, index) -> Fraction:
    """``zeta_r(i1,...,ik) = sum_{r >= n1 > ... > nk >= 1} prod n_j^-i_j``.

    The empty index gives 1; ``r < k`` gives 0.  The nested sum is built
    from the innermost argument outwards with running partial sums, so the
    cost is ``O(r k)`` rational operations.
    """
    args = _args_of(index)
    if r < 0:
        raise ValueError("r must be >= 0")
    if not args:
        return _ONE
    if r < len(args):
        return _ZERO
    # level[n] holds the partial sum over n_j <= n of the current suffix
    level = [_ONE] * (r + 1)
    for a in reversed(args):
        nxt = [_ZERO] * (r + 1)
        acc = _ZERO
        for n in range(1, r + 1):
            acc += level[n - 1] / Fraction(n) ** a if level[n - 1] else 0
            nxt[n] = acc
        level = nxt
        level[0] = _ZERO
    return level[r]


def stirling_mzv_check(m: int, k: int) -> bool:
    """Check ``s(m, k) == (-1)^(m-k) (m-1)! zeta_(m-1)({1}_(k-1))`` exactly."""
    if not 1 <= k <= m:
        raise ValueError("need m >= k >= 1")
    rhs = (-1) ** (m - k) * factorial(m - 1) * truncated_mzv(m - 1, (1,) * (k - 1))
    return stirling_first(m, k) == rhs


def truncated_star_weighted(w: WeightedStarIndex) -> Fraction:
    """``z*_r(i; x) = sum_{r >= n1 >= ... >= nk >= 1} prod x_j^n_j / n_j^i_j``."""
    r = w.r
    level = [_ONE] * (r + 1)
    for a, x in zip(reversed(w.args), reversed(w.weights)):
        nxt = [_ZERO] * (r + 1)
        acc = _ZERO
        xp = _ONE
        for n in range(1, r + 1):
            xp *= x
            acc += xp * level[n] / Fraction(n) ** a
            nxt[n] = acc
        level = nxt
    return level[r]


def truncated_star(r: int, args: Sequence[int]) -> Fraction:
    """Unweighted truncated zeta-star value ``z*_r(args)``."""
    return truncated_star_weighted(WeightedStarIndex(tuple(args), (1,) * len(args), r))


def binom_pow_sum(m: int, r: int) -> Fraction:
    """``sum_{j=1}^m C(m, j) / j^r``."""
    if m < 1 or r < 1:
        raise ValueError("m and r must be >= 1")
    return sum((Fraction(comb(m, j), j**r) for j in range(1, m + 1)), _ZERO)


# --------------------------------------------------------------------------
# moment-expansion coefficient families


def gamma_coeffs(s: int) -> list[Fraction]:
    """``[gamma_{s+1,1}, ..., gamma_{s+1,s+1}]`` with ``gamma_{s+1,r} = (-1)^(r-1) |s(s+1,r)| / s!``.

    ``s = 0`` is accepted and yields ``[1]``.
    """
    if s < 0:
        raise ValueError("s must be >= 0")
    fs = factorial(s)
    return [(-1) ** (r - 1) * abs(stirling_first(s + 1, r)) / fs for r in range(1, s + 2)]


def c_coeffs(r: int) -> list[Fraction]:
    """Coefficients ``c_{r,j}`` with ``d^(r-1) f / dt^(r-1) = sum_j c_{r,j} f^j`` for the logistic ``f``."""
    if r < 1:
        raise ValueError("r must be >= 1")
    return [(-1) ** (j - 1) * factorial(j - 1) * stirling_second(r, j) for j in range(1, r + 1)]


def bell_partial(n: int, k: int, xs: Sequence) -> Fraction:
    """Partial Bell polynomial ``B_{n,k}(x_1, ..., x_{n-k+1})``.

    Evaluated with ``B_{n,k} = sum_j C(n-1, j-1) x_j B_{n-j,k-1}``.  Accepts
    ``n = k = 0`` (value 1) so that callers can run ``k`` from zero.
    """
    if n < 0 or k < 0:
        raise ValueError("n, k must be >= 0")
    if k > n:
        return _ZERO
    if len(xs) < n - k + 1 and n > 0:
        raise ValueError(f"need at least {n - k + 1} arguments, got {len(xs)}")
    x = [Fraction(v) for v in xs]
    # table[kk][nn] = B_{nn,kk}
    prev = [_ONE] + [_ZERO] * n
    for kk in range(1, k + 1):
        cur = [_ZERO] * (n + 1)
        for nn in range(kk, n - (k - kk) + 1):
            acc = _ZERO
            for j in range(1, nn - kk + 2):
                if prev[nn - j]:
                    acc += comb(nn - 1, j - 1) * x[j - 1] * prev[nn - j]
            cur[nn] = acc
        prev = cur
    return prev[n]


def bell_partial_multiindex(n: int, k: int, xs: Sequence) -> Fraction:
    """Partial Bell polynomial from its defining sum over part multiplicities.

    Exponential in ``n``; kept as an independent check on :func:`bell_partial`.
    """
    if k > n:
        return _ZERO
    if n == 0:
        return _ONE
    x = [Fraction(v) for v in xs]
    size = n - k + 1
    total = _ZERO

    def rec(part: int, left_k: int, left_n: int, mult: list[int]):
        nonlocal total
        if part > size:
            if left_k == 0 and left_n == 0:
                term = Fraction(factorial(n))
                for ell, j in enumerate(mult, start=1):
                    term /= factorial(j)
                    term *= (x[ell - 1] / factorial(ell)) ** j
                total += term
            return
        for j in range(0, min(left_k, left_n // part) + 1):
            rec(part + 1, left_k - j, left_n - part * j, mult + [j])

    rec(1, k, n, [])
    return total


def generalized_euler_at_zero(k: int, r: int) -> Fraction:
    """``E_k^(r)(0) = 2^(r-1) sum_j (-1)^(j-1) gamma_{r,j} E_(k+j-1)(0)``."""
    if k < 0 or r < 1:
        raise ValueError("need k >= 0 and r >= 1")
    gam = gamma_coeffs(r - 1)
    acc = sum(((-1) ** (j - 1) * g * euler_at_zero(k + j - 1) for j, g in enumerate(gam, start=1)), _ZERO)
    return 2 ** (r - 1) * acc


def generalized_euler_at_zero_stirling(k: int, r: int) -> Fraction:
    """Same value from signed Stirling numbers: ``2^(r-1)/(r-1)! sum_j s(r,j) (-1)^(r+j) E_(k+j-1)(0)``."""
    if k < 0 or r < 1:
        raise ValueError("need k >= 0 and r >= 1")
    acc = _ZERO
    for j in range(1, r + 1):  # s(r, 0) = 0 for r >= 1
        acc += stirling_first(r, j) * (-1) ** (r + j) * euler_at_zero(k + j - 1)
    return Fraction(2 ** (r - 1), factorial(r - 1)) * acc


def binomial(n: int, k: int) -> Fraction:
    if k < 0:
        raise ValueError("k must be >= 0")
    if n >= 0:
        return Fraction(comb(n, k))
    return falling_factorial(Fraction(n), k) / factorial(k)


def falling_factorial(x, ell: int) -> Fraction:
    """``x (x-1) ... (x-ell+1)``; the empty product is 1."""
    if ell < 0:
        raise ValueError("ell must be >= 0")
    x = Fraction(x)
    out = _ONE
    for i in range(ell):
        out *= x - i
    return out


def partial_fraction_rhs(a: int, b: int, j: int, m: int) -> Fraction:
    """Right side of the split of ``1 / (j^a (m-j)^b)`` into pure powers of ``j`` and ``m - j``."""
    left = sum(
        (Fraction(comb(i + b - 2, b - 1), m ** (i + b - 1) * j ** (a + 1 - i)) for i in range(1, a + 1)),
        _ZERO,
    )
    right = sum(
        (Fraction(comb(i + a - 2, a - 1), m ** (i + a - 1) * (m - j) ** (b + 1 - i)) for i in range(1, b + 1)),
        _ZERO,
    )
    return left + right

