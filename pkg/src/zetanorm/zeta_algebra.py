"""Rational polynomials in the formal generators zeta(2), zeta(3), ...

A :class:`ZetaPolynomial` maps monomials (sorted tuples of generator
arguments, ``()`` for the constant) to non-zero Fractions.  Generators are
treated as independent; the only relation ever applied is the rational
dependence between even zeta values, and only by :func:`normalize_even`.

Height-one values ``zeta(q, {1}_m)`` are reduced with the symmetric
generating identity

    1 - sum_{a,b>=0} zeta(a+2, {1}_b) x^(a+1) y^(b+1)
        = exp( sum_{k>=2} (x^k + y^k - (x+y)^k) zeta(k) / k ),

expanded as a bivariate power series graded by total degree.
"""

from __future__ import annotations

import re
import threading
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Iterable, Iterator, Mapping, Union

from .combinatorics import MzvIndex, bernoulli

__all__ = [
    "ZetaPolynomial",
    "FormalCombination",
    "even_zeta_ratio",
    "normalize_even",
    "reduce_height_one",
]

Monomial = tuple  # sorted tuple of ints >= 2
Scalar = Union[int, Fraction]


def _fmt_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_monomial(mono: Monomial) -> str:
    parts = []
    for k in sorted(set(mono)):
        e = mono.count(k)
        parts.append(f"z{k}" if e == 1 else f"z{k}^{e}")
    return "*".join(parts)


def _order_key(mono: Monomial):
    return (sum(mono), len(mono), mono)


class ZetaPolynomial:
    """Finitely supported map monomial -> Fraction; immutable."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Iterable[int], Scalar] | None = None):
        clean: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            key = tuple(sorted(int(a) for a in mono))
            if any(a < 2 for a in key):
                raise ValueError(f"zeta generators need argument >= 2, got {key}")
            clean[key] = clean.get(key, Fraction(0)) + Fraction(c)
        self._terms = {k: v for k, v in clean.items() if v}
        self._hash = None

    @classmethod
    def constant(cls, c: Scalar) -> "ZetaPolynomial":
        return cls({(): c})

    @classmethod
    def zeta(cls, k: int) -> "ZetaPolynomial":
        return cls({(k,): 1})

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Monomial, Fraction]]:
        for mono in sorted(self._terms, key=_order_key):
            yield mono, self._terms[mono]

    def coefficient(self, mono: Iterable[int]) -> Fraction:
        return self._terms.get(tuple(sorted(mono)), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self._terms}) <= 1

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "ZetaPolynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for mono, c in other._terms.items():
            out[mono] = out.get(mono, Fraction(0)) + c
        return ZetaPolynomial(out)

    __radd__ = __add__

    def __neg__(self) -> "ZetaPolynomial":
        return ZetaPolynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "ZetaPolynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "ZetaPolynomial":
        return (-self) + other

    def __mul__(self, other) -> "ZetaPolynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, ZetaPolynomial):
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                key = tuple(sorted(m1 + m2))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return ZetaPolynomial(out)

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "ZetaPolynomial":
        c = Fraction(c)
        return ZetaPolynomial({m: c * v for m, v in self._terms.items()})

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- evaluation and rendering ------------------------------------------

    def evaluate(self, zeta: Callable[[int], object] | Mapping[int, object], one=1):
        """Substitute numeric generator values; ``zeta`` is a callable or mapping ``k -> value``.

        The constant term is added as ``one * c`` so that callers can pick
        the number type (mpf, float, ...).
        """
        get = zeta.__getitem__ if isinstance(zeta, Mapping) else zeta
        total = one * 0
        for mono, c in self.items():
            term = one * c.numerator / c.denominator
            for k in mono:
                term = term * get(k)
            total = total + term
        return total

    def to_text(self) -> str:
        """Canonical text, e.g. ``83/256*z6 - 1/16*z3^2``."""
        if not self._terms:
            return "0"
        chunks = []
        for i, (mono, c) in enumerate(self.items()):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = _fmt_fraction(a)
            elif a == 1:
                body = _fmt_monomial(mono)
            else:
                body = f"{_fmt_fraction(a)}*{_fmt_monomial(mono)}"
            if i == 0:
                chunks.append(body if sign == "+" else f"-{body}")
            else:
                chunks.append(f" {sign} {body}")
        return "".join(chunks)

    __str__ = to_text

    def __repr__(self) -> str:
        return f"ZetaPolynomial({self.to_text()!r})"

    def to_json(self) -> list[dict]:
        return [
            {"monomial": list(mono), "coeff": f"{c.numerator}/{c.denominator}"}
            for mono, c in self.items()
        ]

    @classmethod
    def from_json(cls, data: list[dict]) -> "ZetaPolynomial":
        return cls({tuple(d["monomial"]): Fraction(d["coeff"]) for d in data})

    _TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")

    @classmethod
    def parse(cls, text: str) -> "ZetaPolynomial":
        """Inverse of :meth:`to_text`; accepts ``z3^2``, ``1/16*z3^2``, ``3/4``."""
        text = text.strip()
        if text == "0":
            return cls()
        terms: dict[Monomial, Fraction] = {}
        for sign, body in cls._TERM.findall(text):
            coeff = Fraction(1)
            mono: list[int] = []
            for factor in body.strip().split("*"):
                factor = factor.strip()
                if factor.startswith("z"):
                    base, _, exp = factor[1:].partition("^")
                    mono.extend([int(base)] * (int(exp) if exp else 1))
                else:
                    coeff *= Fraction(factor)
            if sign == "-":
                coeff = -coeff
            key = tuple(sorted(mono))
            terms[key] = terms.get(key, Fraction(0)) + coeff
        return cls(terms)


def _coerce(x):
    if isinstance(x, ZetaPolynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return ZetaPolynomial.constant(x)
    return NotImplemented


class FormalCombination:
    """Linear combination ``sum c_i * zeta(index_i)`` of (alternating) MZVs.

    Kept unevaluated; the numeric kernel turns it into a number.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[Scalar, MzvIndex]] = ()):
        merged: dict[MzvIndex, Fraction] = {}
        order: list[MzvIndex] = []
        for c, idx in terms:
            if idx not in merged:
                order.append(idx)
                merged[idx] = Fraction(0)
            merged[idx] += Fraction(c)
        self.terms = [(merged[i], i) for i in order if merged[i]]

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __add__(self, other: "FormalCombination") -> "FormalCombination":
        return FormalCombination(list(self.terms) + list(other.terms))

    def scale(self, c: Scalar) -> "FormalCombination":
        return FormalCombination((c * a, i) for a, i in self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalCombination):
            return NotImplemented
        return dict((i, c) for c, i in self.terms) == dict((i, c) for c, i in other.terms)

    def evaluate(self, mzv: Callable[[MzvIndex], object], one=1):
        total = one * 0
        for c, idx in self.terms:
            total = total + one * c.numerator / c.denominator * mzv(idx)
        return total

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for i, (c, idx) in enumerate(self.terms):
            body = str(idx) if abs(c) == 1 else f"{_fmt_fraction(abs(c))}·{idx}"
            if i == 0:
                out.append(body if c > 0 else f"-{body}")
            else:
                out.append(f" {'-' if c < 0 else '+'} {body}")
        return "".join(out)

    __str__ = to_text

    def __repr__(self) -> str:
        return f"FormalCombination({self.to_text()!r})"

    def to_json(self) -> list[dict]:
        return [
            {"index": list(idx.args), "bar_first": idx.bar_first, "coeff": f"{c.numerator}/{c.denominator}"}
            for c, idx in self.terms
        ]


# --------------------------------------------------------------------------
# even zeta values


def even_zeta_ratio(k: int) -> Fraction:
    """``zeta(k) / pi^k`` for even ``k >= 2``."""
    if k < 2 or k % 2:
        raise ValueError(f"even_zeta_ratio needs an even argument >= 2, got {k}")
    h = k // 2
    return (-1) ** (h + 1) * bernoulli(k) * 2**k / (2 * factorial(k))


def normalize_even(p: ZetaPolynomial) -> ZetaPolynomial:
    """Merge even generators so each monomial carries at most one of them.

    ``zeta(2a) zeta(2b) ... = [prod r / r_(sum)] zeta(2a + 2b + ...)`` with
    ``r = even_zeta_ratio``; the numeric value is unchanged.
    """
    out: dict[Monomial, Fraction] = {}
    for mono, c in p.terms.items():
        evens = [a for a in mono if a % 2 == 0]
        if len(evens) > 1:
            ratio = Fraction(1)
            for a in evens:
                ratio *= even_zeta_ratio(a)
            total = sum(evens)
            c = c * ratio / even_zeta_ratio(total)
            mono = tuple(sorted([a for a in mono if a % 2] + [total]))
        out[mono] = out.get(mono, Fraction(0)) + c
    return ZetaPolynomial(out)


# --------------------------------------------------------------------------
# height-one reduction

_series_lock = threading.Lock()
# _graded[d] = {i: coefficient of x^i y^(d-i)} of the exponential series
_graded: list[dict[int, ZetaPolynomial]] = [{0: ZetaPolynomial.constant(1)}]


def _exponent_part(d: int) -> dict[int, ZetaPolynomial]:
    # (x^d + y^d - (x+y)^d) zeta(d)/d; pure powers cancel
    z = ZetaPolynomial.zeta(d)
    return {i: z.scale(Fraction(-comb(d, i), d)) for i in range(1, d)}


def _extend_series(degree: int) -> None:
    with _series_lock:
        while len(_graded) <= degree:
            d = len(_graded)
            acc: dict[int, ZetaPolynomial] = {}
            # Euler-operator recurrence: d F_d = sum_j j E_j F_(d-j)
            for j in range(2, d + 1):
                ej = _exponent_part(j)
                for a, ca in ej.items():
                    for b, cb in _graded[d - j].items():
                        term = (ca * cb).scale(j)
                        acc[a + b] = acc[a + b] + term if (a + b) in acc else term
            _graded.append({i: v.scale(Fraction(1, d)) for i, v in acc.items() if not v.is_zero()})


def reduce_height_one(q: int, m: int) -> ZetaPolynomial:
    """``zeta(q, {1}_m)`` as an even-normalized polynomial in single zeta values."""
    if q < 2:
        raise ValueError(f"reduce_height_one needs q >= 2, got {q}")
    if m < 0:
        raise ValueError("m must be >= 0")
    weight = q + m
    if weight >= len(_graded):
        _extend_series(weight)
    coeff = _graded[weight].get(q - 1, ZetaPolynomial())
    return normalize_even(-coeff)
