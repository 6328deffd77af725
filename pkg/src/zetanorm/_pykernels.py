"""numpy implementations of the compiled kernels (same signatures and contracts)."""

from __future__ import annotations

import math

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _mix(z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _key(seed: int) -> np.uint64:
    return _mix(np.array([seed], dtype=np.uint64))[0]


def uniforms(seed: int, start: int, count: int) -> np.ndarray:
    ctr = np.arange(start, start + count, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = _mix(_key(seed) + _GOLDEN * (ctr + np.uint64(1)))
    return ((z >> np.uint64(11)).astype(np.float64) + 0.5) * (1.0 / 9007199254740992.0)


def nested_sums(args, bar_first: bool, n_terms: int, n_tail: int):
    args = [int(a) for a in args]
    if not args:
        raise ValueError("empty index")
    if n_tail >= n_terms:
        raise ValueError("n_tail must be smaller than n_terms")
    n = np.arange(1, n_terms + 1, dtype=np.float64)
    inner = np.ones(n_terms)  # value of the empty suffix at n - 1
    suffix = []
    terms = None
    for pos, a in enumerate(reversed(args)):
        terms = inner / n**a
        if pos == len(args) - 1 and bar_first:
            terms[0::2] *= -1.0
        level = np.cumsum(terms)
        suffix.append(level[-1])
        inner = np.concatenate(([0.0], level[:-1]))
    suffix.reverse()
    # outer partial sums re-anchored on a correctly rounded total
    total = math.fsum(terms)
    suffix[0] = total
    last = terms[n_terms - n_tail :]
    tail = np.empty(n_tail + 1)
    tail[-1] = total
    for j in range(n_tail - 1, -1, -1):
        tail[j] = tail[j + 1] - last[j]
    return np.array(suffix), tail


def norm_moment_block(seed: int, start: int, count: int, r: int, n: float, s: float):
    if not 1 <= r <= 64:
        raise ValueError("r must lie in 1..64")
    u = uniforms(seed, start * r, count * r).reshape(count, r)
    m = u.max(axis=1)
    acc = ((u / m[:, None]) ** n).sum(axis=1)
    v = (m * acc ** (1.0 / n)) ** s
    return float(v.sum()), float((v * v).sum())
