"""Backend selection for the hot loops.

The compiled extension ``_ckernels`` is used when it was built; otherwise the
numpy versions in ``_pykernels`` take over.  Both expose ``nested_sums``,
``norm_moment_block`` and ``uniforms`` with identical semantics.
"""

from __future__ import annotations

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["compiled"] = _ckernels

_active = "compiled" if _ckernels is not None else "python"


def backend() -> str:
    """Name of the active backend, ``"compiled"`` or ``"python"``."""
    return _active


def use_backend(name: str) -> None:
    global _active
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}")
    _active = name


def nested_sums(args, bar_first, n_terms, n_tail):
    return BACKENDS[_active].nested_sums(args, bar_first, n_terms, n_tail)


def norm_moment_block(seed, start, count, r, n, s):
    return BACKENDS[_active].norm_moment_block(seed, start, count, r, n, s)


def uniforms(seed, start, count):
    return BACKENDS[_active].uniforms(seed, start, count)
