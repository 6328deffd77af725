import math

import numpy as np
import pytest

from zetanorm import _pykernels, kernels

compiled = pytest.mark.skipif("compiled" not in kernels.BACKENDS, reason="extension not built")


def _splitmix_ref(seed, i):
    # scalar reference with explicit 64-bit masking
    mask = (1 << 64) - 1

    def mix(z):
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        return z ^ (z >> 31)

    z = mix((mix(seed) + 0x9E3779B97F4A7C15 * (i + 1)) & mask)
    return ((z >> 11) + 0.5) / 2.0**53


def test_uniforms_reference():
    u = _pykernels.uniforms(12345, 10, 50)
    assert list(u) == [_splitmix_ref(12345, i) for i in range(10, 60)]
    assert np.all((u > 0) & (u < 1))


def test_uniforms_are_counter_based():
    whole = _pykernels.uniforms(7, 0, 1000)
    parts = np.concatenate([_pykernels.uniforms(7, 0, 300), _pykernels.uniforms(7, 300, 700)])
    assert np.array_equal(whole, parts)
    assert not np.array_equal(whole, _pykernels.uniforms(8, 0, 1000))


def test_uniform_moments():
    u = _pykernels.uniforms(99, 0, 200_000)
    assert abs(u.mean() - 0.5) < 4 * math.sqrt(1 / 12 / len(u))
    assert abs((u * u).mean() - 1 / 3) < 5e-3


@compiled
def test_uniforms_identical_across_backends():
    a = kernels.BACKENDS["compiled"].uniforms(2**63 + 5, 100, 4096)
    b = kernels.BACKENDS["python"].uniforms(2**63 + 5, 100, 4096)
    assert np.array_equal(np.asarray(a), np.asarray(b))


@compiled
@pytest.mark.parametrize("args,bar", [((2,), False), ((2, 1), True), ((3, 1, 1), False), ((4, 2, 1), True)])
def test_nested_sums_parity(args, bar):
    sc, tc = kernels.BACKENDS["compiled"].nested_sums(args, bar, 20000, 8)
    sp, tp = kernels.BACKENDS["python"].nested_sums(args, bar, 20000, 8)
    assert np.allclose(sc, sp, rtol=1e-13, atol=1e-15)
    assert np.allclose(tc, tp, rtol=1e-13, atol=1e-15)


@compiled
def test_norm_moment_block_parity():
    a = kernels.BACKENDS["compiled"].norm_moment_block(3, 0, 50_000, 3, 20.0, 1.0)
    b = kernels.BACKENDS["python"].norm_moment_block(3, 0, 50_000, 3, 20.0, 1.0)
    # only the summation order differs
    assert a[0] == pytest.approx(b[0], rel=1e-12)
    assert a[1] == pytest.approx(b[1], rel=1e-12)


def test_nested_sums_exact_small():
    suffix, tail = _pykernels.nested_sums((2, 1), False, 4, 2)
    # zeta_4(1) and zeta_4(2,1) by hand
    h = 1 + 1 / 2 + 1 / 3 + 1 / 4
    z21 = 1 / 4 + (1 + 1 / 2) / 9 + (1 + 1 / 2 + 1 / 3) / 16
    assert suffix == pytest.approx([z21, h], rel=1e-15)
    assert tail[-1] == pytest.approx(z21, rel=1e-15)
    assert tail[-2] == pytest.approx(z21 - (1 + 1 / 2 + 1 / 3) / 16, rel=1e-15)


def test_nested_sums_alternating():
    suffix, _ = _pykernels.nested_sums((1,), True, 100_000, 4)
    assert abs(suffix[0] + math.log(2)) < 1e-5


@pytest.mark.parametrize("name", sorted(kernels.BACKENDS))
def test_block_deterministic(name):
    k = kernels.BACKENDS[name]
    assert k.norm_moment_block(1, 0, 10_000, 2, 5.0, 2.0) == k.norm_moment_block(1, 0, 10_000, 2, 5.0, 2.0)


def test_norm_block_small_against_loop():
    count, r, n, s = 50, 3, 7.0, 1.5
    u = _pykernels.uniforms(11, 0, count * r).reshape(count, r)
    ref = [sum(x**n for x in row) ** (s / n) for row in u]
    tot, sq = _pykernels.norm_moment_block(11, 0, count, r, n, s)
    assert tot == pytest.approx(math.fsum(ref), rel=1e-13)
    assert sq == pytest.approx(math.fsum(v * v for v in ref), rel=1e-13)


def test_domain_errors():
    with pytest.raises(ValueError):
        _pykernels.nested_sums((), False, 10, 2)
    with pytest.raises(ValueError):
        _pykernels.nested_sums((2,), False, 10, 10)
    with pytest.raises(ValueError):
        _pykernels.norm_moment_block(1, 0, 10, 0, 2.0, 1.0)


def test_use_backend():
    current = kernels.backend()
    try:
        kernels.use_backend("python")
        assert kernels.backend() == "python"
        with pytest.raises(ValueError):
            kernels.use_backend("fortran")
        assert kernels.backend() == "python"
    finally:
        kernels.use_backend(current)
