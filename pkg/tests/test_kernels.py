import numpy as np
import pytest

from okalab import kernels
from okalab._accel import HAS_NUMBA
from okalab.steinfn import truncation_orders

needs_numba = pytest.mark.skipif(not HAS_NUMBA, reason="numba kernels disabled")


def _inputs(rng, size=300):
    ell = rng.uniform(-1.5, 1.5, size) + 1j * rng.uniform(-9, 9, size)
    w = np.exp(rng.uniform(-1.5, 1.5, size) + 1j * rng.uniform(-np.pi, np.pi, size))
    n, m, _ = truncation_orders(ell.imag, np.abs(w))
    return ell, w, n, m


def test_numpy_product_is_the_literal_product(rng):
    ell, w, n, m = _inputs(rng, 20)
    v, scale, _ = kernels.stein_product_numpy(ell, w, n, m)
    for j in range(ell.size):
        ref = np.exp(ell[j] ** 2 / (4 * np.pi) + ell[j] / (1 - 1j))
        for nu in range(n[j]):
            ref *= 1 - w[j] / np.exp(1j * ell[j] + 2 * nu * np.pi)
        for mu in range(1, m[j] + 1):
            ref *= 1 - np.exp(1j * ell[j] - 2 * mu * np.pi) / w[j]
        assert abs(v[j] - ref) <= 1e-13 * scale[j]


@needs_numba
def test_stein_product_backends_agree(rng):
    ell, w, n, m = _inputs(rng)
    a = kernels.stein_product_numpy(ell, w, n, m)
    b = kernels.stein_product_numba(ell, w, n, m)
    np.testing.assert_allclose(b[0], a[0], rtol=0, atol=1e-14 * a[1].max())
    np.testing.assert_allclose(b[1], a[1], rtol=1e-13)
    np.testing.assert_allclose(b[2], a[2], rtol=1e-12)


@needs_numba
@pytest.mark.parametrize("closed", [True, False])
def test_unwrap_backends_agree(rng, closed):
    v = np.exp(1j * np.cumsum(rng.uniform(-1, 1, 500))) * rng.uniform(0.5, 2, 500)
    a = kernels.unwrap_sum_numpy(v, closed)
    b = kernels.unwrap_sum_numba(v, closed)
    assert a == pytest.approx(b, abs=1e-12)
    np.testing.assert_allclose(kernels.step_angles_numba(v, closed), kernels.step_angles_numpy(v, closed), atol=1e-15)


@needs_numba
def test_expsum_backends_agree(rng):
    zeta = rng.normal(size=200) + 1j * rng.normal(size=200)
    freqs = np.array([0, 1, 1j, 1 - 1j], dtype=complex)
    coeffs = np.array([-2, 1, 1, 0.5j], dtype=complex)
    a = kernels.expsum_numpy(zeta, freqs, coeffs)
    b = kernels.expsum_numba(zeta, freqs, coeffs)
    np.testing.assert_allclose(b[0], a[0], rtol=1e-13, atol=1e-13)
    np.testing.assert_allclose(b[1], a[1], rtol=1e-13)


def test_unwrap_counts_turns():
    t = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    total, biggest = kernels.unwrap_sum(np.exp(3j * t), True)
    assert total == pytest.approx(6 * np.pi)
    assert biggest == pytest.approx(6 * np.pi / 64)
