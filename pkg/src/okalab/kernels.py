"""Batch kernels for the sampling loops.

Every kernel exists twice: a ``@njit`` loop version and a vectorised numpy
version.  ``OKALAB_DISABLE_NUMBA=1`` selects the numpy ones at import time;
both are importable explicitly (``*_numba`` / ``*_numpy``) for benchmarking
and cross-checks.  Phase unwrapping always dispatches to numpy, which
measured faster than the compiled loop.
"""

import math

import numpy as np

from ._accel import HAS_NUMBA, njit, prange

TWO_PI = 2.0 * math.pi
INV_FOUR_PI = 1.0 / (4.0 * math.pi)
# 1/(1-i) = (1+i)/2
INV_ONE_MINUS_I = complex(0.5, 0.5)
EPS = float(np.finfo(np.float64).eps)


# -- truncated Stein product -------------------------------------------------
#
# value = exp(l^2/(4 pi) + l/(1-i))
#         * prod_{nu=0}^{N-1} (1 - w/s_nu) * prod_{mu=1}^{M} (1 - s_{-mu}/w)
# with sheets s_k = exp(i l + 2 k pi).  ``scale`` is |prefactor| * prod(1+|a|),
# the magnitude the product would have without cancellation.  ``rounding``
# bounds the floating-point error relative to ``scale``: exp(x) inherits
# eps*|x| from its rounded argument, plus a few ulps per factor for the exp
# itself, the subtraction and the multiply.


def stein_product_numpy(ell, w, n_terms, m_terms):
    ell = np.asarray(ell, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    n_terms = np.asarray(n_terms, dtype=np.int64)
    m_terms = np.asarray(m_terms, dtype=np.int64)
    pre_arg = ell * ell * INV_FOUR_PI + ell * INV_ONE_MINUS_I
    value = np.exp(pre_arg)
    scale = np.exp(pre_arg.real)
    absl = np.abs(ell)
    rounding = EPS * (3.0 * absl * absl * INV_FOUR_PI + 2.0 * absl + 4.0)
    theta = ell.imag
    sigma = ell.real
    phase = np.exp(1j * sigma)
    for nu in range(int(n_terms.max(initial=0))):
        mask = nu < n_terms
        x = TWO_PI * nu - theta
        a = w / (np.exp(x) * phase)
        value = np.where(mask, value * (1.0 - a), value)
        scale = np.where(mask, scale * (1.0 + np.abs(a)), scale)
        rounding = np.where(mask, rounding + EPS * (np.hypot(x, sigma) + 5.0), rounding)
    for mu in range(1, int(m_terms.max(initial=0)) + 1):
        mask = mu <= m_terms
        x = -TWO_PI * mu - theta
        a = (np.exp(x) * phase) / w
        value = np.where(mask, value * (1.0 - a), value)
        scale = np.where(mask, scale * (1.0 + np.abs(a)), scale)
        rounding = np.where(mask, rounding + EPS * (np.hypot(x, sigma) + 5.0), rounding)
    return value, scale, rounding


@njit(cache=True, parallel=True)
def stein_product_numba(ell, w, n_terms, m_terms):
    n = ell.shape[0]
    value = np.empty(n, dtype=np.complex128)
    scale = np.empty(n, dtype=np.float64)
    rounding = np.empty(n, dtype=np.float64)
    for j in prange(n):
        lj = ell[j]
        wj = w[j]
        pre_arg = lj * lj * INV_FOUR_PI + lj * INV_ONE_MINUS_I
        v = np.exp(pre_arg)
        sc = math.exp(pre_arg.real)
        absl = abs(lj)
        rnd = EPS * (3.0 * absl * absl * INV_FOUR_PI + 2.0 * absl + 4.0)
        theta = lj.imag
        sigma = lj.real
        phase = complex(math.cos(sigma), math.sin(sigma))
        for nu in range(n_terms[j]):
            x = TWO_PI * nu - theta
            a = wj / (math.exp(x) * phase)
            v *= 1.0 - a
            sc *= 1.0 + abs(a)
            rnd += EPS * (math.hypot(x, sigma) + 5.0)
        for mu in range(1, m_terms[j] + 1):
            x = -TWO_PI * mu - theta
            a = (math.exp(x) * phase) / wj
            v *= 1.0 - a
            sc *= 1.0 + abs(a)
            rnd += EPS * (math.hypot(x, sigma) + 5.0)
        value[j] = v
        scale[j] = sc
        rounding[j] = rnd
    return value, scale, rounding


# -- phase unwrapping ----------------------------------------------------------


def unwrap_sum_numpy(values, closed):
    """Sum of principal angle increments and the largest single step."""
    v = np.asarray(values, dtype=np.complex128)
    if closed:
        v = np.concatenate((v, v[:1]))
    steps = np.angle(v[1:] / v[:-1])
    if steps.size == 0:
        return 0.0, 0.0
    return float(steps.sum()), float(np.abs(steps).max())


@njit(cache=True)
def unwrap_sum_numba(values, closed):
    steps = step_angles_numba(values, closed)
    total = 0.0
    biggest = 0.0
    for d in steps:
        total += d
        if abs(d) > biggest:
            biggest = abs(d)
    return total, biggest


def step_angles_numpy(values, closed):
    v = np.asarray(values, dtype=np.complex128)
    if closed:
        v = np.concatenate((v, v[:1]))
    return np.angle(v[1:] / v[:-1])


@njit(cache=True)
def step_angles_numba(values, closed):
    n = values.shape[0]
    out = np.empty(n if closed else n - 1, dtype=np.float64)
    for j in range(n - 1):
        # arg(b/a) as atan2 of b*conj(a): no complex division
        p = values[j + 1] * values[j].conjugate()
        out[j] = math.atan2(p.imag, p.real)
    if closed:
        p = values[0] * values[n - 1].conjugate()
        out[n - 1] = math.atan2(p.imag, p.real)
    return out


# -- exponential sums ----------------------------------------------------------


def expsum_numpy(zeta, freqs, coeffs):
    """g(zeta) = sum_k c_k exp(f_k zeta) and sum_k |c_k exp(f_k zeta)|."""
    zeta = np.asarray(zeta, dtype=np.complex128)
    terms = coeffs[None, :] * np.exp(np.outer(zeta, freqs))
    return terms.sum(axis=1), np.abs(terms).sum(axis=1)


@njit(cache=True)
def expsum_numba(zeta, freqs, coeffs):
    n = zeta.shape[0]
    value = np.empty(n, dtype=np.complex128)
    scale = np.empty(n, dtype=np.float64)
    for j in range(n):
        acc = 0j
        mag = 0.0
        for k in range(freqs.shape[0]):
            t = coeffs[k] * np.exp(freqs[k] * zeta[j])
            acc += t
            mag += abs(t)
        value[j] = acc
        scale[j] = mag
    return value, scale


if HAS_NUMBA:
    def stein_product(ell, w, n_terms, m_terms):
        return stein_product_numba(
            np.ascontiguousarray(ell, dtype=np.complex128),
            np.ascontiguousarray(w, dtype=np.complex128),
            np.ascontiguousarray(n_terms, dtype=np.int64),
            np.ascontiguousarray(m_terms, dtype=np.int64),
        )

    def expsum(zeta, freqs, coeffs):
        return expsum_numba(
            np.ascontiguousarray(zeta, dtype=np.complex128),
            np.ascontiguousarray(freqs, dtype=np.complex128),
            np.ascontiguousarray(coeffs, dtype=np.complex128),
        )
else:
    stein_product = stein_product_numpy
    expsum = expsum_numpy

# vectorised atan2 beats the compiled loop here (see benchmarks/bench_kernels.py)
unwrap_sum = unwrap_sum_numpy
step_angles = step_angles_numpy
