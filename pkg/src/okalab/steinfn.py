"""Certified evaluation of Stein's functions F+, F- and the shifted F+_lambda.

With l a chosen branch of log z,

    F+(z, w) = exp(l^2/(4 pi) + l/(1-i))
               * prod_{nu>=0} (1 - w / e^{i l + 2 nu pi})
               * prod_{mu>=1} (1 - 1 / (w e^{-i l + 2 mu pi}))

vanishes exactly on the sheets w = e^{i l + 2 k pi} of w = z^i.  F- is the
same expression with l replaced by -l, and F+_lambda(z, w) = F+(z, e^{-lambda} w).

Both products converge geometrically (ratio e^{-2 pi}).  The truncation is
chosen per point so that the certified relative bound

    |Prod(1 - a) - 1| <= exp(sum |a|) - 1

on the discarded tails, plus a running bound on floating-point rounding,
meets the requested target.  Rounding is bounded relative to ``scale``
(the product of factor magnitudes), so near a zero the bound is absolute.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .branchlog import BranchedPoint, WindingResult, adaptive_winding
from .errors import BoundaryProximityError, BudgetExhausted, DomainError

TWO_PI = 2.0 * math.pi
Q = math.exp(-TWO_PI)
EPS = float(np.finfo(float).eps)
SHEET_GUARD = 50


@dataclass(frozen=True)
class TruncationBudget:
    target_rel_error: float = 1e-12
    max_terms: int = 1000

    def __post_init__(self):
        if not self.target_rel_error >= 1e-15:
            raise DomainError("target_rel_error below 1e-15 cannot be certified in double precision")
        if not (1 <= self.max_terms <= 10_000):
            raise DomainError("max_terms must lie in [1, 10000]")


DEFAULT_BUDGET = TruncationBudget()


@dataclass(frozen=True)
class EvalResult:
    """A function value with its certified relative error bound.

    ``scale`` is |prefactor| * prod(1 + |a|) over the evaluated factors: the
    size the value would have without cancellation.  A value is treated as
    distinguishable from zero when ``|value| > 10 * rel_error_bound * scale``.
    """

    value: complex
    rel_error_bound: float
    nu_terms: int
    mu_terms: int
    scale: float = 1.0

    def is_nonzero(self, factor=10.0) -> bool:
        return abs(self.value) > factor * self.rel_error_bound * self.scale

    def __mul__(self, other: "EvalResult") -> "EvalResult":
        return EvalResult(
            self.value * other.value,
            (1 + self.rel_error_bound) * (1 + other.rel_error_bound) - 1,
            max(self.nu_terms, other.nu_terms),
            max(self.mu_terms, other.mu_terms),
            self.scale * other.scale,
        )


@dataclass(frozen=True)
class ShiftParam:
    lam: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "lam", complex(self.lam))

    def factor(self) -> complex:
        """e^{-lambda}, with Im(lambda) reduced mod 2*pi first."""
        return exp_neg(self.lam)

    def disjoint_from_dplus(self) -> bool:
        """Re(lambda) not in 2*pi*Z, the condition for D+_lambda and D+ to be disjoint."""
        r = math.remainder(self.lam.real, TWO_PI)
        return abs(r) > 1e-12 * max(1.0, abs(self.lam.real))


def exp_neg(lam: complex) -> complex:
    # reducing the angle makes exp(-2 pi i m) exactly 1
    t = math.fmod(-lam.imag, TWO_PI)
    return math.exp(-lam.real) * complex(math.cos(t), math.sin(t))


# -- truncation -----------------------------------------------------------------


def _tail_sum(theta, absw, n_terms, m_terms):
    # nu-tail starts at N with moduli |w| e^{theta - 2 nu pi};
    # mu-tail starts at M+1 with moduli e^{-theta - 2 mu pi} / |w|.
    head_nu = absw * np.exp(theta - TWO_PI * n_terms)
    head_mu = np.exp(-theta - TWO_PI * (m_terms + 1)) / absw
    return (head_nu + head_mu) / (1.0 - Q)


def truncation_bound(theta, absw, n_terms, m_terms):
    """Certified relative effect of dropping both tails."""
    e = np.expm1(_tail_sum(theta, absw, n_terms, m_terms))
    return e / (1.0 - e)


def truncation_orders(theta, absw, budget: TruncationBudget = DEFAULT_BUDGET):
    """Minimal (N, M, truncation bound) for sheet-log theta and |w|.

    Works elementwise on arrays.  ``theta`` is Im(l) of the (sign-adjusted)
    branch and ``absw`` the modulus of the (shifted) w.  Each tail gets an
    eighth of the target, leaving half of it for rounding; the first
    discarded term of each tail is below 1/2.
    """
    theta = np.asarray(theta, dtype=float)
    absw = np.asarray(absw, dtype=float)
    t = budget.target_rel_error
    log_a = np.log(absw) + theta
    log_b = -theta - np.log(absw)
    need = math.log(t * (1.0 - Q) / 8.0)
    half = math.log(2.0)
    n = np.maximum(np.ceil((log_a - need) / TWO_PI), np.floor((log_a + half) / TWO_PI) + 1)
    m = np.maximum(np.ceil((log_b - need) / TWO_PI), np.floor((log_b + half) / TWO_PI) + 1) - 1
    n = np.maximum(n, 0).astype(np.int64)
    m = np.maximum(m, 0).astype(np.int64)
    bound = truncation_bound(theta, absw, n, m)
    if np.any(n > budget.max_terms) or np.any(m > budget.max_terms):
        raise BudgetExhausted(
            f"more than max_terms={budget.max_terms} factors needed per product"
        )
    return n, m, bound


def _certify(trunc, rounding, budget):
    total = trunc + rounding
    if np.any(total > budget.target_rel_error):
        raise BudgetExhausted(
            f"rounding error {float(np.max(rounding)):.3g} leaves no room for "
            f"the target {budget.target_rel_error:g}"
        )
    return total


# -- scalar evaluation --------------------------------------------------------------


def _sheet(ell: complex, k: int) -> complex:
    # exp(i l + 2 k pi), the single formula shared with sheet_point
    return cmath.exp(complex(TWO_PI * k - ell.imag, ell.real))


def _core(ell: complex, w: complex, budget: TruncationBudget) -> EvalResult:
    w = complex(w)
    if w == 0:
        raise DomainError("w must be nonzero")
    if not (cmath.isfinite(w) and cmath.isfinite(ell)):
        raise DomainError("non-finite input")
    n_arr, m_arr, t_arr = truncation_orders(ell.imag, abs(w), budget)
    n, m = int(n_arr), int(m_arr)
    pre_arg = ell * ell / (4.0 * math.pi) + ell / complex(1.0, -1.0)
    value = cmath.exp(pre_arg)
    scale = math.exp(pre_arg.real)
    absl = abs(ell)
    rounding = EPS * (3.0 * absl * absl / (4.0 * math.pi) + 2.0 * absl + 4.0)
    for nu in range(n):
        s = _sheet(ell, nu)
        # (s - w)/s rather than 1 - w/s: exactly zero on a sheet
        value *= (s - w) / s
        scale *= 1.0 + abs(w / s)
        rounding += EPS * (abs(complex(TWO_PI * nu - ell.imag, ell.real)) + 5.0)
    for mu in range(1, m + 1):
        s = _sheet(ell, -mu)
        value *= (w - s) / w
        scale *= 1.0 + abs(s / w)
        rounding += EPS * (abs(complex(-TWO_PI * mu - ell.imag, ell.real)) + 5.0)
    if not (cmath.isfinite(value) and math.isfinite(scale)):
        raise BudgetExhausted("product overflowed double precision")
    bound = float(_certify(float(t_arr), rounding, budget))
    return EvalResult(value, bound, n, m, scale)


def eval_fplus(zb: BranchedPoint, w, budget: TruncationBudget = DEFAULT_BUDGET) -> EvalResult:
    """F+(z, w) on the branch carried by ``zb``."""
    return _core(zb.log_value, w, budget)


def eval_fminus(zb: BranchedPoint, w, budget: TruncationBudget = DEFAULT_BUDGET) -> EvalResult:
    """F-(z, w): exponent sign and both products taken with -log z."""
    return _core(-zb.log_value, w, budget)


def eval_fplus_shift(lam, zb: BranchedPoint, w, budget: TruncationBudget = DEFAULT_BUDGET) -> EvalResult:
    lam = lam if isinstance(lam, ShiftParam) else ShiftParam(lam)
    w = complex(w)
    if w == 0:
        raise DomainError("w must be nonzero")
    return eval_fplus(zb, lam.factor() * w, budget)


def sheet_point(zb: BranchedPoint, k: int) -> complex:
    """k-th sheet w_k = exp(i log z + 2 k pi) of the divisor D+ over zb."""
    if abs(k) > SHEET_GUARD:
        raise DomainError(f"|k| > {SHEET_GUARD} risks overflow")
    return _sheet(zb.log_value, int(k))


def sheet_moduli_between(theta: float, r1: float, r2: float) -> list[int]:
    """All k with r1 < e^{-theta + 2 k pi} < r2."""
    lo = math.floor((math.log(r1) + theta) / TWO_PI) - 1
    hi = math.ceil((math.log(r2) + theta) / TWO_PI) + 1
    return [k for k in range(lo, hi + 1) if r1 < math.exp(TWO_PI * k - theta) < r2]


# -- batch evaluation ----------------------------------------------------------------


def batch_core(ell, w, budget: TruncationBudget = DEFAULT_BUDGET):
    """Vectorised F+ core: returns (values, bounds, scales, n_terms, m_terms)."""
    ell = np.asarray(ell, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    ell, w = np.broadcast_arrays(ell, w)
    if np.any(w == 0):
        raise DomainError("w must be nonzero")
    n, m, trunc = truncation_orders(ell.imag, np.abs(w), budget)
    values, scales, rounding = kernels.stein_product(ell.ravel(), w.ravel(), n.ravel(), m.ravel())
    if not (np.all(np.isfinite(values)) and np.all(np.isfinite(scales))):
        raise BudgetExhausted("product overflowed double precision")
    bound = _certify(trunc, rounding.reshape(ell.shape), budget)
    return (values.reshape(ell.shape), bound, scales.reshape(ell.shape), n, m)


# -- zero counting ---------------------------------------------------------------------


def zero_count_annulus(zb: BranchedPoint, r1: float, r2: float,
                       budget: TruncationBudget = DEFAULT_BUDGET) -> WindingResult:
    """Zeros of w -> F+(zb, w) in r1 < |w| < r2 via the argument principle."""
    if not (0 < r1 < r2):
        raise DomainError("need 0 < r1 < r2")
    theta = zb.theta
    for r in (r1, r2):
        k = round((math.log(r) + theta) / TWO_PI)
        for kk in (k - 1, k, k + 1):
            sheet = math.exp(TWO_PI * kk - theta)
            if abs(r - sheet) <= 1e-3 * sheet:
                raise BoundaryProximityError(
                    f"circle |w|={r} is within 1e-3 of the sheet modulus {sheet}"
                )
    ell = zb.log_value

    def on_circle(radius):
        def f(t):
            values, *_ = batch_core(ell, radius * np.exp(1j * t), budget)
            return values
        return f

    outer, _ = adaptive_winding(on_circle(r2))
    inner, _ = adaptive_winding(on_circle(r1))
    return WindingResult(outer.winding - inner.winding, outer.residual + inner.residual)
