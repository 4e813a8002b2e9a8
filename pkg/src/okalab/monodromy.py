"""Factor-of-automorphy extraction and Chern pairings on coordinate tori.

The pairing of c1(L(D_f)) with the torus |z| = r_z, |w| = r_w is the winding
number, over the w-circle, of the multiplier that f picks up when z runs once
around its circle.  ``torus_intersection_count`` gets the same integer by
locating where the sheets of the divisor cross the torus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .branchlog import BranchedPoint, sample_loop, winding_number
from .errors import DivisorMeetsTorusError, DomainError, TransversalityError
from .steinfn import (
    DEFAULT_BUDGET,
    EvalResult,
    ShiftParam,
    TruncationBudget,
    batch_core,
    _core,
    exp_neg,
)

TWO_PI = 2.0 * math.pi
ZERO_FACTOR = 10.0


@dataclass(frozen=True)
class SteinFactor:
    """F_{sign, lambda}(l, w) = core(sign * l, e^{-lambda} w)."""

    sign: int
    lam: complex = 0j

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DomainError("sign must be +1 or -1")
        object.__setattr__(self, "lam", complex(self.lam))

    @property
    def tag(self) -> str:
        base = "fplus" if self.sign == 1 else "fminus"
        return base if self.lam == 0 else f"{base}_lam({self.lam.real:g},{self.lam.imag:g})"


@dataclass(frozen=True)
class FunctionHandle:
    """A finite product of Stein functions, evaluable at single points or in batch."""

    factors: tuple[SteinFactor, ...]
    tag: str = field(default="")

    def __post_init__(self):
        if not self.factors:
            raise DomainError("a handle needs at least one factor")
        if not self.tag:
            object.__setattr__(self, "tag", "*".join(f.tag for f in self.factors))

    def __call__(self, zb: BranchedPoint, w, budget: TruncationBudget = DEFAULT_BUDGET) -> EvalResult:
        w = complex(w)
        if w == 0:
            raise DomainError("w must be nonzero")
        result = None
        for f in self.factors:
            r = _core(f.sign * zb.log_value, exp_neg(f.lam) * w, budget)
            result = r if result is None else result * r
        return result

    def __mul__(self, other: "FunctionHandle") -> "FunctionHandle":
        return FunctionHandle(self.factors + other.factors)

    def batch(self, ell, w, budget: TruncationBudget = DEFAULT_BUDGET):
        """(values, rel bounds, scales) on broadcast arrays of log z and w."""
        values = bounds = scales = None
        for f in self.factors:
            v, b, s, _, _ = batch_core(f.sign * np.asarray(ell), exp_neg(f.lam) * np.asarray(w), budget)
            if values is None:
                values, bounds, scales = v, b, s
            else:
                values, bounds, scales = values * v, (1 + bounds) * (1 + b) - 1, scales * s
        return values, bounds, scales

    def exponent_row(self) -> int:
        """Exponent of w in the z-loop multiplier (F+ gives w, F- gives 1/w)."""
        return sum(f.sign for f in self.factors)

    def exponent_matrix(self):
        from .bundlecalc import ExponentMatrix

        return ExponentMatrix(((0, self.exponent_row()), (0, 0)))


def fplus() -> FunctionHandle:
    return FunctionHandle((SteinFactor(1),))


def fminus() -> FunctionHandle:
    return FunctionHandle((SteinFactor(-1),))


def fplus_shift(lam) -> FunctionHandle:
    lam = lam.lam if isinstance(lam, ShiftParam) else complex(lam)
    return FunctionHandle((SteinFactor(1, lam),))


HANDLE_NAMES = ("fplus", "fminus", "fplus_lam")


def handle_from_spec(spec: str, lam=1.0) -> FunctionHandle:
    """Parse ``fplus``, ``fminus``, ``fplus_lam`` and ``*``-products of them."""
    parts = [p.strip().lower() for p in spec.split("*")]
    out = None
    for p in parts:
        if p in ("fplus", "f+"):
            h = fplus()
        elif p in ("fminus", "f-"):
            h = fminus()
        elif p in ("fplus_lam", "fplus_lambda", "f+lam"):
            h = fplus_shift(lam)
        else:
            raise DomainError(f"unknown handle {p!r}")
        out = h if out is None else out * h
    return out


@dataclass(frozen=True)
class TorusCycle:
    r_z: float = 1.0
    r_w: float = 1.3
    orientation: int = 1

    def __post_init__(self):
        if not (self.r_z > 0 and self.r_w > 0):
            raise DomainError("torus radii must be positive")
        if self.orientation not in (1, -1):
            raise DomainError("orientation must be +1 or -1")

    def reversed(self) -> "TorusCycle":
        return TorusCycle(self.r_z, self.r_w, -self.orientation)


DEFAULT_TORUS = TorusCycle()


@dataclass(frozen=True)
class PairingResult:
    pairing: int
    residual: float
    samples_used: int


def _check_nonzero(res: EvalResult, where: str):
    if not res.is_nonzero(ZERO_FACTOR):
        raise DivisorMeetsTorusError(f"function vanishes to certified precision at {where}")


def z_loop_factor(f: FunctionHandle, zb: BranchedPoint, w,
                  budget: TruncationBudget = DEFAULT_BUDGET) -> complex:
    """Multiplier acquired by f when z runs once anticlockwise around 0."""
    base = f(zb, w, budget)
    moved = f(zb.shifted(1), w, budget)
    _check_nonzero(base, f"(log z={zb.log_value}, w={w})")
    _check_nonzero(moved, f"(log z={zb.log_value}+2 pi i, w={w})")
    return moved.value / base.value


def w_loop_factor(f: FunctionHandle, zb: BranchedPoint, w,
                  budget: TruncationBudget = DEFAULT_BUDGET, n: int = 64) -> complex:
    """Endpoint/start ratio of f continued once around |w'| = |w|."""
    w = complex(w)
    if w == 0:
        raise DomainError("w must be nonzero")
    r, phi = abs(w), math.atan2(w.imag, w.real)

    def along(t):
        values, bounds, scales = f.batch(zb.log_value, r * np.exp(1j * (phi + t)), budget)
        if np.any(np.abs(values) <= ZERO_FACTOR * bounds * scales):
            raise DivisorMeetsTorusError("f vanishes on the w-circle")
        return values

    sample_loop(along, 0.0, TWO_PI, n=n, closed=False)
    start = f(zb, w, budget)
    end = f(zb, r * complex(math.cos(phi + TWO_PI), math.sin(phi + TWO_PI)), budget)
    _check_nonzero(start, f"w={w}")
    return end.value / start.value


def chern_pairing(f: FunctionHandle, T: TorusCycle = DEFAULT_TORUS,
                  budget: TruncationBudget = DEFAULT_BUDGET, n: int = 64) -> PairingResult:
    """<c1(L(D_f)), T> as the winding of the z-loop multiplier over |w| = r_w.

    f is evaluated on both ends of the z-loop (log r_z and log r_z + 2 pi i)
    at every w sample; any sample that cannot be certified nonzero aborts.
    """
    ell0 = complex(math.log(T.r_z), 0.0)
    ell1 = complex(math.log(T.r_z), TWO_PI)

    def multiplier(t):
        w = T.r_w * np.exp(1j * t)
        v0, b0, s0 = f.batch(ell0, w, budget)
        v1, b1, s1 = f.batch(ell1, w, budget)
        if np.any(np.abs(v0) <= ZERO_FACTOR * b0 * s0) or np.any(np.abs(v1) <= ZERO_FACTOR * b1 * s1):
            raise DivisorMeetsTorusError(
                f"{f.tag} vanishes on the torus r_z={T.r_z}, r_w={T.r_w}; move the radii"
            )
        return v1 / v0

    _, values = sample_loop(multiplier, 0.0, TWO_PI, n=n, closed=True)
    wr = winding_number(values, closed=True)
    return PairingResult(T.orientation * wr.winding, wr.residual, int(values.size))


def _sheet_log_modulus(factor: SteinFactor, log_rz: float, phi, k: int):
    # sheet k of the factor over z = r_z e^{i phi}, continued from phi = 0:
    # w = e^{lambda} exp(i * sign * l + 2 k pi), l = log r_z + i phi
    return factor.lam.real - factor.sign * phi + TWO_PI * k


def torus_intersection_count(f: FunctionHandle, T: TorusCycle = DEFAULT_TORUS,
                             grid: int = 256, slope_floor: float = 1e-3) -> int:
    """Signed count of sheet crossings with the torus as z runs once around.

    Each sheet of each factor is followed over phi in [0, 2 pi); a crossing
    is a root of log|w_k(phi)| - log r_w, bracketed on a grid and refined by
    bisection.  A crossing counts +1 when |w_k| decreases through r_w (the
    orientation of D+ against CCW x CCW), -1 when it increases, times the
    torus orientation.  Arguments of the sheets are irrelevant since the torus
    contains the whole w-circle.
    """
    log_rw = math.log(T.r_w)
    log_rz = math.log(T.r_z)
    phis = np.linspace(0.0, TWO_PI, grid + 1)
    total = 0
    for fac in f.factors:
        lo_mod = fac.lam.real - TWO_PI - 1.0
        hi_mod = fac.lam.real + TWO_PI + 1.0
        k_lo = math.floor((log_rw - hi_mod) / TWO_PI) - 1
        k_hi = math.ceil((log_rw - lo_mod) / TWO_PI) + 1
        for k in range(k_lo, k_hi + 1):
            h = _sheet_log_modulus(fac, log_rz, phis, k) - log_rw
            for j in range(grid):
                a, b = h[j], h[j + 1]
                if a == 0.0:
                    root = phis[j]
                elif a * b < 0:
                    root = _bisect(lambda p: _sheet_log_modulus(fac, log_rz, p, k) - log_rw,
                                   phis[j], phis[j + 1])
                else:
                    continue
                if not (0.0 <= root < TWO_PI):
                    continue
                d = 1e-6
                slope = (_sheet_log_modulus(fac, log_rz, root + d, k)
                         - _sheet_log_modulus(fac, log_rz, root - d, k)) / (2 * d)
                if abs(slope) < slope_floor:
                    raise TransversalityError(f"tangential crossing at phi={root}")
                total += 1 if slope < 0 else -1
    return T.orientation * total


def _bisect(g, a, b, iters=80):
    ga = g(a)
    for _ in range(iters):
        m = 0.5 * (a + b)
        gm = g(m)
        if gm == 0.0:
            return m
        if (gm < 0) == (ga < 0):
            a, ga = m, gm
        else:
            b = m
    return 0.5 * (a + b)
