"""Branch-tracked logarithms, loop continuation and winding numbers."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .errors import ContinuationError, DomainError, WindingRejected

TWO_PI = 2.0 * math.pi
MAX_STEP = math.pi / 2
MAX_DOUBLINGS = 20
MIN_SAMPLES = 8


@dataclass(frozen=True)
class BranchedPoint:
    """A nonzero complex number together with one chosen value of its log."""

    point: complex
    log_value: complex

    def __post_init__(self):
        object.__setattr__(self, "point", complex(self.point))
        object.__setattr__(self, "log_value", complex(self.log_value))
        if self.point == 0:
            raise DomainError("BranchedPoint requires a nonzero point")
        if not (cmath.isfinite(self.point) and cmath.isfinite(self.log_value)):
            raise DomainError("BranchedPoint fields must be finite")
        if abs(cmath.exp(self.log_value) - self.point) > 1e-12 * abs(self.point):
            raise DomainError(
                f"log_value {self.log_value} is not a logarithm of {self.point}"
            )

    def shifted(self, sheets: int = 1) -> "BranchedPoint":
        """Same point, log_value moved by 2*pi*i*sheets."""
        return BranchedPoint(self.point, self.log_value + complex(0.0, TWO_PI * sheets))

    @property
    def theta(self) -> float:
        return self.log_value.imag


@dataclass(frozen=True)
class WindingResult:
    winding: int
    residual: float

    def __post_init__(self):
        if not self.residual < math.pi:
            raise WindingRejected(f"winding residual {self.residual} >= pi")


@dataclass(frozen=True)
class LoopPath:
    """Ordered nonzero samples along a path; ``closed`` joins last to first."""

    samples: np.ndarray
    closed: bool = True

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.complex128)
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)
        if s.ndim != 1 or s.size < MIN_SAMPLES:
            raise DomainError(f"a LoopPath needs at least {MIN_SAMPLES} samples")
        if np.any(s == 0):
            raise DomainError("a LoopPath may not pass through 0")

    @classmethod
    def circle(cls, radius=1.0, n=64, turns=1, center_angle=0.0):
        """Closed loop ``radius*exp(i t)`` traversed ``turns`` times (negative = CW)."""
        if turns == 0:
            raise DomainError("use a constant path for zero turns")
        count = n * abs(turns)
        t = center_angle + TWO_PI * turns * np.arange(count) / count
        return cls(radius * np.exp(1j * t), closed=True)

    @classmethod
    def from_function(cls, func, t0=0.0, t1=TWO_PI, n=64, closed=True,
                      max_doublings=MAX_DOUBLINGS):
        """Sample ``func`` adaptively on [t0, t1] (see :func:`sample_loop`)."""
        _, values = sample_loop(func, t0, t1, n=n, closed=closed, max_doublings=max_doublings)
        return cls(values, closed=closed)


def principal_branch(z) -> BranchedPoint:
    """Principal logarithm, arg in (-pi, pi]."""
    z = complex(z)
    if z == 0:
        raise DomainError("log(0) is undefined")
    # cmath.log uses atan2, which returns pi (not -pi) on the negative axis
    # for +0.0 imaginary parts; normalise -0.0 so the half-open convention holds.
    if z.imag == 0.0:
        z = complex(z.real, 0.0)
    log = cmath.log(z)
    if log.imag == -math.pi:
        # arg of z just below the negative axis can round to -pi
        log = complex(log.real, math.pi)
    return BranchedPoint(z, log)


def continue_branch(start: BranchedPoint, path: LoopPath) -> BranchedPoint:
    """Carry ``start.log_value`` continuously along ``path``.

    For a closed path the endpoint is the start point again and the log has
    moved by 2*pi*i times the winding of the path about 0.
    """
    s = path.samples
    if abs(s[0] - start.point) > 1e-9 * abs(start.point):
        raise ContinuationError("path does not begin at the start point")
    steps = kernels.step_angles(s, path.closed)
    if steps.size and np.max(np.abs(steps)) >= MAX_STEP:
        raise ContinuationError(
            "angular jump >= pi/2 between consecutive samples; refine the path"
        )
    total_arg = float(steps.sum())
    if path.closed:
        end = start.point
        # modulus returns to its start exactly
        log_end = complex(start.log_value.real, start.log_value.imag + total_arg)
    else:
        end = complex(s[-1])
        log_end = complex(math.log(abs(end)), start.log_value.imag + total_arg)
    return BranchedPoint(end, log_end)


def winding_number(values, closed: bool = True) -> WindingResult:
    """Winding of sampled nonvanishing values about 0.

    Consecutive samples must be less than pi/2 apart in angle; callers that
    cannot guarantee this should go through :func:`sample_loop`.
    """
    v = np.asarray(values, dtype=np.complex128)
    if v.size == 0:
        raise DomainError("no samples")
    if np.any(v == 0) or not np.all(np.isfinite(v)):
        raise WindingRejected("zero or non-finite sample in winding computation")
    total, biggest = kernels.unwrap_sum(v, closed)
    if biggest >= MAX_STEP:
        raise WindingRejected(
            f"angular separation {biggest:.3f} >= pi/2; samples too coarse"
        )
    turns = total / TWO_PI
    k = round(turns)
    return WindingResult(int(k), abs(total - TWO_PI * k))


def sample_loop(func: Callable[[np.ndarray], np.ndarray], t0=0.0, t1=TWO_PI, n=64,
                closed=True, max_doublings=MAX_DOUBLINGS):
    """Evaluate ``func`` on a grid over [t0, t1], refining until steps < pi/2.

    ``func`` maps a parameter array to complex values.  For closed loops the
    right endpoint is omitted (it coincides with t0).  Offending intervals are
    bisected by midpoint insertion, at most ``max_doublings`` times.
    Returns ``(params, values)``.
    """
    if closed:
        t = t0 + (t1 - t0) * np.arange(n) / n
    else:
        t = np.linspace(t0, t1, n)
    v = np.asarray(func(t), dtype=np.complex128)
    for _ in range(max_doublings + 1):
        if np.any(v == 0) or not np.all(np.isfinite(v)):
            raise WindingRejected("sampled function vanishes or overflows on the loop")
        steps = kernels.step_angles(v, closed)
        bad = np.flatnonzero(np.abs(steps) >= MAX_STEP)
        if bad.size == 0:
            return t, v
        if _ == max_doublings:
            break
        t_next = np.append(t, t1) if closed else t
        mids = 0.5 * (t_next[bad] + t_next[bad + 1])
        vm = np.asarray(func(mids), dtype=np.complex128)
        t = np.insert(t, bad + 1, mids)
        v = np.insert(v, bad + 1, vm)
    raise WindingRejected(
        f"angular steps still >= pi/2 after {max_doublings} refinements"
    )


def adaptive_winding(func, t0=0.0, t1=TWO_PI, n=64, max_doublings=MAX_DOUBLINGS):
    """Winding number of a closed parametrised loop; also returns the sample count."""
    _, v = sample_loop(func, t0, t1, n=n, closed=True, max_doublings=max_doublings)
    return winding_number(v, closed=True), v.size
