"""Intersections of the entire curve f(zeta) = (e^zeta, e^{i zeta}) with divisors.

A Laurent polynomial P(z, w) = sum c_jk z^j w^k pulls back to the
exponential sum g(zeta) = sum c_jk e^{(j + i k) zeta}; zeros of g in
|zeta| < R are counted by the argument principle on the boundary circle.
The same machinery counts zeros of F+_lambda(f(zeta)) using the branch
log z = zeta, which is the natural lift along the curve.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from . import kernels
from .branchlog import adaptive_winding
from .errors import BoundaryProximityError, CurveContainedError, DomainError
from .steinfn import DEFAULT_BUDGET, TruncationBudget, batch_core, exp_neg

TWO_PI = 2.0 * math.pi
DEFAULT_SEED = 20260919
MARGIN = 1e-4
R_NUDGE = 1e-2
R_RETRIES = 10


@dataclass(frozen=True)
class LaurentPoly:
    """sum c * z^j * w^k; terms are (j, k, c) with distinct (j, k)."""

    terms: tuple[tuple[int, int, complex], ...]

    def __post_init__(self):
        terms = tuple((int(j), int(k), complex(c)) for j, k, c in self.terms)
        seen = set()
        for j, k, _ in terms:
            if (j, k) in seen:
                raise DomainError(f"duplicate monomial z^{j} w^{k}")
            seen.add((j, k))
        object.__setattr__(self, "terms", terms)

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Parse ``c*z^j*w^k +/- ...``; coefficients may be real, ``2.5``, or ``(1+2j)``."""
        s = text.replace(" ", "")
        if s in ("", "0"):
            return cls(())
        if s[0] not in "+-":
            s = "+" + s
        # a sign right after '^' belongs to the exponent
        pieces = re.findall(r"[+-](?:\([^)]*\)|\^-|[^+-])*", s)
        if "".join(pieces) != s:
            raise DomainError(f"cannot parse polynomial {text!r}")
        acc = {}
        for piece in pieces:
            sign = -1.0 if piece[0] == "-" else 1.0
            body = piece[1:]
            if not body:
                raise DomainError(f"dangling sign in {text!r}")
            coeff = complex(sign)
            j = k = 0
            for factor in body.split("*"):
                m = re.fullmatch(r"([zw])(?:\^\(?(-?\d+)\)?)?", factor)
                if m:
                    e = int(m.group(2) or 1)
                    if m.group(1) == "z":
                        j += e
                    else:
                        k += e
                    continue
                try:
                    coeff *= complex(factor.strip("()").replace("i", "j"))
                except ValueError as exc:
                    raise DomainError(f"bad factor {factor!r} in {text!r}") from exc
            acc[(j, k)] = acc.get((j, k), 0j) + coeff
        return cls(tuple((j, k, c) for (j, k), c in sorted(acc.items()) if c != 0))

    def frequencies(self) -> np.ndarray:
        return np.array([complex(j, k) for j, k, _ in self.terms], dtype=np.complex128)

    def coefficients(self) -> np.ndarray:
        return np.array([c for _, _, c in self.terms], dtype=np.complex128)


class ExpSum:
    """g(zeta) = sum c_jk exp((j + i k) zeta)."""

    def __init__(self, poly: LaurentPoly):
        self.poly = poly
        self.freqs = poly.frequencies()
        self.coeffs = poly.coefficients()

    def evaluate(self, zeta):
        """(values, scales); scale is the sum of term moduli."""
        zeta = np.atleast_1d(np.asarray(zeta, dtype=np.complex128))
        if self.freqs.size == 0:
            return np.zeros(zeta.shape, np.complex128), np.zeros(zeta.shape)
        return kernels.expsum(zeta, self.freqs, self.coeffs)

    def __call__(self, zeta):
        return self.evaluate(zeta)[0]


class SteinOnCurve:
    """zeta -> F+_lambda(e^zeta, e^{i zeta}) with log z = zeta."""

    def __init__(self, lam, budget: TruncationBudget = DEFAULT_BUDGET):
        self.lam = complex(lam)
        self.budget = budget

    def certified(self, zeta):
        """(values, rel bounds, scales)."""
        zeta = np.atleast_1d(np.asarray(zeta, dtype=np.complex128))
        w = exp_neg(self.lam) * np.exp(1j * zeta)
        values, bounds, scales, _, _ = batch_core(zeta, w, self.budget)
        return values, bounds, scales

    def evaluate(self, zeta):
        values, _, scales = self.certified(zeta)
        return values, scales

    def __call__(self, zeta):
        return self.evaluate(zeta)[0]


def compose_curve(P: LaurentPoly) -> ExpSum:
    return ExpSum(P)


def nondegenerate(P: LaurentPoly) -> bool:
    """g is not identically zero: distinct exponentials are linearly independent."""
    return any(c != 0 for _, _, c in P.terms)


@dataclass(frozen=True)
class CountResult:
    count: int
    radius: float
    residual: float
    samples_used: int = 0


def _target(target, budget):
    if isinstance(target, LaurentPoly):
        if not nondegenerate(target):
            raise DomainError("degenerate polynomial: g vanishes identically")
        return ExpSum(target), MARGIN
    if isinstance(target, (ExpSum, SteinOnCurve)):
        return target, MARGIN
    raise DomainError(f"unsupported target {type(target).__name__}")


def count_intersections(target, R: float, budget: TruncationBudget = DEFAULT_BUDGET,
                        n: int = 256) -> CountResult:
    """#{|zeta| < R : g(zeta) = 0} with multiplicity, by boundary winding.

    If g comes within the relative margin of 0 on the circle, R is nudged
    outward by 1e-2 up to ten times.  A target that vanishes identically on
    the circle (the curve lies in the divisor) raises CurveContainedError.
    """
    if not R > 0:
        raise DomainError("R must be positive")
    g, margin = _target(target, budget)
    if isinstance(g, SteinOnCurve):
        _check_not_contained(g)
    radius = float(R)
    for _ in range(R_RETRIES + 1):
        theta = TWO_PI * np.arange(4 * n) / (4 * n)
        values, scales = g.evaluate(radius * np.exp(1j * theta))
        if not np.any(np.abs(values) <= margin * scales):
            wr, used = adaptive_winding(lambda t: g(radius * np.exp(1j * t)), n=n)
            return CountResult(wr.winding, radius, wr.residual, used)
        radius += R_NUDGE
    raise BoundaryProximityError(f"zeros stay within the margin of |zeta| = {R} after nudging")


def _check_not_contained(g: SteinOnCurve):
    probe = np.array([0.0, 0.5 + 0.25j, -1.0 + 0.7j])
    values, bounds, scales = g.certified(probe)
    if np.all(np.abs(values) <= 10 * bounds * scales):
        raise CurveContainedError(
            f"F+_lambda vanishes identically on the curve for lambda={g.lam}: "
            "the curve lies in the divisor"
        )


def phi_map(zeta):
    zeta = np.asarray(zeta, dtype=np.complex128)
    return np.exp(zeta), np.exp(1j * zeta)


def phi_injectivity(sample_count: int = 1000, box_halfwidth: float = math.pi,
                    seed: int = DEFAULT_SEED, extra_pairs=()) -> bool:
    """No two sampled points of the box collide under Phi.

    Separation is measured coordinatewise relative to the larger modulus and
    must exceed 1e-12 in at least one coordinate.
    """
    if sample_count < 100:
        raise DomainError("sample_count must be >= 100")
    rng = np.random.default_rng(seed)
    h = box_halfwidth
    z1 = rng.uniform(-h, h, sample_count) + 1j * rng.uniform(-h, h, sample_count)
    z2 = rng.uniform(-h, h, sample_count) + 1j * rng.uniform(-h, h, sample_count)
    if extra_pairs:
        a, b = zip(*extra_pairs)
        z1 = np.concatenate((z1, np.asarray(a, dtype=complex)))
        z2 = np.concatenate((z2, np.asarray(b, dtype=complex)))
    keep = z1 != z2
    z1, z2 = z1[keep], z2[keep]
    return bool(np.all(phi_separation(z1, z2) > 1e-12))


def phi_separation(z1, z2):
    a1, b1 = phi_map(z1)
    a2, b2 = phi_map(z2)
    s1 = np.abs(a1 - a2) / np.maximum(np.abs(a1), np.abs(a2))
    s2 = np.abs(b1 - b2) / np.maximum(np.abs(b1), np.abs(b2))
    return np.maximum(s1, s2)
