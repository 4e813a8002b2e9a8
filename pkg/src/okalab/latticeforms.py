"""Exact pairings of constant (1,1)-forms with lattice 2-cycles in C^n.

The form is

    omega = d * i * sum_j dz_j ^ dzbar_j  +  i * sum_{j != k} dz_j ^ dzbar_k

(the off-diagonal part optional), and a lattice vector u = sum a_j e_j +
b_j (i e_j) has dz_j(u) = a_j + i b_j.  Everything is done with Python
integers over Z[i]; the pairing of two lattice vectors is an integer.
"""

from __future__ import annotations

import itertools
import re
import warnings
from dataclasses import dataclass
from fractions import Fraction

import sympy

from .errors import DomainError


@dataclass(frozen=True)
class GaussianLatticeVector:
    """Coefficients ``a`` of e_j and ``b`` of i*e_j."""

    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        b = tuple(int(x) for x in self.b)
        if len(a) != len(b):
            raise DomainError("a and b must have the same length")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return len(self.a)

    @classmethod
    def e(cls, j: int, n: int, coeff: int = 1) -> "GaussianLatticeVector":
        a = [0] * n
        a[j - 1] = coeff
        return cls(tuple(a), (0,) * n)

    @classmethod
    def ie(cls, j: int, n: int, coeff: int = 1) -> "GaussianLatticeVector":
        b = [0] * n
        b[j - 1] = coeff
        return cls((0,) * n, tuple(b))

    @classmethod
    def parse(cls, text: str, n: int) -> "GaussianLatticeVector":
        """Parse e.g. ``ie1``, ``2*ie1``, ``e2+3*e3``, ``-e1 + ie2``."""
        s = text.replace(" ", "")
        if not s:
            raise DomainError("empty lattice vector")
        out = cls((0,) * n, (0,) * n)
        pos = 0
        for m in re.finditer(r"([+-]?)(\d*)\*?(ie|e)(\d+)", s):
            if m.start() != pos:
                break
            pos = m.end()
            sign = -1 if m.group(1) == "-" else 1
            coeff = sign * int(m.group(2) or 1)
            j = int(m.group(4))
            if not 1 <= j <= n:
                raise DomainError(f"index {j} out of range 1..{n}")
            term = cls.ie(j, n, coeff) if m.group(3) == "ie" else cls.e(j, n, coeff)
            out = out + term
        if pos != len(s):
            raise DomainError(f"cannot parse lattice vector {text!r}")
        return out

    def __add__(self, other):
        return GaussianLatticeVector(
            tuple(x + y for x, y in zip(self.a, other.a)),
            tuple(x + y for x, y in zip(self.b, other.b)),
        )

    def __rmul__(self, k: int):
        return GaussianLatticeVector(tuple(k * x for x in self.a), tuple(k * x for x in self.b))

    def real_coords(self) -> tuple[int, ...]:
        """Coordinates in the real basis (e_1..e_n, ie_1..ie_n)."""
        return self.a + self.b

    def label(self) -> str:
        parts = []
        for name, coeffs in (("e", self.a), ("ie", self.b)):
            for j, c in enumerate(coeffs, start=1):
                if c:
                    parts.append(f"{c}*{name}{j}" if c != 1 else f"{name}{j}")
        return "+".join(parts).replace("+-", "-") or "0"


@dataclass(frozen=True)
class HermitianFormSpec:
    n: int
    d: int
    offdiag: bool = True

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("n must be positive")
        if int(self.d) != self.d:
            raise DomainError("d must be an integer")

    def coeff(self, j: int, k: int) -> int:
        if j == k:
            return self.d
        return 1 if self.offdiag else 0


@dataclass(frozen=True)
class SublatticeDecl:
    generators: tuple[GaussianLatticeVector, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise DomainError("a sublattice needs generators")
        n = gens[0].n
        if any(g.n != n for g in gens):
            raise DomainError("generators of different dimensions")
        if self.matrix().rank() != len(gens):
            raise DomainError("generators are not linearly independent")
        object.__setattr__(self, "generators", gens)

    @property
    def n(self) -> int:
        return self.generators[0].n

    def matrix(self) -> sympy.Matrix:
        return sympy.Matrix([list(g.real_coords()) for g in self.generators]).T

    @classmethod
    def takayama_x(cls, n: int) -> "SublatticeDecl":
        """The lattice <i e_1, e_2, ..., e_n>."""
        return cls((GaussianLatticeVector.ie(1, n),) + tuple(GaussianLatticeVector.e(j, n) for j in range(2, n + 1)))


def _dz(u: GaussianLatticeVector, j: int) -> tuple[int, int]:
    return u.a[j], u.b[j]


def _dzbar(u: GaussianLatticeVector, j: int) -> tuple[int, int]:
    return u.a[j], -u.b[j]


def _gmul(p, q):
    return p[0] * q[0] - p[1] * q[1], p[0] * q[1] + p[1] * q[0]


def pair_form(omega: HermitianFormSpec, u: GaussianLatticeVector, v: GaussianLatticeVector) -> Fraction:
    """omega(u, v) = i sum_{jk} h_jk [dz_j(u) dzbar_k(v) - dz_j(v) dzbar_k(u)]."""
    if not (u.n == v.n == omega.n):
        raise DomainError("dimension mismatch")
    re_part = im_part = 0
    for j in range(omega.n):
        for k in range(omega.n):
            h = omega.coeff(j, k)
            if h == 0:
                continue
            x = _gmul(_dz(u, j), _dzbar(v, k))
            y = _gmul(_dz(v, j), _dzbar(u, k))
            re_part += h * (x[0] - y[0])
            im_part += h * (x[1] - y[1])
    # multiply by i: (re + i im) * i = -im + i re
    real, imag = -im_part, re_part
    if imag != 0:
        raise ArithmeticError("pairing of a real form came out non-real")
    return Fraction(real)


def cycle_survives(u: GaussianLatticeVector, v: GaussianLatticeVector, sub: SublatticeDecl) -> bool:
    """Both u and v lie in the integer span of the sublattice generators."""
    return _in_span(u, sub) and _in_span(v, sub)


def _in_span(u: GaussianLatticeVector, sub: SublatticeDecl) -> bool:
    A = sub.matrix()
    target = sympy.Matrix(list(u.real_coords()))
    try:
        sol, params = A.gauss_jordan_solve(target)
    except ValueError:
        return False
    if params.shape[0]:
        # independent generators leave no free parameters
        raise DomainError("dependent generators")
    return all(x.is_integer for x in sol)


@dataclass(frozen=True)
class TakayamaReport:
    obstructed: bool
    witness: tuple[GaussianLatticeVector, GaussianLatticeVector] | None
    value: int | None
    pairings: dict
    warnings: tuple[str, ...]

    def to_dict(self):
        return {
            "obstructed": self.obstructed,
            "witness": [self.witness[0].label(), self.witness[1].label()] if self.witness else None,
            "value": self.value,
            "pairings": self.pairings,
            "warnings": list(self.warnings),
        }


def takayama_verdict(omega: HermitianFormSpec, sub: SublatticeDecl | None = None) -> TakayamaReport:
    """Search basis 2-cycles of the sublattice for a nonzero pairing with omega.

    A nonzero value means c1 does not vanish on a cycle that lifts to the
    divisor, so no extra zero exists.  Outside n >= 3, d >= 4 the form need not
    be very ample; the computation still runs but a warning is attached.
    """
    sub = sub or SublatticeDecl.takayama_x(omega.n)
    if sub.n != omega.n:
        raise DomainError("dimension mismatch")
    notes = []
    if omega.n < 3 or omega.d < 4:
        msg = f"hypothesis n >= 3 and d >= 4 not met (n={omega.n}, d={omega.d})"
        warnings.warn(msg, stacklevel=2)
        notes.append(msg)
    pairings = {}
    witness = value = None
    for u, v in itertools.combinations(sub.generators, 2):
        p = int(pair_form(omega, u, v))
        pairings[f"{u.label()}^{v.label()}"] = p
        if p != 0 and witness is None:
            witness, value = (u, v), p
    return TakayamaReport(witness is not None, witness, value, pairings, tuple(notes))
