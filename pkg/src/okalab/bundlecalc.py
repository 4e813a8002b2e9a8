"""Exact integer model of monomial factors of automorphy on (C*)^n.

A line bundle whose multiplier around coordinate loop a is the Laurent
monomial prod_b z_b^{M[a][b]} (times a single-valued nonvanishing function)
pairs with the (a, b) coordinate torus as M[a][b] - M[b][a].  Sums of
divisors add exponent matrices.

``restrict_and_decide`` applies the extra-zero criterion: an extra zero
exists iff c1 of the normal bundle vanishes.  Cycles of the support are
declared by the caller; the tool only decides, it does not compute H_2 of
the support.  When the support is a curve in a surface the criterion is
vacuous and the answer is always yes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import DomainError

MAX_ENTRY = 10**6


@dataclass(frozen=True)
class ExponentMatrix:
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DomainError("exponent matrix must be square and nonempty")
        for r in rows:
            for x in r:
                if isinstance(x, bool) or int(x) != x:
                    raise DomainError(f"non-integer exponent {x!r}")
                if abs(x) > MAX_ENTRY:
                    raise DomainError(f"exponent {x} exceeds {MAX_ENTRY}")
        object.__setattr__(self, "rows", tuple(tuple(int(x) for x in r) for r in rows))

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def zeros(cls, n: int) -> "ExponentMatrix":
        return cls(tuple((0,) * n for _ in range(n)))

    def __getitem__(self, ab):
        a, b = ab
        return self.rows[a - 1][b - 1]

    def __add__(self, other: "ExponentMatrix") -> "ExponentMatrix":
        return sum_spec([self, other])

    def __neg__(self) -> "ExponentMatrix":
        return ExponentMatrix(tuple(tuple(-x for x in r) for r in self.rows))

    def to_list(self):
        return [list(r) for r in self.rows]


def dplus_matrix(n: int = 2, z: int = 1, w: int = 2) -> ExponentMatrix:
    """Multiplier w around the z-loop, embedded in (C*)^n."""
    rows = [[0] * n for _ in range(n)]
    rows[z - 1][w - 1] = 1
    return ExponentMatrix(rows)


def dminus_matrix(n: int = 2, z: int = 1, w: int = 2) -> ExponentMatrix:
    return -dplus_matrix(n, z, w)


def symbolic_pairing(M: ExponentMatrix, a: int, b: int) -> int:
    """<c1, T_ab> = M[a][b] - M[b][a] (1-based loop indices)."""
    n = M.n
    if not (1 <= a <= n and 1 <= b <= n):
        raise DomainError(f"loop index out of range 1..{n}")
    return M[a, b] - M[b, a]


def sum_spec(specs) -> ExponentMatrix:
    specs = list(specs)
    if not specs:
        raise DomainError("nothing to sum")
    n = specs[0].n
    if any(s.n != n for s in specs):
        raise DomainError("dimension mismatch in sum")
    return ExponentMatrix(
        tuple(tuple(sum(s.rows[i][j] for s in specs) for j in range(n)) for i in range(n))
    )


@dataclass(frozen=True)
class SupportCycleDecl:
    """An element sum c * (a ^ b) of the exterior square of the loop lattice."""

    terms: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        terms = tuple((int(a), int(b), int(c)) for a, b, c in self.terms)
        if not terms:
            raise DomainError("empty support cycle")
        for a, b, c in terms:
            if not 1 <= a < b:
                raise DomainError(f"support cycle needs 1 <= a < b, got ({a}, {b})")
            if c == 0:
                raise DomainError("support cycle coefficients must be nonzero")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def parse(cls, obj) -> "SupportCycleDecl":
        # [a, b, c] for a single term, [[a, b, c], ...] for a combination
        if obj and all(isinstance(x, int) for x in obj):
            if len(obj) != 3:
                raise DomainError(f"support cycle must be [a, b, coeff], got {obj!r}")
            return cls((tuple(obj),))
        return cls(tuple(tuple(t) for t in obj))

    def label(self):
        if len(self.terms) == 1 and self.terms[0][2] == 1:
            return [self.terms[0][0], self.terms[0][1]]
        return [list(t) for t in self.terms]

    def pairing(self, M: ExponentMatrix) -> int:
        return sum(c * symbolic_pairing(M, a, b) for a, b, c in self.terms)


@dataclass(frozen=True)
class DivisorSpec:
    components: tuple[tuple[str, ExponentMatrix], ...]
    support_dim: int
    support_cycles: tuple[SupportCycleDecl, ...] = ()

    def __post_init__(self):
        if not self.components:
            raise DomainError("a divisor needs at least one component")
        n = self.components[0][1].n
        if any(m.n != n for _, m in self.components):
            raise DomainError("components live in different dimensions")
        if self.support_dim < 1:
            raise DomainError("support_dim must be >= 1")
        if self.support_dim >= n:
            raise DomainError("support of a divisor has dimension < ambient dimension")
        for cyc in self.support_cycles:
            for a, b, _ in cyc.terms:
                if b > n:
                    raise DomainError(f"support cycle index {b} exceeds dimension {n}")

    @property
    def n(self) -> int:
        return self.components[0][1].n

    def total(self) -> ExponentMatrix:
        return sum_spec(m for _, m in self.components)

    @classmethod
    def from_dict(cls, data) -> "DivisorSpec":
        try:
            comps = tuple(
                (str(c.get("name", f"D{i + 1}")), ExponentMatrix(c["exponents"]))
                for i, c in enumerate(data["components"])
            )
            cycles = tuple(SupportCycleDecl.parse(x) for x in data.get("support_cycles", []))
            return cls(comps, int(data["support_dim"]), cycles)
        except (KeyError, TypeError, AttributeError) as exc:
            raise DomainError(f"malformed divisor config: {exc!r}") from exc

    @classmethod
    def load(cls, path) -> "DivisorSpec":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise DomainError(f"cannot read divisor config {path}: {exc}") from exc
        return cls.from_dict(data)

    def to_dict(self):
        return {
            "components": [{"name": n, "exponents": m.to_list()} for n, m in self.components],
            "support_dim": self.support_dim,
            "support_cycles": [
                list(c.terms[0]) if len(c.terms) == 1 else [list(t) for t in c.terms]
                for c in self.support_cycles
            ],
        }


class Rule(str, Enum):
    DIMENSION_TWO = "dimension-two"
    CYCLE_TEST = "cycle-test"


@dataclass(frozen=True)
class Verdict:
    ambient_pairings: dict
    support_pairings: dict
    cousin2_on_tested: bool
    extra_zero_on_tested: bool
    rule_applied: Rule
    witness: dict | None = field(default=None)

    def __post_init__(self):
        vanish = all(v == 0 for v in self.support_pairings.values())
        if self.extra_zero_on_tested != (vanish or self.rule_applied is Rule.DIMENSION_TWO):
            raise AssertionError("inconsistent verdict")

    def to_dict(self):
        return {
            "rule_applied": self.rule_applied.value,
            "ambient_pairings": self.ambient_pairings,
            "support_pairings": self.support_pairings,
            "cousin2_on_tested": self.cousin2_on_tested,
            "extra_zero_on_tested": self.extra_zero_on_tested,
            "witness": self.witness,
        }


def _key(label) -> str:
    return json.dumps(label, separators=(",", ":"))


def restrict_and_decide(spec: DivisorSpec) -> Verdict:
    M = spec.total()
    n = M.n
    ambient = {
        _key([a, b]): symbolic_pairing(M, a, b)
        for a in range(1, n + 1)
        for b in range(a + 1, n + 1)
    }
    cousin2 = all(v == 0 for v in ambient.values())
    if n == 2 and spec.support_dim == 1:
        if spec.support_cycles:
            raise DomainError("a curve in a surface carries no 2-cycles; drop support_cycles")
        return Verdict(ambient, {}, cousin2, True, Rule.DIMENSION_TWO)
    support = {}
    witness = None
    for cyc in spec.support_cycles:
        p = cyc.pairing(M)
        support[_key(cyc.label())] = p
        if p != 0 and witness is None:
            witness = {"cycle": cyc.label(), "pairing": p}
    extra = all(v == 0 for v in support.values())
    return Verdict(ambient, support, cousin2, extra, Rule.CYCLE_TEST, witness)
