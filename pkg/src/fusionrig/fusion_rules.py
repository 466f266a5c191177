"""Fusion-coefficient tables: representation, validation, fused dimensions.

A table ``N[i][j][k]`` of non-negative integers (indices ``0..q``) defines the
multiplication ``x_i * x_j = sum_k N[i][j][k] x_k`` on a free commutative
monoid with generators ``x_0, ..., x_q``, where ``x_0`` is the unit.  For the
result to be a commutative semiring the table must satisfy the unit,
commutativity and associativity constraints checked by :func:`validate_rules`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


class RulesFormatError(ValueError):
    """Raised when a fusion-rules document is malformed."""


@dataclass(frozen=True)
class FusionRules:
    """A dense (q+1)^3 table of fusion coefficients.

    ``q`` is the number of generators besides the unit; ``N`` is stored as a
    nested tuple so instances are immutable and hashable.
    """

    q: int
    N: tuple  # N[i][j][k], each index in 0..q

    def __post_init__(self):
        if self.q < 0:
            raise RulesFormatError("q must be non-negative")
        n = self.q + 1
        if len(self.N) != n or any(len(row) != n for row in self.N) or any(
            len(col) != n for row in self.N for col in row
        ):
            raise RulesFormatError("table dimensions inconsistent with q=%d" % self.q)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    v = self.N[i][j][k]
                    if not isinstance(v, int) or v < 0:
                        raise RulesFormatError(
                            "coefficient N[%d][%d][%d]=%r is not a non-negative integer"
                            % (i, j, k, v)
                        )

    @property
    def num_labels(self) -> int:
        return self.q + 1

    def coeff(self, i: int, j: int, k: int) -> int:
        return self.N[i][j][k]


@dataclass
class ValidationReport:
    """Outcome of checking the three table laws; ``ok`` iff no violations."""

    ok: bool
    violations: list = field(default_factory=list)  # (law, index tuple, lhs, rhs)

    def __str__(self):
        if self.ok:
            return "ok"
        lines = ["%d violation(s):" % len(self.violations)]
        for law, idx, lhs, rhs in self.violations:
            lines.append("  %s at %s: %s != %s" % (law, idx, lhs, rhs))
        return "\n".join(lines)


def _as_table(obj) -> tuple:
    return tuple(tuple(tuple(col) for col in row) for row in obj)


def parse_rules(text: str) -> FusionRules:
    """Parse a fusion-rules JSON document ``{"q": int, "N": [[[int]]]}``.

    Unit entries must be present explicitly; no validation of the laws is
    performed here (see :func:`validate_rules`).
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RulesFormatError("invalid JSON: %s" % exc) from exc
    if not isinstance(obj, dict) or "q" not in obj or "N" not in obj:
        raise RulesFormatError('document must be an object with keys "q" and "N"')
    q = obj["q"]
    if not isinstance(q, int):
        raise RulesFormatError("q must be an integer")
    try:
        table = _as_table(obj["N"])
    except TypeError as exc:
        raise RulesFormatError("N must be a triply nested array") from exc
    return FusionRules(q=q, N=table)


def rules_to_json(rules: FusionRules) -> dict:
    return {"q": rules.q, "N": [[list(col) for col in row] for row in rules.N]}


def validate_rules(rules: FusionRules) -> ValidationReport:
    """Check unit, commutativity and associativity laws by exhaustive enumeration."""
    n = rules.q + 1
    N = rules.N
    violations = []
    for i in range(n):
        for k in range(n):
            want = 1 if i == k else 0
            if N[i][0][k] != want:
                violations.append(("unit", (i, 0, k), N[i][0][k], want))
            if N[0][i][k] != want:
                violations.append(("unit", (0, i, k), N[0][i][k], want))
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                if N[i][j][k] != N[j][i][k]:
                    violations.append(("commutative", (i, j, k), N[i][j][k], N[j][i][k]))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    lhs = sum(N[i][j][r] * N[r][k][l] for r in range(n))
                    rhs = sum(N[j][k][s] * N[i][s][l] for s in range(n))
                    if lhs != rhs:
                        violations.append(("associative", (i, j, k, l), lhs, rhs))
    return ValidationReport(ok=not violations, violations=violations)


def fused_dims(rules: FusionRules, dimsA, dimsB):
    """Dimensions of a product: result[k] = sum_{i,j} N[i][j][k] dimsA[i] dimsB[j]."""
    n = rules.q + 1
    if len(dimsA) != n or len(dimsB) != n:
        raise ValueError("dimension vectors must have length q+1=%d" % n)
    return tuple(
        sum(rules.N[i][j][k] * dimsA[i] * dimsB[j] for i in range(n) for j in range(n))
        for k in range(n)
    )


def is_multiplicity_free(rules: FusionRules) -> bool:
    return all(v <= 1 for row in rules.N for col in row for v in col)


def _table_from_nonzero(q: int, nonzero: dict) -> FusionRules:
    n = q + 1
    N = [[[0] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for k in range(n):
            N[i][0][k] = N[0][i][k] = 1 if i == k else 0
    for (i, j, k), v in nonzero.items():
        N[i][j][k] = v
    return FusionRules(q=q, N=_as_table(N))


def trivial_rules() -> FusionRules:
    """Vacuum only: q=0, 1*1=1."""
    return _table_from_nonzero(0, {})


def fibonacci_rules() -> FusionRules:
    """q=1 with tau*tau = 1 + tau."""
    return _table_from_nonzero(1, {(1, 1, 0): 1, (1, 1, 1): 1})


def z2_rules() -> FusionRules:
    """q=1 with tau*tau = 1 (group-like Z2)."""
    return _table_from_nonzero(1, {(1, 1, 0): 1})


def ising_rules() -> FusionRules:
    """q=2 with sigma=x1, psi=x2: sigma^2 = 1 + psi, sigma*psi = sigma, psi^2 = 1."""
    return _table_from_nonzero(
        2,
        {
            (1, 1, 0): 1,
            (1, 1, 2): 1,
            (1, 2, 1): 1,
            (2, 1, 1): 1,
            (2, 2, 0): 1,
        },
    )
