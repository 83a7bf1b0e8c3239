"""Flux patterns and sign patterns of Jacobians ``S U`` of reaction-form systems."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Optional, Sequence

from .bigraph import Cycle, build_graph, find_four_cycle_three_negative
from .errors import DimensionMismatch
from .matrix_core import RationalMatrix, SignPattern, Var


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def flux_pattern(S: RationalMatrix, tag: str = "U") -> SignPattern:
    """d' x d pattern of positive variables, nonzero at (i, j) iff S[j, i] < 0."""
    d, dp = S.shape
    return SignPattern([[Var(1, (tag, i, j)) if S[j, i] < 0 else None for j in range(d)] for i in range(dp)])


def dependence_of(U: SignPattern) -> tuple[tuple[bool, ...], ...]:
    return tuple(tuple(e is not None for e in U.row(i)) for i in range(U.nrows))


def pattern_from_dependence(D: Sequence[Sequence[bool]], tag: str = "U") -> SignPattern:
    return SignPattern([[Var(1, (tag, i, j)) if dep else None for j, dep in enumerate(row)] for i, row in enumerate(D)])


@dataclass(frozen=True)
class ReactionForm:
    kind: str  # "RF", "wRF" or "Neither"
    violations: tuple[tuple[int, int], ...]  # (flux j, species i) positions
    diagonal_negative: bool  # every diagonal entry of S U_D has only negative coefficients


def classify_reaction_form(S: RationalMatrix, D: Sequence[Sequence[bool]]) -> ReactionForm:
    """Weak reaction form: flux j never depends on a species i with S[i, j] > 0.

    Reaction form additionally needs flux j to depend on species i exactly
    when S[i, j] < 0. ``D[j][i]`` says whether flux j depends on species i.
    """
    d, dp = S.shape
    if len(D) != dp or any(len(row) != d for row in D):
        raise DimensionMismatch(f"dependence pattern must be {dp}x{d}")
    weak = tuple((j, i) for j in range(dp) for i in range(d) if D[j][i] and S[i, j] > 0)
    # diagonal of S U_D: (S U_D)[i, i] = sum_j S[i, j] U_D[j, i]
    diag_neg = all(not (D[j][i] and S[i, j] > 0) for i in range(d) for j in range(dp))
    if weak:
        return ReactionForm("Neither", weak, diag_neg)
    strict = tuple((j, i) for j in range(dp) for i in range(d) if bool(D[j][i]) != (S[i, j] < 0))
    if strict:
        return ReactionForm("wRF", strict, diag_neg)
    return ReactionForm("RF", (), diag_neg)


@dataclass(frozen=True)
class TwoByTwoWitness:
    rows: tuple[int, int]
    cols: tuple[int, int]

    def to_dict(self) -> dict:
        return {"rows": [r + 1 for r in self.rows], "cols": [c + 1 for c in self.cols]}


def _find_2x2(S: RationalMatrix, lower_ok) -> Optional[TwoByTwoWitness]:
    """Rows (i, j), columns (k, l) with S[i,k] > 0, S[i,l] < 0 and lower_ok on row j."""
    d, dp = S.shape
    for i, j in permutations(range(d), 2):
        for k, l in permutations(range(dp), 2):
            if S[i, k] > 0 and S[i, l] < 0 and lower_ok(S[j, k]) and lower_ok(S[j, l]):
                return TwoByTwoWitness((i, j), (k, l))
    return None


def find_forbidden_2x2(S: RationalMatrix) -> Optional[TwoByTwoWitness]:
    """A 2x2 submatrix with one positive and three negative entries."""
    return _find_2x2(S, lambda x: x < 0)


def wrf_sign_pattern_sufficient(S: RationalMatrix) -> bool:
    """No 2x2 submatrix of the form [[+, -], [-|0, -|0]] up to row and column order.

    When this holds, ``S U`` has a sign pattern for every weak-reaction-form ``U``.
    """
    return _find_2x2(S, lambda x: x <= 0) is None


def find_wrf_obstruction(S: RationalMatrix) -> Optional[TwoByTwoWitness]:
    return _find_2x2(S, lambda x: x <= 0)


@dataclass(frozen=True)
class JacobianSignResult:
    has_pattern: bool
    su_signs: Optional[tuple[tuple[int, ...], ...]]
    witness: Optional[TwoByTwoWitness]
    four_cycle: Optional[Cycle]

    def su_pattern(self, tag: str = "J") -> Optional[SignPattern]:
        return None if self.su_signs is None else SignPattern.from_signs(self.su_signs, tag)


def su_entry_signs(S: RationalMatrix) -> tuple[tuple[int, ...], ...]:
    """Sign of (S U)[i, j] from any k with S[j, k] < 0 and S[i, k] != 0 (0 if none).

    Only meaningful when ``S U`` has a sign pattern.
    """
    d, dp = S.shape
    out = []
    for i in range(d):
        row = []
        for j in range(d):
            k = next((k for k in range(dp) if S[j, k] < 0 and S[i, k] != 0), None)
            row.append(0 if k is None else _sgn(S[i, k]))
        out.append(tuple(row))
    return tuple(out)


def jacobian_sign_pattern(S: RationalMatrix) -> JacobianSignResult:
    """Decide whether ``S U`` (canonical flux pattern) has a sign pattern."""
    witness = find_forbidden_2x2(S)
    if witness is not None:
        return JacobianSignResult(False, None, witness, find_four_cycle_three_negative(build_graph(S)))
    return JacobianSignResult(True, su_entry_signs(S), None, None)


def jacobian_report(S: RationalMatrix) -> dict:
    form = classify_reaction_form(S, dependence_of(flux_pattern(S)))
    res = jacobian_sign_pattern(S)
    witness = None
    if res.witness is not None:
        witness = res.witness.to_dict()
        if res.four_cycle is not None:
            witness["four_cycle"] = res.four_cycle.label()
    return {
        "reaction_form": form.kind,
        "jacobian_has_sign_pattern": res.has_pattern,
        "witness": witness,
        "su_sign_pattern": None if res.su_signs is None else [list(r) for r in res.su_signs],
    }
