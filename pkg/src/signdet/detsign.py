"""Graph-theoretic counts of positive, negative and anomalous terms of a determinant.

The square-pattern test works on a row permutation with a nonzero diagonal.
The diagonal is a perfect matching W; every non-identity term of the
determinant corresponds to a nonempty set of disjoint W-interlacing cycles,
and its sign differs from the sign of the diagonal product exactly when the
set holds an odd number of e-cycles.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .bigraph import (
    DEFAULT_LIMIT,
    Cycle,
    build_graph,
    disjoint_cycle_sets,
    find_e_cycle,
    interlacing_cycles,
    iter_balanced_square_submatrices,
)
from .errors import LimitExceeded, NoPerfectMatching, NotSquare
from .matrix_core import ZERO_COUNTS, SignCounts, SignPattern, normalize_diagonal


@dataclass(frozen=True)
class _Normalized:
    cycles: list[Cycle]
    epsilon: int  # sign of the diagonal product of the permuted pattern
    perm_sign: int


def _prepare(P: SignPattern, limit: int) -> Optional[_Normalized]:
    if not P.is_square():
        raise NotSquare(f"pattern is {P.nrows}x{P.ncols}")
    norm = normalize_diagonal(P)
    if norm is None:
        return None
    Q = norm.pattern
    n = Q.nrows
    eps = 1
    for j in range(n):
        eps *= Q.sign(j, j)
    G = build_graph(Q)
    cycles = interlacing_cycles(G, {j: j for j in range(n)}, limit=limit)
    return _Normalized(cycles, eps, norm.perm_sign)


def _counts_from(eps_terms: int, anti_terms: int, eps: int, perm_sign: int) -> SignCounts:
    # eps_terms have the diagonal sign eps in the permuted pattern
    plus, minus = (eps_terms, anti_terms) if eps > 0 else (anti_terms, eps_terms)
    return SignCounts.from_plus_minus(plus, minus).oriented(perm_sign)


def count_signs_graph(P: SignPattern, limit: int = DEFAULT_LIMIT) -> SignCounts:
    """Sign counts of the determinant expansion of a square pattern.

    ``m_plus``/``m_minus`` refer to the pattern as given (the row permutation
    used internally is undone). Returns all zeros when there is no perfect
    matching. On LimitExceeded the ``partial`` attribute holds the counts over
    the cycle sets seen so far.
    """
    try:
        prep = _prepare(P, limit)
    except LimitExceeded as exc:
        exc.partial = None  # too many interlacing cycles to say anything
        raise
    if prep is None:
        return ZERO_COUNTS
    sets = 0
    odd = 0
    try:
        for cs in disjoint_cycle_sets(prep.cycles, limit=limit):
            sets += 1
            if sum(c.is_e_cycle for c in cs) % 2:
                odd += 1
    except LimitExceeded as exc:
        exc.partial = _counts_from(1 + sets - odd, odd, prep.epsilon, prep.perm_sign)
        raise
    return _counts_from(1 + sets - odd, odd, prep.epsilon, prep.perm_sign)


def fast_counts(P: SignPattern, limit: int = DEFAULT_LIMIT) -> Optional[SignCounts]:
    """Closed-form counts when the interlacing cycles pairwise meet or are pairwise disjoint.

    Returns None for mixed intersection structure (use :func:`count_signs_graph`).
    """
    prep = _prepare(P, limit)
    if prep is None:
        raise NoPerfectMatching("pattern has no perfect matching")
    cycles = prep.cycles
    c = len(cycles)
    e = sum(cy.is_e_cycle for cy in cycles)
    pairs = [a.disjoint(b) for a, b in combinations(cycles, 2)]
    if not any(pairs):
        return _counts_from(1 + c - e, e, prep.epsilon, prep.perm_sign)
    if all(pairs):
        if e == 0:
            return _counts_from(2**c, 0, prep.epsilon, prep.perm_sign)
        half = 2 ** (c - 1)
        return SignCounts.from_plus_minus(half, half)
    return None


@dataclass(frozen=True)
class Classification:
    kind: str  # "SNS", "ZeroDet" or "General"
    counts: SignCounts

    @property
    def is_sign_definite(self) -> bool:
        return self.counts.m == 0


def classify(P: SignPattern, limit: int = DEFAULT_LIMIT) -> Classification:
    """SNS (nonzero, all terms one sign), ZeroDet (no perfect matching) or General.

    Sign definiteness (m = 0 or zero determinant) is exactly SNS or ZeroDet.
    """
    counts = count_signs_graph(P, limit)
    if counts.t == 0:
        kind = "ZeroDet"
    elif counts.m == 0:
        kind = "SNS"
    else:
        kind = "General"
    return Classification(kind, counts)


def is_ssd(P: SignPattern) -> tuple[bool, Optional[Cycle]]:
    """Whether every square submatrix is SNS or singular; on failure an e-cycle witness."""
    witness = find_e_cycle(build_graph(P))
    return witness is None, witness


@dataclass(frozen=True)
class JSignBound:
    J: int
    rows: tuple[int, ...]  # witness submatrix, empty when J == 0
    cols: tuple[int, ...]
    counts: Optional[SignCounts] = None


def j_sign_bound(P: SignPattern, limit: int = DEFAULT_LIMIT) -> JSignBound:
    """Largest anomalous-sign count over balanced square submatrices.

    Submatrices are visited by size descending, then lexicographically; the
    first one attaining the maximum is the witness.
    """
    G = build_graph(P)
    best = JSignBound(0, (), ())
    seen = 0
    for rows, cols in iter_balanced_square_submatrices(G):
        seen += 1
        if seen > limit:
            raise LimitExceeded(limit, partial=best, what="balanced submatrices")
        counts = count_signs_graph(P.submatrix(rows, cols), limit)
        if counts.m > best.J:
            best = JSignBound(counts.m, rows, cols, counts)
    return best


def zero_one_square(P: SignPattern, limit: int = DEFAULT_LIMIT) -> str:
    """"Zero", "One" or "More" anomalous signs, read off the interlacing cycles.

    One anomalous sign arises in two ways: a single interlacing e-cycle that
    meets every other interlacing cycle (one term opposite the diagonal), or
    interlacing cycles that are all e-cycles and pairwise meet (the diagonal
    term is then the only one with its sign).
    """
    prep = _prepare(P, limit)
    if prep is None:
        raise NoPerfectMatching("pattern has no perfect matching")
    cycles = prep.cycles
    e_cycles = [c for c in cycles if c.is_e_cycle]
    if not e_cycles:
        return "Zero"
    if len(e_cycles) == 1 and not any(e_cycles[0].disjoint(c) for c in cycles):
        return "One"
    if len(e_cycles) == len(cycles) and not any(a.disjoint(b) for a, b in combinations(cycles, 2)):
        return "One"
    return "More"


def detsign_report(P: SignPattern, limit: int = DEFAULT_LIMIT) -> dict:
    partial = False
    try:
        cls = classify(P, limit)
        counts, kind = cls.counts, cls.kind
    except LimitExceeded as exc:
        if exc.partial is None:
            return {"t": None, "m_plus": None, "m_minus": None, "m": None, "class": None, "partial": True}
        counts, kind, partial = exc.partial, "General", True
    return {**counts.to_dict(), "class": kind, "partial": partial}
