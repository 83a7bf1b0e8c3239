"""Signed bipartite graph of a matrix: cycles, matchings and structural tests.

Column vertices and row vertices are kept in separate index spaces. A cycle
is stored as the alternating sequence ``(c0, r0, c1, r1, ...)`` meaning the
closed walk C c0 - R r0 - C c1 - R r1 - ... - C c0.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

import networkx as nx

from .errors import LimitExceeded, NotPerfectMatching
from .matrix_core import RationalMatrix, SignPattern, max_bipartite_matching

DEFAULT_LIMIT = 10**6


class SignedBipartiteGraph:
    """Rows ``0..n_rows-1``, columns ``0..n_cols-1``, signed edges ``(row, col) -> +-1``."""

    __slots__ = ("n_rows", "n_cols", "_sign", "_col_adj", "_row_adj")

    def __init__(self, n_rows: int, n_cols: int, edges):
        self.n_rows = n_rows
        self.n_cols = n_cols
        sign = {}
        for r, c, s in edges:
            if not (0 <= r < n_rows and 0 <= c < n_cols):
                raise ValueError(f"edge ({r},{c}) outside the vertex sets")
            if s not in (1, -1):
                raise ValueError("edge signs must be +-1")
            if (r, c) in sign:
                raise ValueError(f"duplicate edge ({r},{c})")
            sign[(r, c)] = s
        self._sign = sign
        self._col_adj = tuple(tuple(r for r in range(n_rows) if (r, c) in sign) for c in range(n_cols))
        self._row_adj = tuple(tuple(c for c in range(n_cols) if (r, c) in sign) for r in range(n_rows))

    @property
    def edges(self) -> list[tuple[int, int, int]]:
        return sorted((r, c, s) for (r, c), s in self._sign.items())

    def sign(self, r: int, c: int) -> int:
        return self._sign.get((r, c), 0)

    def has_edge(self, r: int, c: int) -> bool:
        return (r, c) in self._sign

    def rows_of(self, c: int) -> tuple[int, ...]:
        return self._col_adj[c]

    def cols_of(self, r: int) -> tuple[int, ...]:
        return self._row_adj[r]

    def subgraph(self, rows: Sequence[int], cols: Sequence[int]) -> SignedBipartiteGraph:
        """Induced subgraph, relabelled to ``0..len-1`` in the given order."""
        ri = {r: k for k, r in enumerate(rows)}
        ci = {c: k for k, c in enumerate(cols)}
        return SignedBipartiteGraph(
            len(rows),
            len(cols),
            [(ri[r], ci[c], s) for (r, c), s in self._sign.items() if r in ri and c in ci],
        )

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(("C", c) for c in range(self.n_cols))
        g.add_nodes_from(("R", r) for r in range(self.n_rows))
        for (r, c), s in self._sign.items():
            g.add_edge(("C", c), ("R", r), sign=s)
        return g

    def __repr__(self) -> str:
        return f"SignedBipartiteGraph({self.n_rows} rows, {self.n_cols} cols, {len(self._sign)} edges)"


def build_graph(M: SignPattern | RationalMatrix) -> SignedBipartiteGraph:
    edges = []
    for i in range(M.nrows):
        for j in range(M.ncols):
            if isinstance(M, SignPattern):
                s = M.sign(i, j)
            else:
                x = M[i, j]
                s = (x > 0) - (x < 0)
            if s:
                edges.append((i, j, s))
    return SignedBipartiteGraph(M.nrows, M.ncols, edges)


# ---------------------------------------------------------------------------
# cycles


@dataclass(frozen=True)
class Cycle:
    path: tuple[int, ...]  # c0, r0, c1, r1, ... in canonical rotation
    cpair_count: int

    @property
    def is_e_cycle(self) -> bool:
        return self.cpair_count % 2 == 0

    @property
    def parity(self) -> str:
        return "e-cycle" if self.is_e_cycle else "o-cycle"

    @property
    def cols(self) -> tuple[int, ...]:
        return self.path[0::2]

    @property
    def rows(self) -> tuple[int, ...]:
        return self.path[1::2]

    def __len__(self) -> int:
        return len(self.path)

    def edges(self) -> list[tuple[int, int]]:
        """Edges as (row, col) pairs, in walk order."""
        k = len(self.path)
        out = []
        for a in range(0, k, 2):
            c, r, c_next = self.path[a], self.path[a + 1], self.path[(a + 2) % k]
            out.append((r, c))
            out.append((r, c_next))
        return out

    def disjoint(self, other: Cycle) -> bool:
        return not (set(self.cols) & set(other.cols) or set(self.rows) & set(other.rows))

    def label(self) -> str:
        k = len(self.path)
        parts = [("C" if a % 2 == 0 else "R") + str(v + 1) for a, v in enumerate(self.path)]
        return "-".join(parts + [parts[0]]) if k else ""

    __str__ = label


def _canonical(path: Sequence[int]) -> tuple[int, ...]:
    """Rotate to the smallest column and orient toward the smaller row neighbour."""
    k = len(path)
    cols = path[0::2]
    start = 2 * cols.index(min(cols))
    rot = tuple(path[start:]) + tuple(path[:start])
    # neighbours of the first column are rot[1] and rot[-1]
    if rot[-1] < rot[1]:
        rot = (rot[0],) + tuple(reversed(rot[1:]))
    assert len(rot) == k
    return rot


def _make_cycle(G: SignedBipartiteGraph, path: Sequence[int]) -> Cycle:
    path = _canonical(path)
    k = len(path)
    cpairs = 0
    for a in range(0, k, 2):
        c = path[a]
        r_before = path[a - 1]
        r_after = path[a + 1]
        if G.sign(r_before, c) == G.sign(r_after, c):
            cpairs += 1
    return Cycle(path, cpairs)


def iter_cycles(G: SignedBipartiteGraph) -> Iterator[Cycle]:
    """All simple cycles, each once, rooted at their smallest column.

    Depth-first search from each column ``s`` through columns greater than
    ``s`` (rows unrestricted); a cycle is reported only in the orientation
    whose first row is smaller than its last, which removes mirror duplicates.
    """
    for s in range(G.n_cols):
        col_used = [False] * G.n_cols
        row_used = [False] * G.n_rows
        col_used[s] = True
        path = [s]

        def from_col(c: int) -> Iterator[Cycle]:
            for r in G.rows_of(c):
                if row_used[r]:
                    continue
                row_used[r] = True
                path.append(r)
                yield from from_row(r)
                path.pop()
                row_used[r] = False

        def from_row(r: int) -> Iterator[Cycle]:
            for c in G.cols_of(r):
                if c == s:
                    if len(path) >= 4 and path[1] < path[-1]:
                        yield _make_cycle(G, path)
                    continue
                if c < s or col_used[c]:
                    continue
                col_used[c] = True
                path.append(c)
                yield from from_col(c)
                path.pop()
                col_used[c] = False

        yield from from_col(s)


def _take(it, limit: int, what: str) -> list:
    if limit < 1:
        raise ValueError("limit must be >= 1")
    out = []
    for item in it:
        if len(out) == limit:
            raise LimitExceeded(limit, partial=out, what=what)
        out.append(item)
    return out


def enumerate_cycles(G: SignedBipartiteGraph, limit: int = DEFAULT_LIMIT) -> list[Cycle]:
    """Every simple cycle with its c-pair count, sorted by length then path."""
    cycles = _take(iter_cycles(G), limit, "cycles")
    cycles.sort(key=lambda cy: (len(cy.path), cy.path))
    return cycles


def find_e_cycle(G: SignedBipartiteGraph) -> Cycle | None:
    """Some e-cycle of G (the first found), or None."""
    return next((cy for cy in iter_cycles(G) if cy.is_e_cycle), None)


# ---------------------------------------------------------------------------
# matchings


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]  # (col, row), sorted by col

    @classmethod
    def from_dict(cls, col_to_row: dict[int, int]) -> Matching:
        return cls(tuple(sorted(col_to_row.items())))

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def label(self) -> str:
        return "{" + ", ".join(f"C{c + 1}-R{r + 1}" for c, r in self.pairs) + "}"


def iter_perfect_matchings(G: SignedBipartiteGraph) -> Iterator[Matching]:
    """Matchings saturating the smaller side, assigned column by column (or row by row)."""
    if not G._sign:
        return
    by_cols = G.n_cols <= G.n_rows
    n_small = G.n_cols if by_cols else G.n_rows
    adj = G._col_adj if by_cols else G._row_adj
    used = [False] * (G.n_rows if by_cols else G.n_cols)
    choice = [0] * n_small

    def rec(k: int) -> Iterator[Matching]:
        if k == n_small:
            if by_cols:
                yield Matching(tuple(enumerate(choice)))
            else:
                yield Matching(tuple(sorted((c, r) for r, c in enumerate(choice))))
            return
        for v in adj[k]:
            if not used[v]:
                used[v] = True
                choice[k] = v
                yield from rec(k + 1)
                used[v] = False

    yield from rec(0)


def enumerate_perfect_matchings(G: SignedBipartiteGraph, limit: int = DEFAULT_LIMIT) -> list[Matching]:
    return _take(iter_perfect_matchings(G), limit, "perfect matchings")


def term_rank(G: SignedBipartiteGraph) -> int:
    """Size of a maximum matching, the largest rank any matrix with this pattern attains."""
    match = max_bipartite_matching(G._col_adj, G.n_rows)
    return sum(m is not None for m in match)


# ---------------------------------------------------------------------------
# interlacing cycles


def _check_perfect(G: SignedBipartiteGraph, W: Matching | dict) -> dict[int, int]:
    w = W.as_dict() if isinstance(W, Matching) else dict(W)
    if len(set(w.values())) != len(w):
        raise NotPerfectMatching("two columns share a row")
    for c, r in w.items():
        if not G.has_edge(r, c):
            raise NotPerfectMatching(f"C{c + 1}-R{r + 1} is not an edge")
    if len(w) != min(G.n_rows, G.n_cols):
        raise NotPerfectMatching("matching does not cover the smaller vertex side")
    return w


def iter_interlacing_cycles(G: SignedBipartiteGraph, W: Matching | dict) -> Iterator[Cycle]:
    """W-interlacing cycles, found as directed cycles on the matched columns.

    Column ``c`` points to column ``c2`` when the row matched to ``c`` is
    adjacent to ``c2``; a directed cycle c0 -> c1 -> ... then traces the
    interlacing cycle C c0 - R W(c0) - C c1 - R W(c1) - ... .
    """
    w = _check_perfect(G, W)
    cols = sorted(w)
    succ = {c: [c2 for c2 in G.cols_of(w[c]) if c2 != c and c2 in w] for c in cols}
    for s in cols:
        path = [s]
        on_path = {s}

        def rec(c: int) -> Iterator[Cycle]:
            for c2 in succ[c]:
                if c2 == s:
                    if len(path) >= 2:
                        walk = []
                        for cc in path:
                            walk += [cc, w[cc]]
                        yield _make_cycle(G, walk)
                    continue
                if c2 < s or c2 in on_path:
                    continue
                on_path.add(c2)
                path.append(c2)
                yield from rec(c2)
                path.pop()
                on_path.discard(c2)

        yield from rec(s)


def interlacing_cycles(G: SignedBipartiteGraph, W: Matching | dict, limit: int = DEFAULT_LIMIT) -> list[Cycle]:
    cycles = _take(iter_interlacing_cycles(G, W), limit, "interlacing cycles")
    cycles.sort(key=lambda cy: (len(cy.path), cy.path))
    return cycles


def is_interlacing(cycle: Cycle, W: Matching | dict) -> bool:
    w = W.as_dict() if isinstance(W, Matching) else W
    on_cycle = set(cycle.edges())
    return all(c in w and (w[c], c) in on_cycle for c in cycle.cols)


# ---------------------------------------------------------------------------
# disjoint cycle sets


def iter_disjoint_cycle_sets(cycles: Sequence[Cycle]) -> Iterator[tuple[Cycle, ...]]:
    """Every nonempty set of pairwise vertex-disjoint cycles, exactly once."""
    n = len(cycles)
    compat = [0] * n  # bit j set when cycle j comes after i and is disjoint from it
    for i in range(n):
        for j in range(i + 1, n):
            if cycles[i].disjoint(cycles[j]):
                compat[i] |= 1 << j
    chosen: list[int] = []

    def rec(candidates: int) -> Iterator[tuple[Cycle, ...]]:
        while candidates:
            low = candidates & -candidates
            j = low.bit_length() - 1
            candidates ^= low
            chosen.append(j)
            yield tuple(cycles[k] for k in chosen)
            yield from rec(candidates & compat[j])
            chosen.pop()

    yield from rec((1 << n) - 1)


def disjoint_cycle_sets(cycles: Sequence[Cycle], limit: int = DEFAULT_LIMIT) -> Iterator[tuple[Cycle, ...]]:
    """Stream of disjoint cycle sets; raises LimitExceeded after ``limit`` sets."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    count = 0
    for s in iter_disjoint_cycle_sets(cycles):
        if count == limit:
            raise LimitExceeded(limit, partial=count, what="disjoint cycle sets")
        count += 1
        yield s


# ---------------------------------------------------------------------------
# balanced submatrices


def _every_vertex_on_cycle(G: SignedBipartiteGraph) -> bool:
    if any(len(G.cols_of(r)) < 2 for r in range(G.n_rows)):
        return False
    if any(len(G.rows_of(c)) < 2 for c in range(G.n_cols)):
        return False
    g = G.to_networkx()
    bridges = {frozenset(e) for e in nx.bridges(g)}
    for v in g.nodes:
        if all(frozenset((v, u)) in bridges for u in g.neighbors(v)):
            return False
    return True


def iter_balanced_square_submatrices(G: SignedBipartiteGraph) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Square (rows, cols) whose induced subgraph has every vertex on a cycle.

    These are exactly the vertex sets of balanced sets of cycles. Ordered by
    size descending, then lexicographically.
    """
    for k in range(min(G.n_rows, G.n_cols), 1, -1):
        for rows in combinations(range(G.n_rows), k):
            for cols in combinations(range(G.n_cols), k):
                if _every_vertex_on_cycle(G.subgraph(rows, cols)):
                    yield rows, cols


def balanced_square_submatrices(G: SignedBipartiteGraph, limit: int = DEFAULT_LIMIT):
    return _take(iter_balanced_square_submatrices(G), limit, "balanced submatrices")


# ---------------------------------------------------------------------------
# structural predicates


@dataclass(frozen=True)
class Component:
    rows: tuple[int, ...]
    cols: tuple[int, ...]

    @property
    def generic_rank(self) -> int:
        return min(len(self.rows), len(self.cols))


def connected_components(G: SignedBipartiteGraph) -> list[Component]:
    out = []
    for comp in nx.connected_components(G.to_networkx()):
        rows = tuple(sorted(i for t, i in comp if t == "R"))
        cols = tuple(sorted(i for t, i in comp if t == "C"))
        out.append(Component(rows, cols))
    out.sort(key=lambda c: (c.cols[:1] or (G.n_cols,), c.rows[:1] or (G.n_rows,)))
    return out


def generic_rank(G: SignedBipartiteGraph) -> int:
    """Sum over components of min(#rows, #cols).

    This is the rank of a generic matrix with this graph whenever each
    component has a matching saturating its smaller side; :func:`term_rank`
    is the exact maximum in general.
    """
    return sum(c.generic_rank for c in connected_components(G))


def find_four_cycle_three_negative(G: SignedBipartiteGraph) -> Cycle | None:
    for r1, r2 in combinations(range(G.n_rows), 2):
        common = sorted(set(G.cols_of(r1)) & set(G.cols_of(r2)))
        for c1, c2 in combinations(common, 2):
            signs = (G.sign(r1, c1), G.sign(r1, c2), G.sign(r2, c1), G.sign(r2, c2))
            if signs.count(-1) == 3:
                return _make_cycle(G, (c1, r1, c2, r2))
    return None


def has_four_cycle_three_negative(G: SignedBipartiteGraph) -> bool:
    return find_four_cycle_three_negative(G) is not None


def single_cycle_with_short_hair(G: SignedBipartiteGraph) -> bool:
    """Connected, at most one cycle, and only pendant edges hanging off the cycle."""
    if not nx.is_connected(G.to_networkx()):
        return False
    try:
        cycles = enumerate_cycles(G, limit=1)
    except LimitExceeded:
        return False
    if not cycles:
        return True
    cy = cycles[0]
    g = G.to_networkx()
    g.remove_edges_from((("R", r), ("C", c)) for r, c in cy.edges())
    on_cycle = {("C", c) for c in cy.cols} | {("R", r) for r in cy.rows}
    for v in on_cycle:
        for u in g.neighbors(v):
            if u in on_cycle or g.degree(u) > 1:
                return False
    return True


# ---------------------------------------------------------------------------
# DOT export


def to_dot(G: SignedBipartiteGraph, name: str = "G") -> str:
    """Graphviz text: columns as boxes, rows as circles, negative edges solid, positive dashed."""
    lines = [f"graph {name} {{"]
    for c in range(G.n_cols):
        lines.append(f'  C{c + 1} [shape=box, label="C{c + 1}"];')
    for r in range(G.n_rows):
        lines.append(f'  R{r + 1} [shape=circle, label="R{r + 1}"];')
    for c in range(G.n_cols):
        for r in G.rows_of(c):
            style = "dashed" if G.sign(r, c) > 0 else "solid"
            lines.append(f"  C{c + 1} -- R{r + 1} [style={style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
