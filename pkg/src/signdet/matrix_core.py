"""Exact rational matrices, sign patterns and the elementary operations on them.

Everything here is immutable and built on :class:`fractions.Fraction`; there is
no floating point anywhere in the package.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    EmptyMatrix,
    IndexOutOfRange,
    NotSquare,
    ParseError,
)

Rational = Fraction

VarId = tuple  # (tag, row, col), 0-based indices

MAX_FRACTION_DIGITS = 18

_INT_RE = re.compile(r"^[+-]?\d+$")
_DEC_RE = re.compile(r"^([+-]?)(\d*)\.(\d*)$")
_FRAC_RE = re.compile(r"^[+-]?\d+\s*/\s*[+-]?\d+$")


def to_rational(value) -> Fraction:
    """Convert an int, Fraction or numeric string to an exact Fraction.

    Floats are refused: their binary value is almost never what was meant.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return _parse_entry(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def _parse_entry(text: str) -> Fraction:
    s = text.strip().replace("−", "-")
    if _INT_RE.match(s):
        return Fraction(int(s))
    m = _DEC_RE.match(s)
    if m and (m.group(2) or m.group(3)):
        if len(m.group(3)) > MAX_FRACTION_DIGITS:
            raise ValueError(
                f"decimal {text!r} has more than {MAX_FRACTION_DIGITS} fractional digits"
            )
        return Fraction(s)
    if _FRAC_RE.match(s):
        num, den = (int(part) for part in s.split("/"))
        if den == 0:
            raise ValueError("zero denominator")
        return Fraction(num, den)
    raise ValueError(f"not a number: {text!r}")


class RationalMatrix:
    """Dense d x d' matrix of Fractions (d, d' >= 1)."""

    __slots__ = ("_rows", "_ncols")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(to_rational(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise EmptyMatrix("matrix must have at least one row and one column")
        ncols = len(data[0])
        for i, row in enumerate(data):
            if len(row) != ncols:
                raise ValueError(f"row {i + 1} has {len(row)} entries, expected {ncols}")
        self._rows = data
        self._ncols = ncols

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def shape(self) -> tuple[int, int]:
        return len(self._rows), self._ncols

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        return self._rows[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._rows)

    def to_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self._rows]

    def transpose(self) -> RationalMatrix:
        return RationalMatrix(zip(*self._rows))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> RationalMatrix:
        return RationalMatrix([[self._rows[i][j] for j in cols] for i in rows])

    def hstack(self, other: RationalMatrix) -> RationalMatrix:
        if other.nrows != self.nrows:
            raise ValueError("row counts differ")
        return RationalMatrix(a + b for a, b in zip(self._rows, other._rows))

    def __neg__(self) -> RationalMatrix:
        return RationalMatrix([[-x for x in r] for r in self._rows])

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalMatrix) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(x) for x in r) for r in self._rows)
        return f"RationalMatrix([{body}])"


def parse_matrix(text: str, format: str = "csv") -> RationalMatrix:
    """Parse CSV or JSON text into an exact matrix.

    CSV: one row per line, comma separated. JSON: ``{"rows": d, "cols": d',
    "entries": [[...], ...]}`` with numbers or ``"p/q"`` strings. Integers,
    decimals (at most 18 fractional digits) and ``p/q`` fractions are accepted.
    """
    if format == "csv":
        grid = _read_csv(text)
    elif format == "json":
        grid = _read_json(text)
    else:
        raise ValueError(f"unknown format {format!r}")
    if not grid or not grid[0]:
        raise EmptyMatrix("no entries found")
    width = len(grid[0])
    out = []
    for i, raw_row in enumerate(grid, start=1):
        if len(raw_row) != width:
            raise ParseError(f"expected {width} entries, found {len(raw_row)}", row=i)
        row = []
        for j, cell in enumerate(raw_row, start=1):
            try:
                row.append(_parse_entry(cell) if isinstance(cell, str) else to_rational(cell))
            except (ValueError, TypeError) as exc:
                raise ParseError(str(exc), row=i, col=j) from None
        out.append(row)
    return RationalMatrix(out)


def _read_csv(text: str) -> list[list[str]]:
    rows = []
    for rec in csv.reader(io.StringIO(text)):
        if not rec or all(not c.strip() for c in rec):
            continue
        rows.append(rec)
    return rows


def _read_json(text: str) -> list[list]:
    try:
        doc = json.loads(text, parse_float=str)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}") from None
    if not isinstance(doc, dict) or "entries" not in doc:
        raise ParseError('JSON matrix must be an object with an "entries" list')
    entries = doc["entries"]
    if not isinstance(entries, list) or not all(isinstance(r, list) for r in entries):
        raise ParseError('"entries" must be a list of lists')
    if not entries or not entries[0]:
        raise EmptyMatrix("no entries found")
    d = doc.get("rows", len(entries))
    dp = doc.get("cols", len(entries[0]))
    if d != len(entries):
        raise ParseError(f'"rows" is {d} but {len(entries)} rows given')
    for i, r in enumerate(entries, start=1):
        if len(r) != dp:
            raise ParseError(f'"cols" is {dp} but {len(r)} entries given', row=i)
        for j, cell in enumerate(r, start=1):
            if isinstance(cell, bool) or not isinstance(cell, (int, str)):
                raise ParseError(f"unsupported entry {cell!r}", row=i, col=j)
    return entries


def _integer_rows(M) -> list[list[int]]:
    """Rows of M scaled by the lcm of their denominators (rank and det sign preserving)."""
    out = []
    for r in M:
        scale = lcm(*(x.denominator for x in r)) if r else 1
        out.append([int(x * scale) for x in r])
    return out


def rank(M: RationalMatrix) -> int:
    """Exact rank via Bareiss fraction-free elimination."""
    a = _integer_rows(M.to_lists())
    nr, nc = len(a), len(a[0]) if a else 0
    r = 0
    prev = 1
    for c in range(nc):
        piv = next((i for i in range(r, nr) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, nr):
            f = a[i][c]
            row_i = a[i]
            row_r = a[r]
            for j in range(c + 1, nc):
                row_i[j] = (p * row_i[j] - f * row_r[j]) // prev
            row_i[c] = 0
        prev = p
        r += 1
        if r == nr:
            break
    return r


def determinant(rows) -> Fraction:
    """Exact determinant of a square matrix given as a RationalMatrix or nested sequence.

    The 0 x 0 determinant is 1.
    """
    a = rows.to_lists() if isinstance(rows, RationalMatrix) else [list(map(to_rational, r)) for r in rows]
    n = len(a)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in a):
        raise NotSquare("determinant needs a square matrix")
    scales = Fraction(1)
    ints = []
    for r in a:
        s = lcm(*(x.denominator for x in r))
        scales *= s
        ints.append([int(x * s) for x in r])
    sign = 1
    prev = 1
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if ints[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            ints[k], ints[piv] = ints[piv], ints[k]
            sign = -sign
        p = ints[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                ints[i][j] = (p * ints[i][j] - ints[i][k] * ints[k][j]) // prev
            ints[i][k] = 0
        prev = p
    return Fraction(sign * ints[n - 1][n - 1]) / scales


@dataclass(frozen=True)
class SignCounts:
    """Term count ``t``, positive/negative term counts and anomalous count ``m``."""

    t: int
    m_plus: int
    m_minus: int
    m: int

    def __post_init__(self):
        if min(self.t, self.m_plus, self.m_minus, self.m) < 0:
            raise ValueError("counts must be nonnegative")
        if self.t != self.m_plus + self.m_minus or self.m != min(self.m_plus, self.m_minus):
            raise ValueError(f"inconsistent counts {self}")

    @classmethod
    def from_plus_minus(cls, m_plus: int, m_minus: int) -> SignCounts:
        return cls(m_plus + m_minus, m_plus, m_minus, min(m_plus, m_minus))

    def swapped(self) -> SignCounts:
        return SignCounts(self.t, self.m_minus, self.m_plus, self.m)

    def oriented(self, sign: int) -> SignCounts:
        """Counts after multiplying every term by ``sign``."""
        return self if sign > 0 else self.swapped()

    def to_dict(self) -> dict:
        return {"t": self.t, "m_plus": self.m_plus, "m_minus": self.m_minus, "m": self.m}


ZERO_COUNTS = SignCounts(0, 0, 0, 0)


# ---------------------------------------------------------------------------
# sign patterns


class Var(NamedTuple):
    """A signed free variable: ``sign * id``."""

    sign: int
    id: VarId


def var_name(var_id: VarId) -> str:
    tag, i, j = var_id
    return f"{tag}_{i + 1}_{j + 1}"


def parse_var_name(name: str) -> VarId:
    tag, i, j = name.rsplit("_", 2)
    return (tag, int(i) - 1, int(j) - 1)


class SignPattern:
    """Matrix of zeros (``None``) and signed free variables.

    Every variable id occurs at most once, so the determinant expansion is a
    multilinear polynomial with coefficients +-1.
    """

    __slots__ = ("_rows", "_ncols")

    def __init__(self, rows: Iterable[Iterable[Var | None]]):
        data = tuple(tuple(rows_i) for rows_i in rows)
        ncols = len(data[0]) if data else 0
        seen = set()
        for i, r in enumerate(data):
            if len(r) != ncols:
                raise ValueError(f"row {i + 1} has {len(r)} entries, expected {ncols}")
            for e in r:
                if e is None:
                    continue
                if e.sign not in (1, -1):
                    raise ValueError(f"variable sign must be +-1, got {e.sign}")
                if e.id in seen:
                    raise ValueError(f"variable {e.id} repeated")
                seen.add(e.id)
        self._rows = data
        self._ncols = ncols

    @classmethod
    def from_signs(cls, signs: Iterable[Iterable[int]], tag: str = "A") -> SignPattern:
        """Pattern with a fresh variable ``(tag, i, j)`` at every nonzero sign."""
        return cls(
            [
                [Var(1 if s > 0 else -1, (tag, i, j)) if s else None for j, s in enumerate(r)]
                for i, r in enumerate(signs)
            ]
        )

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def shape(self) -> tuple[int, int]:
        return len(self._rows), self._ncols

    def is_square(self) -> bool:
        return len(self._rows) == self._ncols

    def __getitem__(self, idx: tuple[int, int]) -> Var | None:
        i, j = idx
        return self._rows[i][j]

    def row(self, i: int) -> tuple[Var | None, ...]:
        return self._rows[i]

    def sign(self, i: int, j: int) -> int:
        e = self._rows[i][j]
        return 0 if e is None else e.sign

    def signs(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(0 if e is None else e.sign for e in r) for r in self._rows)

    def nonzeros(self) -> list[tuple[int, int]]:
        return [(i, j) for i, r in enumerate(self._rows) for j, e in enumerate(r) if e is not None]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> SignPattern:
        return SignPattern([[self._rows[i][j] for j in cols] for i in rows])

    def transpose(self) -> SignPattern:
        return SignPattern(zip(*self._rows)) if self._rows else SignPattern([])

    def __eq__(self, other) -> bool:
        return isinstance(other, SignPattern) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        sym = {0: "0", 1: "+", -1: "-"}
        return "SignPattern([" + "; ".join(" ".join(sym[s] for s in r) for r in self.signs()) + "])"


def sign_pattern_of(M: RationalMatrix, tag: str = "A") -> SignPattern:
    return SignPattern.from_signs(
        ([(x > 0) - (x < 0) for x in M.row(i)] for i in range(M.nrows)), tag=tag
    )


# ---------------------------------------------------------------------------
# sign-preserving transformations


def _check_index(n: int, *idx: int) -> None:
    for k in idx:
        if not 0 <= k < n:
            raise IndexOutOfRange(f"index {k} out of range for size {n}")


def swap_rows(P: SignPattern, i: int, j: int) -> SignPattern:
    _check_index(P.nrows, i, j)
    rows = [P.row(k) for k in range(P.nrows)]
    rows[i], rows[j] = rows[j], rows[i]
    return SignPattern(rows)


def swap_cols(P: SignPattern, i: int, j: int) -> SignPattern:
    _check_index(P.ncols, i, j)
    order = list(range(P.ncols))
    order[i], order[j] = order[j], order[i]
    return P.submatrix(range(P.nrows), order)


def negate_row(P: SignPattern, i: int) -> SignPattern:
    _check_index(P.nrows, i)
    return SignPattern(
        [[_flip(e) for e in P.row(k)] if k == i else P.row(k) for k in range(P.nrows)]
    )


def negate_col(P: SignPattern, j: int) -> SignPattern:
    _check_index(P.ncols, j)
    return SignPattern(
        [[_flip(e) if c == j else e for c, e in enumerate(P.row(k))] for k in range(P.nrows)]
    )


def _flip(e: Var | None) -> Var | None:
    return None if e is None else Var(-e.sign, e.id)


_TRANSFORMS = {
    "swap_rows": swap_rows,
    "swap_cols": swap_cols,
    "negate_row": negate_row,
    "negate_col": negate_col,
}


def transform(P: SignPattern, op: tuple) -> SignPattern:
    """Apply ``op`` = ``("swap_rows", i, j)``, ``("swap_cols", i, j)``,
    ``("negate_row", i)`` or ``("negate_col", j)``."""
    name, *args = op
    try:
        fn = _TRANSFORMS[name]
    except KeyError:
        raise ValueError(f"unknown transform {name!r}") from None
    return fn(P, *args)


# ---------------------------------------------------------------------------
# diagonal normalization


def max_bipartite_matching(adj: Sequence[Sequence[int]], n_right: int) -> list[int | None]:
    """Augmenting-path matching of left vertices to right vertices.

    ``adj[u]`` lists right neighbours of left vertex ``u``; they are tried in the
    given order, so passing sorted lists breaks ties by lowest index.
    Returns ``match[u]`` (right vertex or None) for every left vertex.
    """
    owner: list[int | None] = [None] * n_right

    def augment(u: int, seen: list[bool]) -> bool:
        for v in adj[u]:
            if seen[v]:
                continue
            seen[v] = True
            if owner[v] is None or augment(owner[v], seen):
                owner[v] = u
                return True
        return False

    for u in range(len(adj)):
        augment(u, [False] * n_right)
    match: list[int | None] = [None] * len(adj)
    for v, u in enumerate(owner):
        if u is not None:
            match[u] = v
    return match


@dataclass(frozen=True)
class NormalizedPattern:
    """Row-permuted pattern with a nonzero diagonal.

    ``row_perm[j]`` is the original row placed at position ``j``; the diagonal
    matching pairs column ``j`` with original row ``row_perm[j]``.
    """

    pattern: SignPattern
    row_perm: tuple[int, ...]

    @property
    def matching(self) -> dict[int, int]:
        return {j: r for j, r in enumerate(self.row_perm)}

    @property
    def perm_sign(self) -> int:
        return permutation_sign(self.row_perm)


def permutation_sign(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for s in range(len(perm)):
        if seen[s]:
            continue
        k, length = s, 0
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def normalize_diagonal(P: SignPattern) -> NormalizedPattern | None:
    """Permute rows so that every diagonal entry is nonzero.

    Returns None when the bipartite graph of ``P`` has no perfect matching.
    """
    if not P.is_square():
        raise NotSquare(f"pattern is {P.nrows}x{P.ncols}")
    n = P.nrows
    col_adj = [[i for i in range(n) if P[i, j] is not None] for j in range(n)]
    match = max_bipartite_matching(col_adj, n)
    if any(m is None for m in match):
        return None
    perm = tuple(match)
    return NormalizedPattern(P.submatrix(perm, range(n)), perm)
