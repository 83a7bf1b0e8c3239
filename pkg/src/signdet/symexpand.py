"""Multilinear polynomials with exact coefficients, and brute-force determinants.

A term is a monomial ``t**k * prod(vars)`` where every variable occurs at most
once. ``det_expansion`` and ``det_poly_matrix`` are deliberately naive: they
are the reference against which the graph-theoretic counts are checked.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import DimensionMismatch, NotSquare, TooLarge
from .matrix_core import (
    RationalMatrix,
    SignCounts,
    SignPattern,
    VarId,
    parse_var_name,
    permutation_sign,
    to_rational,
    var_name,
)

ORACLE_CAP = 9


class Monomial(NamedTuple):
    t_degree: int
    vars: tuple  # sorted tuple of VarId

    def __str__(self) -> str:
        parts = [var_name(v) for v in self.vars]
        if self.t_degree == 1:
            parts.insert(0, "t")
        elif self.t_degree > 1:
            parts.insert(0, f"t^{self.t_degree}")
        return "*".join(parts) if parts else "1"


ONE_MONO = Monomial(0, ())


def _mul_mono(a: Monomial, b: Monomial) -> Monomial:
    if not a.vars:
        vars_ = b.vars
    elif not b.vars:
        vars_ = a.vars
    else:
        merged = a.vars + b.vars
        vars_ = tuple(sorted(merged))
        if len(set(vars_)) != len(vars_):
            raise ValueError("product is not multilinear: a variable repeats")
    return Monomial(a.t_degree + b.t_degree, vars_)


class MultilinearPoly:
    """Immutable map ``Monomial -> Fraction`` with no zero coefficients stored."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, Fraction] = {}
        for mono, c in items:
            if not isinstance(mono, Monomial):
                mono = Monomial(mono[0], tuple(sorted(mono[1])))
            acc[mono] = acc.get(mono, 0) + to_rational(c)
        self._terms = {m: c for m, c in acc.items() if c != 0}

    # construction helpers
    @classmethod
    def constant(cls, c) -> MultilinearPoly:
        return cls({ONE_MONO: to_rational(c)})

    @classmethod
    def variable(cls, var_id: VarId, coeff=1) -> MultilinearPoly:
        return cls({Monomial(0, (var_id,)): to_rational(coeff)})

    @classmethod
    def t(cls, coeff=1) -> MultilinearPoly:
        return cls({Monomial(1, ()): to_rational(coeff)})

    @classmethod
    def _raw(cls, terms: dict) -> MultilinearPoly:
        p = cls.__new__(cls)
        p._terms = terms
        return p

    # access
    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    def variables(self) -> set:
        return {v for m in self._terms for v in m.vars}

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: (kv[0].t_degree, kv[0].vars))

    def min_t_degree(self) -> int | None:
        return min((m.t_degree for m in self._terms), default=None)

    # arithmetic
    def __add__(self, other: MultilinearPoly) -> MultilinearPoly:
        acc = dict(self._terms)
        for m, c in other._terms.items():
            v = acc.get(m, 0) + c
            if v:
                acc[m] = v
            else:
                acc.pop(m, None)
        return MultilinearPoly._raw(acc)

    def __neg__(self) -> MultilinearPoly:
        return MultilinearPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: MultilinearPoly) -> MultilinearPoly:
        return self + (-other)

    def scale(self, c) -> MultilinearPoly:
        c = to_rational(c)
        if c == 0:
            return MultilinearPoly()
        return MultilinearPoly._raw({m: v * c for m, v in self._terms.items()})

    def __mul__(self, other) -> MultilinearPoly:
        if not isinstance(other, MultilinearPoly):
            return self.scale(other)
        acc: dict[Monomial, Fraction] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = _mul_mono(ma, mb)
                v = acc.get(m, 0) + ca * cb
                if v:
                    acc[m] = v
                else:
                    acc.pop(m, None)
        return MultilinearPoly._raw(acc)

    __rmul__ = scale

    def __eq__(self, other) -> bool:
        return isinstance(other, MultilinearPoly) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # transformations
    def t_coefficient(self, k: int) -> MultilinearPoly:
        """Coefficient of ``t**k`` as a t-free polynomial."""
        return MultilinearPoly._raw(
            {Monomial(0, m.vars): c for m, c in self._terms.items() if m.t_degree == k}
        )

    def substitute_t(self, value) -> MultilinearPoly:
        value = to_rational(value)
        return MultilinearPoly(
            (Monomial(0, m.vars), c * value**m.t_degree) for m, c in self._terms.items()
        )

    def rename(self, mapping: Mapping[VarId, VarId]) -> MultilinearPoly:
        """Rename variables (ids missing from ``mapping`` are kept)."""
        return MultilinearPoly(
            (Monomial(m.t_degree, tuple(sorted(mapping.get(v, v) for v in m.vars))), c)
            for m, c in self._terms.items()
        )

    # serialization
    def to_json_obj(self) -> list[dict]:
        return [
            {"coeff": format_rational(c), "t_deg": m.t_degree, "vars": [var_name(v) for v in m.vars]}
            for m, c in self.sorted_terms()
        ]

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: list[dict]) -> MultilinearPoly:
        return cls(
            (Monomial(int(t["t_deg"]), tuple(sorted(parse_var_name(v) for v in t["vars"]))), Fraction(t["coeff"]))
            for t in obj
        )

    @classmethod
    def from_json(cls, text: str) -> MultilinearPoly:
        return cls.from_json_obj(json.loads(text))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            body = str(m)
            if body == "1":
                term = format_rational(abs(c))
            elif abs(c) == 1:
                term = body
            else:
                term = f"{format_rational(abs(c))}*{body}"
            out.append(("- " if c < 0 else "+ ") + term)
        s = " ".join(out)
        return s[2:] if s.startswith("+ ") else "-" + s[1:]

    def __repr__(self) -> str:
        return f"MultilinearPoly({self})"


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def sign_counts(p: MultilinearPoly) -> SignCounts:
    """Term count and the number of positive / negative coefficients."""
    plus = sum(1 for _, c in p.items() if c > 0)
    return SignCounts.from_plus_minus(plus, len(p) - plus)


# ---------------------------------------------------------------------------
# determinants


def _pattern_entry_poly(e) -> MultilinearPoly:
    return MultilinearPoly() if e is None else MultilinearPoly.variable(e.id, e.sign)


def det_expansion(P: SignPattern, cap: int = ORACLE_CAP) -> MultilinearPoly:
    """Sum over all permutations of ``sign(s) * prod P[i, s(i)]``."""
    if not P.is_square():
        raise NotSquare(f"pattern is {P.nrows}x{P.ncols}")
    n = P.nrows
    if n > cap:
        raise TooLarge(f"{n}x{n} exceeds the oracle cap {cap}")
    rows = [P.row(i) for i in range(n)]
    acc: dict[Monomial, Fraction] = {}
    for perm in permutations(range(n)):
        sign = permutation_sign(perm)
        ids = []
        for i, j in enumerate(perm):
            e = rows[i][j]
            if e is None:
                break
            sign *= e.sign
            ids.append(e.id)
        else:
            m = Monomial(0, tuple(sorted(ids)))
            acc[m] = acc.get(m, 0) + sign
    return MultilinearPoly(acc)


PolyMatrix = Sequence[Sequence[MultilinearPoly]]


def symbolic_product(S: RationalMatrix, U: SignPattern) -> list[list[MultilinearPoly]]:
    """``S @ U`` with ``U`` a pattern of signed free variables; entries are linear forms."""
    if S.ncols != U.nrows:
        raise DimensionMismatch(f"cannot multiply {S.nrows}x{S.ncols} by {U.nrows}x{U.ncols}")
    out = []
    for i in range(S.nrows):
        srow = S.row(i)
        row = []
        for j in range(U.ncols):
            acc = {}
            for k, s in enumerate(srow):
                e = U[k, j]
                if s and e is not None:
                    acc[Monomial(0, (e.id,))] = s * e.sign
            row.append(MultilinearPoly(acc))
        out.append(row)
    return out


def shift_diagonal(M: PolyMatrix, t_value=None) -> list[list[MultilinearPoly]]:
    """``M - t I``; symbolic ``t`` when ``t_value`` is None, otherwise the given number."""
    shift = MultilinearPoly.t() if t_value is None else MultilinearPoly.constant(t_value)
    return [[e - shift if i == j else e for j, e in enumerate(row)] for i, row in enumerate(M)]


def det_poly_matrix(M: PolyMatrix, minus_t: bool = False, cap: int = ORACLE_CAP) -> MultilinearPoly:
    """Exact determinant of a square matrix of polynomials.

    Evaluated as the permutation sum grouped by Laplace expansion along rows,
    with sub-determinants on column subsets memoized. ``minus_t`` subtracts a
    symbolic ``t`` from every diagonal entry first.
    """
    n = len(M)
    if any(len(r) != n for r in M):
        raise NotSquare("polynomial matrix is not square")
    if n > cap:
        raise TooLarge(f"{n}x{n} exceeds the oracle cap {cap}")
    if minus_t:
        M = shift_diagonal(M)
    if n == 0:
        return MultilinearPoly.constant(1)

    @lru_cache(maxsize=None)
    def minor(mask: int) -> MultilinearPoly:
        # rows k..n-1 against the columns set in mask, k = n - popcount(mask)
        k = n - bin(mask).count("1")
        if k == n:
            return MultilinearPoly.constant(1)
        total = MultilinearPoly()
        pos = 0
        for j in range(n):
            if not mask >> j & 1:
                continue
            e = M[k][j]
            if not e.is_zero():
                sub = minor(mask & ~(1 << j))
                if not sub.is_zero():
                    term = e * sub
                    total = total - term if pos % 2 else total + term
            pos += 1
        return total

    return minor((1 << n) - 1)
