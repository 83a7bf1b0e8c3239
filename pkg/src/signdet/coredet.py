"""Core and Craciun-Feinberg determinants of ``S U`` and their anomalous signs.

Reversible column pairs ``c, -c`` of ``S`` are merged: ``S U = S_red U_red``
after renaming variables, where ``U_red`` carries a negative variable for
every positive entry of a kept reversible column. The core determinant is
then a Binet-Cauchy sum over ``r x r`` minors of ``S_red`` and ``U_red``.
Different minor pairs never share a monomial (a monomial of
``det U_red(beta|alpha)`` determines both index sets), so the sum has no
cancellation and all counts are read off pair by pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Optional

from .bigraph import DEFAULT_LIMIT, build_graph, term_rank
from .detsign import count_signs_graph
from .errors import LimitExceeded, NotApplicable
from .matrix_core import (
    RationalMatrix,
    SignCounts,
    SignPattern,
    Var,
    determinant,
    rank,
    sign_pattern_of,
)
from .jacobian import flux_pattern
from .symexpand import (
    ORACLE_CAP,
    Monomial,
    MultilinearPoly,
    det_poly_matrix,
    shift_diagonal,
    sign_counts,
    symbolic_product,
)

RED_TAG = "Ured"


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


# ---------------------------------------------------------------------------
# reduction


@dataclass(frozen=True)
class ColumnProvenance:
    kept: int  # column index in S
    partner: Optional[int] = None  # dropped reverse column, if any

    @property
    def reversible(self) -> bool:
        return self.partner is not None


@dataclass(frozen=True)
class ReducedSystem:
    s_red: RationalMatrix
    u_red: SignPattern
    column_provenance: tuple[ColumnProvenance, ...]
    renaming: dict  # u_red var id -> flux_pattern(S) var id

    @property
    def d(self) -> int:
        return self.s_red.nrows

    def inverse_renaming(self) -> dict:
        return {v: k for k, v in self.renaming.items()}


def reversible_pairs(S: RationalMatrix) -> list[tuple[int, int]]:
    """Greedy pairing of columns with their negations, lowest indices first."""
    cols = [S.column(j) for j in range(S.ncols)]
    used: set[int] = set()
    pairs = []
    for j in range(len(cols)):
        if j in used:
            continue
        neg = tuple(-x for x in cols[j])
        for k in range(j + 1, len(cols)):
            if k not in used and cols[k] == neg:
                used.update((j, k))
                pairs.append((j, k))
                break
    return pairs


def reduce(S: RationalMatrix) -> ReducedSystem:
    partner = dict(reversible_pairs(S))
    dropped = set(partner.values())
    prov = tuple(ColumnProvenance(j, partner.get(j)) for j in range(S.ncols) if j not in dropped)
    d = S.nrows
    s_red = RationalMatrix([[S[i, p.kept] for p in prov] for i in range(d)])
    rows = []
    renaming = {}
    for c, p in enumerate(prov):
        row = []
        for i in range(d):
            x = S[i, p.kept]
            vid = (RED_TAG, c, i)
            if x < 0:
                row.append(Var(1, vid))
                renaming[vid] = ("U", p.kept, i)
            elif x > 0 and p.reversible:
                row.append(Var(-1, vid))
                renaming[vid] = ("U", p.partner, i)
            else:
                row.append(None)
        rows.append(row)
    return ReducedSystem(s_red, SignPattern(rows), prov, renaming)


def renamed_product(R: ReducedSystem) -> list[list[MultilinearPoly]]:
    """``S_red U_red`` written in the variables of the full flux pattern."""
    return [[p.rename(R.renaming) for p in row] for row in symbolic_product(R.s_red, R.u_red)]


# ---------------------------------------------------------------------------
# minor sums


def pattern_det(P: SignPattern) -> MultilinearPoly:
    """Determinant expansion of a square pattern by row-wise matching search."""
    n = P.nrows
    if n == 0:
        return MultilinearPoly.constant(1)
    rows = [[(j, e) for j, e in enumerate(P.row(i)) if e is not None] for i in range(n)]
    terms: dict[Monomial, Fraction] = {}
    perm = [0] * n

    def rec(i: int, used: int, sign: int, ids: list) -> None:
        if i == n:
            # parity of perm by counting inversions
            inv = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
            s = -sign if inv % 2 else sign
            terms[Monomial(0, tuple(sorted(ids)))] = Fraction(s)
            return
        for j, e in rows[i]:
            if not used >> j & 1:
                perm[i] = j
                ids.append(e.id)
                rec(i + 1, used | 1 << j, sign * e.sign, ids)
                ids.pop()

    rec(0, 0, 1, [])
    return MultilinearPoly(terms)


@dataclass(frozen=True)
class MinorTerm:
    rows: tuple[int, ...]  # alpha, rows of S_red
    cols: tuple[int, ...]  # beta, columns of S_red
    s_det: Fraction
    u_pattern: SignPattern  # U_red(beta|alpha)

    @property
    def size(self) -> int:
        return len(self.rows)


def iter_minor_pairs(R: ReducedSystem, size: int, limit: int = DEFAULT_LIMIT) -> Iterator[MinorTerm]:
    """Pairs (alpha, beta) of the given size with det S_red(alpha|beta) != 0.

    Pairs whose U_red minor has no perfect matching are skipped as well.
    """
    d, k = R.s_red.shape
    if size == 0:
        yield MinorTerm((), (), Fraction(1), SignPattern([]))
        return
    seen = 0
    for alpha in combinations(range(d), size):
        for beta in combinations(range(k), size):
            seen += 1
            if seen > limit:
                raise LimitExceeded(limit, what="minor pairs")
            U = R.u_red.submatrix(beta, alpha)
            if term_rank(build_graph(U)) < size:
                continue
            s_det = determinant(R.s_red.submatrix(alpha, beta).to_lists())
            if s_det == 0:
                continue
            yield MinorTerm(alpha, beta, s_det, U)


def _minor_sum(R: ReducedSystem, size: int, limit: int) -> MultilinearPoly:
    total = MultilinearPoly()
    for term in iter_minor_pairs(R, size, limit):
        total = total + pattern_det(term.u_pattern).scale(term.s_det)
    return total


def core_determinant(S: RationalMatrix, limit: int = DEFAULT_LIMIT) -> MultilinearPoly:
    """cd(S) in the variables of ``U_red``."""
    R = reduce(S)
    d, r = S.nrows, rank(S)
    poly = _minor_sum(R, r, limit)
    return -poly if (d - r) % 2 else poly


def cf_determinant(S: RationalMatrix, t_value=1, limit: int = DEFAULT_LIMIT) -> MultilinearPoly:
    """det(S U - t I) in the variables of ``U_red``; ``t_value=None`` keeps t symbolic.

    Includes the constant ``(-t)**d`` term of the empty minor.
    """
    R = reduce(S)
    d, r = S.nrows, rank(S)
    total = MultilinearPoly()
    for s in range(r + 1):
        part = _minor_sum(R, s, limit)
        if part.is_zero():
            continue
        if t_value is None:
            factor = MultilinearPoly({Monomial(d - s, ()): (-1) ** (d - s)})
        else:
            factor = MultilinearPoly.constant((-Fraction(t_value)) ** (d - s))
        total = total + part * factor
    return total


def _flux_product(S: RationalMatrix):
    return symbolic_product(S, flux_pattern(S))


def core_determinant_oracle(S: RationalMatrix, cap: int = ORACLE_CAP) -> MultilinearPoly:
    """Coefficient of t^(d-r) in det(S U - t I) with the full flux pattern, renamed to U_red."""
    d, r = S.nrows, rank(S)
    full = det_poly_matrix(_flux_product(S), minus_t=True, cap=cap)
    return full.t_coefficient(d - r).rename(reduce(S).inverse_renaming())


def cf_determinant_oracle(S: RationalMatrix, t_value=1, cap: int = ORACLE_CAP) -> MultilinearPoly:
    M = _flux_product(S)
    if t_value is None:
        poly = det_poly_matrix(M, minus_t=True, cap=cap)
    else:
        poly = det_poly_matrix(shift_diagonal(M, Fraction(t_value)), cap=cap)
    return poly.rename(reduce(S).inverse_renaming())


# ---------------------------------------------------------------------------
# genericity


@dataclass(frozen=True)
class Genericity:
    status: str  # "Generic", "NotGeneric" or "Unverified"
    weakly_generic: bool
    rank: int
    generic_rank: int
    witness: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None
    checked: int = 0

    def to_dict(self) -> dict:
        w = None
        if self.witness is not None:
            w = {"rows": [i + 1 for i in self.witness[0]], "cols": [j + 1 for j in self.witness[1]]}
        return {
            "status": self.status,
            "weakly_generic": self.weakly_generic,
            "rank": self.rank,
            "generic_rank": self.generic_rank,
            "witness": w,
        }


def is_weakly_generic(M: RationalMatrix) -> bool:
    return rank(M) == term_rank(build_graph(M))


def genericity_check(R: ReducedSystem, exhaustive_cap: int = 20000) -> Genericity:
    """Compare ranks with the largest rank the sign pattern allows.

    The pattern's maximal rank is its term rank (size of a maximum
    matching of the graph).
    """
    M = R.s_red
    r = rank(M)
    gr = term_rank(build_graph(M))
    if r < gr:
        return Genericity("NotGeneric", False, r, gr)
    if r == 0:
        return Genericity("Generic", True, 0, 0)
    checked = 0
    for alpha in combinations(range(M.nrows), r):
        for beta in combinations(range(M.ncols), r):
            if checked >= exhaustive_cap:
                return Genericity("Unverified", True, r, gr, checked=checked)
            checked += 1
            if not is_weakly_generic(M.submatrix(alpha, beta)):
                return Genericity("NotGeneric", True, r, gr, (alpha, beta), checked)
    return Genericity("Generic", True, r, gr, checked=checked)


# ---------------------------------------------------------------------------
# counting


def _oriented_counts(term: MinorTerm, flip: bool = False) -> SignCounts:
    """Counts of det S(alpha|beta) * det U(beta|alpha) (negated when flip)."""
    c = count_signs_graph(term.u_pattern)
    s = _sgn(term.s_det)
    return c.oriented(-s if flip else s)


def _sum_counts(parts) -> SignCounts:
    plus = minus = 0
    for c in parts:
        plus += c.m_plus
        minus += c.m_minus
    return SignCounts.from_plus_minus(plus, minus)


def core_counts(S: RationalMatrix, limit: int = DEFAULT_LIMIT) -> SignCounts:
    """Sign counts of cd(S) from the det sign test on each U_red minor."""
    R = reduce(S)
    d, r = S.nrows, rank(S)
    flip = (d - r) % 2 == 1
    return _sum_counts(_oriented_counts(t, flip) for t in iter_minor_pairs(R, r, limit))


def square_case_counts(S: RationalMatrix) -> SignCounts:
    """Counts of cd(S) from the det sign test on U_red when S_red is square, invertible and generic."""
    R = reduce(S)
    M = R.s_red
    if M.nrows != M.ncols:
        raise NotApplicable(f"S_red is {M.nrows}x{M.ncols}, not square")
    det = determinant(M.to_lists())
    if det == 0:
        raise NotApplicable("S_red is singular")
    if genericity_check(R).status != "Generic":
        raise NotApplicable("S_red is not generic")
    return count_signs_graph(R.u_red).oriented(_sgn(det))


@dataclass(frozen=True)
class Bounds:
    lower: int
    upper: int
    n_lower: int  # bounds on the number of terms of sign (-1)^(d-1)
    n_upper: int
    n_set_size: int  # number of non-SD r x r submatrices of S_red
    advisory: bool = False  # S_red not weakly generic
    partial: bool = False

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "n_lower": self.n_lower,
            "n_upper": self.n_upper,
            "n_set_size": self.n_set_size,
            "advisory": self.advisory,
            "partial": self.partial,
        }


@dataclass
class _PairInfo:
    term: MinorTerm
    s_sd: bool  # sign pattern of S_red(alpha|beta) is sign definite
    u_counts: SignCounts
    product_sign: int = field(init=False)  # sign of det S_i * det U_i when U_i is SD

    def __post_init__(self):
        c = self.u_counts
        self.product_sign = _sgn(self.term.s_det) * (1 if c.m_plus >= c.m_minus else -1)


def _pair_infos(R: ReducedSystem, r: int, limit: int) -> list[_PairInfo]:
    out = []
    for term in iter_minor_pairs(R, r, limit):
        s_sd = not term.rows or count_signs_graph(sign_pattern_of(R.s_red.submatrix(term.rows, term.cols)), limit).m == 0
        out.append(_PairInfo(term, s_sd, count_signs_graph(term.u_pattern, limit)))
    return out


def anomalous_bounds(S: RationalMatrix, limit: int = DEFAULT_LIMIT) -> Bounds:
    """Lower and upper bounds on m(cd(S)) from the U_red minors.

    Sums run over the pairs with nonzero S_red minor, which for generic
    S_red are exactly the pairs where U_red(beta|alpha) has any terms.
    """
    R = reduce(S)
    r = rank(S)
    advisory = not is_weakly_generic(R.s_red)
    lo = hi = nlo = nhi = nsize = 0
    try:
        for p in _pair_infos(R, r, limit):
            c = p.u_counts
            lo += c.m
            hi += c.t - c.m
            if not p.s_sd:
                nsize += 1
                nlo += c.m
                nhi += c.t - c.m
    except LimitExceeded as exc:
        exc.partial = Bounds(lo, hi, nlo, nhi, nsize, advisory, True)
        raise
    return Bounds(lo, hi, nlo, nhi, nsize, advisory)


# ---------------------------------------------------------------------------
# zero-one algorithm


@dataclass(frozen=True)
class ZeroOneResult:
    verdict: str  # "Zero", "One", "MoreThanOne" or "Inapplicable"
    case: Optional[str] = None
    reason: Optional[str] = None
    advisory: bool = False

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "case": self.case, "reason": self.reason, "advisory": self.advisory}


def _verdict_of(m: int) -> str:
    return "Zero" if m == 0 else "One" if m == 1 else "MoreThanOne"


def zero_one_algorithm(S: RationalMatrix, limit: int = DEFAULT_LIMIT) -> ZeroOneResult:
    """Decide whether cd(S) has zero, one or more anomalous signs.

    Works on the non-SD r x r submatrices of S_red with nonzero determinant.
    The rules assume any anomalous sign of cd(S) is (-1)^(d-1); this is
    checked against the per-pair counts and, when it fails, the verdict comes
    from direct counting with ``advisory`` set.
    """
    R = reduce(S)
    d, r = S.nrows, rank(S)
    if not is_weakly_generic(R.s_red):
        return ZeroOneResult("Inapplicable", reason="S_red is not weakly generic")
    infos = _pair_infos(R, r, limit)

    # orientation: terms of cd with sign (-1)^d versus (-1)^(d-1)
    flip = (d - r) % 2 == 1
    total = _sum_counts(_oriented_counts(p.term, flip) for p in infos)
    major, minor = (total.m_plus, total.m_minus) if d % 2 == 0 else (total.m_minus, total.m_plus)
    if minor > major:
        return ZeroOneResult(_verdict_of(total.m), "Direct", "anomalous sign is (-1)^d", True)

    bad = (-1) ** (r - 1)
    N = [p for p in infos if not p.s_sd]
    if not N:
        return ZeroOneResult("Zero", "E")
    non_sd_u = [p for p in N if p.u_counts.m > 0]
    if not non_sd_u:
        wrong = [p for p in N if p.product_sign == bad]
        if not wrong:
            return ZeroOneResult("Zero", "N(a)")
        if len(wrong) > 1 or wrong[0].u_counts.t > 1:
            return ZeroOneResult("MoreThanOne", "N(a)")
        return ZeroOneResult("One", "N(a)")
    if len(non_sd_u) >= 2:
        return ZeroOneResult("MoreThanOne", "N(c)")
    p0 = non_sd_u[0]
    if any(p.product_sign == bad for p in N if p is not p0):
        return ZeroOneResult("MoreThanOne", "N(b)")
    c0 = p0.u_counts
    if c0.m > 1:
        return ZeroOneResult("MoreThanOne", "N(b)(i)")
    if c0.t == 2:
        return ZeroOneResult("One", "N(b)(ii)")
    eps = 1 if c0.m == c0.m_plus else -1
    ok = eps * _sgn(p0.term.s_det) == bad
    return ZeroOneResult("One" if ok else "MoreThanOne", "N(b)(ii)")


# ---------------------------------------------------------------------------
# report


def anomalous_cfd_count(S: RationalMatrix, t_value=1, limit: int = DEFAULT_LIMIT) -> SignCounts:
    return sign_counts(cf_determinant(S, t_value, limit))


def coredet_report(
    S: RationalMatrix,
    cfd: bool = False,
    zero_one: bool = False,
    bounds: bool = False,
    limit: int = DEFAULT_LIMIT,
    exhaustive_cap: int = 20000,
) -> dict:
    R = reduce(S)
    r = rank(S)
    cd = core_determinant(S, limit)
    gen = genericity_check(R, exhaustive_cap)
    out = {
        "rank_r": r,
        "cd_poly": cd.to_json_obj(),
        "counts": sign_counts(cd).to_dict(),
        "genericity": gen.to_dict(),
    }
    if bounds:
        try:
            out["bounds"] = anomalous_bounds(S, limit).to_dict()
        except LimitExceeded as exc:
            out["bounds"] = exc.partial.to_dict() if exc.partial is not None else None
    if zero_one:
        out["zero_one_verdict"] = zero_one_algorithm(S, limit).to_dict()
    if cfd:
        poly = cf_determinant(S, 1, limit)
        out["cfd"] = {"t_value": "1", "counts": sign_counts(poly).to_dict(), "poly": poly.to_json_obj()}
    return out
