"""Acceptance criteria, one test group per criterion.

Run ``pytest tests/test_acceptance.py`` and read the "acceptance criteria"
section at the end of the output: one PASS/FAIL line per criterion.
"""

import itertools
import random
from functools import lru_cache

import pytest

from conftest import FIXTURES, load, load_pattern, random_signs, random_stoich, with_reverse
from signdet.bigraph import (
    build_graph,
    enumerate_perfect_matchings,
    find_four_cycle_three_negative,
    has_four_cycle_three_negative,
    interlacing_cycles,
    single_cycle_with_short_hair,
)
from signdet.coredet import (
    anomalous_bounds,
    cf_determinant,
    core_determinant,
    core_determinant_oracle,
    genericity_check,
    is_weakly_generic,
    reduce,
    renamed_product,
    zero_one_algorithm,
)
from signdet.detsign import count_signs_graph, fast_counts, is_ssd, j_sign_bound
from signdet.jacobian import find_forbidden_2x2, flux_pattern, jacobian_sign_pattern
from signdet.matrix_core import RationalMatrix, SignCounts, SignPattern, permutation_sign, transform
from signdet.symexpand import det_expansion, sign_counts, symbolic_product

crit = pytest.mark.criterion


def oracle(P):
    return sign_counts(det_expansion(P))


def all_square_submatrices(P):
    for k in range(1, min(P.shape) + 1):
        for rows in itertools.combinations(range(P.nrows), k):
            for cols in itertools.combinations(range(P.ncols), k):
                yield P.submatrix(rows, cols)


# --- 1 -----------------------------------------------------------------------


@crit(1)
def test_c1_example_b():
    P = load_pattern("exB.csv")
    c = count_signs_graph(P)
    assert (c.t, c.m) == (1, 0)
    assert c.m_plus == 0 or c.m_minus == 0
    from signdet.detsign import classify

    assert classify(P).kind == "SNS"


@crit(1)
def test_c1_example_c():
    assert count_signs_graph(load_pattern("exC.csv")) == SignCounts(3, 1, 2, 1)


# --- 2 -----------------------------------------------------------------------


def _counts_via(P, w):
    G = build_graph(P)
    n = P.nrows
    eps = permutation_sign(tuple(w[c] for c in range(n)))
    for c in range(n):
        eps *= P.sign(w[c], c)
    cycles = interlacing_cycles(G, w)
    sets = odd = 0
    for k in range(1, len(cycles) + 1):
        for combo in itertools.combinations(cycles, k):
            if all(a.disjoint(b) for a, b in itertools.combinations(combo, 2)):
                sets += 1
                odd += sum(c.is_e_cycle for c in combo) % 2
    plus, minus = (1 + sets - odd, odd) if eps > 0 else (odd, 1 + sets - odd)
    return len(cycles), SignCounts.from_plus_minus(plus, minus)


@crit(2)
def test_c2_g3_matchings():
    P = load_pattern("exG3.csv")
    n1, c1 = _counts_via(P, {0: 2, 1: 0, 2: 1, 3: 3})
    n2, c2 = _counts_via(P, {0: 1, 1: 0, 2: 2, 3: 3})
    assert (n1, n2) == (3, 4)
    assert c1 == c2 == count_signs_graph(P) == oracle(P)


@crit(2)
def test_c2_every_matching_agrees():
    P = load_pattern("exG3.csv")
    counts = {_counts_via(P, W.as_dict())[1] for W in enumerate_perfect_matchings(build_graph(P))}
    assert counts == {oracle(P)}


# --- 3 -----------------------------------------------------------------------


@crit(3)
def test_c3_oracle_equivalence():
    rng = random.Random(301)
    for _ in range(520):
        n = rng.randint(2, 6)
        P = SignPattern.from_signs(random_signs(rng, n, n, rng.uniform(0.3, 0.9)))
        assert count_signs_graph(P) == oracle(P), P.signs()


# --- 4 -----------------------------------------------------------------------

O_BLOCK = [[1, 1], [-1, 1]]
E_BLOCK = [[1, 1], [1, 1]]


def block_diag(blocks):
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    k = 0
    for b in blocks:
        for i, row in enumerate(b):
            out[k + i][k:k + len(row)] = row
        k += len(b)
    return out


@crit(4)
@pytest.mark.parametrize("t", [2, 3, 4])
@pytest.mark.parametrize("n_e", [0, 1, 2])
def test_c4_disjoint_cycles(t, n_e):
    P = SignPattern.from_signs(block_diag([E_BLOCK] * n_e + [O_BLOCK] * (t - n_e)))
    cycles = interlacing_cycles(build_graph(P), {j: j for j in range(2 * t)})
    assert len(cycles) == t
    assert all(a.disjoint(b) for a, b in itertools.combinations(cycles, 2))
    c = count_signs_graph(P)
    assert c.t == 2**t
    assert c.m == (0 if n_e == 0 else 2 ** (t - 1))
    assert fast_counts(P) == c == oracle(P)


# --- 5 -----------------------------------------------------------------------


@crit(5)
def test_c5_transform_invariance():
    rng = random.Random(501)
    for _ in range(200):
        n = rng.randint(2, 5)
        P = SignPattern.from_signs(random_signs(rng, n, n, rng.uniform(0.4, 0.9)))
        kind = rng.choice(["swap_rows", "swap_cols", "negate_row", "negate_col"])
        if kind.startswith("swap"):
            i, j = rng.sample(range(n), 2)
            op = (kind, i, j)
        else:
            op = (kind, rng.randrange(n))
        Q = transform(P, op)
        before, after = oracle(P), oracle(Q)
        assert count_signs_graph(Q) == after
        assert after.m == before.m and after.t == before.t
        # every one of these transforms flips the sign of each term
        assert (after.m_plus, after.m_minus) == (before.m_minus, before.m_plus)


# --- 6 -----------------------------------------------------------------------


@crit(6)
def test_c6_ssd():
    rng = random.Random(601)
    seen = {True: 0, False: 0}
    for _ in range(150):
        P = SignPattern.from_signs(random_signs(rng, rng.randint(1, 5), rng.randint(1, 6), rng.uniform(0.2, 0.7)))
        brute = all(oracle(Q).m == 0 for Q in all_square_submatrices(P))
        ok, witness = is_ssd(P)
        assert ok == brute
        assert (witness is None) == ok
        seen[ok] += 1
    assert min(seen.values()) > 10


# --- 7 -----------------------------------------------------------------------


@crit(7)
def test_c7_j_sign():
    rng = random.Random(701)
    for _ in range(80):
        P = SignPattern.from_signs(random_signs(rng, rng.randint(1, 5), rng.randint(1, 5), rng.uniform(0.3, 0.8)))
        brute = max((oracle(Q).m for Q in all_square_submatrices(P)), default=0)
        assert j_sign_bound(P).J == brute


# --- 8 -----------------------------------------------------------------------


def _uniform(SU):
    return all(len({c > 0 for _, c in p.items()}) <= 1 for row in SU for p in row)


@crit(8)
def test_c8_jacobian_equivalence():
    rng = random.Random(801)
    for _ in range(300):
        d, dp = rng.randint(1, 6), rng.randint(1, 6)
        dens = rng.uniform(0.3, 0.8)
        S = RationalMatrix([[rng.choice([-2, -1, 1, 3]) if rng.random() < dens else 0 for _ in range(dp)] for _ in range(d)])
        scan = find_forbidden_2x2(S) is None
        G = build_graph(S)
        assert scan == (not has_four_cycle_three_negative(G)) == _uniform(symbolic_product(S, flux_pattern(S)))
        assert jacobian_sign_pattern(S).has_pattern == scan
        if not scan:
            assert find_four_cycle_three_negative(G) is not None


@crit(8)
def test_c8_reversible_fixture():
    res = jacobian_sign_pattern(load("rev2x2.csv"))
    assert res.has_pattern
    assert res.su_signs == ((-1, -1), (-1, -1))


# --- shared instances for 9, 10, 14, 15 -----------------------------------------


def _injected(rng, d):
    """Random S with at least one reversible pair and at most six columns."""
    while True:
        S = random_stoich(rng, d, rng.randint(1, 4), density=rng.uniform(0.4, 0.8), rev_prob=0.5)
        if S.ncols <= 6 and reduce(S).s_red.ncols < S.ncols:
            return S


@lru_cache(maxsize=None)
def random_c9():
    rng = random.Random(901)
    return [_injected(rng, rng.randint(1, 6)) for _ in range(200)]


@lru_cache(maxsize=None)
def random_c10():
    rng = random.Random(1001)
    out = []
    while len(out) < 200:
        S = random_stoich(rng, rng.randint(1, 5), rng.randint(1, 4), density=rng.uniform(0.4, 0.8))
        if S.ncols <= 7:
            out.append(S)
    return out


@lru_cache(maxsize=None)
def random_c14():
    rng = random.Random(1401)
    out = []
    while len(out) < 100:
        S = random_stoich(rng, rng.randint(2, 5), rng.randint(2, 5), density=0.6)
        if is_weakly_generic(reduce(S).s_red):
            out.append(S)
    return out


STOICH_FIXTURES = sorted(
    p.name
    for p in FIXTURES.glob("*.csv")
    if p.name.startswith(("tail", "cf3", "param", "eight", "rev2x2", "twocycle", "neg_identity", "exC", "exG3"))
)


# --- 9 -----------------------------------------------------------------------


@crit(9)
def test_c9_reduced_product():
    for S in random_c9():
        R = reduce(S)
        assert renamed_product(R) == symbolic_product(S, flux_pattern(S))


# --- 10 ----------------------------------------------------------------------


@crit(10)
@pytest.mark.parametrize("name", STOICH_FIXTURES)
def test_c10_fixtures(name):
    S = load(name)
    assert core_determinant(S) == core_determinant_oracle(S)


@crit(10)
def test_c10_random():
    for S in random_c10():
        assert core_determinant(S) == core_determinant_oracle(S)


# --- 11 ----------------------------------------------------------------------


@crit(11)
@pytest.mark.xfail(
    strict=True,
    reason="written as a sum of 6 products, two share the monomial U22*U43*U51 and merge; "
    "the expansion has 5 distinct terms (confirmed by the t-expansion oracle)",
)
def test_c11_cf3_six_terms():
    assert sign_counts(core_determinant(load("cf3_a11_2.csv"))).t == 6


@crit(11)
def test_c11_cf3_anomalous():
    cd = core_determinant(load("cf3_a11_2.csv"))
    assert cd == core_determinant_oracle(load("cf3_a11_2.csv"))
    assert sign_counts(cd) == SignCounts(5, 1, 4, 1)
    assert sign_counts(core_determinant(load("cf3_a13_2.csv"))).m == 0


# --- 12 ----------------------------------------------------------------------

TAIL_CFD_M = {2: 1, 3: 2, 4: 5, 5: 13, 6: 34}


@crit(12)
@pytest.mark.parametrize("n", range(2, 7))
def test_c12_tail(n):
    S = load(f"tail{n}.csv")
    c = sign_counts(core_determinant(S))
    assert (c.t, c.m) == (2, 1)
    assert sign_counts(cf_determinant(S)).m == TAIL_CFD_M[n]


# --- 13 ----------------------------------------------------------------------


@crit(13)
def test_c13_eight_by_four():
    S = load("eight_by_four.csv")
    R = reduce(S)
    assert len(enumerate_perfect_matchings(build_graph(R.s_red))) == 18
    b = anomalous_bounds(S)
    assert b.lower == b.upper == 9
    assert sign_counts(core_determinant(S)).m == 9


# --- 14 ----------------------------------------------------------------------


@crit(14)
def test_c14_parametric():
    assert zero_one_algorithm(load("param_a1.csv")).verdict == "One"
    assert zero_one_algorithm(load("param_a3.csv")).verdict == "MoreThanOne"


@crit(14)
def test_c14_random_cross_check():
    for S in random_c14():
        m = sign_counts(core_determinant(S)).m
        expected = "Zero" if m == 0 else "One" if m == 1 else "MoreThanOne"
        assert zero_one_algorithm(S).verdict == expected


# --- 15 ----------------------------------------------------------------------


@crit(15)
def test_c15_cd_below_cfd():
    instances = [load(n) for n in STOICH_FIXTURES] + random_c10() + random_c14()
    for S in instances:
        assert sign_counts(core_determinant(S)).m <= sign_counts(cf_determinant(S)).m


@crit(15)
def test_c15_strict_at_tail4():
    S = load("tail4.csv")
    assert (sign_counts(core_determinant(S)).m, sign_counts(cf_determinant(S)).m) == (1, 5)


# --- 16 ----------------------------------------------------------------------


def _hairy_cycle(rng):
    k = rng.randint(2, 4)
    nr = nc = k
    cells = set()
    for i in range(k):
        cells |= {(i, i), (i, (i + 1) % k)}
    for _ in range(rng.randint(0, 3)):
        if rng.random() < 0.5:
            cells.add((nr, rng.randrange(k)))
            nr += 1
        else:
            cells.add((rng.randrange(k), nc))
            nc += 1
    M = [[0] * nc for _ in range(nr)]
    for r, c in cells:
        M[r][c] = rng.choice([-3, -2, -1, 1, 2, 3])
    return M


@crit(16)
def test_c16_short_hair():
    rng = random.Random(1601)
    done = 0
    while done < 50:
        M = _hairy_cycle(rng)
        S = with_reverse(M) if rng.random() < 0.7 else RationalMatrix(M)
        R = reduce(S)
        assert single_cycle_with_short_hair(build_graph(R.s_red))
        if genericity_check(R).status != "Generic":
            continue
        done += 1
        assert sign_counts(core_determinant(S)).m <= 1
