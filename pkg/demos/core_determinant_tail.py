"""
Core determinant versus the Craciun-Feinberg determinant
========================================================

A chain of reversible reactions with a tail. The core determinant
(the Jacobian compressed to the stoichiometric subspace) keeps a single
anomalous sign however long the tail gets, while det(SU - I) picks up
more and more.
"""

from pathlib import Path

from signdet import parse_matrix
from signdet.coredet import (
    anomalous_bounds,
    cf_determinant,
    core_determinant,
    reduce,
    zero_one_algorithm,
)
from signdet.symexpand import sign_counts

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load(name):
    return parse_matrix((FIXTURES / name).read_text())


print(f"{'n':>2} {'cd t':>5} {'cd m':>5} {'cfd t':>6} {'cfd m':>6}")
for n in range(2, 7):
    S = load(f"tail{n}.csv")
    cd = sign_counts(core_determinant(S))
    cfd = sign_counts(cf_determinant(S))
    print(f"{n:>2} {cd.t:>5} {cd.m:>5} {cfd.t:>6} {cfd.m:>6}")

###############################################################################
# The reduced system drops one column of each reversible pair.

R = reduce(load("tail3.csv"))
print([[str(x) for x in row] for row in R.s_red.to_lists()])
print("cd =", core_determinant(load("tail3.csv")))

###############################################################################
# Without expanding anything: bounds and the zero/one test.

for name in ["tail4.csv", "param_a1.csv", "param_a3.csv", "eight_by_four.csv"]:
    S = load(name)
    b = anomalous_bounds(S)
    z = zero_one_algorithm(S)
    print(f"{name:18} bounds {b.lower}..{b.upper}  verdict {z.verdict} ({z.case})")
