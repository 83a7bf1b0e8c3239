"""
Counting signs in a determinant expansion
=========================================

Two 3x3 sign patterns that differ in a single entry. One is
sign-nonsingular, the other has an anomalous term.
"""

from signdet import SignPattern, count_signs_graph, det_expansion, sign_counts
from signdet.bigraph import build_graph, enumerate_cycles, to_dot
from signdet.detsign import classify, is_ssd, j_sign_bound

B = SignPattern.from_signs([[0, 1, -1], [-1, -1, 1], [0, 0, -1]])
C = SignPattern.from_signs([[0, 1, -1], [-1, -1, 1], [-1, 0, -1]])

# the graph count never expands the determinant
for name, P in [("B", B), ("C", C)]:
    c = classify(P)
    print(name, c.kind, c.counts.to_dict())

# the expansion itself, for comparison
print("det(C) =", det_expansion(C))
assert count_signs_graph(C) == sign_counts(det_expansion(C))

###############################################################################
# Cycles of the signed bipartite graph. An e-cycle (even number of c-pairs)
# is what lets two terms disagree in sign.

G = build_graph(C)
for cyc in enumerate_cycles(G):
    print(cyc.label(), "e-cycle" if cyc.is_e_cycle else "o-cycle")

ok, witness = is_ssd(C)
print("SSD:", ok, "witness:", witness.label() if witness else None)
print("worst square submatrix:", j_sign_bound(C).J, "anomalous sign(s)")

###############################################################################
# DOT output; render with ``dot -Tpng``. Columns are boxes, rows circles,
# negative edges solid and positive edges dashed.

print(to_dot(G))
