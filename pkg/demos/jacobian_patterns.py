"""
When does S U have a sign pattern?
==================================

For a reaction-form system the Jacobian is S U, with U the flux pattern:
flux j depends on species i exactly when S[i, j] < 0. Whether every entry
of S U has a fixed sign is decided by a 2x2 scan of S.
"""

from signdet import RationalMatrix
from signdet.jacobian import flux_pattern, jacobian_report
from signdet.symexpand import symbolic_product

# one reversible reaction: both entries of S U are negative
rev = RationalMatrix([[-1, 1], [-2, 2]])
print(jacobian_report(rev))

# a two-species cycle with a catalytic step
S = RationalMatrix([[1, -1, 0], [-1, -1, 1], [0, 1, -1]])
rep = jacobian_report(S)
print(rep["jacobian_has_sign_pattern"], rep["witness"])

# the offending entry, written out
SU = symbolic_product(S, flux_pattern(S))
for i, row in enumerate(SU):
    for j, p in enumerate(row):
        print(f"(SU)[{i + 1},{j + 1}] = {p}")
