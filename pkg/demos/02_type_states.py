# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Types that choose deterministically given a random state
#
# Each type picks one alternative per state and the state is drawn from f.
# The determinant of a square minor is then a polynomial in f, indexed by how
# many types use each state.

# +
from fractions import Fraction

from choiceid.cli import resolve_model
from choiceid.linalg import det
from choiceid.model import TypeDistribution, aggregate_shares, assemble_matrix
from choiceid.recovery import solve_distribution
from choiceid.typestate import det_polynomial, enumerate_state_matchings, verdict_typestate_generic

ex5 = resolve_model("fixture:example5").subject
for sm in enumerate_state_matchings(ex5, (0, 1, 2)):
    print(sm.matching.assignment, sm.gamma, sm.usage, sm.parity)
# -

# No single state separates the types, yet the two state-matchings use the
# states differently and so cannot cancel.

# +
poly = det_polynomial(ex5, (0, 1, 2))
print(poly.coeffs)
f = (Fraction(1, 3), Fraction(2, 3))
print(poly.evaluate(f), det(assemble_matrix(ex5, f).values))
print(verdict_typestate_generic(ex5).klass)
# -

# Here the two state-matchings share a usage class and have opposite
# parity, so the determinant is identically zero.

# +
ex6 = resolve_model("fixture:example6").subject
print(det_polynomial(ex6, (0, 1, 2, 3)).coeffs)
print(verdict_typestate_generic(ex6).klass)
# -

# Recovery shows the direction along which π cannot be pinned down: the
# first and fourth columns sum to the second and third.

# +
M = assemble_matrix(ex6, (Fraction(1, 2), Fraction(1, 2)))
pi = TypeDistribution((Fraction(1, 4),) * 4)
sol = solve_distribution(M, aggregate_shares(M, pi))
print(sol.unique, sol.kernel.basis, sol.segments)
