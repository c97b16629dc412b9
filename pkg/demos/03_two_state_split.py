# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # The two-state split condition, and where it falls short
#
# With two states, nullspace arguments give a quick condition: types pooled
# by one state must be separated by the other, in a way no typical split
# can imitate. This demo shows the condition working and then failing.

# +
from fractions import Fraction

from choiceid.cli import resolve_model
from choiceid.linalg import matvec
from choiceid.model import TypeStateModel, assemble_matrix
from choiceid.nullspace import SplitVector, shared_nullspace, typical_split_test, verdict_nullspace
from choiceid.typestate import verdict_typestate_generic

half = (Fraction(1, 2), Fraction(1, 2))
ts = resolve_model("fixture:typical_split").subject
M = assemble_matrix(ts, half)
split = SplitVector(ts.alternatives.index("x"), ts.alternatives.index("y"), ts.n)
print(typical_split_test(M, split, [2, 3]), typical_split_test(M, split, [0, 1]))
print(verdict_nullspace(ts).klass, verdict_typestate_generic(ts).klass)
# -

# A model with an unchosen alternative has a zero row. The split condition
# looks only at column null vectors of pooled pairs, so it misses this.

# +
zero_row = resolve_model("fixture:three_by_three_zero_row").subject
print(shared_nullspace(zero_row, transposed=True).basis)
print(verdict_nullspace(zero_row).klass, verdict_typestate_generic(zero_row).klass)
# -

# Every alternative is chosen below, but t2's column is f(a) t1 + f(b) t3
# for every f. The split condition still says generic.

# +
four = TypeStateModel(("x", "y", "z", "w"), ("t1", "t2", "t3", "t4"), ("a", "b"), [[0, 0], [0, 1], [1, 1], [3, 2]])
f = (Fraction(2, 7), Fraction(5, 7))
print(matvec(assemble_matrix(four, f).values, [f[0], -1, f[1], 0]))
print(verdict_nullspace(four).klass, verdict_typestate_generic(four).klass)
