# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Reading identifiability off a possibility pattern
#
# A possibility pattern says which type may choose which alternative. Whether
# the type distribution can be recovered from aggregate shares depends only on
# the matchings of types to alternatives that the pattern allows.

# +
from choiceid.cli import resolve_model
from choiceid.matching import enumerate_matchings, square_stats, verdict_general
from choiceid.recovery import montecarlo_rank

example1 = resolve_model("fixture:example1").subject
print(example1.alternatives, example1.types)
for row, label in zip(example1.allowed, example1.alternatives):
    print(label, [int(x) for x in row])
# -

# Only one matching respects the pattern, so every matrix with this zero
# pattern is invertible.

# +
for m in enumerate_matchings(example1, (0, 1, 2)):
    print({t: example1.alternatives[k] for t, k in zip(example1.types, m.assignment)}, m.parity)
print(square_stats(example1, (0, 1, 2)))
print(verdict_general(example1).klass)
# -

# Letting t1 also choose y adds two matchings of opposite parity. The
# determinant can now cancel, but only on a measure-zero set.

# +
augmented = resolve_model("fixture:example1_augmented").subject
print([m.parity for m in enumerate_matchings(augmented, (0, 1, 2))])
print(verdict_general(augmented).klass)
print(montecarlo_rank(augmented, samples=1000, seed=42).full_rank_fraction)
# -

# When two types can only reach a single alternative, no matching exists and
# the deficient set is the witness.

# +
v = verdict_general(resolve_model("fixture:example7").subject)
print(v.klass, v.witnesses["deficient_types"], v.witnesses["neighborhood"])
