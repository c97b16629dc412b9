# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Three choice occasions
#
# Observing the same individuals on three occasions gives a three-way
# tensor. Kruskal's bound identifies it when the column ranks of the
# occasion matrices sum to at least 2r + 2.

# +
from fractions import Fraction

from choiceid.cli import resolve_model
from choiceid.model import MultiOccasionModel, TypeDistribution, assemble_matrix
from choiceid.tensor import distinguishability_probe, shifted_collision, typestate_kruskal_index, verdict_three_occasion

model = resolve_model("fixture:incomplete_preferences_three").subject
v = verdict_three_occasion(model)
print(v.klass, v.witnesses["v"], v.witnesses["bound"])
rep = distinguishability_probe(model, seed=0, trials=20)
print(rep.compared, rep.collisions, rep.min_distance)
# -

# A type-state occasion can have a perfectly matchable pattern yet a low
# Kruskal rank, because columns combine for every f.

# +
e6 = resolve_model("fixture:example6").subject
print(typestate_kruskal_index(e6))
print(verdict_three_occasion(MultiOccasionModel(e6.types, [e6, e6, e6])).klass)
# -

# Pairing it with two uninformative occasions gives an exact collision:
# two different type distributions, one tensor.

# +
pair = resolve_model("fixture:example6_collision").subject
ms = [assemble_matrix(pair.occasions[0], (Fraction(1, 2), Fraction(1, 2)))]
ms += [assemble_matrix(o, (Fraction(1),)) for o in pair.occasions[1:]]
c = shifted_collision(ms, TypeDistribution((Fraction(1, 4),) * 4), (1, -1, -1, 1), Fraction(1, 10))
print(c.pi.probs, c.shifted.probs, c.distance)
