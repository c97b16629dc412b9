"""Identification from three choice occasions.

With three conditionally independent occasions the joint choice shares
form an order-3 tensor. Kruskal's uniqueness condition, read through the
possibility patterns, gives a checkable sufficient condition for
recovering the type distribution and every occasion matrix up to a
common relabelling of types.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import config
from .errors import DimensionError, ValidationError
from .linalg import rank
from .model import (
    ConcreteMatrix,
    MultiOccasionModel,
    PossibilityPattern,
    TypeDistribution,
    TypeStateModel,
    assemble_matrix,
    build_tensor,
    ensure_valid,
)
from .sampling import random_distribution, random_matrix, random_weights, rng_for
from .typestate import verdict_typestate_generic
from .verdict import Klass, Verdict

__all__ = [
    "MatchabilityIndex",
    "ProbeReport",
    "matchability_index",
    "typestate_kruskal_index",
    "kruskal_rank",
    "kruskal_rank_sampled",
    "verdict_three_occasion",
    "verdict_typestate_three_occasion",
    "verdict_multi",
    "canonical_parameters",
    "permute_types",
    "tensor_distance",
    "distinguishability_probe",
    "shifted_collision",
]


@dataclass(frozen=True)
class MatchabilityIndex:
    """Largest ``v`` such that every ``v`` types can be matched.

    ``deficient_witness`` is a smallest type subset with fewer possible
    alternatives than members, absent when ``v == r``.
    """

    v: int
    deficient_witness: tuple[int, ...] | None = None


def _pattern_of(occasion) -> PossibilityPattern:
    return occasion.induced_pattern() if isinstance(occasion, TypeStateModel) else occasion


def matchability_index(pattern: PossibilityPattern) -> MatchabilityIndex:
    """Smallest Hall-deficient subset, scanned by increasing size then lexicographically.

    A type-state model is read through its induced pattern; as a rank
    bound for such an occasion use :func:`typestate_kruskal_index`.
    """
    pattern = _pattern_of(pattern)
    ensure_valid(pattern)
    masks = pattern.column_masks()
    for size in range(1, pattern.r + 1):
        for subset in itertools.combinations(range(pattern.r), size):
            union = 0
            for l in subset:
                union |= masks[l]
            if bin(union).count("1") < size:
                return MatchabilityIndex(size - 1, subset)
    return MatchabilityIndex(pattern.r, None)


def kruskal_rank(values: Sequence[Sequence]) -> int:
    """Largest ``d`` such that every ``d`` columns are linearly independent."""
    ncols = len(values[0]) if values else 0
    cols = [[row[j] for row in values] for j in range(ncols)]
    for d in range(1, ncols + 1):
        for subset in itertools.combinations(range(ncols), d):
            if rank([cols[j] for j in subset]) < d:
                return d - 1
    return ncols


def _random_occasion_matrix(occasion, rng: np.random.Generator) -> ConcreteMatrix:
    if isinstance(occasion, TypeStateModel):
        return assemble_matrix(occasion, random_weights(occasion, rng))
    return random_matrix(occasion, rng)


def kruskal_rank_sampled(occasion: PossibilityPattern | TypeStateModel, seed=0, samples: int | None = None) -> int:
    """Minimum Kruskal column rank over random instantiations of an occasion.

    An empirical lower bound on the generic Kruskal rank.
    """
    ensure_valid(occasion)
    rng = rng_for(seed)
    samples = samples or config.KRUSKAL_SAMPLES
    return min(kruskal_rank(_random_occasion_matrix(occasion, rng).values) for _ in range(samples))


def typestate_kruskal_index(ts: TypeStateModel, seed: int = 0) -> tuple[MatchabilityIndex, bool]:
    """Generic Kruskal column rank of a type-state occasion, exactly.

    The columns of a type subset are generically independent iff the
    sub-model on those types is generically identifiable. Finitely many
    such conditions, each failing only on a proper subvariety of the
    weight simplex, hold together generically, so the largest ``d`` with
    every ``d``-subset passing is the generic Kruskal rank.

    Type-state matrices are special points of their induced pattern, so
    the pattern's matchability index can overstate this rank. Returns the
    index and whether any sub-verdict was probabilistic.
    """
    ensure_valid(ts)
    probabilistic = False
    for size in range(2, ts.r + 1):
        for subset in itertools.combinations(range(ts.r), size):
            sub = TypeStateModel(
                ts.alternatives, [ts.types[l] for l in subset], ts.states, [ts.choice[l] for l in subset]
            )
            v = verdict_typestate_generic(sub, seed=seed)
            probabilistic |= v.probabilistic
            if not v.identifiable:
                return MatchabilityIndex(size - 1, subset), probabilistic
    return MatchabilityIndex(ts.r, None), probabilistic


def _occasion_index(occasion, seed: int) -> tuple[MatchabilityIndex, bool]:
    if isinstance(occasion, TypeStateModel):
        return typestate_kruskal_index(occasion, seed)
    return matchability_index(occasion), False


def _require_three(model: MultiOccasionModel) -> None:
    ensure_valid(model)
    if model.J != 3:
        raise ValidationError(f"three occasions required, got {model.J}")


def verdict_three_occasion(model: MultiOccasionModel, seed: int = 0) -> Verdict:
    """Sufficient condition ``v1 + v2 + v3 >= 2r + 2`` on generic Kruskal rank bounds.

    ``v_j`` is the matchability index for a pattern occasion and the exact
    generic Kruskal rank for a type-state occasion. Failure of the
    condition is reported as inconclusive, never as non-identifiable.
    """
    _require_three(model)
    results = [_occasion_index(occ, seed) for occ in model.occasions]
    indices = [ix for ix, _ in results]
    probabilistic = any(p for _, p in results)
    v = tuple(ix.v for ix in indices)
    bound = 2 * model.r + 2
    witnesses = {
        "v": v,
        "bound": bound,
        "deficient": tuple(ix.deficient_witness for ix in indices),
    }
    if sum(v) >= bound:
        return Verdict(
            Klass.GENERIC,
            f"Kruskal rank bounds sum to {sum(v)} >= 2r + 2 = {bound} (up to label swapping)",
            witnesses,
            probabilistic=probabilistic,
        )
    return Verdict(
        Klass.INCONCLUSIVE,
        f"Kruskal rank bounds sum to {sum(v)} < 2r + 2 = {bound}; the condition is only sufficient",
        witnesses,
        probabilistic=probabilistic,
    )


def verdict_typestate_three_occasion(model: MultiOccasionModel, seed: int = 0) -> Verdict:
    """Identifiable when every type-state occasion is generically identifiable on its own."""
    _require_three(model)
    for j, occ in enumerate(model.occasions):
        if not isinstance(occ, TypeStateModel):
            raise ValidationError(f"occasion {j + 1} is not a type-state model")
    if model.r == 1:
        return Verdict(Klass.GENERIC, "single type", {"occasions": ()})
    per = [verdict_typestate_generic(occ, seed=seed) for occ in model.occasions]
    failing = tuple(j for j, v in enumerate(per) if not v.identifiable)
    witnesses = {"occasions": tuple(v.klass.value for v in per), "failing": failing}
    probabilistic = any(v.probabilistic for v in per)
    if not failing:
        return Verdict(
            Klass.GENERIC,
            "each occasion has full generic column rank, so Kruskal ranks sum to 3r >= 2r + 2 (up to label swapping)",
            witnesses,
            probabilistic=probabilistic,
        )
    return Verdict(
        Klass.INCONCLUSIVE,
        "some occasion is not generically identifiable on its own; the condition is only sufficient",
        witnesses,
        probabilistic=probabilistic,
    )


def verdict_multi(model: MultiOccasionModel, seed: int = 0) -> Verdict:
    """Dispatch: type-state occasions use the per-occasion test, otherwise the rank-bound sum.

    Type-state models failing the per-occasion test fall back to the
    rank-bound sum, which can still certify when some occasions are only
    partly informative.
    """
    if all(isinstance(o, TypeStateModel) for o in model.occasions):
        v = verdict_typestate_three_occasion(model, seed=seed)
        if v.identifiable:
            return v
        fallback = verdict_three_occasion(model, seed=seed)
        return fallback if fallback.identifiable else v
    return verdict_three_occasion(model, seed=seed)


# -- distinguishability --------------------------------------------------------


Parameters = tuple[TypeDistribution, tuple[ConcreteMatrix, ConcreteMatrix, ConcreteMatrix]]


def canonical_parameters(pi: TypeDistribution, matrices: Sequence[ConcreteMatrix]) -> tuple:
    """Parameters modulo a common column permutation, as sorted per-type tuples."""
    per_type = [
        (pi.probs[h],) + tuple(v for m in matrices for v in m.column(h)) for h in range(len(pi))
    ]
    return tuple(sorted(per_type))


def permute_types(pi: TypeDistribution, matrices: Sequence[ConcreteMatrix], perm: Sequence[int]) -> Parameters:
    """Relabel types: new type ``h`` is old type ``perm[h]``."""
    new_pi = TypeDistribution(tuple(pi.probs[p] for p in perm))
    new_ms = []
    for m in matrices:
        values = [[row[p] for p in perm] for row in m.values]
        pattern = PossibilityPattern(
            m.pattern.alternatives,
            tuple(m.pattern.types[p] for p in perm),
            [[m.pattern.allowed[k][p] for p in perm] for k in range(m.n)],
        )
        new_ms.append(ConcreteMatrix(values, pattern))
    return new_pi, tuple(new_ms)


def tensor_distance(a, b) -> Fraction:
    """Largest entrywise absolute difference of two tensors of equal shape."""
    if a.dims != b.dims:
        raise DimensionError(f"tensor shapes differ: {a.dims} vs {b.dims}")
    return max(abs(x - y) for x, y in zip(a.flat(), b.flat()))


def _draw(model: MultiOccasionModel, rng: np.random.Generator) -> Parameters:
    matrices = tuple(_random_occasion_matrix(occ, rng) for occ in model.occasions)
    return random_distribution(model.r, rng), matrices


@dataclass(frozen=True)
class ProbeReport:
    trials: int
    compared: int
    collisions: int
    min_distance: Fraction | None
    verdict: Klass

    @property
    def contradiction(self) -> bool:
        """An identifiable verdict alongside an exact collision of inequivalent parameters."""
        return self.verdict.identifiable and self.collisions > 0


def distinguishability_probe(model: MultiOccasionModel, seed: int = 0, trials: int = 100) -> ProbeReport:
    """Compare tensors of independently drawn, label-inequivalent parameter points.

    Each trial uses its own child seed, so results do not depend on the
    order in which trials run.
    """
    _require_three(model)
    verdict = verdict_multi(model, seed=seed)
    children = np.random.SeedSequence(seed).spawn(trials)
    compared = collisions = 0
    best: Fraction | None = None
    for child in children:
        rng = np.random.default_rng(child)
        pi, ms = _draw(model, rng)
        pi2, ms2 = _draw(model, rng)
        if canonical_parameters(pi, ms) == canonical_parameters(pi2, ms2):
            continue
        compared += 1
        d = tensor_distance(build_tensor(ms, pi), build_tensor(ms2, pi2))
        if d == 0:
            collisions += 1
        best = d if best is None else min(best, d)
    return ProbeReport(trials, compared, collisions, best, verdict.klass)


@dataclass(frozen=True)
class Collision:
    pi: TypeDistribution
    shifted: TypeDistribution
    distance: Fraction

    @property
    def exact(self) -> bool:
        return self.distance == 0


def shifted_collision(
    matrices: Sequence[ConcreteMatrix], pi: TypeDistribution, direction: Sequence, step
) -> Collision:
    """Tensors at ``pi`` and ``pi + step * direction`` with the same occasion matrices.

    The shifted point must stay in the simplex. A zero distance exhibits
    two distinct type distributions that no amount of three-occasion data
    can tell apart.
    """
    step = Fraction(step)
    direction = [Fraction(d) for d in direction]
    if len(direction) != len(pi):
        raise DimensionError(f"direction has {len(direction)} entries, expected {len(pi)}")
    if step == 0 or not any(direction):
        raise ValueError("the shift must be nonzero")
    shifted = TypeDistribution(tuple(p + step * d for p, d in zip(pi.probs, direction)))
    ensure_valid(shifted)
    distance = tensor_distance(build_tensor(matrices, pi), build_tensor(matrices, shifted))
    return Collision(pi, shifted, distance)
