"""Seeded rational-grid draws of model parameters.

All draws are exact rationals with a fixed denominator, strictly inside
the relevant simplex, so downstream rank checks stay exact.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import config
from .model import ConcreteMatrix, PossibilityPattern, TypeDistribution, TypeStateModel


def rng_for(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def grid_simplex(rng: np.random.Generator, parts: int, denominator: int | None = None) -> tuple[Fraction, ...]:
    """Uniform point of the open simplex on the grid ``{k / D}``."""
    d = denominator or config.GRID_DENOMINATOR
    if parts > d:
        raise ValueError(f"cannot place {parts} positive parts on a grid of denominator {d}")
    if parts == 1:
        return (Fraction(1),)
    cuts = np.sort(rng.choice(d - 1, size=parts - 1, replace=False) + 1)
    bounds = [0] + [int(c) for c in cuts] + [d]
    return tuple(Fraction(b - a, d) for a, b in zip(bounds, bounds[1:]))


def random_matrix(pattern: PossibilityPattern, rng: np.random.Generator, denominator: int | None = None) -> ConcreteMatrix:
    """Column-stochastic matrix, positive exactly on the allowed entries."""
    values = [[Fraction(0)] * pattern.r for _ in range(pattern.n)]
    for l in range(pattern.r):
        rows = pattern.neighbors(l)
        for k, v in zip(rows, grid_simplex(rng, len(rows), denominator)):
            values[k][l] = v
    return ConcreteMatrix(values, pattern)


def random_weights(ts: TypeStateModel, rng: np.random.Generator, denominator: int | None = None) -> tuple[Fraction, ...]:
    return grid_simplex(rng, ts.n_states, denominator)


def random_distribution(r: int, rng: np.random.Generator, denominator: int | None = None) -> TypeDistribution:
    return TypeDistribution(grid_simplex(rng, r, denominator))
