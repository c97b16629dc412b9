"""Numerical counterparts of the algebraic verdicts.

Solving ``p = M pi`` and the state-weight system are exact. The
Monte Carlo rank check draws parameters on a rational grid and computes
exact ranks; floating point enters only in the reported singular-value
summary.
"""

from __future__ import annotations

import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import config
from .errors import DimensionError, InconsistentSystemError, ValidationError
from .linalg import RationalSubspace, matvec, rank, solve
from .model import (
    ConcreteMatrix,
    ObservedShares,
    PossibilityPattern,
    TypeDistribution,
    TypeStateModel,
    aggregate_shares,
    assemble_matrix,
    ensure_valid,
)
from .sampling import random_distribution, random_matrix, random_weights, rng_for

__all__ = [
    "SolutionSet",
    "MonteCarloReport",
    "RandomInstance",
    "solve_distribution",
    "solve_state_weights",
    "montecarlo_rank",
    "random_instance",
]


@dataclass(frozen=True)
class SolutionSet:
    """Affine solution set ``particular + span(kernel)``.

    ``segments[i]`` is the closed interval of multiples of the i-th kernel
    basis vector that keep ``particular`` nonnegative, or ``None`` if no
    multiple does. An endpoint of ``None`` inside the pair means unbounded.
    """

    particular: tuple[Fraction, ...]
    kernel: RationalSubspace
    unique: bool
    in_simplex: bool
    segments: tuple[tuple[Fraction | None, Fraction | None] | None, ...] = ()


def _segment(p: Sequence[Fraction], d: Sequence[Fraction]):
    lo: Fraction | None = None
    hi: Fraction | None = None
    for pi, di in zip(p, d):
        if di > 0:
            bound = -pi / di
            lo = bound if lo is None else max(lo, bound)
        elif di < 0:
            bound = -pi / di
            hi = bound if hi is None else min(hi, bound)
        elif pi < 0:
            return None
    if lo is not None and hi is not None and lo > hi:
        return None
    return (lo, hi)


def _solution_set(particular, kernel_vectors, ambient: int) -> SolutionSet:
    kernel = RationalSubspace(ambient, kernel_vectors)
    in_simplex = all(v >= 0 for v in particular) and sum(particular, Fraction(0)) == 1
    segments = tuple(_segment(particular, d) for d in kernel.basis)
    return SolutionSet(tuple(particular), kernel, kernel.dim == 0, in_simplex, segments)


def solve_distribution(M: ConcreteMatrix, p: ObservedShares) -> SolutionSet:
    """All type distributions reproducing the shares ``p`` exactly.

    Simplex feasibility is reported, not imposed. Raises
    :class:`InconsistentSystemError` when ``p`` is outside the column span.
    """
    if len(p) != M.n:
        raise DimensionError(f"{len(p)} shares for a matrix with {M.n} rows")
    sol = solve(M.values, p.probs, M.r)
    if sol is None:
        raise InconsistentSystemError("shares inconsistent with model")
    particular, kernel = sol
    result = _solution_set(particular, kernel, M.r)
    assert matvec(M.values, result.particular) == tuple(p.probs)
    return result


def solve_state_weights(ts: TypeStateModel, M: ConcreteMatrix) -> SolutionSet:
    """State measures ``f`` with ``sum_a f(a) M^a = M`` and ``sum f = 1``."""
    ensure_valid(ts)
    if (M.n, M.r) != (ts.n, ts.r):
        raise DimensionError(f"matrix is {M.n}x{M.r}, model is {ts.n}x{ts.r}")
    mats = [ts.state_matrix(i) for i in range(ts.n_states)]
    rows, rhs = [], []
    for k in range(ts.n):
        for l in range(ts.r):
            rows.append([Fraction(mats[i][k][l]) for i in range(ts.n_states)])
            rhs.append(M.values[k][l])
    rows.append([Fraction(1)] * ts.n_states)
    rhs.append(Fraction(1))
    sol = solve(rows, rhs, ts.n_states)
    if sol is None:
        raise InconsistentSystemError("matrix is not a mixture of the model's state matrices")
    particular, kernel = sol
    return _solution_set(particular, kernel, ts.n_states)


@dataclass(frozen=True)
class RandomInstance:
    matrix: ConcreteMatrix
    weights: tuple[Fraction, ...] | None
    pi: TypeDistribution
    shares: ObservedShares


def random_instance(subject: PossibilityPattern | TypeStateModel, seed, denominator: int | None = None) -> RandomInstance:
    """Grid-sampled parameters, an interior type distribution and the implied shares."""
    ensure_valid(subject)
    rng = rng_for(seed)
    if isinstance(subject, TypeStateModel):
        weights = random_weights(subject, rng, denominator)
        matrix = assemble_matrix(subject, weights)
    else:
        weights = None
        matrix = random_matrix(subject, rng, denominator)
    pi = random_distribution(subject.r, rng, denominator)
    return RandomInstance(matrix, weights, pi, aggregate_shares(matrix, pi))


@dataclass(frozen=True)
class MonteCarloReport:
    samples: int
    seed: int
    full_rank: int
    min_singular_value: dict

    @property
    def full_rank_fraction(self) -> float:
        return self.full_rank / self.samples


def _sample_stats(values: tuple) -> tuple[bool, float]:
    r = len(values[0]) if values else 0
    exact_full = rank(values) == r
    arr = np.array([[float(v) for v in row] for row in values])
    smin = float(np.linalg.svd(arr, compute_uv=False)[-1]) if r else 0.0
    return exact_full, smin


def montecarlo_rank(subject: PossibilityPattern | TypeStateModel, samples: int = 1000, seed: int = 0) -> MonteCarloReport:
    """Fraction of grid-sampled parameter draws whose matrix has full column rank."""
    if samples < 1:
        raise ValidationError("samples must be at least 1")
    ensure_valid(subject)
    rng = np.random.default_rng(seed)
    draws = []
    for _ in range(samples):
        if isinstance(subject, TypeStateModel):
            draws.append(assemble_matrix(subject, random_weights(subject, rng)).values)
        else:
            draws.append(random_matrix(subject, rng).values)
    workers = config.worker_count()
    if workers > 1 and samples >= 4 * workers:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sample_stats, draws, chunksize=max(1, samples // (4 * workers))))
    else:
        results = [_sample_stats(d) for d in draws]
    full = sum(ok for ok, _ in results)
    smins = [s for _, s in results]
    summary = {
        "min": round(min(smins), 12),
        "median": round(statistics.median(smins), 12),
        "max": round(max(smins), 12),
    }
    return MonteCarloReport(samples, seed, full, summary)
