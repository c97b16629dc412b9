"""Nullspace and typical-split characterisations for two-state models.

Generic identifiability of a two-state model is tested by asking, for
an ordered pair of states ``(a, b)``, whether every pair of types pooled
in ``a`` is separated in ``b`` by a split that cannot be reproduced from
the columns of the remaining types. The split test is a rank condition
on the mixed matrix, so it is evaluated at random rational weights and
accepted once all samples agree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import config
from .errors import DimensionError, IntractableError, ValidationError
from .linalg import RationalSubspace, in_span, transpose
from .model import ConcreteMatrix, TypeStateModel, assemble_matrix, ensure_valid
from .verdict import Klass, Verdict

__all__ = [
    "RationalSubspace",
    "SplitVector",
    "nullspace",
    "nullspace_intersection",
    "state_nullspaces",
    "shared_null_vector",
    "typical_split_test",
    "some_state_separates",
    "pairs_separated_and_all_chosen",
    "verdict_nullspace",
]


@dataclass(frozen=True)
class SplitVector:
    """``e^x - e^y`` in the alternative space of dimension ``n``."""

    x: int
    y: int
    n: int

    def __post_init__(self):
        if self.x == self.y:
            raise ValueError("a split needs two distinct alternatives")
        if not (0 <= self.x < self.n and 0 <= self.y < self.n):
            raise ValueError("split alternative out of range")

    @property
    def vector(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(i == self.x) - int(i == self.y)) for i in range(self.n))


def _grid(M) -> list[list]:
    if isinstance(M, ConcreteMatrix):
        return [list(r) for r in M.values]
    return [list(r) for r in M]


def nullspace(M) -> RationalSubspace:
    """Exact right kernel of a concrete matrix or any rational grid."""
    g = _grid(M)
    ncols = len(g[0]) if g else 0
    return RationalSubspace.kernel_of(g, ncols)


def nullspace_intersection(A: RationalSubspace, B: RationalSubspace) -> RationalSubspace:
    if A.ambient != B.ambient:
        raise DimensionError(f"ambient dimensions differ: {A.ambient} vs {B.ambient}")
    return A.intersection(B)


def state_nullspaces(ts: TypeStateModel, transposed: bool = False) -> list[RationalSubspace]:
    """Kernel of each one-hot state matrix (or of its transpose)."""
    out = []
    for i in range(ts.n_states):
        m = ts.state_matrix(i)
        out.append(nullspace(transpose(m)) if transposed else nullspace(m))
    return out


def _intersect_all(spaces: Sequence[RationalSubspace]) -> RationalSubspace:
    acc = spaces[0]
    for s in spaces[1:]:
        acc = acc.intersection(s)
    return acc


def shared_nullspace(ts: TypeStateModel, transposed: bool = False) -> RationalSubspace:
    return _intersect_all(state_nullspaces(ts, transposed))


def shared_null_vector(ts: TypeStateModel) -> tuple[Fraction, ...] | None:
    """A nonzero vector killed by every state matrix, if any.

    Such a vector is in the kernel of the mixed matrix for every weight
    vector, which rules identifiability out.
    """
    shared = shared_nullspace(ts)
    return shared.basis[0] if shared.basis else None


def typical_split_test(M, split: SplitVector, S: Sequence[int]) -> bool:
    """True iff ``e^x - e^y`` lies in the span of the columns of ``M`` indexed by ``S``."""
    S = list(S)
    if not S:
        raise ValueError("typicality needs a nonempty set of types")
    g = _grid(M)
    if split.n != len(g):
        raise DimensionError(f"split lives in dimension {split.n}, matrix has {len(g)} rows")
    cols = [[row[j] for row in g] for j in S]
    return in_span(cols, split.vector)


def some_state_separates(ts: TypeStateModel) -> bool:
    return any(len({ts.choice[l][i] for l in range(ts.r)}) == ts.r for i in range(ts.n_states))


def pairs_separated_and_all_chosen(ts: TypeStateModel) -> bool:
    """Every type pair is split by some state and every alternative is chosen somewhere."""
    pairs_ok = all(
        any(ts.choice[t][i] != ts.choice[u][i] for i in range(ts.n_states))
        for t, u in itertools.combinations(range(ts.r), 2)
    )
    chosen = {k for row in ts.choice for k in row}
    return pairs_ok and chosen == set(range(ts.n))


# -- the two-state verdict ------------------------------------------------------


def _pair_failures(
    sa: list[list[int]], sb: list[list[int]], mixed: list[list[Fraction]], r: int
) -> list[tuple[int, int, str]]:
    """Type pairs violating the split condition for the ordered states (a, b).

    ``sa``/``sb`` are the (row-restricted) one-hot state matrices and
    ``mixed`` the mixed matrix on the same rows.
    """
    cols_a = [tuple(row[l] for row in sa) for l in range(r)]
    cols_b = [tuple(row[l] for row in sb) for l in range(r)]
    cols_m = [[row[l] for row in mixed] for l in range(r)]
    failures = []
    for t, u in itertools.combinations(range(r), 2):
        if cols_a[t] != cols_a[u]:
            continue
        if cols_b[t] == cols_b[u]:
            failures.append((t, u, "pooled"))
            continue
        split = [Fraction(p - q) for p, q in zip(cols_b[t], cols_b[u])]
        rest = [cols_m[s] for s in range(r) if s not in (t, u)]
        if in_span(rest, split):
            failures.append((t, u, "typical"))
    return failures


def _sample_weights(rng: np.random.Generator) -> tuple[Fraction, Fraction]:
    d = config.GRID_DENOMINATOR
    k = int(rng.integers(1, d))
    return Fraction(k, d), Fraction(d - k, d)


def _evaluate(ts: TypeStateModel, rows: tuple[int, ...], weights) -> dict[tuple[int, int], list]:
    mats = [ts.state_matrix(i) for i in range(2)]
    mixed = assemble_matrix(ts, weights).values
    sub = [[mats[i][k] for k in rows] for i in range(2)]
    mixed_r = [list(mixed[k]) for k in rows]
    return {
        (a, b): _pair_failures(sub[a], sub[b], mixed_r, ts.r) for a, b in ((0, 1), (1, 0))
    }


def verdict_nullspace(ts: TypeStateModel, seed: int = 0) -> Verdict:
    """Two-state generic verdict from the pooled-pair / typical-split condition.

    Identifiable iff, for some ordered state pair (a, b) and some r-row
    subset, every type pair pooled by ``a`` is separated by ``b`` and its
    ``b``-split is not typical of the other types. Typicality is evaluated
    at random grid weights; samples must agree, with escalation on
    disagreement.
    """
    ensure_valid(ts)
    if ts.n_states != 2:
        raise ValidationError(f"the nullspace verdict needs exactly two states, got {ts.n_states}")
    if ts.n < ts.r:
        return Verdict(Klass.STRUCTURAL, "fewer alternatives than types")

    rng = np.random.default_rng(seed)
    budget = config.NULLSPACE_SAMPLES
    outcomes: list[dict] = []
    while True:
        while len(outcomes) < budget:
            w = _sample_weights(rng)
            per_rows = {rows: _evaluate(ts, rows, w) for rows in itertools.combinations(range(ts.n), ts.r)}
            outcomes.append(per_rows)
        decisions = {
            _decide(o) for o in outcomes
        }
        if len(decisions) == 1:
            break
        if budget >= config.NULLSPACE_MAX_SAMPLES:
            raise IntractableError(
                f"typical-split outcomes still disagree after {budget} random weight samples"
            )
        budget = min(budget * config.NULLSPACE_ESCALATION, config.NULLSPACE_MAX_SAMPLES)

    first = outcomes[0]
    passing = [
        (rows, ab) for rows, per_ab in first.items() for ab, fails in per_ab.items() if not fails
    ]
    if passing:
        rows, (a, b) = passing[0]
        return Verdict(
            Klass.GENERIC,
            "pooled pairs separated by non-typical splits (global not assessed)",
            {"rows": rows, "states": (a, b)},
            notes=(f"{len(outcomes)} weight samples agreed",),
        )
    failures = {
        (rows, ab): fails[0] for rows, per_ab in first.items() for ab, fails in per_ab.items()
    }
    return Verdict(
        Klass.STRUCTURAL,
        "every ordered state pair has a pooled pair that is not separated by a non-typical split",
        {"failures": tuple((rows, ab, f) for (rows, ab), f in failures.items())},
        notes=(f"{len(outcomes)} weight samples agreed",),
    )


def _decide(per_rows: dict) -> bool:
    return any(not fails for per_ab in per_rows.values() for fails in per_ab.values())
