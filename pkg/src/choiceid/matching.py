"""Type-to-alternative matchings and the general identifiability verdict.

A matching assigns every type a distinct alternative at which it is
possible. Identifiability of the type distribution is decided from the
matchings of the possibility pattern alone:

* no full matching: structurally non-identifiable;
* some r-row subset whose matchings all share one parity: global;
* otherwise: generic only.

The parity test uses the integer identity ``|det(P_R)| == perm(P_R)``
for the 0/1 pattern ``P_R``, which holds exactly when every matching into
``R`` has the same sign.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from . import config
from .errors import EnumerationRefused, IntractableError
from .linalg import int_det
from .model import PossibilityPattern, ensure_valid
from .verdict import Klass, Verdict

__all__ = [
    "Matching",
    "SquarePatternStats",
    "permutation_parity",
    "max_matching",
    "hall_deficient_set",
    "enumerate_matchings",
    "iter_matchings",
    "permanent",
    "square_stats",
    "verdict_general",
]


def permutation_parity(seq: Sequence[int]) -> int:
    """0 for an even number of inversions, 1 for odd."""
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return inv & 1


@dataclass(frozen=True)
class Matching:
    """``assignment[l]`` is the alternative index matched to type ``l``.

    Parity is measured against the canonical orders of types and
    alternatives, i.e. the inversion count of ``assignment``.
    """

    assignment: tuple[int, ...]

    @property
    def parity(self) -> str:
        return "odd" if permutation_parity(self.assignment) else "even"

    @property
    def sign(self) -> int:
        return -1 if permutation_parity(self.assignment) else 1

    @property
    def image(self) -> tuple[int, ...]:
        return tuple(sorted(self.assignment))

    def respects(self, pattern: PossibilityPattern) -> bool:
        a = self.assignment
        return (
            len(a) == pattern.r
            and len(set(a)) == len(a)
            and all(0 <= k < pattern.n and pattern.allowed[k][l] for l, k in enumerate(a))
        )

    def describe(self, pattern: PossibilityPattern) -> str:
        return ", ".join(f"{pattern.types[l]}→{pattern.alternatives[k]}" for l, k in enumerate(self.assignment))


@dataclass(frozen=True)
class SquarePatternStats:
    rows: tuple[int, ...]
    permanent: int
    signed_count: int

    @property
    def same_parity(self) -> bool:
        return self.permanent > 0 and abs(self.signed_count) == self.permanent


# -- maximum matching ---------------------------------------------------------


def _kuhn(adj: Sequence[Sequence[int]], n_right: int) -> list[int | None]:
    """Maximum bipartite matching by augmenting paths.

    Left vertices are processed in index order and their neighbours are
    tried in list order, which makes the result deterministic.
    """
    owner: list[int | None] = [None] * n_right
    match_left: list[int | None] = [None] * len(adj)

    def augment(u: int, seen: list[bool]) -> bool:
        for k in adj[u]:
            if seen[k]:
                continue
            seen[k] = True
            if owner[k] is None or augment(owner[k], seen):
                owner[k] = u
                match_left[u] = k
                return True
        return False

    for u in range(len(adj)):
        augment(u, [False] * n_right)
    return match_left


def max_matching(pattern: PossibilityPattern) -> tuple[int, Matching | None]:
    """Size of a maximum matching, and the matching itself if it covers all types."""
    adj = [pattern.neighbors(l) for l in range(pattern.r)]
    match_left = _kuhn(adj, pattern.n)
    size = sum(k is not None for k in match_left)
    if size < pattern.r:
        return size, None
    return size, Matching(tuple(match_left))


def partial_max_matching(pattern: PossibilityPattern) -> list[int | None]:
    adj = [pattern.neighbors(l) for l in range(pattern.r)]
    return _kuhn(adj, pattern.n)


def neighborhood(pattern: PossibilityPattern, types: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted({k for l in types for k in pattern.neighbors(l)}))


def hall_deficient_set(pattern: PossibilityPattern) -> tuple[int, ...] | None:
    """A type subset S with fewer than |S| possible alternatives, if one exists.

    Found from a maximum matching: the types reachable from an unmatched
    type along alternating paths have a neighbourhood exactly one smaller
    than themselves.
    """
    match_left = partial_max_matching(pattern)
    free = [l for l, k in enumerate(match_left) if k is None]
    if not free:
        return None
    owner = {k: l for l, k in enumerate(match_left) if k is not None}
    reached_types = {free[0]}
    reached_alts: set[int] = set()
    frontier = [free[0]]
    while frontier:
        u = frontier.pop()
        for k in pattern.neighbors(u):
            if k in reached_alts:
                continue
            reached_alts.add(k)
            v = owner.get(k)
            if v is not None and v not in reached_types:
                reached_types.add(v)
                frontier.append(v)
    return tuple(sorted(reached_types))


# -- enumeration and counting ------------------------------------------------


def iter_matchings(pattern: PossibilityPattern, rows: Sequence[int] | None = None) -> Iterator[Matching]:
    """Full matchings into ``rows`` (default: all alternatives), lexicographic."""
    allowed_rows = set(range(pattern.n) if rows is None else rows)
    options = [[k for k in pattern.neighbors(l) if k in allowed_rows] for l in range(pattern.r)]
    r = pattern.r
    current: list[int] = []
    used: set[int] = set()

    def rec(l: int):
        if l == r:
            yield Matching(tuple(current))
            return
        for k in options[l]:
            if k in used:
                continue
            used.add(k)
            current.append(k)
            yield from rec(l + 1)
            current.pop()
            used.discard(k)

    yield from rec(0)


def enumerate_matchings(pattern: PossibilityPattern, rows: Sequence[int]) -> list[Matching]:
    """All full matchings from types onto the r-subset ``rows``.

    Refused above :data:`config.ENUMERATION_MAX_TYPES` types; use
    :func:`square_stats` there instead.
    """
    rows = tuple(sorted(rows))
    if len(rows) != pattern.r:
        raise ValueError(f"row subset has {len(rows)} alternatives, expected r = {pattern.r}")
    if pattern.r > config.ENUMERATION_MAX_TYPES:
        raise EnumerationRefused(
            f"enumeration refused for r = {pattern.r} > {config.ENUMERATION_MAX_TYPES}; "
            "use square_stats (permanent/determinant) instead"
        )
    return list(iter_matchings(pattern, rows))


def permanent(grid: Sequence[Sequence[int]]) -> int:
    """Permanent of a square integer matrix, Ryser's formula in Gray-code order."""
    n = len(grid)
    if n == 0:
        return 1
    if n > config.PERMANENT_MAX_TYPES:
        raise IntractableError(f"permanent intractable for r = {n} > {config.PERMANENT_MAX_TYPES}")
    cols = [[int(grid[i][j]) for i in range(n)] for j in range(n)]
    row_sums = [0] * n
    total = 0
    in_set = [False] * n
    gray_prev = 0
    for step in range(1, 1 << n):
        gray = step ^ (step >> 1)
        j = (gray ^ gray_prev).bit_length() - 1
        gray_prev = gray
        delta = 1 if not in_set[j] else -1
        in_set[j] = not in_set[j]
        col = cols[j]
        for i in range(n):
            row_sums[i] += delta * col[i]
        prod = 1
        for s in row_sums:
            if s == 0:
                prod = 0
                break
            prod *= s
        if prod:
            size = bin(gray).count("1")
            total += prod if (n - size) % 2 == 0 else -prod
    return total


def square_stats(pattern: PossibilityPattern, rows: Sequence[int]) -> SquarePatternStats:
    """Permanent and signed matching count of the 0/1 pattern restricted to ``rows``."""
    rows = tuple(sorted(rows))
    if len(rows) != pattern.r:
        raise ValueError(f"row subset has {len(rows)} alternatives, expected r = {pattern.r}")
    if pattern.r > config.PERMANENT_MAX_TYPES:
        raise IntractableError(f"permanent intractable for r = {pattern.r} > {config.PERMANENT_MAX_TYPES}")
    grid = [[int(v) for v in pattern.allowed[k]] for k in rows]
    return SquarePatternStats(rows, permanent(grid), int_det(grid))


def _parity_pair(pattern: PossibilityPattern, rows: Sequence[int]) -> tuple[Matching, Matching] | None:
    """First even and first odd matching into ``rows``, stopping as soon as both are seen."""
    seen: dict[str, Matching] = {}
    for m in iter_matchings(pattern, rows):
        seen.setdefault(m.parity, m)
        if len(seen) == 2:
            return seen["even"], seen["odd"]
    return None


def verdict_general(pattern: PossibilityPattern, verbose: bool = False) -> Verdict:
    """Global / generic-only / structural verdict for the type distribution.

    With ``verbose`` the global branch lists every qualifying row subset
    instead of stopping at the lexicographically first.
    """
    ensure_valid(pattern)
    n, r = pattern.n, pattern.r
    if r > config.PERMANENT_MAX_TYPES:
        raise IntractableError(f"permanent intractable for r = {r} > {config.PERMANENT_MAX_TYPES}")
    if n < r:
        deficient = hall_deficient_set(pattern)
        return Verdict(
            Klass.STRUCTURAL,
            "no full matching (fewer alternatives than types)",
            {"deficient_types": deficient, "neighborhood": neighborhood(pattern, deficient)},
        )
    size, matching = max_matching(pattern)
    if matching is None:
        deficient = hall_deficient_set(pattern)
        return Verdict(
            Klass.STRUCTURAL,
            "no full matching (Hall condition violated)",
            {
                "max_matching_size": size,
                "deficient_types": deficient,
                "neighborhood": neighborhood(pattern, deficient),
            },
        )

    qualifying: list[SquarePatternStats] = []
    matchable: list[SquarePatternStats] = []
    for rows in itertools.combinations(range(n), r):
        stats = square_stats(pattern, rows)
        if stats.permanent == 0:
            continue
        if stats.same_parity:
            qualifying.append(stats)
            if not verbose:
                break
        else:
            matchable.append(stats)

    if qualifying:
        best = qualifying[0]
        witness = next(iter_matchings(pattern, best.rows))
        witnesses = {
            "rows": best.rows,
            "matching": witness,
            "permanent": best.permanent,
            "signed_count": best.signed_count,
        }
        if verbose:
            witnesses["all_rows"] = tuple(s.rows for s in qualifying)
        how = "unique matching" if best.permanent == 1 else "all matchings into the row subset share parity"
        return Verdict(Klass.GLOBAL, f"sign-nonsingular row subset ({how})", witnesses)

    pairs = []
    for stats in matchable:
        pair = _parity_pair(pattern, stats.rows)
        pairs.append((stats.rows, pair))
    return Verdict(
        Klass.GENERIC,
        "full matching exists but every row subset has matchings of both parities",
        {"matching": matching, "opposite_parity_pairs": tuple(pairs)},
    )
