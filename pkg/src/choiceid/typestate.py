"""Identifiability in the type-state framework.

Types choose deterministically given a random state ``a ~ f``, so that
``M = sum_a f(a) M^a`` with one-hot state matrices ``M^a``. The
determinant of any r-row minor ``M_R`` is then a polynomial in the state
weights whose monomials are indexed by state-usage vectors::

    det(M_R) = sum over state-matchings (m, gamma) onto R of
               sign(m) * prod_t f(gamma(t))

Grouping the state-matchings by usage vector gives an integer
coefficient per monomial (:class:`DetPolynomial`). The type
distribution is generically identifiable iff some minor has a nonzero
coefficient, and globally identifiable on the open simplex iff some
minor's state-matchings all share one parity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import config
from .errors import EnumerationRefused, IntractableError, ValidationError
from .linalg import rank, rref, transpose
from .matching import Matching, iter_matchings, permutation_parity, square_stats
from .model import PossibilityPattern, TypeStateModel, assemble_matrix, ensure_valid
from .verdict import Klass, Verdict

__all__ = [
    "StateMatching",
    "DetPolynomial",
    "separating_states",
    "enumerate_state_matchings",
    "det_polynomial",
    "verdict_typestate_generic",
    "verdict_typestate_global",
    "reassignment_check",
    "reassignment_relation",
]


@dataclass(frozen=True)
class StateMatching:
    matching: Matching
    gamma: tuple[int, ...]
    usage: tuple[int, ...]

    @property
    def sign(self) -> int:
        # the sign depends on the matching only; gamma picks the monomial
        return self.matching.sign

    @property
    def parity(self) -> str:
        return self.matching.parity


@dataclass(frozen=True)
class DetPolynomial:
    """Determinant of ``M_R`` as a map from usage vector to net coefficient.

    Usage classes whose state-matchings cancel are kept with coefficient 0.
    """

    rows: tuple[int, ...]
    coeffs: dict[tuple[int, ...], int] = field(hash=False)

    def nonzero(self) -> dict[tuple[int, ...], int]:
        return {g: c for g, c in self.coeffs.items() if c != 0}

    def is_zero(self) -> bool:
        return not self.nonzero()

    def evaluate(self, weights: Sequence) -> Fraction:
        w = [Fraction(v) for v in weights]
        total = Fraction(0)
        for usage, c in self.coeffs.items():
            if c:
                term = Fraction(c)
                for wi, e in zip(w, usage):
                    if e:
                        term *= wi**e
                total += term
        return total


def _state_index(ts: TypeStateModel, state) -> int:
    if isinstance(state, int):
        if not 0 <= state < ts.n_states:
            raise ValidationError(f"state index {state} out of range")
        return state
    if state not in ts.states:
        raise ValidationError(f"unknown state {state!r}")
    return ts.states.index(state)


def separating_states(ts: TypeStateModel) -> list[str]:
    """States in which distinct types always choose distinct alternatives."""
    ensure_valid(ts)
    out = []
    for i, s in enumerate(ts.states):
        chosen = [ts.choice[l][i] for l in range(ts.r)]
        if len(set(chosen)) == ts.r:
            out.append(s)
    return out


def _check_rows(ts: TypeStateModel, rows: Sequence[int]) -> tuple[int, ...]:
    rows = tuple(sorted(rows))
    if len(rows) != ts.r or len(set(rows)) != ts.r:
        raise ValueError(f"row subset must contain r = {ts.r} distinct alternatives")
    return rows


def _check_cap(ts: TypeStateModel) -> None:
    combos = ts.n_states**ts.r
    if combos > config.STATE_CHOICE_CAP:
        raise EnumerationRefused(
            f"|A|^r = {combos} state-choice combinations exceed the cap {config.STATE_CHOICE_CAP}"
        )


def _iter_state_matchings(ts: TypeStateModel, rows: tuple[int, ...]) -> Iterator[StateMatching]:
    row_set = set(rows)
    options = [
        [(ts.choice[l][i], i) for i in range(ts.n_states) if ts.choice[l][i] in row_set] for l in range(ts.r)
    ]
    alts: list[int] = []
    gamma: list[int] = []
    used: set[int] = set()

    def rec(l: int):
        if l == ts.r:
            usage = [0] * ts.n_states
            for i in gamma:
                usage[i] += 1
            yield StateMatching(Matching(tuple(alts)), tuple(gamma), tuple(usage))
            return
        for k, i in options[l]:
            if k in used:
                continue
            used.add(k)
            alts.append(k)
            gamma.append(i)
            yield from rec(l + 1)
            alts.pop()
            gamma.pop()
            used.discard(k)

    yield from rec(0)


def enumerate_state_matchings(ts: TypeStateModel, rows: Sequence[int]) -> list[StateMatching]:
    """All state-matchings whose matching has image ``rows``, ordered by (m, gamma)."""
    ensure_valid(ts)
    rows = _check_rows(ts, rows)
    _check_cap(ts)
    found = list(_iter_state_matchings(ts, rows))
    found.sort(key=lambda sm: (sm.matching.assignment, sm.gamma))
    return found


def det_polynomial(ts: TypeStateModel, rows: Sequence[int]) -> DetPolynomial:
    ensure_valid(ts)
    rows = _check_rows(ts, rows)
    _check_cap(ts)
    coeffs: dict[tuple[int, ...], int] = {}
    for sm in _iter_state_matchings(ts, rows):
        coeffs[sm.usage] = coeffs.get(sm.usage, 0) + sm.sign
    return DetPolynomial(rows, dict(sorted(coeffs.items(), reverse=True)))


# -- randomised fallback ------------------------------------------------------


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _primes_from(start: int, count: int) -> list[int]:
    out, p = [], start
    while len(out) < count:
        if _is_prime(p):
            out.append(p)
        p += 1
    return out


def _composition(rng: np.random.Generator, total: int, parts: int) -> list[int]:
    """Uniform composition of ``total`` into ``parts`` positive integers."""
    if parts == 1:
        return [total]
    cuts = sorted(int(c) + 1 for c in rng.choice(total - 1, size=parts - 1, replace=False))
    bounds = [0] + cuts + [total]
    return [b - a for a, b in zip(bounds, bounds[1:])]


def _pit_verdict(ts: TypeStateModel, seed: int) -> Verdict:
    rng = np.random.default_rng(seed)
    floor = max(config.PIT_PRIME_FLOOR, ts.n_states + 1)
    for p in _primes_from(floor, config.PIT_SAMPLES):
        weights = [Fraction(c, p) for c in _composition(rng, p, ts.n_states)]
        M = assemble_matrix(ts, weights)
        _, pivots = rref(transpose(M.values))
        if len(pivots) == ts.r:
            return Verdict(
                Klass.GENERIC,
                "nonzero minor at a sampled state measure (randomised test; global not assessed)",
                {"weights": tuple(weights), "rows": tuple(pivots)},
            )
    return Verdict(
        Klass.STRUCTURAL,
        f"every minor vanished at {config.PIT_SAMPLES} random state measures",
        {"samples": config.PIT_SAMPLES},
        probabilistic=True,
    )


# -- verdicts -------------------------------------------------------------------


def verdict_typestate_generic(ts: TypeStateModel, verbose: bool = False, seed: int = 0) -> Verdict:
    """Generic identifiability from the usage-class coefficients.

    A ``GENERIC`` result here does not assess global identifiability;
    use :func:`verdict_typestate_global` for the full trichotomy. Above
    the state-choice cap the verdict falls back to random evaluation and
    a negative answer is flagged ``probabilistic``.
    """
    ensure_valid(ts)
    n, r = ts.n, ts.r
    if n < r:
        return Verdict(Klass.STRUCTURAL, "fewer alternatives than types", {"state_matchings": 0})
    if ts.n_states**r > config.STATE_CHOICE_CAP:
        return _pit_verdict(ts, seed)

    found: list[tuple[tuple[int, ...], tuple[int, ...], int]] = []
    cancelled: list[tuple[tuple[int, ...], dict]] = []
    for rows in itertools.combinations(range(n), r):
        poly = det_polynomial(ts, rows)
        nz = poly.nonzero()
        if nz:
            usage, coeff = next(iter(nz.items()))
            found.append((rows, usage, coeff))
            if not verbose:
                break
        elif poly.coeffs:
            cancelled.append((rows, dict(poly.coeffs)))

    if found:
        rows, usage, coeff = found[0]
        witnesses = {"rows": rows, "usage": usage, "coefficient": coeff}
        if verbose:
            witnesses["all"] = tuple(found)
        return Verdict(Klass.GENERIC, "usage class with nonzero net parity (global not assessed)", witnesses)
    if cancelled:
        return Verdict(
            Klass.STRUCTURAL,
            "every usage class cancels in opposite-parity pairs",
            {"cancelled": tuple(cancelled)},
        )
    return Verdict(Klass.STRUCTURAL, "no state-matching onto any row subset", {"state_matchings": 0})


def _state_matching_for(ts: TypeStateModel, m: Matching) -> StateMatching:
    gamma = tuple(next(i for i in range(ts.n_states) if ts.choice[l][i] == k) for l, k in enumerate(m.assignment))
    usage = [0] * ts.n_states
    for i in gamma:
        usage[i] += 1
    return StateMatching(m, gamma, tuple(usage))


def _opposite_state_pair(ts: TypeStateModel, pattern: PossibilityPattern, rows) -> tuple[StateMatching, StateMatching]:
    seen: dict[str, Matching] = {}
    for m in iter_matchings(pattern, rows):
        seen.setdefault(m.parity, m)
        if len(seen) == 2:
            break
    return _state_matching_for(ts, seen["even"]), _state_matching_for(ts, seen["odd"])


def verdict_typestate_global(ts: TypeStateModel, verbose: bool = False, seed: int = 0) -> Verdict:
    """Global identifiability on the open simplex, else the generic verdict.

    The matchings occurring in state-matchings onto ``R`` are exactly the
    matchings of the induced pattern onto ``R``, so the equal-parity test
    runs as a permanent/determinant comparison on that pattern.
    """
    ensure_valid(ts)
    n, r = ts.n, ts.r
    if r > config.PERMANENT_MAX_TYPES:
        raise IntractableError(f"permanent intractable for r = {r} > {config.PERMANENT_MAX_TYPES}")
    pattern = ts.induced_pattern()
    qualifying = []
    mixed = []
    if n >= r:
        for rows in itertools.combinations(range(n), r):
            stats = square_stats(pattern, rows)
            if stats.permanent == 0:
                continue
            if stats.same_parity:
                qualifying.append(stats)
                if not verbose:
                    break
            else:
                mixed.append(rows)
    if qualifying:
        best = qualifying[0]
        sm = _state_matching_for(ts, next(iter_matchings(pattern, best.rows)))
        witnesses = {"rows": best.rows, "state_matching": sm}
        if verbose:
            witnesses["all_rows"] = tuple(s.rows for s in qualifying)
        return Verdict(Klass.GLOBAL, "all state-matchings onto the row subset share parity", witnesses)

    generic = verdict_typestate_generic(ts, verbose=verbose, seed=seed)
    if generic.klass is not Klass.GENERIC:
        return generic
    witnesses = dict(generic.witnesses)
    witnesses["opposite_parity_pairs"] = tuple((rows, _opposite_state_pair(ts, pattern, rows)) for rows in mixed)
    return Verdict(
        Klass.GENERIC,
        "usage class with nonzero net parity; every row subset mixes parities",
        witnesses,
        probabilistic=generic.probabilistic,
    )


def reassignment_relation(ts: TypeStateModel, a_star) -> PossibilityPattern:
    """``t ⇝ t'`` iff t chooses, in some state, what t' chooses in ``a_star``.

    Encoded as a pattern whose rows are target types and columns source
    types, so full matchings are exactly the possible reassignments.
    """
    i_star = _state_index(ts, a_star)
    ref = [ts.choice[l][i_star] for l in range(ts.r)]
    grid = [
        [any(ts.choice[t][i] == ref[tp] for i in range(ts.n_states)) for t in range(ts.r)] for tp in range(ts.r)
    ]
    return PossibilityPattern(ts.types, ts.types, grid)


def reassignment_check(ts: TypeStateModel, a_star) -> Verdict:
    """Global iff every possible reassignment relative to ``a_star`` is even."""
    ensure_valid(ts)
    i_star = _state_index(ts, a_star)
    if ts.states[i_star] not in separating_states(ts):
        raise ValidationError(f"state {ts.states[i_star]!r} does not separate types")
    relation = reassignment_relation(ts, i_star)
    stats = square_stats(relation, range(ts.r))
    if stats.permanent == stats.signed_count:
        return Verdict(
            Klass.GLOBAL,
            "every possible reassignment is even",
            {"reference_state": i_star, "reassignments": stats.permanent},
        )
    odd = next(m for m in iter_matchings(relation) if permutation_parity(m.assignment))
    return Verdict(
        Klass.GENERIC,
        "an odd possible reassignment exists",
        {"reference_state": i_star, "odd_reassignment": odd.assignment},
    )


def rank_at(ts: TypeStateModel, weights: Sequence) -> int:
    return rank(assemble_matrix(ts, weights).values)
