"""Independent re-verification of verdict witnesses.

Nothing here calls the decision procedures. Matchings are re-checked by
brute force over permutations, usage-class coefficients by summing over
every state assignment, and rank claims by fresh exact evaluation. Checks
whose brute force would exceed :data:`BRUTE_FORCE_BUDGET` are skipped
and named in the result.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

import numpy as np

from .linalg import in_span, rank
from .model import MultiOccasionModel, PossibilityPattern, TypeStateModel, assemble_matrix
from .verdict import Klass, Verdict

__all__ = ["CheckResult", "check"]

BRUTE_FORCE_BUDGET = 200_000


@dataclass(frozen=True)
class CheckResult:
    problems: tuple[str, ...]
    skipped: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.problems


def _parity(perm: Sequence[int]) -> int:
    return sum(1 for i, j in itertools.combinations(range(len(perm)), 2) if perm[i] > perm[j]) & 1


def _as_assignment(m) -> tuple[int, ...]:
    return tuple(getattr(m, "assignment", m))


def _respects(allowed, assignment, rows=None) -> bool:
    n = len(allowed)
    return (
        len(set(assignment)) == len(assignment)
        and all(0 <= k < n and allowed[k][l] for l, k in enumerate(assignment))
        and (rows is None or tuple(sorted(assignment)) == tuple(rows))
    )


def _matchings_onto(allowed, rows, r):
    for perm in itertools.permutations(rows):
        if all(allowed[k][l] for l, k in enumerate(perm)):
            yield perm


class _Checker:
    def __init__(self):
        self.problems: list[str] = []
        self.skipped: list[str] = []

    def expect(self, cond: bool, msg: str) -> None:
        if not cond:
            self.problems.append(msg)

    def result(self) -> CheckResult:
        return CheckResult(tuple(self.problems), tuple(self.skipped))


# -- patterns ---------------------------------------------------------------------


def _check_pattern(v: Verdict, p: PossibilityPattern, c: _Checker) -> None:
    allowed, r, n = p.allowed, p.r, p.n
    w = v.witnesses
    if v.klass is Klass.STRUCTURAL:
        S = w.get("deficient_types")
        c.expect(bool(S), "structural verdict without a deficient type set")
        if S:
            nbhd = {k for l in S for k in range(n) if allowed[k][l]}
            c.expect(len(nbhd) < len(S), f"types {S} are not deficient: |N(S)| = {len(nbhd)}")
            if "neighborhood" in w:
                c.expect(tuple(sorted(nbhd)) == tuple(w["neighborhood"]), "reported neighbourhood is wrong")
        return
    m = w.get("matching")
    if m is not None:
        c.expect(_respects(allowed, _as_assignment(m)), f"matching {_as_assignment(m)} violates the pattern")
    budget_ok = factorial(r) <= BRUTE_FORCE_BUDGET
    if v.klass is Klass.GLOBAL:
        rows = tuple(w["rows"])
        c.expect(m is not None and _respects(allowed, _as_assignment(m), rows), "global matching does not land on the row subset")
        if not budget_ok:
            c.skipped.append("parity enumeration (r too large)")
            return
        perms = list(_matchings_onto(allowed, rows, r))
        parities = {_parity([rows.index(k) for k in perm]) for perm in perms}
        c.expect(len(perms) > 0, "no matching onto the global row subset")
        c.expect(len(parities) == 1, f"matchings onto {rows} have both parities")
        if "permanent" in w:
            c.expect(w["permanent"] == len(perms), "permanent disagrees with enumeration")
            signed = sum(-1 if _parity(perm) else 1 for perm in perms)
            c.expect(w["signed_count"] == signed, "signed count disagrees with enumeration")
    elif v.klass is Klass.GENERIC:
        pairs = w.get("opposite_parity_pairs", ())
        for rows, pair in pairs:
            even, odd = (_as_assignment(x) for x in pair)
            c.expect(_respects(allowed, even, rows) and _respects(allowed, odd, rows), f"opposite pair on {rows} violates the pattern")
            c.expect(_parity(even) != _parity(odd), f"pair on {rows} does not have opposite parities")
        if budget_ok and n >= r:
            covered = {tuple(rows) for rows, _ in pairs}
            for rows in itertools.combinations(range(n), r):
                if next(_matchings_onto(allowed, rows, r), None) is not None:
                    c.expect(rows in covered, f"row subset {rows} has matchings but no opposite-parity pair")


# -- type-state models --------------------------------------------------------------


def _brute_coefficients(ts: TypeStateModel, rows: tuple[int, ...]) -> dict[tuple[int, ...], int]:
    coeffs: dict[tuple[int, ...], int] = {}
    for gamma in itertools.product(range(ts.n_states), repeat=ts.r):
        alts = tuple(ts.choice[l][gamma[l]] for l in range(ts.r))
        if tuple(sorted(alts)) != rows or len(set(alts)) != ts.r:
            continue
        usage = tuple(gamma.count(i) for i in range(ts.n_states))
        coeffs[usage] = coeffs.get(usage, 0) + (-1 if _parity(alts) else 1)
    return coeffs


def _brute_parities(ts: TypeStateModel, rows: tuple[int, ...]) -> set[int]:
    out = set()
    for gamma in itertools.product(range(ts.n_states), repeat=ts.r):
        alts = tuple(ts.choice[l][gamma[l]] for l in range(ts.r))
        if tuple(sorted(alts)) == rows and len(set(alts)) == ts.r:
            out.add(_parity(alts))
    return out


def _fresh_weights(ts: TypeStateModel, rng: np.random.Generator) -> tuple[Fraction, ...]:
    # denominators deliberately unrelated to the library's sampling grid
    d = 999_983
    cuts = sorted(int(x) for x in rng.choice(np.arange(1, d), size=ts.n_states - 1, replace=False))
    bounds = [0] + cuts + [d]
    return tuple(Fraction(b - a, d) for a, b in zip(bounds, bounds[1:]))


def _check_typestate(v: Verdict, ts: TypeStateModel, c: _Checker) -> None:
    w = v.witnesses
    brute_ok = ts.n_states**ts.r <= BRUTE_FORCE_BUDGET
    rng = np.random.default_rng(20_240_601)

    if "reference_state" in w:
        _check_reassignment(v, ts, c)
        return
    if "states" in w or "failures" in w:
        _check_nullspace(v, ts, c, rng)
        return

    if "state_matching" in w:
        sm = w["state_matching"]
        rows = tuple(w["rows"])
        alts = _as_assignment(sm.matching)
        c.expect(all(ts.choice[l][sm.gamma[l]] == alts[l] for l in range(ts.r)), "state-matching is inconsistent with the choice functions")
        c.expect(tuple(sorted(alts)) == rows and len(set(alts)) == ts.r, "state-matching does not land on the row subset")
        if brute_ok:
            c.expect(len(_brute_parities(ts, rows)) == 1, f"state-matchings onto {rows} have both parities")
        else:
            c.skipped.append("state-matching parity enumeration (|A|^r too large)")
    if "usage" in w:
        rows = tuple(w["rows"])
        if brute_ok:
            coeffs = _brute_coefficients(ts, rows)
            c.expect(coeffs.get(tuple(w["usage"]), 0) == w["coefficient"], "usage-class coefficient disagrees with brute force")
            c.expect(w["coefficient"] != 0, "witness coefficient is zero")
        else:
            c.skipped.append("usage-class coefficient (|A|^r too large)")
    if "weights" in w:
        M = assemble_matrix(ts, w["weights"])
        c.expect(rank([M.values[k] for k in w["rows"]]) == ts.r, "minor at the sampled weights is singular")
    for rows, (sa, sb) in w.get("opposite_parity_pairs", ()):
        for sm in (sa, sb):
            alts = _as_assignment(sm.matching)
            c.expect(all(ts.choice[l][sm.gamma[l]] == alts[l] for l in range(ts.r)), "opposite-pair state-matching inconsistent")
            c.expect(tuple(sorted(alts)) == tuple(rows), "opposite-pair state-matching off its row subset")
        c.expect(_parity(_as_assignment(sa.matching)) != _parity(_as_assignment(sb.matching)), "opposite pair shares parity")

    if v.klass is Klass.STRUCTURAL:
        if v.probabilistic or not brute_ok:
            for _ in range(5):
                c.expect(rank(assemble_matrix(ts, _fresh_weights(ts, rng)).values) < ts.r, "structural verdict but a fresh sample has full rank")
            return
        for rows in itertools.combinations(range(ts.n), ts.r) if ts.n >= ts.r else ():
            c.expect(all(x == 0 for x in _brute_coefficients(ts, rows).values()), f"row subset {rows} has a nonzero usage class")


def _check_reassignment(v: Verdict, ts: TypeStateModel, c: _Checker) -> None:
    i_star = v.witnesses["reference_state"]
    ref = [ts.choice[l][i_star] for l in range(ts.r)]
    c.expect(len(set(ref)) == ts.r, "reference state does not separate types")

    def reachable(t, tp):
        return any(ts.choice[t][i] == ref[tp] for i in range(ts.n_states))

    if "odd_reassignment" in v.witnesses:
        phi = tuple(v.witnesses["odd_reassignment"])
        c.expect(sorted(phi) == list(range(ts.r)), "reassignment is not a permutation")
        c.expect(all(reachable(t, phi[t]) for t in range(ts.r)), "reassignment uses an impossible move")
        c.expect(_parity(phi) == 1, "reported odd reassignment is even")
    elif factorial(ts.r) <= BRUTE_FORCE_BUDGET:
        for phi in itertools.permutations(range(ts.r)):
            if all(reachable(t, phi[t]) for t in range(ts.r)):
                c.expect(_parity(phi) == 0, f"odd reassignment {phi} exists")


def _split_fails(ts, rows, a, b, t, u, mixed) -> str | None:
    ca = [ts.choice[l][a] for l in range(ts.r)]
    cb = [ts.choice[l][b] for l in range(ts.r)]
    if ca[t] != ca[u]:
        return None
    # project the pooled alternatives onto the chosen rows
    col_b = lambda l: tuple(int(cb[l] == k) for k in rows)
    if col_b(t) == col_b(u):
        return "pooled"
    split = [Fraction(p - q) for p, q in zip(col_b(t), col_b(u))]
    rest = [[mixed[k][s] for k in rows] for s in range(ts.r) if s not in (t, u)]
    return "typical" if rest and in_span(rest, split) else None


def _check_nullspace(v: Verdict, ts: TypeStateModel, c: _Checker, rng) -> None:
    weights = _fresh_weights(ts, rng)
    mixed = assemble_matrix(ts, weights).values
    if v.klass is Klass.GENERIC:
        rows = tuple(v.witnesses["rows"])
        a, b = v.witnesses["states"]
        for t, u in itertools.combinations(range(ts.r), 2):
            c.expect(_split_fails(ts, rows, a, b, t, u, mixed) is None, f"pair ({t}, {u}) violates the split condition for states ({a}, {b})")
    else:
        for rows, (a, b), (t, u, kind) in v.witnesses["failures"]:
            c.expect(_split_fails(ts, rows, a, b, t, u, mixed) == kind, f"reported failure ({t}, {u}, {kind}) does not reproduce")


# -- multiple occasions ------------------------------------------------------------------


def _brute_matchability(p: PossibilityPattern) -> int:
    best = 0
    for size in range(1, p.r + 1):
        for subset in itertools.combinations(range(p.r), size):
            if not any(
                all(p.allowed[k][l] for l, k in zip(subset, alts))
                for alts in itertools.permutations(range(p.n), size)
            ):
                return best
        best = size
    return best


def _sub_model(ts: TypeStateModel, subset) -> TypeStateModel:
    return TypeStateModel(ts.alternatives, [ts.types[l] for l in subset], ts.states, [ts.choice[l] for l in subset])


def _check_typestate_index(ts: TypeStateModel, vj: int, bad, j: int, c: _Checker) -> None:
    """Every ``vj`` columns independent at some fresh weight; the reported subset dependent for all weights."""
    rng = np.random.default_rng(7_919 + j)
    samples = [assemble_matrix(ts, _fresh_weights(ts, rng)).values for _ in range(5)]
    for subset in itertools.combinations(range(ts.r), vj):
        c.expect(
            any(rank([[row[l] for l in subset] for row in M]) == vj for M in samples),
            f"occasion {j + 1}: columns {subset} dependent at every fresh sample",
        )
    if bad is None:
        c.expect(vj == ts.r, f"occasion {j + 1}: index {vj} below r without a dependent subset")
        return
    c.expect(len(bad) == vj + 1, f"occasion {j + 1}: dependent subset has the wrong size")
    sub = _sub_model(ts, bad)
    if sub.n_states ** sub.r <= BRUTE_FORCE_BUDGET:
        for rows in itertools.combinations(range(sub.n), sub.r):
            c.expect(
                all(x == 0 for x in _brute_coefficients(sub, rows).values()),
                f"occasion {j + 1}: columns {bad} have a nonzero minor",
            )
    else:
        c.skipped.append(f"occasion {j + 1} dependent-subset brute force")


def _check_multi(v: Verdict, model: MultiOccasionModel, c: _Checker) -> None:
    w = v.witnesses
    if "v" in w:
        for j, (occ, vj, bad) in enumerate(zip(model.occasions, w["v"], w["deficient"])):
            if isinstance(occ, TypeStateModel):
                _check_typestate_index(occ, vj, bad, j, c)
            elif factorial(occ.n) * 2**occ.r <= BRUTE_FORCE_BUDGET:
                c.expect(_brute_matchability(occ) == vj, f"occasion {j + 1}: matchability index {vj} disagrees with brute force")
            else:
                c.skipped.append(f"occasion {j + 1} matchability brute force")
        total = sum(w["v"])
        c.expect((total >= 2 * model.r + 2) == (v.klass is Klass.GENERIC), "verdict inconsistent with the index sum")
    elif "occasions" in w:
        for j, (occ, klass) in enumerate(zip(model.occasions, w["occasions"])):
            sub = _Checker()
            if klass == Klass.STRUCTURAL.value:
                rng = np.random.default_rng(j)
                for _ in range(5):
                    sub.expect(rank(assemble_matrix(occ, _fresh_weights(occ, rng)).values) < occ.r, "occasion has full rank at a fresh sample")
            else:
                rng = np.random.default_rng(j)
                sub.expect(
                    any(rank(assemble_matrix(occ, _fresh_weights(occ, rng)).values) == occ.r for _ in range(5)),
                    "identifiable occasion never reaches full rank",
                )
            c.problems += [f"occasion {j + 1}: {msg}" for msg in sub.problems]


def check(verdict: Verdict, subject) -> CheckResult:
    """Re-verify every witness in ``verdict`` against ``subject``."""
    c = _Checker()
    if isinstance(subject, PossibilityPattern):
        _check_pattern(verdict, subject, c)
    elif isinstance(subject, TypeStateModel):
        _check_typestate(verdict, subject, c)
    elif isinstance(subject, MultiOccasionModel):
        _check_multi(verdict, subject, c)
    else:
        c.problems.append(f"cannot check a verdict against {type(subject).__name__}")
    return c.result()
