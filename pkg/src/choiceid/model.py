"""Domain types for latent-type choice models and their forward maps.

Everything here is exact: probabilities are :class:`~fractions.Fraction`
and the forward maps (type-state assembly, aggregation, three-occasion
tensor) never round.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DimensionError, ValidationError

__all__ = [
    "PossibilityPattern",
    "ConcreteMatrix",
    "TypeStateModel",
    "TypeDistribution",
    "ObservedShares",
    "MultiOccasionModel",
    "ChoiceTensor",
    "validate",
    "ensure_valid",
    "assemble_matrix",
    "aggregate_shares",
    "build_tensor",
    "parse_rational",
    "format_rational",
]


def parse_rational(value) -> Fraction:
    """Parse ``"num/den"`` strings, ints and Fractions. Floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}; pass a 'num/den' string")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _freeze_grid(grid, conv) -> tuple:
    return tuple(tuple(conv(v) for v in row) for row in grid)


def _duplicates(labels: Sequence[str]) -> list[str]:
    seen, dup = set(), []
    for lab in labels:
        if lab in seen and lab not in dup:
            dup.append(lab)
        seen.add(lab)
    return dup


@dataclass(frozen=True)
class PossibilityPattern:
    """Structural-zero pattern of the type-conditional choice matrix.

    ``allowed[k][l]`` is true when type ``types[l]`` can choose
    ``alternatives[k]`` with positive probability.
    """

    alternatives: tuple[str, ...]
    types: tuple[str, ...]
    allowed: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "alternatives", tuple(self.alternatives))
        object.__setattr__(self, "types", tuple(self.types))
        object.__setattr__(self, "allowed", _freeze_grid(self.allowed, bool))

    @classmethod
    def from_pairs(cls, alternatives, types, pairs: Iterable[tuple[str, str]]) -> "PossibilityPattern":
        """Build from ``(type, alternative)`` label pairs."""
        alternatives, types = tuple(alternatives), tuple(types)
        grid = [[False] * len(types) for _ in alternatives]
        for t, x in pairs:
            grid[alternatives.index(x)][types.index(t)] = True
        return cls(alternatives, types, grid)

    @property
    def n(self) -> int:
        return len(self.alternatives)

    @property
    def r(self) -> int:
        return len(self.types)

    def neighbors(self, l: int) -> tuple[int, ...]:
        """Alternatives at which type ``l`` is possible, in index order."""
        return tuple(k for k in range(self.n) if self.allowed[k][l])

    def column_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << k for k in self.neighbors(l)) for l in range(self.r))

    def pairs(self) -> list[tuple[str, str]]:
        return [(self.types[l], self.alternatives[k]) for l in range(self.r) for k in self.neighbors(l)]

    def with_pair(self, t: str, x: str) -> "PossibilityPattern":
        return PossibilityPattern.from_pairs(self.alternatives, self.types, self.pairs() + [(t, x)])

    def submatrix(self, rows: Sequence[int]) -> tuple[tuple[bool, ...], ...]:
        return tuple(self.allowed[k] for k in rows)


@dataclass(frozen=True)
class ConcreteMatrix:
    """A column-stochastic instance of a possibility pattern."""

    values: tuple[tuple[Fraction, ...], ...]
    pattern: PossibilityPattern

    def __post_init__(self):
        object.__setattr__(self, "values", _freeze_grid(self.values, parse_rational))

    @classmethod
    def from_values(cls, values, alternatives=None, types=None) -> "ConcreteMatrix":
        """Wrap a matrix, taking its own support as the pattern."""
        grid = _freeze_grid(values, parse_rational)
        n, r = len(grid), len(grid[0]) if grid else 0
        alternatives = tuple(alternatives) if alternatives else tuple(f"x{k + 1}" for k in range(n))
        types = tuple(types) if types else tuple(f"t{l + 1}" for l in range(r))
        pattern = PossibilityPattern(alternatives, types, [[v > 0 for v in row] for row in grid])
        return cls(grid, pattern)

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def r(self) -> int:
        return len(self.values[0]) if self.values else 0

    def column(self, l: int) -> tuple[Fraction, ...]:
        return tuple(row[l] for row in self.values)

    def rows(self, subset: Sequence[int]) -> list[list[Fraction]]:
        return [list(self.values[k]) for k in subset]

    def support_pattern(self) -> PossibilityPattern:
        return PossibilityPattern(
            self.pattern.alternatives, self.pattern.types, [[v > 0 for v in row] for row in self.values]
        )


@dataclass(frozen=True)
class TypeStateModel:
    """Types choosing deterministically given a common random state.

    ``choice[l][i]`` is the index of the alternative chosen by type ``l``
    in state ``states[i]``. ``weights`` is the optional state measure.
    """

    alternatives: tuple[str, ...]
    types: tuple[str, ...]
    states: tuple[str, ...]
    choice: tuple[tuple[int, ...], ...]
    weights: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "alternatives", tuple(self.alternatives))
        object.__setattr__(self, "types", tuple(self.types))
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "choice", _freeze_grid(self.choice, int))
        if self.weights is not None:
            w = self.weights
            if isinstance(w, Mapping):
                w = [w[s] for s in self.states]
            object.__setattr__(self, "weights", tuple(parse_rational(v) for v in w))

    @classmethod
    def from_labels(
        cls,
        alternatives,
        types,
        states,
        choice: Mapping[str, Mapping[str, str]],
        weights: Mapping[str, object] | None = None,
    ) -> "TypeStateModel":
        """Build from ``choice[type][state] = alternative`` label maps."""
        alternatives, types, states = tuple(alternatives), tuple(types), tuple(states)
        grid = [[alternatives.index(choice[t][s]) for s in states] for t in types]
        if weights is not None:
            unknown = set(weights) - set(states)
            if unknown:
                raise ValidationError(f"unknown state label(s) in weights: {sorted(unknown)}")
            weights = [weights[s] for s in states]
        return cls(alternatives, types, states, grid, weights)

    @classmethod
    def from_state_columns(cls, alternatives, types, columns: Mapping[str, Sequence[str]], weights=None):
        """Build from ``columns[state] = (choice of type 1, choice of type 2, ...)``."""
        states = tuple(columns)
        choice = {t: {s: columns[s][l] for s in states} for l, t in enumerate(types)}
        return cls.from_labels(alternatives, types, states, choice, weights)

    @property
    def n(self) -> int:
        return len(self.alternatives)

    @property
    def r(self) -> int:
        return len(self.types)

    @property
    def n_states(self) -> int:
        return len(self.states)

    def chooses(self, l: int, i: int) -> int:
        return self.choice[l][i]

    def state_matrix(self, i: int) -> list[list[int]]:
        """The one-hot n-by-r matrix of state ``i``."""
        m = [[0] * self.r for _ in range(self.n)]
        for l in range(self.r):
            m[self.choice[l][i]][l] = 1
        return m

    def induced_pattern(self) -> PossibilityPattern:
        """Pattern with type l possible at x iff some state sends l to x."""
        grid = [[False] * self.r for _ in range(self.n)]
        for l in range(self.r):
            for i in range(self.n_states):
                grid[self.choice[l][i]][l] = True
        return PossibilityPattern(self.alternatives, self.types, grid)

    def restrict_states(self, keep: Sequence[int]) -> "TypeStateModel":
        return TypeStateModel(
            self.alternatives,
            self.types,
            [self.states[i] for i in keep],
            [[row[i] for i in keep] for row in self.choice],
        )

    def with_weights(self, weights) -> "TypeStateModel":
        return TypeStateModel(self.alternatives, self.types, self.states, self.choice, weights)


@dataclass(frozen=True)
class TypeDistribution:
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(parse_rational(v) for v in self.probs))

    def __len__(self) -> int:
        return len(self.probs)


@dataclass(frozen=True)
class ObservedShares:
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(parse_rational(v) for v in self.probs))

    def __len__(self) -> int:
        return len(self.probs)


@dataclass(frozen=True)
class MultiOccasionModel:
    """One to three choice occasions over a shared, ordered type list."""

    types: tuple[str, ...]
    occasions: tuple[PossibilityPattern | TypeStateModel, ...]

    def __post_init__(self):
        object.__setattr__(self, "types", tuple(self.types))
        object.__setattr__(self, "occasions", tuple(self.occasions))

    @property
    def r(self) -> int:
        return len(self.types)

    @property
    def J(self) -> int:
        return len(self.occasions)


@dataclass(frozen=True)
class ChoiceTensor:
    """Joint distribution of choices over three occasions."""

    dims: tuple[int, int, int]
    entries: tuple[tuple[tuple[Fraction, ...], ...], ...] = field(repr=False)

    def __getitem__(self, idx: tuple[int, int, int]) -> Fraction:
        k1, k2, k3 = idx
        return self.entries[k1][k2][k3]

    def flat(self) -> list[Fraction]:
        return [v for plane in self.entries for row in plane for v in row]

    def total(self) -> Fraction:
        return sum(self.flat(), Fraction(0))

    def to_numpy(self):
        import numpy as np

        return np.array([[[float(v) for v in row] for row in plane] for plane in self.entries])


# -- validation ---------------------------------------------------------------


def _simplex_problems(probs: Sequence[Fraction], what: str) -> list[str]:
    problems = []
    if any(p < 0 for p in probs):
        problems.append(f"{what} has negative entries")
    total = sum(probs, Fraction(0))
    if total != 1:
        problems.append(f"{what} sums to {format_rational(total)}, not 1")
    return problems


def _label_problems(labels: Sequence[str], what: str) -> list[str]:
    problems = []
    if not labels:
        problems.append(f"no {what}")
    dup = _duplicates(labels)
    if dup:
        problems.append(f"duplicate {what} labels: {dup}")
    return problems


def _pattern_problems(p: PossibilityPattern) -> list[str]:
    problems = _label_problems(p.alternatives, "alternatives") + _label_problems(p.types, "types")
    if len(p.allowed) != p.n or any(len(row) != p.r for row in p.allowed):
        problems.append(f"allowed grid is not {p.n}x{p.r}")
        return problems
    for l, t in enumerate(p.types):
        if not any(p.allowed[k][l] for k in range(p.n)):
            problems.append(f"type {t!r} is possible nowhere")
    return problems


def _matrix_problems(m: ConcreteMatrix) -> list[str]:
    problems = _pattern_problems(m.pattern)
    if problems:
        return problems
    if len(m.values) != m.pattern.n or any(len(row) != m.pattern.r for row in m.values):
        return [f"values grid does not match the {m.pattern.n}x{m.pattern.r} pattern"]
    for l, t in enumerate(m.pattern.types):
        col = m.column(l)
        if any(v < 0 or v > 1 for v in col):
            problems.append(f"column {t!r} has entries outside [0, 1]")
        total = sum(col, Fraction(0))
        if total != 1:
            problems.append(f"column {t!r} sums to {format_rational(total)}, not 1")
        for k, v in enumerate(col):
            if v > 0 and not m.pattern.allowed[k][l]:
                problems.append(f"positive entry at ({m.pattern.alternatives[k]!r}, {t!r}) outside the pattern")
    return problems


def _typestate_problems(ts: TypeStateModel) -> list[str]:
    problems = (
        _label_problems(ts.alternatives, "alternatives")
        + _label_problems(ts.types, "types")
        + _label_problems(ts.states, "states")
    )
    if len(ts.choice) != ts.r or any(len(row) != ts.n_states for row in ts.choice):
        problems.append(f"choice table is not {ts.r}x{ts.n_states}")
        return problems
    for l, row in enumerate(ts.choice):
        for i, k in enumerate(row):
            if not 0 <= k < ts.n:
                problems.append(f"type {ts.types[l]!r} in state {ts.states[i]!r} chooses unknown alternative {k}")
    if ts.weights is not None:
        if len(ts.weights) != ts.n_states:
            problems.append("weights do not match the state list")
        else:
            problems += _simplex_problems(ts.weights, "state weights")
    return problems


def _multi_problems(mm: MultiOccasionModel) -> list[str]:
    problems = _label_problems(mm.types, "types")
    if mm.J not in (1, 2, 3):
        problems.append(f"{mm.J} occasions given; only 1, 2 or 3 are supported")
    for j, occ in enumerate(mm.occasions):
        if tuple(occ.types) != mm.types:
            problems.append(f"occasion {j + 1} type list differs from the shared type list")
        problems += [f"occasion {j + 1}: {msg}" for msg in validate(occ)]
    return problems


def _tensor_problems(s: ChoiceTensor) -> list[str]:
    problems = []
    flat = s.flat()
    if len(flat) != s.dims[0] * s.dims[1] * s.dims[2]:
        problems.append("tensor entries do not match dims")
    if any(v < 0 for v in flat):
        problems.append("tensor has negative entries")
    total = sum(flat, Fraction(0))
    if total != 1:
        problems.append(f"tensor sums to {format_rational(total)}, not 1")
    return problems


def validate(obj) -> list[str]:
    """List every violated invariant of ``obj``; an empty list means valid."""
    if isinstance(obj, PossibilityPattern):
        return _pattern_problems(obj)
    if isinstance(obj, ConcreteMatrix):
        return _matrix_problems(obj)
    if isinstance(obj, TypeStateModel):
        return _typestate_problems(obj)
    if isinstance(obj, TypeDistribution):
        return _simplex_problems(obj.probs, "type distribution")
    if isinstance(obj, ObservedShares):
        return _simplex_problems(obj.probs, "observed shares")
    if isinstance(obj, MultiOccasionModel):
        return _multi_problems(obj)
    if isinstance(obj, ChoiceTensor):
        return _tensor_problems(obj)
    return [f"unsupported object of type {type(obj).__name__}"]


def ensure_valid(obj) -> None:
    problems = validate(obj)
    if problems:
        raise ValidationError(problems)


# -- forward maps -------------------------------------------------------------


def _weights_vector(ts: TypeStateModel, weights) -> tuple[Fraction, ...]:
    if weights is None:
        if ts.weights is None:
            raise ValidationError("no state weights supplied")
        w = ts.weights
    elif isinstance(weights, Mapping):
        unknown = set(weights) - set(ts.states)
        if unknown:
            raise ValidationError(f"unknown state label(s) in weights: {sorted(unknown)}")
        w = tuple(parse_rational(weights.get(s, 0)) for s in ts.states)
    else:
        w = tuple(parse_rational(v) for v in weights)
        if len(w) != ts.n_states:
            raise DimensionError(f"{len(w)} weights for {ts.n_states} states")
    problems = _simplex_problems(w, "state weights")
    if problems:
        raise ValidationError(problems)
    return w


def assemble_matrix(ts: TypeStateModel, weights=None) -> ConcreteMatrix:
    """Mix the one-hot state matrices with the state weights.

    ``weights`` may be a mapping from state label, a sequence aligned with
    ``ts.states``, or omitted to use ``ts.weights``. States missing from a
    mapping get weight zero.
    """
    ensure_valid(ts)
    w = _weights_vector(ts, weights)
    values = [[Fraction(0)] * ts.r for _ in range(ts.n)]
    for l in range(ts.r):
        for i, wi in enumerate(w):
            values[ts.choice[l][i]][l] += wi
    return ConcreteMatrix(values, ts.induced_pattern())


def aggregate_shares(M: ConcreteMatrix, pi: TypeDistribution) -> ObservedShares:
    if M.r != len(pi):
        raise DimensionError(f"matrix has {M.r} columns but the type distribution has {len(pi)} entries")
    return ObservedShares(tuple(sum((a * b for a, b in zip(row, pi.probs)), Fraction(0)) for row in M.values))


def build_tensor(matrices: Sequence[ConcreteMatrix], pi: TypeDistribution) -> ChoiceTensor:
    """Joint choice shares over three occasions, independent given type."""
    if len(matrices) != 3:
        raise DimensionError(f"expected 3 occasion matrices, got {len(matrices)}")
    r = len(pi)
    for j, m in enumerate(matrices):
        if m.r != r:
            raise DimensionError(f"occasion {j + 1} has {m.r} columns, expected {r}")
    m1, m2, m3 = (m.values for m in matrices)
    dims = (len(m1), len(m2), len(m3))
    entries = []
    for k1 in range(dims[0]):
        plane = []
        for k2 in range(dims[1]):
            w12 = [pi.probs[h] * m1[k1][h] * m2[k2][h] for h in range(r)]
            plane.append(tuple(sum((w12[h] * m3[k3][h] for h in range(r)), Fraction(0)) for k3 in range(dims[2])))
        entries.append(tuple(plane))
    return ChoiceTensor(dims, tuple(entries))


def occasion_matrices(model: MultiOccasionModel, weights: Sequence | None = None) -> list[ConcreteMatrix]:
    """Concrete matrices of type-state occasions, from per-occasion weights."""
    out = []
    for j, occ in enumerate(model.occasions):
        if not isinstance(occ, TypeStateModel):
            raise TypeError(f"occasion {j + 1} is a pattern; a concrete matrix needs a type-state occasion")
        out.append(assemble_matrix(occ, None if weights is None else weights[j]))
    return out

