from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from choiceid.cli import FIXTURE_DIR
from choiceid.io import load_model
from choiceid.model import PossibilityPattern, TypeStateModel

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ALPHABET = "xyzwuvpq"


def alternative_labels(n: int) -> tuple[str, ...]:
    return tuple(ALPHABET[:n]) if n <= len(ALPHABET) else tuple(f"x{k + 1}" for k in range(n))


def load_fixture(name: str):
    return load_model(FIXTURE_DIR / f"{name}.json")


@pytest.fixture
def fixture():
    return load_fixture


def pattern_from_grid(grid) -> PossibilityPattern:
    n, r = len(grid), len(grid[0])
    return PossibilityPattern(alternative_labels(n), tuple(f"t{l + 1}" for l in range(r)), grid)


def typestate_from_choice(choice, n: int, n_states: int | None = None) -> TypeStateModel:
    n_states = n_states or len(choice[0])
    return TypeStateModel(
        alternative_labels(n),
        tuple(f"t{l + 1}" for l in range(len(choice))),
        tuple("abcdefgh"[:n_states]),
        choice,
    )


def all_two_state_models(n: int, r: int):
    """Every choice table for ``r`` types, two states and ``n`` alternatives."""
    cells = list(itertools.product(range(n), repeat=2))
    for table in itertools.product(cells, repeat=r):
        yield typestate_from_choice([list(c) for c in table], n, 2)


def canonical_choice(choice, n: int) -> tuple:
    """Smallest choice table over relabelings of alternatives, types and states."""
    s = len(choice[0])
    best = None
    for alt in itertools.permutations(range(n)):
        for order in itertools.permutations(range(s)):
            table = tuple(sorted(tuple(alt[row[order[i]]] for i in range(s)) for row in choice))
            best = table if best is None or table < best else best
    return best


def two_state_classes(n: int, r: int) -> list[TypeStateModel]:
    """One two-state model per relabeling class."""
    classes: dict[tuple, TypeStateModel] = {}
    for ts in all_two_state_models(n, r):
        classes.setdefault(canonical_choice(ts.choice, n), ts)
    return list(classes.values())


def random_pattern(rng: np.random.Generator, n: int, r: int, density: float | None = None) -> PossibilityPattern:
    """A random pattern in which every type is possible somewhere."""
    density = rng.uniform(0.2, 0.9) if density is None else density
    grid = rng.random((n, r)) < density
    for l in range(r):
        if not grid[:, l].any():
            grid[rng.integers(n), l] = True
    return pattern_from_grid(grid.tolist())


def random_typestate(rng: np.random.Generator, n: int, r: int, n_states: int) -> TypeStateModel:
    choice = rng.integers(0, n, size=(r, n_states)).tolist()
    return typestate_from_choice(choice, n, n_states)


def grid_weights(rng: np.random.Generator, parts: int, denominator: int = 10**6) -> tuple[Fraction, ...]:
    cuts = sorted(rng.choice(np.arange(1, denominator), size=parts - 1, replace=False).tolist())
    bounds = [0] + cuts + [denominator]
    return tuple(Fraction(b - a, denominator) for a, b in zip(bounds, bounds[1:]))


@st.composite
def patterns(draw, max_n: int = 6, max_r: int = 6, square: bool = False):
    r = draw(st.integers(1, max_r))
    n = r if square else draw(st.integers(1, max_n))
    cols = [
        draw(st.lists(st.booleans(), min_size=n, max_size=n).filter(any)) for _ in range(r)
    ]
    return pattern_from_grid([[cols[l][k] for l in range(r)] for k in range(n)])


@st.composite
def typestates(draw, max_n: int = 4, max_r: int = 4, max_states: int = 3):
    n = draw(st.integers(1, max_n))
    r = draw(st.integers(1, max_r))
    s = draw(st.integers(1, max_states))
    choice = [[draw(st.integers(0, n - 1)) for _ in range(s)] for _ in range(r)]
    return typestate_from_choice(choice, n, s)


@st.composite
def simplex_points(draw, parts: int, denominator: int = 997):
    cuts = draw(st.lists(st.integers(1, denominator - 1), min_size=parts - 1, max_size=parts - 1, unique=True))
    bounds = [0] + sorted(cuts) + [denominator]
    return tuple(Fraction(b - a, denominator) for a, b in zip(bounds, bounds[1:]))


# one line per acceptance criterion, filled in by test_acceptance and echoed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
