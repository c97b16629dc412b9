"""Exact linear algebra over the rationals.

Matrices are plain row-major sequences of sequences; every entry is
coerced to :class:`fractions.Fraction`, so ranks, kernels and
determinants are never subject to rounding.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]
Vector = tuple[Fraction, ...]


def as_fraction_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def transpose(rows: Sequence[Sequence]) -> list[list]:
    if not rows:
        return []
    return [list(col) for col in zip(*rows)]


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form and pivot columns.

    ``ncols`` is only needed when ``rows`` is empty.
    """
    m = as_fraction_matrix(rows)
    if not m:
        return [], []
    n_rows, n_cols = len(m), len(m[0]) if ncols is None else ncols
    pivots: list[int] = []
    piv_r = 0
    for c in range(n_cols):
        if piv_r == n_rows:
            break
        pick = next((i for i in range(piv_r, n_rows) if m[i][c] != 0), None)
        if pick is None:
            continue
        m[piv_r], m[pick] = m[pick], m[piv_r]
        lead = m[piv_r][c]
        if lead != 1:
            m[piv_r] = [v / lead for v in m[piv_r]]
        for i in range(n_rows):
            if i != piv_r and m[i][c] != 0:
                factor = m[i][c]
                row_p = m[piv_r]
                m[i] = [a - factor * b for a, b in zip(m[i], row_p)]
        pivots.append(c)
        piv_r += 1
    return m[:piv_r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Basis of ``{v : A v = 0}``, one vector per free column.

    The basis is not canonicalised; see :class:`RationalSubspace` for that.
    """
    if not rows:
        return [tuple(Fraction(int(i == j)) for i in range(ncols)) for j in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[fc]
        basis.append(tuple(v))
    return basis


def det(rows: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    m = as_fraction_matrix(rows)
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    result = Fraction(1)
    for c in range(n):
        pick = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pick is None:
            return Fraction(0)
        if pick != c:
            m[c], m[pick] = m[pick], m[c]
            sign = -sign
        lead = m[c][c]
        result *= lead
        for i in range(c + 1, n):
            if m[i][c] != 0:
                factor = m[i][c] / lead
                m[i] = [a - factor * b for a, b in zip(m[i], m[c])]
    return sign * result


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    m = [list(map(int, r)) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def matvec(rows: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(sum((Fraction(a) * Fraction(b) for a, b in zip(row, v)), Fraction(0)) for row in rows)


def solve(rows: Sequence[Sequence], rhs: Sequence, ncols: int) -> tuple[Vector, list[Vector]] | None:
    """Solve ``A v = rhs`` exactly.

    Returns ``(particular, kernel_basis)`` with free variables set to zero
    in the particular solution, or ``None`` if the system is inconsistent.
    """
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    v = [Fraction(0)] * ncols
    for row, pc in zip(red, pivots):
        v[pc] = row[ncols]
    return tuple(v), nullspace(rows, ncols)


def in_span(vectors: Sequence[Sequence], target: Sequence) -> bool:
    """True iff ``target`` is a linear combination of ``vectors``."""
    if not vectors:
        return all(Fraction(t) == 0 for t in target)
    return rank(vectors) == rank(list(vectors) + [target])


class RationalSubspace:
    """A subspace of Q^d held by its canonical (RREF) basis.

    Two subspaces are equal iff their canonical bases are equal, so the
    class is hashable and compares by value.
    """

    __slots__ = ("ambient", "basis")

    def __init__(self, ambient: int, vectors: Sequence[Sequence] = ()):
        vectors = [list(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient:
                raise ValueError(f"vector of length {len(v)} in ambient dimension {ambient}")
        red, _ = rref(vectors, ambient) if vectors else ([], [])
        self.ambient = ambient
        self.basis: tuple[Vector, ...] = tuple(tuple(r) for r in red)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def kernel_of(cls, rows: Sequence[Sequence], ncols: int) -> "RationalSubspace":
        return cls(ncols, nullspace(rows, ncols))

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient:
            raise ValueError("dimension mismatch")
        return in_span(self.basis, v)

    def annihilator(self) -> list[Vector]:
        """Linear functionals vanishing exactly on this subspace."""
        if not self.basis:
            return [tuple(Fraction(int(i == j)) for i in range(self.ambient)) for j in range(self.ambient)]
        return nullspace(self.basis, self.ambient)

    def intersection(self, other: "RationalSubspace") -> "RationalSubspace":
        if self.ambient != other.ambient:
            raise ValueError(f"ambient dimensions differ: {self.ambient} vs {other.ambient}")
        constraints = self.annihilator() + other.annihilator()
        if not constraints:
            return RationalSubspace(self.ambient, _identity(self.ambient))
        return RationalSubspace.kernel_of(constraints, self.ambient)

    def is_trivial(self) -> bool:
        return not self.basis

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalSubspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient, self.basis))

    def __repr__(self) -> str:
        vecs = ", ".join("(" + ", ".join(str(x) for x in v) + ")" for v in self.basis)
        return f"RationalSubspace(dim={self.dim}, span{{{vecs}}})"


def _identity(n: int) -> list[Vector]:
    return [tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n)]
