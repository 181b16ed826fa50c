#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Exact linear algebra

Field specifications, exact scalars and the dense matrix kernel used by every
other module. Matrices are numpy object arrays holding fractions.Fraction
values (rational field) or sympy GF(p) elements (prime fields). Nothing in this
module ever touches floating point.
"""

import re
import math
import logging
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from sympy.polys.domains import GF

from .errors import PresentationError

logger = logging.getLogger(__name__)

Matrix = np.ndarray
Vector = np.ndarray

_SCALAR_PATTERN = re.compile(r'^[+-]?\d+(/\d+)?$')


@lru_cache(maxsize=None)
def _prime_domain(p: int) -> Any:
    return GF(p)


@dataclass(frozen=True)
class FieldSpec:
    """Scalar field: the rationals (default) or a prime field GF(p)."""

    kind: str = "rational"
    p: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind == "rational":
            if self.p is not None:
                raise PresentationError("the rational field takes no characteristic")
        elif self.kind == "prime":
            if self.p is None or not sympy.isprime(self.p):
                raise PresentationError(f"prime field needs a prime characteristic, got {self.p}")
        else:
            raise PresentationError(f"unknown field kind: {self.kind}")

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls("rational")

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls("prime", p)

    @property
    def is_prime_field(self) -> bool:
        return self.kind == "prime"

    @property
    def zero(self) -> Any:
        return self.coerce(0)

    @property
    def one(self) -> Any:
        return self.coerce(1)

    def coerce(self, value: Any) -> Any:
        """Convert an int, Fraction, sympy rational or scalar literal into a field element."""
        if isinstance(value, str):
            return self.parse_scalar(value)
        if isinstance(value, sympy.Rational):
            value = Fraction(int(value.p), int(value.q))
        if self.kind == "rational":
            if isinstance(value, Fraction):
                return value
            if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
                return Fraction(int(value))
            raise PresentationError(f"cannot use {value!r} as a rational scalar")
        domain = _prime_domain(self.p)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise PresentationError(f"{value} has no image in GF({self.p})")
            return domain(value.numerator) / domain(value.denominator)
        return domain(int(value))

    def parse_scalar(self, text: str) -> Any:
        """Parse the scalar syntax: integers and fractions a/b."""
        token = text.strip()
        if not _SCALAR_PATTERN.match(token):
            raise PresentationError(f"malformed scalar: {text!r}")
        if '/' in token:
            numerator, denominator = token.split('/')
            if int(denominator) == 0:
                raise PresentationError(f"zero denominator in scalar: {text!r}")
            value = Fraction(int(numerator), int(denominator))
        else:
            value = Fraction(int(token))
        return self.coerce(value)

    def format_scalar(self, value: Any) -> str:
        """Canonical text form: reduced n/d over the rationals, residue 0..p-1 otherwise."""
        if self.kind == "rational":
            value = Fraction(value)
            if value.denominator == 1:
                return str(value.numerator)
            return f"{value.numerator}/{value.denominator}"
        return str(int(value) % self.p)

    def describe(self) -> str:
        return "rational" if self.kind == "rational" else f"prime {self.p}"

    # Matrix construction

    def zeros(self, rows: int, cols: int) -> Matrix:
        return np.full((rows, cols), self.zero, dtype=object)

    def identity(self, n: int) -> Matrix:
        result = self.zeros(n, n)
        for i in range(n):
            result[i, i] = self.one
        return result

    def vector(self, values: Iterable[Any]) -> Vector:
        items = [self.coerce(v) for v in values]
        result = np.empty(len(items), dtype=object)
        for i, v in enumerate(items):
            result[i] = v
        return result

    def matrix(self, rows: Sequence[Sequence[Any]], n_rows: Optional[int] = None,
               n_cols: Optional[int] = None) -> Matrix:
        """Build a matrix from nested rows; shapes with a zero side need n_rows/n_cols."""
        n_rows = len(rows) if n_rows is None else n_rows
        if n_cols is None:
            n_cols = len(rows[0]) if rows else 0
        result = self.zeros(n_rows, n_cols)
        for i, row in enumerate(rows):
            if len(row) != n_cols:
                raise ValueError(f"row {i} has {len(row)} entries, expected {n_cols}")
            for j, value in enumerate(row):
                result[i, j] = self.coerce(value)
        return result


RATIONAL = FieldSpec.rational()


def is_zero(matrix: np.ndarray) -> bool:
    return all(x == 0 for x in matrix.flat)


def matmul(a: Matrix, b: Matrix, field: FieldSpec = RATIONAL) -> Matrix:
    """Exact matrix product; shapes with an empty inner dimension give a zero matrix."""
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch in product: {a.shape} x {b.shape}")
    if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        return field.zeros(a.shape[0], b.shape[1])
    return a.dot(b)


def matvec(a: Matrix, v: Vector, field: FieldSpec = RATIONAL) -> Vector:
    return matmul(a, v.reshape(-1, 1), field).reshape(-1)


def hstack(blocks: Sequence[Matrix], rows: int, field: FieldSpec = RATIONAL) -> Matrix:
    blocks = [b for b in blocks if b.shape[1] > 0]
    if not blocks:
        return field.zeros(rows, 0)
    return np.concatenate(blocks, axis=1)


def vstack(blocks: Sequence[Matrix], cols: int, field: FieldSpec = RATIONAL) -> Matrix:
    blocks = [b for b in blocks if b.shape[0] > 0]
    if not blocks:
        return field.zeros(0, cols)
    return np.concatenate(blocks, axis=0)


def block_diagonal(blocks: Sequence[Matrix], field: FieldSpec = RATIONAL) -> Matrix:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    result = field.zeros(rows, cols)
    r = c = 0
    for b in blocks:
        result[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return result


def kron(a: Matrix, b: Matrix, field: FieldSpec = RATIONAL) -> Matrix:
    rows_b, cols_b = b.shape
    result = field.zeros(a.shape[0] * rows_b, a.shape[1] * cols_b)
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            if a[i, j] != 0:
                result[i * rows_b:(i + 1) * rows_b, j * cols_b:(j + 1) * cols_b] = b * a[i, j]
    return result


def rref(matrix: Matrix) -> Tuple[Matrix, List[int]]:
    """
    Reduced row-echelon form by Gauss-Jordan elimination.

    Args:
        matrix: Matrix with exact entries

    Returns:
        Tuple of the reduced matrix (zero rows last) and the pivot columns
    """
    reduced = np.array(matrix, dtype=object, copy=True)
    rows, cols = reduced.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = next((i for i in range(r, rows) if reduced[i, c] != 0), None)
        if pivot is None:
            continue
        if pivot != r:
            reduced[[r, pivot]] = reduced[[pivot, r]]
        pivot_value = reduced[r, c]
        reduced[r] = reduced[r] / pivot_value
        for i in range(rows):
            factor = reduced[i, c]
            if i != r and factor != 0:
                reduced[i] = reduced[i] - reduced[r] * factor
        pivots.append(c)
        r += 1
    return reduced, pivots


def rank(matrix: Matrix) -> int:
    if matrix.shape[0] == 0 or matrix.shape[1] == 0:
        return 0
    return len(rref(matrix)[1])


def kernel_vectors(matrix: Matrix, field: FieldSpec = RATIONAL) -> Matrix:
    """Rows spanning {v : matrix v = 0}, one per free column."""
    rows, cols = matrix.shape
    if rows == 0:
        return field.identity(cols)
    reduced, pivots = rref(matrix)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = field.zeros(len(free), cols)
    for k, f in enumerate(free):
        basis[k, f] = field.one
        for i, p in enumerate(pivots):
            basis[k, p] = -reduced[i, f]
    return basis


def kernel_basis(matrix: Matrix, field: FieldSpec = RATIONAL) -> "Subspace":
    """Kernel of matrix as a Subspace of k^cols."""
    return Subspace.span(kernel_vectors(matrix, field), matrix.shape[1], field)


def solve(matrix: Matrix, b: Sequence[Any], field: FieldSpec = RATIONAL) -> Optional[Vector]:
    """Return some x with matrix x = b, or None when the system is inconsistent."""
    rows, cols = matrix.shape
    rhs = field.vector(b)
    if len(rhs) != rows:
        raise ValueError(f"right-hand side has length {len(rhs)}, expected {rows}")
    augmented = hstack([matrix, rhs.reshape(-1, 1)], rows, field)
    reduced, pivots = rref(augmented)
    if cols in pivots:
        return None
    x = field.vector([0] * cols)
    for i, p in enumerate(pivots):
        x[p] = reduced[i, cols]
    return x


def coordinates(basis: Matrix, vectors: Matrix, field: FieldSpec = RATIONAL) -> Matrix:
    """Solve basis X = vectors for a basis with independent columns."""
    n, k = basis.shape
    q = vectors.shape[1]
    if k == 0 or q == 0:
        if q and not is_zero(vectors):
            raise ValueError("vectors do not lie in the column span")
        return field.zeros(k, q)
    reduced, pivots = rref(hstack([basis, vectors], n, field))
    if pivots[:k] != list(range(k)) or any(p >= k for p in pivots):
        raise ValueError("vectors do not lie in the column span")
    return reduced[:k, k:]


def column_space(matrix: Matrix, field: FieldSpec = RATIONAL) -> Matrix:
    """Columns forming a basis of the image."""
    span = Subspace.span(matrix.T, matrix.shape[0], field)
    return np.array(span.basis.T, dtype=object).reshape(matrix.shape[0], span.dim)


def inverse(matrix: Matrix, field: FieldSpec = RATIONAL) -> Matrix:
    n = matrix.shape[0]
    if matrix.shape != (n, n):
        raise ValueError(f"cannot invert a {matrix.shape} matrix")
    if n == 0:
        return field.zeros(0, 0)
    reduced, pivots = rref(hstack([matrix, field.identity(n)], n, field))
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return reduced[:, n:]


def is_invertible(matrix: Matrix) -> bool:
    n = matrix.shape[0]
    return matrix.shape == (n, n) and rank(matrix) == n


def complement_indices(subspace_basis: Matrix, n: int, field: FieldSpec = RATIONAL) -> List[int]:
    """Greedy standard basis vectors completing the rows of subspace_basis to k^n."""
    current = Subspace.span(subspace_basis, n, field)
    chosen: List[int] = []
    for i in range(n):
        if current.dim == n:
            break
        unit = field.vector([0] * n)
        unit[i] = field.one
        if not current.contains(unit):
            chosen.append(i)
            current = current.sum(Subspace.span(unit.reshape(1, -1), n, field))
    return chosen


def spiral_coefficients(length: int, radius: int) -> Iterator[Tuple[int, ...]]:
    """
    Nonzero integer tuples ordered by max-norm, then by the value order
    0, 1, -1, 2, -2, ... in each coordinate.
    """
    for r in range(1, radius + 1):
        values = [0] + [v for k in range(1, r + 1) for v in (k, -k)]
        for combo in itertools.product(values, repeat=length):
            if max(abs(c) for c in combo) == r:
                yield combo


class Subspace:
    """Subspace of k^n held as a reduced row-echelon basis."""

    def __init__(self, ambient_dim: int, basis: Matrix, field: FieldSpec = RATIONAL):
        self.ambient_dim = ambient_dim
        self.field = field
        self.basis = basis
        self._pivots = [next(j for j in range(ambient_dim) if row[j] != 0) for row in basis]

    @classmethod
    def span(cls, vectors: Any, ambient_dim: int, field: FieldSpec = RATIONAL) -> "Subspace":
        rows = [list(v) for v in vectors]
        if not rows:
            return cls.zero(ambient_dim, field)
        matrix = field.matrix(rows, len(rows), ambient_dim)
        reduced, pivots = rref(matrix)
        return cls(ambient_dim, reduced[:len(pivots)], field)

    @classmethod
    def zero(cls, ambient_dim: int, field: FieldSpec = RATIONAL) -> "Subspace":
        return cls(ambient_dim, field.zeros(0, ambient_dim), field)

    @classmethod
    def full(cls, ambient_dim: int, field: FieldSpec = RATIONAL) -> "Subspace":
        return cls(ambient_dim, field.identity(ambient_dim), field)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def vectors(self) -> List[Tuple[Any, ...]]:
        return [tuple(row) for row in self.basis]

    def _check(self, other: "Subspace") -> None:
        if other.ambient_dim != self.ambient_dim:
            raise ValueError(f"ambient dimensions differ: {self.ambient_dim} != {other.ambient_dim}")

    def reduce(self, v: Sequence[Any]) -> Vector:
        residual = self.field.vector(v)
        if len(residual) != self.ambient_dim:
            raise ValueError(f"vector of length {len(residual)} in a {self.ambient_dim}-space")
        for row, p in zip(self.basis, self._pivots):
            if residual[p] != 0:
                residual = residual - row * residual[p]
        return residual

    def contains(self, v: Sequence[Any]) -> bool:
        return all(x == 0 for x in self.reduce(v))

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.contains(row) for row in other.basis)

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        stacked = vstack([self.basis, other.basis], self.ambient_dim, self.field)
        return Subspace.span(stacked, self.ambient_dim, self.field)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim, self.field)
        stacked = vstack([self.basis, -other.basis], self.ambient_dim, self.field)
        coefficients = kernel_vectors(stacked.T, self.field)
        vectors = [matvec(self.basis.T, c[:self.dim], self.field) for c in coefficients]
        return Subspace.span(vectors, self.ambient_dim, self.field)

    def restrict_to_coords(self, coords: Iterable[int]) -> "Subspace":
        """Vectors of this subspace supported inside coords (0-based)."""
        keep = set(coords)
        outside = [i for i in range(self.ambient_dim) if i not in keep]
        if self.dim == 0 or not outside:
            return self
        coefficients = kernel_vectors(self.basis[:, outside].T, self.field)
        vectors = [matvec(self.basis.T, c, self.field) for c in coefficients]
        return Subspace.span(vectors, self.ambient_dim, self.field)

    def annihilator(self) -> "Subspace":
        """{u : <w, u> = 0 for every w in the subspace}."""
        if self.dim == 0:
            return Subspace.full(self.ambient_dim, self.field)
        return kernel_basis(self.basis, self.field)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient_dim, self.field, self.vectors()) == (other.ambient_dim, other.field, other.vectors())

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.field, tuple(self.vectors())))

    def __repr__(self) -> str:
        rows = ", ".join("(" + ", ".join(self.field.format_scalar(x) for x in row) + ")" for row in self.basis)
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, basis=[{rows}])"


def contains(space: Subspace, v: Sequence[Any]) -> bool:
    return space.contains(v)


def intersect(s: Subspace, t: Subspace) -> Subspace:
    return s.intersect(t)


def subspace_sum(s: Subspace, t: Subspace) -> Subspace:
    return s.sum(t)


def restrict_to_coords(space: Subspace, coords: Iterable[int]) -> Subspace:
    return space.restrict_to_coords(coords)


def primitive_integer_vector(v: Sequence[Fraction]) -> Tuple[int, ...]:
    """Scale a rational vector to coprime integers with a positive leading entry."""
    values = [Fraction(x) for x in v]
    denominator = 1
    for x in values:
        denominator = denominator * x.denominator // math.gcd(denominator, x.denominator)
    integers = [int(x * denominator) for x in values]
    divisor = 0
    for x in integers:
        divisor = math.gcd(divisor, x)
    if divisor == 0:
        return tuple(integers)
    sign = -1 if next(x for x in integers if x != 0) < 0 else 1
    return tuple(sign * x // divisor for x in integers)
