"""Exact linear algebra over GF(p) and the rationals.

Matrices are dense numpy arrays: ``int64`` residues for GF(p) and ``object``
arrays of ``fractions.Fraction`` for Q. Everything is built on one routine,
``row_echelon``, which returns the reduced row echelon form together with its
pivot columns.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from sympy import isprime

from hopes.errors import InvalidArgument

logger = logging.getLogger(__name__)

# residues are multiplied in int64, so p * p must stay below 2**63
MAX_PRIME = 2**31

_to_fraction = np.frompyfunc(Fraction, 1, 1)


@dataclass(frozen=True)
class FieldSpec:
    """GF(p) for a prime ``characteristic``, the rationals when it is 0."""

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if p == 0:
            return
        if not isinstance(p, int) or not isprime(p):
            raise InvalidArgument(f"field characteristic must be prime, got {p}")
        if p >= MAX_PRIME:
            raise InvalidArgument(f"primes above {MAX_PRIME} are not supported")

    @classmethod
    def prime(cls, p: int) -> FieldSpec:
        return cls(int(p))

    @classmethod
    def rationals(cls) -> FieldSpec:
        return cls(0)

    @classmethod
    def parse(cls, text: str | int) -> FieldSpec:
        """'q' (or 'rational') for Q, otherwise a prime such as '2' or '3'."""
        token = str(text).strip().lower()
        if token in ("q", "rational", "rationals"):
            return cls.rationals()
        try:
            return cls.prime(int(token))
        except ValueError:
            raise InvalidArgument(f"unknown field {text!r}, expected a prime or 'q'") from None

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    @property
    def name(self) -> str:
        return "Q" if self.is_rational else f"GF({self.characteristic})"

    @property
    def dtype(self):
        return object if self.is_rational else np.int64

    def array(self, values) -> np.ndarray:
        """Coerce array-like integer (or rational) values into field elements."""
        if self.is_rational:
            arr = np.asarray(values, dtype=object)
            return arr.copy() if arr.size == 0 else np.asarray(_to_fraction(arr), dtype=object)
        return np.mod(np.asarray(values, dtype=np.int64), self.characteristic)

    def zeros(self, shape) -> np.ndarray:
        if self.is_rational:
            return np.full(shape, Fraction(0), dtype=object)
        return np.zeros(shape, dtype=np.int64)

    def normalize(self, arr: np.ndarray) -> np.ndarray:
        return arr if self.is_rational else np.mod(arr, self.characteristic)

    def inverse(self, x):
        if self.is_rational:
            return Fraction(1) / x
        return pow(int(x), -1, self.characteristic)

    def __str__(self):
        return self.name


class FieldMatrix:
    """A read-only dense matrix over a FieldSpec."""

    __slots__ = ("field", "_array")

    def __init__(self, entries, field: FieldSpec):
        arr = field.array(entries)
        if arr.ndim != 2:
            if arr.size:
                raise InvalidArgument(f"expected a 2-dimensional matrix, got shape {arr.shape}")
            arr = field.zeros((0, 0))
        arr.flags.writeable = False
        self.field = field
        self._array = arr

    @classmethod
    def zeros(cls, rows: int, cols: int, field: FieldSpec) -> FieldMatrix:
        return cls(field.zeros((rows, cols)), field)

    @classmethod
    def identity(cls, n: int, field: FieldSpec) -> FieldMatrix:
        return cls(np.eye(n, dtype=np.int64), field)

    @classmethod
    def from_columns(cls, columns: Sequence[np.ndarray], rows: int, field: FieldSpec) -> FieldMatrix:
        if not columns:
            return cls.zeros(rows, 0, field)
        return cls(np.column_stack(columns), field)

    @property
    def rows(self) -> int:
        return self._array.shape[0]

    @property
    def cols(self) -> int:
        return self._array.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._array.shape

    @property
    def array(self) -> np.ndarray:
        return self._array

    @property
    def entries(self) -> list[list]:
        return self._array.tolist()

    def column(self, j: int) -> np.ndarray:
        return self._array[:, j].copy()

    def take_columns(self, indices: Sequence[int]) -> FieldMatrix:
        return FieldMatrix(self._array[:, list(indices)].reshape(self.rows, len(indices)), self.field)

    def transpose(self) -> FieldMatrix:
        return FieldMatrix(self._array.T.copy(), self.field)

    T = property(transpose)

    def hstack(self, *others: FieldMatrix) -> FieldMatrix:
        blocks = [self._array] + [o._array for o in others]
        return FieldMatrix(np.hstack(blocks), self.field)

    def is_zero(self) -> bool:
        return not np.any(self._array != 0)

    def __matmul__(self, other: FieldMatrix) -> FieldMatrix:
        if self.cols != other.rows:
            raise InvalidArgument(f"cannot multiply {self.shape} by {other.shape}")
        # object dtype keeps GF(p) sums of products exact
        product = self._array.astype(object) @ other._array.astype(object)
        if product.size == 0:
            return FieldMatrix.zeros(self.rows, other.cols, self.field)
        if not self.field.is_rational:
            product = np.mod(product, self.field.characteristic).astype(np.int64)
        return FieldMatrix(product, self.field)

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and bool(np.all(self._array == other._array))
        )

    def __repr__(self):
        return f"FieldMatrix({self.rows}x{self.cols} over {self.field.name})"


def row_echelon(M: FieldMatrix) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of M and the list of its pivot columns."""
    field = M.field
    R = M.array.copy()
    m, n = R.shape
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        candidates = np.flatnonzero(R[row:, col] != 0)
        if candidates.size == 0:
            continue
        pivot = row + int(candidates[0])
        if pivot != row:
            R[[row, pivot]] = R[[pivot, row]]
        R[row] = field.normalize(R[row] * field.inverse(R[row, col]))
        for r in np.flatnonzero(R[:, col] != 0):
            if r != row:
                R[r] = field.normalize(R[r] - R[r, col] * R[row])
        pivots.append(col)
        row += 1
    return R, pivots


def rank(M: FieldMatrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    return len(row_echelon(M)[1])


def kernel_basis(M: FieldMatrix) -> FieldMatrix:
    """Columns spanning the null space of M; there are cols - rank(M) of them."""
    field = M.field
    n = M.cols
    R, pivots = row_echelon(M) if M.rows else (M.array, [])
    pivot_set = set(pivots)
    vectors = []
    for free in range(n):
        if free in pivot_set:
            continue
        v = field.zeros(n)
        v[free] = 1 if not field.is_rational else Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i, free]
        vectors.append(field.normalize(v))
    return FieldMatrix.from_columns(vectors, n, field)


def solve(M: FieldMatrix, b: Sequence) -> np.ndarray | None:
    """One solution x of M x = b (free variables set to 0), or None."""
    field = M.field
    rhs = field.array(np.asarray(b).reshape(M.rows, 1))
    R, pivots = row_echelon(M.hstack(FieldMatrix(rhs, field)))
    if M.cols in pivots:
        return None
    x = field.zeros(M.cols)
    for i, pc in enumerate(pivots):
        x[pc] = R[i, M.cols]
    return x


def leading_sets(C: FieldMatrix, candidate_weights: Sequence[float]) -> set[int]:
    """Heaviest column set on which the rows of C can be solved.

    C has independent rows; the feasible sets are the bases of its column
    matroid, so scanning columns by decreasing weight (lower index first on
    ties) and keeping those that raise the rank returns a basis of maximal
    total weight. The scan is a single echelon reduction of the reordered
    matrix: its pivots are exactly the columns that raised the rank.
    """
    if len(candidate_weights) != C.cols:
        raise InvalidArgument(f"{len(candidate_weights)} weights for {C.cols} columns")
    if C.rows == 0:
        return set()
    order = sorted(range(C.cols), key=lambda j: (-candidate_weights[j], j))
    _, pivots = row_echelon(C.take_columns(order))
    if len(pivots) != C.rows:
        raise InvalidArgument("rows of the coefficient matrix are dependent")
    return {order[p] for p in pivots}


class EchelonBasis:
    """Incrementally grown set of independent vectors.

    ``add`` reduces a vector against the stored ones in insertion order;
    each stored vector is normalised to 1 at its pivot and is already reduced
    at every earlier pivot, so one pass suffices.
    """

    def __init__(self, length: int, field: FieldSpec):
        self.length = length
        self.field = field
        self._vectors: list[tuple[int, np.ndarray]] = []

    @property
    def rank(self) -> int:
        return len(self._vectors)

    def reduce(self, vector) -> np.ndarray:
        field = self.field
        v = field.array(vector).copy()
        for pivot, basis_vector in self._vectors:
            if v[pivot] != 0:
                v = field.normalize(v - v[pivot] * basis_vector)
        return v

    def is_independent(self, vector) -> bool:
        return bool(np.any(self.reduce(vector) != 0))

    def add(self, vector) -> bool:
        """Store the vector if it is independent of the basis; report whether it was."""
        v = self.reduce(vector)
        nonzero = np.flatnonzero(v != 0)
        if nonzero.size == 0:
            return False
        pivot = int(nonzero[0])
        self._vectors.append((pivot, self.field.normalize(v * self.field.inverse(v[pivot]))))
        return True

    def copy(self) -> EchelonBasis:
        clone = EchelonBasis(self.length, self.field)
        clone._vectors = list(self._vectors)
        return clone
