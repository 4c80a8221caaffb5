"""Simplicial homology with field coefficients.

Boundary matrices are written in the canonical chain bases of a complex
(k-faces in lexicographic order); the entry for the facet that omits the
i-th vertex of a face is (-1)**i. Every predicate below reduces to rank
computations on such matrices.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING, Sequence

import numpy as np

from hopes.algebra import FieldMatrix, FieldSpec, kernel_basis, rank, row_echelon
from hopes.complex import Face, SimplicialComplex, is_spanning, skeleton
from hopes.errors import InvalidArgument

if TYPE_CHECKING:
    from hopes.filtration import WeightedComplex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChainBasis:
    """The k-faces of a complex in canonical order, a basis of its k-chains."""

    dimension: int
    faces: tuple[Face, ...]

    @classmethod
    def of(cls, X: SimplicialComplex, k: int) -> ChainBasis:
        return cls(k, X.faces_of_dim(k) if k >= 0 else ())

    @cached_property
    def index(self) -> dict[Face, int]:
        return {face: i for i, face in enumerate(self.faces)}

    def __len__(self) -> int:
        return len(self.faces)


def boundary_column(face: Face, rows: ChainBasis, field: FieldSpec) -> np.ndarray:
    """Coordinates of the boundary of ``face`` in the chain basis ``rows``."""
    column = np.zeros(len(rows), dtype=np.int64)
    for i, facet in face.facets():
        column[rows.index[facet]] = (-1) ** i
    return field.array(column)


def _boundary_block(columns: Sequence[Face], rows: ChainBasis, field: FieldSpec) -> FieldMatrix:
    block = np.zeros((len(rows), len(columns)), dtype=np.int64)
    for j, face in enumerate(columns):
        for i, facet in face.facets():
            block[rows.index[facet], j] = (-1) ** i
    return FieldMatrix(block, field)


def boundary_matrix(X: SimplicialComplex, k: int, field: FieldSpec) -> FieldMatrix:
    """Matrix of the k-th boundary map from C_k(X) to C_{k-1}(X)."""
    return _boundary_block(ChainBasis.of(X, k).faces, ChainBasis.of(X, k - 1), field)


def betti(X: SimplicialComplex, k: int, field: FieldSpec) -> int:
    if k < 0:
        return 0
    n_k = len(X.faces_of_dim(k))
    return n_k - rank(boundary_matrix(X, k, field)) - rank(boundary_matrix(X, k + 1, field))


def _relative_boundary(X: SimplicialComplex, A: SimplicialComplex, k: int, field: FieldSpec) -> FieldMatrix:
    columns = [f for f in ChainBasis.of(X, k).faces if f not in A]
    full_rows = ChainBasis.of(X, k - 1)
    block = _boundary_block(columns, full_rows, field)
    keep = [i for i, f in enumerate(full_rows.faces) if f not in A]
    return FieldMatrix(block.array[keep, :].reshape(len(keep), len(columns)), field)


def relative_betti(X: SimplicialComplex, A: SimplicialComplex, k: int, field: FieldSpec) -> int:
    """Dimension of H_k(X, A) for a subcomplex A of X."""
    if not A.issubset(X):
        raise InvalidArgument("A is not a subcomplex of X")
    if k < 0:
        return 0
    n_k = sum(1 for f in X.faces_of_dim(k) if f not in A)
    return n_k - rank(_relative_boundary(X, A, k, field)) - rank(_relative_boundary(X, A, k + 1, field))


def is_forest(S: SimplicialComplex, d: int, field: FieldSpec) -> bool:
    if S.dim > d:
        raise InvalidArgument(f"complex of dimension {S.dim} is not a {d}-subcomplex")
    return betti(S, d, field) == 0


def is_tree(S: SimplicialComplex, d: int, field: FieldSpec) -> bool:
    if not is_forest(S, d, field):
        return False
    if d == 0:
        return len(S) == 0
    if d == 1:
        return betti(S, 0, field) == 1
    return betti(S, d - 1, field) == 0


def induced_rank(S: SimplicialComplex, X: SimplicialComplex, i: int, field: FieldSpec) -> int:
    """Rank of the map H_i(S) -> H_i(X) induced by inclusion.

    Cycles of S are written in the i-chains of X; the rank of the map is how
    much they add to the span of the boundaries of X.
    """
    cycles = kernel_basis(boundary_matrix(S, i, field))
    rows = ChainBasis.of(X, i)
    embedded = field.zeros((len(rows), cycles.cols))
    for r, face in enumerate(ChainBasis.of(S, i).faces):
        embedded[rows.index[face], :] = cycles.array[r, :]
    boundaries = boundary_matrix(X, i + 1, field)
    return rank(boundaries.hstack(FieldMatrix(embedded, field))) - rank(boundaries)


def is_fitting(S: SimplicialComplex, X: SimplicialComplex, k: int, field: FieldSpec) -> bool:
    """True when inclusion induces isomorphisms on H_i for every i <= k."""
    if not S.issubset(X):
        raise InvalidArgument("S is not a subcomplex of X")
    for i in range(k + 1):
        b = betti(X, i, field)
        if betti(S, i, field) != b or induced_rank(S, X, i, field) != b:
            return False
    return True


def extract_fitting_forest(S: SimplicialComplex, d: int, field: FieldSpec) -> SimplicialComplex:
    """Drop one d-face per independent d-cycle of S.

    The dropped faces are the pivot columns of an echelon form of a cycle
    basis; the remaining d-faces are then a basis of the column matroid of
    the d-th boundary map, so the result has no d-cycles and keeps
    beta_{d-1}.
    """
    if S.dim > d:
        raise InvalidArgument(f"complex of dimension {S.dim} is not a {d}-subcomplex")
    cycles = kernel_basis(boundary_matrix(S, d, field))
    if cycles.cols == 0:
        return S
    _, pivots = row_echelon(cycles.transpose())
    faces = S.faces_of_dim(d)
    removed = [faces[p] for p in pivots]
    logger.debug("removing %d leading %d-faces: %s", len(removed), d, removed)
    return S.without_faces(removed)


def find_connecting_face(
    S: SimplicialComplex, X: SimplicialComplex, k: int, field: FieldSpec
) -> Face | None:
    """A k-face of X outside S that lowers beta_{k-1}(S) by one and keeps beta_k.

    None when S already has the (k-1)-homology of X.
    """
    if not is_spanning(S, X, k):
        raise InvalidArgument(f"S is not {k}-spanning in X")
    before_low = betti(S, k - 1, field)
    if before_low <= betti(X, k - 1, field):
        return None
    before_top = betti(S, k, field)
    for face in X.faces_of_dim(k):
        if face in S:
            continue
        grown = S.with_faces([face])
        if betti(grown, k, field) == before_top and betti(grown, k - 1, field) == before_low - 1:
            return face
    return None


def face_count_identity(
    S: SimplicialComplex, X: SimplicialComplex, k: int, field: FieldSpec
) -> tuple[int, int]:
    """Both sides of #k(X) + b_{k-1}(X^k) - b_k(X^k) = #k(S) + b_{k-1}(S) - b_k(S)."""
    if S.dim > k or not is_spanning(S, X, k):
        raise InvalidArgument(f"S is not a {k}-spanning {k}-subcomplex of X")
    Xk = skeleton(X, k)
    lhs = len(X.faces_of_dim(k)) + betti(Xk, k - 1, field) - betti(Xk, k, field)
    rhs = len(S.faces_of_dim(k)) + betti(S, k - 1, field) - betti(S, k, field)
    return lhs, rhs


def relative_kernel(
    crit: Sequence[Face], T: SimplicialComplex, Q: SimplicialComplex, field: FieldSpec
) -> FieldMatrix:
    """Kernel of H_d(T + crit, T) -> H_d(Q, T) in the coordinates [K_1], ..., [K_s].

    A coefficient vector c lies in the kernel when sum c_i K_i is a boundary
    of Q plus a chain of T. Both conditions sit in one block matrix
    [boundary_{d+1}(Q) | T indicators | crit indicators]; its kernel,
    projected on the crit block, is the answer.
    """
    if not crit:
        return FieldMatrix.zeros(0, 0, field)
    if not T.issubset(Q):
        raise InvalidArgument("T is not a subcomplex of Q")
    d = crit[0].dim
    if len(set(crit)) != len(crit):
        raise InvalidArgument("critical faces must be distinct")
    for face in crit:
        if face.dim != d:
            raise InvalidArgument(f"{face} is not a {d}-face")
        if face not in Q or face in T:
            raise InvalidArgument(f"{face} must be a face of Q outside T")
        if any(facet not in T for _, facet in face.facets()):
            raise InvalidArgument(f"the boundary of {face} is not contained in T")

    rows = ChainBasis.of(Q, d)
    bounding = boundary_matrix(Q, d + 1, field)
    tree_faces = [f for f in rows.faces if f in T]
    columns = []
    for face in [*tree_faces, *crit]:
        column = np.zeros(len(rows), dtype=np.int64)
        column[rows.index[face]] = 1
        columns.append(column)
    indicators = FieldMatrix(np.column_stack(columns), field)
    kernel = kernel_basis(bounding.hstack(indicators))
    offset = bounding.cols + len(tree_faces)
    projected = FieldMatrix(kernel.array[offset:, :].reshape(len(crit), kernel.cols), field)
    if projected.cols == 0:
        return FieldMatrix.zeros(len(crit), 0, field)
    reduced, pivots = row_echelon(projected.transpose())
    return FieldMatrix(reduced[: len(pivots)].T.reshape(len(crit), len(pivots)), field)


@dataclass(frozen=True)
class PersistenceDiagram:
    """Dots (birth, death) of d-dimensional classes; death may be math.inf."""

    dimension: int
    dots: tuple[tuple[float, float], ...]

    def finite(self) -> list[tuple[float, float]]:
        return [dot for dot in self.dots if math.isfinite(dot[1])]

    def essential(self) -> list[tuple[float, float]]:
        return [dot for dot in self.dots if not math.isfinite(dot[1])]

    def births(self) -> list[float]:
        return [p for p, _ in self.dots]

    def __len__(self) -> int:
        return len(self.dots)

    def __iter__(self):
        return iter(self.dots)


def persistence_diagram(W: WeightedComplex, d: int, field: FieldSpec) -> PersistenceDiagram:
    """Sublevel persistence of W in dimension d by standard column reduction.

    Faces are ordered by (weight, dimension, vertices). Only faces up to
    dimension d + 1 matter. Dots with zero persistence are dropped.
    """
    faces = sorted((f for f in W.complex if f.dim <= d + 1), key=W.filtration_key)
    index = {face: i for i, face in enumerate(faces)}
    n = len(faces)
    matrix = np.zeros((n, n), dtype=np.int64)
    for j, face in enumerate(faces):
        for i, facet in face.facets():
            matrix[index[facet], j] = (-1) ** i
    R = field.array(matrix) if n else field.zeros((0, 0))

    low_to_column: dict[int, int] = {}
    for j in range(n):
        while True:
            nonzero = np.flatnonzero(R[:, j] != 0)
            if nonzero.size == 0:
                break
            low = int(nonzero[-1])
            k = low_to_column.get(low)
            if k is None:
                low_to_column[low] = j
                break
            # reduce the factor first so factor * R[:, k] stays below p**2
            factor = field.normalize(np.asarray(R[low, j] * field.inverse(R[low, k])))
            R[:, j] = field.normalize(R[:, j] - factor * R[:, k])

    dots = []
    for low, j in low_to_column.items():
        if faces[low].dim == d:
            birth, death = W[faces[low]], W[faces[j]]
            if death > birth:
                dots.append((birth, death))
    paired_columns = set(low_to_column.values())
    for j, face in enumerate(faces):
        if face.dim == d and j not in paired_columns and j not in low_to_column:
            dots.append((W[face], math.inf))
    logger.debug("diagram in dimension %d over %s: %d dots", d, field.name, len(dots))
    return PersistenceDiagram(d, tuple(sorted(dots)))
