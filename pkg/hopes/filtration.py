"""Point clouds and the weighted complexes built on them.

A WeightedComplex is the truncated weighted simplex: every face up to some
dimension carries a non-negative weight, monotone under inclusion. Weights
that differ by at most ``epsilon`` are snapped to a common value when the
complex is built, so later code compares weights exactly.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

import numpy as np
from scipy.spatial.distance import pdist, squareform

from hopes.algebra import FieldMatrix, FieldSpec, solve
from hopes.complex import ComplexBuilder, Face, SimplicialComplex, full_simplex
from hopes.config import DEFAULT_EPSILON, DEFAULT_MARGIN
from hopes.errors import InvalidArgument, UnsupportedInput

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PointCloud:
    """A finite metric space: a distance matrix and, optionally, coordinates."""

    distances: np.ndarray
    coordinates: np.ndarray | None = None

    @classmethod
    def from_coordinates(cls, points) -> PointCloud:
        coords = np.asarray(points, dtype=float)
        if coords.ndim == 1:
            coords = coords.reshape(-1, 1)
        if coords.ndim != 2 or coords.shape[0] == 0:
            raise InvalidArgument("a point cloud needs at least one point")
        if not np.all(np.isfinite(coords)):
            raise InvalidArgument("coordinates must be finite")
        return cls(squareform(pdist(coords)), coords)

    @classmethod
    def from_distance_matrix(cls, matrix) -> PointCloud:
        D = np.asarray(matrix, dtype=float)
        if D.ndim != 2 or D.shape[0] != D.shape[1] or D.shape[0] == 0:
            raise InvalidArgument(f"distance matrix must be square and non-empty, got shape {D.shape}")
        if np.any(D < 0) or not np.all(np.isfinite(D)):
            raise InvalidArgument("distances must be finite and non-negative")
        if np.any(np.diag(D) != 0):
            raise InvalidArgument("distance matrix must have a zero diagonal")
        if not np.allclose(D, D.T, rtol=0, atol=1e-12):
            raise InvalidArgument("distance matrix must be symmetric")
        return cls(D)

    @property
    def size(self) -> int:
        return self.distances.shape[0]

    @property
    def has_coordinates(self) -> bool:
        return self.coordinates is not None


def snap_weights(weights: Mapping[Face, float], epsilon: float) -> dict[Face, float]:
    """Replace each weight by the smallest value of its epsilon-chained group."""
    values = sorted(set(weights.values()))
    representative: dict[float, float] = {}
    start = previous = None
    for value in values:
        if previous is None or value - previous > epsilon:
            start = value
        representative[value] = start
        previous = value
    return {face: representative[w] for face, w in weights.items()}


@dataclass(frozen=True)
class WeightedComplex:
    """A simplicial complex with a monotone non-negative weight on each face."""

    complex: SimplicialComplex
    weights: Mapping[Face, float]
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        object.__setattr__(self, "weights", MappingProxyType({f: float(w) for f, w in self.weights.items()}))
        if set(self.weights) != set(self.complex.faces):
            raise InvalidArgument("weights must be given for exactly the faces of the complex")
        for face, w in self.weights.items():
            if not w >= 0:
                raise InvalidArgument(f"{face} has negative or undefined weight {w}")
            for _, facet in face.facets():
                if self.weights[facet] > w:
                    raise InvalidArgument(
                        f"weights are not monotone: {facet} weighs {self.weights[facet]} > {w} of {face}"
                    )

    @classmethod
    def build(
        cls,
        weights: Mapping[Face, float],
        vertex_count: int,
        epsilon: float = DEFAULT_EPSILON,
        strict: bool = True,
    ) -> WeightedComplex:
        """Snap weights and build the complex; strict mode rejects missing subfaces."""
        builder = ComplexBuilder(vertex_count, strict=strict)
        builder.add_all(sorted(weights, key=lambda f: (f.dim, f)))
        complex_ = builder.build()
        missing = complex_.faces - set(weights)
        if missing:
            raise InvalidArgument(f"no weight given for {sorted(missing)[0]}")
        return cls(complex_, snap_weights(weights, epsilon), epsilon)

    @property
    def vertex_count(self) -> int:
        return self.complex.vertex_count

    @property
    def max_dim(self) -> int:
        return self.complex.dim

    def __getitem__(self, face: Face) -> float:
        return self.weights[face]

    def weight(self, face: Face) -> float:
        return self.weights[face]

    def __contains__(self, face: Face) -> bool:
        return face in self.weights

    def __iter__(self) -> Iterator[Face]:
        return iter(self.complex)

    def faces_of_dim(self, k: int) -> tuple[Face, ...]:
        return self.complex.faces_of_dim(k)

    def filtration_key(self, face: Face) -> tuple:
        return (self.weights[face], face.dim, face.vertices)

    @cached_property
    def critical_values(self) -> tuple[float, ...]:
        return tuple(sorted(set(self.weights.values())))

    @property
    def max_weight(self) -> float:
        return self.critical_values[-1] if self.critical_values else 0.0

    def total_weight(self, faces: Iterable[Face]) -> float:
        return math.fsum(self.weights[f] for f in faces)

    def is_complete(self, k: int) -> bool:
        """True when every face of the full simplex up to dimension k is present."""
        n = self.vertex_count
        return all(len(self.faces_of_dim(j)) == math.comb(n, j + 1) for j in range(min(k, n - 1) + 1))


def _face_points(face: Face) -> list[int]:
    return list(face.vertices)


def vr_weights(cloud: PointCloud, max_dim: int, epsilon: float = DEFAULT_EPSILON) -> WeightedComplex:
    """Vietoris-Rips weighting: half the largest pairwise distance in a face."""
    if cloud.size == 0:
        raise InvalidArgument("empty point cloud")
    if max_dim < 1:
        raise InvalidArgument(f"max_dim must be at least 1, got {max_dim}")
    D = cloud.distances
    weights = {}
    for face in full_simplex(cloud.size, max_dim):
        idx = _face_points(face)
        weights[face] = 0.5 * float(D[np.ix_(idx, idx)].max()) if face.dim else 0.0
    return WeightedComplex.build(weights, cloud.size, epsilon)


def _circumball(support: list[np.ndarray], exact: bool):
    """Smallest ball with every support point on its boundary, or None for no points."""
    if not support:
        return None
    p0 = support[0]
    if len(support) == 1:
        return p0, (Fraction(0) if exact else 0.0)
    A = np.array([p - p0 for p in support[1:]], dtype=object if exact else float)
    gram = A @ A.T
    rhs = np.array([np.dot(row, row) / 2 for row in A], dtype=object if exact else float)
    if exact:
        lam = solve(FieldMatrix(gram, FieldSpec.rationals()), rhs)
        if lam is None:
            raise InvalidArgument("support points of an enclosing ball are not cospherical")
    else:
        lam = np.linalg.lstsq(gram.astype(float), rhs.astype(float), rcond=None)[0]
    centre = p0 + A.T @ lam
    offset = centre - p0
    return centre, np.dot(offset, offset)


def _contains(ball, point: np.ndarray, exact: bool) -> bool:
    if ball is None:
        return False
    centre, r2 = ball
    offset = point - centre
    dist2 = np.dot(offset, offset)
    if exact:
        return dist2 <= r2
    return dist2 <= r2 + 1e-12 * (1.0 + r2)


def _welzl(points: list[np.ndarray], support: list[np.ndarray], ambient: int, exact: bool):
    if not points or len(support) == ambient + 1:
        return _circumball(support, exact)
    p, rest = points[-1], points[:-1]
    ball = _welzl(rest, support, ambient, exact)
    if _contains(ball, p, exact):
        return ball
    return _welzl(rest, support + [p], ambient, exact)


def minimal_enclosing_ball(points, exact: bool = True) -> tuple[np.ndarray, float | Fraction]:
    """Centre and squared radius of the smallest ball containing ``points``.

    With ``exact`` every coordinate is taken as the rational number its
    float stores and the ball is computed over Fraction; otherwise in
    floating point with a small containment tolerance.
    """
    coords = np.asarray(points, dtype=float)
    if coords.ndim != 2 or coords.shape[0] == 0:
        raise InvalidArgument("need a non-empty (n, N) array of points")
    if not np.all(np.isfinite(coords)):
        raise InvalidArgument("coordinates must be finite")
    if exact:
        rows = [np.array([Fraction(float(x)) for x in row], dtype=object) for row in coords]
    else:
        rows = [row for row in coords]
    return _welzl(rows, [], coords.shape[1], exact)


def cech_weights(cloud: PointCloud, max_dim: int, epsilon: float = DEFAULT_EPSILON) -> WeightedComplex:
    """Cech weighting: radius of the minimal enclosing ball of a face."""
    if not cloud.has_coordinates:
        raise UnsupportedInput("Cech weights need coordinates, not only a distance matrix")
    if max_dim < 1:
        raise InvalidArgument(f"max_dim must be at least 1, got {max_dim}")
    weights = {}
    for face in full_simplex(cloud.size, max_dim):
        if face.dim == 0:
            weights[face] = 0.0
            continue
        _, r2 = minimal_enclosing_ball(cloud.coordinates[_face_points(face)])
        weights[face] = math.sqrt(float(r2))
    return WeightedComplex.build(weights, cloud.size, epsilon)


def reduced_complex(W: WeightedComplex, alpha: float) -> SimplicialComplex:
    """Q_alpha: the faces of weight at most alpha."""
    return SimplicialComplex(frozenset(f for f, w in W.weights.items() if w <= alpha), W.vertex_count)


def critical_values(W: WeightedComplex) -> list[float]:
    return list(W.critical_values)


def complete_to_simplex(
    W: WeightedComplex, max_dim: int | None = None, margin: float = DEFAULT_MARGIN
) -> WeightedComplex:
    """Add the missing faces up to ``max_dim``, heavier than everything present."""
    n = W.vertex_count
    top = W.max_dim if max_dim is None else max_dim
    heavy = W.max_weight * (1 + margin) if W.max_weight > 0 else margin
    weights = dict(W.weights)
    added = 0
    for size in range(1, min(top, n - 1) + 2):
        for vs in combinations(range(n), size):
            face = Face(vs)
            if face not in weights:
                weights[face] = heavy
                added += 1
    if not added:
        return W
    logger.warning("completed the weighted complex with %d faces of weight %g", added, heavy)
    return WeightedComplex.build(weights, n, W.epsilon)
