"""Minimal spanning d-trees of a weighted simplex (greedy over weight classes)."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from hopes.algebra import EchelonBasis, FieldSpec
from hopes.complex import Face, SimplicialComplex
from hopes.errors import InvalidArgument
from hopes.filtration import WeightedComplex
from hopes.homology import ChainBasis, boundary_column

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpanningTree:
    """A minimal spanning d-tree: its faces with their weights."""

    d: int
    vertex_count: int
    weights: Mapping[Face, float]
    tie_order: tuple[Face, ...] = ()
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "weights", MappingProxyType(dict(self.weights)))

    @property
    def complex(self) -> SimplicialComplex:
        return SimplicialComplex(frozenset(self.weights), self.vertex_count)

    @property
    def d_faces(self) -> list[Face]:
        return sorted(f for f in self.weights if f.dim == self.d)

    @property
    def total_weight(self) -> float:
        return math.fsum(w for f, w in self.weights.items() if f.dim == self.d)

    def reduced(self, alpha: float) -> SimplicialComplex:
        return SimplicialComplex(
            frozenset(f for f, w in self.weights.items() if w <= alpha), self.vertex_count
        )

    def weight_at(self, alpha: float) -> float:
        return math.fsum(w for f, w in self.weights.items() if f.dim == self.d and w <= alpha)

    def __contains__(self, face: Face) -> bool:
        return face in self.weights


def shuffled_tie_order(W: WeightedComplex, d: int, seed: int) -> list[Face]:
    """A seeded permutation of the d-faces of W."""
    faces = list(W.faces_of_dim(d))
    order = np.random.default_rng(seed).permutation(len(faces))
    return [faces[i] for i in order]


def minimal_spanning_tree(
    W: WeightedComplex,
    d: int,
    field: FieldSpec,
    tie_order: Sequence[Face] | None = None,
    seed: int | None = None,
) -> SpanningTree:
    """Kruskal in dimension d.

    Weight classes are visited in increasing order; inside a class the
    d-faces follow ``tie_order`` (lexicographic by default). A d-face is kept
    when its boundary is independent of the boundaries already kept, which
    is the same as the d-th Betti number staying zero.
    """
    if d < 0:
        raise InvalidArgument(f"d must be non-negative, got {d}")
    if not W.is_complete(d):
        raise InvalidArgument(f"weighted complex is not complete up to dimension {d}")
    if d == 0:
        return SpanningTree(0, W.vertex_count, {}, (), seed)

    candidates = list(W.faces_of_dim(d))
    if tie_order is None:
        tie_order = candidates if seed is None else shuffled_tie_order(W, d, seed)
    elif sorted(tie_order) != candidates:
        raise InvalidArgument("tie_order must be a permutation of the d-faces")
    position = {face: i for i, face in enumerate(tie_order)}

    weights = {f: W[f] for f in W.complex if f.dim < d}
    rows = ChainBasis(d - 1, W.faces_of_dim(d - 1))
    basis = EchelonBasis(len(rows), field)
    target = math.comb(W.vertex_count - 1, d)
    for face in sorted(candidates, key=lambda f: (W[f], position[f])):
        if basis.rank == target:
            break
        if basis.add(boundary_column(face, rows, field)):
            weights[face] = W[face]
    logger.info("minimal spanning %d-tree over %s: %d faces, weight %g", d, field.name, basis.rank,
                math.fsum(W[f] for f in weights if f.dim == d))
    return SpanningTree(d, W.vertex_count, weights, tuple(tie_order), seed)


def reduced_mst(T: SpanningTree, alpha: float) -> SimplicialComplex:
    """MST_alpha: the faces of T of weight at most alpha."""
    return T.reduced(alpha)


def is_maximal_forest(T: SpanningTree, W: WeightedComplex, field: FieldSpec) -> bool:
    """True when no d-face of W outside T can be added without creating a d-cycle."""
    rows = ChainBasis(T.d - 1, W.faces_of_dim(T.d - 1))
    basis = EchelonBasis(len(rows), field)
    for face in T.d_faces:
        if not basis.add(boundary_column(face, rows, field)):
            return False
    return all(
        not basis.is_independent(boundary_column(face, rows, field))
        for face in W.faces_of_dim(T.d)
        if face not in T
    )
