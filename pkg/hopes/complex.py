"""Finite abstract simplicial complexes.

A face is the sorted tuple of its vertex ids; orientation, where a field of
characteristic other than 2 needs it, is read off that order by the homology
module. Complexes are immutable; build them with ``ComplexBuilder`` or the
constructors at the bottom of this module.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator

from hopes.errors import InvalidArgument

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Face:
    """A face given by its strictly increasing vertex ids."""

    vertices: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.vertices, tuple):
            object.__setattr__(self, "vertices", tuple(int(v) for v in self.vertices))
        if not self.vertices:
            raise InvalidArgument("a face needs at least one vertex")
        if any(v < 0 for v in self.vertices):
            raise InvalidArgument(f"negative vertex id in {self.vertices}")
        if any(a >= b for a, b in zip(self.vertices, self.vertices[1:])):
            raise InvalidArgument(f"vertices must be strictly increasing: {self.vertices}")

    @classmethod
    def of(cls, vertices: Iterable[int]) -> Face:
        """Face from vertex ids in any order."""
        ids = [int(v) for v in vertices]
        unique = sorted(set(ids))
        if len(unique) != len(ids):
            raise InvalidArgument(f"repeated vertex in {ids}")
        return cls(tuple(unique))

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def facets(self) -> Iterator[tuple[int, Face]]:
        """(omitted position, codimension-1 face) pairs, in position order."""
        if self.dim == 0:
            return
        for i in range(len(self.vertices)):
            yield i, Face(self.vertices[:i] + self.vertices[i + 1 :])

    def subfaces(self) -> Iterator[Face]:
        """All non-empty proper subfaces."""
        for size in range(1, len(self.vertices)):
            for vs in combinations(self.vertices, size):
                yield Face(vs)

    def issubset(self, other: Face) -> bool:
        return set(self.vertices) <= set(other.vertices)

    def __contains__(self, vertex: int) -> bool:
        return vertex in self.vertices

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self):
        return f"Face{self.vertices}"


@dataclass(frozen=True)
class SimplicialComplex:
    """An immutable downward closed set of faces on vertices 0..vertex_count-1."""

    faces: frozenset[Face]
    vertex_count: int
    _by_dim: dict[int, tuple[Face, ...]] = field(
        init=False, repr=False, compare=False, hash=False, default_factory=dict
    )

    def __post_init__(self):
        if self.vertex_count < 0:
            raise InvalidArgument("vertex_count must be non-negative")
        by_dim: dict[int, list[Face]] = {}
        for face in self.faces:
            if face.vertices[-1] >= self.vertex_count:
                raise InvalidArgument(f"{face} uses a vertex outside 0..{self.vertex_count - 1}")
            by_dim.setdefault(face.dim, []).append(face)
            for _, facet in face.facets():
                if facet not in self.faces:
                    raise InvalidArgument(f"{face} is missing subface {facet}")
        for k, faces in by_dim.items():
            self._by_dim[k] = tuple(sorted(faces))

    @classmethod
    def empty(cls, vertex_count: int = 0) -> SimplicialComplex:
        return cls(frozenset(), vertex_count)

    @property
    def dim(self) -> int:
        """Largest face dimension, -1 for the empty complex."""
        return max(self._by_dim, default=-1)

    def faces_of_dim(self, k: int) -> tuple[Face, ...]:
        """k-faces in canonical (lexicographic) order."""
        return self._by_dim.get(k, ())

    def f_vector(self) -> list[int]:
        return [len(self.faces_of_dim(k)) for k in range(self.dim + 1)]

    @cached_property
    def sorted_faces(self) -> tuple[Face, ...]:
        return tuple(f for k in range(self.dim + 1) for f in self.faces_of_dim(k))

    def issubset(self, other: SimplicialComplex) -> bool:
        return self.faces <= other.faces

    def union(self, other: SimplicialComplex) -> SimplicialComplex:
        return SimplicialComplex(self.faces | other.faces, max(self.vertex_count, other.vertex_count))

    def with_faces(self, faces: Iterable[Face]) -> SimplicialComplex:
        """This complex plus ``faces``; the result must still be closed."""
        builder = ComplexBuilder(self.vertex_count, strict=True)
        builder.add_all(self.sorted_faces)
        builder.add_all(sorted(faces, key=lambda f: (f.dim, f)))
        return builder.build()

    def without_faces(self, faces: Iterable[Face]) -> SimplicialComplex:
        """This complex minus ``faces``, which must be maximal among the removed set."""
        removed = set(faces)
        kept = self.faces - removed
        for face in kept:
            if any(sub in removed for _, sub in face.facets()):
                raise InvalidArgument(f"removing a subface of {face} breaks closure")
        return SimplicialComplex(frozenset(kept), self.vertex_count)

    def __contains__(self, face: Face) -> bool:
        return face in self.faces

    def __iter__(self) -> Iterator[Face]:
        return iter(self.sorted_faces)

    def __len__(self) -> int:
        return len(self.faces)

    def __repr__(self):
        return f"SimplicialComplex(vertices={self.vertex_count}, f={self.f_vector()})"


class ComplexBuilder:
    """Collects faces and enforces downward closure.

    In the default mode missing subfaces are inserted; with ``strict=True``
    a face whose subfaces are not all present yet raises InvalidArgument.
    """

    def __init__(self, vertex_count: int, strict: bool = False):
        self.vertex_count = vertex_count
        self.strict = strict
        self._faces: set[Face] = set()

    def add(self, face: Face | Iterable[int]):
        if not isinstance(face, Face):
            face = Face.of(list(face))
        if face in self._faces:
            return self
        if face.vertices[-1] >= self.vertex_count:
            raise InvalidArgument(f"{face} uses a vertex outside 0..{self.vertex_count - 1}")
        missing = [sub for _, sub in face.facets() if sub not in self._faces]
        if missing and self.strict:
            raise InvalidArgument(f"{face} is missing subface {missing[0]}")
        for sub in missing:
            self.add(sub)
        self._faces.add(face)
        return self

    def add_all(self, faces: Iterable[Face | Iterable[int]]):
        for face in faces:
            self.add(face)
        return self

    def build(self) -> SimplicialComplex:
        return SimplicialComplex(frozenset(self._faces), self.vertex_count)


def full_simplex(n_vertices: int, max_dim: int | None = None) -> SimplicialComplex:
    """All non-empty subsets of {0..n_vertices-1}, optionally only up to max_dim."""
    if n_vertices < 1:
        raise InvalidArgument(f"a simplex needs at least one vertex, got {n_vertices}")
    top = n_vertices - 1 if max_dim is None else min(max_dim, n_vertices - 1)
    faces = frozenset(
        Face(vs) for size in range(1, top + 2) for vs in combinations(range(n_vertices), size)
    )
    return SimplicialComplex(faces, n_vertices)


def skeleton(X: SimplicialComplex, k: int) -> SimplicialComplex:
    if k < 0:
        return SimplicialComplex.empty(X.vertex_count)
    return SimplicialComplex(frozenset(f for f in X.faces if f.dim <= k), X.vertex_count)


def euler_characteristic(X: SimplicialComplex) -> int:
    return sum((-1) ** k * n for k, n in enumerate(X.f_vector()))


def is_spanning(S: SimplicialComplex, X: SimplicialComplex, k: int) -> bool:
    """True when S contains the whole (k-1)-skeleton of X."""
    if not S.issubset(X):
        raise InvalidArgument("S is not a subcomplex of X")
    return all(set(X.faces_of_dim(i)) <= S.faces for i in range(k))


def star_tree(n: int, k: int, apex: int) -> SimplicialComplex:
    """The spanning k-tree of the n-simplex coning the (k-1)-skeleton from ``apex``.

    The n-simplex has n + 1 vertices. For k >= 1 the result holds every face
    of dimension below k plus the C(n, k) k-faces that contain the apex; the
    only 0-tree is the empty complex.
    """
    if not 0 <= apex <= n:
        raise InvalidArgument(f"apex {apex} is not a vertex of the {n}-simplex")
    if not 0 <= k <= n:
        raise InvalidArgument(f"k must lie in 0..{n}, got {k}")
    if k == 0:
        return SimplicialComplex.empty(n + 1)
    base = full_simplex(n + 1, max_dim=k - 1)
    others = [v for v in range(n + 1) if v != apex]
    cone = frozenset(Face.of((apex, *vs)) for vs in combinations(others, k))
    return SimplicialComplex(base.faces | cone, n + 1)
