"""Homologically persistent skeleta.

The skeleton is a minimal spanning d-tree plus every critical d-face (a
d-face outside the tree) whose class lives for a positive time. Deaths are
decided by sweeping the critical values: at each one the classes of the
living critical faces that become zero in H_d(Q_alpha, MST_alpha) are
found as a kernel, and the heaviest set of leading variables of that kernel
dies (the elder rule).
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Callable, Mapping, Sequence

from networkx.utils import UnionFind

from hopes.algebra import FieldMatrix, FieldSpec, leading_sets
from hopes.complex import Face, SimplicialComplex
from hopes.config import DEFAULT_EPSILON
from hopes.errors import InvalidArgument, VerificationFailure
from hopes.filtration import WeightedComplex, reduced_complex
from hopes.homology import PersistenceDiagram, relative_kernel
from hopes.spanning import SpanningTree, minimal_spanning_tree

logger = logging.getLogger(__name__)

LeadingSetChooser = Callable[[FieldMatrix, Sequence[float]], set]


class FaceKind(str, Enum):
    MST = "mst"
    CRITICAL = "critical"


@dataclass(frozen=True)
class Label:
    """Birth (left) and death (right) of a skeleton face; 0 <= left < right."""

    left: float
    right: float = math.inf

    def __post_init__(self):
        if not 0 <= self.left < self.right:
            raise InvalidArgument(f"invalid label ({self.left}, {self.right})")

    def precedes(self, other: Label) -> bool:
        """Information order: self carries less information than other."""
        return self.left <= other.left and self.right >= other.right

    def alive(self, alpha: float) -> bool:
        return self.left <= alpha < self.right

    @property
    def lifespan(self) -> float:
        return self.right - self.left


@dataclass(frozen=True)
class LabeledSkeleton:
    d: int
    vertex_count: int
    labels: Mapping[Face, Label]
    kinds: Mapping[Face, FaceKind]

    def __post_init__(self):
        object.__setattr__(self, "labels", MappingProxyType(dict(self.labels)))
        object.__setattr__(self, "kinds", MappingProxyType(dict(self.kinds)))
        if set(self.labels) != set(self.kinds):
            raise InvalidArgument("every labelled face needs a kind")

    @property
    def faces(self) -> list[Face]:
        return sorted(self.labels, key=lambda f: (f.dim, f))

    def critical(self) -> list[tuple[Face, Label]]:
        return sorted(
            ((f, self.labels[f]) for f, k in self.kinds.items() if k is FaceKind.CRITICAL),
            key=lambda item: (item[1].left, item[0]),
        )

    def reduced(self, alpha: float) -> SimplicialComplex:
        return SimplicialComplex(
            frozenset(f for f, label in self.labels.items() if label.alive(alpha)), self.vertex_count
        )

    def weight_at(self, alpha: float) -> float:
        """Total weight of the d-faces of the reduced skeleton at alpha."""
        return math.fsum(
            label.left for f, label in self.labels.items() if f.dim == self.d and label.alive(alpha)
        )

    def is_monotone(self) -> bool:
        for face, label in self.labels.items():
            for _, facet in face.facets():
                if facet not in self.labels or not self.labels[facet].precedes(label):
                    return False
        return True


def critical_faces(W: WeightedComplex, T: SpanningTree, d: int) -> list[tuple[Face, float]]:
    """d-faces of W outside the tree with their births, by (birth, vertices)."""
    return sorted(((f, W[f]) for f in W.faces_of_dim(d) if f not in T), key=lambda item: (item[1], item[0]))


def death_kernel(
    W: WeightedComplex, T: SpanningTree, field: FieldSpec, alpha: float, crit: Sequence[Face]
) -> FieldMatrix:
    """Kernel coefficients (one column per basis vector) of the step at alpha."""
    return relative_kernel(crit, T.reduced(alpha), reduced_complex(W, alpha), field)


def _vertex_deaths(W: WeightedComplex, crit: list[tuple[Face, float]]) -> dict[Face, float]:
    # same survivor as the greedy: least birth, then latest in critical order
    position = {face: i for i, (face, _) in enumerate(crit)}
    birth = dict(crit)
    edges = sorted(W.faces_of_dim(1), key=lambda e: (W[e], e))
    components = UnionFind()
    deaths: dict[Face, float] = {}
    next_edge = 0
    for alpha in W.critical_values:
        while next_edge < len(edges) and W[edges[next_edge]] <= alpha:
            components.union(*edges[next_edge].vertices)
            next_edge += 1
        groups = defaultdict(list)
        for face, b in crit:
            if b <= alpha and face not in deaths:
                groups[components[face.vertices[0]]].append(face)
        for members in groups.values():
            if len(members) < 2:
                continue
            survivor = max(members, key=lambda f: (-birth[f], position[f]))
            for face in members:
                if face != survivor:
                    deaths[face] = alpha
    return deaths


def assign_deaths(
    W: WeightedComplex,
    T: SpanningTree,
    d: int,
    field: FieldSpec,
    choose: LeadingSetChooser = leading_sets,
    fast_path: bool = True,
) -> dict[Face, float]:
    """Death time of every critical d-face (math.inf for survivors)."""
    crit = critical_faces(W, T, d)
    if d == 0 and fast_path and choose is leading_sets:
        deaths = _vertex_deaths(W, crit)
    else:
        deaths = {}
        for alpha in W.critical_values:
            alive = [(f, b) for f, b in crit if b <= alpha and f not in deaths]
            if not alive:
                continue
            kernel = death_kernel(W, T, field, alpha, [f for f, _ in alive])
            if kernel.cols == 0:
                continue
            chosen = choose(kernel.transpose(), [b for _, b in alive])
            logger.debug("alpha=%g: %d living, %d die", alpha, len(alive), len(chosen))
            for j in chosen:
                deaths[alive[j][0]] = alpha
    survivors = [f for f, _ in crit if f not in deaths]
    if d >= 1 and survivors:
        logger.warning("%d critical %d-faces never die; is the complex missing %d-faces?",
                       len(survivors), d, d + 1)
    for face in survivors:
        deaths[face] = math.inf
    return deaths


def assemble_skeleton(W: WeightedComplex, T: SpanningTree, deaths: Mapping[Face, float]) -> LabeledSkeleton:
    """Skeleton from a tree and any death assignment; lifespan-0 faces are left out."""
    labels: dict[Face, Label] = {}
    kinds: dict[Face, FaceKind] = {}
    for face, w in T.weights.items():
        labels[face] = Label(w)
        kinds[face] = FaceKind.MST
    for face, death in deaths.items():
        if death > W[face]:
            labels[face] = Label(W[face], death)
            kinds[face] = FaceKind.CRITICAL
    return LabeledSkeleton(T.d, W.vertex_count, labels, kinds)


def build_hopes(
    W: WeightedComplex,
    d: int,
    field: FieldSpec,
    tie_order: Sequence[Face] | None = None,
    seed: int | None = None,
) -> LabeledSkeleton:
    T = minimal_spanning_tree(W, d, field, tie_order, seed)
    deaths = assign_deaths(W, T, d, field)
    skeleton = assemble_skeleton(W, T, deaths)
    logger.info("skeleton in dimension %d: %d faces, %d critical", d, len(skeleton.labels),
                len(skeleton.critical()))
    return skeleton


def reduced_hopes(H: LabeledSkeleton, alpha: float) -> SimplicialComplex:
    """Faces whose label (l, r) satisfies l <= alpha < r."""
    return H.reduced(alpha)


def _close(a: float, b: float, tolerance: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tolerance


def diagram_correspondence(
    H: LabeledSkeleton, D: PersistenceDiagram, tolerance: float = DEFAULT_EPSILON
) -> list[tuple[Face, Label, tuple[float, float]]]:
    """Match critical labels with the dots of positive persistence.

    Raises VerificationFailure naming the first face or dot left unmatched.
    """
    if D.dimension != H.d:
        raise InvalidArgument(f"diagram of dimension {D.dimension} for a {H.d}-skeleton")
    labelled = sorted(H.critical(), key=lambda item: (item[1].left, item[1].right, item[0]))
    dots = sorted(dot for dot in D.dots if dot[1] > dot[0])
    matching = []
    for i in range(max(len(labelled), len(dots))):
        if i >= len(dots):
            face, label = labelled[i]
            raise VerificationFailure(f"{face} with label ({label.left}, {label.right}) has no dot", face=face)
        if i >= len(labelled):
            raise VerificationFailure(f"dot {dots[i]} has no critical face", dot=dots[i])
        face, label = labelled[i]
        p, q = dots[i]
        if not (_close(label.left, p, tolerance) and _close(label.right, q, tolerance)):
            raise VerificationFailure(
                f"{face} labelled ({label.left}, {label.right}) does not match dot ({p}, {q})",
                face=face,
                dot=dots[i],
            )
        matching.append((face, label, dots[i]))
    return matching


def check_labels(H: LabeledSkeleton, W: WeightedComplex, tolerance: float = DEFAULT_EPSILON):
    """Every left label is the face weight, deaths are critical values, labels are monotone."""
    allowed_deaths = set(W.critical_values)
    for face, label in H.labels.items():
        if face not in W:
            raise VerificationFailure(f"{face} is not a face of the weighted complex", face=face)
        if not _close(label.left, W[face], tolerance):
            raise VerificationFailure(f"{face} has left label {label.left}, weight {W[face]}", face=face)
        if H.kinds[face] is FaceKind.MST and not math.isinf(label.right):
            raise VerificationFailure(f"tree face {face} has finite right label", face=face)
        if math.isfinite(label.right) and not any(_close(label.right, v, tolerance) for v in allowed_deaths):
            raise VerificationFailure(f"{face} dies at {label.right}, not a critical value", face=face)
    if not H.is_monotone():
        raise VerificationFailure("labels are not monotone in the information order")
