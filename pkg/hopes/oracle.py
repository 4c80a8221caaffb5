"""Exhaustive ground truth for small instances.

The search runs only over d-faces: every candidate contains the whole
(d-1)-skeleton of Q, and by the face-count formula a fitting candidate has a
fixed number of d-faces, so only subsets of that size are visited. Subsets
are grown in increasing weight order with a branch-and-bound cut, and every
complete candidate is rechecked with the full homology predicates.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import asdict, dataclass, field as dataclass_field
from itertools import combinations
from typing import Callable, Iterator, Sequence

import numpy as np
import pandas as pd

from hopes.algebra import EchelonBasis, FieldSpec, leading_sets, rank
from hopes.complex import Face, SimplicialComplex, full_simplex, skeleton
from hopes.config import DEFAULT_MAX_D_FACES
from hopes.errors import Infeasible, InvalidArgument, ResourceLimit, VerificationFailure
from hopes.filtration import PointCloud, WeightedComplex, reduced_complex
from hopes.homology import (
    ChainBasis,
    betti,
    boundary_column,
    boundary_matrix,
    is_fitting,
    is_forest,
    persistence_diagram,
)
from hopes.skeleton import (
    LabeledSkeleton,
    assemble_skeleton,
    assign_deaths,
    check_labels,
    critical_faces,
    death_kernel,
    diagram_correspondence,
)
from hopes.spanning import SpanningTree, minimal_spanning_tree

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchBudget:
    max_d_faces: int = DEFAULT_MAX_D_FACES
    timeout: float | None = None  # seconds per search

    def __post_init__(self):
        if self.max_d_faces < 0:
            raise InvalidArgument(f"max_d_faces must be non-negative, got {self.max_d_faces}")
        if self.timeout is not None and self.timeout <= 0:
            raise InvalidArgument(f"timeout must be positive, got {self.timeout}")

    def check(self, count: int):
        if count > self.max_d_faces:
            raise ResourceLimit(f"{count} candidate faces exceed the budget of {self.max_d_faces}")

    def deadline(self) -> float | None:
        return None if self.timeout is None else time.monotonic() + self.timeout


@dataclass(frozen=True)
class OracleResult:
    weight: float
    witness: SimplicialComplex


def enumerate_spanning_subcomplexes(
    Q: SimplicialComplex, d: int, budget: SearchBudget = SearchBudget(), size: int | None = None
) -> Iterator[SimplicialComplex]:
    """skeleton(Q, d-1) plus each subset of the d-faces of Q (of one size if given)."""
    base = skeleton(Q, d - 1)
    faces = Q.faces_of_dim(d)
    budget.check(len(faces))
    sizes = range(len(faces) + 1) if size is None else [size]
    for r in sizes:
        for chosen in combinations(faces, r):
            yield SimplicialComplex(base.faces | frozenset(chosen), Q.vertex_count)


def _branch_and_bound(
    Q: SimplicialComplex,
    d: int,
    field: FieldSpec,
    W: WeightedComplex,
    target: int,
    max_dependent: int,
    accept: Callable[[SimplicialComplex], bool],
    budget: SearchBudget,
) -> OracleResult:
    faces = sorted(Q.faces_of_dim(d), key=lambda f: (W[f], f))
    budget.check(len(faces))
    base = skeleton(Q, d - 1)
    weights = [W[f] for f in faces]
    prefix = np.concatenate([[0.0], np.cumsum(weights)])
    rows = ChainBasis.of(Q, d - 1)
    columns = [boundary_column(f, rows, field) for f in faces]
    deadline = budget.deadline()
    best: list = [math.inf, None]
    visited = 0

    def visit(i: int, chosen: list[Face], total: float, basis: EchelonBasis, dependent: int):
        nonlocal visited
        visited += 1
        if deadline is not None and time.monotonic() > deadline:
            raise ResourceLimit(f"search timed out after {budget.timeout} s")
        need = target - len(chosen)
        if need == 0:
            if total < best[0]:
                candidate = SimplicialComplex(base.faces | frozenset(chosen), Q.vertex_count)
                if accept(candidate):
                    best[0], best[1] = total, candidate
            return
        if len(faces) - i < need or total + prefix[i + need] - prefix[i] >= best[0]:
            return
        grown = basis.copy()
        independent = grown.add(columns[i])
        if independent or dependent < max_dependent:
            visit(i + 1, chosen + [faces[i]], total + weights[i], grown, dependent + (not independent))
        visit(i + 1, chosen, total, basis, dependent)

    visit(0, [], 0.0, EchelonBasis(len(rows), field), 0)
    logger.debug("oracle visited %d nodes over %d %d-faces", visited, len(faces), d)
    if best[1] is None:
        raise Infeasible(f"no admissible {d}-subcomplex with {target} {d}-faces")
    witness = best[1]
    return OracleResult(W.total_weight(witness.faces_of_dim(d)), witness)


def min_fitting_forest(
    Q: SimplicialComplex, d: int, field: FieldSpec, W: WeightedComplex, budget: SearchBudget = SearchBudget()
) -> OracleResult:
    """Lightest (d-1)-fitting d-spanning d-forest of Q."""
    target = rank(boundary_matrix(Q, d, field))

    def accept(S: SimplicialComplex) -> bool:
        return is_forest(S, d, field) and is_fitting(S, Q, d - 1, field)

    return _branch_and_bound(Q, d, field, W, target, 0, accept, budget)


def min_fitting_subcomplex(
    Q: SimplicialComplex, d: int, field: FieldSpec, W: WeightedComplex, budget: SearchBudget = SearchBudget()
) -> OracleResult:
    """Lightest d-fitting d-spanning d-subcomplex of Q."""
    # rank of the boundary is forced, so exactly beta_d(Q) chosen faces close a cycle
    cycles = betti(Q, d, field)
    target = rank(boundary_matrix(Q, d, field)) + cycles

    def accept(S: SimplicialComplex) -> bool:
        return is_fitting(S, Q, d, field)

    return _branch_and_bound(Q, d, field, W, target, cycles, accept, budget)


@dataclass(frozen=True)
class DeathAssignment:
    deaths: dict[Face, float]
    follows_elder_rule: bool


def _leading_choices(kernel, births: Sequence[float]) -> Iterator[tuple[tuple[int, ...], bool]]:
    coefficients = kernel.transpose()
    r = coefficients.rows
    best = math.fsum(births[j] for j in leading_sets(coefficients, births))
    for subset in combinations(range(coefficients.cols), r):
        if rank(coefficients.take_columns(subset)) == r:
            total = math.fsum(births[j] for j in subset)
            yield subset, math.isclose(total, best, rel_tol=0, abs_tol=1e-12)


def enumerate_death_assignments(
    W: WeightedComplex, T: SpanningTree, d: int, field: FieldSpec
) -> Iterator[DeathAssignment]:
    """Every death assignment reachable by picking any valid leading set at each critical value."""
    crit = critical_faces(W, T, d)
    alphas = W.critical_values

    def sweep(step: int, deaths: dict[Face, float], elder: bool):
        if step == len(alphas):
            final = dict(deaths)
            for face, _ in crit:
                final.setdefault(face, math.inf)
            yield DeathAssignment(final, elder)
            return
        alpha = alphas[step]
        alive = [(f, b) for f, b in crit if b <= alpha and f not in deaths]
        kernel = death_kernel(W, T, field, alpha, [f for f, _ in alive]) if alive else None
        if kernel is None or kernel.cols == 0:
            yield from sweep(step + 1, deaths, elder)
            return
        for subset, heaviest in _leading_choices(kernel, [b for _, b in alive]):
            grown = dict(deaths)
            for j in subset:
                grown[alive[j][0]] = alpha
            yield from sweep(step + 1, grown, elder and heaviest)

    yield from sweep(0, {}, True)


@dataclass(frozen=True)
class VerificationRow:
    alpha: float
    mst_weight: float
    oracle_forest_weight: float
    hopes_weight: float
    oracle_subcomplex_weight: float
    fitting: bool
    status: str


@dataclass(frozen=True)
class VerificationReport:
    d: int
    field: FieldSpec
    rows: list[VerificationRow] = dataclass_field(default_factory=list)
    correspondence_error: str | None = None

    @property
    def ok(self) -> bool:
        return self.correspondence_error is None and all(row.status == "ok" for row in self.rows)

    def failures(self) -> list[VerificationRow]:
        return [row for row in self.rows if row.status != "ok"]

    def to_frame(self) -> pd.DataFrame:
        columns = ["alpha", "mst_weight", "oracle_forest_weight", "hopes_weight",
                   "oracle_subcomplex_weight", "fitting", "status"]
        return pd.DataFrame([asdict(row) for row in self.rows], columns=columns)


def verify_instance(
    W: WeightedComplex,
    d: int,
    field: FieldSpec,
    budget: SearchBudget = SearchBudget(),
    tie_order: Sequence[Face] | None = None,
    skeleton: LabeledSkeleton | None = None,
) -> VerificationReport:
    """Compare tree, skeleton and diagram with the oracle at every critical value."""
    budget.check(len(W.faces_of_dim(d)))
    T = minimal_spanning_tree(W, d, field, tie_order)
    if skeleton is None:
        skeleton = assemble_skeleton(W, T, assign_deaths(W, T, d, field))
    elif skeleton.d != d:
        raise InvalidArgument(f"skeleton of dimension {skeleton.d} checked in dimension {d}")

    correspondence_error = None
    try:
        check_labels(skeleton, W, tolerance=W.epsilon)
        diagram_correspondence(skeleton, persistence_diagram(W, d, field), tolerance=W.epsilon)
    except VerificationFailure as exc:
        correspondence_error = str(exc)
        logger.warning("correspondence check failed: %s", exc)

    tolerance = W.epsilon * max(1, len(W.faces_of_dim(d)))
    rows = []
    for alpha in W.critical_values:
        Q = reduced_complex(W, alpha)
        forest = min_fitting_forest(Q, d, field, W, budget)
        sub = min_fitting_subcomplex(Q, d, field, W, budget)
        mst_weight = T.weight_at(alpha)
        hopes_weight = skeleton.weight_at(alpha)
        try:
            fitting = is_fitting(skeleton.reduced(alpha), Q, d, field)
        except InvalidArgument:
            fitting = False
        same = math.isclose(mst_weight, forest.weight, rel_tol=0, abs_tol=tolerance) and math.isclose(
            hopes_weight, sub.weight, rel_tol=0, abs_tol=tolerance
        )
        status = "ok" if same and fitting else "mismatch"
        if status != "ok":
            logger.warning("alpha=%g: tree %g vs %g, skeleton %g vs %g, fitting=%s", alpha, mst_weight,
                           forest.weight, hopes_weight, sub.weight, fitting)
        rows.append(VerificationRow(alpha, mst_weight, forest.weight, hopes_weight, sub.weight, fitting, status))
    return VerificationReport(d, field, rows, correspondence_error)


def random_cloud(n: int, ambient_dim: int, rng: np.random.Generator) -> PointCloud:
    """n uniform points in the unit cube of the given dimension."""
    if n < 1 or ambient_dim < 1:
        raise InvalidArgument(f"need n >= 1 and ambient_dim >= 1, got {n}, {ambient_dim}")
    return PointCloud.from_coordinates(rng.random((n, ambient_dim)))


def random_weighted_simplex(
    n: int, max_dim: int, rng: np.random.Generator, grid: float = 0.25
) -> WeightedComplex:
    """Monotone random weights on a truncated simplex, all multiples of ``grid``.

    Each face weighs its heaviest facet plus 0..3 grid steps, so equal weights
    (and zero lifespans) are common.
    """
    if grid <= 0:
        raise InvalidArgument(f"grid must be positive, got {grid}")
    weights: dict[Face, float] = {}
    for face in full_simplex(n, max_dim):
        if face.dim == 0:
            weights[face] = grid * int(rng.integers(0, 2))
        else:
            floor = max(weights[facet] for _, facet in face.facets())
            weights[face] = floor + grid * int(rng.integers(0, 4))
    return WeightedComplex.build(weights, n)
