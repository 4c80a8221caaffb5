import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import minimize

from hopes.complex import Face
from hopes.errors import InvalidArgument, UnsupportedInput
from hopes.filtration import (
    PointCloud,
    WeightedComplex,
    cech_weights,
    complete_to_simplex,
    critical_values,
    minimal_enclosing_ball,
    reduced_complex,
    snap_weights,
    vr_weights,
)


def test_square_rips_weights(unit_square):
    assert unit_square[Face((0, 1))] == 0.5
    assert unit_square[Face((0, 2))] == pytest.approx(math.sqrt(2) / 2)
    assert unit_square[Face((0, 1, 2))] == unit_square[Face((0, 2))]
    assert unit_square.max_dim == 2
    assert critical_values(unit_square) == pytest.approx([0.0, 0.5, math.sqrt(2) / 2])


def test_rips_needs_an_edge_dimension(square_cloud):
    with pytest.raises(InvalidArgument):
        vr_weights(square_cloud, 0)


def test_reduced_complex(unit_square):
    assert reduced_complex(unit_square, -1).faces == frozenset()
    sides = reduced_complex(unit_square, 0.6)
    assert sides.f_vector() == [4, 4]
    assert len(reduced_complex(unit_square, 1.0)) == len(unit_square.complex)


def test_obtuse_triangle_weights_agree():
    points = [(0, 0), (4, 0), (1, 1)]
    rips = vr_weights(PointCloud.from_coordinates(points), 2)
    cech = cech_weights(PointCloud.from_coordinates(points), 2)
    triangle = Face((0, 1, 2))
    assert rips[triangle] == cech[triangle] == 2.0
    assert cech[triangle] == cech[Face((0, 1))]


def test_right_triangle_ball_is_exact():
    centre, r2 = minimal_enclosing_ball([(0, 0), (3, 0), (0, 4)])
    assert r2 == Fraction(25, 4)
    assert list(centre) == [Fraction(3, 2), Fraction(2)]


def test_ball_is_exact_for_fractional_coordinates():
    centre, r2 = minimal_enclosing_ball([(0, 0), (0.5, 0), (0, 1.5)])
    assert r2 == Fraction(5, 8)
    assert list(centre) == [Fraction(1, 4), Fraction(3, 4)]
    # 0.1 is read as the dyadic rational the float stores
    _, r2 = minimal_enclosing_ball([(0.0,), (0.1,)])
    assert r2 == (Fraction(0.1) / 2) ** 2
    _, approx = minimal_enclosing_ball([(0, 0), (0.5, 0), (0, 1.5)], exact=False)
    assert isinstance(approx, float) and approx == pytest.approx(0.625)


def test_ball_rejects_infinite_coordinates():
    with pytest.raises(InvalidArgument):
        minimal_enclosing_ball([(0, 0), (math.inf, 0)])


def test_tetrahedron_cech_weights(tetrahedron):
    assert tetrahedron[Face((0, 1))] == pytest.approx(math.sqrt(2))
    assert tetrahedron[Face((0, 1, 2))] == pytest.approx(2 * math.sqrt(2) / math.sqrt(3))
    assert tetrahedron[Face((0, 1, 2, 3))] == pytest.approx(math.sqrt(3))
    triangles = {tetrahedron[f] for f in tetrahedron.faces_of_dim(2)}
    assert len(triangles) == 1


def test_ball_of_random_points_is_minimal():
    rng = np.random.default_rng(3)
    for _ in range(10):
        points = rng.random((int(rng.integers(2, 6)), 2))
        centre, r2 = minimal_enclosing_ball(points)
        centre, r2 = centre.astype(float), float(r2)
        assert np.all(np.sum((points - centre) ** 2, axis=1) <= r2 + 1e-9)

        # minimise t over (centre, t) with every squared distance at most t
        start = np.append(points.mean(axis=0), np.max(np.sum((points - points.mean(axis=0)) ** 2, axis=1)))
        reference = minimize(
            lambda x: x[-1],
            start,
            method="SLSQP",
            constraints=[{"type": "ineq", "fun": lambda x: x[-1] - np.sum((points - x[:-1]) ** 2, axis=1)}],
            options={"ftol": 1e-12, "maxiter": 500},
        )
        assert reference.success
        assert r2 <= reference.fun + 1e-7
        assert r2 == pytest.approx(reference.fun, abs=1e-6)


def test_cech_needs_coordinates():
    cloud = PointCloud.from_distance_matrix([[0, 1], [1, 0]])
    with pytest.raises(UnsupportedInput):
        cech_weights(cloud, 1)


@pytest.mark.parametrize(
    "matrix",
    [[[0, 1], [2, 0]], [[1, 1], [1, 0]], [[0, -1], [-1, 0]], [[0, 1, 2], [1, 0, 1]], []],
    ids=["asymmetric", "diagonal", "negative", "not-square", "empty"],
)
def test_distance_matrix_validation(matrix):
    with pytest.raises(InvalidArgument):
        PointCloud.from_distance_matrix(matrix)


def test_coordinates_must_be_finite():
    with pytest.raises(InvalidArgument):
        PointCloud.from_coordinates([(0, 0), (np.nan, 1)])


def test_snap_weights_chains_close_values():
    a, b, c, e = (Face((i,)) for i in range(4))
    snapped = snap_weights({a: 1.0, b: 1.0 + 5e-10, c: 1.0 + 1.2e-9, e: 2.0}, 1e-9)
    assert snapped == {a: 1.0, b: 1.0, c: 1.0, e: 2.0}


def test_weights_must_be_monotone(make_weighted):
    with pytest.raises(InvalidArgument):
        make_weighted(3, {(0, 1): 2, (0, 2): 1, (1, 2): 1, (0, 1, 2): 1.5})


def test_weights_must_cover_every_face():
    with pytest.raises(InvalidArgument):
        WeightedComplex.build({Face((0,)): 0.0, Face((0, 1)): 1.0}, 2)


def test_build_snaps_near_ties(make_weighted):
    W = make_weighted(3, {(0, 1): 1.0, (0, 2): 1.0 + 1e-12, (1, 2): 1.0})
    assert len(set(W[f] for f in W.faces_of_dim(1))) == 1
    assert W.critical_values == (0.0, 1.0)


def test_is_complete(unit_square, make_weighted):
    assert unit_square.is_complete(2)
    partial = make_weighted(3, {(0, 1): 1.0})
    assert partial.is_complete(0)
    assert not partial.is_complete(1)


def test_complete_to_simplex(make_weighted):
    partial = make_weighted(3, {(0, 1): 1.0})
    full = complete_to_simplex(partial, max_dim=2, margin=0.1)
    assert full.is_complete(2)
    assert full[Face((0, 1))] == 1.0
    assert full[Face((0, 2))] == pytest.approx(1.1)
    assert full[Face((0, 1, 2))] == pytest.approx(1.1)
    assert complete_to_simplex(full, max_dim=2) is full


def test_complete_all_zero_weights_uses_margin(make_weighted):
    full = complete_to_simplex(make_weighted(2, {}), max_dim=1, margin=0.25)
    assert full[Face((0, 1))] == 0.25


@pytest.mark.parametrize("seed", range(5))
def test_rips_and_cech_interleave(seed):
    rng = np.random.default_rng(seed)
    cloud = PointCloud.from_coordinates(rng.random((int(rng.integers(3, 7)), int(rng.integers(1, 4)))))
    rips, cech = vr_weights(cloud, 3), cech_weights(cloud, 3)
    for face in rips:
        assert rips[face] <= cech[face] + 1e-9
        assert cech[face] <= 2 * rips[face] + 1e-9


def test_reduced_complexes_are_nested():
    rng = np.random.default_rng(7)
    W = vr_weights(PointCloud.from_coordinates(rng.random((6, 2))), 2)
    levels = sorted(set(W.critical_values) | {0.1, 0.3, 0.6, 2.0})
    complexes = [reduced_complex(W, alpha) for alpha in levels]
    for smaller, larger in zip(complexes, complexes[1:]):
        assert smaller.issubset(larger)
    assert complexes[-1] == W.complex
