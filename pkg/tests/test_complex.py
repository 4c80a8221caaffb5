import math

import pytest

from hopes.complex import (
    ComplexBuilder,
    Face,
    SimplicialComplex,
    euler_characteristic,
    full_simplex,
    is_spanning,
    skeleton,
    star_tree,
)
from hopes.errors import InvalidArgument


def test_face_of_sorts_vertices():
    assert Face.of([2, 0, 1]) == Face((0, 1, 2))
    assert Face.of([3]).dim == 0


@pytest.mark.parametrize("vertices", [(1, 1), (2, 1), (), (-1, 0)])
def test_face_rejects_bad_vertices(vertices):
    with pytest.raises(InvalidArgument):
        Face(vertices)


def test_face_of_rejects_repeats():
    with pytest.raises(InvalidArgument):
        Face.of([0, 2, 0])


def test_facets_in_position_order():
    facets = list(Face((0, 1, 2)).facets())
    assert facets == [(0, Face((1, 2))), (1, Face((0, 2))), (2, Face((0, 1)))]
    assert list(Face((4,)).facets()) == []


def test_subfaces_and_subset():
    subs = set(Face((0, 1, 2)).subfaces())
    assert len(subs) == 6
    assert Face((0, 2)).issubset(Face((0, 1, 2)))
    assert not Face((0, 3)).issubset(Face((0, 1, 2)))


@pytest.mark.parametrize(
    "n, max_dim, f_vector",
    [(1, None, [1]), (3, None, [3, 3, 1]), (4, None, [4, 6, 4, 1]), (4, 1, [4, 6]), (5, 2, [5, 10, 10])],
)
def test_full_simplex_f_vector(n, max_dim, f_vector):
    assert full_simplex(n, max_dim).f_vector() == f_vector


def test_full_simplex_needs_a_vertex():
    with pytest.raises(InvalidArgument):
        full_simplex(0)


def test_builder_closes_downward():
    X = ComplexBuilder(3).add((0, 1, 2)).build()
    assert len(X) == 7
    assert X.dim == 2


def test_strict_builder_rejects_missing_subface():
    with pytest.raises(InvalidArgument):
        ComplexBuilder(3, strict=True).add((0,)).add((0, 1))


def test_complex_must_be_closed():
    with pytest.raises(InvalidArgument):
        SimplicialComplex(frozenset({Face((0, 1, 2))}), 3)
    with pytest.raises(InvalidArgument):
        SimplicialComplex(frozenset({Face((0,)), Face((0, 1))}), 2)


def test_builder_rejects_vertex_out_of_range():
    with pytest.raises(InvalidArgument):
        ComplexBuilder(2).add((0, 2))


def test_without_faces_keeps_closure():
    X = full_simplex(3)
    hollow = X.without_faces([Face((0, 1, 2))])
    assert hollow.f_vector() == [3, 3]
    with pytest.raises(InvalidArgument):
        X.without_faces([Face((0, 1))])


def test_with_faces_and_union():
    X = skeleton(full_simplex(3), 0)
    grown = X.with_faces([Face((0, 1))])
    assert Face((0, 1)) in grown
    assert grown.union(X) == grown
    assert X.issubset(grown)


def test_faces_of_dim_is_lexicographic():
    edges = full_simplex(4).faces_of_dim(1)
    assert list(edges) == sorted(edges)
    assert edges[0] == Face((0, 1)) and edges[-1] == Face((2, 3))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_euler_characteristic_of_simplex(n):
    assert euler_characteristic(full_simplex(n)) == 1


def test_euler_characteristic_of_sphere_and_plane(projective_plane):
    sphere = skeleton(full_simplex(4), 2)
    assert euler_characteristic(sphere) == 2
    assert euler_characteristic(projective_plane) == 1


def test_is_spanning():
    X = full_simplex(4)
    assert is_spanning(skeleton(X, 1), X, 2)
    assert not is_spanning(skeleton(X, 0), X, 2)
    assert is_spanning(SimplicialComplex.empty(4), X, 0)
    with pytest.raises(InvalidArgument):
        is_spanning(full_simplex(5), X, 1)


@pytest.mark.parametrize("n, k", [(2, 1), (3, 1), (3, 2), (4, 2), (4, 3)])
def test_star_tree_counts(n, k):
    T = star_tree(n, k, apex=0)
    assert len(T.faces_of_dim(k)) == math.comb(n, k)
    assert all(0 in f for f in T.faces_of_dim(k))
    assert len(T.faces_of_dim(k - 1)) == math.comb(n + 1, k)


@pytest.mark.parametrize("n, k", [(n, k) for n in range(7) for k in range(n + 1)])
def test_star_tree_spans_the_simplex(n, k):
    T = star_tree(n, k, apex=n // 2)
    assert is_spanning(T, full_simplex(n + 1), k)
    assert len(T.faces_of_dim(k)) == (math.comb(n, k) if k else 0)


def test_star_tree_of_dimension_zero_is_empty():
    assert star_tree(3, 0, apex=2) == SimplicialComplex.empty(4)


def test_star_tree_rejects_bad_apex():
    with pytest.raises(InvalidArgument):
        star_tree(3, 1, apex=4)
