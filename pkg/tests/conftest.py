import math

import numpy as np
import pytest

from hopes.algebra import FieldSpec
from hopes.complex import Face, SimplicialComplex
from hopes.filtration import PointCloud, WeightedComplex, cech_weights, vr_weights

SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]
TETRAHEDRON = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
HALF_DIAGONAL = math.sqrt(2) / 2

# six-vertex projective plane: every pair of vertices spans an edge used by two triangles
PROJECTIVE_PLANE = [
    (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
    (1, 2, 4), (1, 3, 4), (1, 3, 5), (2, 3, 5), (2, 4, 5),
]


def weighted(n: int, table: dict) -> WeightedComplex:
    """Vertices of weight 0 plus the listed faces."""
    weights = {Face((v,)): 0.0 for v in range(n)}
    weights.update({Face.of(vs): float(w) for vs, w in table.items()})
    return WeightedComplex.build(weights, n)


@pytest.fixture(params=["2", "3", "q"], ids=["gf2", "gf3", "rationals"])
def field(request):
    return FieldSpec.parse(request.param)


@pytest.fixture
def gf2():
    return FieldSpec.prime(2)


@pytest.fixture
def square_cloud():
    return PointCloud.from_coordinates(SQUARE)


@pytest.fixture
def unit_square(square_cloud):
    return vr_weights(square_cloud, 2)


@pytest.fixture
def equilateral():
    return vr_weights(PointCloud.from_distance_matrix([[0, 2, 2], [2, 0, 2], [2, 2, 0]]), 2)


@pytest.fixture
def tetrahedron():
    return cech_weights(PointCloud.from_coordinates(TETRAHEDRON), 3)


@pytest.fixture
def domino():
    """Two unit squares 0-1-4-3 and 1-2-5-4 glued along 14; the left one fills first.

    Critical sides 34 and 45 are both born at 1 and die at 2 and 3.
    """
    weights = {
        (0, 1): 1, (1, 2): 1, (3, 4): 1, (4, 5): 1, (0, 3): 1, (1, 4): 1, (2, 5): 1,
        (0, 4): 2, (1, 3): 2,
        (1, 5): 3, (2, 4): 3,
        (0, 2): 4, (0, 5): 4, (2, 3): 4, (3, 5): 4,
    }
    D = np.zeros((6, 6))
    for (a, b), w in weights.items():
        D[a, b] = D[b, a] = 2 * w
    return vr_weights(PointCloud.from_distance_matrix(D), 2)


@pytest.fixture
def elder_simplex():
    """Critical edges 23 (born 1) and 02 (born 2) become homologous at 3; one dies then."""
    return weighted(4, {
        (0, 1): 1, (1, 2): 1, (2, 3): 1, (0, 3): 1, (0, 2): 2, (1, 3): 10,
        (0, 2, 3): 3, (0, 1, 2): 4, (0, 1, 3): 10, (1, 2, 3): 10,
    })


@pytest.fixture
def twin_simplex():
    """Like elder_simplex but both critical edges are born at 1."""
    return weighted(4, {
        (0, 1): 1, (1, 2): 1, (2, 3): 1, (0, 3): 1, (0, 2): 1, (1, 3): 10,
        (0, 2, 3): 3, (0, 1, 2): 4, (0, 1, 3): 10, (1, 2, 3): 10,
    })


@pytest.fixture
def twin_tie_order():
    """Puts the path 0-1-2-3 first so that 02 and 03 are critical."""
    return [Face.of(e) for e in [(0, 1), (1, 2), (2, 3), (0, 2), (0, 3), (1, 3)]]


@pytest.fixture
def projective_plane():
    faces = {Face.of(t) for t in PROJECTIVE_PLANE}
    faces |= {sub for t in list(faces) for sub in t.subfaces()}
    return SimplicialComplex(frozenset(faces), 6)


@pytest.fixture
def weighted_projective_plane(projective_plane):
    return WeightedComplex.build({f: float(f.dim) for f in projective_plane}, 6)


@pytest.fixture
def make_weighted():
    return weighted
