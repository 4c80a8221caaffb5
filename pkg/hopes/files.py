"""Reading and writing point clouds, complexes, skeleta and diagrams.

CSV goes through pandas, everything structured through JSON. Infinite
deaths are written as the string "inf" in JSON and as ``inf`` in CSV.
"""

from __future__ import annotations

import json
import logging
import math
from pathlib import Path

import pandas as pd

from hopes.complex import ComplexBuilder, Face, SimplicialComplex
from hopes.errors import InvalidArgument, VerificationFailure
from hopes.filtration import PointCloud, WeightedComplex
from hopes.homology import PersistenceDiagram
from hopes.skeleton import FaceKind, Label, LabeledSkeleton
from hopes.spanning import SpanningTree

logger = logging.getLogger(__name__)


def _read_matrix(path) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, header=None, comment="#")
    except pd.errors.EmptyDataError:
        raise InvalidArgument(f"{path} is empty") from None
    if frame.isna().any().any():
        raise InvalidArgument(f"{path} has missing or non-numeric entries")
    return frame


def read_point_cloud(path, distance_matrix: bool = False) -> PointCloud:
    """One point per row, or a square distance matrix when ``distance_matrix``."""
    frame = _read_matrix(path)
    try:
        values = frame.to_numpy(dtype=float)
    except ValueError:
        raise InvalidArgument(f"{path} has non-numeric entries") from None
    cloud = PointCloud.from_distance_matrix(values) if distance_matrix else PointCloud.from_coordinates(values)
    logger.info("read %d points from %s", cloud.size, path)
    return cloud


def write_point_cloud(cloud: PointCloud, path):
    data = cloud.coordinates if cloud.has_coordinates else cloud.distances
    pd.DataFrame(data).to_csv(path, header=False, index=False)


def _encode(value: float):
    return "inf" if math.isinf(value) else value


def _decode(value) -> float:
    return math.inf if value == "inf" else float(value)


def complex_to_json(X: SimplicialComplex) -> dict:
    return {"vertices": X.vertex_count, "faces": [list(f.vertices) for f in X]}


def complex_from_json(data: dict, strict: bool = False) -> SimplicialComplex:
    """Faces in any order; missing subfaces are added, or rejected when ``strict``."""
    try:
        faces = [Face.of(v) for v in data["faces"]]
        builder = ComplexBuilder(int(data["vertices"]), strict=strict)
    except (KeyError, TypeError) as exc:
        raise InvalidArgument(f"malformed complex: {exc}") from None
    # strict loading still accepts faces listed before their subfaces
    return builder.add_all(sorted(faces, key=lambda f: (f.dim, f))).build()



def weighted_complex_to_json(W: WeightedComplex) -> dict:
    return {
        "vertices": W.vertex_count,
        "epsilon": W.epsilon,
        "faces": [{"v": list(f.vertices), "w": W[f]} for f in W],
    }


def weighted_complex_from_json(data: dict) -> WeightedComplex:
    weights = {Face.of(item["v"]): float(item["w"]) for item in data["faces"]}
    kwargs = {"epsilon": float(data["epsilon"])} if "epsilon" in data else {}
    return WeightedComplex.build(weights, int(data["vertices"]), **kwargs)


def skeleton_to_json(H: LabeledSkeleton) -> dict:
    return {
        "d": H.d,
        "vertices": H.vertex_count,
        "faces": [
            {
                "v": list(f.vertices),
                "l": H.labels[f].left,
                "r": _encode(H.labels[f].right),
                "kind": H.kinds[f].value,
            }
            for f in H.faces
        ],
    }


def skeleton_from_json(data: dict) -> LabeledSkeleton:
    """A stored skeleton; a face whose label is not 0 <= l < r fails verification."""
    labels, kinds = {}, {}
    try:
        for item in data["faces"]:
            face = Face.of(item["v"])
            left, right = float(item["l"]), _decode(item["r"])
            try:
                labels[face] = Label(left, right)
            except InvalidArgument as exc:
                raise VerificationFailure(f"stored {face}: {exc}", face=face) from None
            kinds[face] = FaceKind(item["kind"])
        return LabeledSkeleton(int(data["d"]), int(data["vertices"]), labels, kinds)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidArgument(f"malformed skeleton: {exc}") from None


def tree_to_json(T: SpanningTree) -> dict:
    return {
        "d": T.d,
        "vertices": T.vertex_count,
        "tie_order_seed": T.seed,
        "total_weight": T.total_weight,
        "faces": [{"v": list(f.vertices), "w": T.weights[f]} for f in sorted(T.weights, key=lambda f: (f.dim, f))],
    }


def write_json(data: dict, path):
    Path(path).write_text(json.dumps(data, indent=2) + "\n")
    logger.info("wrote %s", path)


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidArgument(f"{path} is not valid JSON: {exc}") from None


def write_complex(X: SimplicialComplex, path):
    write_json(complex_to_json(X), path)


def read_complex(path, strict: bool = False) -> SimplicialComplex:
    return complex_from_json(read_json(path), strict=strict)


def write_skeleton(H: LabeledSkeleton, path):
    write_json(skeleton_to_json(H), path)


def read_skeleton(path) -> LabeledSkeleton:
    return skeleton_from_json(read_json(path))


def diagram_frame(D: PersistenceDiagram) -> pd.DataFrame:
    return pd.DataFrame(
        [(D.dimension, birth, death) for birth, death in D.dots], columns=["dim", "birth", "death"]
    )


def write_diagram(D: PersistenceDiagram, path):
    diagram_frame(D).to_csv(path, index=False)
    logger.info("wrote %d dots to %s", len(D), path)


def read_diagram(path) -> PersistenceDiagram:
    frame = pd.read_csv(path)
    dims = set(frame["dim"])
    if len(dims) > 1:
        raise InvalidArgument(f"{path} mixes dimensions {sorted(dims)}")
    dimension = int(dims.pop()) if dims else 0
    dots = tuple((float(b), float(q)) for b, q in zip(frame["birth"], frame["death"]))
    return PersistenceDiagram(dimension, dots)


def write_dots(D: PersistenceDiagram, path):
    """Plot-ready dots: ``birth death essential``, essential dots drawn at the top weight."""
    finite = [q for _, q in D.finite()]
    top = max(finite + [p for p, _ in D.dots], default=0.0)
    rows = [(p, top if math.isinf(q) else q, int(math.isinf(q))) for p, q in D.dots]
    pd.DataFrame(rows, columns=["birth", "death", "essential"]).to_csv(path, sep=" ", index=False)
