"""Minimal spanning d-trees and homologically persistent skeleta of point clouds."""

from hopes.algebra import FieldSpec
from hopes.complex import Face, SimplicialComplex
from hopes.filtration import PointCloud, WeightedComplex, cech_weights, vr_weights
from hopes.homology import persistence_diagram
from hopes.skeleton import LabeledSkeleton, build_hopes, reduced_hopes
from hopes.spanning import SpanningTree, minimal_spanning_tree

__all__ = [
    "Face",
    "FieldSpec",
    "LabeledSkeleton",
    "PointCloud",
    "SimplicialComplex",
    "SpanningTree",
    "WeightedComplex",
    "build_hopes",
    "cech_weights",
    "minimal_spanning_tree",
    "persistence_diagram",
    "reduced_hopes",
    "vr_weights",
]
