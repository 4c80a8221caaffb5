"""Command line: python -m hopes {hopes,mst,diagram,verify,selftest} ..."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from hopes import files
from hopes.algebra import FieldSpec
from hopes.config import DEFAULT_EPSILON, DEFAULT_FIELD, DEFAULT_MARGIN, DEFAULT_MAX_D_FACES, configure_logging
from hopes.errors import HopesError, Infeasible, InvalidArgument, ResourceLimit, VerificationFailure
from hopes.filtration import WeightedComplex, cech_weights, complete_to_simplex, vr_weights
from hopes.homology import PersistenceDiagram, persistence_diagram
from hopes.oracle import SearchBudget, random_cloud, random_weighted_simplex, verify_instance
from hopes.skeleton import build_hopes
from hopes.spanning import minimal_spanning_tree, shuffled_tie_order

logger = logging.getLogger(__name__)

# --- Configuration ---
COMMANDS = ("hopes", "mst", "diagram", "verify", "selftest")
FILTRATIONS = ("rips", "cech")
EXIT_OK, EXIT_FAILED, EXIT_BAD_INPUT, EXIT_BUDGET = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: Path | None = None
    distance_matrix: bool = False
    filtration: str = "rips"
    d: int = 1
    field: str = DEFAULT_FIELD
    epsilon: float = DEFAULT_EPSILON
    seed: int | None = None
    margin: float = DEFAULT_MARGIN
    budget: int = DEFAULT_MAX_D_FACES
    timeout: float | None = None
    out_skeleton: Path | None = None
    out_diagram: Path | None = None
    out_tree: Path | None = None
    out_dots: Path | None = None
    skeleton: Path | None = None
    points: int = 5
    instances: int = 10

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InvalidArgument(f"Unsupported command: {self.command}")
        if self.filtration not in FILTRATIONS:
            raise InvalidArgument(f"Unsupported filtration: {self.filtration}")
        if self.d < 0:
            raise InvalidArgument(f"--dim must be non-negative, got {self.d}")
        if not self.epsilon > 0:
            raise InvalidArgument(f"--epsilon must be positive, got {self.epsilon}")
        if self.margin <= 0:
            raise InvalidArgument(f"--margin must be positive, got {self.margin}")
        if self.budget < 1:
            raise InvalidArgument(f"--budget must be at least 1, got {self.budget}")
        if self.points < 1 or self.instances < 0:
            raise InvalidArgument("--points must be positive and --instances non-negative")
        if self.command != "selftest" and self.input is None:
            raise InvalidArgument(f"{self.command} needs --input")
        FieldSpec.parse(self.field)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        return cls(
            command=args.command,
            input=args.input,
            distance_matrix=args.distance_matrix,
            filtration=args.filtration,
            d=args.dim,
            field=args.field,
            epsilon=args.epsilon,
            seed=args.seed,
            margin=args.margin,
            budget=args.budget,
            timeout=args.timeout,
            out_skeleton=args.out_skeleton,
            out_diagram=args.out_diagram,
            out_tree=args.out_tree,
            out_dots=args.out_dots,
            skeleton=args.skeleton,
            points=args.points,
            instances=args.instances,
        )

    @property
    def field_spec(self) -> FieldSpec:
        return FieldSpec.parse(self.field)

    @property
    def search_budget(self) -> SearchBudget:
        return SearchBudget(self.budget, self.timeout)


def load_weighted_complex(config: RunConfig) -> WeightedComplex:
    """A point cloud CSV weighted by the chosen filtration, or a weighted complex JSON."""
    top = config.d + 1
    if config.input.suffix == ".json":
        W = files.weighted_complex_from_json(files.read_json(config.input))
        return complete_to_simplex(W, max_dim=top, margin=config.margin)
    cloud = files.read_point_cloud(config.input, distance_matrix=config.distance_matrix)
    if config.filtration == "cech":
        return cech_weights(cloud, top, config.epsilon)
    return vr_weights(cloud, top, config.epsilon)


def _emit_json(data: dict, path: Path | None):
    if path is None:
        print(json.dumps(data, indent=2))
    else:
        files.write_json(data, path)


def _emit_diagram(D: PersistenceDiagram, path: Path | None):
    if path is None:
        files.diagram_frame(D).to_csv(sys.stdout, index=False)
    else:
        files.write_diagram(D, path)


def cmd_hopes(config: RunConfig) -> int:
    """Skeleton JSON, then the diagram CSV; either goes to stdout when no path is given."""
    W = load_weighted_complex(config)
    field = config.field_spec
    H = build_hopes(W, config.d, field, seed=config.seed)
    _emit_json(files.skeleton_to_json(H), config.out_skeleton)
    _emit_diagram(persistence_diagram(W, config.d, field), config.out_diagram)
    return EXIT_OK


def cmd_mst(config: RunConfig) -> int:
    W = load_weighted_complex(config)
    T = minimal_spanning_tree(W, config.d, config.field_spec, seed=config.seed)
    _emit_json(files.tree_to_json(T), config.out_tree)
    return EXIT_OK


def cmd_diagram(config: RunConfig) -> int:
    W = load_weighted_complex(config)
    D = persistence_diagram(W, config.d, config.field_spec)
    _emit_diagram(D, config.out_diagram)
    if config.out_dots is not None:
        files.write_dots(D, config.out_dots)
    return EXIT_OK


def _print_report(report, label: str | None = None):
    if label:
        print(label)
    report.to_frame().to_csv(sys.stdout, index=False)
    if report.correspondence_error:
        print(f"diagram correspondence failed: {report.correspondence_error}")
    for row in report.failures():
        print(f"mismatch at alpha={row.alpha}: tree {row.mst_weight} vs {row.oracle_forest_weight}, "
              f"skeleton {row.hopes_weight} vs {row.oracle_subcomplex_weight}, fitting={row.fitting}")


def cmd_verify(config: RunConfig) -> int:
    W = load_weighted_complex(config)
    stored = files.read_skeleton(config.skeleton) if config.skeleton is not None else None
    tie_order = shuffled_tie_order(W, config.d, config.seed) if config.seed is not None else None
    report = verify_instance(W, config.d, config.field_spec, config.search_budget, tie_order, stored)
    _print_report(report)
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_selftest(config: RunConfig) -> int:
    """Random clouds and random weighted simplices, alternately, all from one seed."""
    rng = np.random.default_rng(config.seed if config.seed is not None else 0)
    field = config.field_spec
    failed = 0
    for i in range(config.instances):
        if i % 2:
            W = random_weighted_simplex(config.points, config.d + 1, rng)
        else:
            W = vr_weights(random_cloud(config.points, 2, rng), config.d + 1, config.epsilon)
        report = verify_instance(W, config.d, field, config.search_budget)
        status = "ok" if report.ok else "FAILED"
        print(f"instance {i}: {len(report.rows)} critical values, {status}")
        if not report.ok:
            failed += 1
            _print_report(report)
    print(f"{config.instances - failed}/{config.instances} instances verified over {field.name}")
    return EXIT_OK if failed == 0 else EXIT_FAILED


HANDLERS = {
    "hopes": cmd_hopes,
    "mst": cmd_mst,
    "diagram": cmd_diagram,
    "verify": cmd_verify,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", type=Path, help="point cloud CSV or weighted complex JSON")
    common.add_argument("--distance-matrix", action="store_true", help="CSV holds a distance matrix")
    common.add_argument("--filtration", choices=FILTRATIONS, default="rips")
    common.add_argument("--dim", type=int, default=1, help="skeleton dimension d")
    common.add_argument("--field", default=DEFAULT_FIELD, help="a prime p for GF(p), or q for the rationals")
    common.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    common.add_argument("--seed", type=int, default=None, help="tie-order and instance seed")
    common.add_argument("--margin", type=float, default=DEFAULT_MARGIN)
    common.add_argument("--budget", type=int, default=DEFAULT_MAX_D_FACES, help="oracle limit on d-faces")
    common.add_argument("--timeout", type=float, default=None, help="oracle seconds per search")
    common.add_argument("--out-skeleton", type=Path)
    common.add_argument("--out-diagram", type=Path)
    common.add_argument("--out-tree", type=Path)
    common.add_argument("--out-dots", type=Path)
    common.add_argument("--skeleton", type=Path, help="stored skeleton to recheck (verify)")
    common.add_argument("--points", type=int, default=5, help="points per instance (selftest)")
    common.add_argument("--instances", type=int, default=10, help="number of instances (selftest)")

    parser = argparse.ArgumentParser(prog="hopes", description="Minimal spanning d-trees and persistent skeleta")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("hopes", parents=[common], help="build the skeleton and its diagram")
    sub.add_parser("mst", parents=[common], help="build a minimal spanning d-tree")
    sub.add_parser("diagram", parents=[common], help="persistence diagram only")
    sub.add_parser("verify", parents=[common], help="check tree and skeleton against the oracle")
    sub.add_parser("selftest", parents=[common], help="verify seeded random instances")
    return parser


def main(argv: list[str] | None = None) -> int:
    configure_logging()
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig.from_args(args)
        return HANDLERS[config.command](config)
    except (VerificationFailure, Infeasible) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_FAILED
    except ResourceLimit as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (HopesError, FileNotFoundError, pd.errors.ParserError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
