import argparse
import logging
import os
import sys
from typing import List, Optional

from config import Config
from baselines.baseline_generator import BASELINE_KINDS, BaselineSpec
from core.backend import Backend
from core.errors import ConfigError, NetgrowthError
from core.run_config import RunConfig
from core.sweep import SweepSpec
from reporting.edge_list import EDGE_LIST_FORMATS
from reporting.report_writer import comparison_table, format_value

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - %(message)s"

EXIT_CODES = """exit codes:
  0    success
  2    invalid configuration or arguments
  3    input file missing or unreadable
  4    any other failure
  5    malformed input (the line number is logged)
  130  interrupted"""


def setup_logging():
    level_name = os.environ.get(Config.LOG_LEVEL_ENV, Config.DEFAULT_LOG_LEVEL).upper()
    level = getattr(logging, level_name, None)
    known = isinstance(level, int)
    logging.basicConfig(level=level if known else logging.INFO, format=LOG_FORMAT)
    if not known:
        logger.warning(f"Unknown log level {level_name!r} in {Config.LOG_LEVEL_ENV}; using INFO.")


# ─── Parser ────────────────────────────────────────────────────────────────────
def _sizes(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _weight(text: str):
    name, sep, value = text.partition("=")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected metric=weight, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (sections: dynamics, rules, metrics, output)")
    common.add_argument("--seed", type=int, help="master seed")
    common.add_argument("--target-nodes", type=int, help="stop growing at this node count")
    common.add_argument("--out-dir", help=f"artifact directory (default: {Config.OUT_DIR})")
    common.add_argument("--threads", type=int, help="worker threads for path and centrality metrics")
    common.add_argument("--no-centralities", action="store_true",
                        help="skip eigenvector, betweenness and closeness")
    common.add_argument("--quick", action="store_true",
                        help="cheap metrics only: degree statistics, clustering, modularity")

    dynamics = argparse.ArgumentParser(add_help=False)
    dynamics.add_argument("--profile", choices=sorted(Config.RULE_PROFILES), help="enabled rule subset")
    dynamics.add_argument("--nu", type=float, help="entry rate")
    dynamics.add_argument("--psi", type=float, help="actions per node per turn")
    dynamics.add_argument("--kappa", type=int, help="max edges one node may create per turn")
    dynamics.add_argument("--p-random", type=float)
    dynamics.add_argument("--p-triadic", type=float)
    dynamics.add_argument("--p-cumulative", type=float)
    dynamics.add_argument("--p-distance", type=float)
    dynamics.add_argument("--top-k", type=int)

    parser = argparse.ArgumentParser(prog=Config.APP_NAME,
                                     description="Seeded social network growth simulator and metrics toolkit.",
                                     epilog=EXIT_CODES, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"%(prog)s {Config.VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("grow", parents=[common, dynamics], help="grow a network and report on it")

    metrics = sub.add_parser("metrics", parents=[common], help="report on an edge list",
                             epilog=EXIT_CODES, formatter_class=argparse.RawDescriptionHelpFormatter)
    metrics.add_argument("edge_list")
    metrics.add_argument("--format", choices=EDGE_LIST_FORMATS, default="whitespace")

    compare = sub.add_parser("compare", parents=[common],
                             help="compare two edge lists (or report.json / report.csv files)",
                             epilog=EXIT_CODES, formatter_class=argparse.RawDescriptionHelpFormatter)
    compare.add_argument("left", help="reference network")
    compare.add_argument("right", help="network compared against the reference")
    compare.add_argument("--format", choices=EDGE_LIST_FORMATS, default="whitespace")
    compare.add_argument("--weight", type=_weight, action="append", default=[],
                         help="objective weight override, e.g. --weight modularity=2")

    baseline = sub.add_parser("baseline", parents=[common], help="generate a null-model network")
    baseline.add_argument("kind", choices=BASELINE_KINDS)
    baseline.add_argument("--n", type=int, required=True, help="node count")
    baseline.add_argument("--m", type=int, help="edges per entrant (pref_attach)")
    baseline.add_argument("--p", type=float, help="ordered-pair edge probability (erdos_renyi)")
    baseline.add_argument("--no-metrics", action="store_true", help="write the edge list only")

    sweep = sub.add_parser("sweep", parents=[common], help="calibrate parameters against a target network")
    sweep.add_argument("spec", help="JSON sweep spec")
    sweep.add_argument("--parallelism", type=int, help="concurrent sweep points")
    sweep.add_argument("--max-evaluations", type=int)

    develop = sub.add_parser("develop", parents=[common, dynamics],
                             help="grow the same configuration at increasing sizes")
    develop.add_argument("--sizes", type=_sizes, default=list(Config.DEVELOPMENT_SIZES),
                         help="comma-separated target sizes")
    develop.add_argument("--full-metrics", action="store_true", help="paths and centralities at every size")
    return parser


# ─── Config assembly ───────────────────────────────────────────────────────────
def config_from_args(args, base: Optional[RunConfig] = None) -> RunConfig:
    """Defaults <- config file <- command-line overrides."""
    if base is None:
        base = RunConfig.load(args.config) if args.config else RunConfig()
    overrides = {
        "seed": args.seed,
        "target_nodes": args.target_nodes,
        "out_dir": args.out_dir,
        "threads": args.threads,
    }
    for name in ("profile", "nu", "psi", "kappa", "p_random", "p_triadic", "p_cumulative", "p_distance", "top_k"):
        overrides[name] = getattr(args, name, None)
    base.override(**overrides)
    if args.no_centralities:
        base.metrics.compute_centralities = False
    if args.quick:
        base.output.full_metrics = False
    return base.validate()


def dispatch(backend: Backend, args) -> int:
    if args.command == "grow":
        report = backend.run_command("grow", config=config_from_args(args))
        print(f"{report.nodes} nodes, {report.edges} edges, avg degree {format_value(report.avg_degree)}")
    elif args.command == "metrics":
        report = backend.run_command("metrics", edge_list_path=args.edge_list, config=config_from_args(args),
                                     fmt=args.format)
        for name, value in report.scalars().items():
            print(f"{name} = {format_value(value)}")
    elif args.command == "compare":
        weights = None
        if args.weight:
            weights = dict(Config.OBJECTIVE_WEIGHTS)
            weights.update(dict(args.weight))
        comparison = backend.run_command("compare", left_path=args.left, right_path=args.right,
                                         config=config_from_args(args), weights=weights, fmt=args.format)
        print(comparison_table(comparison, os.path.basename(args.left), os.path.basename(args.right)), end="")
    elif args.command == "baseline":
        config = config_from_args(args)
        spec = BaselineSpec(kind=args.kind, n=args.n, m=args.m, p=args.p, seed=config.sim.seed)
        backend.run_command("baseline", spec=spec, config=config, with_metrics=not args.no_metrics)
    elif args.command == "sweep":
        spec = SweepSpec.load(args.spec)
        config_from_args(args, base=spec.base)
        if args.parallelism is not None:
            spec.parallelism = args.parallelism
        if args.max_evaluations is not None:
            spec.max_evaluations = args.max_evaluations
        results = backend.run_command("sweep", spec=spec)
        for position, result in enumerate(results[:5], start=1):
            status = format_value(result.objective) if result.ok else f"failed ({result.error})"
            print(f"{position}. point {result.point.index} {result.point.values}: {status}")
    elif args.command == "develop":
        rows = backend.run_command("develop", config=config_from_args(args), sizes=args.sizes,
                                   full_metrics=args.full_metrics)
        for row in rows:
            print(f"n={row['target_nodes']}: {row['edges']} edges, avg degree {format_value(row['avg_degree'])}")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return dispatch(Backend(), args)
    except ConfigError as e:
        for problem in e.problems:
            logger.error(f"Invalid configuration: {problem}")
        return e.exit_code
    except NetgrowthError as e:
        logger.error(str(e))
        return e.exit_code
    except KeyboardInterrupt:
        logger.warning("Interrupted.")
        return 130
    except Exception as e:
        logger.error(f"Unexpected failure: {e}", exc_info=True)
        return 4


if __name__ == "__main__":
    sys.exit(main())
