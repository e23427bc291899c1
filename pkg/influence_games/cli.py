"""
Command line entry points.

Exit codes: 0 success, 1 usage error, 2 data error, 3 capacity exceeded.
"""
import argparse
import json
import logging
import os
import sys
from pathlib import Path

from influence_games.core.game import InfluenceGame
from influence_games.dataset import (
    DatasetIntegrityError, UnknownBuiltinError, list_builtins, load_builtin
)
from influence_games.measures.exact import CapacityError
from influence_games.network_io import NetworkFormatError, read_network
from influence_games.tables import (
    CLASSICAL_MEASURES, MEASURES, SAMPLED_MEASURES, UnknownMeasureError,
    compute_table, golden_diff, load_golden, parse_measures, render_diff,
    reproduce_table
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_CAPACITY = 3

WORKERS_ENV = "INFLUENCE_GAMES_WORKERS"


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def load_config(path=None) -> dict:
    """
    Package defaults, updated with the keys of an optional JSON file and
    the worker count from the environment
    """
    with open(
        os.path.join(Path(__file__).parent.absolute(), "config_centrality.json"),
        "r"
    ) as infile:
        config = json.load(infile)
    if path is not None:
        with open(path, "r") as infile:
            config.update(json.load(infile))
    if os.environ.get(WORKERS_ENV):
        try:
            config["workers"] = int(os.environ[WORKERS_ENV])
        except ValueError:
            raise UsageError(
                f"{WORKERS_ENV} must be an integer, got "
                f"{os.environ[WORKERS_ENV]!r}"
            )
    return config


def setup_logging(verbose=False):
    logging.basicConfig(
        format='%(asctime)s |%(levelname)s: %(message)s',
        level=logging.DEBUG if verbose else logging.INFO,
        stream=sys.stderr
    )


def engine_options(config: dict, args) -> dict:
    if args.workers is not None:
        config["workers"] = args.workers
    if args.partitions is not None:
        config["partitions"] = args.partitions
    return {
        "max_players": config["max_players"],
        "chunk_bits": config["chunk_bits"],
        "partitions": config["partitions"],
        "workers": config["workers"],
        "progress": config["progress"],
        "batch_size": config["sample_batch_size"]
    }


def _add_common(parser):
    parser.add_argument(
        "-c", "--config", type=str, default=None,
        help="JSON file overriding the default run configuration"
    )
    parser.add_argument(
        "-w", "--workers", type=int, default=None,
        help="Worker threads (default from config or $" + WORKERS_ENV + ")"
    )
    parser.add_argument(
        "--partitions", type=int, default=None,
        help="Number of coalition ranges of the exact enumeration"
    )
    parser.add_argument(
        "-f", "--format", type=str, choices=("csv", "md"), default=None,
        help="Output format"
    )
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="Debug logging"
    )


def compute_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="compute_centrality",
        description="Centrality measures of an influence game"
    )
    source = parser.add_mutually_exclusive_group()
    source.add_argument(
        "-n", "--network", type=str, default=None, help="Network file"
    )
    source.add_argument(
        "-b", "--builtin", type=str, default=None,
        help="Bundled case study (see --list)"
    )
    parser.add_argument(
        "--case", type=str, default=None,
        help="Threshold case of the case study, e.g. C1"
    )
    parser.add_argument(
        "-q", "--quota", type=int, default=None,
        help="Quota, overrides the quota of the network"
    )
    parser.add_argument(
        "-m", "--measures", type=str, default=None,
        help="Comma separated list from " + ",".join(MEASURES)
    )
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument(
        "--exact", action="store_true", help="Enumerate all coalitions"
    )
    mode.add_argument(
        "--sample", type=int, default=None,
        help="Estimate " + ",".join(SAMPLED_MEASURES) +
        " from this many samples"
    )
    parser.add_argument("-s", "--seed", type=int, default=None, help="Seed")
    parser.add_argument(
        "-p", "--precision", type=int, default=None, help="Decimal digits"
    )
    parser.add_argument(
        "--list", action="store_true",
        help="List the bundled case studies and exit"
    )
    _add_common(parser)
    return parser


def reproduce_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="reproduce_tables",
        description="Recompute a published centrality table and compare it"
    )
    parser.add_argument(
        "-t", "--table", type=int, choices=(1, 2, 3), required=True,
        help="Table number"
    )
    parser.add_argument(
        "--no-diff", action="store_true",
        help="Only print the table, without the comparison"
    )
    _add_common(parser)
    return parser


def _run(func, argv, parser):
    """
    Parse, run and map exceptions to exit codes
    """
    try:
        args = parser.parse_args(argv)
        setup_logging(args.verbose)
        return func(args)
    except (UsageError, UnknownMeasureError) as err:
        print(err, file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except CapacityError as err:
        print(f"capacity exceeded: {err}", file=sys.stderr)
        return EXIT_CAPACITY
    except (
        NetworkFormatError, DatasetIntegrityError, UnknownBuiltinError,
        OSError
    ) as err:
        print(f"data error: {err}", file=sys.stderr)
        return EXIT_DATA
    except json.JSONDecodeError as err:
        print(f"malformed JSON config: {err}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as err:
        # measures the network cannot support, e.g. too few nodes
        print(f"data error: {err}", file=sys.stderr)
        return EXIT_DATA


def _load_game(args) -> InfluenceGame:
    if args.builtin is not None:
        game = load_builtin(args.builtin, args.case)
        graph, quota = game.graph, game.quota
        counting = game.count_unconvincible
    else:
        if args.case is not None:
            raise UsageError("--case only applies to --builtin networks")
        network = read_network(args.network)
        graph, quota = network.to_graph(), network.quota
        counting = True
    if args.quota is not None:
        quota = args.quota
    if quota is None:
        raise UsageError(f"{args.network} has no quota, pass --quota")
    try:
        return InfluenceGame(graph, quota, counting)
    except ValueError as err:
        raise UsageError(str(err))


def _compute(args) -> int:
    if args.list:
        for name, cases in list_builtins():
            print(f"{name}: {', '.join(cases)}")
        return EXIT_OK
    if args.network is None and args.builtin is None:
        raise UsageError("one of --network or --builtin is required")
    if args.measures is None:
        raise UsageError("--measures is required")
    measures = parse_measures(args.measures)
    if args.sample is not None:
        if args.sample < 1:
            raise UsageError(f"--sample must be >= 1, got {args.sample}")
        unsupported = [
            m for m in measures if m not in SAMPLED_MEASURES and
            m not in CLASSICAL_MEASURES
        ]
        if unsupported:
            raise UsageError(
                "Sampling supports " + ", ".join(SAMPLED_MEASURES) +
                ", got " + ", ".join(unsupported)
            )

    config = load_config(args.config)
    options = engine_options(config, args)
    seed = config["seed"] if args.seed is None else args.seed
    if not 0 <= seed < 2**64:
        raise UsageError(
            f"--seed must be an unsigned 64-bit integer, got {seed}"
        )
    precision = config["precision"] if args.precision is None \
        else args.precision
    if precision < 0:
        raise UsageError(f"--precision must be >= 0, got {precision}")

    game = _load_game(args)
    logger.info(f"Game with {game.n} players, quota {game.quota}")
    table = compute_table(
        game,
        measures,
        precision=precision,
        samples=args.sample,
        seed=seed,
        **options
    )
    sys.stdout.write(table.render(args.format or config["format"]))
    return EXIT_OK


def _reproduce(args) -> int:
    config = load_config(args.config)
    options = engine_options(config, args)
    table = reproduce_table(args.table, **options)
    sys.stdout.write(table.render(args.format or config["format"]))
    if not args.no_diff:
        diff = golden_diff(table, load_golden(args.table))
        sys.stdout.write("\n# comparison with the published values\n")
        sys.stdout.write(render_diff(diff))
    return EXIT_OK


def compute_command(argv=None) -> int:
    return _run(_compute, argv, compute_parser())


def reproduce_command(argv=None) -> int:
    return _run(_reproduce, argv, reproduce_parser())
