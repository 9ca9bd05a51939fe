"""Command-line front end for pinskerlab."""

import argparse
import logging
import re
import sys
from pathlib import Path
from typing import List, Optional

from ..errors import PinskerLabError
from ..utils.config import ConfigManager, config as default_config
from .commands import COMMANDS, EXIT_USAGE, FIGURE_KS, WITNESS_KINDS, CliConfig
from .inputs import parse_float_list, parse_int_list
from .records import FORMATS, write_records


def _list_type(parse):
    """Wrap a list parser so argparse reports bad values as usage errors."""
    def convert(text: str):
        try:
            return parse(text)
        except PinskerLabError as e:
            raise argparse.ArgumentTypeError(str(e)) from None
    convert.__name__ = parse.__name__
    return convert


# argparse takes "-1,0.5" for an option; such values are glued to their flag
NUMERIC_VALUE = re.compile(r"^-(\d|\.\d|inf)", re.IGNORECASE)


def join_negative_values(argv: List[str]) -> List[str]:
    """Rewrite '--alpha -1,0.5' as '--alpha=-1,0.5' for every long flag followed by a negative value."""
    joined: List[str] = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if (token.startswith("--") and token != "--" and "=" not in token and i + 1 < len(argv)
                and NUMERIC_VALUE.match(argv[i + 1])):
            joined.append(f"{token}={argv[i + 1]}")
            i += 2
            continue
        joined.append(token)
        i += 1
    return joined


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=FORMATS, default=None,
                        help="record format (default from config: csv)")
    common.add_argument("--output", default=None, help="write records to PATH instead of stdout")
    common.add_argument("--seed", type=int, default=None,
                        help="master seed (CLI > env:PINSKERLAB_SEED > config > 42)")
    common.add_argument("--verbose", action="store_true", help="log at INFO")
    common.add_argument("--debug", action="store_true", help="log at DEBUG")

    parser = argparse.ArgumentParser(
        prog="pinskerlab",
        description="Tsallis entropies, beta-divergences and sharp Pinsker constants",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    floats = _list_type(parse_float_list)
    ints = _list_type(parse_int_list)

    p = sub.add_parser("eval", parents=[common], help="evaluate entropies, losses and divergences")
    p.add_argument("--alpha", type=floats, required=True)
    p.add_argument("--p", default=None, help="inline vector, e.g. 0.5,0.5")
    p.add_argument("--q", default=None)
    p.add_argument("--p-file", default=None, help="one vector per line, whitespace-separated")
    p.add_argument("--q-file", default=None)
    p.add_argument("--orthant", action="store_true", help="treat p, q as positive vectors, not distributions")

    p = sub.add_parser("constant", parents=[common], help="sharp constants C(alpha, K)")
    p.add_argument("--alpha", type=floats, required=True, help="comma-separated list")
    p.add_argument("--K", type=ints, required=True, help="comma-separated list")
    p.add_argument("--eps", type=float, default=None, help="clipping level for alpha > 2, K >= 3")
    p.add_argument("--mode", choices=("both", "p-only", "q-only"), default="both")

    p = sub.add_parser("verify", parents=[common], help="randomized verification grid")
    p.add_argument("--suite", choices=("constant", "quadratic", "identities", "all"), default="all")
    p.add_argument("--alpha", type=floats, default=None)
    p.add_argument("--K", type=ints, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--slack", type=float, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--perturb-constant", type=float, default=1.0, help=argparse.SUPPRESS)

    p = sub.add_parser("witness", parents=[common], help="witness trajectories")
    p.add_argument("--kind", choices=WITNESS_KINDS, required=True)
    p.add_argument("--alpha", type=floats, default=None)
    p.add_argument("--K", type=ints, required=True)
    p.add_argument("--t", type=floats, default=None, help="comma-separated t values")
    p.add_argument("--delta", type=float, default=None, help="boundary offset of the sharpness surrogate")

    p = sub.add_parser("figure", parents=[common], help="dense (alpha, K, C) grid for plotting")
    p.add_argument("--K", type=ints, default=None,
                   help=f"default {','.join(str(k) for k in FIGURE_KS)}")
    p.add_argument("--alpha-min", type=float, default=-0.5)
    p.add_argument("--alpha-max", type=float, default=4.5)
    p.add_argument("--step", type=float, default=None, help="alpha spacing (default 0.005)")
    return parser


def resolve_config(args: argparse.Namespace, settings: ConfigManager) -> CliConfig:
    """Merge parsed flags over environment, config file and defaults."""
    def pick(name: str, fallback):
        value = getattr(args, name, None)
        return fallback if value is None else value

    resolved = CliConfig(
        subcommand=args.subcommand,
        alpha=pick("alpha", []),
        K=pick("K", []),
        p=getattr(args, "p", None),
        q=getattr(args, "q", None),
        p_file=getattr(args, "p_file", None),
        q_file=getattr(args, "q_file", None),
        orthant=getattr(args, "orthant", False),
        seed=pick("seed", settings.get_seed()),
        samples=pick("samples", settings.get_samples()),
        slack=pick("slack", settings.get_slack()),
        workers=pick("workers", settings.get_workers()),
        output_format=pick("output_format", settings.get_output_format()),
        output=args.output,
        eps=getattr(args, "eps", None),
        mode=getattr(args, "mode", "both"),
        suite=getattr(args, "suite", "all"),
        kind=getattr(args, "kind", None),
        t=pick("t", []),
        alpha_min=getattr(args, "alpha_min", -0.5),
        alpha_max=getattr(args, "alpha_max", 4.5),
        step=pick("step", settings.get_figure_step()),
        perturb_constant=getattr(args, "perturb_constant", 1.0),
    )
    if getattr(args, "delta", None) is not None:
        resolved.delta = args.delta
    return resolved


def configure_logging(args: argparse.Namespace, settings: ConfigManager) -> None:
    if args.debug:
        level = logging.DEBUG
    elif args.verbose:
        level = logging.INFO
    else:
        level = getattr(logging, settings.get_log_level(), logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr, force=True,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv: Optional[List[str]] = None, settings: Optional[ConfigManager] = None) -> int:
    """
    Run one subcommand.

    Returns:
        0 on success, 1 on verification violations, 2 on usage or validation errors
    """
    settings = settings or default_config
    parser = build_parser()
    try:
        args = parser.parse_args(join_negative_values(sys.argv[1:] if argv is None else list(argv)))
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    configure_logging(args, settings)

    try:
        cli_config = resolve_config(args, settings)
        status, records = COMMANDS[cli_config.subcommand](cli_config)
        if cli_config.output:
            with open(Path(cli_config.output), "w", newline="") as stream:
                write_records(records, cli_config.output_format, stream)
        else:
            write_records(records, cli_config.output_format, sys.stdout)
    except PinskerLabError as e:
        print(f"❌ {args.subcommand}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"❌ {args.subcommand}: {e}", file=sys.stderr)
        return EXIT_USAGE
    return status


if __name__ == "__main__":
    sys.exit(main())
