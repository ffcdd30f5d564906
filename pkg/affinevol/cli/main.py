"""Command-line entry point.

Exit codes: 0 success, 1 malformed model spec or input, 2 failed check or
violated assumption, 3 inconclusive verdict.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from affinevol.cli.commands import (
    COMMANDS,
    EXIT_FAIL,
    EXIT_SPEC,
)
from affinevol.cli.config import RunConfig
from affinevol.core.errors import (
    AffineModelError,
    AssumptionError,
    ModelSpecError,
)
from affinevol.models.factory import build_model
from affinevol.utils.logger import set_package_level, setup_logger

logger = setup_logger(__name__)

DEFAULT_CONFIG_PATH = "config.yaml"


def _range_flags(parser: argparse.ArgumentParser, name: str) -> None:
    parser.add_argument(f"--{name}-min", dest=f"{name}_min", type=float)
    parser.add_argument(f"--{name}-max", dest=f"{name}_max", type=float)
    parser.add_argument(f"--{name}-count", dest=f"{name}_count", type=int)


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per analysis."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config_path",
        type=str,
        default=DEFAULT_CONFIG_PATH,
        help="YAML file with run defaults",
    )
    source = common.add_mutually_exclusive_group()
    source.add_argument("--model", type=str, help="JSON spec or file path")
    source.add_argument("--preset", type=str, help="built-in model name")
    common.add_argument(
        "--params", type=str, help="JSON object overriding preset fields"
    )
    for name in ("u", "t", "xi", "w"):
        _range_flags(common, name)
    common.add_argument("--V0", type=float, help="initial variance")
    common.add_argument("--T", type=float, help="maturity for smile")
    common.add_argument(
        "--regime", choices=["primary", "stationary"], default=None
    )
    common.add_argument("--out", type=str, help="output path")
    common.add_argument("--format", choices=["csv", "json"], default=None)
    common.add_argument("--tol", type=float, help="solver tolerance")
    common.add_argument(
        "--log-level", dest="log_level", type=str, default=None
    )

    parser = argparse.ArgumentParser(
        prog="affine-vol",
        description="Long-term and moment-explosion analysis of affine "
        "stochastic volatility models",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=fn.__doc__)
    return parser


def load_run_config(args: argparse.Namespace) -> RunConfig:
    """Merge config-file defaults with command-line overrides."""
    overrides = {
        k: v
        for k, v in vars(args).items()
        if k not in ("command", "config_path") and v is not None
    }
    config_path = Path(args.config_path)
    if config_path.exists():
        return RunConfig.from_config_file(config_path, **overrides)
    if args.config_path != DEFAULT_CONFIG_PATH:
        raise FileNotFoundError(f"Configuration file not found: {config_path}")
    return RunConfig.from_dict(overrides)


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    args = build_parser().parse_args(argv)
    try:
        config = load_run_config(args)
        set_package_level(config.log_level)
        logger.info("%s: start", args.command)
        model = build_model(config.model_spec())
        result = COMMANDS[args.command](model, config)
    except ModelSpecError as exc:
        print(f"error: invalid model spec: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except AssumptionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (AffineModelError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC

    text = result.table.render(config.format)
    if config.out:
        Path(config.out).write_text(text)
    else:
        sys.stdout.write(text)
    logger.info(
        "%s: done, %d rows, exit %d",
        args.command,
        len(result.table),
        result.exit_code,
    )
    return result.exit_code
