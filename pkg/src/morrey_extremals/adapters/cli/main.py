import argparse
from collections.abc import Sequence
from pathlib import Path
from typing import Any, NoReturn, override

import pydantic
from logger import LogLevel, LoguruLogger

from adapters.cli.commands import CommandRunner
from adapters.cli.exception_handler import EXIT_ERROR, ExceptionHandler
from adapters.exceptions import ConfigFileError
from adapters.infrastructure.config.run_config import load_run_config
from adapters.infrastructure.config.settings import Settings
from domain.types.enums import Experiment, SweepAxis

COMMAND_HELP: dict[Experiment, str] = {
    Experiment.EXTREMAL: "Solve the pinned extremal and estimate the sharp constant.",
    Experiment.VERIFY: "Run the property suite on a solved or stored extremal.",
    Experiment.SWEEP: "Solve one extremal per value of s, p, h or L.",
    Experiment.PERRON: "Solve the slit Dirichlet problem and check the barrier bound.",
    Experiment.BARRIER: "Compare barrier residuals on a coarse and a refined lattice.",
}


class ArgumentParser(argparse.ArgumentParser):
    """Argument parser reporting usage errors as configuration errors."""

    @override
    def error(self, message: str) -> NoReturn:
        raise ConfigFileError(f"{self.prog}: {message}")


def build_parser() -> ArgumentParser:
    """Builds the parser of the five subcommands and their common flags."""
    parser = ArgumentParser(
        prog="morrey",
        description="Discrete extremals of the fractional Morrey inequality.",
        epilog="Any configuration key can be overridden with --dotted.key=value.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for experiment, text in COMMAND_HELP.items():
        sub = subparsers.add_parser(experiment.value, help=text, description=text)
        sub.add_argument("--config", type=Path, help="Flat key=value config file.")
        sub.add_argument("--out", type=Path, help="Output directory.")
        sub.add_argument("--seed", type=int, help="Root random seed.")
        if experiment is Experiment.VERIFY:
            sub.add_argument("--extremal", type=Path, help="Stored extremal to check.")
        if experiment is Experiment.SWEEP:
            sub.add_argument(
                "--axis",
                choices=[axis.value for axis in SweepAxis],
                help="Swept parameter.",
            )
            sub.add_argument("--values", help="Comma-separated values.")
    return parser


def parse_overrides(tokens: Sequence[str]) -> dict[str, str]:
    """Reads '--dotted.key=value' and '--dotted.key value' tokens.

    Raises:
        ConfigFileError: If a token is not an option or lacks a value.
    """
    overrides: dict[str, str] = {}
    iterator = iter(tokens)
    for token in iterator:
        if not token.startswith("--") or len(token) == 2:  # noqa: PLR2004
            raise ConfigFileError(f"Unexpected argument '{token}'")
        key, separator, value = token[2:].partition("=")
        if not separator:
            following = next(iterator, None)
            if following is None:
                raise ConfigFileError(f"Missing value for '--{key}'")
            value = following
        overrides[key] = value
    return overrides


def _named_overrides(args: argparse.Namespace) -> dict[str, Any]:
    named = {
        "experiment": args.command,
        "rng_seed": args.seed,
        "output_dir": args.out,
        "verify.extremal": getattr(args, "extremal", None),
        "sweep.axis": getattr(args, "axis", None),
        "sweep.values": getattr(args, "values", None),
    }
    return {key: value for key, value in named.items() if value is not None}


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the morrey command.

    Args:
        argv (Sequence[str] | None): Arguments without the program name;
            sys.argv is used when None.

    Returns:
        int: 0 on success, 1 on configuration or validation errors and failed
        checks, 2 when a solver did not converge.
    """
    try:
        settings = Settings()
    except pydantic.ValidationError as e:
        LoguruLogger(level=LogLevel.ERROR).exception("Invalid process settings", e, {})
        return EXIT_ERROR

    logger = LoguruLogger(level=settings.get_cli_log_level())
    handler = ExceptionHandler(logger)
    try:
        args, extra = build_parser().parse_known_args(argv)
        overrides = parse_overrides(extra)
        overrides.update(_named_overrides(args))
        config = load_run_config(args.config, overrides)
        root = config.output_dir or settings.get_output_dir()
        runner = CommandRunner(
            config=config,
            logger=logger,
            root=root,
            max_dense_nodes=settings.get_max_dense_nodes(),
        )
        code = runner.run(config.experiment)
    except Exception as e:  # noqa: BLE001
        return handler.handle(e)

    logger.info("Command finished", {"exit_code": code})
    return code
