"""
Magnetic Surface Lab - Run Configuration

Command-line flags parsed into a RunConfig. Everything a run computes is
determined by its RunConfig; execution-only flags (shards, output path,
clock, logging) are kept out of the echoed configuration.
"""

import argparse
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import List, Optional, Sequence

from config.settings import Settings
from core.errors import DomainError
from utils.number_format import parse_rational


@dataclass
class RunConfig:
    """One experiment run: subcommand plus all flags."""

    subcommand: str
    B: Optional[Fraction] = None
    E: Optional[float] = None
    k: Optional[int] = None
    m: Optional[int] = None
    seed: int = Settings.CLI_DEFAULTS["seed"]
    n_samples: Optional[int] = None
    horizons: List[float] = field(default_factory=lambda: list(Settings.CLI_DEFAULTS["horizons"]))
    r0: float = Settings.CLI_DEFAULTS["r0"]
    fiber_mode: int = Settings.CLI_DEFAULTS["fiber_mode"]
    output_path: Optional[str] = None
    format: str = "json"
    genus: int = 2
    t: Optional[float] = None
    t_max: float = Settings.CLI_DEFAULTS["t_max"]
    n_points: Optional[int] = None
    dt: Optional[float] = None
    levels: List[Fraction] = field(default_factory=list)
    multiplicities: List[int] = field(default_factory=list)
    states: Optional[int] = None
    bins: Optional[int] = None
    grid_theta: int = Settings.CLI_DEFAULTS["grid"]
    grid_t: int = Settings.CLI_DEFAULTS["grid"]
    k_max: Optional[int] = None
    B_values: List[Fraction] = field(
        default_factory=lambda: [parse_rational(b) for b in Settings.CLI_DEFAULTS["B_values"]])
    input_path: Optional[str] = None
    flow: str = Settings.CLI_DEFAULTS["flow"]
    shards: int = 1
    freeze_clock: bool = False
    log_level: str = Settings.LOGGING_CONFIG["level"]
    log_file: Optional[str] = None

    def to_echo(self) -> dict:
        """Flags that determine the result, in declaration order."""
        excluded = set(Settings.REPORT_CONFIG["echo_excluded"])
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name not in excluded}

    @classmethod
    def from_namespace(cls, namespace: argparse.Namespace) -> 'RunConfig':
        """Build from parsed arguments, ignoring unknown attributes."""
        known = {f.name for f in fields(cls)}
        return cls(**{key: value for key, value in vars(namespace).items()
                      if key in known and value is not None})


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except DomainError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    physics = parser.add_argument_group("physics")
    physics.add_argument("--B", type=_rational, help="field strength (rational, e.g. 3/2)")
    physics.add_argument("--E", type=float, help="energy")
    physics.add_argument("--k", type=int, help="tensor power")
    physics.add_argument("--m", type=int, help="level index")
    physics.add_argument("--genus", type=int, help="surface genus (default 2)")
    physics.add_argument("--t", type=float, help="flow time")
    physics.add_argument("--t-max", dest="t_max", type=float, help="largest time of the growth fit")
    physics.add_argument("--n-points", dest="n_points", type=int, help="growth fit grid size")

    experiment = parser.add_argument_group("experiment")
    experiment.add_argument("--seed", type=int, help="64-bit seed (default 0)")
    experiment.add_argument("--n-samples", dest="n_samples", type=int, help="Monte-Carlo sample count")
    experiment.add_argument("--horizons", type=float, nargs="+", help="Birkhoff horizons")
    experiment.add_argument("--dt", type=float, help="Birkhoff step")
    experiment.add_argument("--states", type=int, help="initial states of a scan")
    experiment.add_argument("--flow", choices=["horocycle", "geodesic", "magnetic"],
                            help="flow of an ergodic scan (default horocycle)")
    experiment.add_argument("--r0", type=float, help="bump radius")
    experiment.add_argument("--fiber-mode", dest="fiber_mode", type=int, help="fiber Fourier mode")
    experiment.add_argument("--bins", type=int, help="radial histogram bins")
    experiment.add_argument("--grid-theta", dest="grid_theta", type=int, help="torus angle nodes")
    experiment.add_argument("--grid-t", dest="grid_t", type=int, help="torus time nodes")
    experiment.add_argument("--levels", type=_rational, nargs="+", help="diagonal model levels")
    experiment.add_argument("--multiplicities", type=int, nargs="+", help="level multiplicities")
    experiment.add_argument("--k-max", dest="k_max", type=int, help="largest tensor power of a sweep")
    experiment.add_argument("--B-values", dest="B_values", type=_rational, nargs="+",
                            help="field strengths of a sweep")
    experiment.add_argument("--input", dest="input_path", help="scan CSV for decay-fit")

    output = parser.add_argument_group("output")
    output.add_argument("--output", dest="output_path", help="report file (stdout when omitted)")
    output.add_argument("--format", choices=["json", "csv"], help="report format (default json)")
    output.add_argument("--shards", type=int, help="worker processes")
    output.add_argument("--freeze-clock", dest="freeze_clock", action="store_true", default=None,
                        help="report wall_time_ms as 0")
    output.add_argument("--log-level", dest="log_level",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], help="console log level")
    output.add_argument("--log-file", dest="log_file", help="rotating log file")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per experiment."""
    parser = argparse.ArgumentParser(
        prog="magnetic-lab",
        description=f"{Settings.APP_NAME} {Settings.APP_VERSION}: seeded experiments on "
                    "magnetic flows of the Bolza surface",
    )
    parser.add_argument("--version", action="version", version=Settings.APP_VERSION)
    subparsers = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")
    subparsers.required = True
    for name in Settings.SUBCOMMANDS:
        _add_common_arguments(subparsers.add_parser(name))
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """Parse command-line arguments into a RunConfig.

    argparse exits with status 2 and usage text on unknown subcommands or
    malformed flags.
    """
    namespace = build_parser().parse_args(argv)
    return RunConfig.from_namespace(namespace)
