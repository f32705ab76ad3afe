"""Command line interface of the tails package.

Subcommands ``tail``, ``auto``, ``brv``, ``simulate`` and ``validate``
write a JSON report (or a CSV export of the paths) to ``--out`` or to the
standard output. Exit codes: 0 success, 2 input error, 3 configuration
error. Diagnostics go to standard error, their verbosity is set by the
environment variable TAILS_LOG=quiet|info|debug.
"""
import argparse
import logging
import os
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

import numpy as np
import pandas as pd

import tails
from tails import discrete, empirical, estimators, regvar, sampling, utils
from tails.copula import Copula, validate_grid
from tails.exceptions import ConfigError, GridTooDeep, InputError, UsageError
from tails.margins import MarginSpec
from tails.settings import CONVERGENCE_TOLERANCE, DEFAULT_METHOD, DEFAULT_RANKS
from tails.settings import DEFAULT_X_SCHEDULE, EXIT_CONFIG_ERROR, EXIT_INPUT_ERROR
from tails.settings import EXIT_SUCCESS, LOG_ENV_VAR, LOG_LEVELS, MIN_TAIL_POINTS
from tails.settings import REPORT_SCHEMA

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s:%(name)s:%(message)s"
EXTENSION_CAVEAT = (
    "Copulas of discrete margins are not unique off the margins ranges; "
    "values use the checkerboard (multilinear) extension"
)


@dataclass
class RunConfig:
    """Configuration of one command run, echoed in its report."""

    command: str
    family: str = None
    params: dict = field(default_factory=dict)
    joint_pmf: str = None
    row_margin: str = None
    col_margin: str = None
    pairs: str = None
    series: str = None
    side: str = "both"
    lag: int = 1
    schedule: str = None
    scales: str = None
    method: str = DEFAULT_METHOD
    tol: float = CONVERGENCE_TOLERANCE
    ranks: str = DEFAULT_RANKS
    min_points: int = MIN_TAIL_POINTS
    seed: int = 0
    n: int = 1000
    process: str = None
    margin: str = None
    grid_size: int = 100
    out: str = None
    format: str = "json"

    @classmethod
    def from_args(cls, args):
        params = {k: getattr(args, k) for k in ("theta", "rho", "nu")
                  if getattr(args, k, None) is not None}
        fields = {k: v for k, v in vars(args).items()
                  if k in cls.__dataclass_fields__}
        return cls(params=params, **fields)

    def __post_init__(self):
        sampling.check_seed(self.seed)

    @property
    def sides(self):
        if self.side == "both":
            return [estimators.Side.UPPER, estimators.Side.LOWER]
        return [estimators.Side(self.side)]


@dataclass
class Report:
    """Estimates of a command with their full paths and the warnings
    raised while computing them."""

    config: RunConfig
    estimates: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def add(self, name, result):
        self.estimates.append((name, result))

    def to_dict(self):
        return {
            "schema": REPORT_SCHEMA,
            "tool": "tails",
            "version": tails.__version__,
            "command": self.config.command,
            "config": asdict(self.config),
            "estimates": [{"name": n, **r.to_dict()} for n, r in self.estimates],
            "warnings": list(self.warnings),
            "timestamp": datetime.now(timezone.utc).isoformat(),
        }

    def to_frame(self):
        """Plot ready table of every path, one row per level."""
        frames = []
        for name, result in self.estimates:
            if hasattr(result, "to_dataset"):
                frame = result.to_dataset().to_dataframe().reset_index()
            else:
                frame = pd.DataFrame(utils.jsonable(result.to_dict()["violations"]))
            frame.insert(0, "estimate", name)
            frames.append(frame)
        return pd.concat(frames, ignore_index=True)

    def render(self, fmt):
        if fmt == "csv":
            return self.to_frame().to_csv(index=False, float_format="%.17g")
        return utils.to_json(self.to_dict()) + "\n"


class _WarningCollector(logging.Handler):
    """Collects package warnings for the report, without duplicates."""

    def __init__(self, report):
        super().__init__(level=logging.WARNING)
        self.report = report

    def emit(self, record):
        message = record.getMessage()
        if message not in self.report.warnings:
            self.report.warnings.append(message)


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# Inputs ----------------------------------------------------------------
def _copula(config):
    """Copula handle named by a family or extending a joint pmf file."""
    if (config.family is None) == (config.joint_pmf is None):
        raise UsageError("give exactly one of --family or --joint-pmf")
    if config.family is not None:
        return Copula(config.family, config.params)
    joint = utils.read_joint_pmf(config.joint_pmf, config.row_margin, config.col_margin)
    return discrete.checkerboard_extend(discrete.subcopula_from_joint(joint))


def _schedule(config, side, n=None):
    """Requested schedule, or the default one restricted to the levels
    admissible for n observations."""
    if config.schedule is not None:
        return estimators.Schedule.parse(config.schedule)
    schedule = estimators.Schedule.default()
    if n is None:
        return schedule
    levels = schedule.levels(side)
    admissible = [t for t in levels if min(t, 1 - t) >= config.min_points / n]
    if not admissible:
        raise GridTooDeep(levels[0], n, config.min_points)
    if len(admissible) < len(levels):
        logger.warning("Default schedule truncated to %d levels admissible for %d "
                       "observations", len(admissible), n)
    return estimators.Schedule.explicit(admissible)


def _scales(config):
    if config.scales is None:
        return np.array(DEFAULT_X_SCHEDULE)
    try:
        return np.array([float(x) for x in config.scales.split(",")])
    except ValueError:
        raise UsageError(f"non numeric scales '{config.scales}'")


# Commands --------------------------------------------------------------
def cmd_tail(config):
    """Generalized tail dependence of a family, a joint pmf or a sample.
    :param config: RunConfig
    :return: Report
    """
    report = Report(config)
    sources = [config.family or config.joint_pmf, config.pairs]
    if sum(x is not None for x in sources) != 1:
        raise UsageError("give exactly one of --family, --joint-pmf or --pairs")
    if config.pairs is not None:
        sample = utils.read_pairs(config.pairs)
        for side in config.sides:
            grid = _schedule(config, side, sample.n)
            path = empirical.empirical_lambda_path(
                sample, config.ranks, side, grid, config.min_points
            )
            report.add(f"empirical_{side.value}", path)
        return report

    c = _copula(config)
    if c.is_checkerboard:
        report.warnings.append(EXTENSION_CAVEAT)
    for side in config.sides:
        schedule = _schedule(config, side)
        if side is estimators.Side.UPPER:
            tilde, standard = (estimators.lambda_tilde_upper,
                               estimators.lambda_standard_upper_path)
        else:
            tilde, standard = (estimators.lambda_tilde_lower,
                               estimators.lambda_standard_lower_path)
        report.add(f"lambda_tilde_{side.value}",
                   tilde(c, schedule, config.method, config.tol))
        if not c.is_checkerboard:
            report.add(f"lambda_standard_{side.value}",
                       standard(c, schedule, config.method, config.tol))
    return report


def cmd_auto(config):
    """Generalized auto tail dependence of a series at a lag.
    :param config: RunConfig
    :return: Report
    """
    if config.series is None:
        raise UsageError("the auto command needs --series")
    series = utils.read_series(config.series)
    report = Report(config)
    for side in config.sides:
        grid = _schedule(config, side, series.n - config.lag)
        if side is estimators.Side.UPPER:
            path = empirical.auto_tail_param(
                series, config.lag, grid, config.ranks, config.min_points)
        else:
            path = empirical.auto_tail_lower(
                series, config.lag, grid, config.ranks, config.min_points)
        report.add(f"auto_tail_{side.value}", path)
    return report


def cmd_brv(config):
    """Regular variation consistency nu(1, 1) = upper tail dependence.
    :param config: RunConfig
    :return: Report
    """
    c = _copula(config)
    report = Report(config)
    if c.is_checkerboard:
        report.warnings.append(EXTENSION_CAVEAT)
    s = estimators.Schedule.parse(config.schedule) if config.schedule else None
    result = regvar.brv_consistency(c, _scales(config), s, config.method, config.tol)
    report.add("brv_consistency", result)
    return report


def cmd_simulate(config):
    """Seeded sample of a copula (two columns) or of the moving maximum
    process (one column) as CSV text with a '#' header line.
    :param config: RunConfig
    :return: CSV text
    """
    header = f"# tails {tails.__version__} simulate n={config.n} seed={config.seed}"
    if config.process is not None:
        if config.process != "moving-max" or config.margin is not None:
            raise UsageError("--process moving-max takes no --margin")
        columns = [sampling.moving_max_series(config.n, config.seed).values]
        header += " process=moving-max"
    else:
        c = _copula(config)
        sample = sampling.sample_copula(c, config.n, config.seed)
        columns = [sample.x, sample.y]
        header += f" copula={c}"
        if config.margin is not None:
            margin = MarginSpec.parse(config.margin)
            columns = [sampling.apply_margin(x, margin) for x in columns]
            header += f" margin={margin}"
    frame = pd.DataFrame(np.column_stack(columns))
    body = frame.to_csv(header=False, index=False, float_format="%.17g")
    return header + "\n" + body


def cmd_validate(config):
    """Copula identities checked on a regular grid.
    :param config: RunConfig
    :return: Report
    """
    report = Report(config)
    report.add("validate_grid", validate_grid(_copula(config), config.grid_size))
    return report


COMMANDS = {
    "tail": cmd_tail,
    "auto": cmd_auto,
    "brv": cmd_brv,
    "simulate": cmd_simulate,
    "validate": cmd_validate,
}


# Parser ----------------------------------------------------------------
def _add_copula_args(parser):
    parser.add_argument("--family", help="Copula family, e.g. clayton or student-t")
    parser.add_argument("--theta", type=float, help="Archimedean parameter")
    parser.add_argument("--rho", type=float, help="Correlation parameter")
    parser.add_argument("--nu", type=float, help="Degrees of freedom")
    parser.add_argument("--joint-pmf", help="CSV file of a joint pmf")
    parser.add_argument("--row-margin", help="CSV file of the row atoms and probs")
    parser.add_argument("--col-margin", help="CSV file of the column atoms and probs")


def _add_limit_args(parser, side="both"):
    parser.add_argument("--side", choices=["upper", "lower", "both"], default=side)
    parser.add_argument("--schedule", help="geometric:<t0>,<r>,<K> or explicit:<t,...>")
    parser.add_argument("--method", choices=["aitken", "last"], default=DEFAULT_METHOD)
    parser.add_argument("--tol", type=float, default=CONVERGENCE_TOLERANCE)


def _add_empirical_args(parser):
    parser.add_argument("--ranks", choices=["max", "mid"], default=DEFAULT_RANKS)
    parser.add_argument("--min-points", type=int, default=MIN_TAIL_POINTS)


def build_parser():
    parser = _ArgumentParser(prog="tails", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=tails.__version__)
    commands = parser.add_subparsers(dest="command", required=True)
    output = _ArgumentParser(add_help=False)
    output.add_argument("--out", help="Output file, standard output by default")
    output.add_argument("--format", choices=["json", "csv"], default="json")

    tail = commands.add_parser("tail", parents=[output], help=cmd_tail.__doc__)
    _add_copula_args(tail)
    tail.add_argument("--pairs", help="CSV file of (x, y) observations")
    _add_limit_args(tail)
    _add_empirical_args(tail)

    auto = commands.add_parser("auto", parents=[output], help=cmd_auto.__doc__)
    auto.add_argument("--series", help="CSV file of one series column")
    auto.add_argument("--lag", type=int, default=1)
    _add_limit_args(auto, side="upper")
    _add_empirical_args(auto)

    brv = commands.add_parser("brv", parents=[output], help=cmd_brv.__doc__)
    _add_copula_args(brv)
    brv.add_argument("--scales", help="Increasing scales x, e.g. 10,100,1000")
    brv.add_argument("--schedule", help="Upper tail schedule, matched by default")
    brv.add_argument("--method", choices=["aitken", "last"], default=DEFAULT_METHOD)
    brv.add_argument("--tol", type=float, default=CONVERGENCE_TOLERANCE)

    simulate = commands.add_parser("simulate", help=cmd_simulate.__doc__)
    _add_copula_args(simulate)
    simulate.add_argument("--process", choices=["moving-max"])
    simulate.add_argument("--margin", help="uniform, unit-frechet, unit-pareto, ...")
    simulate.add_argument("--n", type=int, default=1000)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--out", help="Output file, standard output by default")

    validate = commands.add_parser("validate", parents=[output],
                                   help=cmd_validate.__doc__)
    _add_copula_args(validate)
    validate.add_argument("--grid-size", type=int, default=100)
    return parser


def configure_logging():
    """Standard error diagnostics at the level named by TAILS_LOG; package
    warnings stay enabled for the reports."""
    name = os.environ.get(LOG_ENV_VAR, "").strip().lower()
    level = logging.getLevelName(LOG_LEVELS.get(name, "WARNING"))
    if not logging.root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler.setLevel(level)
        logging.root.addHandler(handler)
    logging.getLogger("tails").setLevel(min(level, logging.WARNING))


def run(config):
    """Runs a command and writes its output.
    :param config: RunConfig
    :return: Report, or CSV text for simulate
    """
    if config.command == "simulate":
        result = cmd_simulate(config)
        utils.atomic_write(config.out, result)
        return result
    package_logger = logging.getLogger("tails")
    report = Report(config)
    collector = _WarningCollector(report)
    package_logger.addHandler(collector)
    try:
        result = COMMANDS[config.command](config)
    finally:
        package_logger.removeHandler(collector)
    result.warnings = report.warnings + [
        w for w in result.warnings if w not in report.warnings
    ]
    utils.atomic_write(config.out, result.render(config.format))
    return result


def main(argv=None):
    """Console entry point, returns the exit code."""
    configure_logging()
    try:
        config = RunConfig.from_args(build_parser().parse_args(argv))
        logger.debug("Running %s", config)
        run(config)
    except InputError as error:
        logger.error(error)
        return EXIT_INPUT_ERROR
    except ConfigError as error:
        logger.error(error)
        return EXIT_CONFIG_ERROR
    return EXIT_SUCCESS


if __name__ == "__main__":
    sys.exit(main())
