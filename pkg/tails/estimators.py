"""Generalized tail dependence of copulas along level schedules.

The generalized upper and lower tail dependence are the limits of the
corner box volume ratios

    V_C([t, 1] x [t, 1]) / (1 - t),  t -> 1
    V_C([0, t] x [0, t]) / t,        t -> 0

which are defined for any copula, including checkerboard extensions of
discrete laws. Limits are approximated along a schedule of levels and,
when possible, accelerated with the Aitken delta-squared process.
"""
import enum
import logging
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import xarray as xr

from tails.copula import Rect
from tails.discrete import EXTENSION, partitioned_volume
from tails.exceptions import IncompatibleFamily, InvalidSchedule, NonMonotone
from tails.settings import AITKEN_DENOMINATOR_FLOOR, CONVERGENCE_TOLERANCE
from tails.settings import DEFAULT_METHOD, DEFAULT_SCHEDULE
from tails.settings import NEGATIVE_VOLUME_TOLERANCE, RATIO_CEILING
from tails.settings import SURVIVAL_SWITCH

logger = logging.getLogger(__name__)


class Side(str, enum.Enum):
    UPPER = "upper"
    LOWER = "lower"


class Method(str, enum.Enum):
    LAST_VALUE = "last"
    AITKEN = "aitken"


@dataclass(frozen=True)
class Schedule:
    """Levels approaching a corner of the unit square.

    Geometric schedules are given by the corner distances d_k = t0 r^k,
    k = 0..count-1, the lower tail levels are t = d_k and the upper tail
    levels t = 1 - d_k. Explicit schedules use their levels as given.
    """

    kind: str
    t0: float = None
    r: float = None
    count: int = None
    values: tuple = field(default=())

    @classmethod
    def geometric(cls, t0, r, count):
        if not (0 < t0 < 1 and 0 < r < 1):
            raise InvalidSchedule(f"geometric base {t0} and ratio {r} not in (0, 1)")
        if int(count) != count or count < 1:
            raise InvalidSchedule(f"geometric count {count} is not a positive integer")
        return cls("geometric", float(t0), float(r), int(count))

    @classmethod
    def explicit(cls, levels):
        levels = tuple(float(t) for t in levels)
        if not levels:
            raise InvalidSchedule("explicit schedule without levels")
        if not all(0 < t < 1 for t in levels):
            raise InvalidSchedule(f"levels {levels} not strictly inside (0, 1)")
        return cls("explicit", values=levels)

    @classmethod
    def default(cls):
        return cls.geometric(*DEFAULT_SCHEDULE)

    @classmethod
    def parse(cls, text):
        """Parses 'geometric:<t0>,<r>,<K>' or 'explicit:<t1>,<t2>,...'.
        :param text: Schedule description
        :return: Schedule
        """
        kind, _, args = text.partition(":")
        try:
            numbers = [float(x) for x in args.split(",") if x.strip()]
        except ValueError:
            raise InvalidSchedule(f"non numeric values in '{text}'")
        if kind == "geometric" and len(numbers) == 3:
            return cls.geometric(*numbers)
        if kind == "explicit":
            return cls.explicit(numbers)
        raise InvalidSchedule(f"cannot parse '{text}'")

    @property
    def distances(self):
        return self.t0 * self.r ** np.arange(self.count)

    def levels(self, side):
        """Levels of the schedule for one tail, checked to approach it.
        :param side: Side of the tail
        :return: Array of levels in (0, 1)
        """
        side = Side(side)
        if self.kind == "geometric":
            d = self.distances
            levels = d if side is Side.LOWER else 1.0 - d
        else:
            levels = np.array(self.values)
        # Deep geometric levels round onto the corner itself
        if not np.all((levels > 0) & (levels < 1)):
            raise InvalidSchedule(
                f"{self} reaches the {side.value} corner in floating point"
            )
        steps = np.diff(levels) if side is Side.UPPER else -np.diff(levels)
        if np.any(steps <= 0):
            raise InvalidSchedule(f"levels do not approach the {side.value} corner")
        return levels

    def __str__(self):
        if self.kind == "geometric":
            return f"geometric:{self.t0!r},{self.r!r},{self.count}"
        return "explicit:" + ",".join(repr(t) for t in self.values)


class Extrapolation(NamedTuple):
    value: float
    converged: bool
    method: Method


@dataclass(frozen=True, eq=False)
class TailEstimate:
    """Ratio path of a tail dependence limit and its extrapolation."""

    side: Side
    levels: np.ndarray
    ratios: np.ndarray
    extrapolated: float
    converged: bool
    method: Method
    formula: str = "volume"
    copula: str = None
    extension: str = None

    @property
    def path(self):
        return list(zip(self.levels.tolist(), self.ratios.tolist()))

    @property
    def raw_last(self):
        return float(self.ratios[-1])

    def to_dict(self):
        return {
            "side": self.side.value,
            "formula": self.formula,
            "copula": self.copula,
            "extension": self.extension,
            "method": self.method.value,
            "extrapolated": self.extrapolated,
            "raw_last": self.raw_last,
            "converged": self.converged,
            "path": {"t": self.levels.tolist(), "ratio": self.ratios.tolist()},
        }

    def to_dataset(self):
        """Path as a Dataset indexed by the level ``t``."""
        attrs = {
            k: v for k, v in self.to_dict().items() if k != "path" and v is not None
        }
        return xr.Dataset(
            {"ratio": ("t", self.ratios)}, coords={"t": self.levels}, attrs=attrs
        )


def extrapolate(path, method=DEFAULT_METHOD, tol=CONVERGENCE_TOLERANCE, upper=1.0):
    """Limit of a ratio path.

    LastValue returns the final ratio. Aitken applies the delta-squared
    process to the last ratios and returns the last accelerated value,
    converged when the last two ratios or the last two accelerated values
    differ by less than tol. Paths too short for Aitken, or with a vanishing denominator,
    fall back to LastValue with convergence from the raw differences.
    :param path: Sequence of (t, ratio) pairs in schedule order
    :param method: 'aitken' or 'last'
    :param tol: Convergence tolerance
    :param upper: Largest possible limit, values are clipped to [0, upper]
    :return: Extrapolation (value, converged, method used)
    """
    method = Method(method)
    x = np.array([ratio for _, ratio in path], dtype=float)
    if x.size == 0:
        raise InvalidSchedule("empty ratio path")
    last = Extrapolation(
        float(np.clip(x[-1], 0.0, upper)),
        bool(x.size > 1 and abs(x[-1] - x[-2]) < tol),
        Method.LAST_VALUE,
    )
    if method is Method.LAST_VALUE:
        return last
    if x.size < 3:
        logger.warning("Aitken needs 3 ratios, got %d; using last value", x.size)
        return last

    denominators = x[2:] - 2.0 * x[1:-1] + x[:-2]
    if abs(denominators[-1]) < AITKEN_DENOMINATOR_FLOOR:
        logger.warning("Degenerate Aitken acceleration; using last value")
        return last
    with np.errstate(divide="ignore", invalid="ignore"):
        accelerated = x[2:] - (x[2:] - x[1:-1]) ** 2 / denominators
    # A flat path cannot be extrapolated further than its spread
    flat = np.ptp(x[-3:]) < tol
    if not np.isfinite(accelerated[-1]) or (
        flat and abs(accelerated[-1] - x[-1]) > tol
    ):
        logger.warning("Unstable Aitken acceleration; using last value")
        return last
    value = float(np.clip(accelerated[-1], 0.0, upper))
    converged = last.converged or bool(
        accelerated.size > 1 and abs(accelerated[-1] - accelerated[-2]) < tol
    )
    return Extrapolation(value, converged, Method.AITKEN)


def upper_volume(c, u, v=None):
    """C-volume of the upper corner boxes [u, 1] x [v, 1].
    Closed-form volumes are used when the family has them, corners
    closer to (1, 1) than SURVIVAL_SWITCH are evaluated as survival
    values, other boxes by the four corner sum.
    :param c: Copula handle
    :param u: Array of lower u bounds
    :param v: Array of lower v bounds, defaults to u
    :return: Array of non negative volumes
    """
    u = np.asarray(u, dtype=float)
    v = u if v is None else np.asarray(v, dtype=float)
    if c.has_closed_volume:
        volumes = c.box_volume(u, 1.0, v, 1.0)
    else:
        deep = np.minimum(u, v) > SURVIVAL_SWITCH
        volumes = np.where(
            deep, c.survival(u, v), c.box_volume(u, 1.0, v, 1.0)
        )
    volumes = np.asarray(volumes, dtype=float)
    if volumes.size and volumes.min() < -NEGATIVE_VOLUME_TOLERANCE:
        k = int(np.argmin(volumes))
        rect = Rect(float(u.flat[k]), 1.0, float(v.flat[k]), 1.0)
        raise NonMonotone(float(volumes.min()), rect)
    return np.maximum(volumes, 0.0)


def _estimate(c, side, levels, ratios, method, tol, formula):
    if np.any(ratios > RATIO_CEILING):
        logger.warning("Ratios of %s above 1 by more than rounding", c)
    result = extrapolate(zip(levels, ratios), method, tol)
    converged = result.converged
    if getattr(c, "slow_tail", False):
        logger.warning("Tail ratios of %s converge slowly, limit not reached", c)
        converged = False
    elif not converged:
        logger.warning("The %s tail ratios of %s did not converge", side.value, c)
    return TailEstimate(
        side=side,
        levels=np.asarray(levels, dtype=float),
        ratios=np.asarray(ratios, dtype=float),
        extrapolated=result.value,
        converged=converged,
        method=result.method,
        formula=formula,
        copula=str(c),
        extension=EXTENSION if c.is_checkerboard else None,
    )


def lambda_tilde_upper(c, s=None, method=DEFAULT_METHOD, tol=CONVERGENCE_TOLERANCE):
    """Generalized upper tail dependence, V_C([t,1]^2) / (1 - t) as t -> 1.
    :param c: Copula handle
    :param s: Schedule, defaults to t = 1 - 10^-k, k = 1..8
    :param method: Extrapolation method, 'aitken' or 'last'
    :param tol: Convergence tolerance
    :return: TailEstimate
    """
    levels = (s or Schedule.default()).levels(Side.UPPER)
    logger.debug("Computing upper volume ratios on %d levels", levels.size)
    ratios = upper_volume(c, levels) / (1.0 - levels)
    return _estimate(c, Side.UPPER, levels, ratios, method, tol, "volume")


def lambda_tilde_lower(c, s=None, method=DEFAULT_METHOD, tol=CONVERGENCE_TOLERANCE):
    """Generalized lower tail dependence, V_C([0,t]^2) / t = C(t,t) / t
    as t -> 0.
    :param c: Copula handle
    :param s: Schedule, defaults to t = 10^-k, k = 1..8
    :param method: Extrapolation method, 'aitken' or 'last'
    :param tol: Convergence tolerance
    :return: TailEstimate
    """
    levels = (s or Schedule.default()).levels(Side.LOWER)
    logger.debug("Computing lower volume ratios on %d levels", levels.size)
    ratios = np.asarray(c.cdf(levels, levels), dtype=float) / levels
    return _estimate(c, Side.LOWER, levels, ratios, method, tol, "volume")


def lambda_standard_upper_path(
    c, s=None, method=DEFAULT_METHOD, tol=CONVERGENCE_TOLERANCE
):
    """Standard upper tail dependence ratios 2 - (1 - C(t,t)) / (1 - t),
    only meaningful for continuous margins.
    :param c: Copula handle of a continuous family
    :param s: Schedule, defaults to t = 1 - 10^-k, k = 1..8
    :return: TailEstimate
    """
    if c.is_checkerboard:
        raise IncompatibleFamily(c.family, "lambda_standard_upper_path")
    levels = (s or Schedule.default()).levels(Side.UPPER)
    ratios = 2.0 - (1.0 - np.asarray(c.cdf(levels, levels))) / (1.0 - levels)
    return _estimate(c, Side.UPPER, levels, ratios, method, tol, "standard")


def lambda_standard_lower_path(
    c, s=None, method=DEFAULT_METHOD, tol=CONVERGENCE_TOLERANCE
):
    """Standard lower tail dependence ratios C(t,t) / t, only meaningful
    for continuous margins.
    :param c: Copula handle of a continuous family
    :param s: Schedule, defaults to t = 10^-k, k = 1..8
    :return: TailEstimate
    """
    if c.is_checkerboard:
        raise IncompatibleFamily(c.family, "lambda_standard_lower_path")
    levels = (s or Schedule.default()).levels(Side.LOWER)
    ratios = np.asarray(c.cdf(levels, levels), dtype=float) / levels
    return _estimate(c, Side.LOWER, levels, ratios, method, tol, "standard")


def partitioned_volume_ratio(c, side, t):
    """Tail ratio of a checkerboard copula with the box volume summed over
    the cells of its discontinuity partition.
    :param c: Checkerboard copula handle
    :param side: 'upper' or 'lower'
    :param t: Level in (0, 1)
    :return: Ratio V / (1 - t) (upper) or V / t (lower)
    """
    side = Side(side)
    if not 0 < t < 1:
        raise InvalidSchedule(f"level {t} not strictly inside (0, 1)")
    if side is Side.UPPER:
        return partitioned_volume(c, Rect.upper(t)) / (1.0 - t)
    return partitioned_volume(c, Rect.lower(t)) / t
