"""Empirical copulas of paired samples and empirical (auto) tail
dependence paths.

Observations enter only through their ranks, the pseudo-observations
R / n of every coordinate. Ties get their maximal rank by default, which
makes the margins right continuous empirical cdfs, or their average rank.
Empirical paths are never extrapolated: the tail boxes must hold at least
``min_points`` observations in expectation, deeper levels are rejected.
"""
import enum
import logging
from dataclasses import dataclass

import dask
import numpy as np
import xarray as xr
from scipy.stats import rankdata

from tails.estimators import Method, Side, TailEstimate
from tails.exceptions import GridTooDeep, InvalidParameter, InvalidSample
from tails.settings import DASK_SCHEDULER, DEFAULT_RANKS, MIN_TAIL_POINTS

logger = logging.getLogger(__name__)


class RankMethod(str, enum.Enum):
    MAX = "max"
    MID = "mid"

    @property
    def scipy_method(self):
        return "max" if self is RankMethod.MAX else "average"


def _finite(name, values):
    values = np.asarray(values, dtype=float).ravel()
    if not np.all(np.isfinite(values)):
        raise InvalidSample(f"non finite values in {name}")
    return values


@dataclass(frozen=True, eq=False)
class PairedSample:
    """Observations of a pair (X, Y)."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x, y = _finite("x", self.x), _finite("y", self.y)
        if x.size != y.size:
            raise InvalidSample(f"{x.size} x values for {y.size} y values")
        if x.size < 2:
            raise InvalidSample(f"at least 2 pairs needed, got {x.size}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self):
        return self.x.size

    def pseudo_observations(self, m=DEFAULT_RANKS):
        return pseudo_observations(self.x, m), pseudo_observations(self.y, m)


@dataclass(frozen=True, eq=False)
class SeriesSample:
    """Observations X_1, ..., X_n of a stationary series."""

    values: np.ndarray

    def __post_init__(self):
        values = _finite("series", self.values)
        if values.size < 2:
            raise InvalidSample(f"at least 2 values needed, got {values.size}")
        object.__setattr__(self, "values", values)

    @property
    def n(self):
        return self.values.size


@dataclass(frozen=True, eq=False)
class AutoTailPath:
    """Empirical auto tail dependence at lag h along a schedule."""

    lag: int
    side: Side
    levels: np.ndarray
    values: np.ndarray
    pairs: int

    @property
    def path(self):
        return list(zip(self.levels.tolist(), self.values.tolist()))

    @property
    def extrapolated(self):
        """Value at the deepest level with a defined ratio."""
        defined = self.values[np.isfinite(self.values)]
        return float(defined[-1]) if defined.size else float("nan")

    @property
    def converged(self):
        return False

    def to_dict(self):
        return {
            "lag": self.lag,
            "side": self.side.value,
            "pairs": self.pairs,
            "extrapolated": self.extrapolated,
            "converged": self.converged,
            "path": {"t": self.levels.tolist(), "value": self.values.tolist()},
        }

    def to_dataset(self):
        """Path as a Dataset indexed by the level ``t``."""
        attrs = {k: v for k, v in self.to_dict().items() if k != "path"}
        return xr.Dataset(
            {"ratio": ("t", self.values)}, coords={"t": self.levels}, attrs=attrs
        )


def pseudo_observations(values, m=DEFAULT_RANKS):
    """Ranks divided by the sample size.
    :param values: Observations
    :param m: Rank method for ties, 'max' or 'mid'
    :return: Array of values in (0, 1]
    """
    values = np.asarray(values)
    return rankdata(values, method=RankMethod(m).scipy_method) / values.size


def empirical_copula_cdf(s, m, u, v):
    """Empirical copula (1/n) #{i : R_i/n <= u and S_i/n <= v}.
    :param s: PairedSample
    :param m: Rank method, 'max' or 'mid'
    :param u: Scalar or array in [0, 1]
    :param v: Scalar or array in [0, 1]
    :return: Empirical C(u, v)
    """
    pu, pv = s.pseudo_observations(m)
    u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
    counts = [np.count_nonzero((pu <= a) & (pv <= b)) for a, b in zip(u.flat, v.flat)]
    return (np.array(counts, dtype=float) / s.n).reshape(u.shape)[()]


def _check_level(t, n, min_points):
    if min(t, 1.0 - t) < min_points / n:
        raise GridTooDeep(t, n, min_points)


def _tail_ratio(pu, pv, side, t):
    """Corner box count over conditioning strip count, nan when empty."""
    if side is Side.UPPER:
        strip, other = pu > t, pv > t
    else:
        strip, other = pu <= t, pv <= t
    denominator = np.count_nonzero(strip)
    if denominator == 0:
        logger.warning("No observations condition the %s tail at t=%s", side.value, t)
        return float("nan")
    return np.count_nonzero(strip & other) / denominator


def _ratio_path(pu, pv, side, levels, min_points):
    for t in levels:
        _check_level(t, pu.size, min_points)
    return np.array([_tail_ratio(pu, pv, side, t) for t in levels], dtype=float)


def empirical_lambda_path(s, m, side, grid, min_points=MIN_TAIL_POINTS):
    """Generalized tail dependence ratios of the empirical copula.
    :param s: PairedSample
    :param m: Rank method, 'max' or 'mid'
    :param side: 'upper' or 'lower'
    :param grid: Schedule of levels
    :param min_points: Minimum expected number of points in a tail box
    :return: TailEstimate, never extrapolated nor converged
    """
    side = Side(side)
    levels = grid.levels(side)
    logger.debug("Computing empirical %s ratios on %d levels", side.value, levels.size)
    pu, pv = s.pseudo_observations(m)
    ratios = _ratio_path(pu, pv, side, levels, min_points)
    defined = ratios[np.isfinite(ratios)]
    return TailEstimate(
        side=side,
        levels=np.asarray(levels, dtype=float),
        ratios=ratios,
        extrapolated=float(defined[-1]) if defined.size else float("nan"),
        converged=False,
        method=Method.LAST_VALUE,
        formula="empirical",
    )


def _check_lag(s, h):
    if int(h) != h or not 1 <= h <= s.n - 2:
        raise InvalidParameter("auto tail", "lag", h, f"integer in [1, {s.n - 2}]")
    return int(h)


def _lagged(s, h, m):
    observations = pseudo_observations(s.values, m)
    return observations[:-h], observations[h:]


def auto_tail_level(s, h, t, m=DEFAULT_RANKS, min_points=MIN_TAIL_POINTS):
    """Auto tail dependence P(X_{i+h} > q | X_i > q) at the empirical
    quantile q = inf{y : F_n(y) >= t}.

    F_n is the pseudo-observation map of the rank method, the right
    continuous empirical cdf for 'max' and average rank / n for 'mid',
    which puts ties in the middle of their step. Since X_i > q exactly
    when F_n(X_i) > F_n(q), the level equals the :func:`auto_tail_param`
    ratio of the same rank method whenever t is one of the
    pseudo-observations; in between, q moves to the next observation and
    the level rounds t up.
    :param s: SeriesSample
    :param h: Lag, 1 <= h <= n - 2
    :param t: Level in (0, 1)
    :param m: Rank method, 'max' or 'mid'
    :param min_points: Minimum expected number of exceedances
    :return: Exceedance ratio, nan when no X_i exceeds q
    """
    h = _check_lag(s, h)
    _check_level(t, s.n - h, min_points)
    observations = pseudo_observations(s.values, m)
    candidates = s.values[observations >= t]
    if candidates.size == 0:
        logger.warning("Empirical quantile at t=%s is undefined", t)
        return float("nan")
    q = candidates.min()
    head, tail = s.values[:-h] > q, s.values[h:] > q
    denominator = np.count_nonzero(head)
    if denominator == 0:
        logger.warning("No exceedances of the quantile at t=%s", t)
        return float("nan")
    return np.count_nonzero(head & tail) / denominator


def _auto_tail(s, h, side, grid, m, min_points):
    h = _check_lag(s, h)
    levels = grid.levels(side)
    logger.debug("Computing lag %d %s auto tail on %d levels", h, side.value, len(levels))
    head, tail = _lagged(s, h, m)
    values = _ratio_path(head, tail, side, levels, min_points)
    if np.isnan(values).any():
        logger.warning("Auto tail ratio undefined at %d levels", np.isnan(values).sum())
    return AutoTailPath(h, side, np.asarray(levels, dtype=float), values, s.n - h)


def auto_tail_param(s, h, grid, m=DEFAULT_RANKS, min_points=MIN_TAIL_POINTS):
    """Generalized upper auto tail dependence, the volume ratio
    V([t,1]^2) / (1 - t) of the empirical copula of (X_i, X_{i+h}).
    :param s: SeriesSample
    :param h: Lag, 1 <= h <= n - 2
    :param grid: Schedule of levels
    :param m: Rank method, 'max' or 'mid'
    :param min_points: Minimum expected number of points in a tail box
    :return: AutoTailPath
    """
    return _auto_tail(s, h, Side.UPPER, grid, m, min_points)


def auto_tail_lower(s, h, grid, m=DEFAULT_RANKS, min_points=MIN_TAIL_POINTS):
    """Lower tail mirror of :func:`auto_tail_param`, V([0,t]^2) / t."""
    return _auto_tail(s, h, Side.LOWER, grid, m, min_points)


def replicate_auto_tail_level(
    generate, h, t, replications, seed, m=DEFAULT_RANKS, min_points=MIN_TAIL_POINTS
):
    """Auto tail levels of independent replications of a series.
    Every replication draws from its own child of SeedSequence(seed), the
    result does not depend on the scheduling of the replications.
    :param generate: Callable, numpy Generator -> SeriesSample
    :param h: Lag
    :param t: Level in (0, 1)
    :param replications: Number of replications
    :param seed: Non negative integer seed
    :param m: Rank method, 'max' or 'mid'
    :return: Array of levels, one per replication
    """
    children = np.random.SeedSequence(seed).spawn(replications)

    def replicate(child):
        rng = np.random.Generator(np.random.PCG64(child))
        return auto_tail_level(generate(rng), h, t, m, min_points)

    tasks = [dask.delayed(replicate)(child) for child in children]
    logger.debug("Running %d auto tail replications", replications)
    return np.array(dask.compute(*tasks, scheduler=DASK_SCHEDULER), dtype=float)
