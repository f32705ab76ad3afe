"""Bivariate regular variation of copulas.

A copula with upper tail dependence is regularly varying with limit
measure nu(w, z) = lim x V_C([1 - z/x, 1] x [1 - w/x, 1]) as x -> infinity.
The substitution t = 1 - 1/x turns x V_C([1 - 1/x, 1]^2) into the upper
tail ratio, so nu(1, 1) equals the generalized upper tail dependence.
"""
import logging
from dataclasses import dataclass

import numpy as np
import xarray as xr

from tails.copula import Rect
from tails.discrete import DiscretePMF, partitioned_volume
from tails.estimators import Method, Schedule, extrapolate, lambda_tilde_upper
from tails.estimators import upper_volume
from tails.exceptions import DegenerateBox, InvalidSchedule
from tails.margins import MarginSpec
from tails.settings import CONVERGENCE_TOLERANCE, DEFAULT_METHOD
from tails.settings import DEFAULT_X_SCHEDULE

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TailQuantileFn:
    """Tail quantile function U(x) = inf{y : P(X > y) <= 1/x} of a
    margin, a DiscretePMF or a margin description such as 'unit-pareto'."""

    source: MarginSpec

    def __post_init__(self):
        source = self.source
        if isinstance(source, DiscretePMF):
            source = MarginSpec("discrete", pmf=source)
        elif isinstance(source, str):
            source = MarginSpec.parse(source)
        object.__setattr__(self, "source", source)

    def __call__(self, x):
        return self.source.tail_quantile(x)


def tail_quantile(f, x):
    """Evaluates a tail quantile function.
    :param f: TailQuantileFn
    :param x: Scale, x > 1
    :return: U(x), a support atom for discrete sources
    """
    return f(x)


@dataclass(frozen=True, eq=False)
class NuEstimate:
    """Path x -> x V_C([1 - z/x, 1] x [1 - w/x, 1]) and its limit."""

    w: float
    z: float
    x_schedule: np.ndarray
    path: np.ndarray
    estimate: float
    converged: bool
    method: Method

    def to_dict(self):
        return {
            "w": self.w,
            "z": self.z,
            "estimate": self.estimate,
            "converged": self.converged,
            "method": self.method.value,
            "path": {"x": self.x_schedule.tolist(), "nu": self.path.tolist()},
        }


def _check_box(w, z):
    if not (np.isfinite(w) and np.isfinite(z) and w > 0 and z > 0):
        raise DegenerateBox(w, z)


def _check_scales(xs, w, z):
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 1 or xs.size == 0 or np.any(np.diff(xs) <= 0):
        raise InvalidSchedule("scales x must be a strictly increasing list")
    if np.any(xs <= max(w, z)):
        raise InvalidSchedule(f"scales x must exceed max(w, z) = {max(w, z)}")
    return xs


def nu_estimate(
    c, w, z, xs=DEFAULT_X_SCHEDULE, method=DEFAULT_METHOD, tol=CONVERGENCE_TOLERANCE
):
    """Limit measure nu(w, z) of the upper corner boxes of a copula.
    The box volumes are evaluated like the upper tail ratios, checkerboard
    copulas sum them over the discontinuity partition of each box.

    The path is x V_C([1 - z/x, 1] x [1 - w/x, 1]) with x replaced by the
    realised scale z / (1 - u), u = 1 - z/x being the rounded lower corner.
    Both agree up to rounding of u, and with w = z = 1 on the matched
    scales x = 1 / (1 - t) the path equals the upper tail ratios of
    :func:`lambda_tilde_upper` exactly, not only in the limit.
    :param c: Copula handle
    :param w: Box scale of the second coordinate, > 0
    :param z: Box scale of the first coordinate, > 0
    :param xs: Strictly increasing scales, all > max(w, z)
    :param method: Extrapolation method, 'aitken' or 'last'
    :param tol: Convergence tolerance
    :return: NuEstimate
    """
    _check_box(w, z)
    xs = _check_scales(xs, w, z)
    u, v = 1.0 - z / xs, 1.0 - w / xs
    logger.debug("Computing nu(%s, %s) of %s on %d scales", w, z, c, xs.size)
    if c.is_checkerboard:
        volumes = np.array([
            partitioned_volume(c, Rect(a, 1.0, b, 1.0)) for a, b in zip(u, v)
        ])
    else:
        volumes = upper_volume(c, u, v)
    # Scaled by the realised box width z / (1 - u) instead of x
    path = volumes * z / (1.0 - u)
    result = extrapolate(zip(xs, path), method, tol, upper=min(w, z))
    converged = result.converged and not c.slow_tail
    if not converged:
        logger.warning("nu(%s, %s) of %s did not converge", w, z, c)
    return NuEstimate(float(w), float(z), xs, path, result.value, converged,
                      result.method)


@dataclass(frozen=True, eq=False)
class BRVCheckResult:
    """Comparison of nu(1, 1) with the generalized upper tail dependence."""

    nu: NuEstimate
    tail: object  # TailEstimate of the upper tail
    matched: bool

    @property
    def x_schedule(self):
        return self.nu.x_schedule

    @property
    def nu_path(self):
        return self.nu.path

    @property
    def nu_estimate(self):
        return self.nu.estimate

    @property
    def lambda_tilde_u(self):
        return self.tail.extrapolated

    @property
    def discrepancy(self):
        return abs(self.nu_estimate - self.lambda_tilde_u)

    @property
    def path_discrepancy(self):
        """Largest pointwise difference of matched paths, None otherwise."""
        if not self.matched:
            return None
        return float(np.max(np.abs(self.nu.path - self.tail.ratios)))

    @property
    def converged(self):
        return self.nu.converged and self.tail.converged

    def to_dict(self):
        return {
            "matched": self.matched,
            "nu_estimate": self.nu_estimate,
            "lambda_tilde_u": self.lambda_tilde_u,
            "discrepancy": self.discrepancy,
            "path_discrepancy": self.path_discrepancy,
            "converged": self.converged,
            "nu": self.nu.to_dict(),
            "lambda": self.tail.to_dict(),
        }

    def to_dataset(self):
        """Paths as a Dataset indexed by the scale ``x``; the tail ratio
        path is aligned through t = 1 - 1/x only when schedules match."""
        data = {"nu": ("x", self.nu.path)}
        if self.matched:
            data["ratio"] = ("x", self.tail.ratios)
        attrs = {k: v for k, v in self.to_dict().items()
                 if not isinstance(v, dict) and v is not None}
        return xr.Dataset(data, coords={"x": self.nu.x_schedule}, attrs=attrs)


def brv_consistency(
    c, xs=DEFAULT_X_SCHEDULE, s=None, method=DEFAULT_METHOD, tol=CONVERGENCE_TOLERANCE
):
    """Checks nu(1, 1) against the generalized upper tail dependence.
    :param c: Copula handle
    :param xs: Strictly increasing scales, all > 1
    :param s: Upper tail schedule, defaults to the matched t = 1 - 1/x
    :param method: Extrapolation method, 'aitken' or 'last'
    :param tol: Convergence tolerance
    :return: BRVCheckResult
    """
    xs = _check_scales(xs, 1.0, 1.0)
    matched_levels = 1.0 - 1.0 / xs
    s = s or Schedule.explicit(matched_levels)
    nu = nu_estimate(c, 1.0, 1.0, xs, method, tol)
    tail = lambda_tilde_upper(c, s, method, tol)
    matched = np.array_equal(tail.levels, matched_levels)
    result = BRVCheckResult(nu, tail, matched)
    logger.info("nu(1, 1) = %s, upper tail = %s, discrepancy %s",
                result.nu_estimate, result.lambda_tilde_u, result.discrepancy)
    return result


def mc_nu_path(sample, fx, fy, w, z, xs):
    """Monte Carlo path x P(X / U_X(x) > z, Y / U_Y(x) > w) for a sample
    with arbitrary margins.
    :param sample: PairedSample of (X, Y)
    :param fx: TailQuantileFn of X
    :param fy: TailQuantileFn of Y
    :param w: Scale of the Y threshold, > 0
    :param z: Scale of the X threshold, > 0
    :param xs: Strictly increasing scales, all > 1
    :return: NuEstimate, never converged
    """
    _check_box(w, z)
    xs = _check_scales(xs, 1.0, 1.0)
    path = np.array([
        x * np.mean((sample.x > z * fx(x)) & (sample.y > w * fy(x))) for x in xs
    ])
    logger.debug("Monte Carlo nu(%s, %s) path from %d pairs", w, z, sample.n)
    return NuEstimate(float(w), float(z), xs, path, float(path[-1]), False,
                      Method.LAST_VALUE)
