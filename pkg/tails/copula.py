"""Copula handles, boxes of the unit square and the C-volume functional."""
import logging
from dataclasses import dataclass, field

import numpy as np

from tails import families
from tails.exceptions import InvalidParameter, InvalidRect, NonMonotone
from tails.exceptions import OutOfUnitInterval
from tails.settings import BOUNDARY_TOLERANCE, NEGATIVE_VOLUME_TOLERANCE

logger = logging.getLogger(__name__)

# Maximum number of cdf evaluations held in memory by validate_grid
_VALIDATION_BLOCK = 1_000_000


def check_unit(name, value):
    """Checks a value (or array of values) lies in the unit interval.
    :param name: Name of the value for the error message
    :param value: Scalar or array-like of reals
    :return: The value as float or float array
    """
    array = np.asarray(value, dtype=float)
    outside = ~((array >= 0.0) & (array <= 1.0))
    if outside.any():
        raise OutOfUnitInterval(name, array[outside].flat[0])
    return float(array) if array.ndim == 0 else array


@dataclass(frozen=True)
class Rect:
    """Axis aligned box [u1, u2] x [v1, v2] inside the unit square."""

    u1: float
    u2: float
    v1: float
    v2: float

    def __post_init__(self):
        for name in ("u1", "u2", "v1", "v2"):
            object.__setattr__(self, name, check_unit(name, getattr(self, name)))
        if self.u1 > self.u2 or self.v1 > self.v2:
            raise InvalidRect(self.u1, self.u2, self.v1, self.v2)

    @classmethod
    def lower(cls, t):
        """Lower tail box [0, t] x [0, t]."""
        return cls(0.0, t, 0.0, t)

    @classmethod
    def upper(cls, t):
        """Upper tail box [t, 1] x [t, 1]."""
        return cls(t, 1.0, t, 1.0)

    def __iter__(self):
        return iter((self.u1, self.u2, self.v1, self.v2))


@dataclass(frozen=True)
class Copula:
    """Immutable bivariate copula of a plug-in family.

    Evaluation routines of the family are only called on the interior of
    the unit square, boundary values follow the copula identities exactly.
    """

    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        module = families.routine(self.family)
        name = module.__name__.rsplit(".", 1)[-1]
        for key, value in self.params.items():
            if key not in module.PARAMETERS:
                expected = f"to be one of {module.PARAMETERS}"
                raise InvalidParameter(name, key, value, expected)
        object.__setattr__(self, "family", name)
        object.__setattr__(self, "params", module.check_params(**self.params))
        logger.debug("Created copula handle %s", self)

    def __str__(self):
        params = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.family}({params})"

    @property
    def routine(self):
        return getattr(families, self.family)

    @property
    def is_checkerboard(self):
        return self.family == "checkerboard"

    @property
    def slow_tail(self):
        """True when the family tail ratios converge too slowly to report
        a limit from a finite schedule."""
        return getattr(self.routine, "SLOW_TAIL", False)

    @property
    def tolerance(self):
        return getattr(self.routine, "TOLERANCE", BOUNDARY_TOLERANCE)

    @property
    def has_closed_volume(self):
        return hasattr(self.routine, "volume")

    def cdf(self, u, v):
        """Copula distribution function C(u, v).
        :param u: Scalar or array in [0, 1]
        :param v: Scalar or array in [0, 1]
        :return: C(u, v), clipped to the Frechet bounds
        """
        u, v = check_unit("u", u), check_unit("v", v)
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        inner = (u > 0) & (u < 1) & (v > 0) & (v < 1)
        result = np.minimum(u, v)  # Boundary values C(u,1)=u, C(1,v)=v
        result = np.where((u == 0) | (v == 0), 0.0, result)
        if inner.any():
            values = self.routine.cdf(u[inner], v[inner], **self.params)
            result[inner] = values
        lower = np.maximum(u + v - 1.0, 0.0)
        return np.clip(result, lower, np.minimum(u, v))[()]

    def survival(self, u, v):
        """Joint survival P(U > u, V > v) = 1 - u - v + C(u, v).
        :param u: Scalar or array in [0, 1]
        :param v: Scalar or array in [0, 1]
        :return: C-volume of [u, 1] x [v, 1]
        """
        u, v = check_unit("u", u), check_unit("v", v)
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        upper = np.minimum(1.0 - u, 1.0 - v)
        if not hasattr(self.routine, "survival"):
            result = (1.0 - u - v) + self.cdf(u, v)
        else:
            inner = (u > 0) & (u < 1) & (v > 0) & (v < 1)
            result = upper.copy()  # Boundary values at u=0 or v=0
            result = np.where((u == 1) | (v == 1), 0.0, result)
            if inner.any():
                values = self.routine.survival(u[inner], v[inner], **self.params)
                result[inner] = values
        lower = np.maximum(1.0 - u - v, 0.0)
        return np.clip(result, lower, upper)[()]

    def box_volume(self, u1, u2, v1, v2):
        """Raw C-volume of the boxes [u1, u2] x [v1, v2], no sign checks.
        Families with a closed-form volume use it, otherwise the four
        corner sum of the cdf is returned.
        """
        if self.has_closed_volume:
            return self.routine.volume(u1, u2, v1, v2, **self.params)
        return (
            self.cdf(u2, v2) - self.cdf(u2, v1) - self.cdf(u1, v2) + self.cdf(u1, v1)
        )

    def volume(self, rect):
        """C-volume of a box, see :func:`volume`."""
        value = float(self.box_volume(*rect))
        if value < -NEGATIVE_VOLUME_TOLERANCE:
            raise NonMonotone(value, rect)
        return max(value, 0.0)

    def to_dict(self):
        params = {
            k: v.to_dict() if hasattr(v, "to_dict") else v
            for k, v in self.params.items()
        }
        return {"family": self.family, "params": params}


def cdf(c, u, v):
    """Evaluates the copula distribution function C(u, v).
    :param c: Copula handle
    :param u: Value in [0, 1]
    :param v: Value in [0, 1]
    :return: C(u, v) in [0, 1]
    """
    return c.cdf(u, v)


def volume(c, r):
    """C-volume C(u2,v2) - C(u2,v1) - C(u1,v2) + C(u1,v1) of a box.
    Negative values within NEGATIVE_VOLUME_TOLERANCE are rounding noise
    and clamped to 0.
    :param c: Copula handle
    :param r: Rect box
    :return: Volume, non negative
    """
    return c.volume(r)


def survival(c, u, v):
    """Joint survival function, the C-volume of [u, 1] x [v, 1].
    :param c: Copula handle
    :param u: Value in [0, 1]
    :param v: Value in [0, 1]
    :return: 1 - u - v + C(u, v)
    """
    return c.survival(u, v)


@dataclass(frozen=True)
class Violation:
    check: str
    magnitude: float
    location: tuple


@dataclass(frozen=True)
class ValidationReport:
    """Worst violation of every copula property checked on a grid."""

    family: str
    n: int
    tolerance: float
    violations: tuple

    @property
    def worst(self):
        return max(self.violations, key=lambda x: x.magnitude)

    @property
    def max_violation(self):
        return self.worst.magnitude

    @property
    def location(self):
        return self.worst.location

    @property
    def ok(self):
        return self.max_violation <= self.tolerance

    def __getitem__(self, check):
        return next(x for x in self.violations if x.check == check)

    def to_dict(self):
        return {
            "family": self.family,
            "n": self.n,
            "tolerance": self.tolerance,
            "ok": self.ok,
            "max_violation": self.max_violation,
            "location": list(self.location),
            "violations": [
                {"check": x.check, "magnitude": x.magnitude,
                 "location": list(x.location)}
                for x in self.violations
            ],
        }


def _worst(check, magnitudes, locations):
    index = int(np.argmax(magnitudes))
    magnitude = max(float(magnitudes.flat[index]), 0.0)
    location = tuple(float(x) for x in locations(index))
    return Violation(check, magnitude, location)


def validate_grid(c, n):
    """Checks the copula identities on the regular grid of n x n cells:
    boundary conditions on the n + 1 nodes of every edge, non negative
    volume of every cell, Frechet bounds and exchangeability at the nodes.
    Violations are reported, never raised.
    :param c: Copula handle, or any object with a cdf(u, v) method
    :param n: Number of grid cells per side, 2 <= n <= 10^4
    :return: ValidationReport
    """
    if not 2 <= n <= 10_000:
        raise InvalidParameter("validate_grid", "n", n, "in [2, 10000]")
    logger.debug("Validating %s on a %d x %d grid", c, n, n)
    nodes = np.linspace(0.0, 1.0, n + 1)

    violations = [
        _worst("C(u,0)=0", np.abs(c.cdf(nodes, 0.0)), lambda i: (nodes[i], 0.0)),
        _worst("C(0,v)=0", np.abs(c.cdf(0.0, nodes)), lambda i: (0.0, nodes[i])),
        _worst("C(u,1)=u", np.abs(c.cdf(nodes, 1.0) - nodes),
               lambda i: (nodes[i], 1.0)),
        _worst("C(1,v)=v", np.abs(c.cdf(1.0, nodes) - nodes),
               lambda i: (1.0, nodes[i])),
    ]

    # Cell, bound and symmetry checks over blocks of grid rows
    block = max(_VALIDATION_BLOCK // (n + 1), 1)
    worst = {"2-increasing": (0.0, (0.0, 0.0)), "frechet": (0.0, (0.0, 0.0)),
             "symmetry": (0.0, (0.0, 0.0))}

    def record(check, magnitudes, offset, column_nodes):
        i, j = np.unravel_index(np.argmax(magnitudes), magnitudes.shape)
        if magnitudes[i, j] > worst[check][0]:
            location = (float(nodes[offset + i]), float(column_nodes[j]))
            worst[check] = (float(magnitudes[i, j]), location)

    previous = None
    for start in range(0, n + 1, block):
        rows = nodes[start:start + block]
        values = np.asarray(c.cdf(rows[:, None], nodes[None, :]), float)
        mirror = np.asarray(c.cdf(nodes[None, :], rows[:, None]), float)
        lower = np.maximum(rows[:, None] + nodes[None, :] - 1.0, 0.0)
        upper = np.minimum(rows[:, None], nodes[None, :])
        # Edges are covered by the boundary checks, u + v - 1 rounds there
        inner = ((rows > 0) & (rows < 1))[:, None] & ((nodes > 0) & (nodes < 1))
        frechet = np.where(inner, np.maximum(lower - values, values - upper), 0.0)
        record("frechet", frechet, start, nodes)
        record("symmetry", np.abs(values - mirror), start, nodes)
        if previous is not None:
            values = np.vstack([previous, values])
        offset = start - 1 if previous is not None else start
        if values.shape[0] > 1:
            cells = np.diff(np.diff(values, axis=0), axis=1)
            record("2-increasing", -cells, offset, nodes)
        previous = values[-1:]

    violations += [Violation(k, m, loc) for k, (m, loc) in worst.items()]
    report = ValidationReport(
        family=str(c),
        n=n,
        tolerance=getattr(c, "tolerance", BOUNDARY_TOLERANCE),
        violations=tuple(violations),
    )
    if not report.ok:
        logger.warning("Copula %s fails %s by %g at %s", c,
                       report.worst.check, report.max_violation, report.location)
    return report
