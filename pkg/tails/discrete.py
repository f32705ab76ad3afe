"""Subcopulas of discrete and mixed joint laws and their checkerboard
extension to copulas on the whole unit square.

For non continuous margins the copula is only determined on the product
of the marginal ranges (the subcopula). The checkerboard extension spreads
the mass of every grid cell uniformly, other extensions would yield other
generalized tail dependence values.
"""
import itertools
import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import xarray as xr
from scipy.interpolate import RegularGridInterpolator

from tails.copula import Copula, Rect
from tails.exceptions import IncompatibleFamily, InconsistentMargins
from tails.exceptions import NonMonotone
from tails.settings import NEGATIVE_VOLUME_TOLERANCE, PMF_TOLERANCE

logger = logging.getLogger(__name__)

EXTENSION = "checkerboard"


@dataclass(frozen=True)
class DiscretePMF:
    """Probability mass function on a strictly increasing support."""

    support: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        support = np.asarray(self.support, dtype=float).ravel()
        probs = np.asarray(self.probs, dtype=float).ravel()
        if support.size == 0 or support.size != probs.size:
            raise InconsistentMargins(
                f"support of {support.size} atoms for {probs.size} probabilities"
            )
        if not np.all(np.isfinite(support)) or np.any(np.diff(support) <= 0):
            raise InconsistentMargins("support must be strictly increasing")
        if not np.all(probs >= 0):
            raise InconsistentMargins("negative probabilities")
        if abs(probs.sum() - 1.0) > PMF_TOLERANCE:
            raise InconsistentMargins(f"probabilities add up to {probs.sum()!r}")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_cdf(cls, support, cdf):
        """Discretizes a distribution (continuous or mixed) on the given
        atoms, every atom takes the mass of the interval it closes.
        :param support: Strictly increasing atoms, the last one takes the
            remaining upper tail
        :param cdf: Right continuous distribution function
        :return: DiscretePMF
        """
        support = np.asarray(support, dtype=float)
        cum = np.concatenate([[0.0], np.asarray(cdf(support[:-1]), float), [1.0]])
        return cls(support, np.diff(cum))

    @property
    def cum(self):
        """Marginal cdf at the atoms, the last value is exactly 1."""
        cum = np.cumsum(self.probs)
        cum[-1] = 1.0
        return cum

    def survival(self, y):
        """Survival function P(X > y), right continuous."""
        index = np.searchsorted(self.support, y, side="right")
        return 1.0 - np.concatenate([[0.0], self.cum])[index]

    def quantile(self, u):
        """Right continuous inverse cdf inf{y : F(y) >= u}."""
        index = np.searchsorted(self.cum, u, side="left")
        return self.support[np.minimum(index, self.support.size - 1)]

    def to_dict(self):
        return {"support": self.support.tolist(), "probs": self.probs.tolist()}


@dataclass(frozen=True)
class JointPMF:
    """Joint probability mass on the product of two discrete supports."""

    row_margin: DiscretePMF
    col_margin: DiscretePMF
    mass: np.ndarray

    def __post_init__(self):
        mass = np.asarray(self.mass, dtype=float)
        shape = (self.row_margin.support.size, self.col_margin.support.size)
        if mass.shape != shape:
            raise InconsistentMargins(f"mass of shape {mass.shape}, expected {shape}")
        if not np.all(mass >= -PMF_TOLERANCE):
            raise InconsistentMargins("negative mass")
        if abs(mass.sum() - 1.0) > PMF_TOLERANCE:
            raise InconsistentMargins(f"total mass is {mass.sum()!r}")
        for axis, margin, name in ((1, self.row_margin, "row"),
                                   (0, self.col_margin, "column")):
            error = np.abs(mass.sum(axis=axis) - margin.probs).max()
            if error > PMF_TOLERANCE:
                raise InconsistentMargins(f"{name} sums differ by {error!r}")
        object.__setattr__(self, "mass", np.clip(mass, 0.0, None))

    @classmethod
    def from_mass(cls, mass, row_support=None, col_support=None):
        """Joint pmf whose margins are the row and column sums.
        :param mass: Matrix of probabilities
        :param row_support: Row atoms, defaults to 0, 1, ...
        :param col_support: Column atoms, defaults to 0, 1, ...
        :return: JointPMF
        """
        mass = np.asarray(mass, dtype=float)
        if mass.ndim != 2:
            raise InconsistentMargins(f"mass must be a matrix, got {mass.ndim}-d")
        if row_support is None:
            row_support = np.arange(mass.shape[0])
        if col_support is None:
            col_support = np.arange(mass.shape[1])
        row_margin = DiscretePMF(row_support, mass.sum(axis=1))
        col_margin = DiscretePMF(col_support, mass.sum(axis=0))
        return cls(row_margin, col_margin, mass)

    @classmethod
    def from_copula(cls, copula, row_margin, col_margin):
        """Joint pmf of the margins coupled by a copula (Sklar's theorem).
        :param copula: Copula handle
        :param row_margin: DiscretePMF of the first coordinate
        :param col_margin: DiscretePMF of the second coordinate
        :return: JointPMF
        """
        u = np.concatenate([[0.0], row_margin.cum])
        v = np.concatenate([[0.0], col_margin.cum])
        values = copula.cdf(u[:, None], v[None, :])
        mass = np.diff(np.diff(values, axis=0), axis=1)
        return cls(row_margin, col_margin, np.clip(mass, 0.0, None))


@dataclass(frozen=True, eq=False)
class SubcopulaGrid:
    """Copula values on the grid of marginal cdf nodes.

    ``values`` is a DataArray with dimensions ``("u", "v")`` whose
    coordinates are the strictly increasing nodes, both starting at 0 and
    ending at 1.
    """

    values: xr.DataArray

    def __post_init__(self):
        u, v = self.u_nodes, self.v_nodes
        for name, nodes in (("u", u), ("v", v)):
            if nodes.size < 2 or nodes[0] != 0.0 or nodes[-1] != 1.0:
                raise InconsistentMargins(f"{name} nodes must start at 0 and end at 1")
            if np.any(np.diff(nodes) <= 0):
                raise InconsistentMargins(f"{name} nodes must be strictly increasing")
        values = self.values.values
        checks = [
            ("C(u,0)=0", values[:, 0]), ("C(0,v)=0", values[0, :]),
            ("C(u,1)=u", values[:, -1] - u), ("C(1,v)=v", values[-1, :] - v),
        ]
        for check, error in checks:
            if np.abs(error).max() > PMF_TOLERANCE:
                raise InconsistentMargins(f"grid boundary {check} fails")

    @classmethod
    def from_arrays(cls, u_nodes, v_nodes, values):
        """Builds a grid from node lists and the value matrix.
        :param u_nodes: Increasing nodes in [0, 1] containing 0 and 1
        :param v_nodes: Increasing nodes in [0, 1] containing 0 and 1
        :param values: Matrix with values[i, j] = C(u_nodes[i], v_nodes[j])
        :return: SubcopulaGrid
        """
        values = xr.DataArray(
            np.asarray(values, dtype=float),
            dims=("u", "v"),
            coords={"u": np.asarray(u_nodes, float), "v": np.asarray(v_nodes, float)},
            name="C",
        )
        return cls(values)

    @property
    def u_nodes(self):
        return self.values["u"].values

    @property
    def v_nodes(self):
        return self.values["v"].values

    @property
    def shape(self):
        return self.values.shape

    def cell_mass(self):
        """Mass of every grid cell, the C-volume between adjacent nodes."""
        return np.diff(np.diff(self.values.values, axis=0), axis=1)

    @cached_property
    def interpolator(self):
        return RegularGridInterpolator(
            (self.u_nodes, self.v_nodes), self.values.values, method="linear"
        )

    def __str__(self):
        return "grid[{}x{}]".format(*self.shape)

    def to_dict(self):
        return {
            "extension": EXTENSION,
            "u_nodes": self.u_nodes.tolist(),
            "v_nodes": self.v_nodes.tolist(),
            "values": self.values.values.tolist(),
        }


def _collapse(cum):
    """Nodes {0} + cumulative probabilities without repeated values."""
    nodes = np.concatenate([[0.0], cum])
    keep = np.concatenate([[True], np.diff(nodes) > 0])
    return nodes, keep


def subcopula_from_joint(j):
    """Subcopula of a discrete joint law on the marginal cdf nodes.
    Zero probability atoms repeat a node, repeated nodes are collapsed.
    :param j: JointPMF
    :return: SubcopulaGrid
    """
    if not isinstance(j, JointPMF):
        raise InconsistentMargins(f"expected a JointPMF, got {type(j).__name__}")
    logger.debug("Building subcopula of %s x %s atoms", *j.mass.shape)
    u_nodes, u_keep = _collapse(j.row_margin.cum)
    v_nodes, v_keep = _collapse(j.col_margin.cum)
    values = np.zeros((u_nodes.size, v_nodes.size))
    values[1:, 1:] = np.cumsum(np.cumsum(j.mass, axis=0), axis=1)
    u_nodes, v_nodes = u_nodes[u_keep], v_nodes[v_keep]
    values = values[np.ix_(u_keep, v_keep)]
    # Boundary identities hold exactly, rounding stays in the interior
    u_nodes[-1], v_nodes[-1] = 1.0, 1.0
    values[:, -1], values[-1, :] = u_nodes, v_nodes
    values[0, :], values[:, 0] = 0.0, 0.0
    return SubcopulaGrid.from_arrays(u_nodes, v_nodes, values)


def checkerboard_extend(g):
    """Multilinear extension of a subcopula grid.
    :param g: SubcopulaGrid
    :return: Copula handle of the checkerboard family
    """
    return Copula("checkerboard", {"grid": g})


def discontinuity_partition(g, r):
    """Partition of a box by the grid node lines, the maximal sub boxes on
    which the checkerboard copula is smooth.
    :param g: SubcopulaGrid
    :param r: Rect to partition
    :return: List of Rect, row major over the u cuts
    """
    def cuts(nodes, lo, hi):
        inner = nodes[(nodes > lo) & (nodes < hi)]
        return np.concatenate([[lo], inner, [hi]])

    u_cuts = cuts(g.u_nodes, r.u1, r.u2)
    v_cuts = cuts(g.v_nodes, r.v1, r.v2)
    return [
        Rect(u1, u2, v1, v2)
        for (u1, u2), (v1, v2) in itertools.product(
            zip(u_cuts[:-1], u_cuts[1:]), zip(v_cuts[:-1], v_cuts[1:])
        )
    ]


def partitioned_volume(c, r):
    """C-volume of a box as the sum over its discontinuity partition.
    :param c: Checkerboard copula handle
    :param r: Rect box
    :return: Volume, non negative
    """
    if not c.is_checkerboard:
        raise IncompatibleFamily(c.family, "partitioned_volume")
    parts = np.array([tuple(x) for x in discontinuity_partition(c.params["grid"], r)])
    volumes = c.box_volume(parts[:, 0], parts[:, 1], parts[:, 2], parts[:, 3])
    if volumes.min() < -NEGATIVE_VOLUME_TOLERANCE:
        raise NonMonotone(float(volumes.min()), r)
    return max(float(np.sum(volumes)), 0.0)
