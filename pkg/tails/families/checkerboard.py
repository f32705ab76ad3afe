"""Checkerboard copula, the multilinear extension of a subcopula grid.

Every grid cell spreads its mass uniformly, so the cdf is bilinear inside
the cells and exact at the nodes, and the C-volume of any box is the cell
mass weighted by the overlap fractions of the box with the cells.
"""
import numpy as np

from tails.exceptions import InvalidParameter, NonIncreasingGrid
from tails.settings import NEGATIVE_VOLUME_TOLERANCE

PARAMETERS = ("grid",)


def check_params(grid=None):
    if grid is None or not hasattr(grid, "cell_mass"):
        raise InvalidParameter("checkerboard", "grid", grid, "a SubcopulaGrid")
    mass = grid.cell_mass()
    if mass.size and mass.min() < -NEGATIVE_VOLUME_TOLERANCE:
        i, j = np.unravel_index(np.argmin(mass), mass.shape)
        location = (float(grid.u_nodes[i]), float(grid.v_nodes[j]))
        raise NonIncreasingGrid(float(mass[i, j]), location)
    return dict(grid=grid)


def cdf(u, v, grid):
    u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
    points = np.stack([u.ravel(), v.ravel()], axis=-1)
    return grid.interpolator(points).reshape(u.shape)


def _overlap(nodes, lo, hi):
    """Fraction of every cell [nodes[i], nodes[i+1]] covered by [lo, hi]."""
    left, right = nodes[:-1], nodes[1:]
    lo, hi = np.asarray(lo, float)[..., None], np.asarray(hi, float)[..., None]
    covered = np.minimum(hi, right) - np.maximum(lo, left)
    return np.clip(covered / (right - left), 0.0, 1.0)


def volume(u1, u2, v1, v2, grid):
    """Closed-form C-volume of [u1, u2] x [v1, v2].
    :param grid: SubcopulaGrid with strictly increasing nodes
    :return: Sum of cell masses times overlap area fractions
    """
    share_u = _overlap(grid.u_nodes, u1, u2)
    share_v = _overlap(grid.v_nodes, v1, v2)
    return np.einsum("...i,ij,...j->...", share_u, grid.cell_mass(), share_v)


def survival(u, v, grid):
    return volume(u, 1.0, v, 1.0, grid)


def sample(rng, n, grid):
    mass = np.clip(grid.cell_mass(), 0.0, None)
    cells = rng.choice(mass.size, size=n, p=(mass / mass.sum()).ravel())
    i, j = np.unravel_index(cells, mass.shape)
    u_nodes, v_nodes = grid.u_nodes, grid.v_nodes
    u = u_nodes[i] + rng.random(n) * (u_nodes[i + 1] - u_nodes[i])
    v = v_nodes[j] + rng.random(n) * (v_nodes[j + 1] - v_nodes[j])
    return u, v
