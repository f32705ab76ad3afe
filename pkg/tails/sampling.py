"""Seeded samples of copulas and of derived series.

Every request of n draws is split in chunks of SAMPLE_CHUNK draws. Chunk
k uses the PCG64 generator seeded by the k-th child of
``SeedSequence(seed).spawn(...)``, hence a sample only depends on the
seed and on the request, whatever the scheduling of the chunks.
"""
import logging

import dask
import numpy as np

from tails.empirical import PairedSample, SeriesSample
from tails.exceptions import IncompatibleFamily, InvalidParameter
from tails.exceptions import RootFindFailure
from tails.settings import DASK_SCHEDULER, ROOT_TOLERANCE, SAMPLE_CHUNK, SEED_LIMIT

logger = logging.getLogger(__name__)


def check_seed(seed):
    """Validates a user seed, SeedSequence takes integers in [0, 2**64)."""
    if isinstance(seed, bool) or int(seed) != seed or not 0 <= seed < SEED_LIMIT:
        raise InvalidParameter("sample", "seed", seed, "integer in [0, 2**64)")
    return int(seed)


def make_rng(seed):
    """PCG64 generator of a seed or SeedSequence."""
    return np.random.Generator(np.random.PCG64(seed))


def open_uniform(rng, n):
    """Uniforms on the open interval (0, 1) with 53 random bits."""
    return (rng.integers(0, 2 ** 53, n) + 0.5) / 2 ** 53


def _check_size(n, minimum=1):
    if int(n) != n or n < minimum:
        raise InvalidParameter("sample", "n", n, f"integer >= {minimum}")
    return int(n)


def invert_conditional(c, u, w):
    """Solves h(v | u) = w for v by bisection on [0, 1].
    :param c: Copula handle whose family has a conditional cdf
    :param u: Conditioning uniforms in (0, 1)
    :param w: Target probabilities in (0, 1)
    :return: Array of v
    """
    lo, hi = np.zeros_like(u), np.ones_like(u)
    failed = np.zeros(u.shape, dtype=bool)
    while np.max(hi - lo, initial=0.0) > ROOT_TOLERANCE:
        mid = 0.5 * (lo + hi)
        h = c.routine.conditional(u, mid, **c.params)
        failed |= np.isnan(h)
        below = h < w
        lo, hi = np.where(below, mid, lo), np.where(below, hi, mid)
    if failed.any():
        raise RootFindFailure(c.family, int(failed.sum()))
    return 0.5 * (lo + hi)


def _draw(c, seed, size):
    rng = make_rng(seed)
    if hasattr(c.routine, "sample"):
        return c.routine.sample(rng, size, **c.params)
    if hasattr(c.routine, "conditional"):
        u, w = open_uniform(rng, size), open_uniform(rng, size)
        return u, invert_conditional(c, u, w)
    raise IncompatibleFamily(c.family, "sample_copula")


def sample_copula(c, n, seed):
    """Sample of n pairs with uniform margins coupled by a copula.
    :param c: Copula handle
    :param n: Number of pairs, >= 2
    :param seed: Non negative integer seed
    :return: PairedSample
    """
    n = _check_size(n, minimum=2)
    sizes = [SAMPLE_CHUNK] * (n // SAMPLE_CHUNK)
    if n % SAMPLE_CHUNK:
        sizes.append(n % SAMPLE_CHUNK)
    children = np.random.SeedSequence(check_seed(seed)).spawn(len(sizes))
    logger.debug("Sampling %d pairs of %s in %d chunks", n, c, len(sizes))
    tasks = [dask.delayed(_draw)(c, child, size) for child, size in zip(children, sizes)]
    chunks = dask.compute(*tasks, scheduler=DASK_SCHEDULER)
    u = np.concatenate([np.asarray(u, float) for u, _ in chunks])
    v = np.concatenate([np.asarray(v, float) for _, v in chunks])
    return PairedSample(u, v)


def apply_margin(u, m):
    """Transforms uniforms by the right continuous inverse cdf of a margin.
    :param u: Array of uniforms
    :param m: MarginSpec
    :return: Array of reals
    """
    return np.asarray(m.quantile(np.asarray(u, dtype=float)), dtype=float)


def moving_max_series(n, seed):
    """Moving maximum X_i = max(Z_i, Z_{i+1}) of i.i.d. unit Frechet Z.
    Its lag 1 upper auto tail dependence is 1/2, 0 at larger lags.
    :param n: Length of the series, >= 2
    :param seed: Non negative integer seed
    :return: SeriesSample
    """
    n = _check_size(n, minimum=2)
    rng = make_rng(np.random.SeedSequence(check_seed(seed)))
    z = -1.0 / np.log(open_uniform(rng, n + 1))
    return SeriesSample(np.maximum(z[:-1], z[1:]))
