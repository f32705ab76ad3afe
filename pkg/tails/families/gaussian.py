"""Gaussian copula with correlation rho in (-1, 1).

The bivariate normal upper orthant probability is computed with the
Drezner-Wesolowsky single integral over the correlation path as refined
by A. Genz (bvnu), fixed Gauss-Legendre nodes, absolute error below 1e-14.
The copula is radially symmetric so the survival function is the upper
orthant probability at the normal quantiles, without cancellation.

The tail ratios of the Gaussian copula tend to 0 for |rho| < 1 but only at
a logarithmic pace, limits along finite schedules are never reported as
converged.
"""
import numpy as np
from scipy.special import ndtr, ndtri

from tails.exceptions import InvalidParameter
from tails.settings import GAUSSIAN_TOLERANCE

PARAMETERS = ("rho",)
SLOW_TAIL = True
TOLERANCE = GAUSSIAN_TOLERANCE

# Half of the symmetric Gauss-Legendre rules of order 6, 12 and 20
_GL6 = (
    [0.9324695142031522, 0.6612093864662647, 0.2386191860831970],
    [0.1713244923791705, 0.3607615730481384, 0.4679139345726904],
)
_GL12 = (
    [0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
     0.5873179542866171, 0.3678314989981802, 0.1252334085114692],
    [0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
     0.2031674267230659, 0.2334925365383547, 0.2491470458134029],
)
_GL20 = (
    [0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
     0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
     0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
     0.07652652113349733],
    [0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
     0.08327674157670475, 0.1019301198172404, 0.1181945319615184,
     0.1316886384491766, 0.1420961093183821, 0.1491729864726037,
     0.1527533871307259],
)
_TWO_PI = 2.0 * np.pi


def check_params(rho=None):
    if rho is None or not np.isfinite(rho) or not -1 < rho < 1:
        raise InvalidParameter("gaussian", "rho", rho, "in (-1, 1)")
    return dict(rho=float(rho))


def _nodes(rho):
    half_x, half_w = _GL6 if abs(rho) < 0.3 else (
        _GL12 if abs(rho) < 0.75 else _GL20
    )
    half_x, half_w = np.asarray(half_x), np.asarray(half_w)
    x = np.concatenate([1.0 - half_x, 1.0 + half_x])
    w = np.concatenate([half_w, half_w])
    return x, w


def upper_orthant(h, k, rho):
    """Standard bivariate normal probability P(X > h, Y > k).
    :param h: Finite lower limits for X
    :param k: Finite lower limits for Y
    :param rho: Correlation in (-1, 1)
    :return: Array of probabilities clipped to [0, 1]
    """
    h, k = np.broadcast_arrays(np.asarray(h, float), np.asarray(k, float))
    shape = h.shape
    if rho == 0:
        return ndtr(-h) * ndtr(-k)
    return _upper_orthant(h.ravel(), k.ravel(), rho).reshape(shape)


def _upper_orthant(h, k, rho):
    x, w = _nodes(rho)
    hk = h * k
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        if abs(rho) < 0.925:
            hs = (h * h + k * k) / 2.0
            asr = np.arcsin(rho) / 2.0
            sn = np.sin(asr * x)
            expo = (sn * hk[..., None] - hs[..., None]) / (1.0 - sn ** 2)
            bvn = np.exp(expo) @ w
            bvn = bvn * asr / _TWO_PI + ndtr(-h) * ndtr(-k)
            return np.clip(bvn, 0.0, 1.0)

        # Strong correlation: expansion around the singular rho = +-1
        if rho < 0:
            k, hk = -k, -hk
        as_ = 1.0 - rho * rho
        a = np.sqrt(as_)
        bs = (h - k) ** 2
        asr = -(bs / as_ + hk) / 2.0
        c = (4.0 - hk) / 8.0
        d = (12.0 - hk) / 80.0
        bvn = np.where(
            asr > -100.0,
            a * np.exp(asr)
            * (1.0 - c * (bs - as_) * (1.0 - d * bs) / 3.0 + c * d * as_ ** 2),
            0.0,
        )
        b = np.sqrt(bs)
        sp = np.sqrt(_TWO_PI) * ndtr(-b / a)
        bvn = np.where(
            hk > -100.0,
            bvn - np.exp(-hk / 2.0) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0),
            bvn,
        )
        a = a / 2.0
        xs = (a * x) ** 2
        asr = -(bs[..., None] / xs + hk[..., None]) / 2.0
        sp = 1.0 + c[..., None] * xs * (1.0 + 5.0 * d[..., None] * xs)
        rs = np.sqrt(1.0 - xs)
        ep = np.exp(-(hk[..., None] / 2.0) * xs / (1.0 + rs) ** 2) / rs
        terms = np.where(asr > -100.0, a * w * np.exp(asr) * (ep - sp), 0.0)
        bvn = -(bvn + terms.sum(axis=-1)) / _TWO_PI

        if rho > 0:
            bvn = bvn + ndtr(-np.maximum(h, k))
        else:
            inner = np.where(h < 0, ndtr(k) - ndtr(h), ndtr(-h) - ndtr(-k))
            bvn = np.where(h >= k, -bvn, inner - bvn)
    return np.clip(bvn, 0.0, 1.0)


def quantile(u):
    """Standard normal quantile, evaluated from the nearest tail."""
    return np.where(u < 0.5, ndtri(u), -ndtri(1.0 - u))


def cdf(u, v, rho):
    return upper_orthant(-quantile(u), -quantile(v), rho)


def survival(u, v, rho):
    return upper_orthant(quantile(u), quantile(v), rho)


def sample(rng, n, rho):
    z1 = rng.standard_normal(n)
    z2 = rho * z1 + np.sqrt(1.0 - rho * rho) * rng.standard_normal(n)
    return ndtr(z1), ndtr(z2)
