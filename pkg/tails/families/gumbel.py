"""Gumbel copula, an Archimedean extreme value family with upper tail
dependence 2 - 2^(1/theta).

    C(u, v) = exp(-((-log u)^theta + (-log v)^theta)^(1/theta)),  theta >= 1
"""
import numpy as np

from tails.exceptions import InvalidParameter

PARAMETERS = ("theta",)


def check_params(theta=None):
    if theta is None or not np.isfinite(theta) or theta < 1:
        raise InvalidParameter("gumbel", "theta", theta, ">= 1")
    return dict(theta=float(theta))


def _exponent(u, v, theta):
    with np.errstate(divide="ignore"):
        lx, ly = np.log(-np.log(u)), np.log(-np.log(v))
        return np.exp(np.logaddexp(theta * lx, theta * ly) / theta)


def cdf(u, v, theta):
    return np.exp(-_exponent(u, v, theta))


def survival(u, v, theta):
    return (1.0 - u) + (1.0 - v) + np.expm1(-_exponent(u, v, theta))


def conditional(u, v, theta):
    """Conditional cdf h(v | u) = dC/du, increasing in v.
    :param u: Conditioning uniforms in (0, 1)
    :param v: Evaluation points in (0, 1)
    :return: P(V <= v | U = u)
    """
    a = _exponent(u, v, theta)
    with np.errstate(divide="ignore"):
        log_x = np.log(-np.log(u))
        log_h = -a + (theta - 1.0) * (log_x - np.log(a)) - np.log(u)
    return np.exp(log_h)
