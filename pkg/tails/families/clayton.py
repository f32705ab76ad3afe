"""Clayton copula, an Archimedean family with lower tail dependence.

    C(u, v) = (u^-theta + v^-theta - 1)^(-1/theta),  theta > 0

Evaluated in log space with ``expm1``/``log1p`` so that the survival
1 - u - v + C(u, v) keeps its digits when u, v are close to 1. The lower
tail dependence is 2^(-1/theta), there is no upper tail dependence.
"""
import numpy as np

from tails.exceptions import InvalidParameter

PARAMETERS = ("theta",)


def check_params(theta=None):
    if theta is None or not np.isfinite(theta) or theta <= 0:
        raise InvalidParameter("clayton", "theta", theta, "> 0")
    return dict(theta=float(theta))


def _log_cdf(u, v, theta):
    with np.errstate(over="ignore", divide="ignore"):
        s = np.expm1(-theta * np.log(u)) + np.expm1(-theta * np.log(v))
        return -np.log1p(s) / theta


def cdf(u, v, theta):
    return np.exp(_log_cdf(u, v, theta))


def survival(u, v, theta):
    return (1.0 - u) + (1.0 - v) + np.expm1(_log_cdf(u, v, theta))


def conditional(u, v, theta):
    """Conditional cdf h(v | u) = dC/du, increasing in v.
    :param u: Conditioning uniforms in (0, 1)
    :param v: Evaluation points in (0, 1)
    :return: P(V <= v | U = u)
    """
    # h = (1 + u^theta (v^-theta - 1))^(-(1 + theta) / theta)
    with np.errstate(over="ignore", divide="ignore"):
        y = -theta * np.log(v)
        log_expm1 = np.where(
            y > 30.0, y + np.log1p(-np.exp(-y)), np.log(np.expm1(y))
        )
        log_z = theta * np.log(u) + log_expm1
        return np.exp(-(1.0 + theta) / theta * np.logaddexp(0.0, log_z))
