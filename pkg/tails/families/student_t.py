"""Student t copula with correlation rho in (-1, 1) and nu > 0 degrees of
freedom.

The bivariate t vector is a normal vector divided by S = sqrt(W / nu),
W ~ chi2(nu), hence its upper orthant probability is the mixture

    P(X > h, Y > k) = E[ P(Z1 > h S, Z2 > k S) ]

which is integrated over log S with an adaptive Gauss-Kronrod rule for
all evaluation points at once. The mixing law is truncated at a tiny
mass on both ends and the truncated mass is added with the integrand value
at the cut, the absolute error stays below 1e-8.
"""
import numpy as np
from scipy.integrate import quad_vec
from scipy.special import gammaln, stdtr, stdtrit
from scipy.stats import chi2

from tails.exceptions import InvalidParameter
from tails.families.gaussian import upper_orthant as normal_orthant
from tails.settings import STUDENT_T_LOWER_TRUNCATION as LOWER_MASS
from tails.settings import STUDENT_T_UPPER_TRUNCATION as UPPER_MASS
from tails.settings import STUDENT_T_TOLERANCE

PARAMETERS = ("rho", "nu")
TOLERANCE = STUDENT_T_TOLERANCE


def check_params(rho=None, nu=None):
    if rho is None or not np.isfinite(rho) or not -1 < rho < 1:
        raise InvalidParameter("student_t", "rho", rho, "in (-1, 1)")
    if nu is None or not np.isfinite(nu) or nu <= 0:
        raise InvalidParameter("student_t", "nu", nu, "> 0")
    return dict(rho=float(rho), nu=float(nu))


def upper_orthant(h, k, rho, nu):
    """Standard bivariate t probability P(X > h, Y > k).
    :param h: Finite lower limits for X
    :param k: Finite lower limits for Y
    :param rho: Correlation in (-1, 1)
    :param nu: Degrees of freedom
    :return: Array of probabilities clipped to [0, 1]
    """
    h, k = np.broadcast_arrays(np.asarray(h, float), np.asarray(k, float))
    shape = h.shape
    h, k = h.ravel(), k.ravel()

    # Integration variable x = log S, S^2 = W / nu
    x_lo = 0.5 * np.log(chi2.ppf(LOWER_MASS, nu) / nu)
    x_hi = 0.5 * np.log(chi2.isf(UPPER_MASS, nu) / nu)
    log_norm = np.log(2.0) - 0.5 * nu * np.log(2.0) - gammaln(0.5 * nu)

    def integrand(x):
        log_w = np.log(nu) + 2.0 * x
        density = np.exp(log_norm + 0.5 * nu * log_w - 0.5 * np.exp(log_w))
        scale = np.exp(x)
        return density * normal_orthant(h * scale, k * scale, rho)

    total, _ = quad_vec(
        integrand, x_lo, x_hi, epsabs=1e-14, epsrel=1e-12, norm="max"
    )
    s_lo, s_hi = np.exp(x_lo), np.exp(x_hi)
    total += LOWER_MASS * normal_orthant(h * s_lo, k * s_lo, rho)
    total += UPPER_MASS * normal_orthant(h * s_hi, k * s_hi, rho)
    return np.clip(total, 0.0, 1.0).reshape(shape)


def quantile(u, nu):
    """Student t quantile, evaluated from the nearest tail."""
    return np.where(u < 0.5, stdtrit(nu, u), -stdtrit(nu, 1.0 - u))


def cdf(u, v, rho, nu):
    return upper_orthant(-quantile(u, nu), -quantile(v, nu), rho, nu)


def survival(u, v, rho, nu):
    return upper_orthant(quantile(u, nu), quantile(v, nu), rho, nu)


def sample(rng, n, rho, nu):
    z1 = rng.standard_normal(n)
    z2 = rho * z1 + np.sqrt(1.0 - rho * rho) * rng.standard_normal(n)
    scale = np.sqrt(rng.chisquare(nu, n) / nu)
    return stdtr(nu, z1 / scale), stdtr(nu, z2 / scale)
