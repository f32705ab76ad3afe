"""Upper Frechet bound M(u, v) = min(u, v), perfect positive dependence."""
import numpy as np

PARAMETERS = ()


def check_params():
    return {}


def cdf(u, v):
    return np.minimum(u, v)


def survival(u, v):
    return np.minimum(1.0 - u, 1.0 - v)


def sample(rng, n):
    u = rng.random(n)
    return u, u.copy()
