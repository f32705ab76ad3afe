"""Lower Frechet bound W(u, v) = max(u + v - 1, 0), perfect negative
dependence.
"""
import numpy as np

PARAMETERS = ()


def check_params():
    return {}


def cdf(u, v):
    return np.maximum(u + v - 1.0, 0.0)


def survival(u, v):
    return np.maximum((1.0 - u) - v, 0.0)


def sample(rng, n):
    u = rng.random(n)
    return u, 1.0 - u
