"""Product copula C(u, v) = u v, the law of independent margins."""

PARAMETERS = ()


def check_params():
    return {}


def cdf(u, v):
    return u * v


def survival(u, v):
    return (1.0 - u) * (1.0 - v)


def sample(rng, n):
    return rng.random(n), rng.random(n)
