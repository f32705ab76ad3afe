"""Univariate margins used to transform uniform samples and to normalize
tails by their tail quantile function."""
import logging
from dataclasses import dataclass

import numpy as np
from scipy import stats

from tails.discrete import DiscretePMF
from tails.exceptions import InvalidParameter

logger = logging.getLogger(__name__)

KINDS = ("uniform", "unit_frechet", "unit_pareto", "exponential", "discrete")


@dataclass(frozen=True, eq=False)
class MarginSpec:
    """Marginal law: uniform, unit Frechet, unit Pareto, exponential with
    a rate or discrete with a DiscretePMF."""

    kind: str
    rate: float = None
    pmf: DiscretePMF = None

    def __post_init__(self):
        kind = self.kind.strip().lower().replace("-", "_")
        if kind not in KINDS:
            raise InvalidParameter("margin", "kind", self.kind, f"in {KINDS}")
        if kind == "exponential" and not (self.rate is not None and self.rate > 0):
            raise InvalidParameter("exponential margin", "rate", self.rate, "> 0")
        if kind == "discrete" and not isinstance(self.pmf, DiscretePMF):
            raise InvalidParameter("discrete margin", "pmf", self.pmf, "a DiscretePMF")
        object.__setattr__(self, "kind", kind)

    @classmethod
    def parse(cls, text):
        """Parses 'uniform', 'unit-frechet', 'unit-pareto', 'exponential:<rate>'
        or 'discrete:<atom>,...:<prob>,...'.
        :param text: Margin description
        :return: MarginSpec
        """
        kind, *args = text.split(":")
        try:
            numbers = [[float(x) for x in a.split(",")] for a in args]
        except ValueError:
            raise InvalidParameter("margin", "spec", text, "with numeric arguments")
        name = kind.strip().lower()
        if name == "exponential" and len(numbers) == 1 and len(numbers[0]) == 1:
            return cls(kind, rate=numbers[0][0])
        if name == "discrete" and len(numbers) == 2:
            return cls(kind, pmf=DiscretePMF(*numbers))
        if numbers:
            raise InvalidParameter("margin", "spec", text, "with valid arguments")
        return cls(kind)

    @property
    def distribution(self):
        """Frozen scipy distribution of continuous margins."""
        if self.kind == "uniform":
            return stats.uniform()
        if self.kind == "unit_frechet":
            return stats.invweibull(1.0)
        if self.kind == "unit_pareto":
            return stats.pareto(1.0)
        if self.kind == "exponential":
            return stats.expon(scale=1.0 / self.rate)
        return None

    def quantile(self, u):
        """Right continuous inverse cdf inf{y : F(y) >= u}."""
        if self.kind == "discrete":
            return self.pmf.quantile(u)
        return self.distribution.ppf(u)

    def survival(self, y):
        if self.kind == "discrete":
            return self.pmf.survival(y)
        return self.distribution.sf(y)

    def tail_quantile(self, x):
        """Tail quantile U(x) = inf{y : P(X > y) <= 1 / x}, x > 1."""
        x = np.asarray(x, dtype=float)
        if np.any(~(x > 1)):
            raise InvalidParameter("tail quantile", "x", x, "> 1")
        if self.kind != "discrete":
            return self.distribution.isf(1.0 / x)[()]
        tails = 1.0 - self.pmf.cum
        tails[-1] = 0.0
        # First atom whose survival drops below 1 / x
        index = np.searchsorted(-tails, -1.0 / x, side="left")
        return self.pmf.support[index][()]

    def __str__(self):
        if self.kind == "exponential":
            return f"exponential:{self.rate!r}"
        if self.kind == "discrete":
            return "discrete:{}:{}".format(
                ",".join(map(repr, self.pmf.support.tolist())),
                ",".join(map(repr, self.pmf.probs.tolist())),
            )
        return self.kind
