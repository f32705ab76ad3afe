"""Generalized tail dependence of copulas, discrete laws and samples."""
import logging

from tails.copula import Copula, Rect, cdf, survival, validate_grid, volume
from tails.discrete import DiscretePMF, JointPMF, SubcopulaGrid
from tails.discrete import checkerboard_extend, subcopula_from_joint
from tails.empirical import PairedSample, SeriesSample
from tails.empirical import auto_tail_param, empirical_lambda_path
from tails.estimators import Schedule, lambda_tilde_lower, lambda_tilde_upper
from tails.regvar import brv_consistency, nu_estimate
from tails.sampling import sample_copula

__version__ = "0.1.0"

logger = logging.getLogger("tails")


def copula(family, **params):
    """Creates an immutable copula handle.
    :param family: Family name, e.g. 'clayton', 'gumbel' or 'student-t'
    :param params: Family parameters, e.g. theta=2.0
    :return: Copula handle
    """
    return Copula(family, params)
