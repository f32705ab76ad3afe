# ## Copula evaluation tolerances
"""Closed-form families satisfy the boundary identities up to rounding.
Quadrature families (gaussian, student_t) are accurate to their documented
absolute tolerance. A C-volume below -NEGATIVE_VOLUME_TOLERANCE is not
float noise: it means the copula implementation is not 2-increasing.
"""
NEGATIVE_VOLUME_TOLERANCE = 1e-9
BOUNDARY_TOLERANCE = 1e-12
GAUSSIAN_TOLERANCE = 1e-10
STUDENT_T_TOLERANCE = 1e-8
# Mass of the chi-square mixing law left out of the student_t quadrature
STUDENT_T_LOWER_TRUNCATION = 1e-13
STUDENT_T_UPPER_TRUNCATION = 1e-16

# Family names accepted on top of the plug-in module names
FAMILY_ALIASES = {
    "product": "independence",
    "normal": "gaussian",
    "t": "student_t",
    "studentt": "student_t",
    "student": "student_t",
    "m": "comonotone",
    "w": "countermonotone",
}


# ## Tail limits
"""Tail ratios are conditional probabilities, they may only exceed 1 by
rounding. Limits are approached along corner distances d_k = 10^-k, the
lower tail at t = d_k and the upper tail at t = 1 - d_k.
"""
RATIO_CEILING = 1 + 1e-9
CONVERGENCE_TOLERANCE = 1e-6
AITKEN_DENOMINATOR_FLOOR = 1e-15
# Upper boxes with t above this level are evaluated as survival values
SURVIVAL_SWITCH = 0.99
# Default geometric schedule: base, ratio and count of corner distances
DEFAULT_SCHEDULE = (0.1, 0.1, 8)
# Default regular variation scales x_k = 10^k (t = 1 - 1/x)
DEFAULT_X_SCHEDULE = tuple(10.0 ** k for k in range(1, 9))
DEFAULT_METHOD = "aitken"


# ## Discrete margins
"""Probability vectors and joint mass matrices must add up to one."""
PMF_TOLERANCE = 1e-12


# ## Empirical estimation
"""Empirical tail boxes must hold at least MIN_TAIL_POINTS observations in
expectation, i.e. min(t, 1 - t) >= MIN_TAIL_POINTS / n.
"""
MIN_TAIL_POINTS = 10
DEFAULT_RANKS = "max"


# ## Sampling
"""Samples are generated by PCG64 streams spawned from the user seed, one
stream per chunk of SAMPLE_CHUNK draws, so a sample only depends on the
seed and the request.
"""
SAMPLE_CHUNK = 50_000
SEED_LIMIT = 2 ** 64
ROOT_TOLERANCE = 1e-12
DASK_SCHEDULER = "threads"


# ## Command line reports
REPORT_SCHEMA = 1
LOG_ENV_VAR = "TAILS_LOG"
LOG_LEVELS = {"quiet": "ERROR", "info": "INFO", "debug": "DEBUG"}
EXIT_SUCCESS = 0
EXIT_INPUT_ERROR = 2
EXIT_CONFIG_ERROR = 3
