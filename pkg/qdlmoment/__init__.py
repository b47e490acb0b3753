"""Numerical verification of the first moment of quadratic Dirichlet L-functions.

Gauss sums, L-values, double Dirichlet series identities and the smoothed moment
experiment, with a typed result cache on disk or in redis.
"""

import logging
import pathlib

__version__ = pathlib.Path(__file__).parent.joinpath("VERSION").read_text().strip()


logger = logging.getLogger(__name__)


from qdlmoment.cache import ResultCache  # noqa: E402
from qdlmoment.config import Settings  # noqa: E402
from qdlmoment.lfunc import l2_chi_n, l_kronecker, l_primitive_afe  # noqa: E402
from qdlmoment.moment import (  # noqa: E402
    compute_moment,
    error_scan,
    gaussian_weight,
    main_terms,
)

__all__ = [
    "ResultCache",
    "Settings",
    "__version__",
    "compute_moment",
    "error_scan",
    "gaussian_weight",
    "l2_chi_n",
    "l_kronecker",
    "l_primitive_afe",
    "main_terms",
]
