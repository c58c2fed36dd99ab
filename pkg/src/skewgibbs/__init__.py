"""Bayesian estimation of multivariate skew-normal/skew-t distributions.

Three model variants: an unconstrained skewness matrix with normal-Wishart
priors (Full-NOWI), the lower-triangular identified version (LT-NOWI), and
the lower-triangular version with horseshoe shrinkage on the skewness
coefficients plus a positive-definiteness-assured graphical horseshoe on
the precision matrix (LT-HSGHS).
"""

__version__ = "0.1.0"

from . import kernels
from .distributions import RngStream
from .gibbs import ChainConfig, run_chain
from .model import Dataset, PriorConfig
from .simstudy import frobenius_loss, make_delta_design, run_study, simulate_data

__all__ = [
    "ChainConfig",
    "Dataset",
    "PriorConfig",
    "RngStream",
    "__version__",
    "frobenius_loss",
    "kernels",
    "make_delta_design",
    "run_chain",
    "run_study",
    "simulate_data",
]
