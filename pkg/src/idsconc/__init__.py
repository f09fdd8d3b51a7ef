"""Quantitative finite-volume approximation of the integrated density of
states of the discrete Anderson model: explicit bounds, exact step-function
machinery, and reproducible Monte Carlo experiments."""

from . import bounds, empirical, lattice, operators, orlicz, spectra, validation
from .kernels import BACKEND as KERNEL_BACKEND
from .lattice import Cube, TilingSet, b_function, tiling
from .operators import RestrictedOperator, SolverSizeError, assemble
from .random_field import (FieldSpec, Marginal, PotentialSample, derive_seed,
                           sample, translate)
from .spectra import (StepFunction, average, eigenvalues, evcf,
                      normalized_evcf, sup_norm_distance)

__version__ = "0.1.0"

__all__ = [
    "bounds", "empirical", "lattice", "operators", "orlicz", "spectra",
    "validation", "KERNEL_BACKEND", "Cube", "TilingSet", "b_function",
    "tiling", "RestrictedOperator", "SolverSizeError", "assemble",
    "FieldSpec", "Marginal", "PotentialSample", "derive_seed", "sample",
    "translate", "StepFunction", "average", "eigenvalues", "evcf",
    "normalized_evcf", "sup_norm_distance", "__version__",
]
