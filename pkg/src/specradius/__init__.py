"""Structured pseudospectral abscissa and stability radius of real matrices.

The adversary adds a real perturbation supported on a fixed edge set, with
per-entry saturation bounds and a Frobenius-norm (energy) budget.
"""
from .abscissa import (
    AbscissaResult,
    abscissa_sweep,
    best_of_starts,
    convergence_rate,
    fixed_point_gap,
    worst_case_perturbation,
)
from .errors import *  # noqa: F401,F403
from .inner import inner_derivative, solve_inner, solve_inner_oracle, theta
from .io import gen_circulant, gen_companion, read_matrix_market, read_structure
from .linalg import EigenTriple, rightmost_eigentriple, spectral_abscissa
from .perturbation import PerturbationStructure, SparsePerturbation, project, sample, validate
from .radius import RadiusResult, abscissa_derivative, stability_radius
from .sampling import SpectrumCloud, sample_pseudospectrum, sampled_abscissa

__version__ = "0.1.0"
