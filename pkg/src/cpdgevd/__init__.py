"""Exact algebraic CPD of third-order tensors through a generalized eigenvalue problem.

The main entry points are :func:`cpd` and the estimator :class:`AlgebraicCPD`.
"""

__version__ = "0.1.0"

from .compound import (b_matrix, compound, khatri_rao, khatri_rao_power, mirror_L,
                       permanent, permanental_compound, q_matrix, r_matrix, selector_H,
                       sym_project, symmetrizer_G)
from .cpdalg import (DiagnosticsReport, KcVerdict, algo2_find_AB, cpd, phase1_find_F,
                     phase2_columns_of_C, phase3_AB_given_C)
from .datasets import load_rank5_benchmark, make_random_cpd
from .estimator import AlgebraicCPD
from .exceptions import CPDError, DiagnosticError, GEVDError
from .gevd import cpd_gevd
from .multiindex import Kind, MultiIndexTable, enumerate_family
from .polarize import DetectingMatrix, build_detecting, mixed_discriminant, polarized_compound
from .tensor import Cpd, compose, matricize, random_slice_mixture, reduce_third_mode, residual, tensorize
from .tolerance import ToleranceConfig
from .verify import MatchResult, check_bc_properties, match_factors, nnz_count

__all__ = [
    "AlgebraicCPD", "CPDError", "Cpd", "DetectingMatrix", "DiagnosticError", "DiagnosticsReport",
    "GEVDError", "KcVerdict", "Kind", "MatchResult", "MultiIndexTable", "ToleranceConfig",
    "algo2_find_AB", "b_matrix", "build_detecting", "check_bc_properties", "compose", "compound",
    "cpd", "cpd_gevd", "enumerate_family", "khatri_rao", "khatri_rao_power", "load_rank5_benchmark",
    "make_random_cpd", "match_factors", "matricize", "mirror_L", "mixed_discriminant", "nnz_count",
    "permanent", "permanental_compound", "phase1_find_F", "phase2_columns_of_C",
    "phase3_AB_given_C", "polarized_compound", "q_matrix", "r_matrix", "random_slice_mixture",
    "reduce_third_mode", "residual", "selector_H", "sym_project", "symmetrizer_G", "tensorize",
]
