"""Exact graded Betti numbers of finite point sets over prime fields, two-plane
covers of matroids, socle degrees, and Stanley-Reisner cross-checks."""

from __future__ import annotations

from .errors import (BettiCoverError, BudgetExceeded, DuplicatePointError, FieldTooSmall,
                     InternalConsistencyError, NotNonzerodivisor, ParseError, StructuralError)
from .graded import (LinearForm, PointQuotient, find_nzd_linear_form, hilbert_function,
                     isoc_via_socle, regularity_index, socle_dims)
from .koszul import BettiTable, betti_number, betti_table, isoc_via_betti, main_predicate
from .linalg import Matrix, PrimeField, kernel_basis, rank, rref
from .matroid import (CoverCertificate, ExplicitMatroid, LinearMatroid, check_deletion_theorem,
                      circuits, closure, fundamental_circuit, is_Dt, uniform_matroid)
from .points import (PointConfig, is_linearly_general, is_nondegenerate, load_config,
                     moment_curve_config, parse_config, random_config, two_plane_config)
from .stanley_reisner import (SimplicialComplex, cycle_complex, cycle_section_points,
                              cyclic_differences_check, hochster_betti, hochster_table,
                              reduced_homology, sr_betti_via_koszul)

__version__ = "0.1.0"

__all__ = [
    "BettiCoverError",
    "BettiTable",
    "BudgetExceeded",
    "CoverCertificate",
    "DuplicatePointError",
    "ExplicitMatroid",
    "FieldTooSmall",
    "InternalConsistencyError",
    "LinearForm",
    "LinearMatroid",
    "Matrix",
    "NotNonzerodivisor",
    "ParseError",
    "PointConfig",
    "PointQuotient",
    "PrimeField",
    "SimplicialComplex",
    "StructuralError",
    "betti_number",
    "betti_table",
    "check_deletion_theorem",
    "circuits",
    "closure",
    "cycle_complex",
    "cycle_section_points",
    "cyclic_differences_check",
    "find_nzd_linear_form",
    "fundamental_circuit",
    "hilbert_function",
    "hochster_betti",
    "hochster_table",
    "is_Dt",
    "is_linearly_general",
    "is_nondegenerate",
    "isoc_via_betti",
    "isoc_via_socle",
    "kernel_basis",
    "load_config",
    "main_predicate",
    "moment_curve_config",
    "parse_config",
    "random_config",
    "rank",
    "reduced_homology",
    "regularity_index",
    "rref",
    "socle_dims",
    "sr_betti_via_koszul",
    "two_plane_config",
    "uniform_matroid",
]
