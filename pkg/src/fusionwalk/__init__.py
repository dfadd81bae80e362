"""Level-k fusion coefficients of classical Lie algebras and the alcove random walks they drive."""

from .alcove_markov import (
    AlcoveKernel,
    asymptotic_estimate,
    build_kernel,
    dirichlet_spectrum,
    enumerate_alcove,
    invariant_measure,
    lattice_index,
)
from .charlib import dim, discretized_character, tensor_decompose, weight_multiplicities
from .errors import BoundExceededError, ConsistencyError, FusionWalkError, InvalidInputError
from .fusion import fold_affine, fusion_coeffs, fusion_matrix, fusion_power, verify_fusion_identity
from .rootsys import RootSystem, build_root_system
from .walks import count_littelmann_paths, count_walks, step_set

__all__ = [
    "AlcoveKernel",
    "BoundExceededError",
    "ConsistencyError",
    "FusionWalkError",
    "InvalidInputError",
    "RootSystem",
    "asymptotic_estimate",
    "build_kernel",
    "build_root_system",
    "count_littelmann_paths",
    "count_walks",
    "dim",
    "dirichlet_spectrum",
    "discretized_character",
    "enumerate_alcove",
    "fold_affine",
    "fusion_coeffs",
    "fusion_matrix",
    "fusion_power",
    "invariant_measure",
    "lattice_index",
    "step_set",
    "tensor_decompose",
    "verify_fusion_identity",
    "weight_multiplicities",
]
