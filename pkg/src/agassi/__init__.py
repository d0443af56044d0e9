"""Extended Agassi model toolkit: qubit Hamiltonians via the
Jordan-Wigner mapping, exact and Trotterized dynamics, phase-diagram
labeling, correlation-series datasets, and neural phase classifiers."""

__version__ = "0.1.0"

from .pauli import PauliString, PauliSum, pauli_mul
from .jordan_wigner import SiteIndexing, collective_op, fermion_op
from .hamiltonian import (
    ModelParams,
    ScaledParams,
    build_hamiltonian,
    estimate_resources,
    expand_xyz,
    family_term_groups,
    hamiltonian_families_j2,
    partition_commuting,
    reference_terms_j2,
    scale_params,
    trotter_groups,
    unscale_params,
)

__all__ = [
    "PauliString",
    "PauliSum",
    "pauli_mul",
    "SiteIndexing",
    "fermion_op",
    "collective_op",
    "ModelParams",
    "ScaledParams",
    "scale_params",
    "unscale_params",
    "build_hamiltonian",
    "expand_xyz",
    "hamiltonian_families_j2",
    "reference_terms_j2",
    "partition_commuting",
    "trotter_groups",
    "family_term_groups",
    "estimate_resources",
]
