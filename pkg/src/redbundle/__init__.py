"""Non-autonomous Hamiltonian mechanics on symplectic principal R-bundles.

Canonical-coordinate bundles, extended Hamiltonians and their cosymplectic
structures, cotangent-lift momentum maps, symmetry reduction, and two worked
models (a damped planar oscillator and a heavy top), each with numerical
checks of the identities that tie them together.
"""

from .bundle import (
    MagneticTerm,
    PrincipalAction,
    SymplecticRBundle,
    base_poisson_bracket,
    canonical_bundle,
    deformed_bracket_residual,
    magnetic_deform,
    symplectic_bracket,
)
from .hamiltonian import (
    CosymplecticStructure,
    HamiltonianSection,
    cosymplectic_from_section,
    cosymplectic_ham_field,
    extended_hamiltonian,
    hamiltonian_vector_field,
    horizontal_projector,
    omega_reconstruction_residual,
    projection_consistency,
    reeb_field,
)
from .symmetry import (
    MomentumMap,
    ReductionChart,
    SymmetryAction,
    canonical_action_report,
    cotangent_momentum,
    equivariance_check,
    momentum_conservation,
    reduce,
    reduced_dynamics_consistency,
)

__version__ = "0.1.0"

__all__ = [
    "CosymplecticStructure", "HamiltonianSection", "MagneticTerm", "MomentumMap",
    "PrincipalAction", "ReductionChart", "SymmetryAction", "SymplecticRBundle",
    "base_poisson_bracket", "canonical_action_report", "canonical_bundle",
    "cosymplectic_from_section", "cosymplectic_ham_field", "cotangent_momentum",
    "deformed_bracket_residual", "equivariance_check", "extended_hamiltonian",
    "hamiltonian_vector_field", "horizontal_projector", "magnetic_deform",
    "momentum_conservation", "omega_reconstruction_residual", "projection_consistency",
    "reduce", "reduced_dynamics_consistency", "reeb_field", "symplectic_bracket",
]
