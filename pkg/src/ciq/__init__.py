"""Bracket identification from first-order dynamics for lattice field theories."""

from ciq.errors import (
    CIQError,
    ConstraintDrift,
    ConstraintViolation,
    DegenerateHamiltonian,
    DimensionMismatch,
    FormatError,
    GridMismatch,
    InconsistentSystem,
    NotTransverse,
    SymmetryViolation,
)
from ciq.fieldio import read_field_file, write_field_file
from ciq.helmholtz import (
    TransverseKernel,
    longitudinal_project,
    transverse_delta_kernel,
    transverse_project,
)
from ciq.lattice import (
    ComplexSpectrum,
    LatticeGrid,
    ScalarField,
    VectorField,
    dft_forward,
    dft_inverse,
    spectral_curl,
    spectral_divergence,
    spectral_gradient,
    spectral_laplacian,
)
from ciq.momentum import (
    ModeCoefficients,
    PolarizationBasis,
    alpha_to_scalar,
    alphabeta_to_vector,
    bracket_in_modes,
    build_polarization_basis,
    check_closure,
    momentum_hamiltonian_kg,
    momentum_hamiltonian_maxwell,
    scalar_to_alpha,
    vector_to_alphabeta,
)
from ciq.scenarios import (
    KGScenario,
    MaxwellScenario,
    build_kg_system,
    build_maxwell_system,
    compare_brackets,
    expected_kg_bracket,
    expected_maxwell_bracket,
)
from ciq.solver import (
    BracketMatrix,
    QuadraticSystem,
    constraint_null_basis,
    evolve_exact,
    hamiltonian_value,
    solve_brackets,
    taylor_first_order,
    verify_time_covariance,
)

__version__ = "0.1.0"
