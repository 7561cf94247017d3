"""Bound states of the minimal-length 2D Dirac oscillator in a magnetic field.

Momentum-space spectral solver for the deformed-commutator Dirac equation
with a harmonic potential: closed-form energies and eigenfunctions through
the parametric Nikiforov-Uvarov method, independently cross-checked by a
direct shooting-method eigensolver.
"""

from .model import (
    CoefficientDegeneracyError,
    ReducedCoefficients,
    TruncationError,
    WavefunctionTable,
    default_window,
    energy_residual,
    minimal_length,
    normalize,
    radial_wavefunction,
    reduced_coefficients,
    reduction_audit,
    solve_energy,
    to_nu_problem,
)
from .nu import (
    ComplexBranchError,
    NUDerived,
    NUProblem,
    SingularPointError,
    auxiliary_functions,
    derive_parameters,
    eigenfunction,
    nu_ode_residual,
    quantization_residual,
)
from .params import (
    CouplingCase,
    EnergyLevel,
    PhysicalParams,
    QuantumNumbers,
    mass_energy_factor,
)
from .shooting import (
    IntegrationError,
    ShootingConfig,
    StateNotFoundError,
    decay_exponent,
    default_config,
    oracle_energy,
    physical_ode_coefficients,
    shoot,
)
from .specfun import JacobiParams, binom_real, hyp2f1_terminating, jacobi_p, ln_gamma

__version__ = "0.1.0"

__all__ = [
    "CoefficientDegeneracyError",
    "ComplexBranchError",
    "CouplingCase",
    "EnergyLevel",
    "IntegrationError",
    "JacobiParams",
    "NUDerived",
    "NUProblem",
    "PhysicalParams",
    "QuantumNumbers",
    "ReducedCoefficients",
    "ShootingConfig",
    "SingularPointError",
    "StateNotFoundError",
    "TruncationError",
    "WavefunctionTable",
    "auxiliary_functions",
    "binom_real",
    "decay_exponent",
    "default_config",
    "default_window",
    "derive_parameters",
    "eigenfunction",
    "energy_residual",
    "hyp2f1_terminating",
    "jacobi_p",
    "ln_gamma",
    "mass_energy_factor",
    "minimal_length",
    "normalize",
    "nu_ode_residual",
    "oracle_energy",
    "physical_ode_coefficients",
    "quantization_residual",
    "radial_wavefunction",
    "reduced_coefficients",
    "reduction_audit",
    "solve_energy",
    "to_nu_problem",
]
