"""Shared parameter types for the minimal-length Dirac oscillator solver.

Everything downstream (closed-form pipeline, shooting solver, CLI) shares
these types.  Natural units hbar = 1 throughout; the speed of light is kept
as an explicit parameter because the radial equation retains e/c factors.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass


class CouplingCase(enum.Enum):
    """Which potential combination vanishes in the two-component reduction.

    DELTA_ZERO: vector equals scalar potential (spin-symmetric branch);
    the decoupled radial equation carries the factor W = E + M.
    SIGMA_ZERO: vector equals minus the scalar potential (pseudospin
    branch); the factor becomes W = E - M.
    """

    DELTA_ZERO = "delta_zero"
    SIGMA_ZERO = "sigma_zero"

    @property
    def sign(self) -> int:
        """Sign s_c of the mass term in W = E + s_c*M."""
        return 1 if self is CouplingCase.DELTA_ZERO else -1

    @classmethod
    def from_string(cls, text: str) -> "CouplingCase":
        try:
            return cls(text)
        except ValueError:
            raise ValueError(
                f"unknown coupling case {text!r}; expected 'delta_zero' or 'sigma_zero'"
            ) from None


@dataclass(frozen=True)
class PhysicalParams:
    """Full experiment configuration.

    M     rest mass (> 0)
    V0    harmonic strength, energy per length squared (> 0)
    B     magnetic field magnitude (>= 0)
    beta  deformation parameter of the modified commutator (0 < beta <= 1);
          beta -> 0 recovers the ordinary Heisenberg algebra, but beta = 0
          itself is excluded because the reduced coefficients divide by it
    e     charge (> 0, default 1)
    c     speed of light (> 0, default 1)
    """

    M: float
    V0: float
    B: float
    beta: float
    e: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if not self.M > 0:
            raise ValueError(f"M must be positive, got {self.M}")
        if not self.V0 > 0:
            raise ValueError(f"V0 must be positive, got {self.V0}")
        if self.B < 0:
            raise ValueError(f"B must be non-negative, got {self.B}")
        if not self.e > 0:
            raise ValueError(f"e must be positive, got {self.e}")
        if not self.c > 0:
            raise ValueError(f"c must be positive, got {self.c}")
        if not 0 < self.beta <= 1:
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")


@dataclass(frozen=True)
class QuantumNumbers:
    """Radial degree n >= 0 and integer angular-momentum label lam."""

    n: int
    lam: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"n must be non-negative, got {self.n}")
        if int(self.n) != self.n or int(self.lam) != self.lam:
            raise ValueError("quantum numbers must be integers")


@dataclass(frozen=True)
class EnergyLevel:
    """A solved eigenvalue with its provenance.

    method is "closed-form" for roots of the algebraic quantization
    condition and "oracle" for shooting-method eigenvalues.  residual is
    the quantization residual (closed form) or the scaled log-derivative
    mismatch (oracle) at E.
    """

    E: float
    qn: QuantumNumbers
    case: CouplingCase
    residual: float
    method: str


def mass_energy_factor(params: PhysicalParams, case: CouplingCase, E: float) -> float:
    """W = E + s_c*M, the effective mass-energy factor of the chosen case."""
    return E + case.sign * params.M
