"""Parametric Nikiforov-Uvarov method for hypergeometric-type equations.

Solves equations of the canonical form

    psi'' + (alpha1 - alpha2*s) / (s*(1 - alpha3*s)) * psi'
          + (-xi1*s**2 + xi2*s - xi3) / (s*(1 - alpha3*s))**2 * psi = 0

by deriving the thirteen auxiliary parameters and the constant k, then
assembling the polynomial eigenfunctions and the quantization residual.
Only the minus branch of k is implemented; the plus branch is out of scope.

The physics layer feeds s = -beta*p**2 <= 0, outside the (0, 1/alpha3)
interval the derivation classically presumes.  Prefactors therefore use
absolute values, and the finite-difference residual check adjudicates
whether the assembled function actually solves the equation there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .specfun import JacobiParams, jacobi_p


class ComplexBranchError(ValueError):
    """A square-root argument went negative while deriving NU parameters."""

    def __init__(self, which: str, value: float):
        self.which = which
        self.value = value
        super().__init__(
            f"complex NU branch: {which} = {value:.6g} is negative; "
            "the real minus-branch construction fails"
        )


class SingularPointError(ValueError):
    """Residual evaluation was requested at a singular point of the equation."""


@dataclass(frozen=True)
class NUProblem:
    """The six coefficients of the canonical equation."""

    alpha1: float
    alpha2: float
    alpha3: float
    xi1: float
    xi2: float
    xi3: float

    def __post_init__(self):
        if not self.alpha3 > 0:
            raise ValueError(
                f"alpha3 must be positive (got {self.alpha3}); "
                "the alpha3 -> 0 limit is not implemented"
            )


@dataclass(frozen=True)
class NUDerived:
    """The derived parameters alpha4..alpha13 and the constant k."""

    alpha4: float
    alpha5: float
    alpha6: float
    alpha7: float
    alpha8: float
    alpha9: float
    alpha10: float
    alpha11: float
    alpha12: float
    alpha13: float
    k: float


def derive_parameters(p: NUProblem) -> NUDerived:
    """Derive alpha4..alpha13 and k (minus branch) from the six inputs.

    Raises ComplexBranchError when alpha8 or alpha9 is negative, naming the
    offending parameter; both must be non-negative for the real square
    roots in the quantization condition and the eigenfunctions.
    """
    a1, a2, a3 = p.alpha1, p.alpha2, p.alpha3
    alpha4 = 0.5 * (1.0 - a1)
    alpha5 = 0.5 * (a2 - 2.0 * a3)
    alpha6 = alpha5 * alpha5 + p.xi1
    alpha7 = 2.0 * alpha4 * alpha5 - p.xi2
    alpha8 = alpha4 * alpha4 + p.xi3
    alpha9 = a3 * alpha7 + a3 * a3 * alpha8 + alpha6
    if alpha8 < 0.0:
        raise ComplexBranchError("alpha8", alpha8)
    if alpha9 < 0.0:
        raise ComplexBranchError("alpha9", alpha9)
    r8 = math.sqrt(alpha8)
    r9 = math.sqrt(alpha9)
    k = -(alpha7 + 2.0 * a3 * alpha8) - 2.0 * math.sqrt(alpha8 * alpha9)
    alpha10 = a1 + 2.0 * alpha4 + 2.0 * r8
    alpha11 = a2 - 2.0 * alpha5 + 2.0 * (r9 + a3 * r8)
    alpha12 = alpha4 + r8
    alpha13 = alpha5 - (r9 + a3 * r8)
    return NUDerived(
        alpha4, alpha5, alpha6, alpha7, alpha8, alpha9,
        alpha10, alpha11, alpha12, alpha13, k,
    )


def quantization_residual(p: NUProblem, n: int) -> float:
    """Residual of the polynomial-termination condition at degree n.

    Eigenstates of the underlying problem correspond to roots of this
    expression through the energy dependence of the coefficients.
    """
    if n < 0:
        raise ValueError(f"degree n must be non-negative, got {n}")
    d = derive_parameters(p)
    a3 = p.alpha3
    return (
        p.alpha2 * n
        - (2.0 * n + 1.0) * d.alpha5
        + (2.0 * n + 1.0) * (math.sqrt(d.alpha9) + a3 * math.sqrt(d.alpha8))
        + n * (n - 1.0) * a3
        + d.alpha7
        + 2.0 * a3 * d.alpha8
        + 2.0 * math.sqrt(d.alpha8 * d.alpha9)
    )


def eigenfunction(p: NUProblem, n: int, s: float) -> float:
    """Unnormalized NU eigenfunction at s.

    |s|**alpha12 * |1 - alpha3*s|**(-alpha12 - alpha13/alpha3)
        * P_n^(alpha10 - 1, alpha11/alpha3 - alpha10 - 1)(1 - 2*alpha3*s)

    Absolute values keep the prefactors real on s <= 0; the function is
    then the physical solution up to a constant phase.
    """
    d = derive_parameters(p)
    a3 = p.alpha3
    exp1 = d.alpha12
    exp2 = -d.alpha12 - d.alpha13 / a3
    jp = JacobiParams(n=n, a=d.alpha10 - 1.0, b=d.alpha11 / a3 - d.alpha10 - 1.0)
    return abs(s) ** exp1 * abs(1.0 - a3 * s) ** exp2 * jacobi_p(jp, 1.0 - 2.0 * a3 * s)


def auxiliary_functions(p: NUProblem, s: float) -> dict:
    """The auxiliary polynomial pi(s), linear tau(s) and weight rho(s).

    Returned as a dict with keys pi_val, tau_val, rho_val.  rho uses the
    same absolute-value convention as the eigenfunction prefactors.
    """
    d = derive_parameters(p)
    a3 = p.alpha3
    r8 = math.sqrt(d.alpha8)
    r9 = math.sqrt(d.alpha9)
    bracket = (r9 + a3 * r8) * s - r8
    pi_val = d.alpha4 + d.alpha5 * s - bracket
    tau_val = p.alpha1 + 2.0 * d.alpha4 - (p.alpha2 - 2.0 * d.alpha5) * s - bracket
    rho_val = abs(s) ** (d.alpha10 - 1.0) * abs(1.0 - a3 * s) ** (
        d.alpha11 / a3 - d.alpha10 - 1.0
    )
    return {"pi_val": pi_val, "tau_val": tau_val, "rho_val": rho_val}


# Fraction of the distance to the nearest singular point that the stencil
# may span.  Keeps the fourth-order truncation of the singular prefactors
# |s|**alpha12 below ~1e-10 while the rounding floor eps/gamma**2 stays
# near 1e-11.
_STEP_CAP_FRACTION = 5e-3


def nu_ode_residual(p: NUProblem, n: int, s: float, h: float = 1e-3) -> float:
    """Scaled residual of the canonical equation at s for the degree-n state.

    Derivatives come from five-point central differences on the assembled
    eigenfunction, never from analytic Jacobi derivatives, so the check is
    independent of the evaluation path it verifies.  The effective step is
    h*max(1, |s|), capped at a small fraction of the distance to the
    nearest singular point so the stencil never straddles s = 0 or
    s = 1/alpha3.  The raw residual is divided by (1 + sum of the term
    magnitudes): a correct eigenpair yields a tiny number while a detuned
    energy stands out at O(1).
    """
    a3 = p.alpha3
    if s == 0.0 or s == 1.0 / a3:
        raise SingularPointError(f"s = {s} is a singular point of the equation")
    d_sing = min(abs(s), abs(s - 1.0 / a3))
    step = min(h * max(1.0, abs(s)), _STEP_CAP_FRACTION * d_sing)

    f = [eigenfunction(p, n, s + j * step) for j in (-2, -1, 0, 1, 2)]
    d1 = (-f[4] + 8.0 * f[3] - 8.0 * f[1] + f[0]) / (12.0 * step)
    d2 = (-f[4] + 16.0 * f[3] - 30.0 * f[2] + 16.0 * f[1] - f[0]) / (12.0 * step * step)

    denom = s * (1.0 - a3 * s)
    coeff1 = (p.alpha1 - p.alpha2 * s) / denom
    coeff0 = (-p.xi1 * s * s + p.xi2 * s - p.xi3) / (denom * denom)

    t2 = d2
    t1 = coeff1 * d1
    t0 = coeff0 * f[2]
    return (t2 + t1 + t0) / (1.0 + abs(t2) + abs(t1) + abs(t0))
