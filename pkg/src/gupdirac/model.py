"""Closed-form pipeline: reduced coefficients, quantization, wavefunctions.

The substitution z = -beta*p**2 turns the momentum-space radial equation
into a hypergeometric-type equation whose coefficients are the five
reduced quantities (mu, tau, zeta, nu, eta).  Feeding those into the
parametric solver yields an algebraic quantization condition in E and
polynomial eigenfunctions.  Two exact identities pin the structure:

    tau = 2                      (mu is exactly twice the tau numerator)
    eta = -lam**2 / 4            (mu equals 4*beta times the eta bracket)

both of which the test suite enforces to near machine precision.

A reduction audit cross-checks the whole algebra numerically: it takes
the raw p-space coefficients from the shooting module, chain-rules them
to z-space, and compares against the closed forms above.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .nu import ComplexBranchError, NUProblem, derive_parameters, quantization_residual
from .params import CouplingCase, EnergyLevel, PhysicalParams, QuantumNumbers
from .shooting import physical_ode_coefficients
from .specfun import hyp2f1_terminating

logger = logging.getLogger(__name__)


class CoefficientDegeneracyError(ValueError):
    """The leading reduced coefficient mu is not positive at this energy."""

    def __init__(self, W: float, mu: float):
        self.W = W
        self.mu = mu
        super().__init__(
            f"coefficient degeneracy: mu = {mu:.6g} <= 0 at mass-energy factor "
            f"W = {W:.6g}; the reduction is not defined here"
        )


class TruncationError(ValueError):
    """A wavefunction grid does not reach decay, so its norm is untrustworthy."""

    def __init__(self, tail_fraction: float, threshold: float):
        self.tail_fraction = tail_fraction
        self.threshold = threshold
        super().__init__(
            f"grid not decayed: |U| at p_max is {tail_fraction:.3g} of the peak "
            f"(threshold {threshold:.0e}); extend the grid or the state does not decay"
        )


@dataclass(frozen=True)
class ReducedCoefficients:
    """The five z-space coefficients at a trial energy."""

    mu: float
    tau: float
    zeta: float
    nu: float
    eta: float


@dataclass(frozen=True)
class WavefunctionTable:
    """Sampled radial eigenfunction on an increasing momentum grid.

    measure is "raw" until normalize() has been applied, then "plain" or
    "deformed"; norm_constant records the factor applied by the last
    normalization.
    """

    p: np.ndarray
    u: np.ndarray
    beta: float
    measure: str = "raw"
    norm_constant: Optional[float] = None


def minimal_length(beta: float) -> float:
    """Smallest achievable position uncertainty, sqrt(beta) in natural units.

    The deformed uncertainty product Delta_x >= 1/Delta_p + beta*Delta_p is
    minimized at Delta_p = 1/sqrt(beta).
    """
    if beta < 0:
        raise ValueError(f"beta must be non-negative, got {beta}")
    return math.sqrt(beta)


def _reduced_from_w(
    V0: float, B: float, e: float, c: float, beta: float,
    W: float, M2: float, E2: float, lam: float,
) -> ReducedCoefficients:
    """Reduced coefficients as functions of (W, M**2, E**2) only.

    Both coupling cases funnel through here: they differ solely in
    W = E + s_c*M, which is what the case-symmetry invariant asserts.
    """
    ebb = e * e * B * B / (c * c)
    mu = ebb * beta + 8.0 * beta * V0 * W
    if mu <= 0.0:
        raise CoefficientDegeneracyError(W, mu)
    tau = 2.0 * ebb * beta / mu + 16.0 * beta * V0 * W / mu
    ebl = e * B * lam / (2.0 * mu * c)
    quarter = ebb * lam * lam * beta / (4.0 * mu)
    harmonic = 2.0 * V0 * lam * lam * beta * W / mu
    zeta = -1.0 / (mu * beta) + ebl - quarter - harmonic
    nu = -ebl + 2.0 * quarter + 2.0 * harmonic + (M2 - E2) / mu
    eta = -quarter - harmonic
    return ReducedCoefficients(mu=mu, tau=tau, zeta=zeta, nu=nu, eta=eta)


def reduced_coefficients(
    params: PhysicalParams, case: CouplingCase, lam: int, E: float
) -> ReducedCoefficients:
    """The five reduced coefficients at trial energy E for the given case."""
    W = E + case.sign * params.M
    return _reduced_from_w(
        params.V0, params.B, params.e, params.c, params.beta,
        W, params.M * params.M, E * E, float(lam),
    )


def to_nu_problem(rc: ReducedCoefficients) -> NUProblem:
    """Map the reduced equation onto the canonical NU input slots."""
    return NUProblem(
        alpha1=1.0, alpha2=rc.tau, alpha3=1.0,
        xi1=-rc.zeta, xi2=rc.nu, xi3=-rc.eta,
    )


def energy_residual(
    params: PhysicalParams, case: CouplingCase, qn: QuantumNumbers, E: float
) -> float:
    """Quantization residual at E; its roots are the closed-form eigenvalues."""
    rc = reduced_coefficients(params, case, qn.lam, E)
    return quantization_residual(to_nu_problem(rc), qn.n)


def default_window(params: PhysicalParams, case: CouplingCase) -> tuple:
    """Default energy search window for the given case.

    Covers the oscillator/Landau scale above M; the lower edge sits just
    inside the mu > 0 domain (just above -M for the spin-symmetric case,
    just above the degeneracy boundary for the pseudospin case).
    """
    hi = params.M + 20.0 * max(
        math.sqrt(params.V0), params.e * params.B / (2.0 * params.M * params.c)
    )
    if case is CouplingCase.DELTA_ZERO:
        lo = -params.M * (1.0 - 1e-9)
    else:
        w_min = -(params.e * params.B) ** 2 / (8.0 * params.V0 * params.c ** 2)
        e_min = w_min + params.M
        lo = e_min + 1e-9 * max(1.0, abs(e_min))
    return (lo, hi)


def _residual_or_none(params, case, qn, E):
    try:
        return energy_residual(params, case, qn, E)
    except (CoefficientDegeneracyError, ComplexBranchError):
        return None


def solve_energy(
    params: PhysicalParams,
    case: CouplingCase,
    qn: QuantumNumbers,
    window: Optional[tuple] = None,
    grid_points: int = 4000,
) -> list:
    """All roots of the quantization residual inside the window, ascending.

    Scans a uniform grid, brackets every sign change, and refines each
    bracket by bisection until the interval is below 1e-13 in relative
    width (well past the 1e-12 contract).  Grid points where the reduction
    degenerates or the NU branch goes complex are treated as holes, and a
    bracket that develops such a hole during refinement is discarded with
    a log note rather than forced.  An empty list means no sign change; an
    invalid window raises.
    """
    if window is None:
        window = default_window(params, case)
    lo, hi = float(window[0]), float(window[1])
    if not lo < hi:
        raise ValueError(f"invalid window: ({lo}, {hi}) is empty or reversed")
    if grid_points < 16:
        raise ValueError(f"grid_points must be >= 16, got {grid_points}")

    energies = np.linspace(lo, hi, grid_points)
    residuals = [_residual_or_none(params, case, qn, float(E)) for E in energies]
    if all(r is None for r in residuals):
        raise ValueError(
            f"window ({lo}, {hi}) lies entirely outside the valid mu > 0 domain"
        )

    roots = []
    for i in range(grid_points - 1):
        r0, r1 = residuals[i], residuals[i + 1]
        if r0 is None or r1 is None:
            continue
        if r0 == 0.0:
            roots.append((float(energies[i]), 0.0))
            continue
        if (r0 > 0) == (r1 > 0):
            continue
        e_lo, e_hi, f_lo = float(energies[i]), float(energies[i + 1]), r0
        discarded = False
        for _ in range(200):
            mid = 0.5 * (e_lo + e_hi)
            if e_hi - e_lo <= 1e-13 * max(1.0, abs(mid)):
                break
            f_mid = _residual_or_none(params, case, qn, mid)
            if f_mid is None:
                logger.info(
                    "discarding bracket [%.9g, %.9g]: interior point left the "
                    "real NU branch", e_lo, e_hi,
                )
                discarded = True
                break
            if f_mid == 0.0:
                e_lo = e_hi = mid
                break
            if (f_mid > 0) == (f_lo > 0):
                e_lo, f_lo = mid, f_mid
            else:
                e_hi = mid
        if discarded:
            continue
        e_root = 0.5 * (e_lo + e_hi)
        res = _residual_or_none(params, case, qn, e_root)
        if res is None:
            continue
        if abs(res) > 1e-10 and (e_hi - e_lo) > 1e-12 * abs(e_root):
            logger.info(
                "discarding spurious sign change near E=%.9g (residual %.3g)",
                e_root, res,
            )
            continue
        roots.append((e_root, res))

    deduped = []
    for e_root, res in sorted(roots):
        if deduped and abs(e_root - deduped[-1][0]) <= 1e-9 * max(1.0, abs(e_root)):
            continue
        deduped.append((e_root, res))
    return [
        EnergyLevel(E=e_root, qn=qn, case=case, residual=res, method="closed-form")
        for e_root, res in deduped
    ]


def radial_wavefunction(
    params: PhysicalParams,
    case: CouplingCase,
    qn: QuantumNumbers,
    E: float,
    momentum: float,
) -> float:
    """Unnormalized radial eigenfunction at the given momentum.

    (beta*p**2)**sqrt(-eta) * (1+beta*p**2)**(-tau/2 + 1 + sqrt(D))
        * 2F1(-n, n + 2*sqrt(-eta) + 2*sqrt(D) + 1; 2*sqrt(-eta) + 1; -beta*p**2)

    with D = (tau/2 - 1)**2 - zeta - nu - eta.  Since eta = -lam**2/4 the
    small-momentum behaviour is p**|lam|.
    """
    if momentum < 0:
        raise ValueError(f"momentum must be non-negative, got {momentum}")
    rc = reduced_coefficients(params, case, qn.lam, E)
    neg_eta = -rc.eta
    if neg_eta < 0:
        raise ComplexBranchError("-eta", neg_eta)
    half = rc.tau / 2.0 - 1.0
    disc = half * half - rc.zeta - rc.nu - rc.eta
    if disc < 0:
        raise ComplexBranchError("alpha9", disc)
    r_eta = math.sqrt(neg_eta)
    r_disc = math.sqrt(disc)
    z = -params.beta * momentum * momentum
    prefac = (params.beta * momentum * momentum) ** r_eta * (
        1.0 + params.beta * momentum * momentum
    ) ** (-rc.tau / 2.0 + 1.0 + r_disc)
    series = hyp2f1_terminating(
        qn.n, qn.n + 2.0 * r_eta + 2.0 * r_disc + 1.0, 2.0 * r_eta + 1.0, z
    )
    return prefac * series


_DECAY_THRESHOLD = 1e-6


def normalize(samples: WavefunctionTable, measure: str = "plain") -> WavefunctionTable:
    """Rescale a table so the trapezoidal norm is one.

    The norm is sum(|U(p_i)|**2 * p_i * w_i * dp_i) with weight w = 1 for
    the plain measure and w = 1/(1 + beta*p**2) for the deformed one.  The
    grid must be increasing and must reach decay (tail below 1e-6 of the
    peak), otherwise the quadrature is a truncation artifact and a
    TruncationError is raised instead.
    """
    if measure not in ("plain", "deformed"):
        raise ValueError(f"unknown measure {measure!r}; expected 'plain' or 'deformed'")
    p = np.asarray(samples.p, dtype=float)
    u = np.asarray(samples.u, dtype=float)
    if p.ndim != 1 or p.shape != u.shape or len(p) < 2:
        raise ValueError("table must hold matching 1-d momentum and value arrays")
    if not np.all(np.diff(p) > 0):
        raise ValueError("momentum grid must be strictly increasing")
    peak = float(np.max(np.abs(u)))
    if peak == 0.0:
        raise ValueError("zero norm: the table is identically zero")
    tail = abs(float(u[-1])) / peak
    if tail >= _DECAY_THRESHOLD:
        raise TruncationError(tail, _DECAY_THRESHOLD)
    if measure == "plain":
        w = np.ones_like(p)
    else:
        w = 1.0 / (1.0 + samples.beta * p * p)
    f = u * u * p * w
    integral = float(np.sum(0.5 * (f[1:] + f[:-1]) * np.diff(p)))
    if integral <= 0.0:
        raise ValueError("zero norm: quadrature gave a non-positive integral")
    scale = 1.0 / math.sqrt(integral)
    return replace(samples, u=u * scale, measure=measure, norm_constant=scale)


def reduction_audit(
    params: PhysicalParams,
    case: CouplingCase,
    lam: int,
    E: float,
    sample_p,
    tolerance: float = 1e-10,
) -> dict:
    """Numerical audit of the p-space to z-space reduction at sample momenta.

    For each momentum the raw equation coefficients are chain-ruled through
    z = -beta*p**2 (dz/dp = -2*beta*p, d2z/dp2 = -2*beta) and the resulting
    first- and zeroth-order coefficient ratios of the canonical form are
    compared against the ones implied by the reduced coefficients.  The
    report also documents, per polynomial degree, the difference between
    the canonical quantization residual and the variant whose final term
    carries the discriminant without its square root, as printed in one
    rendition of the energy relation.  A failing audit is a report, never
    an exception.
    """
    report = {
        "case": case.value,
        "lambda": lam,
        "E": E,
        "tolerance": tolerance,
        "status": "ok",
        "points": [],
        "max_abs_discrepancy": 0.0,
        "max_rel_discrepancy": 0.0,
        "passed": True,
        "printed_variant_quantization": [],
    }
    try:
        rc = reduced_coefficients(params, case, lam, E)
    except CoefficientDegeneracyError as exc:
        report["status"] = f"degenerate: {exc}"
        report["passed"] = False
        return report

    beta = params.beta
    for p in sample_p:
        c2, c1, c0 = physical_ode_coefficients(params, case, lam, E, float(p))
        z = -beta * p * p
        zp = -2.0 * beta * p
        zpp = -2.0 * beta
        a_phys = (c2 * zpp + c1 * zp) / (c2 * zp * zp)
        c_phys = c0 / (c2 * zp * zp)
        a_closed = (1.0 - rc.tau * z) / (z * (1.0 - z))
        c_closed = (rc.zeta * z * z + rc.nu * z + rc.eta) / (z * (1.0 - z)) ** 2
        a_abs = abs(a_phys - a_closed)
        c_abs = abs(c_phys - c_closed)
        a_rel = a_abs / max(1.0, abs(a_closed))
        c_rel = c_abs / max(1.0, abs(c_closed))
        flagged = a_rel > tolerance or c_rel > tolerance
        report["points"].append({
            "p": float(p),
            "z": z,
            "first_order": {"chain_rule": a_phys, "closed_form": a_closed,
                            "abs_err": a_abs, "rel_err": a_rel},
            "zeroth_order": {"chain_rule": c_phys, "closed_form": c_closed,
                             "abs_err": c_abs, "rel_err": c_rel},
            "flagged": flagged,
        })
        report["max_abs_discrepancy"] = max(report["max_abs_discrepancy"], a_abs, c_abs)
        report["max_rel_discrepancy"] = max(report["max_rel_discrepancy"], a_rel, c_rel)
        if flagged:
            report["passed"] = False

    nup = to_nu_problem(rc)
    try:
        d = derive_parameters(nup)
        r8 = math.sqrt(d.alpha8)
        for n in range(4):
            canonical = quantization_residual(nup, n)
            printed = canonical - 2.0 * math.sqrt(d.alpha8 * d.alpha9) + 2.0 * r8 * d.alpha9
            report["printed_variant_quantization"].append({
                "n": n,
                "canonical": canonical,
                "printed_variant": printed,
                "difference": canonical - printed,
            })
    except ComplexBranchError as exc:
        report["printed_variant_quantization"] = [{"status": f"complex branch: {exc}"}]
    return report
