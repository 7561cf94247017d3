"""Independent shooting-method eigensolver for the momentum-space equation.

This module never touches the closed-form pipeline: it integrates the
physical radial equation directly and finds energies by matching the
outward and inward log-derivatives, labelling states by the node count of
the outward sweep.  The only shared code is the parameter types.

Large-momentum behaviour under the deformed algebra is power-law rather
than Gaussian, so the inward start uses a decay exponent computed
numerically from the frozen-coefficient indicial equation instead of any
hand-derived asymptotic form.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numba import njit

from .params import CouplingCase, EnergyLevel, PhysicalParams, QuantumNumbers

logger = logging.getLogger(__name__)

_STATUS_OK = 0
_STATUS_C2_SIGN = 1
_STATUS_NONFINITE = 2
_STATUS_STEP_UNDERFLOW = 3
_STATUS_NO_DECAY_ROOT = 4

_STATUS_MESSAGES = {
    _STATUS_C2_SIGN: "second-derivative coefficient changed sign",
    _STATUS_NONFINITE: "non-finite state during integration",
    _STATUS_STEP_UNDERFLOW: "step size underflow",
    _STATUS_NO_DECAY_ROOT: "no real decaying indicial exponent at p_max "
    "(outer cutoff inside the oscillatory region)",
}


class IntegrationError(RuntimeError):
    """The ODE integration itself failed (distinct from a missing state)."""

    def __init__(self, status: int, where: str):
        self.status = status
        super().__init__(f"{_STATUS_MESSAGES.get(status, 'unknown failure')} ({where})")


class StateNotFoundError(LookupError):
    """No energy in the window matches the requested node count."""

    def __init__(self, message: str, report: dict):
        self.report = report
        super().__init__(message)


@dataclass(frozen=True)
class ShootingConfig:
    """Concrete integration domain and tolerances for one shooting setup.

    p_min and p_max bound the momentum domain, match_point is where the
    two sweeps are compared, steps controls the maximum step (domain
    span / steps), e_tolerance is the relative energy tolerance of the
    eigenvalue bisection.
    """

    p_min: float
    p_max: float
    match_point: float
    steps: int = 3000
    e_tolerance: float = 1e-9

    def __post_init__(self):
        if not 0 < self.p_min < self.match_point < self.p_max:
            raise ValueError(
                f"require 0 < p_min < match_point < p_max, got "
                f"({self.p_min}, {self.match_point}, {self.p_max})"
            )
        if self.steps < 1000:
            raise ValueError(f"steps must be >= 1000, got {self.steps}")
        if self.e_tolerance < 1e-12:
            raise ValueError(f"e_tolerance must be >= 1e-12, got {self.e_tolerance}")


@njit(cache=True)
def _coeffs(M, V0, B, e, c, beta, sc, lam, E, p):
    """Coefficients (c2, c1, c0) of c2*U'' + c1*U' + c0*U = 0 at momentum p."""
    g = 1.0 + beta * p * p
    W = E + sc * M
    ebb = (e * e * B * B) / (4.0 * c * c)
    c2 = -ebb * g * g - 2.0 * W * V0 * g * g
    c1 = (
        -(e * e * B * B) / (2.0 * c * c) * g * beta * p
        - ebb * g * g / p
        - 4.0 * W * V0 * g * beta * p
        - 2.0 * W * V0 * g * g / p
    )
    c0 = (
        p * p
        - (e * B / (2.0 * c)) * g * lam
        + ebb * g * g * lam * lam / (p * p)
        + 2.0 * lam * lam * W * V0 * g * g / (p * p)
        + M * M
        - E * E
    )
    return c2, c1, c0


@njit(cache=True)
def _rhs(M, V0, B, e, c, beta, sc, lam, E, p, u, v):
    c2, c1, c0 = _coeffs(M, V0, B, e, c, beta, sc, lam, E, p)
    return v, -(c1 * v + c0 * u) / c2


@njit(cache=True)
def _integrate(M, V0, B, e, c, beta, sc, lam, E, pa, pb, u0, v0, max_step, rtol, count_nodes):
    """Adaptive Cash-Karp 4(5) sweep from pa to pb on the state (U, U').

    The state is rescaled by exact powers of two whenever it leaves a safe
    magnitude band; the rescaling factor is positive, so sign changes (node
    counting) and the final log-derivative are unaffected.  Returns
    (u, v, nodes, status).
    """
    direction = 1.0 if pb > pa else -1.0
    span = abs(pb - pa)
    h = direction * min(max_step, span / 16.0)
    p = pa
    u = u0
    v = v0
    nodes = 0
    sgn = 0.0
    if u > 0.0:
        sgn = 1.0
    elif u < 0.0:
        sgn = -1.0

    while (pb - p) * direction > 0.0:
        if abs(h) > max_step:
            h = direction * max_step
        if (p + h - pb) * direction > 0.0:
            h = pb - p

        k1u, k1v = _rhs(M, V0, B, e, c, beta, sc, lam, E, p, u, v)
        k2u, k2v = _rhs(M, V0, B, e, c, beta, sc, lam, E, p + 0.2 * h,
                        u + h * 0.2 * k1u, v + h * 0.2 * k1v)
        k3u, k3v = _rhs(M, V0, B, e, c, beta, sc, lam, E, p + 0.3 * h,
                        u + h * (0.075 * k1u + 0.225 * k2u),
                        v + h * (0.075 * k1v + 0.225 * k2v))
        k4u, k4v = _rhs(M, V0, B, e, c, beta, sc, lam, E, p + 0.6 * h,
                        u + h * (0.3 * k1u - 0.9 * k2u + 1.2 * k3u),
                        v + h * (0.3 * k1v - 0.9 * k2v + 1.2 * k3v))
        k5u, k5v = _rhs(M, V0, B, e, c, beta, sc, lam, E, p + h,
                        u + h * (-11.0 / 54.0 * k1u + 2.5 * k2u - 70.0 / 27.0 * k3u
                                 + 35.0 / 27.0 * k4u),
                        v + h * (-11.0 / 54.0 * k1v + 2.5 * k2v - 70.0 / 27.0 * k3v
                                 + 35.0 / 27.0 * k4v))
        k6u, k6v = _rhs(M, V0, B, e, c, beta, sc, lam, E, p + 0.875 * h,
                        u + h * (1631.0 / 55296.0 * k1u + 175.0 / 512.0 * k2u
                                 + 575.0 / 13824.0 * k3u + 44275.0 / 110592.0 * k4u
                                 + 253.0 / 4096.0 * k5u),
                        v + h * (1631.0 / 55296.0 * k1v + 175.0 / 512.0 * k2v
                                 + 575.0 / 13824.0 * k3v + 44275.0 / 110592.0 * k4v
                                 + 253.0 / 4096.0 * k5v))

        u5 = u + h * (37.0 / 378.0 * k1u + 250.0 / 621.0 * k3u + 125.0 / 594.0 * k4u
                      + 512.0 / 1771.0 * k6u)
        v5 = v + h * (37.0 / 378.0 * k1v + 250.0 / 621.0 * k3v + 125.0 / 594.0 * k4v
                      + 512.0 / 1771.0 * k6v)
        eu = h * ((37.0 / 378.0 - 2825.0 / 27648.0) * k1u
                  + (250.0 / 621.0 - 18575.0 / 48384.0) * k3u
                  + (125.0 / 594.0 - 13525.0 / 55296.0) * k4u
                  + (-277.0 / 14336.0) * k5u
                  + (512.0 / 1771.0 - 0.25) * k6u)
        ev = h * ((37.0 / 378.0 - 2825.0 / 27648.0) * k1v
                  + (250.0 / 621.0 - 18575.0 / 48384.0) * k3v
                  + (125.0 / 594.0 - 13525.0 / 55296.0) * k4v
                  + (-277.0 / 14336.0) * k5v
                  + (512.0 / 1771.0 - 0.25) * k6v)

        if not (math.isfinite(u5) and math.isfinite(v5)):
            return u, v, nodes, _STATUS_NONFINITE

        snorm = max(abs(u), abs(v), abs(u5), abs(v5))
        scale_u = 1e-12 * snorm + rtol * max(abs(u), abs(u5))
        scale_v = 1e-12 * snorm + rtol * max(abs(v), abs(v5))
        err = 0.0
        if scale_u > 0.0:
            err = abs(eu) / scale_u
        if scale_v > 0.0 and abs(ev) / scale_v > err:
            err = abs(ev) / scale_v

        if err <= 1.0:
            p = p + h
            u = u5
            v = v5
            if count_nodes and u != 0.0:
                s_new = 1.0 if u > 0.0 else -1.0
                if sgn != 0.0 and s_new != sgn:
                    nodes += 1
                sgn = s_new
            m = max(abs(u), abs(v))
            if m > 1e120:
                u *= 2.0 ** -400
                v *= 2.0 ** -400
            elif 0.0 < m < 1e-120:
                u *= 2.0 ** 400
                v *= 2.0 ** 400

        if err == 0.0:
            fac = 5.0
        else:
            fac = 0.9 * err ** -0.2
            if fac > 5.0:
                fac = 5.0
            elif fac < 0.2:
                fac = 0.2
        h = h * fac
        if abs(h) < span * 1e-15:
            return u, v, nodes, _STATUS_STEP_UNDERFLOW
    return u, v, nodes, _STATUS_OK


@njit(cache=True)
def _decay_exponent(M, V0, B, e, c, beta, sc, lam, E, p):
    """Positive sigma of the decaying power law U ~ p**(-sigma) at p.

    Frozen-coefficient indicial equation: substituting U = p**(-sigma)
    into the equation with coefficients held at their values at p gives a
    quadratic in sigma; the positive root is the decaying branch.
    """
    c2, c1, c0 = _coeffs(M, V0, B, e, c, beta, sc, lam, E, p)
    qa = c2 / (p * p)
    qb = c2 / (p * p) - c1 / p
    qc = c0
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0.0:
        return 0.0, _STATUS_NO_DECAY_ROOT
    r = math.sqrt(disc)
    s1 = (-qb + r) / (2.0 * qa)
    s2 = (-qb - r) / (2.0 * qa)
    sigma = s1 if s1 > s2 else s2
    if sigma <= 0.0:
        return 0.0, _STATUS_NO_DECAY_ROOT
    return sigma, _STATUS_OK


@njit(cache=True)
def _shoot_kernel(M, V0, B, e, c, beta, sc, lam, E, p_min, match, p_max, max_step, rtol):
    al = abs(lam)
    if al > 0.0:
        u0 = p_min ** al
        v0 = al * p_min ** (al - 1.0)
    else:
        u0 = 1.0
        v0 = 0.0
    uo, vo, nodes, st = _integrate(M, V0, B, e, c, beta, sc, lam, E,
                                   p_min, match, u0, v0, max_step, rtol, True)
    if st != _STATUS_OK:
        return math.nan, nodes, st
    sigma, st = _decay_exponent(M, V0, B, e, c, beta, sc, lam, E, p_max)
    if st != _STATUS_OK:
        return math.nan, nodes, st
    ui, vi, _, st = _integrate(M, V0, B, e, c, beta, sc, lam, E,
                               p_max, match, 1.0, -sigma / p_max, max_step, rtol, False)
    if st != _STATUS_OK:
        return math.nan, nodes, st
    wronskian = vo * ui - vi * uo
    norm = math.sqrt((uo * uo + vo * vo) * (ui * ui + vi * vi))
    if norm == 0.0:
        return math.nan, nodes, _STATUS_NONFINITE
    return wronskian / norm, nodes, _STATUS_OK


_RTOL = 1e-11


def physical_ode_coefficients(
    params: PhysicalParams, case: CouplingCase, lam: int, E: float, momentum: float
):
    """Coefficients (c2, c1, c0) of the radial equation at the given momentum."""
    if momentum <= 0:
        raise ValueError(f"momentum must be positive, got {momentum}")
    return _coeffs(
        params.M, params.V0, params.B, params.e, params.c, params.beta,
        float(case.sign), float(lam), E, momentum,
    )


def _check_c2_negative(params: PhysicalParams, case: CouplingCase, E: float) -> None:
    # c2 = -(e^2B^2/4c^2 + 2*W*V0) * g^2 with g^2 > 0: its sign is fixed over
    # the whole momentum axis by the bracket, so one check suffices.
    W = E + case.sign * params.M
    bracket = (params.e * params.B) ** 2 / (4.0 * params.c ** 2) + 2.0 * W * params.V0
    if bracket <= 0.0:
        raise IntegrationError(_STATUS_C2_SIGN, f"E={E}: c2 >= 0 over the whole domain")


def shoot(
    params: PhysicalParams,
    case: CouplingCase,
    lam: int,
    E: float,
    cfg: ShootingConfig,
) -> dict:
    """One double-sided sweep at energy E.

    Returns {"mismatch": m, "nodes": k} where m is the scaled Wronskian of
    the outward and inward solutions at the match point (zero exactly when
    they are proportional, i.e. at an eigenvalue) and k is the sign-change
    count of the outward sweep.
    """
    _check_c2_negative(params, case, E)
    max_step = (cfg.p_max - cfg.p_min) / cfg.steps
    mismatch, nodes, status = _shoot_kernel(
        params.M, params.V0, params.B, params.e, params.c, params.beta,
        float(case.sign), float(lam), E,
        cfg.p_min, cfg.match_point, cfg.p_max, max_step, _RTOL,
    )
    if status != _STATUS_OK:
        raise IntegrationError(status, f"E={E}, domain [{cfg.p_min}, {cfg.p_max}]")
    return {"mismatch": mismatch, "nodes": nodes}


def decay_exponent(
    params: PhysicalParams, case: CouplingCase, lam: int, E: float, momentum: float
) -> float:
    """Decaying power-law exponent sigma (U ~ p**-sigma) at the given momentum."""
    sigma, status = _decay_exponent(
        params.M, params.V0, params.B, params.e, params.c, params.beta,
        float(case.sign), float(lam), E, momentum,
    )
    if status != _STATUS_OK:
        raise IntegrationError(status, f"p={momentum}, E={E}")
    return sigma


def default_config(
    params: PhysicalParams,
    case: CouplingCase,
    lam: int,
    window: tuple,
    steps: int = 3000,
    e_tolerance: float = 1e-9,
) -> ShootingConfig:
    """Build a shooting domain for the given energy window.

    p_min scales with the deformation length, the match point sits at the
    classical turning point (sign change of the potential-like coefficient
    c0) evaluated at the top of the window, and p_max grows until the
    local decay exponent predicts at least twelve orders of suppression
    between the match point and the cutoff.
    """
    e_hi = window[1]
    sb = math.sqrt(params.beta)
    p_min = 1e-6 / sb

    grid = np.geomspace(max(2.0 * p_min, 1e-4 / sb), 200.0 / sb, 2048)
    sc = float(case.sign)
    lamf = float(lam)
    c0_vals = np.array([
        _coeffs(params.M, params.V0, params.B, params.e, params.c, params.beta,
                sc, lamf, e_hi, p)[2]
        for p in grid
    ])
    sign_flips = np.nonzero(np.sign(c0_vals[:-1]) != np.sign(c0_vals[1:]))[0]
    if len(sign_flips) > 0:
        match = float(grid[sign_flips[-1] + 1])
    else:
        match = 1.0 / sb  # mid-domain fallback: the deformation scale

    p_max = 1.5 * match
    for _ in range(200):
        sigma, status = _decay_exponent(
            params.M, params.V0, params.B, params.e, params.c, params.beta,
            sc, lamf, e_hi, p_max,
        )
        if status == _STATUS_OK and sigma * math.log(p_max / match) >= 30.0:
            break
        p_max *= 1.2
    return ShootingConfig(
        p_min=p_min, p_max=p_max, match_point=match,
        steps=steps, e_tolerance=e_tolerance,
    )


@lru_cache(maxsize=512)
def _scan_window(
    params: PhysicalParams,
    case: CouplingCase,
    lam: int,
    window: tuple,
    cfg: ShootingConfig,
    points: int,
):
    """Grid of (E, mismatch, nodes, valid) rows over the window; cached.

    Energies where the equation degenerates (c2 >= 0) are marked invalid
    rather than raising, so one scan serves every node count.
    """
    energies = np.linspace(window[0], window[1], points)
    rows = []
    for E in energies:
        try:
            res = shoot(params, case, lam, float(E), cfg)
            rows.append((float(E), res["mismatch"], res["nodes"], True))
        except IntegrationError:
            rows.append((float(E), math.nan, -1, False))
    return tuple(rows)


def _bisect_mismatch(params, case, lam, cfg, e_lo, e_hi, m_lo):
    """Bisection on the mismatch sign inside a bracketing interval.

    Runs well past the configured tolerance (down to the floating-point
    resolution of E) so the reported mismatch at the root is as close to
    zero as the arithmetic allows; cfg.e_tolerance remains the guaranteed
    accuracy, not the stopping width.
    """
    for _ in range(200):
        mid = 0.5 * (e_lo + e_hi)
        if e_hi - e_lo <= 1e-15 * max(1.0, abs(mid)):
            break
        m_mid = shoot(params, case, lam, mid, cfg)["mismatch"]
        if m_mid == 0.0:
            return mid
        if (m_mid > 0) == (m_lo > 0):
            e_lo = mid
            m_lo = m_mid
        else:
            e_hi = mid
    return 0.5 * (e_lo + e_hi)


def oracle_energy(
    params: PhysicalParams,
    case: CouplingCase,
    qn: QuantumNumbers,
    window: tuple,
    cfg: ShootingConfig = None,
    scan_points: int = 160,
    refine_check: bool = True,
) -> EnergyLevel:
    """Locate the bound state with exactly qn.n nodes inside the window.

    Scans the window, brackets mismatch sign changes whose left endpoint
    carries the requested node count, and bisects to the configured
    relative tolerance.  Raises StateNotFoundError (with a scan report)
    when no such state exists; integration failures raise separately.
    """
    if cfg is None:
        cfg = default_config(params, case, qn.lam, window)
    rows = _scan_window(params, case, qn.lam, tuple(window), cfg, scan_points)

    bracket = None
    seen_nodes = set()
    for (e0, m0, n0, ok0), (e1, m1, n1, ok1) in zip(rows[:-1], rows[1:]):
        if not (ok0 and ok1):
            continue
        seen_nodes.add(n0)
        seen_nodes.add(n1)
        if m0 == 0.0 and n0 == qn.n:
            bracket = (e0, e0, m0)
            break
        if (m0 > 0) != (m1 > 0) and n0 == qn.n:
            bracket = (e0, e1, m0)
            break
    if bracket is None:
        report = {
            "window": [window[0], window[1]],
            "requested_nodes": qn.n,
            "node_counts_seen": sorted(seen_nodes),
            "scan_points": scan_points,
        }
        raise StateNotFoundError(
            f"no state with {qn.n} nodes in window [{window[0]}, {window[1]}] "
            f"(node counts seen: {sorted(seen_nodes)})",
            report,
        )

    e_star = _bisect_mismatch(params, case, qn.lam, cfg, bracket[0], bracket[1], bracket[2])
    final = shoot(params, case, qn.lam, e_star, cfg)

    if refine_check:
        fine = ShootingConfig(
            p_min=cfg.p_min, p_max=cfg.p_max, match_point=cfg.match_point,
            steps=2 * cfg.steps, e_tolerance=cfg.e_tolerance,
        )
        width = 50.0 * cfg.e_tolerance * max(1.0, abs(e_star))
        lo, hi = e_star - width, e_star + width
        m_lo = shoot(params, case, qn.lam, lo, fine)["mismatch"]
        m_hi = shoot(params, case, qn.lam, hi, fine)["mismatch"]
        if (m_lo > 0) != (m_hi > 0):
            e_fine = _bisect_mismatch(params, case, qn.lam, fine, lo, hi, m_lo)
            if abs(e_fine - e_star) > 10.0 * cfg.e_tolerance * max(1.0, abs(e_star)):
                logger.warning(
                    "grid-refinement drift %.3e at E=%.12g (nodes=%d)",
                    abs(e_fine - e_star), e_star, qn.n,
                )

    return EnergyLevel(
        E=e_star, qn=qn, case=case, residual=final["mismatch"], method="oracle"
    )
