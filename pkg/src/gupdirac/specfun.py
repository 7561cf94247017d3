"""Special functions for the momentum-space eigenfunctions.

Two independent evaluation routes are kept on purpose: Jacobi polynomials
go through the three-term recurrence, while the terminating Gauss series
is summed directly.  The classical bridge

    P_n^(a,b)(1 - 2z) = binom(n + a, n) * 2F1(-n, n + a + b + 1; a + 1; z)

ties them together and is enforced by the test suite, so neither route can
drift without being caught.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


def ln_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0."""
    if not x > 0:
        raise ValueError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def binom_real(a: float, k: int) -> float:
    """binom(a, k) for real upper argument a > -1 and integer k >= 0.

    Computed as exp of log-gamma differences to stay finite for large
    arguments and meaningful for non-integer a.
    """
    if k < 0:
        raise ValueError(f"binom_real requires k >= 0, got {k}")
    return math.exp(ln_gamma(a + 1.0) - ln_gamma(float(k) + 1.0) - ln_gamma(a - k + 1.0))


@dataclass(frozen=True)
class JacobiParams:
    """Degree and the two real indices of a Jacobi polynomial.

    The indices are called a and b rather than the conventional Greek pair
    to avoid collision with the deformation parameter and the Dirac matrix
    names used elsewhere in this package.
    """

    n: int
    a: float
    b: float

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"Jacobi degree must be non-negative, got {self.n}")


def jacobi_p(params: JacobiParams, x: float) -> float:
    """Evaluate P_n^(a,b)(x) by the three-term recurrence in the degree.

    x may lie anywhere on the real line; the physics here evaluates at
    1 + 2*beta*p**2 > 1.  Stable for the small degrees (n up to ~30) this
    package needs.
    """
    n, a, b = params.n, params.a, params.b
    if n == 0:
        return 1.0
    p_prev = 1.0
    p_cur = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0
    for m in range(2, n + 1):
        c1 = 2.0 * m * (m + a + b) * (2.0 * m + a + b - 2.0)
        c2 = (2.0 * m + a + b - 1.0) * (
            (2.0 * m + a + b) * (2.0 * m + a + b - 2.0) * x + a * a - b * b
        )
        c3 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * (2.0 * m + a + b)
        p_prev, p_cur = p_cur, (c2 * p_cur - c3 * p_prev) / c1
    return p_cur


def hyp2f1_terminating(n: int, b: float, c: float, z: float) -> float:
    """2F1(-n, b; c; z) as the exact finite sum of n + 1 terms.

    The first parameter -n makes the series terminate, so this is plain
    polynomial arithmetic.  c must not be a non-positive integer greater
    than -n, otherwise a denominator Pochhammer factor vanishes inside the
    truncated sum.
    """
    if n < 0:
        raise ValueError(f"hyp2f1_terminating requires n >= 0, got {n}")
    if c <= 0 and float(c).is_integer() and c > -n:
        raise ValueError(
            f"parameter c={c} is a non-positive integer > -n; "
            "a denominator Pochhammer factor vanishes"
        )
    total = 1.0
    term = 1.0
    for k in range(n):
        term *= (-(n - k)) * (b + k) / ((c + k) * (k + 1.0)) * z
        total += term
    return total
