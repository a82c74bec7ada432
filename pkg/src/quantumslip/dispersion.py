"""Dispersion function of the half-space transport problem.

For the kernel K the dispersion function is

    lambda(z) = 1 + z * int_{-inf}^{inf} K(mu) / (mu - z) dmu,

evaluated off the real axis by direct quadrature (folded to (0, inf) using
the evenness of K) and on the positive real axis through its boundary
values

    lambda_pm(mu) = lambda(mu) +- i pi mu K(mu),

where lambda(mu) is the principal-value integral.  The phase

    theta(mu) = arg lambda_plus(mu)   in [0, pi],
    xi(mu) = theta(mu) - pi           in [-pi, 0],

is the quantity the Riemann-problem factorization is built from.  Since
Im lambda_plus = pi mu K(mu) >= 0, taking the two-argument angle of
lambda_plus needs no branch unwrapping; theta(0+) = 0 and theta(inf) = pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .moments import MomentSet
from .quadrature import QuadratureConfig, integrate, integrate_principal_value

__all__ = ["PhaseSample", "dispersion_function", "boundary_phase", "asymptotic_coefficients"]


@dataclass(frozen=True)
class PhaseSample:
    """Boundary value of the dispersion function at one mu > 0."""

    mu: float
    theta: float
    xi: float
    lambda_plus: complex


def dispersion_function(z: complex, moments: MomentSet, cfg: QuadratureConfig) -> complex:
    """lambda(z) for z off the real axis.

    Folding the even kernel gives
    ``lambda(z) = 1 + 2 z^2 int_0^inf K(tau) / (tau^2 - z^2) dtau``.
    Satisfies the Schwarz symmetry lambda(conj z) = conj lambda(z) and the
    large-z tail -lambda2/z^2 - lambda4/z^4 - ...
    """
    z = complex(z)
    if z.imag == 0.0:
        raise ValueError("z must lie off the real axis; use boundary_phase on the axis")
    z2 = z * z
    result = integrate(lambda t: moments.kernel(t) / (t * t - z2), 0.0, moments.truncation_radius, cfg)
    return 1.0 + 2.0 * z2 * result.value


def boundary_phase(mu: float, moments: MomentSet, cfg: QuadratureConfig) -> PhaseSample:
    """Boundary value lambda_plus and phase at mu > 0.

    The real part is the principal-value integral with the single pole at
    tau = mu after folding; the imaginary part is pi mu K(mu) exactly.
    """
    mu = float(mu)
    if not mu > 0.0:
        raise ValueError(f"boundary phase requires mu > 0, got {mu}")
    radius = moments.truncation_radius
    upper = max(radius, mu + 1.0) + 1.0
    pv = integrate_principal_value(
        lambda t: moments.kernel(t) / (t + mu), mu, 0.0, upper, cfg
    )
    re = 1.0 + 2.0 * mu * mu * pv.value
    im = math.pi * mu * float(moments.kernel(mu))
    if im < 0.0:
        # K > 0 for both statistics; a negative value means the phase branch
        # convention broke down and nothing downstream can be trusted.
        raise RuntimeError(f"Im lambda_plus < 0 at mu={mu}: branch assumption violated")
    theta = math.atan2(im, re)
    return PhaseSample(mu, theta, theta - math.pi, complex(re, im))


def asymptotic_coefficients(moments: MomentSet) -> tuple[float, float]:
    """(lambda2, lambda4) of the large-z expansion of the dispersion function."""
    return moments.lambda2, moments.lambda4
