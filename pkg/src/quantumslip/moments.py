"""Quantum-statistics kernel and its logarithmic moments.

The scattering kernel of the model equation is

    K(mu, alpha) = log(1 -+ exp(alpha - mu^2)) / (2 l_0(alpha)),

with the minus sign for Bose and the plus sign for Fermi statistics, and

    l_{2n}(alpha) = int_0^inf tau^{2n} log(1 -+ exp(alpha - tau^2)) dtau.

``alpha`` is the chemical potential over ``k_B T``; ``alpha -> -inf``
recovers the classical Gaussian kernel ``exp(-mu^2)/sqrt(pi)``.  The
moments are computed by quadrature; :func:`polylog_half_integer` provides
an independent series oracle through the closed form

    l_{2n}(alpha) = -(Gamma(n + 1/2) / 2) * Li_{n + 3/2}(sign * e^alpha)

(``sign`` +1 Bose, -1 Fermi), used by the test suite to validate the
quadrature route.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .quadrature import QuadratureConfig, integrate_semi_infinite

__all__ = [
    "GasStatistics",
    "ParameterDomainError",
    "MomentSet",
    "alpha_window",
    "validate_alpha",
    "domain_config",
    "moment_l2n",
    "polylog_half_integer",
    "compute_moments",
    "classical_moments",
]

# Supported windows: the Bose side stops short of the alpha -> 0- condensation
# singularity, both sides stop at -30 before the moments underflow.
_BOSE_WINDOW = (-30.0, -0.01)
_FERMI_WINDOW = (-30.0, 30.0)

_SQRT_PI = math.sqrt(math.pi)


class GasStatistics(enum.Enum):
    BOSE = "bose"
    FERMI = "fermi"


class ParameterDomainError(ValueError):
    """A physical parameter lies outside the supported window."""


def alpha_window(stat: GasStatistics) -> tuple[float, float]:
    return _BOSE_WINDOW if stat is GasStatistics.BOSE else _FERMI_WINDOW


def validate_alpha(alpha: float, stat: GasStatistics) -> float:
    lo, hi = alpha_window(stat)
    if not (lo <= alpha <= hi):
        raise ParameterDomainError(
            f"alpha = {alpha} outside supported {stat.value} window [{lo}, {hi}]"
        )
    return float(alpha)


def domain_config(alpha: float, cfg: QuadratureConfig) -> QuadratureConfig:
    """Copy of ``cfg`` with the truncation radius set for this ``alpha``.

    All integrands carry a factor bounded by ``exp(alpha - tau^2)`` (Bose)
    or its Fermi analogue, so ``sqrt(42 + max(alpha, 0))`` keeps the
    discarded tail below 1e-18.
    """
    return replace(cfg, truncation_radius=math.sqrt(42.0 + max(alpha, 0.0)))


def _log_occupancy(tau, alpha: float, stat: GasStatistics):
    """log(1 - e^{alpha - tau^2}) for Bose, log(1 + e^{alpha - tau^2}) for Fermi."""
    expo = np.exp(alpha - np.square(tau))
    if stat is GasStatistics.BOSE:
        return np.log1p(-expo)
    return np.log1p(expo)


def moment_l2n(n: int, alpha: float, stat: GasStatistics, cfg: QuadratureConfig) -> float:
    """l_{2n}(alpha) by semi-infinite quadrature, n in {0, 1, 2}."""
    if n not in (0, 1, 2):
        raise ValueError(f"moment order n must be 0, 1 or 2, got {n}")
    validate_alpha(alpha, stat)
    cfg = domain_config(alpha, cfg)
    if n == 0:
        f = lambda t: _log_occupancy(t, alpha, stat)
    else:
        f = lambda t: t ** (2 * n) * _log_occupancy(t, alpha, stat)
    return integrate_semi_infinite(f, cfg).value


def polylog_half_integer(order: float, fugacity: float) -> float:
    """Li_order(fugacity) by direct series summation.

    Independent oracle for the moment integrals: restricted to the orders
    actually used (3/2, 5/2, 7/2) and to ``|fugacity| <= e^-0.01`` so the
    series stays geometric-fast.  Terms are added until the next one drops
    below 1e-16.
    """
    if order not in (1.5, 2.5, 3.5):
        raise ParameterDomainError(f"unsupported polylogarithm order {order}")
    if abs(fugacity) > math.exp(-0.01):
        raise ParameterDomainError(
            f"|fugacity| = {abs(fugacity)} exceeds e^-0.01; series too slow"
        )
    total = 0.0
    power = 1.0
    for k in range(1, 10_000):
        power *= fugacity
        term = power / k**order
        total += term
        if abs(term) < 1e-16:
            break
    return total


@dataclass(frozen=True)
class MomentSet:
    """Moments of one (alpha, statistics) pair, passed down explicitly.

    ``statistics is None`` selects the classical limiting kernel
    ``exp(-mu^2)/sqrt(pi)`` with the exact Gaussian moment ratios; this is
    the oracle pipeline for the alpha -> -inf checks.
    """

    alpha: float
    statistics: GasStatistics | None
    l0: float
    l2: float
    l4: float
    lambda2: float
    lambda4: float

    def kernel(self, mu):
        """Kernel value K(mu); even in mu, normalized to unit integral."""
        if self.statistics is None:
            return np.exp(-np.square(mu)) / _SQRT_PI
        return _log_occupancy(mu, self.alpha, self.statistics) / (2.0 * self.l0)

    @property
    def truncation_radius(self) -> float:
        return math.sqrt(42.0 + max(self.alpha, 0.0)) if self.statistics is not None else math.sqrt(42.0)


def compute_moments(alpha: float, stat: GasStatistics, cfg: QuadratureConfig) -> MomentSet:
    """Build the MomentSet for one (alpha, statistics) pair."""
    validate_alpha(alpha, stat)
    l0 = moment_l2n(0, alpha, stat, cfg)
    l2 = moment_l2n(1, alpha, stat, cfg)
    l4 = moment_l2n(2, alpha, stat, cfg)
    moments = MomentSet(float(alpha), stat, l0, l2, l4, l2 / l0, l4 / l0)
    _check_signs(moments)
    return moments


def classical_moments() -> MomentSet:
    # alpha -> -inf limits of l_2n / e^alpha; only the ratios matter downstream.
    return MomentSet(-math.inf, None, -_SQRT_PI / 2.0, -_SQRT_PI / 4.0, -3.0 * _SQRT_PI / 8.0, 0.5, 0.75)


def _check_signs(m: MomentSet) -> None:
    bose = m.statistics is GasStatistics.BOSE
    ok = (m.l0 < 0 and m.l2 < 0) if bose else (m.l0 > 0 and m.l2 > 0)
    if not ok or not m.lambda2 > 0:
        raise ParameterDomainError(
            f"moment signs inconsistent for alpha={m.alpha}, {m.statistics}: "
            f"l0={m.l0}, l2={m.l2}"
        )
