"""Problem-level results of the isothermal-slip half-space problem.

Everything here is per unit dimensionless velocity gradient unless a
gradient is passed explicitly; the problem is linear, so every output
scales with it.  Lengths come in two units: the thermal mean free path
``l_T = v_T / nu`` (the coordinate x1) and Cercignani's viscous mean free
path ``l = sqrt(pi) lambda2 l_T`` (the slip coefficients).

The central objects:

* ``V1`` (:func:`slip_constant`): dimensionless slip velocity,
  ``-(1/pi) int_0^inf xi``.
* ``K_v`` (:func:`slip_coefficient`): slip coefficient in units of l,
  ``V1 / (sqrt(pi) lambda2)``.
* ``C_v(x1)`` (:meth:`KramersSolution.profile`): half-space velocity
  profile ``V1 + x1 + (1/pi) int exp(-x1/eta) D(eta) deta``, whose wall
  value has the closed form sqrt(lambda2).
* ``h(x1, mu)`` (:meth:`KramersSolution.distribution`): the distribution
  correction, vanishing on the wall for outgoing velocities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dispersion import boundary_phase
from .factorization import (
    ContinuumDensity,
    XiTable,
    build_continuum_density,
    build_xi_table,
    cauchy_exponent_cut,
)
from .moments import (
    GasStatistics,
    MomentSet,
    classical_moments,
    compute_moments,
    domain_config,
)
from .quadrature import QuadratureConfig, integrate, integrate_principal_value

__all__ = [
    "BOLTZMANN_CONSTANT",
    "REDUCED_PLANCK_CONSTANT",
    "SlipResult",
    "ProfilePoint",
    "PhysicalParams",
    "KramersSolution",
    "solve",
    "solve_classical",
    "slip_constant",
    "wall_velocity_closed_form",
    "dimensional_report",
]

# Fixed CODATA/SI values compiled in for bit-reproducible dimensional output.
BOLTZMANN_CONSTANT = 1.380649e-23  # J/K (exact, SI 2019)
REDUCED_PLANCK_CONSTANT = 1.054571817e-34  # J s

_SQRT_PI = math.sqrt(math.pi)

# exp(-x1/eta) < 1e-18 below this ratio; the integrand is dead there.
_EXP_CUTOFF = 41.5

# Outer (profile-level) integrals run two orders looser than the inner
# dispersion-level tolerance; the inner interpolation error dominates anyway.
_OUTER_SCALE = 100.0


@dataclass(frozen=True)
class SlipResult:
    alpha: float
    statistics: GasStatistics | None
    v1: float
    kv: float
    lambda2: float
    mean_free_path_ratio: float  # l / l_T = sqrt(pi) * lambda2


@dataclass(frozen=True)
class ProfilePoint:
    x1: float
    cv: float
    kv_star: float
    knudsen_defect: float  # cv - v1 - x1, nonpositive


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensional gas parameters for the unit conversions."""

    temperature: float  # K
    particle_mass: float  # kg
    collision_frequency: float  # 1/s
    spin: float = 0.0
    mass_density: float | None = None  # kg/m^3; derived from N*m when omitted

    def __post_init__(self):
        if self.temperature <= 0 or self.particle_mass <= 0 or self.collision_frequency <= 0:
            raise ValueError("temperature, particle_mass and collision_frequency must be positive")
        if self.spin < 0:
            raise ValueError("spin must be nonnegative")
        if self.mass_density is not None and self.mass_density <= 0:
            raise ValueError("mass_density must be positive when given")

    @property
    def beta(self) -> float:
        return self.particle_mass / (2.0 * BOLTZMANN_CONSTANT * self.temperature)

    @property
    def thermal_speed(self) -> float:
        return 1.0 / math.sqrt(self.beta)

    @property
    def thermal_mfp(self) -> float:
        return self.thermal_speed / self.collision_frequency


class KramersSolution:
    """Solved half-space problem for one (alpha, statistics) pair.

    Bundles the moment set, the phase table, the continuum density and the
    slip constant; all methods are pure and the object is safe to share
    across threads.
    """

    def __init__(
        self,
        moments: MomentSet,
        table: XiTable,
        density: ContinuumDensity,
        v1: float,
        cfg: QuadratureConfig,
    ):
        self.moments = moments
        self.table = table
        self.density = density
        self.v1 = v1
        self.cfg = cfg
        self.outer_cfg = cfg.scaled(_OUTER_SCALE)

    @property
    def alpha(self) -> float:
        return self.moments.alpha

    @property
    def statistics(self) -> GasStatistics | None:
        return self.moments.statistics

    @property
    def lambda2(self) -> float:
        return self.moments.lambda2

    def slip(self) -> SlipResult:
        ratio = _SQRT_PI * self.lambda2
        return SlipResult(
            self.alpha, self.statistics, self.v1, self.v1 / ratio, self.lambda2, ratio
        )

    def wall_velocity_quadrature(self) -> float:
        """C_v(0) by quadrature of the continuum density; must reproduce
        the closed form sqrt(lambda2)."""
        return self.profile(0.0).cv

    def profile(self, x1: float) -> ProfilePoint:
        x1 = float(x1)
        if x1 < 0.0:
            raise ValueError(f"x1 must be nonnegative, got {x1}")
        end = self.density.cut_end
        lower = 0.0 if x1 == 0.0 else x1 / _EXP_CUTOFF
        if lower >= end:
            defect = 0.0
        else:
            if x1 == 0.0:
                f = self.density.density
            else:
                def f(eta):
                    return self.density.density(eta) * _exp_decay(x1, eta)
            defect = integrate(f, lower, end, self.outer_cfg).value / math.pi
        cv = self.v1 + x1 + defect
        return ProfilePoint(x1, cv, cv / (_SQRT_PI * self.lambda2), defect)

    def continuum_coefficient(self, eta: float, gv: float = 1.0) -> float:
        """Expansion coefficient a(eta) of the continuous spectrum."""
        eta = float(eta)
        if not eta > 0.0:
            raise ValueError(f"continuum coefficient requires eta > 0, got {eta}")
        return 2.0 * gv * self.density.density(eta) / (math.pi * eta)

    def distribution(self, x1: float, mu: float, gv: float = 1.0) -> float:
        """Distribution correction h(x1, mu).

        Continuum part: PV integral of exp(-x1/eta) D(eta)/(eta - mu) over
        the cut.  For mu > 0 the discrete (delta) contribution of the
        eigenfunction adds

            -2 gv exp(-x1/mu) Re(lambda+) / (|lambda+| X(mu)),

        which is the coefficient lambda/K times a(mu) with the kernel
        cancelled analytically, so it stays well-conditioned where the
        kernel underflows.  Undefined at x1 = 0, mu = 0 (the wall
        distribution is discontinuous there).
        """
        x1 = float(x1)
        mu = float(mu)
        if x1 < 0.0:
            raise ValueError(f"x1 must be nonnegative, got {x1}")
        if x1 == 0.0 and mu == 0.0:
            raise ValueError("h(0, 0) is not defined: the wall value jumps at mu = 0")
        if gv == 0.0:
            return 0.0
        end = self.density.cut_end
        lower = 0.0 if x1 == 0.0 else min(x1 / _EXP_CUTOFF, end)
        scale = 2.0 * gv / math.pi

        def numerator(eta):
            return scale * self.density.density(eta) * _exp_decay(x1, eta)

        if lower >= end:
            cont = 0.0
        elif lower + 1e-12 < mu < end - 1e-12:
            cont = integrate_principal_value(numerator, mu, lower, end, self.outer_cfg).value
        else:
            cont = integrate(
                lambda eta: numerator(eta) / (eta - mu), lower, end, self.outer_cfg
            ).value

        delta = 0.0
        if 0.0 < mu < end:
            ps = boundary_phase(mu, self.moments, self.cfg)
            v_cut = cauchy_exponent_cut(mu, self.table, self.cfg)
            x_cut_mu = math.exp(v_cut) / mu
            delta = (
                -2.0
                * gv
                * _exp_decay(x1, mu)
                * ps.lambda_plus.real
                / (abs(ps.lambda_plus) * x_cut_mu)
            )
        return 2.0 * self.v1 * gv + 2.0 * gv * (x1 - mu) + cont + delta

    def mass_velocity(self, x1: float, gv: float = 1.0) -> float:
        """Dimensionless mass velocity U(x1) = C_v(x1) * gv."""
        return self.profile(x1).cv * gv

    def mass_velocity_routes(self, x1: float, gv: float = 1.0) -> tuple[float, float]:
        """(kernel-integrated, profile) mass velocity for consistency checks.

        The first route integrates K(mu) h(x1, mu) over all mu, split at
        mu = 0 where the wall distribution is discontinuous; the second is
        the closed profile formula.  Their agreement validates the
        eigenfunction normalization end to end.
        """
        radius = self.moments.truncation_radius
        route_cfg = self.cfg.scaled(1000.0)

        def w(mu: float) -> float:
            return float(self.moments.kernel(mu)) * self.distribution(x1, mu, gv)

        left = integrate(w, -radius, 0.0, route_cfg).value
        right = integrate(w, 0.0, radius, route_cfg).value
        return 0.5 * (left + right), self.mass_velocity(x1, gv)


def _exp_decay(x1: float, eta):
    if x1 == 0.0:
        return 1.0
    return np.exp(-x1 / eta)


def slip_constant(table: XiTable, cfg: QuadratureConfig) -> float:
    """V1 = -(1/pi) int_0^inf xi(mu) dmu > 0."""
    return -integrate(table.xi, 0.0, table.cut_end, cfg).value / math.pi


def wall_velocity_closed_form(moments: MomentSet) -> float:
    """C_v(0) = -1/X(-0) = sqrt(l2/l0)."""
    return math.sqrt(moments.lambda2)


def solve(alpha: float, stat: GasStatistics, cfg: QuadratureConfig | None = None) -> KramersSolution:
    """Build the full solution workspace for one (alpha, statistics) pair."""
    cfg = domain_config(alpha, cfg or QuadratureConfig())
    moments = compute_moments(alpha, stat, cfg)
    return _assemble(moments, cfg)


def solve_classical(cfg: QuadratureConfig | None = None) -> KramersSolution:
    """Same pipeline run on the limiting Gaussian kernel (alpha -> -inf oracle)."""
    return _assemble(classical_moments(), cfg or QuadratureConfig())


def _assemble(moments: MomentSet, cfg: QuadratureConfig) -> KramersSolution:
    table = build_xi_table(moments, cfg)
    density = build_continuum_density(table, cfg)
    v1 = slip_constant(table, cfg)
    return KramersSolution(moments, table, density, v1, cfg)


def dimensional_report(
    solution: KramersSolution,
    phys: PhysicalParams,
    gv: float,
    verbose: bool = False,
) -> dict:
    """Dimensional quantities for a given gas and velocity gradient gv (1/s).

    Number density follows from l0, viscosity from the Chapman-Enskog
    route eta = rho lambda2 / (nu beta), and the mean free path is
    Cercignani's l = eta sqrt(pi beta) / rho.
    """
    moments = solution.moments
    if moments.statistics is None:
        raise ValueError("dimensional output requires Bose or Fermi statistics")
    if not math.isfinite(gv):
        raise ValueError("gv must be finite")
    beta = phys.beta
    sign = -1.0 if moments.statistics is GasStatistics.BOSE else 1.0
    number_density = (
        sign
        * 2.0
        * math.pi
        * (2.0 * phys.spin + 1.0)
        * phys.particle_mass**3
        * moments.l0
        / ((2.0 * math.pi * REDUCED_PLANCK_CONSTANT) ** 3 * beta**1.5)
    )
    rho = phys.mass_density if phys.mass_density is not None else number_density * phys.particle_mass
    viscosity = rho * moments.lambda2 / (phys.collision_frequency * beta)
    mean_free_path = viscosity * math.sqrt(math.pi * beta) / rho
    slip = solution.slip()
    wall_coefficient = wall_velocity_closed_form(moments) / (_SQRT_PI * moments.lambda2)
    report = {
        "alpha": moments.alpha,
        "statistics": moments.statistics.value,
        "temperature_K": phys.temperature,
        "particle_mass_kg": phys.particle_mass,
        "collision_frequency_hz": phys.collision_frequency,
        "spin": phys.spin,
        "gradient_hz": gv,
        "chemical_potential_J": moments.alpha * BOLTZMANN_CONSTANT * phys.temperature,
        "number_density_m3": number_density,
        "mass_density_kg_m3": rho,
        "viscosity_pa_s": viscosity,
        "mean_free_path_m": mean_free_path,
        "thermal_mfp_m": phys.thermal_mfp,
        "slip_coefficient": slip.kv,
        "slip_velocity_m_s": slip.kv * mean_free_path * gv,
        "wall_coefficient": wall_coefficient,
        "wall_velocity_m_s": wall_coefficient * mean_free_path * gv,
        "boltzmann_constant_J_K": BOLTZMANN_CONSTANT,
        "reduced_planck_J_s": REDUCED_PLANCK_CONSTANT,
    }
    if verbose:
        # alternate closed form that omits the 1/sqrt(pi) factor; printed for
        # comparison, inconsistent with the composed definitions above
        report["wall_velocity_variant_m_s"] = (
            math.sqrt(moments.l0 / moments.l2) * mean_free_path * gv
        )
        report["slip_velocity_thermal_route_m_s"] = solution.v1 * phys.thermal_mfp * gv
    return report
