"""Riemann-problem factorization: the X-function and its cached phase data.

The boundary values of the dispersion function define a scalar Riemann
problem on (0, inf), X+(mu)/X-(mu) = lambda+(mu)/lambda-(mu), solved by

    X(z) = (1/z) exp V(z),
    V(z) = (1/pi) int_0^inf xi(tau) / (tau - z) dtau.

Evaluating xi means solving a principal-value integral per point, so it is
computed once on an adaptive grid (:class:`XiTable`) and interpolated by a
monotone piecewise cubic inside every nested integral; this turns the
nested quadratures into linear work per outer node and is the central
performance decision of this package.

On the cut the principal-value convention is used:

    X(eta) = exp(V_cut(eta)) / eta,
    V_cut(eta) = (1/pi) PV int_0^inf xi(tau) / (tau - eta) dtau,

the geometric mean of X+ and X- up to phase (the boundary values are
V_cut +- i xi).  This is the unique choice that keeps the continuum
coefficient of the eigenfunction expansion real.

:class:`ContinuumDensity` caches

    D(eta) = sin(xi(eta)) * exp(-V_cut(eta)) = sin(xi(eta)) / (eta X(eta)),

the weight every half-space integral downstream is built from.  Note that
V_cut(eta) diverges to -inf like (xi(eta)/pi) log(1/eta) as eta -> 0+
(xi(0) = -pi), while X(eta) and D(eta) stay finite there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .dispersion import boundary_phase, dispersion_function
from .moments import MomentSet
from .quadrature import QuadratureConfig, integrate, integrate_principal_value

__all__ = [
    "XiTable",
    "ContinuumDensity",
    "build_xi_table",
    "build_continuum_density",
    "cauchy_exponent",
    "cauchy_exponent_cut",
    "x_function",
    "x_cut",
    "x_at_origin",
    "factorization_residual",
    "inverse_representation_residual",
]

_GRID_TOL = 1e-8  # stop refining once midpoint interpolation error is below this
_MAX_ROUNDS = 14


def _refine_table(nodes, values, evaluate, tol):
    """Insert midpoints until the interpolation error estimate is below tol.

    ``evaluate`` maps an array of abscissae to exact values.  Splitting an
    interval perturbs the monotone-cubic slopes of its two neighbours only,
    so those are re-checked; errors of all other verified intervals remain
    valid.  Returns (nodes, values, bound) with bound the largest accepted
    midpoint error.
    """
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(values, dtype=float)
    interval_err = np.full(len(nodes) - 1, np.nan)

    for _ in range(_MAX_ROUNDS):
        pending = np.flatnonzero(np.isnan(interval_err))
        if pending.size == 0:
            break
        interp = PchipInterpolator(nodes, values, extrapolate=True)
        mids = 0.5 * (nodes[pending] + nodes[pending + 1])
        exact = evaluate(mids)
        errs = np.abs(interp(mids) - exact)
        ok = errs <= tol
        interval_err[pending[ok]] = errs[ok]
        bad = pending[~ok]
        if bad.size == 0:
            break
        # splice in the midpoints of failing intervals, invalidate neighbours
        neighbours = np.unique(np.concatenate([bad - 1, bad + 1]))
        neighbours = neighbours[(neighbours >= 0) & (neighbours < interval_err.size)]
        interval_err[neighbours] = np.nan
        new_err = []
        new_nodes = [nodes[0]]
        new_values = [values[0]]
        bad_set = set(bad.tolist())
        mid_of = {i: (m, e) for i, m, e in zip(bad.tolist(), mids[~ok], exact[~ok])}
        for i in range(len(nodes) - 1):
            if i in bad_set:
                m, v = mid_of[i]
                new_nodes.extend([m, nodes[i + 1]])
                new_values.extend([v, values[i + 1]])
                new_err.extend([np.nan, np.nan])
            else:
                new_nodes.append(nodes[i + 1])
                new_values.append(values[i + 1])
                new_err.append(interval_err[i])
        nodes = np.array(new_nodes)
        values = np.array(new_values)
        interval_err = np.array(new_err)

    bound = float(np.nanmax(interval_err)) if np.any(np.isfinite(interval_err)) else 0.0
    return nodes, values, max(bound, 1e-15)


@dataclass
class XiTable:
    """Adaptive grid of the phase xi(tau) for one (alpha, statistics) pair.

    The grid is anchored analytically at (0, -pi) and reaches the
    truncation radius, where |xi| has decayed below 1e-9; beyond the last
    node xi is taken as exactly zero.
    """

    moments: MomentSet
    taus: np.ndarray
    xis: np.ndarray
    error_bound: float
    _interp: PchipInterpolator = field(repr=False, default=None)

    def __post_init__(self):
        if self._interp is None:
            self._interp = PchipInterpolator(self.taus, self.xis, extrapolate=True)

    @property
    def alpha(self) -> float:
        return self.moments.alpha

    @property
    def statistics(self):
        return self.moments.statistics

    @property
    def cut_end(self) -> float:
        return float(self.taus[-1])

    def xi(self, tau):
        tau = np.asarray(tau, dtype=float)
        out = np.where(tau >= self.taus[-1], 0.0, self._interp(np.clip(tau, 0.0, self.taus[-1])))
        return out if out.ndim else float(out)

    def write_csv(self, stream) -> None:
        """Dump the raw nodes as ``tau,xi`` rows for inspection."""
        stream.write("tau,xi\n")
        for t, x in zip(self.taus, self.xis):
            stream.write(f"{t:.12g},{x:.12g}\n")


def build_xi_table(moments: MomentSet, cfg: QuadratureConfig) -> XiTable:
    """Tabulate xi(tau) adaptively on (0, truncation_radius].

    Initial nodes are log-spaced near zero (where theta rises linearly from
    0) and uniform with step 0.05 across the knee; refinement then splits
    any interval whose monotone-cubic midpoint error exceeds 1e-8.
    """
    radius = moments.truncation_radius
    coarse = np.concatenate(
        [
            np.geomspace(1e-3, 0.2, 25),
            np.linspace(0.2, radius, int(round((radius - 0.2) / 0.05)) + 1)[1:],
        ]
    )

    def exact(ts: np.ndarray) -> np.ndarray:
        return np.array([boundary_phase(t, moments, cfg).xi for t in ts])

    values = exact(coarse)
    # analytic anchor: lambda_plus -> 1 + i0+ as mu -> 0+, hence xi(0) = -pi
    nodes = np.concatenate([[0.0], coarse])
    values = np.concatenate([[-math.pi], values])
    nodes, values, bound = _refine_table(nodes, values, exact, _GRID_TOL)
    values = np.clip(values, -math.pi, 0.0)
    return XiTable(moments, nodes, values, bound)


def cauchy_exponent(z, table: XiTable, cfg: QuadratureConfig):
    """V(z) = (1/pi) int xi(tau)/(tau - z) dtau for z off the cut [0, inf).

    Returns a float for real negative z, complex otherwise; decays to 0 as
    |z| -> inf.
    """
    zc = complex(z)
    if zc.imag == 0.0 and zc.real >= 0.0:
        raise ValueError(f"z = {z} lies on the cut [0, inf); use cauchy_exponent_cut")
    if zc.imag == 0.0:
        x = zc.real
        result = integrate(lambda t: table.xi(t) / (t - x), 0.0, table.cut_end, cfg)
    else:
        result = integrate(lambda t: table.xi(t) / (t - zc), 0.0, table.cut_end, cfg)
    return result.value / math.pi


def cauchy_exponent_cut(eta: float, table: XiTable, cfg: QuadratureConfig) -> float:
    """Principal-value exponent V_cut(eta) on the cut, eta > 0.

    The interval extends past the last xi node (where xi is identically
    zero) so the pole always sits strictly inside.
    """
    eta = float(eta)
    if not eta > 0.0:
        raise ValueError(f"cut exponent requires eta > 0, got {eta}")
    upper = max(table.cut_end, eta) + 2.0
    pv = integrate_principal_value(table.xi, eta, 0.0, upper, cfg)
    return pv.value / math.pi


def x_function(z, table: XiTable, cfg: QuadratureConfig) -> complex:
    """X(z) = exp(V(z)) / z off the cut; behaves like 1/z at infinity."""
    zc = complex(z)
    if zc == 0:
        raise ValueError("X is evaluated at z = 0 only through x_at_origin")
    v = cauchy_exponent(z, table, cfg)
    return complex(np.exp(v)) / zc


def x_cut(eta: float, table: XiTable, cfg: QuadratureConfig) -> float:
    """Principal-value boundary value of X on the cut; strictly positive."""
    return math.exp(cauchy_exponent_cut(eta, table, cfg)) / float(eta)


def x_at_origin(moments: MomentSet) -> float:
    """Closed-form X(-0) = -sqrt(l0/l2), the left limit of X at zero."""
    return -math.sqrt(moments.l0 / moments.l2)


@dataclass
class ContinuumDensity:
    """Tabulated weight D(eta) = sin(xi(eta)) exp(-V_cut(eta)).

    Finite and smooth on (0, cut_end); identically zero beyond the cut end
    where the phase has decayed.  All half-space integrals (velocity
    profile, distribution function, identity checks) reduce to integrals
    over this density.
    """

    table: XiTable
    etas: np.ndarray
    values: np.ndarray
    error_bound: float
    _interp: PchipInterpolator = field(repr=False, default=None)

    def __post_init__(self):
        if self._interp is None:
            self._interp = PchipInterpolator(self.etas, self.values, extrapolate=True)

    @property
    def cut_end(self) -> float:
        return float(self.etas[-1])

    def density(self, eta):
        eta = np.asarray(eta, dtype=float)
        out = np.where(
            eta >= self.etas[-1],
            0.0,
            self._interp(np.clip(eta, self.etas[0], self.etas[-1])),
        )
        return out if out.ndim else float(out)


def build_continuum_density(table: XiTable, cfg: QuadratureConfig) -> ContinuumDensity:
    """Tabulate D(eta) adaptively on [1e-8, cut_end].

    Below the first node D is effectively constant (it has a finite
    eta -> 0+ limit) and the omitted mass is below 1e-8 in absolute terms.
    """
    end = table.cut_end

    def exact(etas: np.ndarray) -> np.ndarray:
        out = np.empty_like(etas)
        for i, e in enumerate(etas):
            out[i] = math.sin(table.xi(e)) * math.exp(-cauchy_exponent_cut(e, table, cfg))
        return out

    coarse = np.concatenate(
        [
            np.geomspace(1e-8, 1e-2, 13),
            np.linspace(1e-2, end, int(round((end - 1e-2) / 0.05)) + 1)[1:-1],
            [end],
        ]
    )
    values = exact(coarse)
    values[-1] = 0.0  # sin(xi) vanishes identically at the cut end
    nodes, values, bound = _refine_table(coarse, values, exact, 1e-9)
    return ContinuumDensity(table, nodes, values, bound)


def factorization_residual(
    z, table: XiTable, moments: MomentSet, cfg: QuadratureConfig
) -> float:
    """|lambda(z) - lambda2 X(z) X(-z)| through two independent routes.

    The left side is a fresh kernel quadrature, the right side comes from
    the exponent integral over the phase table; both z and -z must lie off
    the cut, i.e. off the whole real axis.
    """
    zc = complex(z)
    if zc.imag == 0.0:
        raise ValueError("factorization residual needs z off the real axis")
    lam = dispersion_function(zc, moments, cfg)
    prod = moments.lambda2 * x_function(zc, table, cfg) * x_function(-zc, table, cfg)
    return abs(lam - prod)


def inverse_representation_residual(
    mu: float,
    table: XiTable,
    density: ContinuumDensity,
    slip_constant: float,
    cfg: QuadratureConfig,
) -> float:
    """Residual of the integral representation of 1/X at real mu < 0.

    Checks 1/X(mu) = mu - V1 - (1/pi) int_0^inf eta D(eta) / (eta - mu) deta
    with the left side from the exponent integral and the right side from
    the tabulated continuum density.
    """
    mu = float(mu)
    if not mu < 0.0:
        raise ValueError(f"representation residual is defined for mu < 0, got {mu}")
    lhs = mu * math.exp(-cauchy_exponent(mu, table, cfg))
    tail = integrate(
        lambda e: e * density.density(e) / (e - mu), 0.0, density.cut_end, cfg
    )
    rhs = mu - slip_constant - tail.value / math.pi
    return abs(lhs - rhs)
