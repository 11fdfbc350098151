"""Weighted energy functionals on discrete states and decay-rate fitting.

Quadrature is composite trapezoid on the solver grid: radial integrals carry
the surface factor omega_n r^(n-1) (omega_1 = 2, omega_2 = 2 pi,
omega_3 = 4 pi), full-line integrals are plain 1D trapezoid.  Weighted
integrands exp(2 psi) g are evaluated in log space, exp(2 psi + log g) where
g > 0, so the superpolynomially growing weight never overflows silently: any
point with g > 0 and 2 psi + log g > 700 invalidates the run (the solution
has mass where the truncated domain cannot be trusted).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coefficients import (
    InvalidConfig,
    ModelConfig,
    damping_coefficient,
    derived_constants,
    weight_exponent,
)
from .solver import FULL_LINE, RADIAL, GridSpec, InitialData, WaveState, grid_abscissae

EXP_OVERFLOW_LIMIT = 700.0
SURFACE_FACTOR = {1: 2.0, 2: 2.0 * math.pi, 3: 4.0 * math.pi}


class OverflowInvalidRun(RuntimeError):
    """Weighted integrand left the representable range: run is invalid."""


@dataclass(frozen=True)
class EnergyRecord:
    """All functionals of one sampling instant.

    m_partial1/2 are the two time-weighted pieces whose running supremum is
    the a-priori functional; region_energy integrates u_t^2+|grad u|^2+u^2
    over the exterior region <x>^(2-alpha) >= (1+t)^(1+beta+rho).
    """

    t: float
    l2: float
    weighted_l2: float
    energy: float
    weighted_energy: float
    j_abu2: float
    e_psi: float
    region_energy: float
    m_partial1: float
    m_partial2: float
    max_abs_u: float
    boundary_ratio: float


@dataclass(frozen=True)
class DecayFit:
    """Least-squares power-law fit log(value) ~ intercept + slope*log(1+t)."""

    slope: float
    intercept: float
    window: tuple
    residual: float


def gradient(u: np.ndarray, dx: float, mode: str) -> np.ndarray:
    """Centered differences; one-sided second order at the ends.

    In radial mode the origin derivative is exactly 0 by symmetry.
    """
    du = np.empty_like(u)
    du[1:-1] = (u[2:] - u[:-2]) / (2.0 * dx)
    du[-1] = (3.0 * u[-1] - 4.0 * u[-2] + u[-3]) / (2.0 * dx)
    if mode == RADIAL:
        du[0] = 0.0
    else:
        du[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * dx)
    return du


def volume_integral(values: np.ndarray, r: np.ndarray, n: int, dx: float, mode: str) -> float:
    """Trapezoid quadrature of a pointwise integrand over R^n (radial) or R."""
    if mode == FULL_LINE:
        return float(np.trapezoid(values, dx=dx))
    return SURFACE_FACTOR[n] * float(np.trapezoid(values * r ** (n - 1), dx=dx))


def _weighted_values(twopsi: np.ndarray, g: np.ndarray) -> np.ndarray:
    """exp(2 psi) * g computed as exp(2 psi + log g) where g > 0, else 0."""
    out = np.zeros_like(g)
    mask = g > 0
    if np.any(mask):
        expo = twopsi[mask] + np.log(g[mask])
        worst = float(np.max(expo))
        if worst > EXP_OVERFLOW_LIMIT:
            raise OverflowInvalidRun(
                f"weighted integrand exponent {worst:.1f} > {EXP_OVERFLOW_LIMIT:g}: "
                "solution mass escaped the trusted region"
            )
        out[mask] = np.exp(expo)
    return out


def weighted_integral(state: WaveState, cfg: ModelConfig, g: np.ndarray, weighted: bool = True) -> float:
    """integral of exp(2 psi) g dx (or plain g dx with weighted=False).

    g must be a nonnegative pointwise integrand on the state's grid.
    """
    g = np.asarray(g, dtype=float)
    if weighted:
        twopsi = 2.0 * weight_exponent(cfg, state.t, np.abs(state.r))
        vals = _weighted_values(twopsi, g)
    else:
        vals = g
    return volume_integral(vals, state.r, state.n, state.dx, state.mode)


def record(state: WaveState, u_t: np.ndarray, cfg: ModelConfig, rho: float) -> EnergyRecord:
    """Evaluate every functional of the state at its current time."""
    if not (0.0 < rho < 1.0 - cfg.alpha - cfg.beta):
        raise InvalidConfig(
            f"rho must lie in (0, 1-alpha-beta) = (0, {1.0 - cfg.alpha - cfg.beta:g}), got {rho}"
        )
    t, r, dx = state.t, state.r, state.dx
    u = state.u_curr
    du = gradient(u, dx, state.mode)
    absr = np.abs(r)

    u2 = u * u
    edens = u_t * u_t + du * du
    l2 = volume_integral(u2, r, state.n, dx, state.mode)
    energy = volume_integral(edens, r, state.n, dx, state.mode)

    twopsi = 2.0 * weight_exponent(cfg, t, absr)
    weighted_l2 = volume_integral(_weighted_values(twopsi, u2), r, state.n, dx, state.mode)
    weighted_energy = volume_integral(_weighted_values(twopsi, edens), r, state.n, dx, state.mode)
    ab = damping_coefficient(cfg, t, absr)
    j_abu2 = volume_integral(_weighted_values(twopsi, ab * u2), r, state.n, dx, state.mode)
    minus_psi_t = (1.0 + cfg.beta) * (0.5 * twopsi) / (1.0 + t)
    e_psi = volume_integral(
        _weighted_values(twopsi, minus_psi_t * edens), r, state.n, dx, state.mode
    )

    region = np.power(1.0 + r * r, 0.5 * (2.0 - cfg.alpha)) >= (1.0 + t) ** (
        1.0 + cfg.beta + rho
    )
    region_energy = volume_integral((edens + u2) * region, r, state.n, dx, state.mode)

    k = derived_constants(cfg)
    m1 = (1.0 + t) ** (k.B + 1.0 - k.eps) * weighted_energy
    m2 = (1.0 + t) ** (k.B - k.eps) * j_abu2

    band = absr >= (np.max(absr) - 5.0 * dx)
    total = volume_integral(edens + u2, r, state.n, dx, state.mode)
    near = volume_integral((edens + u2) * band, r, state.n, dx, state.mode)
    boundary_ratio = near / total if total > 0 else 0.0

    return EnergyRecord(
        t=t,
        l2=l2,
        weighted_l2=weighted_l2,
        energy=energy,
        weighted_energy=weighted_energy,
        j_abu2=j_abu2,
        e_psi=e_psi,
        region_energy=region_energy,
        m_partial1=m1,
        m_partial2=m2,
        max_abs_u=float(np.max(np.abs(u))),
        boundary_ratio=boundary_ratio,
    )


def apriori_functional(records) -> float:
    """Running supremum of m_partial1 + m_partial2 over the whole history."""
    if not records:
        raise ValueError("empty record history")
    return max(rec.m_partial1 + rec.m_partial2 for rec in records)


def apriori_series(records) -> np.ndarray:
    """Prefix suprema, one value per record (non-decreasing by construction)."""
    vals = np.array([rec.m_partial1 + rec.m_partial2 for rec in records])
    return np.maximum.accumulate(vals)


def fit_decay_rate(t, values, window) -> DecayFit:
    """Least-squares line through (log(1+t), log value) on the window."""
    t = np.asarray(t, dtype=float)
    values = np.asarray(values, dtype=float)
    lo, hi = window
    if not lo < hi:
        raise ValueError(f"bad fit window {window}")
    mask = (t >= lo) & (t <= hi)
    if int(np.count_nonzero(mask)) < 10:
        raise ValueError(f"fit window {window} holds {np.count_nonzero(mask)} samples, need >= 10")
    v = values[mask]
    if np.any(v <= 0):
        raise ValueError("fit window contains nonpositive values")
    x = np.log1p(t[mask])
    y = np.log(v)
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.max(np.abs(y - (slope * x + intercept))))
    return DecayFit(slope=float(slope), intercept=float(intercept), window=(lo, hi), residual=residual)


def region_bound_ratio(records, cfg: ModelConfig, rho: float, mu: float):
    """region_energy divided by its theoretical envelope (constant set to 1).

    The envelope is (1+t)^(-(1+beta)(n-2 alpha)/(2-alpha)+eps)
    * exp(-(2A-mu)(1+t)^rho); the post-transient supremum of the returned
    series is the empirical constant.
    """
    k = derived_constants(cfg)
    if not (0.0 < mu < 2.0 * k.A):
        raise InvalidConfig(f"mu must lie in (0, 2A) = (0, {2.0 * k.A:g}), got {mu}")
    if not (0.0 < rho < 1.0 - cfg.alpha - cfg.beta):
        raise InvalidConfig(f"rho must lie in (0, {1.0 - cfg.alpha - cfg.beta:g}), got {rho}")
    rate = -(1.0 + cfg.beta) * (cfg.n - 2.0 * cfg.alpha) / (2.0 - cfg.alpha) + k.eps
    t = np.array([rec.t for rec in records])
    region = np.array([rec.region_energy for rec in records])
    shape = (1.0 + t) ** rate * np.exp(-(2.0 * k.A - mu) * (1.0 + t) ** rho)
    return t, region / shape


def initial_norm_squared(data: InitialData, cfg: ModelConfig, grid: GridSpec) -> float:
    """Weighted norm of the data: integral of e^(2 psi(0)) (u1^2+|grad u0|^2+u0^2)."""
    x = grid_abscissae(grid)
    u0, u1 = data.sample(x)
    du0 = gradient(u0, grid.dx, grid.mode)
    g = u1 * u1 + du0 * du0 + u0 * u0
    twopsi = 2.0 * weight_exponent(cfg, 0.0, np.abs(x))
    vals = _weighted_values(twopsi, g)
    return volume_integral(vals, x, cfg.n, grid.dx, grid.mode)
