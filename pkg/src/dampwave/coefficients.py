"""Closed-form coefficients, weight function, and derived exponents.

The model is the semilinear damped wave equation

    u_tt - lap(u) + a(x) b(t) u_t = f(u),
    a(x) = a0 <x>^(-alpha),   b(t) = (1+t)^(-beta),   <x> = (1+|x|^2)^(1/2),

with alpha, beta >= 0 and alpha + beta < 1, so the damping is effective and
the large-time behavior is heat-like.  All energy functionals are weighted by
exp(2 psi) with the parabolic-scale weight

    psi(t, x) = A <x>^(2-alpha) / (1+t)^(1+beta),
    A = (1+beta) a0 / ((2-alpha)^2 (2+delta)),   delta > 0 small.

This module evaluates a, b, psi and its derivatives in closed form and
computes every derived constant of the theory: the critical exponent
p_c = 1 + 2/(n-alpha), the master decay exponent B, the small correction
eps(delta), the delta_i chain, and the interpolation/nonlinear-term exponents
(sigma, gamma1, gamma2) whose negativity marks the small-data global regime.

Everything is a pure function of plain numbers (or numpy arrays for the
pointwise evaluations); admissibility validation lives here and nowhere else.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

NONLINEARITY_FORMS = ("signed", "plus-abs", "minus-abs", "none")


class InvalidConfig(ValueError):
    """A model or grid parameter violates an admissibility constraint."""


@dataclass(frozen=True)
class ModelConfig:
    """Physical parameters of one damped-wave problem.

    Parameters
    ----------
    n : int
        Space dimension (1, 2 or 3 for the solver; any n >= 1 for constants).
    a0 : float
        Damping amplitude, > 0.  a0 = 0 is allowed only with
        ``validation_mode=True`` (free-wave oracle runs).
    alpha, beta : float
        Spatial/temporal damping decay exponents, >= 0 with alpha + beta < 1.
    p : float
        Nonlinearity power, > 1; for n >= 3 also p <= n/(n-2).
    sign : str
        Nonlinearity form: 'signed' (|u|^(p-1) u), 'plus-abs' (+|u|^p),
        'minus-abs' (-|u|^p) or 'none' (linear runs, f = 0).
    delta : float
        Weight parameter, 0 < delta < 1 (delta2 > 0 requires delta < 1).
    validation_mode : bool
        Permits a0 = 0 for oracle runs; physics constants that trade against
        the damping (parameter feasibility) refuse such configs.
    """

    n: int
    a0: float
    alpha: float
    beta: float
    p: float
    sign: str = "signed"
    delta: float = 0.1
    validation_mode: bool = False

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 1):
            raise InvalidConfig(f"n must be a positive integer, got {self.n}")
        if self.a0 < 0:
            raise InvalidConfig(f"a0 must be >= 0, got {self.a0}")
        if self.a0 == 0 and not self.validation_mode:
            raise InvalidConfig("a0 = 0 requires validation_mode=True")
        if self.alpha < 0 or self.beta < 0:
            raise InvalidConfig(
                f"alpha and beta must be >= 0, got alpha={self.alpha}, beta={self.beta}"
            )
        if self.alpha + self.beta >= 1:
            raise InvalidConfig(
                f"alpha + beta must be < 1, got {self.alpha + self.beta}"
            )
        if not self.p > 1:
            raise InvalidConfig(f"p must be > 1, got {self.p}")
        if self.n >= 3 and self.p > self.n / (self.n - 2):
            raise InvalidConfig(
                f"p must be <= n/(n-2) = {self.n / (self.n - 2)} for n={self.n}, got {self.p}"
            )
        if not (0 < self.delta < 1):
            raise InvalidConfig(f"delta must be in (0, 1), got {self.delta}")
        if self.sign not in NONLINEARITY_FORMS:
            raise InvalidConfig(
                f"sign must be one of {NONLINEARITY_FORMS}, got {self.sign!r}"
            )


@dataclass(frozen=True)
class WeightConstants:
    """Derived constants of the weighted-energy machinery.

    A is the weight amplitude, eps the small decay-rate correction,
    B the master decay exponent, p_c the critical exponent, delta1..delta4
    the chain of small constants, and (sigma, gamma1, gamma2) the
    interpolation and nonlinear-term exponents for the config's power p.
    """

    A: float
    eps: float
    B: float
    p_c: float
    delta1: float
    delta2: float
    delta3: float
    delta4: float
    sigma: float
    gamma1: float
    gamma2: float


# -- pointwise coefficient and weight evaluations ---------------------------
# All accept scalars or numpy arrays for t and r (r = |x| >= 0).

def damping_coefficient(cfg: ModelConfig, t, r):
    """a(x) b(t) = a0 (1+r^2)^(-alpha/2) (1+t)^(-beta)."""
    return spatial_damping(cfg, r) * temporal_damping(cfg, t)


def spatial_damping(cfg: ModelConfig, r):
    """a(x) = a0 <x>^(-alpha)."""
    return cfg.a0 * np.power(1.0 + np.square(r), -0.5 * cfg.alpha)


def temporal_damping(cfg: ModelConfig, t):
    """b(t) = (1+t)^(-beta)."""
    return np.power(1.0 + np.asarray(t, dtype=float), -cfg.beta)


def weight_amplitude(cfg: ModelConfig) -> float:
    """A = (1+beta) a0 / ((2-alpha)^2 (2+delta))."""
    return (1.0 + cfg.beta) * cfg.a0 / ((2.0 - cfg.alpha) ** 2 * (2.0 + cfg.delta))


def weight_exponent(cfg: ModelConfig, t, r):
    """psi(t, r) = A <x>^(2-alpha) / (1+t)^(1+beta), with <x> = (1+r^2)^(1/2)."""
    bracket = np.power(1.0 + np.square(r), 0.5 * (2.0 - cfg.alpha))
    return weight_amplitude(cfg) * bracket / np.power(1.0 + np.asarray(t, dtype=float), 1.0 + cfg.beta)


def weight_derivatives(cfg: ModelConfig, t, r):
    """Time derivative, radial derivative, and Laplacian of psi.

    Returns (psi_t, psi_r, psi_lap) where psi_t = -(1+beta) psi / (1+t),
    psi_r is the radial component of grad(psi) = A (2-alpha) <x>^(-alpha) x
    / (1+t)^(1+beta), and psi_lap = A (2-alpha) [(n-alpha) <x>^(-alpha)
    + alpha <x>^(-2-alpha)] / (1+t)^(1+beta).
    """
    A = weight_amplitude(cfg)
    t = np.asarray(t, dtype=float)
    xsq = 1.0 + np.square(r)
    tpow = np.power(1.0 + t, 1.0 + cfg.beta)
    psi = A * np.power(xsq, 0.5 * (2.0 - cfg.alpha)) / tpow
    psi_t = -(1.0 + cfg.beta) * psi / (1.0 + t)
    psi_r = A * (2.0 - cfg.alpha) * np.power(xsq, -0.5 * cfg.alpha) * r / tpow
    psi_lap = (
        A
        * (2.0 - cfg.alpha)
        * (
            (cfg.n - cfg.alpha) * np.power(xsq, -0.5 * cfg.alpha)
            + cfg.alpha * np.power(xsq, -0.5 * (2.0 + cfg.alpha))
        )
        / tpow
    )
    return psi_t, psi_r, psi_lap


# -- derived exponents -------------------------------------------------------

def critical_exponent(n: int, alpha: float) -> float:
    """p_c = 1 + 2/(n - alpha), the expected global/blow-up threshold."""
    return 1.0 + 2.0 / (n - alpha)


def master_decay_exponent(n: int, alpha: float, beta: float) -> float:
    """B = (1+beta)(n-alpha)/(2-alpha) + beta."""
    return (1.0 + beta) * (n - alpha) / (2.0 - alpha) + beta


def eps_correction(n: int, alpha: float, beta: float, delta: float) -> float:
    """eps(delta) = 3 (1+beta)(n-alpha) delta / (2 (2-alpha)(2+delta))."""
    return 3.0 * (1.0 + beta) * (n - alpha) * delta / (2.0 * (2.0 - alpha) * (2.0 + delta))


def sigma_exponent(n: int, p: float) -> float:
    """Interpolation exponent sigma = n (p-1) / (2 (p+1))."""
    if not p > 1:
        raise InvalidConfig(f"p must be > 1, got {p}")
    if n >= 3 and p > n / (n - 2):
        raise InvalidConfig(f"p must be <= n/(n-2) for n={n}, got {p}")
    return n * (p - 1.0) / (2.0 * (p + 1.0))


def gamma_exponents_at(n: int, alpha: float, beta: float, p: float, eps: float):
    """Nonlinear-term time exponents (gamma1, gamma2) at a given eps.

    Both must be negative for the a-priori bound to close; they coincide
    identically, and at eps = 0 they vanish exactly at p = p_c.
    """
    sigma = sigma_exponent(n, p)
    B = master_decay_exponent(n, alpha, beta)
    drift = beta + (1.0 + beta) * alpha / (2.0 - alpha)
    q = 0.5 * (p + 1.0)
    gamma1 = B + 1.0 - eps + drift * (1.0 - sigma) * q - sigma * q - (B - eps) * q
    gamma2 = (
        B + 1.0 - eps
        + drift * (1.0 - sigma) * q
        - (B - eps) * (1.0 - sigma) * q
        - (B + 1.0 - eps) * sigma * q
    )
    return gamma1, gamma2


def nonlinear_exponents(cfg: ModelConfig, p: float):
    """(sigma, gamma1, gamma2) for power p under cfg's (n, alpha, beta, delta)."""
    eps = eps_correction(cfg.n, cfg.alpha, cfg.beta, cfg.delta)
    gamma1, gamma2 = gamma_exponents_at(cfg.n, cfg.alpha, cfg.beta, p, eps)
    return sigma_exponent(cfg.n, p), gamma1, gamma2


@lru_cache(maxsize=None)
def derived_constants(cfg: ModelConfig) -> WeightConstants:
    """All derived constants for cfg.

    delta1 is computed from its own definition (the gap between the two
    printed forms of the Laplacian lower-bound coefficient), so eps == 3*delta1
    is a genuine cross-check rather than a definition.
    """
    n, alpha, beta, delta = cfg.n, cfg.alpha, cfg.beta, cfg.delta
    A = weight_amplitude(cfg)
    eps = eps_correction(n, alpha, beta, delta)
    B = master_decay_exponent(n, alpha, beta)
    delta1 = (1.0 + beta) * (n - alpha) / (2.0 - alpha) * (0.5 - 1.0 / (2.0 + delta))
    delta2 = delta / 6.0 - delta**2 / 6.0
    delta3 = min(1.0 - 4.0 / (4.0 + delta2), delta2)
    # Any delta4 in (0, delta1/(B-eps)) keeps the u^2 coefficient positive;
    # half the bound is the canonical choice.  For B <= eps the bound is void.
    delta4 = delta1 / (2.0 * (B - eps)) if B > eps else 1.0
    sigma, gamma1, gamma2 = nonlinear_exponents(cfg, cfg.p)
    return WeightConstants(
        A=A,
        eps=eps,
        B=B,
        p_c=critical_exponent(n, alpha),
        delta1=delta1,
        delta2=delta2,
        delta3=delta3,
        delta4=delta4,
        sigma=sigma,
        gamma1=gamma1,
        gamma2=gamma2,
    )


def decay_exponent_weighted_l2(cfg: ModelConfig) -> float:
    """Theoretical upper-bound exponent for the weighted L2 norm."""
    eps = eps_correction(cfg.n, cfg.alpha, cfg.beta, cfg.delta)
    return -(1.0 + cfg.beta) * (cfg.n - 2.0 * cfg.alpha) / (2.0 - cfg.alpha) + eps


def decay_exponent_weighted_energy(cfg: ModelConfig) -> float:
    """Theoretical upper-bound exponent for the weighted energy."""
    eps = eps_correction(cfg.n, cfg.alpha, cfg.beta, cfg.delta)
    return -(1.0 + cfg.beta) * ((cfg.n - cfg.alpha) / (2.0 - cfg.alpha) + 1.0) + eps


def delta_zero_threshold(cfg: ModelConfig):
    """Largest delta in {0.2 * 2^-k, k = 0..20} with gamma1 < 0 and gamma2 < 0.

    Operational stand-in for the unspecified smallness threshold delta0.
    Returns None when no ladder value works (p at or below critical).
    """
    for k in range(21):
        delta = 0.2 * 2.0**-k
        eps = eps_correction(cfg.n, cfg.alpha, cfg.beta, delta)
        gamma1, gamma2 = gamma_exponents_at(cfg.n, cfg.alpha, cfg.beta, cfg.p, eps)
        if gamma1 < 0 and gamma2 < 0:
            return delta
    return None


# -- nonlinearity ------------------------------------------------------------

def nonlinearity(cfg: ModelConfig, u):
    """(f(u), F(u)) with F the primitive of f normalized by F(0) = 0.

    signed:    f = |u|^(p-1) u,  F = |u|^(p+1) / (p+1)
    plus-abs:  f = +|u|^p,       F = +|u|^p u / (p+1)
    minus-abs: f = -|u|^p,       F = -|u|^p u / (p+1)
    none:      f = 0,            F = 0
    """
    u = np.asarray(u, dtype=float)
    p = cfg.p
    if cfg.sign == "none":
        return np.zeros_like(u), np.zeros_like(u)
    absu = np.abs(u)
    if cfg.sign == "signed":
        f = absu ** (p - 1.0) * u
        F = absu ** (p + 1.0) / (p + 1.0)
    else:
        s = 1.0 if cfg.sign == "plus-abs" else -1.0
        f = s * absu**p
        F = s * absu**p * u / (p + 1.0)
    return f, F


def nonlinearity_value(cfg: ModelConfig, u):
    """f(u) alone (the solver's per-step path)."""
    if cfg.sign == "none":
        return 0.0
    u = np.asarray(u, dtype=float)
    absu = np.abs(u)
    if cfg.sign == "signed":
        return absu ** (cfg.p - 1.0) * u
    s = 1.0 if cfg.sign == "plus-abs" else -1.0
    return s * absu**cfg.p


# -- pinned random admissible configs ----------------------------------------

def random_admissible_configs(count: int, seed: int, *, sign: str = "signed"):
    """Reproducible list of admissible ModelConfigs for audit sweeps.

    Draws n in {1,2,3}, alpha+beta < 0.98, a0 log-uniform in [0.05, 5],
    delta in [0.01, 0.5], and p supercritical-or-not in (1.05, cap].
    """
    rng = np.random.default_rng(seed)
    configs = []
    while len(configs) < count:
        n = int(rng.integers(1, 4))
        alpha = float(rng.uniform(0.0, 0.95))
        beta = float(rng.uniform(0.0, 0.95))
        if alpha + beta >= 0.98:
            continue
        a0 = float(10.0 ** rng.uniform(-1.3, 0.7))
        delta = float(rng.uniform(0.01, 0.5))
        p_cap = min(6.0, n / (n - 2.0)) if n >= 3 else 6.0
        p = float(rng.uniform(1.05, p_cap))
        configs.append(
            ModelConfig(n=n, a0=a0, alpha=alpha, beta=beta, p=p, sign=sign, delta=delta)
        )
    return configs
