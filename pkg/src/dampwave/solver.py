"""Finite-difference time integration of the damped semilinear wave equation.

Two geometries share one scheme: radially symmetric grids in n = 1, 2, 3
(radial coordinate r in [0, r_max]) and a full-line 1D mode on
[-r_max, r_max].  Time stepping is leapfrog with the damping term taken
implicitly, which costs only a pointwise scalar solve and keeps the step at
the wave CFL limit regardless of the damping size:

    (u+ - 2u + u-)/dt^2 - lap_h(u) + a(r) b(t) (u+ - u-)/(2 dt) = f(u)

so  u+ = [2u - (1-c) u- + dt^2 (lap_h(u) + f(u))] / (1+c),  c = a b dt / 2.

lap_h is the second-order central stencil u_rr + (n-1)/r u_r; the coordinate
singularity uses the symmetry limit lap(u)(0) = n u_rr(0) with a ghost value
u(-dx) = u(dx), which keeps the discrete u_r(0) = 0 exactly.  The outer
boundary is homogeneous Dirichlet; domains must be sized so the light cone
from the data support never reaches it (checked at state construction and
monitored by the boundary-energy diagnostic during runs).

Stability note: the CFL factor bounds dt = cfl * dx against the 1D wave
limit.  The r = 0 limit stencil strengthens the restriction to roughly
dt <= dx * sqrt(2/n) in radial mode, so use cfl <= 0.7 for n = 2 and
cfl <= 0.5 for n = 3.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .coefficients import (
    InvalidConfig,
    ModelConfig,
    nonlinearity_value,
    spatial_damping,
    temporal_damping,
)

RADIAL = "radial"
FULL_LINE = "full-line"

# |u0| below exp(-36) * amplitude is treated as zero when sizing the domain
GAUSSIAN_SUPPORT_SIGMAS = 8.5


class BlowUpSignal(Exception):
    """Raised by step() when the solution leaves the finite regime."""

    def __init__(self, time: float):
        super().__init__(f"solution blew up at t = {time}")
        self.time = time


@dataclass(frozen=True)
class GridSpec:
    """Spatial grid, CFL factor, horizon and sampling cadence.

    dx = r_max / nr and dt = cfl * dx.  In full-line mode the grid covers
    [-r_max, r_max] with 2*nr cells at the same dx.
    """

    r_max: float
    nr: int
    cfl: float = 0.9
    t_end: float = 10.0
    record_every: float = 1.0
    mode: str = RADIAL

    def __post_init__(self):
        if self.r_max <= 0:
            raise InvalidConfig(f"r_max must be > 0, got {self.r_max}")
        if not (isinstance(self.nr, int) and self.nr >= 8):
            raise InvalidConfig(f"nr must be an integer >= 8, got {self.nr}")
        if not (0 < self.cfl <= 1.0):
            raise InvalidConfig(f"cfl must be in (0, 1], got {self.cfl}")
        if self.t_end <= 0:
            raise InvalidConfig(f"t_end must be > 0, got {self.t_end}")
        if self.record_every <= 0:
            raise InvalidConfig(f"record_every must be > 0, got {self.record_every}")
        if self.mode not in (RADIAL, FULL_LINE):
            raise InvalidConfig(f"mode must be 'radial' or 'full-line', got {self.mode!r}")

    @property
    def dx(self) -> float:
        return self.r_max / self.nr

    @property
    def dt(self) -> float:
        return self.cfl * self.dx


@dataclass(frozen=True)
class InitialData:
    """Initial displacement/velocity profiles.

    families:
      gaussian      u0(r) = amplitude * exp(-(r-center)^2 / (2 width^2))
      compact-bump  u0(r) = amplitude * exp(-width^2 / (width^2 - (r-center)^2))
                    on |r-center| < width, 0 outside
      custom-table  u0 given directly as grid samples (table_u0/table_u1)

    u1 uses the same unit-amplitude profile scaled by velocity_amplitude.
    """

    family: str
    amplitude: float
    width: float = 1.0
    center: float = 0.0
    velocity_amplitude: float = 0.0
    table_u0: np.ndarray | None = field(default=None, repr=False)
    table_u1: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.family not in ("gaussian", "compact-bump", "custom-table"):
            raise InvalidConfig(f"unknown data family {self.family!r}")
        if self.family != "custom-table" and self.width <= 0:
            raise InvalidConfig(f"width must be > 0, got {self.width}")
        if self.family == "custom-table" and self.table_u0 is None:
            raise InvalidConfig("custom-table data requires table_u0")

    def profile(self, x: np.ndarray) -> np.ndarray:
        """Unit-amplitude shape evaluated at the grid abscissae."""
        if self.family == "gaussian":
            return np.exp(-((x - self.center) ** 2) / (2.0 * self.width**2))
        if self.family == "compact-bump":
            d2 = (x - self.center) ** 2
            w2 = self.width**2
            out = np.zeros_like(x)
            inside = d2 < w2
            out[inside] = np.exp(-w2 / (w2 - d2[inside]))
            return out
        raise InvalidConfig("custom-table data has no analytic profile")

    def sample(self, x: np.ndarray):
        """(u0, u1) on the grid."""
        if self.family == "custom-table":
            u0 = np.asarray(self.table_u0, dtype=float)
            if u0.shape != x.shape:
                raise InvalidConfig(
                    f"table_u0 has {u0.size} samples, grid has {x.size} nodes"
                )
            if self.table_u1 is not None:
                u1 = np.asarray(self.table_u1, dtype=float)
                if u1.shape != x.shape:
                    raise InvalidConfig("table_u1 length does not match the grid")
            else:
                u1 = np.zeros_like(u0)
            return u0.copy(), u1
        shape = self.profile(x)
        return self.amplitude * shape, self.velocity_amplitude * shape

    def support_radius(self, x: np.ndarray | None = None) -> float:
        """Farthest |abscissa| carrying data (effective for gaussians)."""
        if self.family == "gaussian":
            return abs(self.center) + GAUSSIAN_SUPPORT_SIGMAS * self.width
        if self.family == "compact-bump":
            return abs(self.center) + self.width
        u0 = np.asarray(self.table_u0, dtype=float)
        nz = np.nonzero(u0)[0]
        if nz.size == 0 or x is None:
            return 0.0
        return float(np.max(np.abs(x[nz])))


@dataclass
class WaveState:
    """Solution samples at two consecutive time levels.

    u_curr holds u(t), u_prev holds u(t - dt).  r carries the abscissae
    (radii, or signed positions in full-line mode); damping caches a(r) and
    blowup_limit the scale-aware divergence threshold.
    """

    mode: str
    n: int
    t: float
    dt: float
    dx: float
    r: np.ndarray
    u_prev: np.ndarray
    u_curr: np.ndarray
    damping: np.ndarray
    blowup_limit: float

    def __post_init__(self):
        if self.u_prev.shape != self.r.shape or self.u_curr.shape != self.r.shape:
            raise InvalidConfig("state arrays must match the grid length")


def grid_abscissae(grid: GridSpec) -> np.ndarray:
    if grid.mode == RADIAL:
        return np.linspace(0.0, grid.r_max, grid.nr + 1)
    return np.linspace(-grid.r_max, grid.r_max, 2 * grid.nr + 1)


def laplacian(u: np.ndarray, dx: float, r: np.ndarray, n: int, mode: str) -> np.ndarray:
    """Second-order discrete Laplacian; boundary entries are left at 0
    (Dirichlet nodes are pinned and never updated from them)."""
    lap = np.zeros_like(u)
    inv_dx2 = 1.0 / (dx * dx)
    lap[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) * inv_dx2
    if mode == RADIAL:
        if n > 1:
            lap[1:-1] += (n - 1.0) / r[1:-1] * (u[2:] - u[:-2]) * (0.5 / dx)
        lap[0] = 2.0 * n * (u[1] - u[0]) * inv_dx2
    return lap


def init_state(cfg: ModelConfig, grid: GridSpec, data: InitialData) -> WaveState:
    """Sample the data and build the backward Taylor start.

    u_prev = u0 - dt u1 + (dt^2/2)(lap(u0) - a b(0) u1 + f(u0)) makes the
    first leapfrog step O(dt^2)-consistent.
    """
    if grid.mode == FULL_LINE and cfg.n != 1:
        raise InvalidConfig("full-line mode requires n = 1")
    if cfg.n > 3:
        raise InvalidConfig(f"the solver supports n in {{1, 2, 3}}, got n = {cfg.n}")
    x = grid_abscissae(grid)
    dx, dt = grid.dx, grid.dt
    support = data.support_radius(x)
    needed = support + grid.t_end + 5.0 * dx
    if needed > grid.r_max:
        raise InvalidConfig(
            "domain too small: data support radius "
            f"{support:g} + t_end {grid.t_end:g} + margin {5.0 * dx:g} "
            f"exceeds r_max {grid.r_max:g}"
        )
    u0, u1 = data.sample(x)
    u0[-1] = 0.0
    u1[-1] = 0.0
    if grid.mode == FULL_LINE:
        u0[0] = 0.0
        u1[0] = 0.0
    a_of_r = np.asarray(spatial_damping(cfg, np.abs(x)), dtype=float)
    ab0 = a_of_r * float(temporal_damping(cfg, 0.0))
    lap0 = laplacian(u0, dx, x, cfg.n, grid.mode)
    f0 = nonlinearity_value(cfg, u0)
    u_prev = u0 - dt * u1 + 0.5 * dt * dt * (lap0 - ab0 * u1 + f0)
    u_prev[-1] = 0.0
    if grid.mode == FULL_LINE:
        u_prev[0] = 0.0
    return WaveState(
        mode=grid.mode,
        n=cfg.n,
        t=0.0,
        dt=dt,
        dx=dx,
        r=x,
        u_prev=u_prev,
        u_curr=u0,
        damping=a_of_r,
        blowup_limit=1e6 * (1.0 + float(np.max(np.abs(u0)))),
    )


def step(state: WaveState, cfg: ModelConfig) -> WaveState:
    """Advance one dt; raises BlowUpSignal when u+ diverges."""
    u, um = state.u_curr, state.u_prev
    c = 0.5 * state.dt * state.damping * float(temporal_damping(cfg, state.t))
    rhs = (
        2.0 * u
        - (1.0 - c) * um
        + state.dt**2 * (laplacian(u, state.dx, state.r, state.n, state.mode) + nonlinearity_value(cfg, u))
    )
    u_next = rhs / (1.0 + c)
    u_next[-1] = 0.0
    if state.mode == FULL_LINE:
        u_next[0] = 0.0
    t_next = state.t + state.dt
    peak = np.max(np.abs(u_next))
    if not np.isfinite(peak) or peak > state.blowup_limit:
        raise BlowUpSignal(t_next)
    return replace(state, t=t_next, u_prev=u, u_curr=u_next)


@dataclass
class RunResult:
    """Outcome of one time integration.

    status is 'completed' or 'blew-up' (with blowup_time set); records holds
    the sampled energy functionals; max_boundary_ratio is the worst observed
    fraction of energy within 5 dx of the outer boundary (must stay < 1e-8
    for the Dirichlet truncation to be trusted).
    """

    status: str
    blowup_time: float | None
    records: list
    max_boundary_ratio: float
    final_state: WaveState


def run(
    cfg: ModelConfig,
    grid: GridSpec,
    data: InitialData,
    rho: float | None = None,
    observers: tuple = (),
) -> RunResult:
    """Integrate from t = 0 to t_end or blow-up, sampling every record_every.

    Observers are called as observer(state, u_t) at each sampling instant
    with u_t the centered difference of the stored levels.  Blow-up is a
    reported outcome, not an exception.
    """
    from . import energetics  # late import: energetics depends on solver types

    if rho is None:
        rho = min(0.3, 0.5 * (1.0 - cfg.alpha - cfg.beta))
    state = init_state(cfg, grid, data)
    dt = state.dt
    n_steps = int(round(grid.t_end / dt))
    stride = max(1, int(round(grid.record_every / dt)))
    records = []
    status, blowup_time = "completed", None
    m = 0
    while m <= n_steps:
        try:
            nxt = step(state, cfg)
        except BlowUpSignal as sig:
            if m == n_steps:  # divergence past the horizon: run completed
                break
            status, blowup_time = "blew-up", sig.time
            break
        if m % stride == 0 or m == n_steps:
            u_t = (nxt.u_curr - state.u_prev) / (2.0 * dt)
            rec = energetics.record(state, u_t, cfg, rho)
            records.append(rec)
            for obs in observers:
                obs(state, u_t)
        if m == n_steps:
            break
        nxt.t = (m + 1) * dt  # keep sample times exact multiples of dt
        state = nxt
        m += 1
    ratios = [rec.boundary_ratio for rec in records]
    return RunResult(
        status=status,
        blowup_time=blowup_time,
        records=records,
        max_boundary_ratio=max(ratios) if ratios else 0.0,
        final_state=state,
    )
