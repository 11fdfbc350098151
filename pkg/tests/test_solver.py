"""Solver oracle tests: d'Alembert transport, damped-ODE constants,
equilibria, blow-up detection, dissipation and grid independence."""

import numpy as np
import pytest

from dampwave.coefficients import InvalidConfig, ModelConfig
from dampwave.energetics import fit_decay_rate
from dampwave.solver import (
    FULL_LINE,
    RADIAL,
    BlowUpSignal,
    GridSpec,
    InitialData,
    WaveState,
    grid_abscissae,
    init_state,
    laplacian,
    run,
    step,
)

LINEAR = ModelConfig(n=1, a0=1.0, alpha=0.0, beta=0.0, p=4.0, sign="none")
FREE = ModelConfig(n=1, a0=0.0, alpha=0.0, beta=0.0, p=2.0, sign="none", validation_mode=True)


def advance(state, cfg, n_steps):
    for m in range(n_steps):
        state = step(state, cfg)
        state.t = (m + 1) * state.dt
    return state


def test_zero_data_is_equilibrium():
    grid = GridSpec(r_max=20.0, nr=100, cfl=0.9, t_end=5.0)
    data = InitialData(family="gaussian", amplitude=0.0, width=1.0)
    state = init_state(LINEAR, grid, data)
    assert np.all(state.u_curr == 0.0) and np.all(state.u_prev == 0.0)
    state = advance(state, LINEAR, 10)
    assert np.all(state.u_curr == 0.0)


def test_taylor_start_with_zero_velocity():
    cfg = ModelConfig(n=1, a0=1.0, alpha=0.0, beta=0.0, p=3.0, sign="signed")
    grid = GridSpec(r_max=30.0, nr=300, cfl=0.5, t_end=5.0)
    data = InitialData(family="gaussian", amplitude=0.5, width=1.0)
    state = init_state(cfg, grid, data)
    x = state.r
    u0 = 0.5 * np.exp(-(x**2) / 2.0)
    u0[-1] = 0.0
    lap0 = laplacian(u0, state.dx, x, 1, RADIAL)
    expected = u0 + 0.5 * state.dt**2 * (lap0 + np.abs(u0) ** 2 * u0)
    expected[-1] = 0.0
    np.testing.assert_allclose(state.u_prev, expected, rtol=0, atol=1e-15)


def test_custom_table_single_node():
    grid = GridSpec(r_max=20.0, nr=100, cfl=0.9, t_end=5.0)
    x = grid_abscissae(grid)
    table = np.zeros_like(x)
    table[0] = 2.0
    data = InitialData(family="custom-table", amplitude=1.0, table_u0=table)
    state = init_state(LINEAR, grid, data)
    assert np.count_nonzero(state.u_curr) == 1
    assert state.u_curr[0] == 2.0


def test_support_check_rejects_small_domains():
    grid = GridSpec(r_max=20.0, nr=100, cfl=0.9, t_end=50.0)
    data = InitialData(family="gaussian", amplitude=1.0, width=1.0)
    with pytest.raises(InvalidConfig, match="domain too small"):
        init_state(LINEAR, grid, data)


def test_full_line_requires_n1():
    grid = GridSpec(r_max=20.0, nr=100, cfl=0.9, t_end=5.0, mode=FULL_LINE)
    data = InitialData(family="gaussian", amplitude=1.0, width=1.0)
    cfg = ModelConfig(n=2, a0=1.0, alpha=0.0, beta=0.0, p=2.0)
    with pytest.raises(InvalidConfig, match="full-line"):
        init_state(cfg, grid, data)


def test_solver_rejects_high_dimensions():
    grid = GridSpec(r_max=20.0, nr=100, cfl=0.9, t_end=5.0)
    data = InitialData(family="gaussian", amplitude=1.0, width=1.0)
    cfg = ModelConfig(n=4, a0=1.0, alpha=0.0, beta=0.0, p=1.5)
    with pytest.raises(InvalidConfig, match="n in"):
        init_state(cfg, grid, data)


def test_radial_stencil_exact_on_even_quadratic():
    # u = c0 + c2 r^2 has lap(u) = 2 n c2; the origin limit stencil hits it exactly
    grid = GridSpec(r_max=10.0, nr=50, cfl=0.9, t_end=1.0)
    r = grid_abscissae(grid)
    u = 3.0 - 0.25 * r**2
    for n in (1, 2, 3):
        lap = laplacian(u, grid.dx, r, n, RADIAL)
        np.testing.assert_allclose(lap[:-1], 2.0 * n * (-0.25), rtol=1e-11)


def dalembert_error(dx, cfl=0.5, t_end=1.0, width=0.5):
    nr = int(round(2.0 / dx))
    grid = GridSpec(r_max=2.0, nr=nr, cfl=cfl, t_end=t_end, record_every=10.0, mode=FULL_LINE)
    data = InitialData(family="compact-bump", amplitude=1.0, width=width)
    state = init_state(FREE, grid, data)
    n_steps = int(round(t_end / state.dt))
    state = advance(state, FREE, n_steps)
    exact = 0.5 * (data.profile(state.r - t_end) + data.profile(state.r + t_end))
    return float(np.max(np.abs(state.u_curr - exact)))


def test_dalembert_oracle_accuracy():
    # full acceptance does three refinement levels; here the two coarse ones
    e1 = dalembert_error(4e-3)
    e2 = dalembert_error(2e-3)
    assert e1 < 1e-3
    assert 3.5 <= e1 / e2 <= 4.5


def test_constant_state_follows_damped_ode():
    # v'' + v' = 0 with v'(0)=0 keeps v = v0; interior nodes must agree
    # until the Dirichlet boundary signal arrives
    grid = GridSpec(r_max=10.0, nr=100, cfl=0.9, t_end=1.0, mode=FULL_LINE)
    x = grid_abscissae(grid)
    u0 = np.ones_like(x)
    state = WaveState(
        mode=FULL_LINE,
        n=1,
        t=0.0,
        dt=grid.dt,
        dx=grid.dx,
        r=x,
        u_prev=u0.copy(),
        u_curr=u0.copy(),
        damping=np.ones_like(x),
        blowup_limit=1e6 * 2.0,
    )
    n_steps = int(round(1.0 / state.dt))
    state = advance(state, LINEAR, n_steps)
    # influence spreads one node per step from each end
    interior = slice(n_steps + 1, -(n_steps + 1))
    assert np.max(np.abs(state.u_curr[interior] - 1.0)) < 1e-6


def test_blowup_detected_and_reported():
    cfg = ModelConfig(n=1, a0=1.0, alpha=0.0, beta=0.0, p=2.0, sign="plus-abs")
    grid = GridSpec(r_max=110.0, nr=1100, cfl=0.9, t_end=100.0, record_every=0.5)
    data = InitialData(family="compact-bump", amplitude=5.0, width=1.0)
    res = run(cfg, grid, data)
    assert res.status == "blew-up"
    assert res.blowup_time is not None and 0.0 < res.blowup_time < 100.0
    # all retained records are finite
    assert all(np.isfinite(rec.max_abs_u) for rec in res.records)


def test_blowup_monotone_in_amplitude():
    # empirical: doubling a positive profile cannot delay blow-up (small family)
    cfg = ModelConfig(n=1, a0=1.0, alpha=0.0, beta=0.0, p=2.0, sign="plus-abs")
    grid = GridSpec(r_max=110.0, nr=1100, cfl=0.9, t_end=100.0, record_every=0.5)
    times = []
    for amp in (5.0, 10.0):
        res = run(cfg, grid, InitialData(family="compact-bump", amplitude=amp, width=1.0))
        assert res.status == "blew-up"
        times.append(res.blowup_time)
    assert times[1] <= times[0] + 0.5


def test_free_energy_dissipates():
    cfg = ModelConfig(n=1, a0=1.0, alpha=0.0, beta=0.0, p=2.0, sign="none")
    grid = GridSpec(r_max=40.0, nr=800, cfl=0.9, t_end=20.0, record_every=1.0)
    data = InitialData(family="gaussian", amplitude=1.0, width=1.0)
    res = run(cfg, grid, data)
    assert res.status == "completed"
    e = np.array([rec.energy for rec in res.records])
    assert np.all(e[1:] <= e[:-1] * (1.0 + 1e-6))
    assert e[-1] < 0.1 * e[0]


def test_run_zero_data_all_records_zero():
    grid = GridSpec(r_max=20.0, nr=100, cfl=0.9, t_end=5.0, record_every=1.0)
    data = InitialData(family="gaussian", amplitude=0.0, width=1.0)
    res = run(LINEAR, grid, data)
    assert res.status == "completed"
    assert len(res.records) == 6
    for rec in res.records:
        assert rec.l2 == 0.0 and rec.energy == 0.0 and rec.m_partial1 == 0.0
    assert res.max_boundary_ratio == 0.0


def test_fitted_slope_grid_independent():
    data = InitialData(family="gaussian", amplitude=1e-3, width=1.0)
    slopes = []
    for nr in (840, 1680):
        grid = GridSpec(r_max=210.0, nr=nr, cfl=0.9, t_end=200.0, record_every=1.0)
        res = run(LINEAR, grid, data)
        t = np.array([rec.t for rec in res.records])
        wl2 = np.array([rec.weighted_l2 for rec in res.records])
        slopes.append(fit_decay_rate(t, wl2, (20.0, 200.0)).slope)
    assert abs(slopes[0] - slopes[1]) < 0.05
