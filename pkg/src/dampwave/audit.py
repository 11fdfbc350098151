"""Numerical audits of the pointwise inequalities and parameter choices
behind the weighted-energy bound.

Nothing here is a proof: inequalities are evaluated on sampled grids plus
seeded random points, and the parameter search mirrors the narrative order
(small nu first, then large t0/K, then the margins c0/c1, then delta4, then
L).  A failing check always carries a concrete witness point, which makes
these audits falsification tools rather than certificates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coefficients import (
    InvalidConfig,
    ModelConfig,
    damping_coefficient,
    derived_constants,
    sigma_exponent,
    weight_derivatives,
)

REL_SLACK_TOL = 1e-12  # float noise allowance on analytically-tight inequalities


@dataclass
class CheckResult:
    name: str
    passed: bool
    margin: float
    witness: tuple | None = None
    detail: str = ""

    def line(self) -> str:
        status = "pass" if self.passed else "FAIL"
        out = f"{self.name}: {status}, min slack {self.margin:.3e}"
        if self.witness is not None and not self.passed:
            out += f", witness {self.witness}"
        if self.detail:
            out += f" ({self.detail})"
        return out


@dataclass
class FeasibleParams:
    nu: float
    nu_hat: float
    nu0: float
    t0: float
    K: float
    c0: float
    c1: float
    delta4: float
    L: float


@dataclass
class AuditReport:
    config: dict
    checks: list[CheckResult] = field(default_factory=list)
    feasible: FeasibleParams | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def render(self) -> str:
        lines = ["audit report", "============"]
        if self.config:
            lines.append("config: " + ", ".join(f"{k}={v}" for k, v in self.config.items()))
        lines += [c.line() for c in self.checks]
        if self.feasible is not None:
            f = self.feasible
            lines.append(
                "feasible parameters: "
                f"nu={f.nu:.6g} nu_hat={f.nu_hat:.6g} nu0={f.nu0:.6g} "
                f"t0={f.t0:.6g} K={f.K:.6g} c0={f.c0:.6g} c1={f.c1:.6g} "
                f"delta4={f.delta4:.6g} L={f.L:.6g}"
            )
        return "\n".join(lines) + "\n"


def default_sample_points(seed: int = 0, n_random: int = 10_000):
    """(t, r) audit sample set: coarse grid plus seeded random points."""
    t_grid = np.array([0.0, 1.0, 10.0, 100.0, 1000.0])
    r_grid = np.concatenate(([0.0], np.logspace(-3.0, 3.0, 41)))
    tt, rr = np.meshgrid(t_grid, r_grid, indexing="ij")
    rng = np.random.default_rng(seed)
    t_rand = 10.0 ** rng.uniform(-3.0, 3.0, n_random) - 1e-3
    r_rand = 10.0 ** rng.uniform(-3.0, 3.0, n_random)
    t = np.concatenate([tt.ravel(), np.maximum(t_rand, 0.0)])
    r = np.concatenate([rr.ravel(), r_rand])
    return t, r


def check_weight_inequalities(cfg: ModelConfig, points=None, seed: int = 0) -> AuditReport:
    """Pointwise audit of the two weight inequalities.

    (a) lap(psi) >= (1+beta)(n-alpha) / ((2-alpha)(2+delta)) * a b / (1+t),
        with equality of the leading term when alpha = 0;
    (b) (-psi_t) a b >= (2+delta) |grad psi|^2, whose exact ratio is
        <x>^2 / |x|^2 >= 1.
    """
    t, r = default_sample_points(seed) if points is None else points
    psi_t, psi_r, psi_lap = weight_derivatives(cfg, t, r)
    ab = damping_coefficient(cfg, t, r)

    rhs_a = (
        (1.0 + cfg.beta)
        * (cfg.n - cfg.alpha)
        / ((2.0 - cfg.alpha) * (2.0 + cfg.delta))
        * ab
        / (1.0 + t)
    )
    slack_a = psi_lap - rhs_a
    tol_a = REL_SLACK_TOL * np.abs(rhs_a)
    bad_a = slack_a < -tol_a
    worst_a = int(np.argmin(slack_a - tol_a))

    lhs_b = -psi_t * ab
    rhs_b = (2.0 + cfg.delta) * psi_r**2
    slack_b = lhs_b - rhs_b
    tol_b = REL_SLACK_TOL * np.abs(lhs_b)
    bad_b = slack_b < -tol_b
    worst_b = int(np.argmin(slack_b - tol_b))

    report = AuditReport(config={"n": cfg.n, "a0": cfg.a0, "alpha": cfg.alpha,
                                 "beta": cfg.beta, "delta": cfg.delta})
    report.checks.append(
        CheckResult(
            name="laplacian lower bound",
            passed=not bool(np.any(bad_a)),
            margin=float(np.min(slack_a)),
            witness=(float(t[worst_a]), float(r[worst_a])),
            detail="equality when alpha=0" if cfg.alpha == 0 else "",
        )
    )
    report.checks.append(
        CheckResult(
            name="weight-time vs gradient",
            passed=not bool(np.any(bad_b)),
            margin=float(np.min(slack_b)),
            witness=(float(t[worst_b]), float(r[worst_b])),
        )
    )
    return report


def check_scalar_estimates(seed: int = 0, count: int = 100_000) -> AuditReport:
    """Randomized audit of the two scalar inequalities used pointwise.

    (i)  |X - Y|^2 >= |X|^2/5 - |Y|^2/4  (the Schwarz split of the cross term);
    (ii) the completion-of-square bound on the mixed quadratic
         |g|^2 + 4 u g.q + (w + 2|q|^2) u^2 >= delta3 (|g|^2 + |q|^2 u^2)
         + (delta/3) w u^2,  valid whenever w >= (2+delta) |q|^2.
    """
    rng = np.random.default_rng(seed)
    report = AuditReport(config={"seed": seed, "count": count})

    dim = 3
    X = rng.normal(size=(count, dim))
    Y = rng.normal(size=(count, dim)) * rng.uniform(0.1, 10.0, size=(count, 1))
    lhs = np.sum((X - Y) ** 2, axis=1)
    rhs = np.sum(X**2, axis=1) / 5.0 - np.sum(Y**2, axis=1) / 4.0
    slack = lhs - rhs
    scale = np.sum(X**2 + Y**2, axis=1)
    bad = slack < -REL_SLACK_TOL * scale
    worst = int(np.argmin(slack))
    report.checks.append(
        CheckResult(
            name="schwarz split",
            passed=not bool(np.any(bad)),
            margin=float(np.min(slack)),
            witness=(tuple(X[worst]), tuple(Y[worst])) if np.any(bad) else None,
        )
    )

    delta = rng.uniform(0.01, 0.9, size=count)
    delta2 = delta / 6.0 - delta**2 / 6.0
    delta3 = np.minimum(1.0 - 4.0 / (4.0 + delta2), delta2)
    g = rng.normal(size=(count, dim)) * rng.uniform(0.1, 10.0, size=(count, 1))
    q = rng.normal(size=(count, dim)) * rng.uniform(0.1, 10.0, size=(count, 1))
    u = rng.normal(size=count) * rng.uniform(0.1, 10.0, size=count)
    q2 = np.sum(q**2, axis=1)
    w = (2.0 + delta) * q2 * (1.0 + rng.exponential(2.0, size=count))
    g2 = np.sum(g**2, axis=1)
    gq = np.sum(g * q, axis=1)
    lhs2 = g2 + 4.0 * u * gq + (w + 2.0 * q2) * u**2
    rhs2 = delta3 * (g2 + q2 * u**2) + (delta / 3.0) * w * u**2
    slack2 = lhs2 - rhs2
    scale2 = g2 + (w + q2) * u**2
    bad2 = slack2 < -REL_SLACK_TOL * scale2
    worst2 = int(np.argmin(slack2))
    report.checks.append(
        CheckResult(
            name="mixed quadratic bound",
            passed=not bool(np.any(bad2)),
            margin=float(np.min(slack2)),
            witness=(float(u[worst2]), float(delta[worst2])) if np.any(bad2) else None,
        )
    )
    return report


_T0_K_CEILING = 1e300  # beyond this the required parameter overflows a double


def _interior_budget(cfg: ModelConfig, nu: float, delta3: float):
    """(c0, t0) for a given nu, or (None, binding constraint)."""
    s = cfg.alpha + cfg.beta
    m1 = cfg.a0 / 4.0 - nu
    m2 = 1.0 - 3.0 * nu / (cfg.a0 * cfg.delta)
    m3 = nu * delta3
    if m1 <= 0:
        return None, "a0/4 - nu > 0"
    if m2 <= 0:
        return None, "1 - 3 nu/(a0 delta) > 0"
    if s == 0.0:
        return (min(m1, m2, m3, 0.2), 1.0), None
    target = 0.5 * min(m1, m3)
    log_t0 = math.log(s / (2.0 * target)) / (1.0 - s) if target > 0 else math.inf
    if log_t0 > math.log(_T0_K_CEILING):
        return None, "nu delta3 - (alpha+beta)/(2 t0^(1-alpha-beta)) >= c0 needs t0 beyond float range"
    t0 = max(1.0, math.exp(log_t0))
    pen = s / (2.0 * t0 ** (1.0 - s))
    c0 = min(m1 - pen, m2, m3 - pen, m3, 0.2)
    if c0 <= 0:
        return None, "positive c0"
    return (c0, t0), None


def _exterior_budget(cfg: ModelConfig, nu_hat: float, delta3: float):
    """(c1, K) for a given nu_hat, or (None, binding constraint)."""
    s = cfg.alpha + cfg.beta
    m1 = cfg.a0 / 4.0 - nu_hat
    m2 = 1.0 - 3.0 * nu_hat / (cfg.a0 * cfg.delta)
    m3 = nu_hat * delta3
    if m1 <= 0:
        return None, "a0/4 - nu_hat > 0"
    if m2 <= 0:
        return None, "1 - 3 nu_hat/(a0 delta) > 0"
    if s == 0.0:
        return (min(m1, m2, m3, 0.2), 1.0), None
    target = 0.5 * m1
    log_K = (
        math.log(s**2 / (2.0 * nu_hat * delta3 * target)) / (2.0 * (1.0 - s))
        if target > 0
        else math.inf
    )
    if log_K > math.log(_T0_K_CEILING):
        return None, "a0/4 - nu_hat - (alpha+beta)^2/(2 nu_hat delta3 K^(2-2(alpha+beta))) >= c1 needs K beyond float range"
    K = max(1.0, math.exp(log_K))
    pen = s**2 / (2.0 * nu_hat * delta3 * K ** (2.0 * (1.0 - s)))
    c1 = min(m1 - pen, m2, m3, 0.2)
    if c1 <= 0:
        return None, "positive c1"
    return (c1, K), None


def _best_over_nu_grid(budget, nu_cap: float):
    """Coarse grid over nu (log-spaced), then golden-section refinement."""
    best = (None, None, None)  # (value, nu, aux)
    last_reason = "empty nu grid"
    grid = nu_cap * 2.0 ** -np.arange(0, 40, dtype=float)
    for nu in grid:
        out, reason = budget(nu)
        if out is None:
            last_reason = reason
            continue
        if best[0] is None or out[0] > best[0]:
            best = (out[0], nu, out[1])
    if best[0] is None:
        return None, last_reason
    # refine on log-nu around the best grid point
    lo, hi = math.log(best[1] / 2.0), math.log(min(best[1] * 2.0, nu_cap))
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    for _ in range(40):
        c, d = b - phi * (b - a), a + phi * (b - a)
        fc = budget(math.exp(c))[0]
        fd = budget(math.exp(d))[0]
        vc = fc[0] if fc else -math.inf
        vd = fd[0] if fd else -math.inf
        if vc >= vd:
            b = d
        else:
            a = c
    nu = math.exp(0.5 * (a + b))
    out, reason = budget(nu)
    if out is not None and out[0] > best[0]:
        best = (out[0], nu, out[1])
    return best, None


def feasible_parameters(cfg: ModelConfig) -> AuditReport:
    """Search for (nu, nu_hat, t0, K, c0, c1, delta4, L) making every margin
    positive; reports the binding constraint when no choice works."""
    report = AuditReport(config={"n": cfg.n, "a0": cfg.a0, "alpha": cfg.alpha,
                                 "beta": cfg.beta, "delta": cfg.delta})
    if cfg.a0 <= 0:
        report.checks.append(CheckResult("parameter feasibility", False, -1.0,
                                         detail="a0 > 0 required"))
        return report
    k = derived_constants(cfg)
    nu_cap = min(cfg.a0 / 4.0, cfg.a0 * cfg.delta / 3.0) * 0.999

    best0, reason0 = _best_over_nu_grid(lambda nu: _interior_budget(cfg, nu, k.delta3), nu_cap)
    if best0 is None:
        report.checks.append(CheckResult("parameter feasibility", False, -1.0,
                                         detail=f"interior zone infeasible: {reason0}"))
        return report
    c0, nu, t0 = best0

    best1, reason1 = _best_over_nu_grid(lambda nh: _exterior_budget(cfg, nh, k.delta3), nu_cap)
    if best1 is None:
        report.checks.append(CheckResult("parameter feasibility", False, -1.0,
                                         detail=f"exterior zone infeasible: {reason1}"))
        return report
    c1, nu_hat, K = best1

    if k.B <= k.eps:
        report.checks.append(CheckResult("parameter feasibility", False, -1.0,
                                         detail="B - eps > 0 required for delta4"))
        return report
    delta4 = 0.5 * k.delta1 / (k.B - k.eps)
    nu0 = min(nu, nu_hat)
    L = max(1.0, (k.B - k.eps) / (c1 * (1.0 + cfg.beta)) * (1.0 + 2.0 * nu0 / (delta4 * cfg.a0)))

    report.feasible = FeasibleParams(nu=nu, nu_hat=nu_hat, nu0=nu0, t0=t0, K=K,
                                     c0=c0, c1=c1, delta4=delta4, L=L)
    report.checks.append(
        CheckResult("parameter feasibility", True, min(c0, c1),
                    detail=f"delta4 bound {k.delta1 / (k.B - k.eps):.6g}")
    )
    return report


def _radial_norms(h: np.ndarray, r: np.ndarray, dx: float, n: int, p: float):
    """(||h||_{p+1}, ||h||_2, ||grad h||_2) by trapezoid quadrature."""
    from .energetics import SURFACE_FACTOR

    surf = SURFACE_FACTOR[n]
    dh = np.gradient(h, dx, edge_order=2)
    norm_p = (surf * np.trapezoid(np.abs(h) ** (p + 1.0) * r ** (n - 1), dx=dx)) ** (1.0 / (p + 1.0))
    norm_2 = math.sqrt(surf * np.trapezoid(h**2 * r ** (n - 1), dx=dx))
    norm_g = math.sqrt(surf * np.trapezoid(dh**2 * r ** (n - 1), dx=dx))
    return norm_p, norm_2, norm_g


def gn_ratio_check(
    n: int,
    p: float,
    sigma: float | None = None,
    widths=(0.5, 1.0, 2.0, 5.0, 10.0),
    nr: int = 4096,
    tol: float = 0.01,
) -> AuditReport:
    """Scale-invariance audit of the interpolation inequality exponent.

    The ratio ||h||_{p+1} / (||h||_2^(1-sigma) ||grad h||_2^sigma) is
    width-independent exactly when sigma = n(p-1)/(2(p+1)); passing a wrong
    sigma makes the widths disagree (negative control).
    """
    if sigma is None:
        sigma = sigma_exponent(n, p)
    report = AuditReport(config={"n": n, "p": p, "sigma": sigma})
    for family in ("gaussian", "bump"):
        ratios = []
        for w in widths:
            r_max = 16.0 * w if family == "gaussian" else 1.05 * w
            r = np.linspace(0.0, r_max, nr + 1)
            dx = r_max / nr
            if family == "gaussian":
                h = np.exp(-(r**2) / (2.0 * w**2))
            else:
                h = np.zeros_like(r)
                inside = r < w
                h[inside] = np.exp(-(w**2) / (w**2 - r[inside] ** 2))
            norm_p, norm_2, norm_g = _radial_norms(h, r, dx, n, p)
            ratios.append(norm_p / (norm_2 ** (1.0 - sigma) * norm_g**sigma))
            # homogeneity: rescaling h leaves the ratio untouched
            norm_p2, norm_22, norm_g2 = _radial_norms(2.0 * h, r, dx, n, p)
            ratio2 = norm_p2 / (norm_22 ** (1.0 - sigma) * norm_g2**sigma)
            if abs(ratio2 - ratios[-1]) > 1e-9 * ratios[-1]:
                report.checks.append(CheckResult(f"gn homogeneity [{family}]", False,
                                                 ratio2 - ratios[-1], witness=(w,)))
        spread = max(ratios) / min(ratios) - 1.0
        report.checks.append(
            CheckResult(
                name=f"gn scale invariance [{family}]",
                passed=spread < tol,
                margin=tol - spread,
                witness=tuple(widths),
                detail=f"ratio spread {spread:.4%}",
            )
        )
    return report


def bootstrap_threshold(C: float, p: float) -> float:
    """Largest I0^2 for which M <= C I0^2 + C M^((p+1)/2) closes to M <= 2C I0^2.

    Requires C (2C I0^2)^((p-1)/2) <= 1/2, i.e. I0^2 = (1/(2C))^(2/(p-1)) / (2C).
    """
    if C <= 0 or p <= 1:
        raise InvalidConfig(f"need C > 0 and p > 1, got C={C}, p={p}")
    return (1.0 / (2.0 * C)) ** (2.0 / (p - 1.0)) / (2.0 * C)
