"""Numerical identity suites for the barrier gains and Lyapunov machinery.

Each check evaluates an algebraic identity or structural property on a
deterministic grid and reports its worst residual. The CLI selftest
command runs all of them; the test suite asserts on the same results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .barrier import barrier_k, h_alpha, omega_alpha, y_transform
from .lyapunov import v_inside, v_outside

GRID_ALPHAS = (0.25, 0.5, 0.75, 1.0)
GRID_EPSILONS = (1e-4, 1e-2, 1e-1)
GRID_POINTS = 10_000

OMEGA_IDENTITY_TOL = 1e-9
CHAIN_RULE_TOL = 1e-4
SANDWICH_TOL = 1e-9


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_residual: float
    tolerance: float
    worst_point: str
    ok: bool


def _grid(eps: float) -> np.ndarray:
    return np.logspace(math.log10(1e-6 * eps), math.log10((1.0 - 1e-6) * eps), GRID_POINTS)


def check_k2_square(inject_fault: bool = False) -> CheckResult:
    """k2 must equal k1 squared bit-exactly everywhere on the grid.

    ``inject_fault`` perturbs the reference by one part in 1e9, forcing a
    mismatch; it exists so the failure path of the selftest is testable.
    """
    worst = ""
    bad = 0.0
    for alpha in GRID_ALPHAS:
        for eps in GRID_EPSILONS:
            for s in _grid(eps)[::100]:
                k1, k2 = barrier_k(float(s), eps, alpha)
                reference = k1 * k1
                if inject_fault:
                    reference *= 1.0 + 1e-9
                diff = abs(k2 - reference)
                if diff > bad:
                    bad = diff
                    worst = f"s={float(s)!r} eps={eps} alpha={alpha}"
    return CheckResult("k2-equals-k1-squared", bad, 0.0, worst, bad == 0.0)


def check_omega_identity() -> CheckResult:
    """omega * k1^2 vs 1 + 2 h |y1|, relative residual on the log grid."""
    worst_res = 0.0
    worst = ""
    for alpha in GRID_ALPHAS:
        for eps in GRID_EPSILONS:
            for s in _grid(eps):
                s = float(s)
                k1, _ = barrier_k(s, eps, alpha)
                lhs = omega_alpha(s, eps, alpha) * k1 * k1
                y1, _ = y_transform(s, 0.0, eps, alpha)
                rhs = 1.0 + 2.0 * h_alpha(s, eps, alpha) * abs(y1)
                res = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
                if res > worst_res:
                    worst_res = res
                    worst = f"s={s!r} eps={eps} alpha={alpha}"
    return CheckResult("omega-gain-identity", worst_res, OMEGA_IDENTITY_TOL,
                       worst, worst_res <= OMEGA_IDENTITY_TOL)


def check_chain_rule() -> CheckResult:
    """d/dt k1 along s(t) = 0.4 eps sin(t) vs h k1^3 sgn(s) s'(t).

    Central finite differences with step 1e-6, points near s = 0 masked.
    """
    fd_step = 1e-6
    worst_res = 0.0
    worst = ""
    for alpha in GRID_ALPHAS:
        for eps in GRID_EPSILONS:
            for t in np.linspace(0.05, 2.0 * math.pi, 400):
                t = float(t)
                if abs(math.sin(t)) < 0.05:
                    continue
                s_of = lambda tau: 0.4 * eps * math.sin(tau)
                s = s_of(t)
                sdot = 0.4 * eps * math.cos(t)
                k1p, _ = barrier_k(s_of(t + fd_step), eps, alpha)
                k1m, _ = barrier_k(s_of(t - fd_step), eps, alpha)
                fd = (k1p - k1m) / (2.0 * fd_step)
                k1, _ = barrier_k(s, eps, alpha)
                analytic = h_alpha(s, eps, alpha) * k1 ** 3 * math.copysign(1.0, s) * sdot
                res = abs(fd - analytic) / max(abs(analytic), 1e-300)
                if res > worst_res:
                    worst_res = res
                    worst = f"t={t!r} eps={eps} alpha={alpha}"
    return CheckResult("chain-rule-gain-derivative", worst_res, CHAIN_RULE_TOL,
                       worst, worst_res <= CHAIN_RULE_TOL)


def check_r_matrix_definite() -> CheckResult:
    """lambda_min of the quadratic form stays positive over the gain grid."""
    worst_val = math.inf
    worst = ""
    for gamma in (0.1, 1.0, 2.0, 10.0):
        for k1 in np.logspace(-3, 3, 200):
            ev = v_outside(1.0, 0.0, float(k1), 1.0, gamma, 0.5)
            if ev.lambda_min < worst_val:
                worst_val = ev.lambda_min
                worst = f"k1={float(k1)!r} gamma={gamma}"
    ok = worst_val > 0.0
    return CheckResult("r-matrix-positive-definite", 0.0 if ok else abs(worst_val),
                       0.0, worst, ok)


def check_inside_sandwich() -> CheckResult:
    """v_inside stays within its printed bounds at seeded random points."""
    rng = np.random.default_rng(20240817)
    worst_res = 0.0
    worst = ""
    for _ in range(GRID_POINTS):
        y1 = float(rng.uniform(-10.0, 10.0))
        y2 = float(rng.uniform(-5.0, 5.0))
        c = float(rng.uniform(0.05, 5.0))
        l_alpha = float(rng.uniform(1.01, 5.0))
        ev = v_inside(y1, y2, c, l_alpha)
        scale = max(1.0, abs(ev.v_value))
        res = max(ev.lower - ev.v_value, ev.v_value - ev.upper, 0.0) / scale
        if res > worst_res:
            worst_res = res
            worst = f"y1={y1!r} y2={y2!r} c_zeta={c!r} l_alpha={l_alpha!r}"
    return CheckResult("inside-lyapunov-sandwich", worst_res, SANDWICH_TOL,
                       worst, worst_res <= SANDWICH_TOL)


def run_all(inject_fault: bool = False) -> list[CheckResult]:
    return [
        check_k2_square(inject_fault=inject_fault),
        check_omega_identity(),
        check_chain_rule(),
        check_r_matrix_definite(),
        check_inside_sandwich(),
    ]
