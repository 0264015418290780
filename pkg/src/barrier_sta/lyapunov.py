"""Lyapunov-style diagnostics evaluated on recorded trajectories.

These are verification instruments computed offline; nothing here feeds
back into the control loop. The outside-barrier function
V = z^T R z + 2 gamma k2 |s| (with z = (|s|^a sgn s, psi)) certifies the
dynamic-adaptation phase; the in-barrier function over the well
coordinates (y1, y2) certifies residence inside a layer.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict
from typing import Optional

from .barrier import h_alpha
from .controller import signed_power

#: Absolute slack when deciding whether V decreased between two samples,
#: absorbing float rounding in the comparison.
DECREASE_TOL = 1e-12


def sigma_sat(y2: float) -> float:
    """Unit saturation sgn(y2) * min(|y2|, 1)."""
    return signed_power(y2, 0.0) * min(abs(y2), 1.0)


@dataclass(frozen=True)
class OutsideLyapEval:
    """V, its quadratic-form eigenvalue bounds, and the velocity coordinate psi."""

    psi: float
    v_value: float
    lambda_min: float
    lambda_max: float


def v_outside(s: float, phi: float, k1: float, k2: float,
              gamma: float, alpha: float) -> OutsideLyapEval:
    """Evaluate V = z^T R z + 2 gamma k2 |s| at one state.

    z = (|s|^alpha sgn(s), psi) with psi = k1 |s|^alpha sgn(s) - phi, and
    R = (gamma/2) [[k1^2, -k1], [-k1, 2]]. R is positive definite for any
    k1 > 0, gamma > 0; its eigenvalues come out in closed form as
    (a + c +/- sqrt(a^2 + c^2)) / 2 with a = gamma k1^2 / 2, c = gamma.
    """
    if k1 <= 0.0:
        raise ValueError("k1 must be > 0")
    if k2 < 0.0:
        raise ValueError("k2 must be >= 0")
    if gamma <= 0.0:
        raise ValueError("gamma must be > 0")

    sp = signed_power(s, alpha)
    psi = k1 * sp - phi
    a = 0.5 * gamma * k1 * k1
    c = gamma
    # z^T R z expanded; the off-diagonal entry is -gamma*k1/2 twice.
    quad = a * sp * sp - gamma * k1 * sp * psi + c * psi * psi
    v_value = quad + 2.0 * gamma * k2 * abs(s)
    root = math.hypot(a, c)
    return OutsideLyapEval(
        psi=psi,
        v_value=v_value,
        lambda_min=0.5 * (a + c - root),
        lambda_max=0.5 * (a + c + root),
    )


@dataclass(frozen=True)
class InsideLyapEval:
    """In-barrier V over the well coordinates, with its sandwich bounds."""

    v_value: float
    c_zeta: float
    c_theta: Optional[float]
    f_factor: float
    lower: float
    upper: float


def v_inside(y1: float, y2: float, c_zeta: float, l_alpha: float,
             c_theta: Optional[float] = None) -> InsideLyapEval:
    """Evaluate the in-barrier Lyapunov function at (y1, y2).

    V = ln(1 + 2 c |y1|) / (2 c) * (1 - sgn(y1) sigma(y2) / 4) + F y2^2 / 2
    with F = l_alpha when sgn(y1) * y2 <= 0 and F = 1 otherwise. The
    returned bounds 3 ln(1 + 2c|y1|)/(8c) + y2^2/2 and
    5 ln(1 + 2c|y1|)/(8c) + l_alpha y2^2/2 sandwich V and are attained
    with equality when |y2| >= 1, so comparisons need rounding slack.
    """
    if c_zeta <= 0.0:
        raise ValueError("c_zeta must be > 0")
    if l_alpha <= 1.0:
        raise ValueError("l_alpha must be > 1")

    sgn_y1 = signed_power(y1, 0.0)
    f_factor = l_alpha if sgn_y1 * y2 <= 0.0 else 1.0
    log_term = math.log1p(2.0 * c_zeta * abs(y1)) / (2.0 * c_zeta)
    v_value = log_term * (1.0 - 0.25 * sgn_y1 * sigma_sat(y2)) + 0.5 * f_factor * y2 * y2
    lower = 0.75 * log_term + 0.5 * y2 * y2
    upper = 1.25 * log_term + 0.5 * l_alpha * y2 * y2
    return InsideLyapEval(
        v_value=v_value,
        c_zeta=c_zeta,
        c_theta=c_theta,
        f_factor=f_factor,
        lower=lower,
        upper=upper,
    )


def barrier_window_constants(eps: float, alpha: float,
                             theta: Optional[float] = None,
                             zeta: Optional[float] = None) -> tuple[float, float]:
    """Well-depth bounds (C_theta, C_zeta) over the window [theta, zeta].

    Defaults theta = eps/100 and zeta = 0.99 eps; any 0 < theta < zeta < eps
    works. Monotonicity of the well-depth factor gives C_theta >= C_zeta > 0.
    """
    theta = eps / 100.0 if theta is None else theta
    zeta = 0.99 * eps if zeta is None else zeta
    if not (0.0 < theta < zeta < eps):
        raise ValueError("need 0 < theta < zeta < eps")
    return h_alpha(theta, eps, alpha), h_alpha(zeta, eps, alpha)


@dataclass(frozen=True)
class DiagnosticsReport:
    """Post-hoc trajectory diagnostics.

    ``decrease_fraction`` is None when the run contains no consecutive
    dynamic-mode sample pairs to judge. ``violations`` lists the times of
    the pairs where V failed to decrease. ``reach_time`` is the first time
    |s| dropped below the outermost threshold, if it ever did.
    """

    decrease_fraction: Optional[float]
    violations: tuple[float, ...]
    reach_time: Optional[float]
    mode_occupancy: dict[str, float]
    switch_counts: dict[str, int]

    def to_json(self, indent: int = 2) -> str:
        data = asdict(self)
        data["violations"] = list(data["violations"])
        return json.dumps(data, indent=indent)


def monitor_decrease(traj, gamma: float, alpha: float,
                     skip_initial: int = 10) -> DiagnosticsReport:
    """Scan a trajectory for Lyapunov decrease in dynamic mode plus mode stats.

    Over consecutive sample pairs that both run in mode 0 (skipping the
    first ``skip_initial`` samples, where the gain bootstrap dominates),
    V is recomputed from the recorded state and counted as decreasing when
    V_next < V_prev + DECREASE_TOL.
    """
    records = traj.records
    if not records:
        raise ValueError("empty trajectory")
    cfg = traj.config_echo[0]
    eps_outer = cfg.layers[-1]

    values: list[Optional[float]] = []
    for r in records:
        if r.mode == 0:
            values.append(v_outside(r.s, r.v + r.d, r.k1, r.k2, gamma, alpha).v_value)
        else:
            values.append(None)

    pairs = 0
    decreased = 0
    violations: list[float] = []
    for i in range(max(skip_initial, 0), len(records) - 1):
        v0, v1 = values[i], values[i + 1]
        if v0 is None or v1 is None:
            continue
        pairs += 1
        if v1 < v0 + DECREASE_TOL:
            decreased += 1
        else:
            violations.append(records[i + 1].t)

    reach_time = None
    for r in records:
        if abs(r.s) < eps_outer:
            reach_time = r.t
            break

    occupancy: dict[str, float] = {}
    switches: dict[str, int] = {"total": 0}
    n = len(records)
    prev_mode: Optional[int] = None
    for r in records:
        label = f"A{r.mode}"
        occupancy[label] = occupancy.get(label, 0.0) + 1.0
        if prev_mode is not None and r.mode != prev_mode:
            switches["total"] += 1
            switches[label] = switches.get(label, 0) + 1
        prev_mode = r.mode
    occupancy = {k: v / n for k, v in sorted(occupancy.items())}
    switches = dict(sorted(switches.items()))

    return DiagnosticsReport(
        decrease_fraction=(decreased / pairs) if pairs else None,
        violations=tuple(violations),
        reach_time=reach_time,
        mode_occupancy=occupancy,
        switch_counts=switches,
    )
