"""Discrete-time non-homogeneous super-twisting control law.

The control is u = -k1 |s|^alpha sgn(s) + v with integrator
v' = -k2 sgn(s), both advanced with explicit Euler on a shared sample
clock. sgn(0) is taken as 0, so the law injects nothing at rest.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .scheduler import SchedulerState


def signed_power(s: float, a: float) -> float:
    """|s|^a * sgn(s) with sgn(0) = 0, hence signed_power(0, a) = 0 even at a = 0."""
    if a < 0.0:
        raise ValueError("exponent must be >= 0")
    if s > 0.0:
        return s ** a
    if s < 0.0:
        return -((-s) ** a)
    return 0.0


@dataclass(frozen=True, slots=True)
class ControllerState:
    """Integrator state, scheduler memory, and the last control output."""

    v: float
    scheduler: SchedulerState
    last_u: float = 0.0


def control(s: float, state: ControllerState, k1: float, alpha: float) -> float:
    """u = -k1 * |s|^alpha * sgn(s) + v."""
    if k1 < 0.0:
        raise ValueError("k1 must be >= 0")
    return -k1 * signed_power(s, alpha) + state.v


def step_integrator(state: ControllerState, s: float, k2: float, dt: float) -> ControllerState:
    """Advance v one sample: v <- v - dt * k2 * sgn(s)."""
    if k2 < 0.0:
        raise ValueError("k2 must be >= 0")
    if dt <= 0.0:
        raise ValueError("dt must be > 0")
    return replace(state, v=state.v - dt * k2 * signed_power(s, 0.0))
