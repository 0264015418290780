"""Positive-semidefinite barrier gain functions and their algebraic companions.

The gain k1(s, eps) = |s| / (eps - |s|)^(alpha+1) vanishes at s = 0 and blows
up at |s| = eps, acting as a potential well that keeps the sliding variable
inside the band. k2 is always the exact square of k1. The companions h
(well-depth factor), omega (variable disturbance gain) and the coordinate
y1 = k1^2 * s satisfy the identity

    omega * k1^2 == 1 + 2 * h * |y1|

on the whole open band, which the self-test suite checks numerically.

All functions evaluate through |s| and reapply the sign afterwards, so
evenness (k1, k2, h, omega) and oddness (y1) hold bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass


class BarrierDomainError(ValueError):
    """Raised when a barrier function is evaluated outside its domain.

    The scheduler must never ask for a gain at |s| >= eps; failing loudly
    here catches mode-selection bugs instead of silently saturating.
    """


def _check_band(s: float, eps: float, alpha: float) -> float:
    if eps <= 0.0:
        raise BarrierDomainError(f"eps must be > 0, got {eps!r}")
    if alpha <= 0.0:
        raise BarrierDomainError(f"alpha must be > 0, got {alpha!r}")
    abs_s = abs(s)
    if abs_s >= eps:
        raise BarrierDomainError(f"|s|={abs_s!r} outside barrier domain |s| < eps={eps!r}")
    return abs_s


def barrier_k(s: float, eps: float, alpha: float) -> tuple[float, float]:
    """Barrier gain pair (k1, k2) with k2 computed as k1 squared.

    k1 = |s| / (eps - |s|)^(alpha+1). Even in s, zero at s = 0, strictly
    increasing in |s| and unbounded as |s| -> eps.
    """
    abs_s = _check_band(s, eps, alpha)
    k1 = abs_s / (eps - abs_s) ** (alpha + 1.0)
    return k1, k1 * k1


def h_alpha(s: float, eps: float, alpha: float) -> float:
    """Well-depth factor h = (eps + alpha|s|) (eps - |s|)^(2 alpha + 1) / |s|^3.

    Strictly positive and monotonically decreasing in |s| on (0, eps); it has
    a pole at s = 0, so zero is rejected rather than mapped to infinity.
    h ties the growth of k1 along a trajectory to the motion of s through
    d/dt k1 = h * k1^3 * sgn(s) * ds/dt.
    """
    abs_s = _check_band(s, eps, alpha)
    if abs_s == 0.0:
        raise BarrierDomainError("h is undefined at s = 0")
    return (eps + alpha * abs_s) * (eps - abs_s) ** (2.0 * alpha + 1.0) / abs_s ** 3


def omega_alpha(s: float, eps: float, alpha: float) -> float:
    """Variable disturbance gain
    omega = (eps - |s|)^(2 alpha + 1) (3 eps + (2 alpha - 1)|s|) / |s|^2.

    Vanishes as |s| -> eps and grows without bound as |s| -> 0, scaling how
    strongly a rate-bounded disturbance can push against the barrier.
    """
    abs_s = _check_band(s, eps, alpha)
    if abs_s == 0.0:
        raise BarrierDomainError("omega is undefined at s = 0")
    return (
        (eps - abs_s) ** (2.0 * alpha + 1.0)
        * (3.0 * eps + (2.0 * alpha - 1.0) * abs_s)
        / abs_s ** 2
    )


def y_transform(s: float, phi: float, eps: float, alpha: float) -> tuple[float, float]:
    """Well coordinates (y1, y2) = (k1^2 * s, phi).

    y1 carries the sign of s; y2 is the perturbation-offset state unchanged.
    """
    abs_s = _check_band(s, eps, alpha)
    if abs_s == 0.0:
        return 0.0, phi
    k1 = abs_s / (eps - abs_s) ** (alpha + 1.0)
    return k1 * k1 * s, phi


@dataclass(frozen=True)
class BarrierEval:
    """Joint evaluation of the barrier gains and their companions at one point."""

    k1: float
    k2: float
    h: float
    omega: float
    y1: float


def barrier_eval(s: float, eps: float, alpha: float) -> BarrierEval:
    """Evaluate k1, k2, h, omega and y1 together; requires 0 < |s| < eps."""
    k1, k2 = barrier_k(s, eps, alpha)
    return BarrierEval(
        k1=k1,
        k2=k2,
        h=h_alpha(s, eps, alpha),
        omega=omega_alpha(s, eps, alpha),
        y1=y_transform(s, 0.0, eps, alpha)[0],
    )
