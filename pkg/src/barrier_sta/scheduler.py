"""Two-mode gain scheduling over nested accuracy layers.

Mode 0 grows the dynamic gains while the sliding variable is outside the
outermost layer (or still approaching from outside, tracked by a latch);
mode i applies the barrier gains of layer i and lets the dynamic gains
decay so stale large values are forgotten.

Layer-boundary ties go to the outer region: |s| == eps_i selects layer
i+1 (or mode 0 at the top), because the barrier of layer i is undefined
exactly at its own threshold.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Optional

from .barrier import barrier_k
from .config import ControllerConfig, GainState, Mode


@dataclass(frozen=True, slots=True)
class SchedulerState:
    """Scheduler memory carried between samples.

    ``a0_latched`` is true from the moment mode 0 engages until the
    trajectory first enters the innermost layer; while set, the in-between
    bands keep using dynamic adaptation instead of their barrier.
    ``prev_abs_s`` records the previous |s| sample for introspection.
    """

    gains: GainState
    prev_abs_s: Optional[float] = None
    a0_latched: bool = False


def initial_scheduler_state(cfg: ControllerConfig) -> SchedulerState:
    gains = GainState(
        k1d=cfg.k1d_init, k2d=cfg.k2d_init,
        k1=cfg.k1d_init, k2=cfg.k2d_init,
        mode=Mode(0),
    )
    return SchedulerState(gains=gains, prev_abs_s=None, a0_latched=False)


def select_mode(abs_s: float, prev: SchedulerState, layers: tuple[float, ...]) -> Mode:
    """Pick the gain-modulation mode for the current |s| sample.

    Deterministic in (abs_s, latch, layers): mode 0 above the outermost
    threshold or anywhere above the innermost one while the approach latch
    is set; layer i inside its band otherwise; layer 1 below the innermost
    threshold, which also ends the approach phase.
    """
    if abs_s < 0.0:
        raise ValueError("abs_s must be >= 0")
    n = len(layers)
    idx = bisect_right(layers, abs_s)  # thresholds <= abs_s, ties go outward
    if idx == n:
        return Mode(0)
    if idx == 0:
        return Mode(1)
    return Mode(0) if prev.a0_latched else Mode(idx + 1)


def step_gains(
    state: SchedulerState,
    abs_s: float,
    sdot_est: float,
    mode: Mode,
    cfg: ControllerConfig,
) -> SchedulerState:
    """Advance the dynamic gains one sample and resolve the applied gains.

    Mode 0 integrates the growth laws k1d' = k1d/|s'| and
    k2d' = k2d / (2 |s|^(1-alpha)) with explicit Euler, flooring |s'| at
    ``sdot_floor`` and |s| at the innermost threshold so a single sample
    cannot explode the update. If the grown pair lands within ``nu`` of the
    singular ratio k1 = k2/(k2-1), k1d is bumped by nu (disabled at nu=0).

    Barrier modes decay both dynamic gains by the factor (1 - T), clamped
    at ``gain_floor``, and apply the layer's barrier gains. The applied k1
    is additionally limited to eps_i^alpha / T: the largest gain whose
    one-sample integrator kick the layer can still absorb. The limit grows
    as T shrinks, recovering the exact barrier law in the limit.
    """
    T = cfg.dt
    k1d, k2d = state.gains.k1d, state.gains.k2d

    if mode.is_dynamic:
        k1d = k1d + T * k1d / max(sdot_est, cfg.sdot_floor)
        k2d = k2d + T * k2d / (2.0 * max(abs_s, cfg.layers[0]) ** (1.0 - cfg.alpha))
        if cfg.nu > 0.0 and k2d > 1.0 and abs(k1d - k2d / (k2d - 1.0)) < cfg.nu:
            k1d = k1d + cfg.nu
        k1, k2 = k1d, k2d
        latched = True
    else:
        k1d = max(k1d * (1.0 - T), cfg.gain_floor)
        k2d = max(k2d * (1.0 - T), cfg.gain_floor)
        eps_i = cfg.layers[mode.index - 1]
        assert abs_s < eps_i, "mode selection must keep |s| inside the layer"
        k1, _ = barrier_k(abs_s, eps_i, cfg.alpha)
        k1 = min(k1, eps_i ** cfg.alpha / T)
        k2 = k1 * k1
        latched = False if mode.index == 1 else state.a0_latched

    gains = GainState(k1d=k1d, k2d=k2d, k1=k1, k2=k2, mode=mode)
    return SchedulerState(gains=gains, prev_abs_s=abs_s, a0_latched=latched)
