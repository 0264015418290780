"""Perturbed-integrator plant, perturbation generators, and the simulation loop.

The plant is s' = u + d(t), discretized with explicit Euler on the
controller's sample clock. Three perturbation shapes cover the benchmark
scenarios: a square-pulse train (steps), a phase-continuous sinusoid with
scheduled frequency changes, and a linearly interpolated sample table.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

from .config import ControllerConfig, Mode, TrajectoryRecord, validate_config
from .controller import ControllerState, control, signed_power, step_integrator
from .lyapunov import v_outside
from .scheduler import initial_scheduler_state, select_mode, step_gains

#: Relative time tolerance (in units of the pulse period) for flagging a
#: sample as sitting on a step discontinuity.
_EDGE_TOL = 1e-9

_MACH_EPS = 2.220446049250313e-16


class SimulationError(RuntimeError):
    pass


class SimulationOverflowError(SimulationError):
    """A state variable left the representable range; names the first bad sample."""

    def __init__(self, name: str, index: int, t: float):
        self.name = name
        self.index = index
        self.t = t
        super().__init__(f"numerical overflow ({name}) at sample {index} (t={t!r})")


@dataclass(frozen=True)
class StepTrain:
    """Square pulse train: high at ``amplitude`` for the first ``duty``
    fraction of each period, zero otherwise, starting high at t = 0."""

    amplitude: float = 100.0
    period: float = 2.0
    duty: float = 0.5

    def __post_init__(self):
        if self.period <= 0.0:
            raise ValueError("period must be > 0")
        if not (0.0 < self.duty < 1.0):
            raise ValueError("duty must be in (0, 1)")


@dataclass(frozen=True)
class SinusoidSchedule:
    """Sinusoid with piecewise-constant frequency and continuous phase.

    ``schedule`` lists (t_start, frequency_hz) segments, strictly increasing
    in time and starting at t = 0. Phase accumulates across boundaries, so
    d(t) is continuous and its rate is 2*pi*f_i*amplitude*cos(phase).
    """

    amplitude: float = 1.0
    schedule: tuple[tuple[float, float], ...] = ((0.0, 1.0), (2.0, 1.0), (5.0, 5.0), (7.0, 10.0))

    def __post_init__(self):
        sched = tuple((float(t), float(f)) for t, f in self.schedule)
        object.__setattr__(self, "schedule", sched)
        if not sched:
            raise ValueError("schedule must not be empty")
        if sched[0][0] != 0.0:
            raise ValueError("schedule must start at t = 0")
        times = [t for t, _ in sched]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("schedule times must be strictly increasing")

    def segment_phases(self) -> tuple[float, ...]:
        """Accumulated phase at each segment start, beginning at zero."""
        phases = [0.0]
        for (t0, f0), (t1, _) in zip(self.schedule, self.schedule[1:]):
            phases.append(phases[-1] + 2.0 * math.pi * f0 * (t1 - t0))
        return tuple(phases)


@dataclass(frozen=True)
class TablePerturbation:
    """Sampled perturbation with linear interpolation between knots.

    Outside the table range the endpoint value is held with zero rate. At a
    knot the right-hand segment's slope is reported.
    """

    samples: tuple[tuple[float, float], ...]

    def __post_init__(self):
        samp = tuple((float(t), float(d)) for t, d in self.samples)
        object.__setattr__(self, "samples", samp)
        if not samp:
            raise ValueError("table must not be empty")
        times = [t for t, _ in samp]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("table times must be strictly increasing")
        if any(not math.isfinite(t) or not math.isfinite(d) for t, d in samp):
            raise ValueError("table entries must be finite")


PerturbationSpec = Union[StepTrain, SinusoidSchedule, TablePerturbation]


@lru_cache(maxsize=64)
def _segment_phases(spec: SinusoidSchedule) -> tuple[float, ...]:
    return spec.segment_phases()


@lru_cache(maxsize=64)
def _knot_times(spec: PerturbationSpec) -> tuple[float, ...]:
    if isinstance(spec, SinusoidSchedule):
        return tuple(seg[0] for seg in spec.schedule)
    return tuple(p[0] for p in spec.samples)


def perturbation(spec: PerturbationSpec, t: float) -> tuple[float, Optional[float]]:
    """Evaluate (d(t), rate) for a perturbation spec at time t >= 0.

    The rate is the analytic derivative where d is differentiable and
    ``None`` on a step-train discontinuity, where it is impulse-like and
    has no finite value.
    """
    if t < 0.0:
        raise ValueError("t must be >= 0")

    if isinstance(spec, StepTrain):
        cycles = t / spec.period
        frac = cycles - math.floor(cycles)
        # Right-continuous at both edges: a sample sitting on a rising edge
        # reads high, on a falling edge low; either way the rate is undefined.
        if frac < _EDGE_TOL or frac > 1.0 - _EDGE_TOL:
            return spec.amplitude, None
        if abs(frac - spec.duty) < _EDGE_TOL:
            return 0.0, None
        return (spec.amplitude, 0.0) if frac < spec.duty else (0.0, 0.0)

    if isinstance(spec, SinusoidSchedule):
        i = max(bisect_right(_knot_times(spec), t) - 1, 0)
        t_i, f_i = spec.schedule[i]
        theta = _segment_phases(spec)[i] + 2.0 * math.pi * f_i * (t - t_i)
        d = spec.amplitude * math.sin(theta)
        delta = 2.0 * math.pi * f_i * spec.amplitude * math.cos(theta)
        return d, delta

    if isinstance(spec, TablePerturbation):
        samp = spec.samples
        if t <= samp[0][0]:
            return samp[0][1], 0.0
        if t >= samp[-1][0]:
            return samp[-1][1], 0.0
        i = bisect_right(_knot_times(spec), t) - 1
        t0, d0 = samp[i]
        t1, d1 = samp[i + 1]
        slope = (d1 - d0) / (t1 - t0)
        return d0 + slope * (t - t0), slope

    raise TypeError(f"unknown perturbation spec: {type(spec).__name__}")


def plant_step(s: float, u: float, d: float, dt: float) -> float:
    """One Euler step of the perturbed integrator: s + dt * (u + d)."""
    if dt <= 0.0:
        raise ValueError("dt must be > 0")
    return s + dt * (u + d)


@dataclass(frozen=True)
class Trajectory:
    """Recorded closed-loop run plus the exact inputs that produced it."""

    records: tuple[TrajectoryRecord, ...]
    config_echo: tuple[ControllerConfig, PerturbationSpec]

    def __len__(self) -> int:
        return len(self.records)


def run_simulation(cfg: ControllerConfig, spec: PerturbationSpec) -> Trajectory:
    """Run the closed loop from t = 0 to the horizon and record every sample.

    Each tick applies, in order: mode selection, gain update, control law,
    integrator update, plant step. The recorded increments are checked
    against the closed-loop identity (s_{k+1} - s_k)/T = -k1 |s|^a sgn(s) + phi
    with phi = v + d; any state leaving the finite range aborts the run.
    Deterministic: identical inputs produce bit-identical trajectories.
    """
    result = validate_config(cfg)
    if not result.ok:
        raise ValueError("invalid config: " + "; ".join(result.errors))

    dt = cfg.dt
    alpha = cfg.alpha
    layers = cfg.layers
    n = int(round(cfg.horizon / dt)) + 1

    s = cfg.s0
    ctrl = ControllerState(v=cfg.v0, scheduler=initial_scheduler_state(cfg))
    prev_s: Optional[float] = None
    records: list[TrajectoryRecord] = []

    for k in range(n):
        t = k * dt
        d, delta = perturbation(spec, t)
        abs_s = abs(s)

        try:
            mode = select_mode(abs_s, ctrl.scheduler, layers)
            sdot_est = 0.0 if prev_s is None else abs(s - prev_s) / dt
            sched = step_gains(ctrl.scheduler, abs_s, sdot_est, mode, cfg)
            k1, k2 = sched.gains.k1, sched.gains.k2
            ctrl = ControllerState(v=ctrl.v, scheduler=sched, last_u=ctrl.last_u)

            v_now = ctrl.v
            u = control(s, ctrl, k1, alpha)
            clamped = False
            if cfg.u_max is not None and abs(u) > cfg.u_max:
                u = math.copysign(cfg.u_max, u)
                clamped = True

            v_out = None
            if mode.is_dynamic:
                v_out = v_outside(s, v_now + d, k1, k2, cfg.gamma, alpha).v_value

            records.append(TrajectoryRecord(
                t=t, s=s, u=u, v=v_now, k1=k1, k2=k2,
                mode=mode.index, d=d, delta=delta, v_out=v_out,
            ))

            ctrl = step_integrator(ctrl, s, k2, dt)
            if ctrl.last_u != u:
                ctrl = ControllerState(v=ctrl.v, scheduler=sched, last_u=u)
            s_next = plant_step(s, u, d, dt)
        except OverflowError as exc:
            # float pow raises instead of returning inf
            raise SimulationOverflowError("arithmetic range", k, t) from exc

        for name, value in (("s", s_next), ("v", ctrl.v), ("u", u), ("k1", k1), ("k2", k2)):
            if not math.isfinite(value):
                raise SimulationOverflowError(name, k, t)

        if not clamped:
            lhs = (s_next - s) / dt
            rhs = -k1 * signed_power(s, alpha) + (v_now + d)
            tol = 1e-12 * max(1.0, abs(lhs), abs(rhs)) + 4.0 * _MACH_EPS * (abs(s) + abs(s_next)) / dt
            if abs(lhs - rhs) > tol:
                raise SimulationError(
                    f"closed-loop identity violated at sample {k} (t={t!r}): "
                    f"residual {abs(lhs - rhs)!r}"
                )

        prev_s = s
        s = s_next

    return Trajectory(records=tuple(records), config_echo=(cfg, spec))


def parse_scenario(data: dict) -> PerturbationSpec:
    """Build a perturbation spec from a config-file ``scenario`` mapping."""
    if not isinstance(data, dict):
        raise TypeError("scenario must be a mapping")
    known = {"kind", "amplitude", "period", "duty", "schedule", "table"}
    unknown = sorted(set(data) - known)
    if unknown:
        raise KeyError(f"unknown scenario keys: {', '.join(unknown)}")
    kind = data.get("kind")
    if kind == "steps":
        kwargs = {k: float(data[k]) for k in ("amplitude", "period", "duty") if k in data}
        return StepTrain(**kwargs)
    if kind == "sinusoid":
        kwargs = {}
        if "amplitude" in data:
            kwargs["amplitude"] = float(data["amplitude"])
        if "schedule" in data:
            kwargs["schedule"] = tuple((float(t), float(f)) for t, f in data["schedule"])
        return SinusoidSchedule(**kwargs)
    if kind == "table":
        if "table" not in data:
            raise KeyError("table scenario requires a 'table' array")
        return TablePerturbation(samples=tuple((float(t), float(d)) for t, d in data["table"]))
    raise ValueError(f"unknown scenario kind: {kind!r}")
