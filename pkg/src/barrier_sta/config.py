"""Configuration schema, shared domain types, and validation.

Every quantity is dimensionless except times, which are in seconds. The
config mirrors the default two-layer simulation setup: inner accuracy
band 1e-4, outer band 1e-1, 10 s horizon at a 1e-4 s sample period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Optional

#: Keys accepted at the top level of a config file. Anything else is rejected.
CONFIG_KEYS = (
    "alpha", "gamma", "nu", "dt", "horizon", "layers",
    "sdot_floor", "gain_floor", "k1d_init", "k2d_init", "s0", "v0",
    "scenario",
)


@dataclass(frozen=True)
class ControllerConfig:
    """Immutable controller/simulation parameters.

    ``layers`` holds the accuracy thresholds, strictly increasing; the last
    entry is the worst acceptable bound where dynamic adaptation takes over.
    ``u_max`` optionally saturates the control signal; it is a programmatic
    knob only and not part of the config-file schema.
    """

    alpha: float = 0.5
    layers: tuple[float, ...] = (1e-4, 1e-1)
    dt: float = 1e-4
    gamma: float = 2.0
    nu: float = 1e-3
    sdot_floor: float = 1e-6
    gain_floor: float = 1e-6
    k1d_init: float = 1.0
    k2d_init: float = 1.0
    s0: float = 0.5
    v0: float = 0.0
    horizon: float = 10.0
    u_max: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(float(x) for x in self.layers))


@dataclass(frozen=True, slots=True)
class Mode:
    """Gain-modulation mode: index 0 is dynamic adaptation, index i >= 1
    is barrier modulation on layer i."""

    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"mode index must be >= 0, got {self.index}")

    @property
    def is_dynamic(self) -> bool:
        return self.index == 0

    @property
    def label(self) -> str:
        return f"A{self.index}"


@dataclass(frozen=True, slots=True)
class GainState:
    """Dynamic-adaptation gains plus the gains actually applied this sample.

    In dynamic mode the applied pair equals (k1d, k2d); in barrier mode
    k2 is k1 squared, bit-exactly.
    """

    k1d: float
    k2d: float
    k1: float
    k2: float
    mode: Mode


@dataclass(slots=True)
class TrajectoryRecord:
    """One simulation sample.

    ``delta`` is the perturbation rate where it exists analytically and
    ``None`` at step discontinuities. ``v_out`` is the outside-barrier
    Lyapunov value, present only while mode 0 is active.
    """

    t: float
    s: float
    u: float
    v: float
    k1: float
    k2: float
    mode: int
    d: float
    delta: Optional[float]
    v_out: Optional[float]


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    errors: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()


def _finite(x) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x)


def validate_config(cfg: ControllerConfig) -> ValidationResult:
    """Check a configuration against the schema invariants.

    Pure: the same config always yields the same result. A config that
    passes here is accepted by ``run_simulation`` without precondition
    failures. ``alpha`` outside (0, 1) is legal but flagged with a warning
    because the finite-time reaching analysis only covers that range.
    """
    errors = []
    warnings = []

    if not cfg.layers:
        errors.append("layers: at least one threshold is required")
    else:
        if any(not _finite(e) or e <= 0.0 for e in cfg.layers):
            errors.append("layers: thresholds must be finite and > 0")
        elif any(b <= a for a, b in zip(cfg.layers, cfg.layers[1:])):
            errors.append("layers: thresholds must be strictly increasing")

    if not _finite(cfg.dt) or cfg.dt <= 0.0:
        errors.append("dt: must be > 0")
    if not _finite(cfg.horizon) or (_finite(cfg.dt) and cfg.dt > 0.0 and cfg.horizon < cfg.dt):
        errors.append("horizon: must be >= dt")
    if not _finite(cfg.nu) or cfg.nu < 0.0:
        errors.append("nu: must be >= 0")
    if not _finite(cfg.sdot_floor) or cfg.sdot_floor <= 0.0:
        errors.append("sdot_floor: must be > 0")
    if not _finite(cfg.gain_floor) or cfg.gain_floor <= 0.0:
        errors.append("gain_floor: must be > 0")
    if not _finite(cfg.gamma) or cfg.gamma <= 0.0:
        errors.append("gamma: must be > 0")
    if not _finite(cfg.k1d_init) or cfg.k1d_init <= 0.0:
        errors.append("k1d_init: must be > 0")
    if not _finite(cfg.k2d_init) or cfg.k2d_init <= 0.0:
        errors.append("k2d_init: must be > 0")
    if not _finite(cfg.s0):
        errors.append("s0: must be finite")
    if not _finite(cfg.v0):
        errors.append("v0: must be finite")
    if cfg.u_max is not None and (not _finite(cfg.u_max) or cfg.u_max <= 0.0):
        errors.append("u_max: must be > 0 when set")

    if not _finite(cfg.alpha) or cfg.alpha <= 0.0:
        errors.append("alpha: must be > 0")
    elif not (0.0 < cfg.alpha < 1.0):
        warnings.append(
            f"alpha outside proof range (0, 1): alpha={cfg.alpha!r}; "
            "finite-time reaching is not guaranteed"
        )

    return ValidationResult(ok=not errors, errors=tuple(errors), warnings=tuple(warnings))


def parse_config(data: dict) -> ControllerConfig:
    """Build a ControllerConfig from a parsed config-file mapping.

    Unknown top-level keys are rejected. Missing keys fall back to the
    defaults above, so a minimal file (or none at all) is runnable.
    The ``scenario`` sub-object is handled by the perturbation parser.
    """
    unknown = sorted(set(data) - set(CONFIG_KEYS))
    if unknown:
        raise KeyError(f"unknown config keys: {', '.join(unknown)}")

    kwargs = {}
    for f in fields(ControllerConfig):
        if f.name == "u_max":
            continue
        if f.name in data:
            value = data[f.name]
            kwargs[f.name] = tuple(value) if f.name == "layers" else float(value)
    return ControllerConfig(**kwargs)
