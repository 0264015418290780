"""Barrier-function-adaptive super-twisting sliding-mode control simulator.

A small library plus CLI for simulating a perturbed integrator under a
non-homogeneous super-twisting controller whose gains are modulated by
nested positive-semidefinite barrier functions, with dynamic gain
adaptation outside the layered bands and Lyapunov-based diagnostics.
"""

from .barrier import (
    BarrierDomainError,
    BarrierEval,
    barrier_eval,
    barrier_k,
    h_alpha,
    omega_alpha,
    y_transform,
)
from .config import (
    ControllerConfig,
    GainState,
    Mode,
    TrajectoryRecord,
    ValidationResult,
    parse_config,
    validate_config,
)
from .controller import ControllerState, control, signed_power, step_integrator
from .lyapunov import (
    DiagnosticsReport,
    InsideLyapEval,
    OutsideLyapEval,
    barrier_window_constants,
    monitor_decrease,
    sigma_sat,
    v_inside,
    v_outside,
)
from .scheduler import SchedulerState, initial_scheduler_state, select_mode, step_gains
from .simulate import (
    PerturbationSpec,
    SimulationError,
    SimulationOverflowError,
    SinusoidSchedule,
    StepTrain,
    TablePerturbation,
    Trajectory,
    parse_scenario,
    perturbation,
    plant_step,
    run_simulation,
)

__version__ = "0.1.0"

__all__ = [
    "BarrierDomainError", "BarrierEval", "barrier_eval", "barrier_k",
    "h_alpha", "omega_alpha", "y_transform",
    "ControllerConfig", "GainState", "Mode", "TrajectoryRecord",
    "ValidationResult", "parse_config", "validate_config",
    "ControllerState", "control", "signed_power", "step_integrator",
    "DiagnosticsReport", "InsideLyapEval", "OutsideLyapEval",
    "barrier_window_constants", "monitor_decrease", "sigma_sat",
    "v_inside", "v_outside",
    "SchedulerState", "initial_scheduler_state", "select_mode", "step_gains",
    "PerturbationSpec", "SimulationError", "SimulationOverflowError",
    "SinusoidSchedule", "StepTrain", "TablePerturbation", "Trajectory",
    "parse_scenario", "perturbation", "plant_step", "run_simulation",
]
