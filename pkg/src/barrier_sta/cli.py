"""Command-line interface: scenario runs, layer comparisons, and self-tests.

Exit codes: 0 success, 1 configuration problem, 2 numerical overflow
during simulation, 3 identity self-test failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from . import selftest
from .config import CONFIG_KEYS, parse_config, validate_config
from .lyapunov import monitor_decrease
from .simulate import (
    SimulationOverflowError,
    Trajectory,
    parse_scenario,
    run_simulation,
)

CSV_HEADER = "t,s,u,v,k1,k2,mode,d,delta,V_out"

BUNDLED_SCENARIOS = {
    "steps": {"kind": "steps", "amplitude": 100.0, "period": 2.0, "duty": 0.5},
    "sinusoid": {
        "kind": "sinusoid",
        "amplitude": 1.0,
        "schedule": [[0.0, 1.0], [2.0, 1.0], [5.0, 5.0], [7.0, 10.0]],
    },
}

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_OVERFLOW = 2
EXIT_SELFTEST = 3


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class RunManifest:
    command: str
    config_path: Optional[str] = None
    output_path: Optional[str] = None
    overrides: tuple[str, ...] = ()
    scenario: Optional[str] = None
    inject_fault: bool = False


def _parse_override_value(raw: str):
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def apply_overrides(data: dict, overrides: tuple[str, ...]) -> dict:
    """Apply ``key=value`` pairs over a config mapping.

    Keys are either top-level config keys or dotted ``scenario.*`` keys;
    anything else is rejected so sweep scripts fail fast on typos.
    """
    out = json.loads(json.dumps(data))  # deep copy, JSON-typed
    for item in overrides:
        if "=" not in item:
            raise ManifestError(f"override {item!r} is not of the form key=value")
        key, raw = item.split("=", 1)
        value = _parse_override_value(raw)
        if key.startswith("scenario."):
            sub = key.split(".", 1)[1]
            if sub not in {"kind", "amplitude", "period", "duty", "schedule", "table"}:
                raise ManifestError(f"override references unknown scenario key: {sub!r}")
            out.setdefault("scenario", {})[sub] = value
        elif key in CONFIG_KEYS and key != "scenario":
            out[key] = value
        else:
            raise ManifestError(f"override references unknown config key: {key!r}")
    return out


def load_manifest_config(manifest: RunManifest) -> tuple[dict, object, object]:
    """Resolve defaults, file, bundled scenario, and overrides into a
    validated (raw mapping, ControllerConfig, PerturbationSpec) triple."""
    data: dict = {}
    if manifest.config_path:
        with open(manifest.config_path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ManifestError("config file must contain a JSON object")

    if manifest.scenario is not None:
        if manifest.scenario not in BUNDLED_SCENARIOS:
            raise ManifestError(
                f"unknown bundled scenario {manifest.scenario!r}; "
                f"available: {', '.join(sorted(BUNDLED_SCENARIOS))}"
            )
        data = dict(data)
        data["scenario"] = json.loads(json.dumps(BUNDLED_SCENARIOS[manifest.scenario]))

    data = apply_overrides(data, manifest.overrides)
    scenario_data = data.get("scenario", BUNDLED_SCENARIOS["steps"])

    cfg = parse_config(data)
    result = validate_config(cfg)
    for warning in result.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    if not result.ok:
        raise ManifestError("; ".join(result.errors))
    spec = parse_scenario(scenario_data)
    return data, cfg, spec


def _format_field(value) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return repr(value)


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_trajectory_csv(traj: Trajectory, path: Path) -> None:
    """Write records with full round-trip float formatting; sentinel fields
    (undefined rate, Lyapunov value outside dynamic mode) stay empty."""
    lines = [CSV_HEADER]
    for r in traj.records:
        lines.append(",".join((
            repr(r.t), repr(r.s), repr(r.u), repr(r.v), repr(r.k1), repr(r.k2),
            str(r.mode), repr(r.d), _format_field(r.delta), _format_field(r.v_out),
        )))
    _atomic_write(path, "\n".join(lines) + "\n")


def _write_diagnostics(traj: Trajectory, cfg, csv_path: Path):
    report = monitor_decrease(traj, cfg.gamma, cfg.alpha)
    diag_path = csv_path.with_name(csv_path.name + ".diag")
    _atomic_write(diag_path, report.to_json() + "\n")
    return diag_path, report


def cmd_run(manifest: RunManifest) -> int:
    try:
        _, cfg, spec = load_manifest_config(manifest)
    except (ManifestError, KeyError, ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out_path = Path(manifest.output_path or "trajectory.csv")
    try:
        traj = run_simulation(cfg, spec)
    except SimulationOverflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW

    write_trajectory_csv(traj, out_path)
    diag_path, report = _write_diagnostics(traj, cfg, out_path)
    print(f"wrote {len(traj.records)} samples to {out_path}")
    print(f"diagnostics: {diag_path} (reach_time={report.reach_time!r})")
    return EXIT_OK


def cmd_compare(manifest: RunManifest) -> int:
    """Run a scenario with the full layer stack and with only the innermost
    layer, then summarize late-phase dynamic-mode activity for both."""
    try:
        _, cfg, spec = load_manifest_config(manifest)
        if len(cfg.layers) < 2:
            raise ManifestError("compare requires a config with at least two layers")
    except (ManifestError, KeyError, ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out = Path(manifest.output_path or "compare.csv")
    stem = out.name[:-4] if out.name.endswith(".csv") else out.name
    single_path = out.with_name(f"{stem}_single.csv")
    double_path = out.with_name(f"{stem}_double.csv")
    summary_path = out.with_name(f"{stem}_summary.json")

    single_cfg = replace(cfg, layers=(cfg.layers[0],))
    summary = {}
    try:
        for tag, run_cfg, path in (
            ("single", single_cfg, single_path),
            ("double", cfg, double_path),
        ):
            traj = run_simulation(run_cfg, spec)
            write_trajectory_csv(traj, path)
            _write_diagnostics(traj, run_cfg, path)
            summary[tag] = _late_phase_summary(traj, run_cfg)
            summary[tag]["csv"] = str(path)
    except SimulationOverflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW

    _atomic_write(summary_path, json.dumps(summary, indent=2) + "\n")
    for tag in ("single", "double"):
        info = summary[tag]
        print(
            f"{tag}: dynamic-mode activations after 1 s = {info['a0_activations_after_1s']}, "
            f"max |s| after 1 s = {info['max_abs_s_after_1s']!r}"
        )
    print(f"summary: {summary_path}")
    return EXIT_OK


def _late_phase_summary(traj: Trajectory, cfg) -> dict:
    activations = 0
    max_abs_s = 0.0
    prev_mode = None
    for r in traj.records:
        if r.t > 1.0:
            if r.mode == 0 and prev_mode is not None and prev_mode != 0:
                activations += 1
            max_abs_s = max(max_abs_s, abs(r.s))
        prev_mode = r.mode
    return {"a0_activations_after_1s": activations, "max_abs_s_after_1s": max_abs_s}


def cmd_selftest(manifest: RunManifest) -> int:
    results = selftest.run_all(inject_fault=manifest.inject_fault)
    all_ok = True
    lines = []
    for res in results:
        status = "ok" if res.ok else "FAIL"
        line = (
            f"{status:4s} {res.name}: max residual {res.max_residual:.3e} "
            f"(tolerance {res.tolerance:.1e})"
        )
        if not res.ok:
            line += f" at {res.worst_point}"
            all_ok = False
        lines.append(line)
        print(line)

    if manifest.output_path:
        _atomic_write(Path(manifest.output_path), "\n".join(lines) + "\n")
    if not all_ok:
        worst = next(r for r in results if not r.ok)
        print(f"error: identity {worst.name!r} failed at {worst.worst_point}", file=sys.stderr)
        return EXIT_SELFTEST
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="barrier-sta",
        description="Barrier-adaptive super-twisting sliding-mode control simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", dest="config_path", default=None,
                       help="JSON config file (defaults are used when omitted)")
        p.add_argument("--out", dest="output_path", default=None,
                       help="output path (CSV for run/compare, report for selftest)")
        p.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE",
                       help="override a config key (dotted scenario.* keys allowed)")
        p.add_argument("--scenario", dest="scenario", default=None,
                       choices=sorted(BUNDLED_SCENARIOS),
                       help="use a bundled scenario")

    run_p = sub.add_parser("run", help="simulate one scenario and write a CSV")
    common(run_p)
    cmp_p = sub.add_parser("compare", help="single- vs multi-layer comparison")
    common(cmp_p)
    self_p = sub.add_parser("selftest", help="run the algebraic identity suites")
    common(self_p)
    self_p.add_argument("--inject-fault", action="store_true",
                        help="perturb the gain-square identity (testing hook)")
    return parser


def manifest_from_args(args: argparse.Namespace) -> RunManifest:
    return RunManifest(
        command=args.command,
        config_path=args.config_path,
        output_path=args.output_path,
        overrides=tuple(args.overrides),
        scenario=args.scenario,
        inject_fault=getattr(args, "inject_fault", False),
    )


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    manifest = manifest_from_args(args)
    if manifest.command == "run":
        return cmd_run(manifest)
    if manifest.command == "compare":
        return cmd_compare(manifest)
    if manifest.command == "selftest":
        return cmd_selftest(manifest)
    raise AssertionError(f"unreachable command {manifest.command!r}")


if __name__ == "__main__":
    sys.exit(main())
