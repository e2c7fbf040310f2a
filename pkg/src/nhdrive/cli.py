"""Command-line front end: synthesize / simulate / check / compare / sweep.

Reads a flat INI-style config (sections [schedule], [gamma], [run], [guards],
[check]), applies repeatable --set section.key=value overrides, and writes
plot-ready CSV traces and JSON reports into the output directory. Floats are
emitted with 17 significant digits and LF line endings, so identical configs
produce byte-identical files.

Exit codes: 0 success, 2 parameter/singularity failure, 3 numerical failure,
64 usage error.
"""

from __future__ import annotations

import argparse
import configparser
import itertools
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import adiabaticity, dynamics
from . import design as design_mod
from .biortho import check_biorthogonality
from .design import DEFAULT_GUARDS, SingularityGuards
from .errors import (
    ConsistencyViolation,
    GridTooCoarse,
    NhdriveError,
    StepSizeUnderflow,
    SynthesisSingularity,
)
from .schedules import GammaSpec, RhoThetaParams, eval_alpha, eval_gamma, eval_rho_theta

__all__ = [
    "RunConfig",
    "SingularityGuards",
    "UsageError",
    "ParameterSetUnusable",
    "load_config",
    "run_synthesize",
    "run_simulate",
    "run_check",
    "run_compare",
    "run_sweep",
    "main",
]

EXIT_OK = 0
EXIT_PARAM = 2
EXIT_NUMERIC = 3
EXIT_USAGE = 64

# fraction of max |Delta_E| below which a sample counts as gap-degenerate,
# and the run fraction the longest such stretch must exceed to warn
DELTA_LOW_FRACTION = 0.02
DELTA_STRETCH_WARN = 0.25


class UsageError(NhdriveError, ValueError):
    """Bad command line or config contents."""


class ParameterSetUnusable(NhdriveError, ValueError):
    """The configured parameter set produces mostly singular output."""


@dataclass(frozen=True)
class RunConfig:
    schedule: RhoThetaParams
    gamma: GammaSpec
    mode: str = "dissipative"
    re_delta_e: float = 100.0
    lambda_mode: str = "tan_alpha"
    initial_state: str = "eigenvector"
    t_end: float = 1.5 * math.pi
    samples: int = 4001
    rtol: float = 1e-9
    guards: SingularityGuards = DEFAULT_GUARDS
    output_dir: Path = Path("out")
    coupling_threshold: float = 1e-9
    propagator_threshold: float = 1e-9
    tracking_threshold: float = 1e-6

    def __post_init__(self) -> None:
        if self.mode not in ("dissipative", "simple"):
            raise UsageError(f"run.mode must be dissipative|simple, got {self.mode!r}")
        if self.lambda_mode not in ("tan_alpha", "constant"):
            raise UsageError(
                f"run.lambda_mode must be tan_alpha|constant, got {self.lambda_mode!r}"
            )
        if self.initial_state not in ("eigenvector", "bare_approx"):
            raise UsageError(
                "run.initial_state must be eigenvector|bare_approx, "
                f"got {self.initial_state!r}"
            )
        if self.samples < 2:
            raise UsageError(f"run.samples must be >= 2, got {self.samples}")
        if not self.t_end > 0.0:
            raise UsageError(f"run.t_end must be > 0, got {self.t_end}")
        if not 1e-13 < self.rtol < 1e-3:
            raise UsageError(f"run.rtol must lie in (1e-13, 1e-3), got {self.rtol}")

    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.t_end, self.samples)


_DEFAULTS: dict[str, dict[str, str]] = {
    "schedule": {
        "o": "0.01",
        "xi": repr(0.4 * math.pi),
        "mu": "0.5",
        "zeta": repr(0.08 * math.pi),
        "nu": "0.5",
    },
    "gamma": {
        "mode": "constant",
        "value": "100.0",
        "omega_prime": "100.0",
        "t0": repr(math.pi),
        "T": repr(math.sqrt(2.0)),
    },
    "run": {
        "mode": "dissipative",
        "re_delta_e": "100.0",
        "lambda_mode": "tan_alpha",
        "initial_state": "eigenvector",
        "t_end": repr(1.5 * math.pi),
        "samples": "4001",
        "rtol": "1e-9",
        "output_dir": "out",
    },
    "guards": {
        "omega1_floor": "1e-6",
        "cos_alpha_floor": "1e-6",
        "det_floor": "1e-10",
    },
    "check": {
        "coupling_threshold": "1e-9",
        "propagator_threshold": "1e-9",
        "tracking_threshold": "1e-6",
    },
}


def _parser_with_defaults() -> configparser.ConfigParser:
    cp = configparser.ConfigParser()
    cp.optionxform = str  # keep key case (the Gaussian width key is "T")
    cp.read_dict(_DEFAULTS)
    return cp


def load_config(
    path: str | Path | None = None,
    overrides: Sequence[str] = (),
    output_dir: str | Path | None = None,
) -> RunConfig:
    """Parse the config file (optional), apply --set overrides, validate."""
    cp = _parser_with_defaults()
    if path is not None:
        read = cp.read(str(path))
        if not read:
            raise UsageError(f"config file not found: {path}")
    for item in overrides:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise UsageError(f"--set expects section.key=value, got {item!r}")
        key, value = item.split("=", 1)
        section, option = key.split(".", 1)
        if section not in cp or option not in cp[section]:
            raise UsageError(f"unknown config key {key!r}")
        cp[section][option] = value

    def fval(section: str, key: str) -> float:
        try:
            return float(cp[section][key])
        except ValueError as exc:
            raise UsageError(f"{section}.{key} is not a number: {cp[section][key]!r}") from exc

    try:
        schedule = RhoThetaParams(
            o=fval("schedule", "o"),
            xi=fval("schedule", "xi"),
            mu=fval("schedule", "mu"),
            zeta=fval("schedule", "zeta"),
            nu=fval("schedule", "nu"),
        )
        gmode = cp["gamma"]["mode"]
        if gmode == "constant":
            gamma = GammaSpec.constant(fval("gamma", "value"))
        elif gmode == "gaussian":
            gamma = GammaSpec.gaussian(
                fval("gamma", "omega_prime"), fval("gamma", "t0"), fval("gamma", "T")
            )
        else:
            raise UsageError(f"gamma.mode must be constant|gaussian, got {gmode!r}")
        guards = SingularityGuards(
            omega1_floor=fval("guards", "omega1_floor"),
            cos_alpha_floor=fval("guards", "cos_alpha_floor"),
            det_floor=fval("guards", "det_floor"),
        )
        try:
            samples = int(cp["run"]["samples"])
        except ValueError as exc:
            raise UsageError(f"run.samples is not an integer: {cp['run']['samples']!r}") from exc
        out = Path(output_dir) if output_dir is not None else Path(cp["run"]["output_dir"])
        return RunConfig(
            schedule=schedule,
            gamma=gamma,
            mode=cp["run"]["mode"],
            re_delta_e=fval("run", "re_delta_e"),
            lambda_mode=cp["run"]["lambda_mode"],
            initial_state=cp["run"]["initial_state"],
            t_end=fval("run", "t_end"),
            samples=samples,
            rtol=fval("run", "rtol"),
            guards=guards,
            output_dir=out,
            coupling_threshold=fval("check", "coupling_threshold"),
            propagator_threshold=fval("check", "propagator_threshold"),
            tracking_threshold=fval("check", "tracking_threshold"),
        )
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_csv(path: Path, header: str, rows: list[list[float]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _initial_state(cfg: RunConfig) -> np.ndarray:
    if cfg.initial_state == "bare_approx":
        o = cfg.schedule.o
        return np.array([math.sqrt(1.0 - o * o), o], dtype=complex)
    frame = design_mod.eigenframe_two_level(
        eval_alpha(cfg.schedule, 0.0), cfg.guards.cos_alpha_floor
    )
    phi1 = frame.right_vector(0)
    return phi1 / np.linalg.norm(phi1)


def _longest_true_run(flags: np.ndarray) -> int:
    best = cur = 0
    for f in flags:
        cur = cur + 1 if f else 0
        best = max(best, cur)
    return best


def run_synthesize(cfg: RunConfig) -> dict:
    """Write fields.csv and design.csv; return the synthesis summary.

    Singular samples become rows flagged singular=1 instead of aborting; a
    parameter set with more than half its samples singular raises
    ParameterSetUnusable after the files are written (a pathological trace
    is still a displayable result).
    """
    grid = cfg.grid()
    designs = design_mod.design_trace(
        cfg.schedule,
        cfg.gamma,
        grid,
        guards=cfg.guards,
        mode=cfg.mode,
        re_delta_e=cfg.re_delta_e,
    )
    nan = float("nan")
    field_rows: list[list[float]] = []
    design_rows: list[list[float]] = []
    abs_de = np.full(len(grid), nan)
    max_field = 0.0
    n_singular = 0
    for k, (t, d) in enumerate(zip(grid, designs)):
        rho, theta, _, _ = eval_rho_theta(cfg.schedule, t)
        av = eval_alpha(cfg.schedule, t)
        g = eval_gamma(cfg.gamma, t)
        o1, o2, o3 = design_mod.omega_factors(rho, theta)
        if d is None:
            n_singular += 1
            field_rows.append([t] + [nan] * 9 + [g, 1.0])
            design_rows.append(
                [t, rho, theta, av.alpha.real, av.alpha.imag, o1, o2, o3]
                + [nan] * 4
                + [1.0]
            )
            continue
        fs = design_mod.field_components(d)
        abs_b = (abs(fs.b_x), abs(fs.b_y), abs(fs.b_z))
        max_field = max(max_field, *abs_b)
        abs_de[k] = abs(d.delta_e)
        field_rows.append(
            [
                t,
                fs.b_x.real,
                fs.b_x.imag,
                fs.b_y.real,
                fs.b_y.imag,
                fs.b_z.real,
                fs.b_z.imag,
                abs_b[0],
                abs_b[1],
                abs_b[2],
                d.gamma,
                0.0,
            ]
        )
        design_rows.append(
            [
                t,
                rho,
                theta,
                av.alpha.real,
                av.alpha.imag,
                d.omega1,
                d.omega2,
                d.omega3,
                d.delta_e.real,
                d.delta_e.imag,
                d.delta.real,
                d.delta.imag,
                0.0,
            ]
        )
    _write_csv(
        cfg.output_dir / "fields.csv",
        "t,re_bx,im_bx,re_by,im_by,re_bz,im_bz,abs_bx,abs_by,abs_bz,gamma,singular",
        field_rows,
    )
    _write_csv(
        cfg.output_dir / "design.csv",
        "t,rho,theta,re_alpha,im_alpha,omega1,omega2,omega3,"
        "re_delta_e,im_delta_e,re_delta,im_delta,singular",
        design_rows,
    )

    warnings: list[str] = []
    valid = ~np.isnan(abs_de)
    low_fraction = 0.0
    stretch_fraction = 0.0
    if np.any(valid):
        scale = float(np.max(abs_de[valid]))
        low = valid & (abs_de < DELTA_LOW_FRACTION * scale)
        low_fraction = float(np.mean(low))
        stretch_fraction = _longest_true_run(low) / len(grid)
        if stretch_fraction > DELTA_STRETCH_WARN:
            warnings.append(
                "consistency condition violated: |Delta_E| stays below "
                f"{DELTA_LOW_FRACTION:g} of its peak over "
                f"{100 * stretch_fraction:.0f}% of the run (eigenvalue gap "
                "effectively closed; this parameter set is problematic)"
            )
    summary = {
        "samples": len(grid),
        "singular_fraction": n_singular / len(grid),
        "max_field": max_field,
        "delta_low_fraction": low_fraction,
        "delta_low_stretch_fraction": stretch_fraction,
        "warnings": warnings,
    }
    if n_singular > 0.5 * len(grid):
        raise ParameterSetUnusable(
            f"{n_singular}/{len(grid)} samples are synthesis-singular; "
            "the configured schedules are unusable"
        )
    return summary


def _simulate(cfg: RunConfig):
    grid = cfg.grid()
    h_of_t = design_mod.hamiltonian_fn(
        cfg.schedule,
        cfg.gamma,
        guards=cfg.guards,
        mode=cfg.mode,
        lambda_mode=cfg.lambda_mode,
        re_delta_e=cfg.re_delta_e,
    )
    trace = dynamics.integrate_schrodinger(h_of_t, _initial_state(cfg), grid, cfg.rtol)
    pops = dynamics.relative_populations(trace)
    ideal = dynamics.ideal_population_trace(
        cfg.schedule, grid, cfg.guards.cos_alpha_floor
    )
    return trace, pops, ideal


def run_simulate(cfg: RunConfig) -> dict:
    """Integrate the configured run and write populations.csv."""
    trace, pops, ideal = _simulate(cfg)
    rows = [
        [t, pr1, pr2, pi1, pi2, ls]
        for t, pr1, pr2, pi1, pi2, ls in zip(
            trace.grid, pops.p1r, pops.p2r, ideal.p1r, ideal.p2r, trace.log_scale
        )
    ]
    _write_csv(
        cfg.output_dir / "populations.csv",
        "t,p1r_real,p2r_real,p1r_ideal,p2r_ideal,log_scale",
        rows,
    )
    metrics = dynamics.compare_real_ideal(pops, ideal)
    return {
        "samples": len(trace.grid),
        "sup_norm_vs_ideal": metrics.sup_norm,
        "crossings_real": list(metrics.crossings_real),
        "inversion_time": dynamics.inversion_time(pops),
        "final_log_scale": float(trace.log_scale[-1]),
    }


def _diagnostics(cfg: RunConfig, with_sim: bool = True):
    grid = cfg.grid()
    designs = design_mod.design_trace(
        cfg.schedule,
        cfg.gamma,
        grid,
        guards=cfg.guards,
        mode=cfg.mode,
        re_delta_e=cfg.re_delta_e,
    )
    n_singular = sum(d is None for d in designs)
    if n_singular:
        raise ParameterSetUnusable(
            f"{n_singular}/{len(grid)} samples are synthesis-singular; "
            "diagnostics need a fully valid trace"
        )
    frames = design_mod.frame_trace(
        cfg.schedule,
        grid,
        lambda_mode=cfg.lambda_mode,
        cos_alpha_floor=cfg.guards.cos_alpha_floor,
    )
    eigs = design_mod.eigenvalue_trace(designs)
    phases = design_mod.refined_phase_trace(
        cfg.schedule,
        cfg.gamma,
        grid,
        guards=cfg.guards,
        mode=cfg.mode,
        lambda_mode=cfg.lambda_mode,
        re_delta_e=cfg.re_delta_e,
    )
    sim = None
    if with_sim:
        sim, _, _ = _simulate(cfg)
    report = adiabaticity.adiabaticity_report(frames, phases, eigs, target=0, sim=sim)
    bio = max(check_biorthogonality(f) for f in frames.frames)
    return report, bio


def run_check(cfg: RunConfig) -> dict:
    """Write report.json with decoupling/propagator/phase diagnostics."""
    try:
        report, bio = _diagnostics(cfg)
    except (ParameterSetUnusable, SynthesisSingularity, ConsistencyViolation) as exc:
        _write_json(
            cfg.output_dir / "report.json",
            {"error": {"type": type(exc).__name__, "message": str(exc)}},
        )
        raise
    passed = (
        report.max_coupling < cfg.coupling_threshold
        and report.max_propagator < cfg.propagator_threshold
        and report.tracking_error is not None
        and report.tracking_error < cfg.tracking_threshold
    )
    payload = {
        "biorthogonality_max_residual": bio,
        "max_coupling": report.max_coupling,
        "max_propagator": report.max_propagator,
        "aux_residual": {
            "min": report.aux_min,
            "max": report.aux_max,
            "mean": report.aux_mean,
        },
        "mode_tracking_error": report.tracking_error,
        "thresholds": {
            "coupling": cfg.coupling_threshold,
            "propagator": cfg.propagator_threshold,
            "tracking": cfg.tracking_threshold,
        },
        "pass": bool(passed),
    }
    _write_json(cfg.output_dir / "report.json", payload)
    return payload


def run_compare(cfg: RunConfig) -> dict:
    """Write compare.json with real-vs-ideal population metrics."""
    trace, pops, ideal = _simulate(cfg)
    metrics = dynamics.compare_real_ideal(pops, ideal)
    payload = {
        "sup_norm": metrics.sup_norm,
        "rms": metrics.rms,
        "crossings_real": list(metrics.crossings_real),
        "crossings_ideal": list(metrics.crossings_ideal),
        "inversion_time_real": dynamics.inversion_time(pops),
        "inversion_time_ideal": dynamics.inversion_time(ideal),
    }
    _write_json(cfg.output_dir / "compare.json", payload)
    return payload


def _sweep_row(cfg: RunConfig, assignment: dict[str, str]) -> dict:
    row: dict[str, object] = dict(assignment)
    try:
        grid = cfg.grid()
        designs = design_mod.design_trace(
            cfg.schedule,
            cfg.gamma,
            grid,
            guards=cfg.guards,
            mode=cfg.mode,
            re_delta_e=cfg.re_delta_e,
        )
        max_field = 0.0
        for d in designs:
            if d is None:
                continue
            fs = design_mod.field_components(d)
            max_field = max(max_field, abs(fs.b_x), abs(fs.b_y), abs(fs.b_z))
        trace, pops, ideal = _simulate(cfg)
        metrics = dynamics.compare_real_ideal(pops, ideal)
        crossings = metrics.crossings_real
        if any(d is None for d in designs):
            max_g = float("nan")
        else:
            frames = design_mod.frame_trace(
                cfg.schedule,
                grid,
                lambda_mode=cfg.lambda_mode,
                cos_alpha_floor=cfg.guards.cos_alpha_floor,
            )
            eigs = design_mod.eigenvalue_trace(designs)
            phases = adiabaticity.adiabatic_phase(frames, eigs, check_refinement=False)
            max_g = adiabaticity.propagator_max_on_subgrid(frames, phases, target=0)
        row.update(
            crossing_time=crossings[0] if crossings else float("nan"),
            inversion_time=dynamics.inversion_time(pops),
            p2r_at_pi=(
                float(np.interp(math.pi, pops.grid, pops.p2r))
                if cfg.t_end >= math.pi
                else float("nan")
            ),
            max_field=max_field,
            max_g=max_g,
            sup_norm_vs_ideal=metrics.sup_norm,
            error="",
        )
    except Exception as exc:  # per-run failures land in the error column
        row.update(
            crossing_time=float("nan"),
            inversion_time=float("nan"),
            p2r_at_pi=float("nan"),
            max_field=float("nan"),
            max_g=float("nan"),
            sup_norm_vs_ideal=float("nan"),
            error=f"{type(exc).__name__}: {exc}",
        )
    return row


def run_sweep(
    cfg_base_path: str | Path | None,
    overrides: Sequence[str],
    axes: Sequence[str],
    output_dir: str | Path | None = None,
    cap: int = 64,
    max_workers: int = 4,
) -> list[dict]:
    """Cross-product parameter sweep; one aggregated CSV row per run.

    Each axis is section.key=v1,v2,...; runs execute on a bounded worker
    pool and share only immutable configs. Per-run failures are recorded in
    the error column and the sweep continues.
    """
    if not axes:
        raise UsageError("sweep needs at least one --sweep section.key=v1,v2,... axis")
    keys: list[str] = []
    value_lists: list[list[str]] = []
    for axis in axes:
        if "=" not in axis or "." not in axis.split("=", 1)[0]:
            raise UsageError(f"--sweep expects section.key=v1,v2,..., got {axis!r}")
        key, values = axis.split("=", 1)
        vals = [v for v in values.split(",") if v]
        if not vals:
            raise UsageError(f"sweep axis {key!r} has no values")
        keys.append(key)
        value_lists.append(vals)
    combos = list(itertools.product(*value_lists))
    if len(combos) > cap:
        raise UsageError(f"sweep would launch {len(combos)} runs, cap is {cap}")

    jobs = []
    for combo in combos:
        assignment = dict(zip(keys, combo))
        cfg = load_config(
            cfg_base_path,
            list(overrides) + [f"{k}={v}" for k, v in assignment.items()],
            output_dir=output_dir,
        )
        jobs.append((cfg, assignment))
    with ThreadPoolExecutor(max_workers=min(max_workers, len(jobs))) as pool:
        rows = list(pool.map(lambda job: _sweep_row(*job), jobs))

    out_dir = Path(output_dir) if output_dir is not None else jobs[0][0].output_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    metric_cols = [
        "crossing_time",
        "inversion_time",
        "p2r_at_pi",
        "max_field",
        "max_g",
        "sup_norm_vs_ideal",
        "error",
    ]
    with open(out_dir / "sweep.csv", "w", newline="\n") as fh:
        fh.write(",".join(keys + metric_cols) + "\n")
        for row in rows:
            cells = [str(row[k]) for k in keys]
            for col in metric_cols[:-1]:
                cells.append(_fmt(float(row[col])))
            err = str(row["error"]).replace(",", ";").replace("\n", " ")
            cells.append(err)
            fh.write(",".join(cells) + "\n")
    return rows


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", default=None, help="path to INI config file")
    sub.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="override one config value (repeatable)",
    )
    sub.add_argument("--out", default=None, help="output directory")
    sub.add_argument("--quiet", action="store_true", help="suppress status output")


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="nhdrive",
        description=(
            "Reverse-engineer non-Hermitian two-level driving fields and "
            "verify the designed dynamics"
        ),
    )
    subs = parser.add_subparsers(dest="command", required=True)
    for name, doc in (
        ("synthesize", "write field and design traces (fields.csv, design.csv)"),
        ("simulate", "integrate the dynamics (populations.csv)"),
        ("check", "adiabaticity diagnostics (report.json)"),
        ("compare", "real-vs-ideal population metrics (compare.json)"),
        ("sweep", "parameter sweep (sweep.csv)"),
    ):
        sub = subs.add_parser(name, help=doc)
        _add_common(sub)
        if name == "sweep":
            sub.add_argument(
                "--sweep",
                action="append",
                default=[],
                metavar="SECTION.KEY=V1,V2",
                help="sweep axis (repeatable; cross product of all axes)",
            )
            sub.add_argument("--cap", type=int, default=64, help="max runs")

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0

    def info(msg: str) -> None:
        if not args.quiet:
            print(msg)

    try:
        if args.command == "sweep":
            rows = run_sweep(
                args.config, args.set, args.sweep, output_dir=args.out, cap=args.cap
            )
            failed = sum(1 for r in rows if r["error"])
            info(f"sweep: {len(rows)} runs, {failed} failed -> sweep.csv")
            return EXIT_OK
        cfg = load_config(args.config, args.set, output_dir=args.out)
        if args.command == "synthesize":
            summary = run_synthesize(cfg)
            for w in summary["warnings"]:
                print(f"warning: {w}", file=sys.stderr)
            info(
                f"synthesize: max field {summary['max_field']:.6g}, "
                f"{100 * summary['singular_fraction']:.1f}% singular "
                f"-> {cfg.output_dir}"
            )
        elif args.command == "simulate":
            summary = run_simulate(cfg)
            info(
                f"simulate: sup-norm vs ideal {summary['sup_norm_vs_ideal']:.4f} "
                f"-> {cfg.output_dir / 'populations.csv'}"
            )
        elif args.command == "check":
            payload = run_check(cfg)
            info(
                f"check: max coupling {payload['max_coupling']:.3e}, "
                f"max propagator {payload['max_propagator']:.3e}, "
                f"pass={payload['pass']} -> {cfg.output_dir / 'report.json'}"
            )
        elif args.command == "compare":
            payload = run_compare(cfg)
            info(
                f"compare: sup-norm {payload['sup_norm']:.4f}, "
                f"rms {payload['rms']:.4f} -> {cfg.output_dir / 'compare.json'}"
            )
        return EXIT_OK
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParameterSetUnusable as exc:
        print(f"parameter failure: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except (SynthesisSingularity, ConsistencyViolation, GridTooCoarse) as exc:
        print(f"parameter failure: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except (StepSizeUnderflow, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
