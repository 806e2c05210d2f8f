"""Command-line front end.

Subcommands: equilibrium, criteria, growth, scan, evolve, verdict.  Every run
writes its artifacts (CSV tables, a JSON report, figures) into --outdir along
with ``config-echo.ini``, a fully-resolved config that reproduces the run:

    parkerstab growth --config <outdir>/config-echo.ini

Config files are INI-style key-value text with sections [run], [params],
[domain], [numerics], [mode], [output]; any command-line flag overrides the
corresponding config key.  Exit codes: 0 success, 1 validation error,
2 numerical failure (partial outputs are still written).
"""

from __future__ import annotations

import argparse
import configparser
import csv
import dataclasses
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .criteria import (
    buoyancy_margin,
    evaluate_criteria,
    instability_weight,
    rt_margin,
    schwarzschild_margin,
    tserkovnikov_margin,
)
from .energy import ModeSpec
from .errors import ParkerStabError
from .evolve import evolve_mode, fit_growth_rate, random_state, state_from_eigenfield
from .grid import build_grid
from .presets import PRESETS, get_preset
from .profiles import (
    DensitySpec,
    PhysicalParams,
    build_equilibrium,
    equilibrium_residual,
    load_tabulated_profile,
)
from .scan import ScanSpec, default_mode_grid, dispersion_scan, stability_verdict
from .spectral import assemble_operators, growth_rate_fixed_point, solve_qep

__all__ = ["main", "parse_config", "run", "RunConfig"]

COMMANDS = ("equilibrium", "criteria", "growth", "scan", "evolve", "verdict")
FMT = "%.17g"


class ValidationError(ParkerStabError):
    """Bad configuration; maps to exit status 1."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    preset: str | None
    profile_file: str | None
    params: PhysicalParams
    l: float
    L1: float
    L2: float
    margin: float
    field_scale: float
    n: int
    tol: float
    dt: float | None
    t_end: float | None
    xi1: float
    xi2: float
    method: str
    kmax: int
    domain: str
    init: str
    seed: int
    window: float
    outdir: str
    fmt: str
    plots: bool


# (section, key, type, default) for every config entry except command/preset
_SCHEMA = {
    "run": {
        "preset": (str, None),
        "profile_file": (str, None),
    },
    "params": {
        "lam": (float, 1.0),
        "gamma": (float, 5.0 / 3.0),
        "A": (float, 1.0),
        "mu1": (float, 0.02),
        "nu": (float, 0.02),
        "gravity": (float, 1.0),
    },
    "domain": {
        "l": (float, 1.0),
        "L1": (float, 1.0),
        "L2": (float, 1.0),
        "margin": (float, 0.5),
        "field_scale": (float, 1.0),
        "geometry": (str, "slab3d"),
    },
    "numerics": {
        "n": (int, 128),
        "tol": (float, 1e-8),
        "dt": (float, None),
        "t_end": (float, None),
        "seed": (int, 0),
        "window": (float, 0.5),
    },
    "mode": {
        "xi1": (float, 0.25),
        "xi2": (float, 0.25),
        "method": (str, "both"),
        "kmax": (int, 16),
        "init": (str, "eigen"),
    },
    "output": {
        "outdir": (str, "out"),
        "format": (str, "csv"),
        "plots": (bool, True),
    },
}


def _build_parser() -> argparse.ArgumentParser:
    class _Parser(argparse.ArgumentParser):
        def error(self, message):   # exit 1 on CLI syntax errors, not 2
            print(f"error: {message}", file=sys.stderr)
            self.print_usage(sys.stderr)
            sys.exit(1)

    p = _Parser(prog="parkerstab",
                description="Stratified MHD slab equilibria and Parker-instability analysis")
    sub = p.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS:
        sp = sub.add_parser(cmd)
        sp.add_argument("--config", default=None, help="INI config file")
        sp.add_argument("--preset", default=None,
                        help="named profile: " + ", ".join(sorted(PRESETS)))
        sp.add_argument("--profile-file", dest="profile_file", default=None,
                        help="two-column density table (z rho)")
        for key in ("lam", "gamma", "A", "mu1", "nu", "gravity"):
            sp.add_argument(f"--{key}", type=float, default=None)
        sp.add_argument("--l", type=float, default=None, help="half-height of the slab")
        sp.add_argument("--L1", type=float, default=None)
        sp.add_argument("--L2", type=float, default=None)
        sp.add_argument("--margin", type=float, default=None,
                        help="field-pressure headroom of the equilibrium constant")
        sp.add_argument("--field-scale", dest="field_scale", type=float, default=None)
        sp.add_argument("--n", type=int, default=None, help="interior grid points")
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--xi1", type=float, default=None)
        sp.add_argument("--xi2", type=float, default=None)
        sp.add_argument("--method", choices=("qep", "fixed_point", "both"), default=None)
        sp.add_argument("--kmax", type=int, default=None, help="scan harmonics 0..kmax")
        sp.add_argument("--dt", type=float, default=None)
        sp.add_argument("--t-end", dest="t_end", type=float, default=None)
        sp.add_argument("--init", choices=("eigen", "random"), default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--window", type=float, default=None)
        sp.add_argument("--domain", choices=("slab3d", "slab2d", "strip"), default=None)
        sp.add_argument("--outdir", default=None)
        sp.add_argument("--format", choices=("csv", "json"), default=None)
        sp.add_argument("--no-plots", action="store_true")
    return p


def _read_ini(path: str) -> dict:
    cp = configparser.ConfigParser()
    cp.optionxform = str        # keep A, L1, L2 distinct from a, l1, l2
    read = cp.read(path)
    if not read:
        raise ValidationError(f"config file not found: {path}")
    out = {}
    for section in cp.sections():
        if section not in _SCHEMA and section != "run":
            raise ValidationError(f"unknown config section [{section}]")
        for key, raw in cp.items(section):
            if section == "run" and key == "command":
                out["command"] = raw
                continue
            schema = _SCHEMA.get(section, {})
            if key not in schema:
                raise ValidationError(f"unknown config key {section}.{key}")
            typ, _ = schema[key]
            try:
                if raw.lower() in ("none", ""):
                    out[key] = None
                elif typ is bool:
                    out[key] = raw.lower() in ("1", "true", "yes", "on")
                else:
                    out[key] = typ(raw)
            except ValueError as exc:
                raise ValidationError(f"bad value for {section}.{key}: {raw!r}") from exc
    return out


def parse_config(argv: list[str]) -> RunConfig:
    """Resolve command line + optional config file into a full RunConfig."""
    args = _build_parser().parse_args(argv)
    file_vals = _read_ini(args.config) if args.config else {}

    def pick(key, cli_val):
        if cli_val is not None:
            return cli_val
        if key in file_vals and file_vals[key] is not None:
            return file_vals[key]
        for section in _SCHEMA.values():
            if key in section:
                return section[key][1]
        raise KeyError(key)

    preset = pick("preset", args.preset)
    profile_file = pick("profile_file", args.profile_file)
    if preset is not None and profile_file is not None:
        raise ValidationError("--preset and --profile-file are mutually exclusive")
    if preset is None and profile_file is None:
        raise ValidationError("one of --preset or --profile-file is required")
    if preset is not None and preset not in PRESETS:
        raise ValidationError(
            f"unknown preset {preset!r}; available: {', '.join(sorted(PRESETS))}")

    # preset supplies defaults for params/domain; explicit flags still win
    pdef = {}
    if preset is not None:
        pr = get_preset(preset)
        pdef = {
            "lam": pr.params.lam, "gamma": pr.params.gamma, "A": pr.params.A,
            "mu1": pr.params.mu1, "nu": pr.params.nu, "gravity": pr.params.gravity,
            "l": pr.l, "L1": pr.L1, "L2": pr.L2, "margin": pr.margin,
            "field_scale": pr.field_scale,
        }

    def pickp(key, cli_val):
        if cli_val is not None:
            return cli_val
        if key in file_vals and file_vals[key] is not None:
            return file_vals[key]
        if key in pdef:
            return pdef[key]
        for section in _SCHEMA.values():
            if key in section:
                return section[key][1]
        raise KeyError(key)

    params = PhysicalParams(
        lam=pickp("lam", args.lam), gamma=pickp("gamma", args.gamma),
        A=pickp("A", args.A), mu1=pickp("mu1", args.mu1),
        nu=pickp("nu", args.nu), gravity=pickp("gravity", args.gravity),
    )
    cfg = RunConfig(
        command=args.command,
        preset=preset,
        profile_file=profile_file,
        params=params,
        l=float(pickp("l", args.l)),
        L1=float(pickp("L1", args.L1)),
        L2=float(pickp("L2", args.L2)),
        margin=float(pickp("margin", args.margin)),
        field_scale=float(pickp("field_scale", args.field_scale)),
        n=int(pick("n", args.n)),
        tol=float(pick("tol", args.tol)),
        dt=pick("dt", args.dt),
        t_end=pick("t_end", args.t_end),
        xi1=float(pick("xi1", args.xi1)),
        xi2=float(pick("xi2", args.xi2)),
        method=pick("method", args.method),
        kmax=int(pick("kmax", args.kmax)),
        domain=pick("geometry", args.domain),
        init=pick("init", args.init),
        seed=int(pick("seed", args.seed)),
        window=float(pick("window", args.window)),
        outdir=pick("outdir", args.outdir),
        fmt=pick("format", getattr(args, "format")),
        plots=bool(pick("plots", False if args.no_plots else None)),
    )
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig):
    if cfg.command not in COMMANDS:
        raise ValidationError(f"unknown command {cfg.command!r}")
    if cfg.n < 8:
        raise ValidationError("n must be at least 8")
    if cfg.l <= 0 or cfg.L1 <= 0 or cfg.L2 <= 0:
        raise ValidationError("l, L1, L2 must be positive")
    if cfg.tol <= 0:
        raise ValidationError("tol must be positive")
    if cfg.xi1 < 0 or cfg.xi2 < 0:
        raise ValidationError("wavenumbers must be >= 0")
    if cfg.kmax < 0:
        raise ValidationError("kmax must be >= 0")
    if not 0 < cfg.window <= 1:
        raise ValidationError("window must be in (0, 1]")
    if cfg.field_scale <= 0:
        raise ValidationError("field_scale must be positive")
    if cfg.profile_file is not None and not Path(cfg.profile_file).exists():
        raise ValidationError(f"profile file not found: {cfg.profile_file}")


def config_echo(cfg: RunConfig) -> str:
    """Serialize the resolved config; parse_config on it reproduces cfg."""
    cp = configparser.ConfigParser()
    cp.optionxform = str
    cp["run"] = {"command": cfg.command}
    if cfg.preset is not None:
        cp["run"]["preset"] = cfg.preset
    if cfg.profile_file is not None:
        cp["run"]["profile_file"] = cfg.profile_file
    cp["params"] = {k: FMT % getattr(cfg.params, k)
                    for k in ("lam", "gamma", "A", "mu1", "nu", "gravity")}
    cp["domain"] = {
        "l": FMT % cfg.l, "L1": FMT % cfg.L1, "L2": FMT % cfg.L2,
        "margin": FMT % cfg.margin, "field_scale": FMT % cfg.field_scale,
        "geometry": cfg.domain,
    }
    cp["numerics"] = {
        "n": str(cfg.n), "tol": FMT % cfg.tol,
        "dt": "none" if cfg.dt is None else FMT % cfg.dt,
        "t_end": "none" if cfg.t_end is None else FMT % cfg.t_end,
        "seed": str(cfg.seed), "window": FMT % cfg.window,
    }
    cp["mode"] = {
        "xi1": FMT % cfg.xi1, "xi2": FMT % cfg.xi2,
        "method": cfg.method, "kmax": str(cfg.kmax), "init": cfg.init,
    }
    cp["output"] = {"outdir": cfg.outdir, "format": cfg.fmt,
                    "plots": "true" if cfg.plots else "false"}
    import io
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def _build_profile(cfg: RunConfig):
    grid = build_grid(-cfg.l, cfg.l, cfg.n)
    if cfg.profile_file is not None:
        dens = load_tabulated_profile(cfg.profile_file)
    else:
        dens = get_preset(cfg.preset).dens
    prof = build_equilibrium(cfg.params, dens, grid, margin=cfg.margin)
    if cfg.field_scale != 1.0:
        prof = prof.scale_field(cfg.field_scale)
    return prof


def _write_table(path: Path, header: list[str], rows, fmt: str):
    """Delimited table as CSV or as a JSON list of row objects."""
    if fmt == "json":
        data = [dict(zip(header, r)) for r in rows]
        path.with_suffix(".json").write_text(json.dumps(data, indent=1) + "\n")
        return path.with_suffix(".json")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([FMT % v if isinstance(v, float) else v for v in r])
    return path


def _write_json(path: Path, obj):
    def default(o):
        if isinstance(o, (np.floating, np.integer)):
            return o.item()
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, complex):
            return {"re": o.real, "im": o.imag}
        raise TypeError(f"not serializable: {type(o)}")
    path.write_text(json.dumps(obj, indent=1, default=default) + "\n")


def _cmd_equilibrium(cfg: RunConfig, out: Path) -> int:
    prof = _build_profile(cfg)
    rows = zip(prof.grid.nodes, prof.rho, prof.drho, prof.pressure,
               prof.m, prof.m2, prof.m2prime)
    _write_table(out / "profile.csv",
                 ["z", "rho", "drho", "pressure", "m", "m2", "m2prime"],
                 ([float(v) for v in r] for r in rows), cfg.fmt)
    res = equilibrium_residual(prof)
    _write_json(out / "equilibrium.json", {
        "residual": res,
        "constant": prof.C,
        "min_m2": float(np.min(prof.m2)),
        "tolerance": 1e-6 * max(float(np.max(np.abs(prof.g * prof.rho))), 1.0),
    })
    if cfg.plots:
        from .plotting import plot_profile
        plot_profile(prof, str(out / "profile.png"))
    return 0


def _cmd_criteria(cfg: RunConfig, out: Path) -> int:
    prof = _build_profile(cfg)
    report = evaluate_criteria(prof, L2=cfg.L2)
    z = prof.grid.nodes
    S, _ = schwarzschild_margin(prof)
    B, _ = buoyancy_margin(prof)
    T, _ = tserkovnikov_margin(prof)
    R, _ = rt_margin(prof)
    W = instability_weight(prof)
    _write_table(out / "margins.csv",
                 ["z", "schwarzschild", "buoyancy", "tserkovnikov", "rt", "weight"],
                 ([float(a) for a in row] for row in zip(z, S, B, T, R, W)), cfg.fmt)
    _write_json(out / "criteria.json", report.summary())
    if cfg.plots:
        from .plotting import plot_profile
        plot_profile(prof, str(out / "criteria.png"), report=report)
    return 0


def _cmd_growth(cfg: RunConfig, out: Path) -> int:
    prof = _build_profile(cfg)
    mode = ModeSpec(xi1=cfg.xi1, xi2=cfg.xi2)
    ops = assemble_operators(prof, mode)
    report: dict = {"xi1": cfg.xi1, "xi2": cfg.xi2, "n": cfg.n}
    status = 0
    field = None
    try:
        if cfg.method in ("qep", "both"):
            top = solve_qep(ops, tol=cfg.tol, nev=1)[0]
            report["qep"] = {"re": top.lam.real, "im": top.lam.imag,
                             "residual": top.residual}
            field = top.field
        if cfg.method in ("fixed_point", "both"):
            fp = growth_rate_fixed_point(ops, tol=cfg.tol)
            if fp is None:
                report["fixed_point"] = {"re": 0.0, "im": 0.0, "residual": 0.0,
                                         "note": "no positive growth rate"}
            else:
                report["fixed_point"] = {"re": fp.lam.real, "im": fp.lam.imag,
                                         "residual": fp.residual}
                field = fp.field if field is None else field
        if cfg.method == "both" and "qep" in report and "fixed_point" in report:
            a, b = report["qep"]["re"], report["fixed_point"]["re"]
            report["agreement"] = abs(a - b) / max(abs(a), abs(b), 1e-300)
    except ParkerStabError as exc:
        report["error"] = str(exc)
        status = 2
    _write_json(out / "growth.json", report)
    if field is not None:
        rows = zip(prof.grid.nodes, field.phi, field.theta, field.psi)
        _write_table(out / "eigenfunction.csv", ["z", "phi", "theta", "psi"],
                     ([float(a) for a in r] for r in rows), cfg.fmt)
    return status


def _scan_spec(cfg: RunConfig) -> ScanSpec:
    xi1s, xi2s = default_mode_grid(cfg.L1, cfg.L2, kmax=cfg.kmax)
    return ScanSpec(xi1_values=xi1s, xi2_values=xi2s, L1=cfg.L1, L2=cfg.L2,
                    method=cfg.method if cfg.method != "both" else "fixed_point",
                    tol=cfg.tol)


def _write_dispersion(table, out: Path, fmt: str):
    rows = [(r.xi1, r.xi2, r.re_lambda, r.im_lambda, r.method, r.residual)
            for r in table.rows]
    _write_table(out / "dispersion.csv",
                 ["xi1", "xi2", "re_lambda", "im_lambda", "method", "residual"],
                 rows, fmt)


def _cmd_scan(cfg: RunConfig, out: Path) -> int:
    prof = _build_profile(cfg)
    table = dispersion_scan(prof, _scan_spec(cfg))
    _write_dispersion(table, out, cfg.fmt)
    _write_json(out / "scan.json", {
        "max_growth": table.max_growth,
        "argmax_xi1": table.argmax_mode[0],
        "argmax_xi2": table.argmax_mode[1],
        "bands": {FMT % k: v for k, v in table.bands.items()},
        "flagged_rows": sum(r.flagged for r in table.rows),
    })
    if cfg.plots:
        from .plotting import plot_dispersion
        plot_dispersion(table, str(out / "dispersion.png"))
    return 2 if any(r.flagged for r in table.rows) else 0


def _cmd_evolve(cfg: RunConfig, out: Path) -> int:
    prof = _build_profile(cfg)
    mode = ModeSpec(xi1=cfg.xi1, xi2=cfg.xi2)
    report: dict = {"xi1": cfg.xi1, "xi2": cfg.xi2, "init": cfg.init}
    status = 0
    if cfg.init == "eigen":
        fp = growth_rate_fixed_point(assemble_operators(prof, mode), tol=cfg.tol)
        if fp is None:
            raise ValidationError(
                "eigen init needs an unstable mode; use --init random")
        state = state_from_eigenfield(prof, fp.field, fp.lam.real)
        report["lambda_ref"] = fp.lam.real
        t_end = cfg.t_end if cfg.t_end is not None else 3.5 / fp.lam.real
    else:
        state = random_state(prof, mode, seed=cfg.seed)
        if cfg.t_end is None:
            raise ValidationError("--t-end is required with --init random")
        t_end = cfg.t_end
    try:
        traj = evolve_mode(prof, mode, state, t_end=t_end, dt=cfg.dt)
        sigma, rms = fit_growth_rate(traj, window=cfg.window)
        report.update({"sigma": sigma, "rms": rms, "div_drift": traj.div_drift,
                       "t_end": t_end, "samples": len(traj.times)})
        if "lambda_ref" in report:
            report["agreement"] = abs(sigma - report["lambda_ref"]) / report["lambda_ref"]
        rows = zip(traj.times, traj.amplitude)
        _write_table(out / "trajectory.csv", ["t", "amplitude"],
                     ([float(a) for a in r] for r in rows), cfg.fmt)
        if cfg.plots:
            from .plotting import plot_trajectory
            plot_trajectory(traj.times, traj.amplitude,
                            str(out / "trajectory.png"), sigma=sigma)
    except ParkerStabError as exc:
        report["error"] = str(exc)
        status = 2
    _write_json(out / "evolve.json", report)
    return status


def _cmd_verdict(cfg: RunConfig, out: Path) -> int:
    prof = _build_profile(cfg)
    verdict = stability_verdict(prof, _scan_spec(cfg), domain=cfg.domain)
    _write_json(out / "verdict.json", verdict.summary())
    if verdict.table is not None:
        _write_dispersion(verdict.table, out, cfg.fmt)
        if cfg.plots:
            from .plotting import plot_dispersion
            plot_dispersion(verdict.table, str(out / "dispersion.png"),
                            xi3d=verdict.criteria.xi3d)
    return 0 if verdict.consistent else 2


_DISPATCH = {
    "equilibrium": _cmd_equilibrium,
    "criteria": _cmd_criteria,
    "growth": _cmd_growth,
    "scan": _cmd_scan,
    "evolve": _cmd_evolve,
    "verdict": _cmd_verdict,
}


def run(cfg: RunConfig) -> int:
    out = Path(cfg.outdir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config-echo.ini").write_text(config_echo(cfg))
    return _DISPATCH[cfg.command](cfg, out)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return run(cfg)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ParkerStabError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
