"""Command-line front end: eos-scan, wall, evolve, regimes.

Every command reads one RunConfig (from --config PATH or a named
--preset), writes CSV plus a plain-text summary into the output
directory, and is deterministic: the same config produces byte-identical
files.  Floats are printed with repr() (shortest round-trip form), NaN
as the literal token NAN, and no timestamps or absolute paths appear in
any output file.

Exit codes: 0 success, 2 config error, 3 numeric failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from .config import (
    PRESET_NAMES,
    RunConfig,
    load_config,
    preset_config,
)
from .errors import (
    ConfigError,
    DegenerateDenominator,
    FitDomain,
    GridTooCoarse,
    InvalidGrid,
    KessenceError,
    SingularMassMatrix,
    StepFailure,
)
from .evolution import (
    StepControl,
    evolve_full,
    evolve_kinetic_only,
    fit_scaling,
    initial_state,
    scaling_slope,
)
from .model import (
    KineticModel,
    classify_regime,
    cs2_thinwall_approx,
    eos_w,
    eval_F,
    eval_F_X,
    sound_speed,
    sound_speed_perturbed,
    w_perturbed_exact,
    w_thinwall_approx,
)
from .walls import WallProfile, default_grid, sample, sharpness

SLOPE_TARGET = -3.0
SLOPE_TOL = 0.01


def _fmt(value) -> str:
    """Shortest round-trip decimal; NAN token for missing values."""
    v = float(value)
    if math.isnan(v):
        return "NAN"
    return repr(v)


def _write_lines(path: str, lines) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for line in lines:
            fh.write(line)
            fh.write("\n")


def _say(quiet: bool, message: str) -> None:
    if not quiet:
        print(message)


def _scan_values(scan: dict, key: str):
    r = scan[key]
    return [float(v) for v in np.linspace(r.min, r.max, r.count)]


def _model_line(m: KineticModel) -> str:
    return (f"model: F2={_fmt(m.F2)} X0={_fmt(m.X0)} "
            f"eps0={_fmt(m.eps0)} F0={_fmt(m.F0)}")


# ---------------------------------------------------------------------------
# eos-scan
# ---------------------------------------------------------------------------

def run_eos_scan(config: RunConfig, out_dir: str, quiet: bool = False):
    scan = config.scan_ranges()
    if "X" not in scan:
        raise ConfigError("eos-scan needs a scan.X range {min, max, count}")
    xs = _scan_values(scan, "X")
    m = config.model

    header = "X,F,F_X,w_exact,cs2_exact,w_perturbed_eq14,cs2_perturbed_eq11,regime,note"
    lines = [header]
    guarded = 0
    for X in xs:
        notes = []
        F = float(eval_F(m, X))
        F_X = float(eval_F_X(m, X))
        try:
            w_e = float(eos_w(m, X))
        except DegenerateDenominator:
            w_e = math.nan
            notes.append("w_exact guard: 2*X*F_X - F ~ 0")
        try:
            cs2_e = float(sound_speed(m, X))
        except DegenerateDenominator:
            cs2_e = math.nan
            notes.append("cs2_exact guard: pole at X = X0/3")

        # The perturbed closed forms describe the state X = X0 + eps0, so
        # each row re-reads its own eps0 = X - X0.
        eps = X - m.X0
        if eps > 0.0:
            pm = KineticModel(F2=m.F2, X0=m.X0, eps0=eps, F0=m.F0)
            try:
                w_p = float(w_perturbed_exact(pm))
            except DegenerateDenominator:
                w_p = math.nan
                notes.append("w_perturbed_eq14 guard: denominator ~ 0")
            cs2_p = float(sound_speed_perturbed(pm))
        elif eps == 0.0:
            w_p = float(w_perturbed_exact(
                KineticModel(F2=m.F2, X0=m.X0, eps0=0.0, F0=m.F0)))
            cs2_p = math.nan
            notes.append("X = X0: perturbed cs2 undefined at eps0 = 0")
        else:
            w_p = math.nan
            cs2_p = math.nan
            notes.append("X < X0: perturbed closed forms need X >= X0")

        if notes:
            guarded += 1
        regime = classify_regime(w_e, cs2_e).label.value
        lines.append(",".join([
            _fmt(X), _fmt(F), _fmt(F_X), _fmt(w_e), _fmt(cs2_e),
            _fmt(w_p), _fmt(cs2_p), regime, "; ".join(notes)]))

    stem = config.output.stem
    csv_name = f"{stem}_eos_scan.csv"
    _write_lines(os.path.join(out_dir, csv_name), lines)
    summary_name = f"{stem}_eos_scan_summary.txt"
    _write_lines(os.path.join(out_dir, summary_name), [
        "eos-scan summary",
        _model_line(m),
        f"points: {len(xs)}",
        f"X range: [{_fmt(xs[0])}, {_fmt(xs[-1])}]",
        f"rows with notes: {guarded}",
        f"table: {csv_name}",
    ])
    _say(quiet, f"wrote {os.path.join(out_dir, csv_name)}")
    _say(quiet, f"wrote {os.path.join(out_dir, summary_name)}")
    return [csv_name, summary_name]


# ---------------------------------------------------------------------------
# wall
# ---------------------------------------------------------------------------

def run_wall(config: RunConfig, out_dir: str, quiet: bool = False):
    if config.wall is None:
        raise ConfigError("wall command needs a wall block {b, L}")
    scan = config.scan_ranges()
    b_vals = _scan_values(scan, "b") if "b" in scan else [config.wall.b]
    L_vals = _scan_values(scan, "L") if "L" in scan else [config.wall.L]

    stem = config.output.stem
    written = []
    sharp_lines = ["b,L,peak_value,peak_position,half_width,integral"]
    for b in b_vals:
        for L in L_vals:
            profile = WallProfile(b=b, L=L)
            x_min, x_max, spacing = default_grid(profile)
            n = int(math.ceil((x_max - x_min) / spacing)) + 1
            s = sample(profile, x_min, x_max, n)
            prof_lines = ["x,phi,dphi_dx,X_mag"]
            for i in range(s.x.size):
                prof_lines.append(",".join([
                    _fmt(s.x[i]), _fmt(s.phi[i]),
                    _fmt(s.dphi_dx[i]), _fmt(s.X_mag[i])]))
            name = f"{stem}_profile_b{b:g}_L{L:g}.csv"
            _write_lines(os.path.join(out_dir, name), prof_lines)
            written.append(name)
            _say(quiet, f"wrote {os.path.join(out_dir, name)}")

            rep = sharpness(profile)
            sharp_lines.append(",".join([
                _fmt(b), _fmt(L), _fmt(rep.peak_value),
                _fmt(rep.peak_positions[1]), _fmt(rep.half_width),
                _fmt(rep.integral)]))

    sharp_name = f"{stem}_sharpness.csv"
    _write_lines(os.path.join(out_dir, sharp_name), sharp_lines)
    written.append(sharp_name)
    _say(quiet, f"wrote {os.path.join(out_dir, sharp_name)}")

    summary_name = f"{stem}_wall_summary.txt"
    summary = [
        "wall summary",
        f"combinations: {len(b_vals) * len(L_vals)}",
        "profile files:",
    ]
    summary.extend(f"  {name}" for name in written[:-1])
    summary.append(f"sharpness table: {sharp_name}")
    _write_lines(os.path.join(out_dir, summary_name), summary)
    written.append(summary_name)
    _say(quiet, f"wrote {os.path.join(out_dir, summary_name)}")
    return written


# ---------------------------------------------------------------------------
# evolve
# ---------------------------------------------------------------------------

def run_evolve(config: RunConfig, out_dir: str, quiet: bool = False):
    ev = config.evolve
    if ev is None:
        raise ConfigError("evolve command needs an evolve block")
    init = initial_state(phi=ev.phi, phidot=ev.phidot, X=ev.X,
                         t=ev.t_start, a=ev.a_start)
    control = StepControl(rel_tol=ev.rel_tol, abs_tol=ev.abs_tol,
                          n_output=ev.n_output)
    if ev.kinetic_only:
        tr = evolve_kinetic_only(config.model, config.background, init,
                                 ev.t_end, control)
        mode = "kinetic_only"
    else:
        tr = evolve_full(config.model, config.potential, config.background,
                         init, ev.t_end, control)
        mode = "full"

    lines = ["t,a,phi,phidot,X,w,cs2,Q"]
    for i in range(len(tr)):
        lines.append(",".join([
            _fmt(tr.t[i]), _fmt(tr.a[i]), _fmt(tr.phi[i]), _fmt(tr.phidot[i]),
            _fmt(tr.X[i]), _fmt(tr.w[i]), _fmt(tr.cs2[i]), _fmt(tr.Q[i])]))
    stem = config.output.stem
    csv_name = f"{stem}_trajectory.csv"
    _write_lines(os.path.join(out_dir, csv_name), lines)
    _say(quiet, f"wrote {os.path.join(out_dir, csv_name)}")

    summary = [
        "evolve summary",
        _model_line(config.model),
        f"mode: {mode}",
        f"rows: {len(tr)}",
    ]
    try:
        fit = fit_scaling(tr, 0.5)
        summary.append(f"fitted eps1 = {_fmt(fit.eps1)}")
        summary.append(f"fitted a1 = {_fmt(fit.a1)}")
        summary.append(f"fit max residual = {_fmt(fit.max_residual)}")
    except (FitDomain, ValueError) as exc:
        summary.append(f"scaling fit not available: {exc}")
    try:
        slope = scaling_slope(tr)
        verdict = "PASS" if abs(slope - SLOPE_TARGET) <= SLOPE_TOL else "FAIL"
        summary.append(f"slope of log(X - X0) vs log(a) = {_fmt(slope)}")
        summary.append(
            f"slope check: {verdict} "
            f"(expected {SLOPE_TARGET} +- {SLOPE_TOL})")
    except FitDomain as exc:
        summary.append(f"slope not available: {exc}")

    Q0 = float(tr.Q[0])
    if Q0 != 0.0:
        drift = float(np.max(np.abs(tr.Q / Q0 - 1.0)))
        summary.append(f"max relative Q drift = {_fmt(drift)}")
    else:
        drift = float(np.max(np.abs(tr.Q)))
        summary.append(f"max absolute Q drift = {_fmt(drift)} (Q(0) = 0)")
    bound = 100.0 * ev.rel_tol
    summary.append(f"drift bound (100 * rel_tol) = {_fmt(bound)}")
    if mode == "full" and config.potential.curvature(0.0) != 0.0:
        summary.append(
            "note: Q is a first integral of the constant-V equation only; "
            "drift is expected with a varying potential")
    summary.append("conservation: " + ("PASS" if drift <= bound else "FAILED"))

    summary_name = f"{stem}_evolve_summary.txt"
    _write_lines(os.path.join(out_dir, summary_name), summary)
    _say(quiet, f"wrote {os.path.join(out_dir, summary_name)}")
    return [csv_name, summary_name]


# ---------------------------------------------------------------------------
# regimes
# ---------------------------------------------------------------------------

def _regime_cells(b, L, X0_val, eps0, F2, F0):
    """One regime-table row.  b/L are None for direct X0 scans."""
    try:
        m = KineticModel(F2=F2, X0=X0_val, eps0=eps0, F0=F0)
    except ValueError as exc:
        raise ConfigError(f"scan produced an invalid model: {exc}") from None
    try:
        w_e = float(w_perturbed_exact(m))
    except DegenerateDenominator:
        w_e = math.nan
    try:
        cs2_e = float(sound_speed_perturbed(m)) if eps0 > 0 else math.nan
    except DegenerateDenominator:
        cs2_e = math.nan
    try:
        w_p = float(w_thinwall_approx(X0_val, eps0, F2))
    except DegenerateDenominator:
        w_p = math.nan
    cs2_p = float(cs2_thinwall_approx(X0_val, eps0)) if eps0 > 0 else math.nan
    label = classify_regime(w_p, cs2_p).label.value
    return {
        "b": math.nan if b is None else b,
        "L": math.nan if L is None else L,
        "X0": X0_val, "eps0": eps0, "F2": F2,
        "w_exact": w_e, "w_paper": w_p,
        "cs2_exact": cs2_e, "cs2_paper": cs2_p,
        "label": label,
    }


def run_regimes(config: RunConfig, out_dir: str, quiet: bool = False):
    scan = config.scan_ranges()
    for key in ("eps0", "F2"):
        if key not in scan:
            raise ConfigError(f"regimes needs a scan.{key} range")
    if "b" not in scan and "X0" not in scan:
        raise ConfigError("regimes needs scan.b or scan.X0")
    eps_vals = _scan_values(scan, "eps0")
    F2_vals = _scan_values(scan, "F2")
    F0 = config.model.F0

    rows = []
    if "b" in scan:
        if "L" in scan:
            L_vals = _scan_values(scan, "L")
        elif config.wall is not None:
            L_vals = [config.wall.L]
        else:
            raise ConfigError("b-indexed regime scan needs scan.L or a wall block")
        for b in _scan_values(scan, "b"):
            for L in L_vals:
                # The wall fixes the kinetic scale: X0 is the spike height
                # of X_mag at the wall centre x = L/2.
                X_est = float(WallProfile(b=b, L=L).kinetic_magnitude(L / 2.0))
                for eps0 in eps_vals:
                    for F2 in F2_vals:
                        rows.append(_regime_cells(b, L, X_est, eps0, F2, F0))
    if "X0" in scan:
        for X0_val in _scan_values(scan, "X0"):
            for eps0 in eps_vals:
                for F2 in F2_vals:
                    rows.append(_regime_cells(None, None, X0_val, eps0, F2, F0))

    lines = ["b,L,X_estimate,eps0,F2,w_exact,w_paper,cs2_exact,cs2_paper,regime_label"]
    for r in rows:
        lines.append(",".join([
            _fmt(r["b"]), _fmt(r["L"]), _fmt(r["X0"]), _fmt(r["eps0"]),
            _fmt(r["F2"]), _fmt(r["w_exact"]), _fmt(r["w_paper"]),
            _fmt(r["cs2_exact"]), _fmt(r["cs2_paper"]), r["label"]]))
    stem = config.output.stem
    csv_name = f"{stem}_regimes.csv"
    _write_lines(os.path.join(out_dir, csv_name), lines)
    _say(quiet, f"wrote {os.path.join(out_dir, csv_name)}")

    report = ["regime discrepancy report", f"rows: {len(rows)}"]
    for quantity, exact_key, approx_key in (
            ("w", "w_exact", "w_paper"), ("cs2", "cs2_exact", "cs2_paper")):
        best = None
        best_row = None
        for r in rows:
            e, p = r[exact_key], r[approx_key]
            if math.isnan(e) or math.isnan(p):
                continue
            gap = abs(e - p)
            if best is None or gap > best:
                best, best_row = gap, r
        if best is None:
            report.append(f"max |{exact_key} - {approx_key}|: no comparable rows")
            continue
        report.append(f"max |{exact_key} - {approx_key}| = {_fmt(best)}")
        report.append(
            f"  at b={_fmt(best_row['b'])} L={_fmt(best_row['L'])} "
            f"X0={_fmt(best_row['X0'])} eps0={_fmt(best_row['eps0'])} "
            f"F2={_fmt(best_row['F2'])}")
        exact_label = classify_regime(
            best_row["w_exact"], best_row["cs2_exact"]).label.value
        report.append(
            f"  exact columns classify as {exact_label}; "
            f"approx columns as {best_row['label']}")
        if quantity == "w":
            flagged = "yes" if best > 0.9 else "no"
            report.append(f"  w discrepancy exceeds 0.9: {flagged}")

    report_name = f"{stem}_discrepancy.txt"
    _write_lines(os.path.join(out_dir, report_name), report)
    _say(quiet, f"wrote {os.path.join(out_dir, report_name)}")
    return [csv_name, report_name]


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------

_RUNNERS = {
    "eos-scan": run_eos_scan,
    "wall": run_wall,
    "evolve": run_evolve,
    "regimes": run_regimes,
}

_HELP = {
    "eos-scan": "tabulate w and cs2 over an X range",
    "wall": "sample tanh wall-pair profiles and sharpness metrics",
    "evolve": "integrate the homogeneous field equation",
    "regimes": "classify (w, cs2) over parameter sweeps",
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kessence",
        description="pure-kinetic k-essence scans, wall profiles and evolutions")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, runner in _RUNNERS.items():
        sp = sub.add_parser(name, help=_HELP[name])
        group = sp.add_mutually_exclusive_group(required=True)
        group.add_argument("--config", metavar="PATH",
                           help="JSON run configuration")
        group.add_argument("--preset", choices=PRESET_NAMES,
                           help="built-in configuration")
        sp.add_argument("--out", metavar="DIR",
                        help="output directory (overrides config)")
        sp.add_argument("--quiet", action="store_true",
                        help="suppress progress output")
        sp.set_defaults(runner=runner)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config is not None:
            config = load_config(args.config)
        else:
            config = preset_config(args.preset)
        out_dir = args.out if args.out is not None else config.output.directory
        os.makedirs(out_dir, exist_ok=True)
        args.runner(config, out_dir, quiet=args.quiet)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (DegenerateDenominator, SingularMassMatrix, StepFailure,
            FitDomain, GridTooCoarse, InvalidGrid, KessenceError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 4
    return 0


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
