"""
Command-line entry point ``rydion``.

Exit codes: 0 success, 2 configuration or input error, 3 physics error
(unstable or anti-trapped configuration), 4 fit failure.  Errors are
reported as one JSON object on standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np
from scipy import constants

from . import __version__
from .config import ToolkitConfig, load_config, validate_config
from .dynamics import LEVELS, LevelScheme, ParameterEnsemble, monte_carlo_band, thermal_distribution, weighted_population
from .errors import ConfigError, FitError, PhysicsError, RydionError
from .figures import fig1b_data, fig2b_data, fig3_data, fig4_data, stark_line_weights
from .io import format_value, read_csv, to_jsonable, write_csv, write_json
from .overlap import OscillatorSpec, adaptive_overlap_matrix, characteristic_length
from .spectra import (
    QuadraticScan,
    SpectrumModel,
    SpectrumScan,
    fit_quadratic_turning_point,
    fit_spectrum,
    fit_spectrum_with_shift,
    residual_field_limit,
    synthesize_scan,
)
from .stark import (
    PhononOccupation,
    stark_delta,
    stark_delta_approx,
    stark_equilibrium,
    stark_frequencies,
    stark_sideband_ratio,
)
from .trap import equilibrium_from_offset, mathieu_q, micromotion_factor, secular_from_gradients

TWO_PI = 2 * np.pi
EXIT_OK, EXIT_CONFIG, EXIT_PHYSICS, EXIT_FIT = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _diagnose("UsageError", message, EXIT_CONFIG)
        self.exit(EXIT_CONFIG)


def _diagnose(kind, message, code):
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}) + "\n")


def _common(formats=("csv", "json")):
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="configuration file (default: $RYDION_CONFIG)")
    p.add_argument("--out", help="output file, or directory for `figure` (default: stdout)")
    p.add_argument("--seed", type=int, help="random seed (overrides config)")
    p.add_argument("--format", choices=formats, help="output format")
    p.add_argument("--no-mm-correction", action="store_true",
                   help="drop the 1 + 3q^2/16 intrinsic-micromotion factor")
    return p


def _states(cfg: ToolkitConfig, args):
    lower = cfg.state(args.lower) if getattr(args, "lower", None) else None
    upper = cfg.state(args.upper) if getattr(args, "upper", None) else None
    if lower is None:
        label = cfg.scheme.get("lower_state")
        lower = cfg.state(label) if label else min(cfg.states, key=lambda s: abs(s.polarizability))
    if upper is None:
        label = cfg.scheme.get("upper_state")
        upper = cfg.state(label) if label else max(cfg.states, key=lambda s: abs(s.polarizability))
    return lower, upper


def _mm(cfg, args):
    return False if args.no_mm_correction else bool(cfg.defaults["micromotion_correction"])


def _seed(cfg, args):
    return args.seed if args.seed is not None else int(cfg.defaults["seed"])


def _emit_report(args, payload, default="json"):
    fmt = args.format or default
    if fmt == "json":
        write_json(args.out, payload)
    else:
        write_csv(args.out, ["quantity", "value"], list(_flatten(payload)))


def _flatten(payload, prefix=""):
    for k, v in payload.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from _flatten(v, key + ".")
        elif isinstance(v, (list, tuple)):
            yield key, " ".join(format_value(x) for x in v)
        else:
            yield key, v


_TEXT_COLUMNS = (
    ("state", "label", "{}"),
    ("alpha (C m^2/V)", "polarizability", "{:.3e}"),
    ("wx (kHz)", "omega_x_hz", "{:.3f}"),
    ("wy (kHz)", "omega_y_hz", "{:.3f}"),
    ("w'x (kHz)", "omega_x_prime_hz", "{:.3f}"),
    ("w'y (kHz)", "omega_y_prime_hz", "{:.3f}"),
    ("dwx (kHz)", "delta_omega_x_hz", "{:.3f}"),
    ("dwy (kHz)", "delta_omega_y_hz", "{:.3f}"),
    ("delta (kHz)", "delta_hz", "{:.3f}"),
    ("sideband ratio", "sideband_ratio", "{:.3e}"),
)


def _write_text(path, columns, rows):
    """Aligned plain-text table; frequencies in kHz."""
    cells = [[title for title, _, _ in columns]]
    for r in rows:
        line = []
        for _, key, fmt in columns:
            v = r[key]
            line.append(fmt.format(v / 1e3 if key.endswith("_hz") else v))
        cells.append(line)
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    text = "\n".join("  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


# -- subcommands -------------------------------------------------------------

def cmd_trap_info(args):
    cfg = load_config(args.config)
    t = cfg.trap
    w = secular_from_gradients(t)
    q = mathieu_q(t)
    _emit_report(args, {
        "species": t.species.name,
        "mass_kg": t.mass,
        "drive_freq_hz": t.drive_freq / TWO_PI,
        "grad_rf": t.grad_rf,
        "grad_dc": t.grad_dc,
        "asymmetry": t.asymmetry,
        "secular_freqs_hz": list(w.as_hz()),
        "mathieu_q": q,
        "micromotion_factor": micromotion_factor(q),
    })


def cmd_stark_shift(args):
    cfg = load_config(args.config)
    mm = _mm(cfg, args)
    t = cfg.trap
    w = secular_from_gradients(t)
    r0 = equilibrium_from_offset(t, cfg.offset)
    rows = []
    for s in cfg.states:
        wp = stark_frequencies(t, s, mm)
        rp = stark_equilibrium(t, cfg.offset, s, mm)
        delta = stark_delta(t, cfg.offset, s, mm)
        rows.append({
            "label": s.label,
            "polarizability": s.polarizability,
            "omega_x_hz": w.x / TWO_PI, "omega_y_hz": w.y / TWO_PI, "omega_z_hz": w.z / TWO_PI,
            "omega_x_prime_hz": wp.x / TWO_PI, "omega_y_prime_hz": wp.y / TWO_PI,
            "delta_omega_x_hz": (wp.x - w.x) / TWO_PI, "delta_omega_y_hz": (wp.y - w.y) / TWO_PI,
            "x_eq_m": r0.x, "y_eq_m": r0.y, "x_eq_prime_m": rp.x, "y_eq_prime_m": rp.y,
            "delta_j": delta, "delta_hz": delta / constants.h,
            "delta_approx_j": stark_delta_approx(t, cfg.offset, s, mm),
            "sideband_ratio": stark_sideband_ratio(t, cfg.offset, s, mm),
        })
    if args.format == "json":
        write_json(args.out, {"micromotion_correction": mm, "states": rows})
        return
    if args.format == "text":
        _write_text(args.out, _TEXT_COLUMNS, rows)
        return
    header = list(rows[0])
    write_csv(args.out, header, [[r[k] for k in header] for r in rows])


def cmd_fc_matrix(args):
    cfg = load_config(args.config)
    mm = _mm(cfg, args)
    lower, upper = _states(cfg, args)
    t = cfg.trap
    axis = args.axis
    w_lo = getattr(stark_frequencies(t, lower, mm), axis)
    w_up = getattr(stark_frequencies(t, upper, mm), axis)
    if args.ratio is not None:
        w_up = args.ratio * w_lo
    x_ho = characteristic_length(w_lo, t.mass)
    if args.shift_xho is not None:
        shift = args.shift_xho * x_ho
    else:
        r_lo = getattr(stark_equilibrium(t, cfg.offset, lower, mm), axis)
        r_up = getattr(stark_equilibrium(t, cfg.offset, upper, mm), axis)
        shift = r_lo - r_up
    a = OscillatorSpec(w_lo, 0.0, t.mass)
    b = OscillatorSpec(w_up, -shift, t.mass)
    mat = adaptive_overlap_matrix(a, b, args.n_max, tol=cfg.defaults["fc_tolerance"])
    n = args.n_max + 1
    header = {
        "axis": axis, "lower_state": lower.label, "upper_state": upper.label,
        "source": {"omega_hz": w_lo / TWO_PI, "center_m": 0.0, "mass_kg": t.mass},
        "target": {"omega_hz": w_up / TWO_PI, "center_m": -shift, "mass_kg": t.mass},
        "frequency_ratio": w_up / w_lo, "shift_m": shift, "shift_xho": shift / x_ho,
        "n_max": args.n_max, "tail_bound": mat.tail_bound,
    }
    rows = [[i] + list(mat.values[i, :n]) for i in range(n)]
    cols = ["n"] + [f"m{j}" for j in range(n)]
    if args.format == "json":
        header["values"] = mat.values[:n, :n]
        write_json(args.out, header)
        return
    if args.out in (None, "-"):
        sys.stdout.write("# " + json.dumps(to_jsonable(header), allow_nan=False) + "\n")
    else:
        write_json(str(args.out) + ".json", header)
    write_csv(args.out, cols, rows)


def _weights_from_args(cfg, args, mm):
    lower, upper = _states(cfg, args)
    n = PhononOccupation(args.nx, args.ny)
    x_shift = None
    if args.shift_xho is not None:
        w_lo = stark_frequencies(cfg.trap, lower, mm)
        x_shift = args.shift_xho * characteristic_length(w_lo.x, cfg.trap.mass)
    weights, omega_mean = stark_line_weights(cfg.trap, lower, upper, n, cfg.offset, mm, x_shift=x_shift,
                                             tol=cfg.defaults["fc_tolerance"])
    return weights, omega_mean, lower, upper, n


def cmd_spectrum(args):
    cfg = load_config(args.config)
    mm = _mm(cfg, args)
    weights, omega_mean, lower, upper, n = _weights_from_args(cfg, args, mm)
    if args.action == "synthesize":
        model = SpectrumModel(TWO_PI * args.rabi_hz, TWO_PI * args.linewidth_hz, TWO_PI * args.center_hz,
                              args.background, omega_mean, weights)
        det = TWO_PI * np.linspace(args.start_hz, args.stop_hz, args.points)
        scan = synthesize_scan(model, det, args.exposure, args.trials, _seed(cfg, args), kind=args.kind)
        rows = zip(scan.detunings / TWO_PI, scan.signal, scan.trials)
        if args.format == "json":
            write_json(args.out, {"detuning_hz": scan.detunings / TWO_PI, "signal": scan.signal,
                                  "trials": scan.trials, "kind": scan.kind, "exposure_s": scan.exposure})
        else:
            write_csv(args.out, ["detuning_hz", "signal", "trials"], rows)
        return
    if not args.input:
        raise ConfigError("spectrum fit needs --input")
    data = read_csv(args.input)
    for col in ("detuning_hz", "signal", "trials"):
        if col not in data:
            raise ConfigError(f"input CSV lacks column {col!r}")
    scan = SpectrumScan(TWO_PI * np.array(data["detuning_hz"], dtype=float), args.exposure,
                        np.array(data["signal"], dtype=float), np.array(data["trials"], dtype=int), args.kind)
    if args.free_shift:
        w_lo = stark_frequencies(cfg.trap, lower, mm)
        x_ho = characteristic_length(w_lo.x, cfg.trap.mass)
        start = (args.shift_xho or 0.0) * x_ho

        def weights_for(shift):
            return stark_line_weights(cfg.trap, lower, upper, n, cfg.offset, mm, x_shift=shift)[0]

        # --rabi-hz, --linewidth-hz, --center-hz, --background act as the calibration
        calib = SpectrumModel(TWO_PI * args.rabi_hz, TWO_PI * args.linewidth_hz, TWO_PI * args.center_hz,
                              args.background)
        fit = fit_spectrum_with_shift(scan, weights_for, omega_mean, start, x_ho, initial=calib)
    else:
        fit = fit_spectrum(scan, weights, omega_mean)
    m = fit.model
    payload = {
        "rabi_hz": m.rabi / TWO_PI, "linewidth_hz": m.linewidth / TWO_PI, "center_hz": m.center / TWO_PI,
        "background": m.background, "omega_mean_hz": m.omega_mean / TWO_PI,
        "uncertainties": {k + ("_m" if k == "shift" else ("" if k == "background" else "_hz")):
                          v / (1 if k in ("background", "shift") else TWO_PI) for k, v in fit.uncertainties.items()},
        "residual_norm": fit.residual_norm,
        "nfev": fit.nfev,
    }
    if fit.shift is not None:
        payload["shift_m"] = fit.shift
    _emit_report(args, payload)


def cmd_micromotion_fit(args):
    if not args.input:
        raise ConfigError("micromotion-fit needs --input")
    data = read_csv(args.input)
    for col in ("control", "shift_hz"):
        if col not in data:
            raise ConfigError(f"input CSV lacks column {col!r}")
    sigma = np.array(data["sigma_hz"], dtype=float) if "sigma_hz" in data else None
    scan = QuadraticScan(np.array(data["control"], dtype=float), np.array(data["shift_hz"], dtype=float), sigma)
    fit = fit_quadratic_turning_point(scan, polarizability=args.alpha)
    _emit_report(args, {
        "control": fit.control, "control_err": fit.control_err,
        "shift_hz": fit.shift, "shift_err_hz": fit.shift_err,
        "curvature_hz": fit.curvature, "curvature_err_hz": fit.curvature_err,
        "coefficients_hz": list(fit.coefficients),
    })


def cmd_mm_limit(args):
    if args.alpha is None or args.linewidth_hz is None:
        raise ConfigError("mm-limit needs --alpha and --linewidth-hz")
    e_res = residual_field_limit(args.alpha, args.linewidth_hz, args.resolution_fraction)
    _emit_report(args, {"alpha": args.alpha, "linewidth_hz": args.linewidth_hz,
                        "resolution_fraction": args.resolution_fraction, "residual_field_v_per_m": e_res})


def _scheme(cfg):
    s = cfg.scheme
    missing = [k for k in ("rabi_1", "rabi_2") if k not in s]
    if missing:
        raise ConfigError(f"[scheme] lacks {missing}")
    return LevelScheme(s["rabi_1"], s["rabi_2"], s.get("delta_intermediate", 0.0), s.get("delta_2photon", 0.0),
                       s.get("gamma_e", 0.0), s.get("gamma_r", 0.0))


def _sigmas(cfg):
    return {k[:-6]: v for k, v in cfg.scheme.items() if k.endswith("_sigma")}


def _times(cfg, args):
    t_max = (args.t_max_us if args.t_max_us is not None else cfg.scheme.get("t_max_us", 30.0)) * 1e-6
    points = args.points if args.points is not None else cfg.scheme.get("n_times", 301)
    return np.linspace(0.0, t_max, int(points))


def cmd_rabi(args):
    cfg = load_config(args.config)
    mm = _mm(cfg, args)
    lower, upper = _states(cfg, args)
    scheme = _scheme(cfg)
    times = _times(cfg, args)
    nbar = args.nbar if args.nbar is not None else cfg.scheme.get("nbar_sideband", 0.0)
    samples = args.samples if args.samples is not None else cfg.scheme.get("mc_samples", 100)
    w_lo = stark_frequencies(cfg.trap, lower, mm)
    w_up = stark_frequencies(cfg.trap, upper, mm)
    dwx, dwy = w_up.x - w_lo.x, w_up.y - w_lo.y
    dist = thermal_distribution(nbar, nbar)
    sig = _sigmas(cfg)
    central = {"rabi_1": scheme.rabi_1, "rabi_2": scheme.rabi_2,
               "delta_intermediate": scheme.delta_intermediate, "delta_2photon": scheme.delta_2photon,
               "gamma_e": scheme.gamma_e, "gamma_r": scheme.gamma_r,
               "delta_omega_x": dwx, "delta_omega_y": dwy}
    ens = ParameterEnsemble({k: (v, sig.get(k, 0.0)) for k, v in central.items()}, samples, _seed(cfg, args))
    band = monte_carlo_band(ens, dist, times)
    header = ["time_s", "p0_median", "p0_lo", "p0_hi"]
    cols = [times, band.median, band.lower, band.upper]
    if args.full:
        for level in LEVELS:
            header.append(f"p_{level}")
            cols.append(weighted_population(scheme, dist, dwx, dwy, times, level=level))
    if args.format == "json":
        write_json(args.out, dict(zip(header, cols)))
    else:
        write_csv(args.out, header, zip(*cols))


def cmd_figure(args):
    cfg = load_config(args.config)
    mm = _mm(cfg, args)
    lower, upper = _states(cfg, args)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    seed = _seed(cfg, args)
    t = cfg.trap
    if args.name == "fig1b":
        d = fig1b_data(t, lower, upper, micromotion_correction=mm)
        write_csv(out / "fig1b.csv", ["mode", "n", "shift_hz"], d["rows"])
        write_json(out / "fig1b.json", {"slope_x_hz": d["slope_x_hz"], "slope_y_hz": d["slope_y_hz"],
                                        "lower_state": lower.label, "upper_state": upper.label,
                                        "micromotion_correction": mm})
    elif args.name == "fig2b":
        d = fig2b_data(t, lower, upper, seed=seed, micromotion_correction=mm)
        write_csv(out / "fig2b.csv", ["control", "mean_square_field", "shift_hz", "shift_noisy_hz"],
                  zip(d["control"], d["mean_square_field"], d["shift_hz"], d["shift_noisy_hz"]))
        tp = d["turning_point"]
        write_json(out / "fig2b.json", {"turning_point": tp.control, "turning_point_err": tp.control_err,
                                        "shift_at_turning_point_hz": tp.shift / TWO_PI,
                                        "curvature_hz": tp.curvature / TWO_PI})
    elif args.name == "fig3":
        d = fig3_data(t, lower, upper, micromotion_correction=mm)
        rows, spec = [], []
        for i, p in enumerate(d["panels"]):
            rows += [(i, p["shift_xho"], m, v) for m, v in enumerate(p["overlap_row"])]
            spec += [(i, p["shift_xho"], x / TWO_PI, y) for x, y in zip(d["detunings"], p["spectrum"])]
        write_csv(out / "fig3_overlap.csv", ["panel", "shift_xho", "m", "overlap"], rows)
        write_csv(out / "fig3_spectra.csv", ["panel", "shift_xho", "detuning_hz", "depletion"], spec)
        write_json(out / "fig3.json", {"omega_mean_hz": d["omega_mean"] / TWO_PI, "x_ho_m": d["x_ho"],
                                       "frequency_ratio": d["frequency_ratio"],
                                       "weights": [{str(k): v for k, v in p["weights"].items() if v > 1e-12}
                                                   for p in d["panels"]]})
    else:
        scheme = _scheme(cfg)
        times = _times(cfg, args)
        d = fig4_data(t, lower, upper, scheme, times,
                      nbar_sideband=cfg.scheme.get("nbar_sideband", 0.1),
                      nbar_doppler=cfg.scheme.get("nbar_doppler", 10.0),
                      sigmas=_sigmas(cfg), samples=args.samples if args.samples is not None
                      else int(cfg.scheme.get("mc_samples", 100)), seed=seed, micromotion_correction=mm)
        rows = []
        for name in ("sideband", "doppler"):
            band = d[name]["band"]
            for k, time in enumerate(times):
                row = (time, name, d[name]["population"][k])
                # samples = 0 skips the Monte Carlo band
                rows.append(row if band is None else row + (band.median[k], band.lower[k], band.upper[k]))
        rows.sort(key=lambda r: (r[0], r[1]))
        header = ["time_s", "cooling", "p0"] + ([] if d["sideband"]["band"] is None else ["p0_median", "p0_lo", "p0_hi"])
        write_csv(out / "fig4.csv", header, rows)


def cmd_validate(args):
    from .config import resolve_config_path

    report = validate_config(resolve_config_path(args.config))
    write_json(args.out, report.as_dict())
    return EXIT_OK if report.ok else EXIT_CONFIG


def build_parser():
    common = _common()
    parser = _Parser(prog="rydion", description="Stark-modified trapping of polarizable ions.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("trap-info", parents=[common], help="trap parameters and derived quantities")
    sub.add_parser("stark-shift", parents=[_common(("csv", "json", "text"))],
                   help="Stark-modified frequencies and shifts per state")

    states = argparse.ArgumentParser(add_help=False)
    states.add_argument("--lower", help="label of the weakly polarizable state")
    states.add_argument("--upper", help="label of the Rydberg state")

    p = sub.add_parser("fc-matrix", parents=[common, states], help="Franck-Condon overlap table")
    p.add_argument("--axis", choices=("x", "y"), default="x")
    p.add_argument("--n-max", type=int, default=30)
    p.add_argument("--shift-xho", type=float, help="override displacement, in oscillator lengths")
    p.add_argument("--ratio", type=float, help="override omega'/omega")

    p = sub.add_parser("spectrum", parents=[common, states], help="synthesize or fit excitation spectra")
    p.add_argument("action", choices=("synthesize", "fit"))
    p.add_argument("--input", help="CSV with detuning_hz, signal, trials (fit)")
    p.add_argument("--nx", type=int, default=0)
    p.add_argument("--ny", type=int, default=0)
    p.add_argument("--shift-xho", type=float)
    p.add_argument("--free-shift", action="store_true", help="also fit the x displacement")
    p.add_argument("--rabi-hz", type=float, default=60e3)
    p.add_argument("--linewidth-hz", type=float, default=120e3)
    p.add_argument("--center-hz", type=float, default=0.0)
    p.add_argument("--background", type=float, default=0.0)
    p.add_argument("--exposure", type=float, default=20e-6)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--start-hz", type=float, default=-2e6)
    p.add_argument("--stop-hz", type=float, default=2e6)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--kind", choices=("survival", "depletion"), default="survival")

    p = sub.add_parser("micromotion-fit", parents=[common], help="turning point of a quadratic shift scan")
    p.add_argument("--input", help="CSV with control, shift_hz[, sigma_hz]")
    p.add_argument("--alpha", type=float, help="polarizability difference, for the curvature sign check")

    p = sub.add_parser("mm-limit", parents=[common], help="smallest resolvable residual rf field")
    p.add_argument("--alpha", type=float)
    p.add_argument("--linewidth-hz", type=float)
    p.add_argument("--resolution-fraction", type=float, default=0.1)

    p = sub.add_parser("rabi", parents=[common, states], help="phonon-averaged Rabi oscillations")
    p.add_argument("--nbar", type=float, help="mean phonon number per radial mode")
    p.add_argument("--samples", type=int)
    p.add_argument("--t-max-us", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--full", action="store_true", help="add per-level populations")

    p = sub.add_parser("figure", parents=[common, states], help="write data for one figure")
    p.add_argument("name", choices=("fig1b", "fig2b", "fig3", "fig4"))
    p.add_argument("--samples", type=int)
    p.add_argument("--t-max-us", type=float)
    p.add_argument("--points", type=int)

    sub.add_parser("validate", parents=[common], help="check a configuration file")
    return parser


COMMANDS = {
    "trap-info": cmd_trap_info,
    "stark-shift": cmd_stark_shift,
    "fc-matrix": cmd_fc_matrix,
    "spectrum": cmd_spectrum,
    "micromotion-fit": cmd_micromotion_fit,
    "mm-limit": cmd_mm_limit,
    "rabi": cmd_rabi,
    "figure": cmd_figure,
    "validate": cmd_validate,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code = COMMANDS[args.command](args)
    except ConfigError as exc:
        _diagnose(type(exc).__name__, str(exc), EXIT_CONFIG)
        return EXIT_CONFIG
    except PhysicsError as exc:
        _diagnose(type(exc).__name__, str(exc), EXIT_PHYSICS)
        return EXIT_PHYSICS
    except FitError as exc:
        _diagnose(type(exc).__name__, str(exc), EXIT_FIT)
        return EXIT_FIT
    except (RydionError, ValueError, OSError) as exc:
        _diagnose(type(exc).__name__, str(exc), EXIT_CONFIG)
        return EXIT_CONFIG
    return code or EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
