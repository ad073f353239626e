"""Command-line surface.

Subcommands: spectrum, wavefunction, thermo, info, reproduce, figure.
Exit codes are a stable contract: 0 success, 2 configuration error, 3 a
requested state is unbound (without --allow-unbound), 4 a hard regression
tolerance was breached.

A JSON config file may supply any option of the chosen subcommand (keys are
the long option names with dashes as underscores); explicit flags override
the file, and unknown keys are rejected.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from .info import info_record, info_sweep
from .model import (
    NoBoundState,
    PotentialParams,
    QuantumNumbers,
    UNIT_PRESETS,
    bound_state_check,
    spectroscopic_to_qn,
)
from .output import rows_to_text, write_rows
from .quadrature import QuadraturePolicy
from .refdata import (
    BEST_INFO_CONVENTION,
    ENERGY_TOLERANCES,
    SWEEP_PARAMS,
    compare_energy_table,
    load_info_table,
    scan_info_conventions,
)
from .svgchart import line_chart
from .thermo import BACKENDS, thermo_series
from .wavefunction import build_bound_state

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNBOUND = 3
EXIT_TOLERANCE = 4


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_CONFIG):
        super().__init__(message)
        self.code = code


def _parse_float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok]
    except ValueError as exc:
        raise CliError(f"expected comma-separated numbers, got {text!r}: {exc}")


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok]
    except ValueError as exc:
        raise CliError(f"expected comma-separated integers, got {text!r}: {exc}")


def _parse_grid(text: str) -> list[float]:
    """'start:stop:count' inclusive grid, or a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise CliError(f"grid syntax is start:stop:count, got {text!r}")
        try:
            lo, hi, cnt = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise CliError(f"bad grid {text!r}: {exc}")
        if cnt < 1 or hi < lo:
            raise CliError(f"bad grid {text!r}")
        return [float(v) for v in np.linspace(lo, hi, cnt)]
    return _parse_float_list(text)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--preset", choices=sorted(UNIT_PRESETS),
                        help="unit preset (default table12: hbar^2/2mu = 1; "
                             "atomic: mu = hbar = 1)")
    parser.add_argument("--format", choices=("csv", "json"), dest="fmt",
                        help="output format (default csv)")
    parser.add_argument("--out", help="output path (or prefix for multi-file commands); "
                                      "stdout when omitted")
    parser.add_argument("--quad-tol", type=float, help="relative quadrature tolerance override")
    parser.add_argument("--config", help="JSON file with defaults for this subcommand")
    parser.add_argument("--seedless", action="store_true",
                        help="accepted for CI compatibility; all computation here is "
                             "deterministic with or without it")


def _add_potential(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--V0", type=float, help="1/r screened coefficient")
    parser.add_argument("--V1", type=float, help="unscreened Coulombic coefficient")
    parser.add_argument("--V2", type=float, help="1/r^2 screened coefficient")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="skhpot",
                                  description="Screened Kratzer-Hellmann potential toolkit")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="closed-form level energies")
    _add_common(p)
    _add_potential(p)
    p.add_argument("--alpha", help="screening parameter(s), comma separated")
    p.add_argument("--state", action="append",
                   help="spectroscopic label like 1s, 3d (repeatable or comma separated)")
    p.add_argument("--allow-unbound", action="store_true",
                   help="report non-normalizable rows (flagged) instead of exiting 3")

    p = sub.add_parser("wavefunction", help="sampled u, density, momentum profile")
    _add_common(p)
    _add_potential(p)
    p.add_argument("--alpha", type=float)
    p.add_argument("--n", type=int, help="radial quantum number")
    p.add_argument("--l", type=int, help="orbital quantum number")
    p.add_argument("--samples", type=int, help="grid points per emitted curve (default 8192)")
    p.add_argument("--svg", action="store_true", help="also write line charts")

    p = sub.add_parser("thermo", help="partition function and thermodynamic functions")
    _add_common(p)
    _add_potential(p)
    p.add_argument("--alpha", type=float)
    p.add_argument("--l", type=int)
    p.add_argument("--lambdas", help="upper bound quantum numbers, comma separated")
    p.add_argument("--beta-grid", help="beta grid as start:stop:count or comma list")
    p.add_argument("--backend", choices=BACKENDS)
    p.add_argument("--svg", action="store_true")

    p = sub.add_parser("info", help="Shannon entropies and Fisher information sweep")
    _add_common(p)
    _add_potential(p)
    p.add_argument("--alpha-grid", help="alpha grid as start:stop:count or comma list")
    p.add_argument("--n", dest="n_list", help="radial quantum numbers, comma separated")
    p.add_argument("--mirror-coulomb", action="store_true",
                   help="flip the signs of V0 and V1 (the attractive counterpart; "
                        "the convention closest to the bundled reference tables)")
    p.add_argument("--dimension", type=int, choices=(1, 3),
                   help="entropy convention (default 3)")

    p = sub.add_parser("reproduce", help="regress against a bundled reference table")
    _add_common(p)
    p.add_argument("table", choices=("table1", "table2", "table3", "table4"))
    p.add_argument("--tol", type=float, help="override the hard tolerance (tables 1 and 2)")

    p = sub.add_parser("figure", help="emit CSV+SVG data for the standard figures")
    _add_common(p)
    p.add_argument("--which", help="figure numbers 1-11, comma separated, or 'all' (default)")
    p.add_argument("--out-dir", help="output directory (default figures/)")

    return top


_PER_COMMAND_DEFAULTS = {
    "spectrum": {"preset": "table12", "fmt": "csv", "alpha": "0.1", "state": None,
                 "V0": 3.0, "V1": 5.0, "V2": 10.0},
    "wavefunction": {"preset": "table12", "fmt": "csv", "alpha": 0.1, "n": 0, "l": 0,
                     "V0": 3.0, "V1": 5.0, "V2": 10.0, "samples": 8192},
    "thermo": {"preset": "table12", "fmt": "csv", "alpha": 0.05, "l": 0,
               "lambdas": "5,10,15", "beta_grid": "0.1:5:50", "backend": "closed",
               "V0": 3.0, "V1": 5.0, "V2": 10.0},
    "info": {"preset": "atomic", "fmt": "csv", "alpha_grid": "0.1:0.9:9", "n_list": "0,1",
             "V0": 3.0, "V1": 5.0, "V2": 10.0, "dimension": 3},
    "reproduce": {"preset": "table12", "fmt": "csv"},
    "figure": {"preset": "table12", "fmt": "csv", "which": "all", "out_dir": "figures"},
}


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    """Layer defaults <- config file <- explicit flags (flags win)."""
    defaults = dict(_PER_COMMAND_DEFAULTS[args.command])
    if getattr(args, "config", None):
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read config {args.config}: {exc}")
        if not isinstance(loaded, dict):
            raise CliError("config file must hold a JSON object")
        known = set(vars(args))
        for key, value in loaded.items():
            dest = key.replace("-", "_")
            if dest not in known:
                raise CliError(f"unknown config key {key!r} for command {args.command!r}")
            defaults[dest] = value
    for dest, value in defaults.items():
        if getattr(args, dest, None) in (None, False) and value is not None:
            if isinstance(getattr(args, dest, None), bool) and not isinstance(value, bool):
                continue
            setattr(args, dest, value)
    return args


def _policy(args: argparse.Namespace) -> QuadraturePolicy:
    if getattr(args, "quad_tol", None):
        rt = float(args.quad_tol)
        if rt <= 0:
            raise CliError(f"--quad-tol must be positive, got {rt}")
        return QuadraturePolicy(rel_tol=rt, abs_tol=min(1e-14, rt * 1e-4))
    return QuadraturePolicy()


def _params(args: argparse.Namespace, alpha: float) -> PotentialParams:
    try:
        return PotentialParams(float(args.V0), float(args.V1), float(args.V2), float(alpha))
    except (TypeError, ValueError) as exc:
        raise CliError(f"bad potential parameters: {exc}")


def _emit(args: argparse.Namespace, header: list[str], rows: list[dict],
          suffix: str | None = None) -> None:
    text = rows_to_text(header, rows, args.fmt)
    if args.out:
        path = Path(args.out)
        if suffix is not None:
            path = path.with_name(f"{path.name}{suffix}.{args.fmt}")
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    else:
        sys.stdout.write(text)


# --- subcommands -------------------------------------------------------------


def cmd_spectrum(args: argparse.Namespace) -> int:
    units = UNIT_PRESETS[args.preset]
    state_arg = args.state or ["1s"]
    if isinstance(state_arg, str):
        state_arg = [state_arg]
    labels: list[str] = []
    for chunk in state_arg:
        labels.extend(tok for tok in chunk.split(",") if tok)
    alphas = _parse_float_list(str(args.alpha))
    rows = []
    any_unbound = False
    for label in labels:
        try:
            qn = spectroscopic_to_qn(label)
        except ValueError as exc:
            raise CliError(str(exc))
        for alpha in alphas:
            p = _params(args, alpha)
            diag = bound_state_check(p, qn, units)
            any_unbound = any_unbound or not diag.bound
            rows.append({
                "state": label, "n": qn.n, "l": qn.l, "alpha": alpha,
                "V0": p.V0, "V1": p.V1, "V2": p.V2,
                "energy": diag.energy, "bound": diag.bound,
            })
    _emit(args, ["state", "n", "l", "alpha", "V0", "V1", "V2", "energy", "bound"], rows)
    if any_unbound and not args.allow_unbound:
        print("error: at least one requested state is unbound "
              "(rerun with --allow-unbound to keep flagged rows)", file=sys.stderr)
        return EXIT_UNBOUND
    return EXIT_OK


def cmd_wavefunction(args: argparse.Namespace) -> int:
    units = UNIT_PRESETS[args.preset]
    policy = _policy(args)
    p = _params(args, args.alpha)
    try:
        state = build_bound_state(p, QuantumNumbers(int(args.n), int(args.l)), units, policy)
    except NoBoundState as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNBOUND
    samples = int(args.samples)
    r_top = math.log1p(state.bigG / state.eta) / p.alpha + 15.0 / state.decay_rate
    r = np.linspace(0.0, r_top, samples + 1)[1:]
    u = state.u(r)
    rows = [{"r": float(ri), "u": float(ui), "radial_pdf": float(ui * ui),
             "density3d": float(di)}
            for ri, ui, di in zip(r, u, state.density(r))]
    _emit(args, ["r", "u", "radial_pdf", "density3d"], rows, "_position")
    wrote_momentum = False
    if state.qn.l == 0:
        k_top = state.momentum_cutoff() * units.hbar
        # the visual/integration window: keep the part carrying ~all of |w|^2
        w_probe = np.geomspace(k_top * 1e-4, k_top, 257)
        wp = state.w(w_probe) ** 2
        significant = w_probe[wp > wp.max() * 1e-9]
        p_top = float(significant[-1]) if significant.size else k_top
        pgrid = np.linspace(0.0, p_top, samples + 1)[1:]
        w = state.w(pgrid)
        rows = [{"p": float(pi), "w": float(wi), "momentum_pdf": float(wi * wi),
                 "density3d": float(gi)}
                for pi, wi, gi in zip(pgrid, w, state.momentum_density(pgrid))]
        _emit(args, ["p", "w", "momentum_pdf", "density3d"], rows, "_momentum")
        wrote_momentum = True
    if args.svg and args.out:
        base = Path(args.out)
        line_chart(base.with_name(base.name + "_position.svg"), r.tolist(),
                   {"u(r)^2": (u * u).tolist()},
                   title=f"radial density n={state.qn.n} l={state.qn.l}",
                   x_label="r", y_label="u^2")
        if wrote_momentum:
            line_chart(base.with_name(base.name + "_momentum.svg"), pgrid.tolist(),
                       {"w(p)^2": (w * w).tolist()},
                       title=f"momentum density n={state.qn.n}", x_label="p", y_label="w^2")
    return EXIT_OK


def cmd_thermo(args: argparse.Namespace) -> int:
    units = UNIT_PRESETS[args.preset]
    p = _params(args, args.alpha)
    lambdas = _parse_int_list(str(args.lambdas))
    betas = _parse_grid(str(args.beta_grid))
    header = ["beta", "Z", "U", "F", "S", "C", "flag"]
    per_lambda = {}
    for lam in lambdas:
        series = thermo_series(p, units, int(args.l), lam, betas, args.backend)
        per_lambda[lam] = series
        rows = [{"beta": b, "Z": z, "U": u, "F": f, "S": s, "C": c, "flag": fl}
                for b, z, u, f, s, c, fl in zip(series.beta_grid, series.Z, series.U,
                                                series.F, series.S, series.C, series.flags)]
        _emit(args, header, rows, f"_lam{lam}" if args.out else None)
    if args.svg and args.out:
        base = Path(args.out)
        for quantity in ("Z", "U", "F", "S", "C"):
            line_chart(
                base.with_name(base.name + f"_{quantity}.svg"), betas,
                {f"lambda={lam}": getattr(per_lambda[lam], quantity) for lam in lambdas},
                title=f"{quantity} versus beta ({args.backend} backend)",
                x_label="beta", y_label=quantity,
            )
    return EXIT_OK


def cmd_info(args: argparse.Namespace) -> int:
    units = UNIT_PRESETS[args.preset]
    policy = _policy(args)
    n_list = _parse_int_list(str(args.n_list))
    if any(n not in (0, 1) for n in n_list):
        raise CliError("information measures support n in {0,1}")
    alphas = _parse_grid(str(args.alpha_grid))
    base = _params(args, alphas[0])
    if args.mirror_coulomb:
        base = base.mirrored()
    records = info_sweep(base, units, n_list, alphas, int(args.dimension), policy)
    header = ["alpha", "n", "S_r", "S_p", "S_t", "I_r", "I_p", "product",
              "bbm_ok", "fisher_ok", "bound"]
    rows = [{h: getattr(rec, h) for h in header} for rec in records]
    _emit(args, header, rows)
    return EXIT_OK


def cmd_reproduce(args: argparse.Namespace) -> int:
    if args.table in ("table1", "table2"):
        tol = args.tol if args.tol is not None else ENERGY_TOLERANCES[args.table]
        t0 = time.time()
        devs = compare_energy_table(args.table, UNIT_PRESETS[args.preset])
        elapsed = time.time() - t0
        rows = [{
            "state": d.row.state, "alpha": d.row.alpha,
            "V0": d.row.params.V0, "V1": d.row.params.V1, "V2": d.row.params.V2,
            "reference": d.row.reference, "computed": d.computed,
            "abs_dev": d.abs_dev, "rel_dev": d.rel_dev, "bound": d.bound,
        } for d in devs]
        _emit(args, ["state", "alpha", "V0", "V1", "V2", "reference", "computed",
                     "abs_dev", "rel_dev", "bound"], rows)
        max_dev = max(d.abs_dev for d in devs)
        ok = max_dev <= tol
        print(f"{args.table}: {len(devs)} rows, max |dev| = {max_dev:.3e}, "
              f"tolerance {tol:.1e}, {elapsed*1e3:.0f} ms -> {'PASS' if ok else 'FAIL'}",
              file=sys.stderr)
        unbound = [d for d in devs if not d.bound]
        if unbound:
            print(f"  {len(unbound)} rows flagged unbound (reported, not suppressed)",
                  file=sys.stderr)
        return EXIT_OK if ok else EXIT_TOLERANCE

    # tables 3 and 4: convention scan, report-only
    policy = _policy(args)
    results = scan_info_conventions(policy)
    print("convention scan (best first):", file=sys.stderr)
    for res in results:
        fisher = ("-" if res.rms_log10_fisher is None
                  else f"{res.rms_log10_fisher:7.4f} decades")
        print(f"  preset={res.preset:8s} sign={res.sign:9s} D={res.dimension}: "
              f"entropy RMS {res.rms_entropy:7.4f} nats, Fisher RMS {fisher}",
              file=sys.stderr)
    best = results[0]
    print(f"selected: preset={best.preset} sign={best.sign} D={best.dimension}",
          file=sys.stderr)

    units = UNIT_PRESETS[best.preset]
    params = SWEEP_PARAMS if best.sign == "given" else SWEEP_PARAMS.mirrored()
    refs = load_info_table(args.table)
    alphas = sorted({r.alpha for r in refs})
    records = {(r.alpha, r.n): r
               for r in info_sweep(params, units, (0, 1), alphas, best.dimension, policy)}
    keys = ("S_r", "S_p", "S_t") if args.table == "table3" else ("I_r", "I_p", "product")
    rows = []
    for ref in refs:
        rec = records[(ref.alpha, ref.n)]
        row = {"alpha": ref.alpha, "n": ref.n}
        for key in keys:
            computed = getattr(rec, key)
            row[f"{key}_ref"] = ref.values[key]
            row[f"{key}"] = computed
            row[f"{key}_dev"] = computed - ref.values[key]
        rows.append(row)
    header = ["alpha", "n"]
    for key in keys:
        header += [f"{key}_ref", key, f"{key}_dev"]
    _emit(args, header, rows)
    return EXIT_OK


def _figure_list(text: str) -> list[int]:
    if text == "all":
        return list(range(1, 12))
    nums = _parse_int_list(text)
    bad = [n for n in nums if not 1 <= n <= 11]
    if bad:
        raise CliError(f"figure numbers must lie in 1..11, got {bad}")
    return nums


def cmd_figure(args: argparse.Namespace) -> int:
    which = _figure_list(str(args.which))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    preset, sign, dimension = BEST_INFO_CONVENTION
    units = UNIT_PRESETS[preset]
    sweep_params = SWEEP_PARAMS if sign == "given" else SWEEP_PARAMS.mirrored()
    policy = _policy(args)

    thermo_figs = {1: "Z", 2: "F", 3: "U", 4: "S", 5: "C"}
    if any(n in thermo_figs for n in which):
        p = PotentialParams(3.0, 5.0, 10.0, 0.05)
        t_units = UNIT_PRESETS["table12"]
        lambdas = (5, 10, 15)
        betas = [float(b) for b in np.linspace(0.1, 5.0, 60)]
        series = {lam: thermo_series(p, t_units, 0, lam, betas, "closed") for lam in lambdas}
        names = {"Z": "partition_function", "F": "free_energy", "U": "internal_energy",
                 "S": "entropy", "C": "heat_capacity"}
        for fig_no, quantity in thermo_figs.items():
            if fig_no not in which:
                continue
            stem = f"fig{fig_no:02d}_{names[quantity]}"
            header = ["beta"] + [f"{quantity}_lam{lam}" for lam in lambdas]
            rows = [dict({"beta": b},
                         **{f"{quantity}_lam{lam}": getattr(series[lam], quantity)[i]
                            for lam in lambdas})
                    for i, b in enumerate(betas)]
            write_rows(out / f"{stem}.{args.fmt}", header, rows, args.fmt)
            line_chart(out / f"{stem}.svg", betas,
                       {f"lambda={lam}": getattr(series[lam], quantity) for lam in lambdas},
                       title=f"{names[quantity].replace('_', ' ')} versus beta",
                       x_label="beta", y_label=quantity)

    if 6 in which or 7 in which:
        alpha = 0.1
        states = {n: build_bound_state(
            PotentialParams(sweep_params.V0, sweep_params.V1, sweep_params.V2, alpha),
            QuantumNumbers(n, 0), units, policy) for n in (0, 1)}
        samples = 8192
        if 6 in which:
            r_top = max(math.log1p(s.bigG / s.eta) / alpha + 15.0 / s.decay_rate
                        for s in states.values())
            r = np.linspace(0.0, r_top, samples + 1)[1:]
            curves = {n: states[n].u(r) ** 2 for n in (0, 1)}
            rows = [{"r": float(r[i]), "radial_pdf_n0": float(curves[0][i]),
                     "radial_pdf_n1": float(curves[1][i])} for i in range(r.size)]
            write_rows(out / f"fig06_density_position.{args.fmt}",
                       ["r", "radial_pdf_n0", "radial_pdf_n1"], rows, args.fmt)
            line_chart(out / "fig06_density_position.svg", r.tolist(),
                       {"n=0": curves[0].tolist(), "n=1": curves[1].tolist()},
                       title="position-space radial density (u^2)",
                       x_label="r", y_label="u^2")
        if 7 in which:
            # evaluate each state's w on the window that carries its density
            p_tops = {}
            for n, s in states.items():
                k_top = s.momentum_cutoff() * units.hbar
                probe = np.geomspace(k_top * 1e-4, k_top, 257)
                w2 = s.w(probe) ** 2
                sig = probe[w2 > w2.max() * 1e-9]
                p_tops[n] = float(sig[-1]) if sig.size else k_top
            p_top = max(p_tops.values())
            pg = np.linspace(0.0, p_top, samples + 1)[1:]
            curves = {n: states[n].w(pg) ** 2 for n in (0, 1)}
            rows = [{"p": float(pg[i]), "momentum_pdf_n0": float(curves[0][i]),
                     "momentum_pdf_n1": float(curves[1][i])} for i in range(pg.size)]
            write_rows(out / f"fig07_density_momentum.{args.fmt}",
                       ["p", "momentum_pdf_n0", "momentum_pdf_n1"], rows, args.fmt)
            line_chart(out / "fig07_density_momentum.svg", pg.tolist(),
                       {"n=0": curves[0].tolist(), "n=1": curves[1].tolist()},
                       title="momentum-space density (w^2)", x_label="p", y_label="w^2")

    sweep_figs = {8: ("S_r", "position Shannon entropy"),
                  9: ("S_p", "momentum Shannon entropy"),
                  10: ("I_r", "position Fisher information"),
                  11: ("I_p", "momentum Fisher information")}
    if any(n in sweep_figs for n in which):
        alphas = [round(0.1 * i, 1) for i in range(1, 10)]
        records = info_sweep(sweep_params, units, (0, 1), alphas, dimension, policy)
        by_n = {n: [r for r in records if r.n == n] for n in (0, 1)}
        for fig_no, (key, label) in sweep_figs.items():
            if fig_no not in which:
                continue
            stem = f"fig{fig_no:02d}_{key}"
            rows = [{"alpha": a, f"{key}_n0": getattr(by_n[0][i], key),
                     f"{key}_n1": getattr(by_n[1][i], key)}
                    for i, a in enumerate(alphas)]
            write_rows(out / f"{stem}.{args.fmt}", ["alpha", f"{key}_n0", f"{key}_n1"], rows, args.fmt)
            line_chart(out / f"{stem}.svg", alphas,
                       {"n=0": [getattr(r, key) for r in by_n[0]],
                        "n=1": [getattr(r, key) for r in by_n[1]]},
                       title=f"{label} versus screening parameter",
                       x_label="alpha", y_label=key)
    return EXIT_OK


_DISPATCH = {
    "spectrum": cmd_spectrum,
    "wavefunction": cmd_wavefunction,
    "thermo": cmd_thermo,
    "info": cmd_info,
    "reproduce": cmd_reproduce,
    "figure": cmd_figure,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed the message; normalize its code
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        args = _merge_config(args)
        return _DISPATCH[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except NoBoundState as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNBOUND


if __name__ == "__main__":
    sys.exit(main())
