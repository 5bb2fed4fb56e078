"""
Command-line interface.

Exit codes: 0 success, 1 input/IO error, 2 finished but some windows
could not be fitted validly.
"""

import argparse
import json
import math
import sys
from pathlib import Path

from . import eos
from .data import WindowGrid, grid_values, parse_isobaric_file, partition, synthesize, to_canonical_csv
from .errors import StiffGasError
from .fitting import fit_windows
from .report import (ERROR_CURVES_HEADER, PARAMETER_CURVES_HEADER, PLOT_SCRIPT, build_report,
                     curves_csv, diagnostics, dump_report, error_curves, load_report,
                     parameter_curves, report_grids, table_files)
from .tables import PARAMETERS, SCALE, builtin_table

EXIT_OK, EXIT_INPUT, EXIT_INVALID = 0, 1, 2


class UsageError(Exception):
    pass


def _floats(text, n=None):
    try:
        vals = [float(x) for x in text.split(":")]
    except ValueError:
        raise UsageError(f"cannot parse {text!r} as colon-separated numbers") from None
    if n is not None and len(vals) not in (n if isinstance(n, tuple) else (n,)):
        raise UsageError(f"expected {n} colon-separated numbers, got {text!r}")
    return vals


def _edges(text):
    vals = _floats(text, (2, 3))
    if len(vals) == 2:
        return vals
    try:
        return grid_values(*vals)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _kv(pairs):
    out = {}
    for item in pairs or ():
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"expected NAME=VALUE, got {item!r}")
        out[key.strip()] = val.strip()
    return out


def _write(path, text):
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text, encoding="utf-8")


def _write_files(outdir, files):
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (outdir / name).write_text(text, encoding="utf-8")


def _load_dataset(args):
    for path in args.inputs:
        if not Path(path).is_file():
            raise UsageError(f"input file not found: {path}")
    dataset = None
    for path in args.inputs:
        ds = parse_isobaric_file(Path(path).read_bytes(), _kv(args.column), _kv(args.unit),
                                 source=Path(path).name, phases=args.phase)
        dataset = ds if dataset is None else dataset.merge(ds)
    return dataset


def _grid(args):
    kwargs = {}
    if args.p_edges:
        kwargs["p_edges"] = tuple(_edges(args.p_edges))
    if args.T_edges:
        kwargs["T_edges"] = tuple(_edges(args.T_edges))
    return WindowGrid(**kwargs)


def _run_fit(args):
    dataset = _load_dataset(args)
    grid = _grid(args)
    outcomes = fit_windows(partition(dataset, grid), jobs=args.jobs)
    return build_report(outcomes, grid, source=dataset.source), outcomes


def cmd_fit(args):
    report, outcomes = _run_fit(args)
    files = table_files(report, args.format)
    ext = {"csv": "csv", "json": "json", "markdown": "md"}[args.format]
    files[f"diagnostics.{ext}"] = diagnostics(report, args.format)
    files["fit_report.json"] = dump_report(report)
    _write_files(args.out, files)
    bad = [w for w in report["windows"] if w["status"] != "ok"]
    for w in bad:
        print(f"window {w['p_range_MPa']} MPa x {w['T_range_K']} K: {w['status']}"
              + (f" ({w['message']})" if "message" in w else ""), file=sys.stderr)
    return EXIT_INVALID if bad else EXIT_OK


def cmd_curves(args):
    if args.report:
        if not Path(args.report).is_file():
            raise UsageError(f"report not found: {args.report}")
        report, grid = load_report(Path(args.report).read_text(encoding="utf-8"))
        grids = report_grids(report)
    elif args.inputs:
        report, _ = _run_fit(args)
        grid = WindowGrid(tuple(report["p_edges_Pa"]), tuple(report["T_edges_K"]))
        grids = report_grids(report)
    else:
        table = builtin_table()
        grid = WindowGrid(table.p_edges, table.T_edges)
        grids = dict(table.scaled)
    files = {"parameter_curves.csv": curves_csv(parameter_curves(grids, grid.p_edges, grid.T_edges),
                                                PARAMETER_CURVES_HEADER)}
    err = error_curves(grids, grid.p_edges, grid.T_edges)
    if err:
        files["error_curves.csv"] = curves_csv(err, ERROR_CURVES_HEADER)
    if args.plot_script:
        files["plot_curves.py"] = PLOT_SCRIPT
    _write_files(args.out, files)
    return EXIT_OK


def _params_doc(params):
    si = params.as_dict()
    return {"si": si, "table_scaled": {k: si[k] * SCALE[k] for k in PARAMETERS}}


def _params_text(params):
    d = _params_doc(params)
    lines = ["SI:"]
    units = {"gamma": "", "q": " J/kg", "p_inf": " Pa", "c_v": " J/(kg K)"}
    lines += [f"  {k} = {d['si'][k]:.6g}{units[k]}" for k in PARAMETERS]
    lines.append("table scaling (gamma, -q*1e-6, p_inf*1e-9, c_v*1e-4):")
    lines += [f"  {k} = {d['table_scaled'][k]:.5g}" for k in PARAMETERS]
    return "\n".join(lines) + "\n"


def cmd_lookup(args):
    table = builtin_table()
    if args.p_range or args.T_range:
        if not (args.p_range and args.T_range):
            raise UsageError("--p-range and --T-range must be given together")
        p_lo, p_hi = _floats(args.p_range, 2)
        T_lo, T_hi = _floats(args.T_range, 2)
        params = table.lookup_range(p_lo, p_hi, T_lo, T_hi, scheme=args.scheme)
    elif args.p is not None and args.T is not None:
        params = table.lookup(args.p, args.T)
    else:
        raise UsageError("give --p and --T, or --p-range and --T-range")
    text = json.dumps(_params_doc(params), indent=2) + "\n" if args.format == "json" else _params_text(params)
    _write(args.out, text)
    return EXIT_OK


def _explicit_params(args):
    given = [args.gamma, args.q, args.p_inf, args.cv]
    if all(x is None for x in given):
        return None
    if any(x is None for x in given):
        raise UsageError("--gamma, --q, --p-inf and --cv must be given together")
    return eos.SgParams(*given)


def cmd_eval(args):
    params = _explicit_params(args)
    out = {}
    if args.rho is not None and args.e is not None:
        rho, e = args.rho, args.e
        if params is None:
            if args.at is None:
                raise UsageError("with --rho/--e, give explicit parameters or --at P:T")
            params = builtin_table().lookup(*_floats(args.at, 2))
        p = eos.pressure(params, rho, e)
        T = eos.temperature(params, rho, e)
    elif args.p is not None and args.T is not None:
        p, T = args.p, args.T
        if params is None:
            params = builtin_table().lookup(*(_floats(args.at, 2) if args.at else (p, T)))
        rho = eos.density_from_pT(params, p, T)
        e = eos.energy_from_rhoT(params, rho, T)
        out.update(rho=rho, e=e)
    else:
        raise UsageError("give the state as --rho and --e, or --p and --T")
    c2 = eos.sound_speed_sq(params, rho, p)
    out.update(p=p, T=T, c2=c2, c=math.sqrt(c2),
               adiabatic_gamma=eos.adiabatic_gamma(params, p),
               gruneisen=eos.gruneisen(params),
               fundamental_derivative=eos.fundamental_derivative(params))
    if args.format == "json":
        text = json.dumps({"params": params.as_dict(), "state": out}, indent=2) + "\n"
    else:
        units = {"rho": "kg/m^3", "e": "J/kg", "p": "Pa", "T": "K", "c2": "m^2/s^2", "c": "m/s"}
        text = "".join(f"{k} = {v:.10g} {units.get(k, '')}".rstrip() + "\n" for k, v in out.items())
    _write(args.out, text)
    return EXIT_OK


def cmd_synth(args):
    params = _explicit_params(args)
    if params is None:
        if args.at is None:
            raise UsageError("give --gamma/--q/--p-inf/--cv or --at P:T")
        params = builtin_table().lookup(*_floats(args.at, 2))
    dataset = synthesize(params, _edges(args.p_grid), _edges(args.T_grid),
                         noise=args.noise, seed=args.seed)
    _write(args.out, to_canonical_csv(dataset))
    return EXIT_OK


def cmd_export_tables(args):
    table = builtin_table()
    names = PARAMETERS if args.which == "all" else (args.which,)
    ext = {"csv": "csv", "json": "json", "markdown": "md"}[args.format]
    files = {f"{name}.{ext}": table.export(name, args.format) for name in names}
    if args.out is None or args.out == "-":
        sys.stdout.write("\n".join(files.values()))
    else:
        _write_files(args.out, files)
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json", "markdown"), default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS,
                        help="output directory (fit, curves, export-tables) or file (others)")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="stiffgas", description="Stiffened-gas EOS fitting for liquid water.")
    parser.add_argument("--format", choices=("csv", "json", "markdown"), default="csv")
    parser.add_argument("--out", default=None)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def data_opts(p, required):
        p.add_argument("inputs", nargs="+" if required else "*", help="isobaric data files")
        p.add_argument("--column", action="append", metavar="NAME=HEADER",
                       help="map a logical column (T, p, v, rho, e, phase) to a header name")
        p.add_argument("--unit", action="append", metavar="NAME=UNIT", help="override a column unit")
        p.add_argument("--phase", action="append", default=None,
                       help="accepted phase label when a phase column exists (default: liquid)")
        p.add_argument("--p-edges", help="pressure window edges in Pa, LO:HI:STEP")
        p.add_argument("--T-edges", help="temperature window edges in K, LO:HI:STEP")

    def param_opts(p):
        p.add_argument("--gamma", type=float)
        p.add_argument("--q", type=float)
        p.add_argument("--p-inf", type=float)
        p.add_argument("--cv", type=float)
        p.add_argument("--at", metavar="P:T", help="use the tabulated parameters at (P Pa, T K)")

    p = sub.add_parser("fit", parents=[common], help="fit every window of a dataset")
    data_opts(p, True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("curves", parents=[common], help="emit parameter and error curve data")
    data_opts(p, False)
    p.add_argument("--report", help="fit_report.json written by `fit`")
    p.add_argument("--plot-script", action="store_true", help="also write a matplotlib script")
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("lookup", parents=[common], help="tabulated parameters at a state or range")
    p.add_argument("--p", type=float)
    p.add_argument("--T", type=float)
    p.add_argument("--p-range", metavar="LO:HI")
    p.add_argument("--T-range", metavar="LO:HI")
    p.add_argument("--scheme", choices=("area-weighted", "uniform"), default="area-weighted")
    p.set_defaults(func=cmd_lookup)

    p = sub.add_parser("eval", parents=[common], help="evaluate the EOS at a state")
    param_opts(p)
    p.add_argument("--rho", type=float)
    p.add_argument("--e", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--T", type=float)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", parents=[common], help="write a synthetic dataset")
    param_opts(p)
    p.add_argument("--p-grid", default="25e6:300e6:5e6", help="pressures in Pa, LO:HI:STEP")
    p.add_argument("--T-grid", default="300:625:1", help="temperatures in K, LO:HI:STEP")
    p.add_argument("--noise", type=float, default=0.0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("export-tables", parents=[common], help="write the embedded parameter tables")
    p.add_argument("--which", default="all", choices=("all", *PARAMETERS))
    p.set_defaults(func=cmd_export_tables)
    return parser


def _join_negative_values(argv):
    # argparse takes "-1e6" for an option flag; rewrite "--q -1e6" as "--q=-1e6".
    out, k = [], 0
    while k < len(argv):
        tok = argv[k]
        if tok.startswith("--") and "=" not in tok and k + 1 < len(argv) and argv[k + 1].startswith("-"):
            try:
                float(argv[k + 1])
            except ValueError:
                pass
            else:
                out.append(f"{tok}={argv[k + 1]}")
                k += 2
                continue
        out.append(tok)
        k += 1
    return out


def main(argv=None):
    parser = build_parser()
    argv = _join_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # usage errors map to the input-error code; --help stays 0
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    if args.command in ("fit", "curves") and args.out is None:
        args.out = "."
    if getattr(args, "phase", None) is None and hasattr(args, "phase"):
        args.phase = ["liquid"]
    try:
        return args.func(args)
    except (UsageError, StiffGasError, ValueError, OSError) as exc:
        print(f"stiffgas {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
