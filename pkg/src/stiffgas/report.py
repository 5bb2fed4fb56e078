"""Fit reports, parameter/error curve data and diagnostics tables."""

import csv
import io
import json

import numpy as np

from .data import WindowGrid
from .errors import DataFormatError
from .tables import PARAMETERS, SCALE, format_grid, range_labels

ERRORS = ("eps_p", "eps_T")
FLAGS = ("positive_pressure", "positive_temperature", "gamma_gt_one", "nonnegative_p_inf")


def _status(outcome):
    if outcome.result is None:
        return "degenerate" if outcome.window.is_degenerate else "failed"
    return "ok" if outcome.result.valid else "invalid"


def build_report(outcomes, grid, source=""):
    """Assemble a JSON-serializable report from :func:`stiffgas.fitting.fit_windows` output."""
    p_labels = range_labels(grid.p_edges, 1e-6)
    T_labels = range_labels(grid.T_edges)
    index = {key: ij for ij, key in grid.cells()}
    windows = []
    for out in outcomes:
        i, j = index[out.window.key]
        entry = {"i": i, "j": j, "p_range_MPa": p_labels[i], "T_range_K": T_labels[j],
                 "n_points": len(out.window.points), "status": _status(out)}
        if out.result is not None:
            r = out.result
            entry.update(r.params.as_dict())
            entry.update(eps_p=r.eps_p, eps_T=r.eps_T)
            entry.update({f: bool(getattr(r, f)) for f in FLAGS})
        else:
            entry["message"] = str(out.error)
        windows.append(entry)
    windows.sort(key=lambda w: (w["i"], w["j"]))
    return {
        "source": source,
        "p_edges_Pa": list(grid.p_edges),
        "T_edges_K": list(grid.T_edges),
        "windows": windows,
    }


def dump_report(report):
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def load_report(text):
    try:
        report = json.loads(text)
        grid = WindowGrid(tuple(report["p_edges_Pa"]), tuple(report["T_edges_K"]))
        report["windows"]
    except (ValueError, KeyError, TypeError) as exc:
        raise DataFormatError(f"not a fit report: {exc}") from None
    return report, grid


def report_grids(report):
    """Parameter grids in the printed scalings plus the two error grids; NaN where no fit."""
    n_p = len(report["p_edges_Pa"]) - 1
    n_T = len(report["T_edges_K"]) - 1
    grids = {name: np.full((n_p, n_T), np.nan) for name in PARAMETERS + ERRORS}
    for w in report["windows"]:
        if "gamma" not in w:
            continue
        for name in PARAMETERS:
            grids[name][w["i"], w["j"]] = w[name] * SCALE[name]
        for name in ERRORS:
            grids[name][w["i"], w["j"]] = w[name]
    return grids


def table_files(report, fmt):
    """Map file name -> contents for the six result tables."""
    ext = {"csv": "csv", "json": "json", "markdown": "md"}[fmt]
    grids = report_grids(report)
    p_edges, T_edges = report["p_edges_Pa"], report["T_edges_K"]
    return {f"{name}.{ext}": format_grid(name, grids[name], p_edges, T_edges, fmt)
            for name in PARAMETERS + ERRORS}


def diagnostics(report, fmt):
    cols = ["p_range_MPa", "T_range_K", "n_points", "status", *FLAGS, "message"]
    rows = [[w.get(c, "") for c in cols] for w in report["windows"]]
    if fmt == "json":
        return json.dumps([dict(zip(cols, r)) for r in rows], indent=2) + "\n"
    if fmt == "markdown":
        lines = ["| " + " | ".join(cols) + " |", "|---" * len(cols) + "|"]
        lines += ["| " + " | ".join(str(x) for x in r) + " |" for r in rows]
        return "\n".join(lines) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    writer.writerows(rows)
    return buf.getvalue()


def _mid(edges, scale=1.0):
    return [0.5 * (a + b) * scale for a, b in zip(edges, edges[1:])]


def parameter_curves(grids, p_edges, T_edges):
    """Rows (parameter, p_range_MPa, T_mid_K, value): one series per pressure range."""
    p_labels = range_labels(p_edges, 1e-6)
    T_mid = _mid(T_edges)
    rows = []
    for name in PARAMETERS:
        for i, label in enumerate(p_labels):
            for j, x in enumerate(T_mid):
                y = grids[name][i, j]
                if not np.isnan(y):
                    rows.append((name, label, x, float(y)))
    return rows


def error_curves(grids, p_edges, T_edges):
    """Rows (error, T_range_K, p_mid_MPa, value): one series per temperature range."""
    T_labels = range_labels(T_edges)
    p_mid = _mid(p_edges, 1e-6)
    rows = []
    for name in ERRORS:
        if name not in grids:
            continue
        for j, label in enumerate(T_labels):
            for i, x in enumerate(p_mid):
                y = grids[name][i, j]
                if not np.isnan(y):
                    rows.append((name, label, x, float(y)))
    return rows


def curves_csv(rows, header):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([r[0], r[1], repr(float(r[2])), repr(float(r[3]))])
    return buf.getvalue()


PARAMETER_CURVES_HEADER = ("parameter", "p_range_MPa", "T_mid_K", "value")
ERROR_CURVES_HEADER = ("error", "T_range_K", "p_mid_MPa", "value")

PLOT_SCRIPT = '''"""Plot the curve CSVs written next to this script (requires matplotlib)."""
import csv
from collections import defaultdict
from pathlib import Path

import matplotlib.pyplot as plt

HERE = Path(__file__).parent


def load(name):
    path = HERE / name
    if not path.exists():
        return {}
    out = defaultdict(lambda: defaultdict(list))
    with open(path, newline="") as f:
        reader = csv.reader(f)
        next(reader)
        for quantity, series, x, y in reader:
            out[quantity][series].append((float(x), float(y)))
    return out


for fname, xlabel in (("parameter_curves.csv", "temperature (K)"),
                      ("error_curves.csv", "pressure (MPa)")):
    for quantity, series in load(fname).items():
        fig, ax = plt.subplots()
        for label, pts in series.items():
            xs, ys = zip(*sorted(pts))
            ax.plot(xs, ys, marker="o", label=label)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(quantity)
        ax.legend(fontsize="small")
        fig.savefig(HERE / f"{quantity}.png", dpi=150)
        plt.close(fig)
'''
