"""
Published stiffened-gas parameters for liquid water, 25-300 MPa x 300-625 K.

Each table has 11 pressure rows (25 MPa wide) and 13 temperature columns
(25 K wide).  Values are kept exactly as printed, in the printed scalings:

    gamma,  -q * 1e-6 (J/kg),  p_inf * 1e-9 (Pa),  c_v * 1e-4 (J/(kg K))

and converted to SI on access.  Point lookup uses half-open cells
[p_i, p_i+1) x [T_j, T_j+1) with the top edges folded into the last cell.
"""

from dataclasses import dataclass, field
from decimal import Decimal
from functools import lru_cache
import csv
import io
import json

import numpy as np

from .eos import SgParams
from .errors import DataFormatError, RangeError

PARAMETERS = ("gamma", "q", "p_inf", "c_v")

#: table value = SCALE[name] * SI value
SCALE = {"gamma": 1.0, "q": -1e-6, "p_inf": 1e-9, "c_v": 1e-4}
#: SI value = UNSCALE[name] * table value
UNSCALE = {"gamma": 1.0, "q": -1e6, "p_inf": 1e9, "c_v": 1e4}

CAPTIONS = {
    "gamma": "gamma",
    "q": "-q x 1e-6 (J/kg)",
    "p_inf": "p_inf x 1e-9 (Pa)",
    "c_v": "c_v x 1e-4 (J/(kg K))",
    "eps_p": "relative pressure error eps_p",
    "eps_T": "relative temperature error eps_T",
}

_ALIASES = {"gamma": "gamma", "q": "q", "p_inf": "p_inf", "pinf": "p_inf", "p∞": "p_inf",
            "c_v": "c_v", "cv": "c_v"}

P_EDGES = tuple(float(p) * 1e6 for p in range(25, 301, 25))
T_EDGES = tuple(float(T) for T in range(300, 626, 25))

_GAMMA = """
1.2424 1.3381 1.4135 1.4712 1.5140 1.5442 1.5618 1.5698 1.5684 1.5590 1.5429 1.5207 1.5014
1.2637 1.3538 1.4263 1.4822 1.5247 1.5556 1.5741 1.5849 1.5860 1.5804 1.5687 1.5517 1.5305
1.2855 1.3696 1.4384 1.4935 1.5361 1.5654 1.5848 1.5966 1.6008 1.5982 1.5898 1.5768 1.5604
1.3074 1.3856 1.4512 1.5049 1.5450 1.5751 1.5969 1.6088 1.6135 1.6137 1.6069 1.5969 1.5830
1.3292 1.4018 1.4638 1.5152 1.5551 1.5862 1.6061 1.6197 1.6262 1.6263 1.6221 1.6135 1.6026
1.3507 1.4178 1.4767 1.5259 1.5653 1.5951 1.6162 1.6292 1.6366 1.6386 1.6355 1.6286 1.6192
1.3718 1.4337 1.4894 1.5368 1.5748 1.6048 1.6261 1.6405 1.6472 1.6497 1.6474 1.6415 1.6331
1.3924 1.4494 1.5020 1.5475 1.5846 1.6145 1.6347 1.6475 1.6571 1.6598 1.6588 1.6539 1.6456
1.4124 1.4647 1.5143 1.5580 1.5942 1.6223 1.6418 1.6577 1.6658 1.6687 1.6674 1.6634 1.6567
1.4318 1.4798 1.5267 1.5686 1.6035 1.6311 1.6517 1.6658 1.6729 1.6774 1.6773 1.6740 1.6676
1.4507 1.4947 1.5386 1.5787 1.6127 1.6397 1.6596 1.6736 1.6821 1.6868 1.6868 1.6835 1.6777
"""
_NEG_Q_E6 = """
10.229 7.4583 5.9632 4.9684 4.2132 3.5888 3.0462 2.5478 2.0786 1.6228 1.1668 0.6981 0.1848
9.8755 7.4981 6.1147 5.1651 4.4294 3.8227 3.2988 2.8197 2.3782 1.9534 1.5427 1.1368 0.7313
9.5622 7.5243 6.2503 5.3350 4.6227 4.0381 3.5282 3.0660 2.6412 2.2377 1.8526 1.4788 1.1140
9.2909 7.5404 6.3650 5.4912 4.8095 4.2369 3.7354 3.2894 2.8774 2.4897 2.1245 1.7713 1.4302
9.0570 7.5490 6.4663 5.6351 4.9747 4.4108 3.9286 3.4929 3.0951 2.7200 2.3684 2.0318 1.7061
8.8574 7.5549 6.5561 5.7668 5.1212 4.5792 4.1039 3.6825 3.2950 2.9321 2.5882 2.2640 1.9522
8.6898 7.5581 6.6373 5.8862 5.2607 4.7347 4.2708 3.8573 3.4790 3.1262 2.7948 2.4823 2.1806
8.5469 7.5620 6.7110 5.9958 5.3943 4.8756 4.4251 4.0254 3.6531 3.3108 2.9879 2.6815 2.3917
8.4281 7.5648 6.7784 6.0979 5.5164 5.0104 4.5814 4.1800 3.8214 3.4837 3.1681 2.8705 2.5872
8.3278 7.5687 6.8403 6.1928 5.6319 5.1434 4.7126 4.3229 3.9754 3.6472 3.3373 3.0477 2.7709
8.2448 7.5748 6.8996 6.2827 5.7397 5.2651 4.8461 4.4662 4.1225 3.7963 3.5001 3.2141 2.9442
"""

_P_INF_E9 = """
2.0132 1.9161 1.7911 1.6543 1.5109 1.3641 1.2150 1.0659 0.9181 0.7725 0.6299 0.4908 0.3565
2.0822 1.9936 1.8757 1.7433 1.6030 1.4608 1.3162 1.1732 1.0316 0.8925 0.7582 0.6290 0.5064
2.1495 2.0685 1.9556 1.8269 1.6915 1.5514 1.4105 1.2713 1.1350 1.0008 0.8713 0.7472 0.6301
2.2155 2.1409 2.0329 1.9082 1.7750 1.6386 1.5023 1.3657 1.2309 1.1011 0.9746 0.8538 0.7389
2.2800 2.2110 2.1066 1.9845 1.8555 1.7221 1.5867 1.4540 1.3237 1.1944 1.0713 0.9524 0.8398
2.3434 2.2791 2.1785 2.0595 1.9314 1.8011 1.6685 1.5375 1.4096 1.2841 1.1614 1.0446 0.9335
2.4056 2.3453 2.2482 2.1321 2.0050 1.8787 1.7486 1.6207 1.4924 1.3685 1.2482 1.1331 1.0226
2.4667 2.4101 2.3158 2.2017 2.0785 1.9526 1.8232 1.6960 1.5726 1.4504 1.3321 1.2173 1.1076
2.5262 2.4725 2.3810 2.2692 2.1485 2.0212 1.8973 1.7734 1.6506 1.5281 1.4096 1.2967 1.1884
2.5851 2.5338 2.4450 2.3355 2.2164 2.0929 1.9686 1.8440 1.7219 1.6037 1.4869 1.3755 1.2671
2.6430 2.5939 2.5071 2.3995 2.2822 2.1608 2.0383 1.9155 1.7957 1.6767 1.5631 1.4506 1.3432
"""

_C_V_E4 = """
2.6854 1.7178 1.2425 0.9604 0.7724 0.6372 0.5356 0.4546 0.3882 0.3316 0.2814 0.2349 0.1871
2.5560 1.7112 1.2644 0.9907 0.8041 0.6692 0.5681 0.4870 0.4219 0.3667 0.3193 0.2774 0.2395
2.4401 1.7015 1.2834 1.0157 0.8314 0.6988 0.5975 0.5168 0.4514 0.3967 0.3502 0.3098 0.2742
2.3380 1.6896 1.2976 1.0381 0.8587 0.7258 0.6231 0.5431 0.4779 0.4231 0.3774 0.3375 0.3028
2.2484 1.6762 1.3092 1.0587 0.8817 0.7482 0.6477 0.5671 0.5018 0.4474 0.4016 0.3623 0.3276
2.1701 1.6628 1.3182 1.0767 0.9014 0.7706 0.6693 0.5895 0.5242 0.4696 0.4234 0.3841 0.3498
2.1025 1.6491 1.3256 1.0922 0.9202 0.7906 0.6896 0.6093 0.5443 0.4898 0.4439 0.4048 0.3705
2.0431 1.6361 1.3316 1.1061 0.9377 0.8082 0.7086 0.6296 0.5633 0.5091 0.4629 0.4234 0.3896
1.9919 1.6235 1.3365 1.1187 0.9534 0.8259 0.7283 0.6469 0.5819 0.5273 0.4812 0.4416 0.4073
1.9469 1.6116 1.3403 1.1298 0.9681 0.8425 0.7434 0.6633 0.5992 0.5443 0.4978 0.4582 0.4238
1.9077 1.6007 1.3440 1.1403 0.9815 0.8575 0.7595 0.6798 0.6149 0.5594 0.5137 0.4738 0.4394
"""

_PRINTED = {"gamma": _GAMMA, "q": _NEG_Q_E6, "p_inf": _P_INF_E9, "c_v": _C_V_E4}


def canonical_name(which):
    try:
        return _ALIASES[which.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown parameter {which!r}; expected one of {PARAMETERS}") from None


def range_labels(edges, scale=1.0):
    return [f"{lo * scale:g}-{hi * scale:g}" for lo, hi in zip(edges, edges[1:])]


def _cell_index(edges, x):
    i = int(np.searchsorted(edges, x, side="right")) - 1
    return min(i, len(edges) - 2)


def _overlaps(edges, lo, hi):
    edges = np.asarray(edges)
    if lo == hi:
        w = np.zeros(len(edges) - 1)
        if edges[0] <= lo <= edges[-1]:
            w[_cell_index(edges, lo)] = 1.0
        return w
    return np.clip(np.minimum(hi, edges[1:]) - np.maximum(lo, edges[:-1]), 0.0, None)


@dataclass(frozen=True)
class ParamTable:
    """
    A grid of SgParams over pressure x temperature cells.

    ``scaled`` maps each parameter name to an (n_p, n_T) array in the printed
    scalings; ``text`` optionally keeps the printed tokens for exact export.
    """

    p_edges: tuple
    T_edges: tuple
    scaled: dict
    text: dict | None = None
    _si: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        shape = (len(self.p_edges) - 1, len(self.T_edges) - 1)
        for name in PARAMETERS:
            arr = np.asarray(self.scaled[name], dtype=float)
            if arr.shape != shape:
                raise ValueError(f"{name} table has shape {arr.shape}, expected {shape}")
            arr.setflags(write=False)
            self.scaled[name] = arr
        si = {}
        for name in PARAMETERS:
            if self.text is not None:
                # exact decimal rescaling of the printed tokens
                factor = Decimal(repr(UNSCALE[name]))
                arr = np.array([[float(Decimal(t) * factor) for t in row] for row in self.text[name]])
            else:
                arr = self.scaled[name] * UNSCALE[name]
            arr.setflags(write=False)
            si[name] = arr
        object.__setattr__(self, "_si", si)
        if not (np.all(si["gamma"] > 1) and np.all(si["p_inf"] >= 0) and np.all(si["c_v"] > 0)):
            raise ValueError("table cells violate gamma > 1, p_inf >= 0, c_v > 0")

    @property
    def shape(self):
        return self.scaled["gamma"].shape

    @property
    def si(self):
        return self._si

    def cell(self, i, j):
        si = self.si
        return SgParams(*(float(si[name][i, j]) for name in PARAMETERS))

    def _check(self, p, T):
        p_lo, p_hi, T_lo, T_hi = self.p_edges[0], self.p_edges[-1], self.T_edges[0], self.T_edges[-1]
        if not p >= p_lo:
            raise RangeError(f"pressure {p:g} Pa is below the table minimum of {p_lo / 1e6:g} MPa")
        if not p <= p_hi:
            raise RangeError(f"pressure {p:g} Pa is above the table maximum of {p_hi / 1e6:g} MPa")
        if not T >= T_lo:
            raise RangeError(f"temperature {T:g} K is below the table minimum of {T_lo:g} K")
        if not T <= T_hi:
            raise RangeError(f"temperature {T:g} K is above the table maximum of {T_hi:g} K")

    def lookup(self, p, T):
        """Parameters of the cell containing (p [Pa], T [K])."""
        self._check(p, T)
        return self.cell(_cell_index(self.p_edges, p), _cell_index(self.T_edges, T))

    def lookup_range(self, p_lo, p_hi, T_lo, T_hi, scheme="area-weighted"):
        """
        Average the parameters over cells intersecting [p_lo, p_hi] x [T_lo, T_hi].

        ``area-weighted`` weights each cell by its overlap area (a zero-width
        axis counts the cell containing that coordinate); ``uniform`` takes
        the plain mean of all intersected cells.  Ranges are clipped to the
        table domain.
        """
        if p_lo > p_hi or T_lo > T_hi:
            raise RangeError("range bounds must satisfy lo <= hi")
        w = np.outer(_overlaps(self.p_edges, p_lo, p_hi), _overlaps(self.T_edges, T_lo, T_hi))
        if not np.any(w > 0):
            raise RangeError(
                f"range {p_lo:g}-{p_hi:g} Pa x {T_lo:g}-{T_hi:g} K does not intersect the table")
        if scheme == "uniform":
            w = (w > 0).astype(float)
        elif scheme != "area-weighted":
            raise ValueError(f"unknown averaging scheme {scheme!r}")
        w = w / w.sum()
        si = self.si
        return SgParams(*(float(np.sum(w * si[name])) for name in PARAMETERS))

    def export(self, which, fmt="csv"):
        name = canonical_name(which)
        text = None if self.text is None else self.text[name]
        return format_grid(name, self.scaled[name], self.p_edges, self.T_edges, fmt, text=text)


@lru_cache(maxsize=None)
def builtin_table():
    """The embedded published tables as a ParamTable."""
    text = {name: [row.split() for row in _PRINTED[name].strip().splitlines()] for name in PARAMETERS}
    scaled = {name: np.array([[float(t) for t in row] for row in text[name]]) for name in PARAMETERS}
    return ParamTable(P_EDGES, T_EDGES, scaled, text)


def lookup(p, T, table=None):
    return (table or builtin_table()).lookup(p, T)


def lookup_range(p_lo, p_hi, T_lo, T_hi, scheme="area-weighted", table=None):
    return (table or builtin_table()).lookup_range(p_lo, p_hi, T_lo, T_hi, scheme)


def export_table(which, fmt="csv", table=None):
    return (table or builtin_table()).export(which, fmt)


def _repr(x):
    x = float(x)
    return "nan" if np.isnan(x) else repr(x)


def format_grid(name, values, p_edges, T_edges, fmt="csv", text=None):
    """
    Serialize an (n_p, n_T) grid with pressure rows and temperature columns.

    ``text`` supplies preformatted cells (used for the printed tables);
    otherwise CSV/JSON carry full-precision values and Markdown five
    significant digits.
    """
    values = np.asarray(values, dtype=float)
    p_labels = range_labels(p_edges, 1e-6)
    T_labels = range_labels(T_edges)
    if fmt == "json":
        cells = [[None if np.isnan(x) else (float(t) if text else float(x))
                  for x, t in zip(row, trow)]
                 for row, trow in zip(values, text or values)]
        doc = {"parameter": name, "p_ranges_MPa": p_labels, "T_ranges_K": T_labels, "values": cells}
        return json.dumps(doc, indent=2) + "\n"
    if text is None:
        if fmt == "markdown":
            text = [["n/a" if np.isnan(x) else f"{x:.5g}" for x in row] for row in values]
        else:
            text = [[_repr(x) for x in row] for row in values]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["p_range_MPa", *T_labels])
        for label, row in zip(p_labels, text):
            writer.writerow([label, *row])
        return buf.getvalue()
    if fmt == "markdown":
        lines = [f"Table: {CAPTIONS.get(name, name)}", "",
                 "| p (MPa) \\ T (K) | " + " | ".join(T_labels) + " |",
                 "|---" * (len(T_labels) + 1) + "|"]
        for label, row in zip(p_labels, text):
            lines.append(f"| {label} | " + " | ".join(row) + " |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def parse_table(data, fmt="csv"):
    """Inverse of :func:`format_grid` for CSV and JSON; returns the value grid."""
    if fmt == "json":
        doc = json.loads(data)
        return np.array([[np.nan if x is None else x for x in row] for row in doc["values"]], dtype=float)
    if fmt == "csv":
        rows = list(csv.reader(io.StringIO(data)))
        try:
            return np.array([[float(x) for x in row[1:]] for row in rows[1:] if row], dtype=float)
        except ValueError as exc:
            raise DataFormatError(f"bad table cell: {exc}") from None
    raise ValueError(f"cannot parse format {fmt!r}")
