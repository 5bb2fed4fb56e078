"""
Isobaric data ingestion, window partitioning and synthetic data generation.

Input files are delimiter-separated text with a header row, such as the
NIST Chemistry WebBook fluid export::

    Temperature (K)  Pressure (MPa)  Density (kg/m3)  Volume (m3/kg)  Internal Energy (kJ/kg) ...  Phase

Columns are found by header name and converted to SI.  The canonical
output format is ``T_K,p_Pa,v_m3kg,e_Jkg`` with 17 significant digits,
which parses back bit-for-bit.
"""

import csv
from dataclasses import dataclass, field
import io
import re

import numpy as np

from .eos import SgParams, StatePoint, density_from_pT, energy_from_rhoT
from .errors import DataFormatError, DomainError
from .fitting import FitWindow

CANONICAL_HEADER = ("T_K", "p_Pa", "v_m3kg", "e_Jkg")

# Header-name prefixes (lower case) recognised for each logical column.
DEFAULT_COLUMN_NAMES = {
    "T": ("temperature", "t_k", "t"),
    "p": ("pressure", "p_pa", "p"),
    "v": ("volume", "specific volume", "v_m3kg", "v"),
    "rho": ("density", "rho"),
    "e": ("internal energy", "e_jkg", "e"),
    "phase": ("phase",),
}

# Multipliers to SI, keyed by lower-case unit spelling.
UNIT_FACTORS = {
    "T": {"k": 1.0},
    "p": {"pa": 1.0, "kpa": 1e3, "mpa": 1e6, "gpa": 1e9, "bar": 1e5},
    "v": {"m3/kg": 1.0, "l/kg": 1e-3, "cm3/g": 1e-3},
    "rho": {"kg/m3": 1.0, "g/cm3": 1e3, "g/ml": 1e3},
    "e": {"j/kg": 1.0, "kj/kg": 1e3, "mj/kg": 1e6},
}

# Units assumed for the canonical headers, which carry no parenthesised unit.
_CANONICAL_UNITS = {"t_k": "k", "p_pa": "pa", "v_m3kg": "m3/kg", "e_jkg": "j/kg"}

_UNIT_RE = re.compile(r"^(.*?)\s*\(([^)]*)\)\s*$")


@dataclass(frozen=True)
class Dataset:
    """Immutable collection of StatePoints sorted by (p, T) with unique keys."""

    points: tuple
    source: str = ""
    n_dropped: int = 0
    p_values: tuple = field(init=False)

    def __post_init__(self):
        pts = tuple(sorted(self.points, key=lambda pt: (pt.p, pt.T)))
        seen = set()
        for pt in pts:
            key = (pt.p, pt.T)
            if key in seen:
                raise DataFormatError(f"duplicate state at p={pt.p!r} Pa, T={pt.T!r} K")
            seen.add(key)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "p_values", tuple(sorted({pt.p for pt in pts})))

    def __len__(self):
        return len(self.points)

    def arrays(self):
        """Return (T, p, v, e) arrays."""
        arr = np.array([(pt.T, pt.p, pt.v, pt.e) for pt in self.points], dtype=float).reshape(-1, 4)
        return arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3]

    def merge(self, other):
        return Dataset(self.points + other.points,
                       source=";".join(s for s in (self.source, other.source) if s),
                       n_dropped=self.n_dropped + other.n_dropped)


@dataclass(frozen=True)
class WindowGrid:
    """Window edges; the defaults give the 11 x 13 grid of 25 MPa x 25 K cells."""

    p_edges: tuple = tuple(float(p) * 1e6 for p in range(25, 301, 25))
    T_edges: tuple = tuple(float(T) for T in range(300, 626, 25))

    def __post_init__(self):
        for name in ("p_edges", "T_edges"):
            edges = tuple(float(x) for x in getattr(self, name))
            if len(edges) < 2 or any(b <= a for a, b in zip(edges, edges[1:])):
                raise ValueError(f"{name} must be strictly increasing with at least 2 entries")
            object.__setattr__(self, name, edges)

    @property
    def shape(self):
        return len(self.p_edges) - 1, len(self.T_edges) - 1

    def cells(self):
        """Yield ((i, j), (p_lo, p_hi, T_lo, T_hi)) in row-major order."""
        for i, (p_lo, p_hi) in enumerate(zip(self.p_edges, self.p_edges[1:])):
            for j, (T_lo, T_hi) in enumerate(zip(self.T_edges, self.T_edges[1:])):
                yield (i, j), (p_lo, p_hi, T_lo, T_hi)


def _split_header(name):
    m = _UNIT_RE.match(name.strip())
    if m:
        return m.group(1).strip().lower(), m.group(2).strip().lower()
    base = name.strip().lower()
    return base, _CANONICAL_UNITS.get(base)


def _find_column(headers, logical, column_map):
    if column_map and logical in column_map:
        wanted = column_map[logical]
        for idx, h in enumerate(headers):
            if h.strip() == wanted or _split_header(h)[0] == wanted.lower():
                return idx
        raise DataFormatError(f"column {wanted!r} (for {logical}) not found in header")
    bases = [_split_header(h)[0] for h in headers]
    for candidate in DEFAULT_COLUMN_NAMES[logical]:
        for idx, base in enumerate(bases):
            if base == candidate:
                return idx
    return None


def _factor(logical, header, unit_map):
    unit = (unit_map or {}).get(logical) or _split_header(header)[1]
    if unit is None:
        raise DataFormatError(f"no unit given for column {header!r}")
    try:
        return UNIT_FACTORS[logical][unit.lower()]
    except KeyError:
        raise DataFormatError(f"unsupported unit {unit!r} for column {header!r}") from None


def parse_isobaric_file(data, column_map=None, unit_map=None, source="", phases=("liquid",)):
    """
    Parse delimited isobaric data into a Dataset.

    Parameters
    ----------
    data : bytes or str
        File contents.  The delimiter (tab or comma) is detected from the header.
    column_map : dict, optional
        Logical name ('T', 'p', 'v', 'rho', 'e', 'phase') -> header name.
    unit_map : dict, optional
        Logical name -> unit spelling, overriding the unit in the header.
    phases : iterable of str
        Accepted values of the phase column, if one is present.  Rows with
        any other phase are dropped and counted in ``Dataset.n_dropped``.
    """
    text = data.decode("utf-8-sig") if isinstance(data, bytes) else data
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DataFormatError("empty input")
    delim = "\t" if "\t" in lines[0] else ","
    rows = list(csv.reader(io.StringIO("\n".join(lines)), delimiter=delim))
    headers, body = rows[0], rows[1:]

    cols = {k: _find_column(headers, k, column_map) for k in DEFAULT_COLUMN_NAMES}
    for required in ("T", "p", "e"):
        if cols[required] is None:
            raise DataFormatError(f"missing required column: {required}")
    vol_key = "v" if cols["v"] is not None else "rho"
    if cols[vol_key] is None:
        raise DataFormatError("missing required column: specific volume or density")
    factors = {k: _factor(k, headers[cols[k]], unit_map) for k in ("T", "p", "e", vol_key)}
    accepted = {ph.strip().lower() for ph in phases}

    points, dropped = [], 0
    for lineno, row in enumerate(body, start=2):
        if cols["phase"] is not None and cols["phase"] < len(row):
            if row[cols["phase"]].strip().lower() not in accepted:
                dropped += 1
                continue
        vals = {}
        for k in ("T", "p", "e", vol_key):
            idx = cols[k]
            try:
                vals[k] = float(row[idx]) * factors[k]
            except (IndexError, ValueError):
                cell = row[idx] if idx < len(row) else ""
                raise DataFormatError(
                    f"row {lineno}, column {headers[idx]!r}: cannot parse {cell!r}") from None
        v = vals["v"] if vol_key == "v" else 1.0 / vals["rho"]
        try:
            points.append(StatePoint(T=vals["T"], p=vals["p"], v=v, e=vals["e"]))
        except DomainError as exc:
            raise DataFormatError(f"row {lineno}: {exc}") from None
    if not points:
        raise DataFormatError("no data rows")
    return Dataset(tuple(points), source=source, n_dropped=dropped)


def to_canonical_csv(dataset):
    """Serialize to ``T_K,p_Pa,v_m3kg,e_Jkg`` with 17 significant digits."""
    out = [",".join(CANONICAL_HEADER)]
    for pt in dataset.points:
        out.append(f"{pt.T:.17g},{pt.p:.17g},{pt.v:.17g},{pt.e:.17g}")
    return "\n".join(out) + "\n"


def partition(dataset, grid=None):
    """
    Split a dataset into closed windows, one per grid cell.

    Points on a shared edge belong to every window whose closed range
    contains them.  Windows failing the rank precondition are still
    returned; check ``FitWindow.is_degenerate``.
    """
    grid = grid or WindowGrid()
    T, p, _, _ = dataset.arrays()
    pts = dataset.points
    windows = []
    for _, (p_lo, p_hi, T_lo, T_hi) in grid.cells():
        mask = (p >= p_lo) & (p <= p_hi) & (T >= T_lo) & (T <= T_hi)
        windows.append(FitWindow(p_lo, p_hi, T_lo, T_hi, tuple(pts[k] for k in np.flatnonzero(mask))))
    return windows


def grid_values(start, stop, step):
    """Inclusive arithmetic grid start, start+step, ..., stop, free of accumulated roundoff."""
    n = int(round((stop - start) / step))
    if n < 0 or not np.isclose(start + n * step, stop, rtol=1e-12, atol=0):
        raise ValueError(f"({stop} - {start}) is not a multiple of {step}")
    return [start + k * step for k in range(n + 1)]


def synthesize(params, p_list, T_list, noise=0.0, seed=0, source="synthetic"):
    """
    Generate a dataset exactly on the stiffened-gas model.

    For each (p, T), rho comes from :func:`density_from_pT` and
    e = q + c_v T + p_inf/rho.  With ``noise > 0`` the energies and volumes
    are multiplied by independent factors drawn uniformly from
    [1 - noise, 1 + noise] using ``numpy.random.default_rng(seed)``.
    """
    if not isinstance(params, SgParams):
        raise DomainError("params must be an SgParams")
    if noise < 0:
        raise DomainError("noise must be >= 0")
    pp, TT = np.meshgrid(np.asarray(p_list, float), np.asarray(T_list, float), indexing="ij")
    pp, TT = pp.ravel(), TT.ravel()
    if pp.size == 0:
        raise DomainError("p_list and T_list must be non-empty")
    rho = np.asarray(density_from_pT(params, pp, TT), dtype=float).reshape(-1)
    e = np.asarray(energy_from_rhoT(params, rho, TT), dtype=float).reshape(-1)
    v = 1.0 / rho
    if noise > 0:
        rng = np.random.default_rng(seed)
        e = e * rng.uniform(1.0 - noise, 1.0 + noise, e.size)
        v = v * rng.uniform(1.0 - noise, 1.0 + noise, v.size)
    pts = tuple(StatePoint(T=float(a), p=float(b), v=float(c), e=float(d))
                for a, b, c, d in zip(TT, pp, v, e))
    return Dataset(pts, source=source)
