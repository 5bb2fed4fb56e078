"""
Using the embedded parameter tables
===================================

The four tables cover 25-300 MPa and 300-625 K in 25 MPa x 25 K cells.
"""

import numpy as np

from stiffgas import tables
from stiffgas.errors import RangeError

t = tables.builtin_table()
print("grid:", t.scaled["gamma"].shape, "(pressure rows x temperature columns)")

# point lookup returns SI values for the enclosing cell
print(tables.lookup(1e8, 450.0))

# a cell edge belongs to the upper cell, except at the top of the domain
print(tables.lookup(50e6, 300.0).gamma, tables.lookup(49.9e6, 300.0).gamma)
print(tables.lookup(300e6, 625.0))

try:
    tables.lookup(20e6, 300.0)
except RangeError as exc:
    print("out of range:", exc)

# averaging over a range that spans several cells
for scheme in ("area-weighted", "uniform"):
    print(scheme, tables.lookup_range(40e6, 90e6, 310.0, 360.0, scheme=scheme))

# p_inf falls with temperature and rises with pressure across the whole table
pinf = t.scaled["p_inf"]
print("monotone:", np.all(np.diff(pinf, axis=1) < 0), np.all(np.diff(pinf, axis=0) > 0))

# export in any of the three formats
print(tables.export_table("gamma", "markdown")[:300])
