"""
Fitting one window step by step
===============================

Generate points on a known EOS, then recover the four parameters through
the normalized least-squares problem.
"""

import numpy as np

from stiffgas import fitting
from stiffgas.data import grid_values, synthesize
from stiffgas.eos import SgParams
from stiffgas.fitting import FitWindow

truth = SgParams(gamma=1.35, q=-1.1e7, p_inf=2.2e9, c_v=3.0e4)

# 6 isobars x 26 isotherms filling the 100-125 MPa, 400-425 K cell
ds = synthesize(truth, grid_values(100e6, 125e6, 5e6), grid_values(400.0, 425.0, 1.0))
window = FitWindow(100e6, 125e6, 400.0, 425.0, ds.points)
print(len(window.points), "points, degenerate:", window.is_degenerate)

# normalization: e and p centred and scaled, v divided by its mean
design, rhs, stats = fitting.normalize(window.points)
print("design matrix columns have scale ~1:", np.abs(design).max(axis=0))

# Householder QR on the 3-column problem, then back to e = A p v + B v + C
coeffs = fitting.solve_linear_ls(design, rhs)
A, B, C = fitting.descale(coeffs, stats)
print(f"A = {A:.6f}  (1/(gamma-1) = {1 / (truth.gamma - 1):.6f})")
print("gamma, p_inf, q:", fitting.params_from_ABC(A, B, C))

# the whole window in one call, with both relative errors
res = fitting.fit_window(window)
print(res.params)
print(f"eps_p = {res.eps_p:.2e}, eps_T = {res.eps_T:.2e}, valid = {res.valid}")

# noisy energies: the parameters drift but the fit stays well posed
rng = np.random.default_rng(0)
noisy = FitWindow(*window.key, tuple(
    type(pt)(T=pt.T, p=pt.p, v=pt.v, e=pt.e * (1 + rng.uniform(-1e-5, 1e-5))) for pt in window.points))
print(fitting.fit_window(noisy).params)

# too few distinct pressures cannot fix three coefficients
thin = FitWindow(*window.key, tuple(pt for pt in window.points if pt.p == 100e6))
print("single isobar:", thin.degenerate_reason)
