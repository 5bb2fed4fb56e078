"""
Evaluating the stiffened-gas EOS
================================

Pick one parameter set, go from (rho, e) to (p, T) and back, and look at
the derived quantities.
"""

import numpy as np

from stiffgas import eos
from stiffgas.eos import SgParams

# parameters for liquid water near 300 K, 25-50 MPa (first table cell)
params = SgParams(gamma=1.2424, q=-10.229e6, p_inf=2.0132e9, c_v=2.6854e4)

# forward: density and energy give pressure and temperature
rho, e = 1012.5, 8.4e4
p = eos.pressure(params, rho, e)
T = eos.temperature(params, rho, e)
print(f"p = {p / 1e6:.3f} MPa, T = {T:.2f} K")

# the energy model inverts the pressure law exactly
print("e back:", eos.internal_energy(params, p, 1 / rho))

# every function is vectorized
rhos = np.linspace(1005.0, 1020.0, 4)
print(eos.pressure(params, rhos, e))

# density on the joint (p, T) surface, and the energy that goes with it
rho_pt = eos.density_from_pT(params, 30e6, 310.0)
e_pt = eos.energy_from_rhoT(params, rho_pt, 310.0)
print(f"rho(30 MPa, 310 K) = {rho_pt:.3f} kg/m3, e = {e_pt:.1f} J/kg")

# sound speed and the two gamma-only coefficients
c = np.sqrt(eos.sound_speed_sq(params, rho_pt, 30e6))
print(f"c = {c:.1f} m/s")
print("adiabatic gamma:", eos.adiabatic_gamma(params, 30e6))
print("Gruneisen:", eos.gruneisen(params), " fundamental derivative:", eos.fundamental_derivative(params))

# results are never clamped: a low enough energy gives negative pressure
print("p at low energy:", eos.pressure(params, rho, -2.0e5))
