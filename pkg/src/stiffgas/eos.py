"""
Stiffened-gas equation of state.

    p = (gamma - 1) rho (e - q) - gamma p_inf
    T = (e - q - p_inf / rho) / c_v

All quantities are SI: Pa, K, J/kg, m^3/kg, kg/m^3.  The functions accept
scalars or numpy arrays.  Pressure and temperature are returned as computed,
without clamping, so callers can see non-physical (negative) values.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError, NonPhysicalStateError


@dataclass(frozen=True)
class SgParams:
    """The four stiffened-gas constants.

    Parameters
    ----------
    gamma : float
        Adiabatic-like exponent, must exceed 1.
    q : float
        Energy offset, J/kg.
    p_inf : float
        Stiffening pressure, Pa, non-negative.
    c_v : float
        Temperature-model coefficient, J/(kg K).  This is a fit coefficient,
        not the physical specific heat.
    """

    gamma: float
    q: float
    p_inf: float
    c_v: float

    def __post_init__(self):
        for name in ("gamma", "q", "p_inf", "c_v"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if not self.gamma > 1.0:
            raise DomainError(f"gamma must be > 1, got {self.gamma!r}")
        if self.p_inf < 0.0:
            raise DomainError(f"p_inf must be >= 0, got {self.p_inf!r}")
        if not self.c_v > 0.0:
            raise DomainError(f"c_v must be > 0, got {self.c_v!r}")

    def as_dict(self):
        return {"gamma": self.gamma, "q": self.q, "p_inf": self.p_inf, "c_v": self.c_v}


@dataclass(frozen=True)
class StatePoint:
    """One thermodynamic sample (T in K, p in Pa, v in m^3/kg, e in J/kg)."""

    T: float
    p: float
    v: float
    e: float
    rho: float | None = None

    def __post_init__(self):
        if not (self.T > 0 and self.p > 0 and self.v > 0):
            raise DomainError(f"StatePoint requires T, p, v > 0; got T={self.T}, p={self.p}, v={self.v}")
        if not math.isfinite(self.e):
            raise DomainError("StatePoint energy must be finite")
        if self.rho is not None and abs(self.rho * self.v - 1.0) > 1e-12:
            raise DomainError(f"inconsistent density {self.rho} and volume {self.v}")

    @property
    def density(self):
        return 1.0 / self.v if self.rho is None else self.rho


def _positive(name, x):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or not np.all(x > 0):
        raise DomainError(f"{name} must be finite and positive")
    return x


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def pressure(params, rho, e):
    """Pressure from density and specific internal energy."""
    rho = _positive("rho", rho)
    g = params.gamma
    return _out((g - 1.0) * rho * (e - params.q) - g * params.p_inf)


def temperature(params, rho, e):
    """Temperature from density and specific internal energy."""
    rho = _positive("rho", rho)
    return _out((e - params.q - params.p_inf / rho) / params.c_v)


def internal_energy(params, p, v):
    """
    Specific internal energy from pressure and specific volume.

    This is the bilinear form e = A p v + B v + C with
    A = 1/(gamma-1), B = gamma p_inf/(gamma-1), C = q, i.e. the exact
    inverse of :func:`pressure` at fixed volume.
    """
    v = _positive("v", v)
    gm1 = params.gamma - 1.0
    return _out((p * v + params.gamma * params.p_inf * v) / gm1 + params.q)


def sound_speed_sq(params, rho, p):
    """Squared sound speed (p + p_inf) / rho, m^2/s^2."""
    rho = _positive("rho", rho)
    s = np.asarray(p, dtype=float) + params.p_inf
    if not np.all(s > 0):
        raise NonPhysicalStateError("p + p_inf must be positive")
    return _out(s / rho)


def adiabatic_gamma(params, p):
    """Generalized adiabatic coefficient gamma (p + p_inf) / p."""
    p = np.asarray(p, dtype=float)
    if np.any(p == 0) or not np.all(np.isfinite(p)):
        raise DomainError("adiabatic_gamma is undefined at p = 0")
    return _out(params.gamma * (p + params.p_inf) / p)


def gruneisen(params):
    """Grüneisen coefficient, gamma - 1."""
    return params.gamma - 1.0


def fundamental_derivative(params):
    """Fundamental derivative of gas dynamics, (gamma + 1) / 2."""
    return 0.5 * (params.gamma + 1.0)


def density_from_pT(params, p, T):
    """
    Density at which the pressure and temperature models jointly give (p, T).

    Eliminating e between the two models gives
    rho = (p + p_inf) / ((gamma - 1) c_v T); the matching energy is
    e = q + c_v T + p_inf / rho.
    """
    T = _positive("T", T)
    s = np.asarray(p, dtype=float) + params.p_inf
    if not np.all(s > 0):
        raise NonPhysicalStateError("p + p_inf must be positive")
    return _out(s / ((params.gamma - 1.0) * params.c_v * T))


def energy_from_rhoT(params, rho, T):
    """Specific internal energy from density and temperature (inverse of :func:`temperature`)."""
    rho = _positive("rho", rho)
    return _out(params.q + params.c_v * np.asarray(T, dtype=float) + params.p_inf / rho)
