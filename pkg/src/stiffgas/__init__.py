"""Stiffened-gas equation of state for liquid water and its least-squares parameter fits."""

from .eos import (SgParams, StatePoint, adiabatic_gamma, density_from_pT, energy_from_rhoT,
                  fundamental_derivative, gruneisen, internal_energy, pressure, sound_speed_sq,
                  temperature)
from .errors import (DataFormatError, DegenerateWindowError, DomainError, InvalidFitError,
                     NonPhysicalStateError, RangeError, StiffGasError)
from .fitting import (FitResult, FitWindow, NormalizationStats, ScaledCoefficients, descale,
                      fit_energy_model, fit_pressure, fit_temperature, fit_window, fit_windows,
                      normalize, params_from_ABC, relative_error, solve_linear_ls)
from .data import Dataset, WindowGrid, parse_isobaric_file, partition, synthesize, to_canonical_csv
from .tables import ParamTable, export_table, lookup, lookup_range, builtin_table

__version__ = "0.1.0"

__all__ = [
    "SgParams", "StatePoint", "adiabatic_gamma", "density_from_pT", "energy_from_rhoT",
    "fundamental_derivative", "gruneisen", "internal_energy", "pressure", "sound_speed_sq",
    "temperature",
    "DataFormatError", "DegenerateWindowError", "DomainError", "InvalidFitError",
    "NonPhysicalStateError", "RangeError", "StiffGasError",
    "FitResult", "FitWindow", "NormalizationStats", "ScaledCoefficients", "descale",
    "fit_energy_model", "fit_pressure", "fit_temperature", "fit_window", "fit_windows",
    "normalize", "params_from_ABC", "relative_error", "solve_linear_ls",
    "Dataset", "WindowGrid", "parse_isobaric_file", "partition", "synthesize", "to_canonical_csv",
    "ParamTable", "export_table", "lookup", "lookup_range", "builtin_table",
]
