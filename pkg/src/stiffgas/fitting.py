"""
Decoupled least-squares fitting of stiffened-gas parameters.

The pressure model is fitted first through its energy form

    e = A p v + B v + C,   A = 1/(gamma-1), B = gamma p_inf/(gamma-1), C = q,

which is linear in (A, B, C).  The raw design matrix is badly conditioned,
so the regression is carried out in normalized variables

    e~ = (e - mean(e)) / std(e),  p~ = (p - mean(p)) / std(p),  v~ = v / mean(v)

and the coefficients are mapped back exactly.  With (gamma, q, p_inf) fixed,
c_v follows from a one-parameter least-squares fit of T = D (e - q - p_inf v),
D = 1/c_v.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import math

import numpy as np

from .eos import SgParams
from .errors import DegenerateWindowError, DomainError, InvalidFitError, StiffGasError

#: Residual orthogonality bound checked after every solve.
ORTHOGONALITY_TOL = 1e-8
#: Residuals below this fraction of ||rhs|| are roundoff; the diagnostic's
#: guard term is RESIDUAL_FLOOR * ||design||_F * ||rhs||.
RESIDUAL_FLOOR = 1e-4


@dataclass(frozen=True)
class NormalizationStats:
    mean_e: float
    std_e: float
    mean_p: float
    std_p: float
    mean_v: float


@dataclass(frozen=True)
class ScaledCoefficients:
    a_tilde: float
    b_tilde: float
    c_tilde: float


@dataclass(frozen=True)
class FitWindow:
    """A closed pressure x temperature box and the data points inside it."""

    p_min: float
    p_max: float
    T_min: float
    T_max: float
    points: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if not (self.p_min < self.p_max and self.T_min < self.T_max):
            raise ValueError("window bounds must satisfy p_min < p_max and T_min < T_max")
        for pt in self.points:
            if not (self.p_min <= pt.p <= self.p_max and self.T_min <= pt.T <= self.T_max):
                raise ValueError(f"point (p={pt.p}, T={pt.T}) lies outside the window")

    @property
    def key(self):
        return (self.p_min, self.p_max, self.T_min, self.T_max)

    @property
    def degenerate_reason(self):
        """Why the window cannot be fitted, or None if it satisfies the rank precondition."""
        n = len(self.points)
        if n < 4:
            return f"window has {n} points, need at least 4"
        if len({pt.p for pt in self.points}) < 2:
            return "window has fewer than 2 distinct pressures"
        if len({pt.v for pt in self.points}) < 2:
            return "window has fewer than 2 distinct specific volumes"
        return None

    @property
    def is_degenerate(self):
        return self.degenerate_reason is not None

    def arrays(self):
        """Return (T, p, v, e) as float arrays."""
        return _columns(self.points)


@dataclass(frozen=True)
class FitResult:
    """Parameters fitted on one window plus error measures and validity flags."""

    params: SgParams
    eps_p: float
    eps_T: float
    n_points: int
    positive_pressure: bool
    positive_temperature: bool
    gamma_gt_one: bool
    nonnegative_p_inf: bool = True
    window: tuple = field(default=(), compare=False)

    @property
    def valid(self):
        return (self.positive_pressure and self.positive_temperature
                and self.gamma_gt_one and self.nonnegative_p_inf)


def _columns(points):
    if not points:
        return tuple(np.empty(0) for _ in range(4))
    arr = np.array([(pt.T, pt.p, pt.v, pt.e) for pt in points], dtype=float)
    return arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3]


def _fit_params(gamma, q, p_inf, c_v):
    # Fitted parameters may violate p_inf >= 0 by roundoff (e.g. ideal-gas data);
    # that is reported through FitResult.nonnegative_p_inf rather than raised.
    params = object.__new__(SgParams)
    for name, value in (("gamma", gamma), ("q", q), ("p_inf", p_inf), ("c_v", c_v)):
        object.__setattr__(params, name, float(value))
    return params


def normalize(points, ddof=0):
    """
    Build the normalized regression problem for the energy model.

    Parameters
    ----------
    points : sequence of StatePoint
    ddof : int
        Delta degrees of freedom for the standard deviations.  The default
        (population std) is the package convention; any positive scaling
        yields the same fitted (A, B, C).

    Returns
    -------
    design : ndarray, shape (N, 3)
        Rows (p~ v~, v~, 1).
    rhs : ndarray, shape (N,)
        e~.
    stats : NormalizationStats
    """
    _, p, v, e = _columns(points)
    if len(p) < 2:
        raise DegenerateWindowError("normalization needs at least 2 points")
    stats = NormalizationStats(
        mean_e=float(np.mean(e)), std_e=float(np.std(e, ddof=ddof)),
        mean_p=float(np.mean(p)), std_p=float(np.std(p, ddof=ddof)),
        mean_v=float(np.mean(v)),
    )
    if not stats.std_e > 0:
        raise DegenerateWindowError("zero variance in internal energy")
    if not stats.std_p > 0:
        raise DegenerateWindowError("zero variance in pressure")
    if not stats.mean_v > 0:
        raise DegenerateWindowError("non-positive mean specific volume")
    e_s = (e - stats.mean_e) / stats.std_e
    p_s = (p - stats.mean_p) / stats.std_p
    v_s = v / stats.mean_v
    design = np.column_stack([p_s * v_s, v_s, np.ones_like(v_s)])
    return design, e_s, stats


def householder_lstsq(a, b):
    """
    Least-squares solution of a x ~= b by Householder QR.

    Returns
    -------
    x : ndarray
        Minimizer of ||a x - b||_2 (entries for rank-deficient directions
        are meaningless; check ``rank``).
    rank : int
        Rank estimated from the diagonal of R.
    """
    r = np.array(a, dtype=float)
    y = np.array(b, dtype=float)
    m, n = r.shape
    if m < n:
        raise DegenerateWindowError(f"{m} equations for {n} unknowns", rank=m)
    for k in range(n):
        x = r[k:, k]
        norm_x = np.linalg.norm(x)
        if norm_x == 0.0:
            continue
        alpha = -math.copysign(norm_x, x[0])
        u = x.copy()
        u[0] -= alpha
        u /= np.linalg.norm(u)
        r[k:, k:] -= 2.0 * np.outer(u, u @ r[k:, k:])
        y[k:] -= 2.0 * u * (u @ y[k:])
        r[k + 1:, k] = 0.0
    diag = np.abs(np.diag(r))
    tol = max(m, n) * np.finfo(float).eps * diag.max() if diag.size else 0.0
    rank = int(np.sum(diag > tol))
    sol = np.zeros(n)
    if rank == n:
        for i in range(n - 1, -1, -1):
            sol[i] = (y[i] - r[i, i + 1:n] @ sol[i + 1:]) / r[i, i]
    return sol, rank


def orthogonality_diagnostic(design, rhs, x):
    """
    ||design^T r|| / (||design||_F ||r|| + tiny) for residual r = rhs - design x.

    ``tiny`` keeps the ratio meaningful when r is at roundoff level (consistent
    systems), where the direction of r is noise.
    """
    design = np.asarray(design, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    r = rhs - design @ x
    norm_a = np.linalg.norm(design)
    tiny = RESIDUAL_FLOOR * norm_a * np.linalg.norm(rhs) + np.finfo(float).tiny
    return float(np.linalg.norm(design.T @ r) / (norm_a * np.linalg.norm(r) + tiny))


def solve_linear_ls(design, rhs):
    """Solve the 3-column normalized energy regression; rank-deficient designs raise."""
    design = np.asarray(design, dtype=float)
    if design.ndim != 2 or design.shape[1] != 3:
        raise ValueError("design must have shape (N, 3)")
    x, rank = householder_lstsq(design, rhs)
    if rank < 3:
        raise DegenerateWindowError("rank-deficient design matrix", rank=rank)
    diag = orthogonality_diagnostic(design, rhs, x)
    if not diag <= ORTHOGONALITY_TOL:
        raise DegenerateWindowError(f"residual orthogonality check failed ({diag:.3g})", rank=rank)
    return ScaledCoefficients(*map(float, x))


def descale(coeffs, stats):
    """Map normalized coefficients back to (A, B, C) of e = A p v + B v + C."""
    at, bt, ct = coeffs.a_tilde, coeffs.b_tilde, coeffs.c_tilde
    A = stats.std_e * at / (stats.std_p * stats.mean_v)
    B = stats.std_e / stats.mean_v * (bt - at * stats.mean_p / stats.std_p)
    C = stats.mean_e + stats.std_e * ct
    return A, B, C


def params_from_ABC(A, B, C):
    """Return (gamma, p_inf, q) from the energy-model coefficients."""
    if not A > 0:
        raise InvalidFitError(f"energy-model coefficient A={A!r} <= 0 implies gamma <= 1")
    gamma = 1.0 / A + 1.0
    p_inf = B / (A + 1.0)
    return gamma, p_inf, C


def fit_energy_model(points, ddof=0):
    """Least-squares (A, B, C) for e = A p v + B v + C via the normalized problem."""
    design, rhs, stats = normalize(points, ddof=ddof)
    return descale(solve_linear_ls(design, rhs), stats)


def _points_of(window):
    if isinstance(window, FitWindow):
        reason = window.degenerate_reason
        if reason is not None:
            raise DegenerateWindowError(reason)
        return window.points
    return tuple(window)


def fit_pressure(window):
    """Return (gamma, q, p_inf) minimizing the energy-form pressure residual."""
    A, B, C = fit_energy_model(_points_of(window))
    gamma, p_inf, q = params_from_ABC(A, B, C)
    return gamma, q, p_inf


def fit_temperature(window, gamma, q, p_inf):
    """Return c_v from the one-parameter fit T = (e - q - p_inf v) / c_v."""
    T, _, v, e = _columns(_points_of(window))
    if T.size == 0:
        raise DegenerateWindowError("empty window")
    x = e - q - p_inf * v
    sxx = float(x @ x)
    if sxx == 0.0:
        raise DegenerateWindowError("temperature regressor is identically zero")
    D = float(x @ T) / sxx
    if not D > 0:
        raise InvalidFitError(f"temperature slope D={D!r} <= 0 gives non-positive c_v")
    return 1.0 / D


def relative_error(model, data):
    """||model - data||_2 / ||data||_2."""
    model = np.asarray(model, dtype=float)
    data = np.asarray(data, dtype=float)
    if model.shape != data.shape or data.size == 0:
        raise ValueError("model and data must be non-empty and of equal length")
    denom = np.linalg.norm(data)
    if denom == 0:
        raise DomainError("relative error undefined for zero data")
    return float(np.linalg.norm(model - data) / denom)


def _canonical(points):
    return tuple(sorted(points, key=lambda pt: (pt.p, pt.T, pt.v, pt.e)))


def fit_window(window):
    """
    Fit all four parameters on one window and evaluate the fit.

    Points are put into a canonical order first, so the result does not
    depend on the order in which the window was assembled.
    """
    pts = _canonical(_points_of(window))
    gamma, q, p_inf = fit_pressure(pts)
    c_v = fit_temperature(pts, gamma, q, p_inf)
    T, p, v, e = _columns(pts)
    p_model = (gamma - 1.0) * (e - q) / v - gamma * p_inf
    T_model = (e - q - p_inf * v) / c_v
    key = window.key if isinstance(window, FitWindow) else ()
    return FitResult(
        params=_fit_params(gamma, q, p_inf, c_v),
        eps_p=relative_error(p_model, p),
        eps_T=relative_error(T_model, T),
        n_points=len(pts),
        positive_pressure=bool(np.all(p_model > 0)),
        positive_temperature=bool(np.all(T_model > 0)),
        gamma_gt_one=gamma > 1.0,
        nonnegative_p_inf=p_inf >= 0.0,
        window=key,
    )


@dataclass(frozen=True)
class WindowFit:
    """Outcome of fitting one window: either ``result`` or ``error`` is set."""

    window: FitWindow
    result: FitResult | None = None
    error: StiffGasError | None = None

    @property
    def ok(self):
        return self.result is not None and self.result.valid


def _try_fit(window):
    try:
        return WindowFit(window, result=fit_window(window))
    except StiffGasError as exc:
        return WindowFit(window, error=exc)


def fit_windows(windows, jobs=1):
    """Fit every window, returning outcomes sorted by (p-range, T-range)."""
    ordered = sorted(windows, key=lambda w: w.key)
    if jobs <= 1:
        return [_try_fit(w) for w in ordered]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_try_fit, ordered))
