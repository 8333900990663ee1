"""
Metrics and divergences between grid densities.

All integrals are under normalised Lebesgue measure on [0, 1], so for
piecewise-constant densities every integral is an exact cell average.
"""

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.spatial.distance import cdist
from scipy.special import rel_entr

from sievelab.core.errors import DimensionError, DomainError
from sievelab.core.models import (
    INEQUALITY_SLACK,
    BoundsSpec,
    EquivalenceConstants,
    GridDensity,
)

# |gamma - 1| below this returns the analytic limit of h
H_BRANCH_TOL = 1e-8
# |gamma - 1| below this uses the power series of h (and h')
H_SERIES_TOL = 1e-2
_SERIES_TERMS = 10


def _check_grid(f: GridDensity, g: GridDensity) -> None:
    if f.m != g.m:
        raise DimensionError(f"Grid sizes differ: {f.m} != {g.m}")


def _require_positive(g: GridDensity) -> None:
    if np.any(g.values <= 0.0):
        raise DomainError("Divergence undefined: reference density has a zero or negative cell")


def l2_distance(f: GridDensity, g: GridDensity) -> float:
    """L2 distance sqrt(mean((f - g)^2))."""
    _check_grid(f, g)
    diff = f.values - g.values
    return float(np.sqrt(np.mean(diff * diff)))


def l2_matrix(a: ArrayLike, b: ArrayLike | None = None) -> NDArray[np.float64]:
    """
    Pairwise L2 distances between rows of value arrays.

    Args:
        a: (p, m) array of density values
        b: (q, m) array, defaults to ``a``

    Returns:
        (p, q) distance matrix
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = a if b is None else np.atleast_2d(np.asarray(b, dtype=float))
    if a.shape[1] != b.shape[1]:
        raise DimensionError(f"Grid sizes differ: {a.shape[1]} != {b.shape[1]}")
    return cdist(a, b) / np.sqrt(a.shape[1])


def kl_divergence(f: GridDensity, g: GridDensity) -> float:
    """KL(f || g) = mean(f log(f/g)); cells with f = 0 contribute 0."""
    _check_grid(f, g)
    _require_positive(g)
    if np.any(f.values < 0.0):
        raise DomainError("KL undefined for negative density values")
    return float(np.mean(rel_entr(f.values, g.values)))


def chi_square(f: GridDensity, g: GridDensity) -> float:
    """Chi-square divergence mean((f - g)^2 / g)."""
    _check_grid(f, g)
    _require_positive(g)
    diff = f.values - g.values
    return float(np.mean(diff * diff / g.values))


def hellinger(f: GridDensity, g: GridDensity) -> float:
    """Hellinger distance sqrt(mean((sqrt f - sqrt g)^2)), no 1/2 factor."""
    _check_grid(f, g)
    if np.any(f.values < 0.0) or np.any(g.values < 0.0):
        raise DomainError("Hellinger distance undefined for negative values")
    diff = np.sqrt(f.values) - np.sqrt(g.values)
    return float(np.sqrt(np.mean(diff * diff)))


def _validate_gamma(gamma: ArrayLike) -> NDArray[np.float64]:
    g = np.asarray(gamma, dtype=float)
    if not np.all(np.isfinite(g)) or np.any(g <= 0.0):
        raise DomainError("h is defined for gamma > 0 only")
    return g


def _as_output(values: NDArray[np.float64], like: NDArray[np.float64]) -> float | NDArray[np.float64]:
    return float(values) if like.ndim == 0 else values


def h_function(gamma: ArrayLike) -> float | NDArray[np.float64]:
    """
    h(gamma) = (gamma - 1 - log gamma) / (gamma - 1)^2, with h(1) = 1/2.

    Accepts scalars or arrays. Near gamma = 1 the expansion
    1/2 - t/3 + t^2/4 - ... (t = gamma - 1) replaces the cancelling quotient,
    and within 1e-8 of 1 the limit 1/2 is returned exactly.
    """
    g = _validate_gamma(gamma)
    t = g - 1.0
    near = np.abs(t) < H_SERIES_TOL
    safe_t = np.where(near, 1.0, t)
    direct = (safe_t - np.log1p(safe_t)) / (safe_t * safe_t)

    series = np.zeros_like(t)
    for k in range(_SERIES_TERMS):
        series = series + (-t) ** k / (k + 2)

    out = np.where(near, series, direct)
    out = np.where(np.abs(t) < H_BRANCH_TOL, 0.5, out)
    return _as_output(out, g)


def h_derivative(gamma: ArrayLike) -> float | NDArray[np.float64]:
    """h'(gamma) = (-gamma^2 + 2 gamma log gamma + 1) / ((gamma - 1)^3 gamma); h'(1) = -1/3."""
    g = _validate_gamma(gamma)
    t = g - 1.0
    near = np.abs(t) < H_SERIES_TOL
    safe_g = np.where(near, 2.0, g)
    direct = (-safe_g * safe_g + 2.0 * safe_g * np.log(safe_g) + 1.0) / (
        (safe_g - 1.0) ** 3 * safe_g
    )

    series = np.zeros_like(t)
    for k in range(1, _SERIES_TERMS + 1):
        series = series + (-1.0) ** k * k * t ** (k - 1) / (k + 2)

    out = np.where(near, series, direct)
    return _as_output(out, g)


def equivalence_constants(bounds: BoundsSpec) -> EquivalenceConstants:
    """
    Constants of the KL / squared-L2 sandwich.

    c_ab = h(beta/alpha)/beta gives c_ab*||f-g||^2 <= KL(f||g) <= ||f-g||^2/alpha,
    and K_ab = beta/(alpha^2 c_ab) enters the likelihood-ratio variance bound.

    Raises:
        DomainError: If alpha <= 0
    """
    bounds.require_positive()
    h_ratio = float(h_function(bounds.beta / bounds.alpha))
    c_ab = h_ratio / bounds.beta
    k_ab = bounds.beta / (bounds.alpha**2 * c_ab)
    return EquivalenceConstants(h_of_ratio=h_ratio, c_ab=c_ab, K_ab=k_ab)


def elementary_log_slack(gamma: ArrayLike, x: ArrayLike) -> NDArray[np.float64]:
    """
    Slack (x - 1) - h(gamma)(x - 1)^2 - log x of the elementary log bound.

    Nonnegative (up to rounding) whenever 0 < x <= gamma.

    Raises:
        DomainError: If gamma <= 0, x <= 0 or x > gamma
    """
    g = _validate_gamma(gamma)
    xs = np.asarray(x, dtype=float)
    if np.any(xs <= 0.0) or np.any(xs > g):
        raise DomainError("elementary log bound requires 0 < x <= gamma")
    u = xs - 1.0
    return np.asarray(u - np.asarray(h_function(g)) * u * u - np.log(xs))


def elementary_log_check(gamma: float, x: float) -> bool:
    """Whether log x <= (x - 1) - h(gamma)(x - 1)^2 holds within 1e-12."""
    return bool(np.all(elementary_log_slack(gamma, x) >= -INEQUALITY_SLACK))


def diameter_upper_bound(bounds: BoundsSpec) -> float:
    """2 sqrt(beta): an L2 diameter bound for the ambient class."""
    return 2.0 * float(np.sqrt(bounds.beta))
