"""Mode counting for univariate Normal mixtures.

The number of modes of a Normal mixture is not determined by its component
count, so modes are located directly: the analytic first derivative

    d/dy sum_g eta_g phi(y | mu_g, sigma_g)
        = sum_g eta_g phi(y | mu_g, sigma_g) (mu_g - y) / sigma_g^2

is scanned for sign changes on a grid and every descending crossing is
refined by bisection.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, IntervalTooSmallError

BISECT_TOL = 1e-10
# The interval is rejected when the density at either endpoint exceeds this
# fraction of the grid maximum; padding the component means by 8 max-sd
# comfortably clears it (exp(-32) is about 1.3e-14).
ENDPOINT_MASS_RATIO = 1e-12
MIN_GRID_POINTS = 1000
DEFAULT_PADDING_SD = 8.0


def default_search_interval(model, padding=DEFAULT_PADDING_SD):
    """Interval covering all component means padded by ``padding`` max-sd."""
    _require_univariate_normal(model)
    mus = [c.mu for c in model.measure.components]
    smax = max(c.sigma for c in model.measure.components)
    return (min(mus) - padding * smax, max(mus) + padding * smax)


def _require_univariate_normal(model):
    if model.family != "normal":
        raise DomainError("mode search is defined for univariate Normal mixtures only")


def _density_on_grid(model, xs):
    out = np.zeros_like(xs)
    for w, c in model.measure.atoms:
        out += w * np.exp(c.log_density(xs))
    return out


def _derivative(model, xs):
    xs = np.asarray(xs, dtype=float)
    out = np.zeros_like(xs)
    for w, c in model.measure.atoms:
        out += w * np.exp(c.log_density(xs)) * (c.mu - xs) / (c.sigma * c.sigma)
    return out


def find_modes(model, search_interval=None, grid_points=4096):
    """Locations of the strict local maxima of the mixture density.

    Scans ``grid_points`` equispaced points of ``search_interval`` (which
    must contain essentially all of the mass; by default the means padded
    by 8 max-sd) and bisects each descending sign change of the derivative
    down to a location tolerance of 1e-10.
    """
    _require_univariate_normal(model)
    if search_interval is None:
        search_interval = default_search_interval(model)
    lo, hi = float(search_interval[0]), float(search_interval[1])
    if not (hi > lo):
        raise DomainError("search interval must satisfy lo < hi")
    grid_points = int(grid_points)
    if grid_points < MIN_GRID_POINTS:
        raise DomainError(f"grid_points must be at least {MIN_GRID_POINTS}")

    xs = np.linspace(lo, hi, grid_points)
    dens = _density_on_grid(model, xs)
    peak = dens.max()
    if dens[0] > ENDPOINT_MASS_RATIO * peak or dens[-1] > ENDPOINT_MASS_RATIO * peak:
        raise IntervalTooSmallError(
            f"interval [{lo}, {hi}] does not cover the mass of the density"
        )

    deriv = _derivative(model, xs)
    signs = np.sign(deriv)
    nonzero = np.flatnonzero(signs)
    modes = []
    for a_idx, b_idx in zip(nonzero[:-1], nonzero[1:]):
        if signs[a_idx] > 0 and signs[b_idx] < 0:
            modes.append(_bisect(model, xs[a_idx], xs[b_idx]))
    return np.array(modes)


def _bisect(model, a, b):
    # invariant: derivative positive at a, negative at b
    while b - a > BISECT_TOL:
        mid = 0.5 * (a + b)
        d = float(_derivative(model, np.array([mid]))[0])
        if d > 0.0:
            a = mid
        elif d < 0.0:
            b = mid
        else:
            return mid
    return 0.5 * (a + b)


def count_modes(model, search_interval=None, grid_points=4096):
    """Number of strict local maxima of the mixture density (always >= 1)."""
    return len(find_modes(model, search_interval, grid_points))
