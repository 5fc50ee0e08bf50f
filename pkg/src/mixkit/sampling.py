"""Generative samplers.

Covers two-stage latent-allocation sampling from a mixture, hidden Markov
sequence generation, scale mixtures of Normals (Student-t and Laplace arise
as special cases) and the uniform-mixture construction of non-increasing
densities.  Every sampler is a pure function of its inputs and a seed;
categorical draws use inverse-cdf lookup on the stored atom order so output
streams are reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidMeasureError
from .models import WEIGHT_SUM_TOL

__all__ = [
    "LabeledSample",
    "HMMSpec",
    "InverseGamma",
    "Exponential",
    "sample_mixture",
    "sample_hmm",
    "sample_scale_mixture",
    "sample_monotone_density",
]


def _as_rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _categorical(rng, weights, n):
    """Inverse-cdf categorical draw; returns 0-based indices."""
    cum = np.cumsum(weights)
    idx = np.searchsorted(cum, rng.random(n), side="right")
    return np.minimum(idx, len(weights) - 1)


@dataclass(frozen=True)
class LabeledSample:
    """Observations together with the latent component labels that made them."""

    data: np.ndarray
    z: np.ndarray  # 1-based component labels
    seed: object = None

    def __post_init__(self):
        if len(self.data) != len(self.z):
            raise DomainError("data and z must have equal length")

    def __len__(self):
        return len(self.z)


@dataclass(frozen=True)
class HMMSpec:
    """Hidden Markov chain: initial law, transition matrix, per-state emissions."""

    initial: tuple
    xi: tuple
    components: tuple

    def __post_init__(self):
        initial = tuple(float(p) for p in self.initial)
        xi = tuple(tuple(float(p) for p in row) for row in self.xi)
        comps = tuple(self.components)
        G = len(comps)
        if G < 1:
            raise DomainError("at least one state is required")
        if len({c.family for c in comps}) > 1:
            raise DomainError("emission components must share one family")
        if len(initial) != G or len(xi) != G or any(len(row) != G for row in xi):
            raise DomainError("initial and xi must match the number of states")
        for row in (initial,) + xi:
            if any(p < 0.0 or not math.isfinite(p) for p in row):
                raise DomainError("probabilities must be finite and non-negative")
            if abs(math.fsum(row) - 1.0) > WEIGHT_SUM_TOL:
                raise DomainError("probability rows must sum to 1")
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "components", comps)

    @property
    def G(self):
        return len(self.components)

    @property
    def family(self):
        return self.components[0].family


@dataclass(frozen=True)
class InverseGamma:
    """Inverse-Gamma mixing law for the Normal variance (shape, scale)."""

    shape: float
    scale: float

    def __post_init__(self):
        if not (self.shape > 0.0 and self.scale > 0.0):
            raise DomainError("shape and scale must be positive")


@dataclass(frozen=True)
class Exponential:
    """Exponential mixing law for the Normal variance (rate)."""

    rate: float

    def __post_init__(self):
        if not self.rate > 0.0:
            raise DomainError("rate must be positive")


def _empty_data(family):
    if family == "bivariate_normal":
        return np.empty((0, 2))
    if family == "poisson":
        return np.empty(0, dtype=np.int64)
    return np.empty(0)


def sample_mixture(model, n, seed):
    """Draw n observations by the two-stage scheme: label first, value second.

    z_i is categorical in the mixture weights and y_i | z_i comes from the
    allocated component.  Labels are 1-based.
    """
    n = int(n)
    if n < 0:
        raise DomainError("n must be non-negative")
    rng = _as_rng(seed)
    measure = model.measure
    idx = _categorical(rng, measure.weights, n)
    data = _empty_data(model.family)
    if n:
        data = np.empty((n, 2)) if model.family == "bivariate_normal" else np.empty(n)
        if model.family == "poisson":
            data = np.empty(n, dtype=np.int64)
        for g, comp in enumerate(measure.components):
            members = np.flatnonzero(idx == g)
            if members.size:
                data[members] = comp.sample(rng, members.size)
    stored_seed = None if isinstance(seed, np.random.Generator) else seed
    return LabeledSample(data=data, z=idx + 1, seed=stored_seed)


def sample_hmm(spec, T, seed):
    """Simulate T steps of the hidden chain and its emissions.

    Returns (states, observations); states are 1-based and depend only on
    the previous state through the transition matrix.
    """
    T = int(T)
    if T < 1:
        raise DomainError("T must be at least 1")
    rng = _as_rng(seed)
    G = spec.G
    cum_init = np.cumsum(spec.initial)
    cum_rows = np.cumsum(np.asarray(spec.xi, dtype=float), axis=1)
    u = rng.random(T)
    states = np.empty(T, dtype=np.int64)
    states[0] = min(int(np.searchsorted(cum_init, u[0], side="right")), G - 1)
    for t in range(1, T):
        row = cum_rows[states[t - 1]]
        states[t] = min(int(np.searchsorted(row, u[t], side="right")), G - 1)
    obs = np.empty((T, 2)) if spec.family == "bivariate_normal" else np.empty(T)
    if spec.family == "poisson":
        obs = np.empty(T, dtype=np.int64)
    for g, comp in enumerate(spec.components):
        members = np.flatnonzero(states == g)
        if members.size:
            obs[members] = comp.sample(rng, members.size)
    return states + 1, obs


def sample_scale_mixture(mu, mixing, n, seed):
    """Normal draws whose variance is itself drawn from a mixing law.

    InverseGamma(shape=nu/2, scale=nu/2) on the variance gives Student-t
    with nu degrees of freedom; Exponential(rate) on the variance gives the
    Laplace distribution.  Both mixing laws act on the variance, not the sd.
    """
    n = int(n)
    if n < 0:
        raise DomainError("n must be non-negative")
    mu = float(mu)
    if not math.isfinite(mu):
        raise DomainError("mu must be finite")
    rng = _as_rng(seed)
    if isinstance(mixing, InverseGamma):
        variances = 1.0 / rng.gamma(mixing.shape, 1.0 / mixing.scale, size=n)
    elif isinstance(mixing, Exponential):
        variances = rng.exponential(1.0 / mixing.rate, size=n)
    else:
        raise DomainError(f"unsupported mixing law {mixing!r}")
    return mu + np.sqrt(variances) * rng.standard_normal(n)


def sample_monotone_density(thetas, n, seed):
    """Mixture of Uniform[0, theta] draws; the marginal density never increases.

    ``thetas`` is a sequence of (weight, theta) pairs with positive theta
    and weights on the simplex.
    """
    n = int(n)
    if n < 0:
        raise DomainError("n must be non-negative")
    pairs = [(float(w), float(t)) for w, t in thetas]
    if not pairs:
        raise DomainError("at least one atom is required")
    for w, t in pairs:
        if w < 0.0:
            raise InvalidMeasureError("weights must be non-negative")
        if not (math.isfinite(t) and t > 0.0):
            raise DomainError("every theta must be positive")
    if abs(math.fsum(w for w, _ in pairs) - 1.0) > WEIGHT_SUM_TOL:
        raise InvalidMeasureError("weights must sum to 1")
    rng = _as_rng(seed)
    weights = np.array([w for w, _ in pairs])
    uppers = np.array([t for _, t in pairs])
    idx = _categorical(rng, weights, n)
    return rng.random(n) * uppers[idx]


def mixture_cdf(model, y):
    """Exact cdf of a univariate Normal mixture (test and demo helper)."""
    from scipy.stats import norm

    if model.family != "normal":
        raise DomainError("mixture_cdf supports univariate Normal mixtures only")
    arr = np.asarray(y, dtype=float)
    out = np.zeros_like(arr)
    for w, c in model.measure.atoms:
        out += w * norm.cdf((arr - c.mu) / c.sigma)
    return float(out) if np.isscalar(y) or np.ndim(y) == 0 else out
