"""Bayesian inference for univariate Normal mixtures.

A conjugate data-augmentation Gibbs sampler alternates allocation draws with
Dirichlet weight updates and Normal-inverse-Gamma parameter updates.  Chains
are stored raw: component labels switch freely, so every reported summary is
a permutation-invariant functional of the mixing distribution (atom counts
or total weight in a parameter region, the weight of the largest-variance
component, the predictive density).  Per-label estimates are deliberately
not exposed.

Prior convention: eta ~ Dirichlet(dirichlet_weights) and, independently
across components, sigma_g^2 ~ InverseGamma(ig_shape, ig_scale) with
mu_g | sigma_g^2 ~ Normal(normal_mean_loc, sigma_g^2 * normal_mean_scale^2).
In the usual kappa notation this makes kappa_0 = normal_mean_scale ** -2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .components import UnivariateNormal, validate_observations
from .em import e_step
from .errors import DomainError
from .models import MixingMeasure, MixtureModel
from .sampling import _as_rng

_LOG_TWO_PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class ConjugatePrior:
    dirichlet_weights: tuple
    normal_mean_loc: float
    normal_mean_scale: float
    ig_shape: float
    ig_scale: float

    def __post_init__(self):
        dw = tuple(float(d) for d in self.dirichlet_weights)
        if not dw or any(d <= 0.0 for d in dw):
            raise DomainError("dirichlet_weights must be positive")
        for name in ("normal_mean_scale", "ig_shape", "ig_scale"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"{name} must be positive")
        object.__setattr__(self, "dirichlet_weights", dw)
        object.__setattr__(self, "normal_mean_loc", float(self.normal_mean_loc))
        object.__setattr__(self, "normal_mean_scale", float(self.normal_mean_scale))
        object.__setattr__(self, "ig_shape", float(self.ig_shape))
        object.__setattr__(self, "ig_scale", float(self.ig_scale))

    @property
    def G(self):
        return len(self.dirichlet_weights)

    @property
    def kappa0(self):
        return self.normal_mean_scale ** -2.0


def default_prior(data, G):
    """Weakly informative prior scaled to the data: mean at the midrange,
    mean-scale equal to the range, unit Dirichlet weights."""
    arr = np.asarray(validate_observations("normal", data), dtype=float)
    if arr.size == 0:
        raise DomainError("cannot scale a default prior to an empty dataset")
    lo, hi = float(arr.min()), float(arr.max())
    spread = hi - lo if hi > lo else 1.0
    variance = float(arr.var()) if arr.var() > 0.0 else 1.0
    return ConjugatePrior(
        dirichlet_weights=(1.0,) * int(G),
        normal_mean_loc=0.5 * (lo + hi),
        normal_mean_scale=spread,
        ig_shape=2.0,
        ig_scale=variance,
    )


@dataclass(frozen=True)
class GibbsState:
    z: np.ndarray  # 1-based allocations
    measure: MixingMeasure
    iteration: int


@dataclass(frozen=True)
class GibbsConfig:
    burn_in: int = 500
    n_samples: int = 1000
    thin: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.burn_in < 0 or self.n_samples < 1 or self.thin < 1:
            raise DomainError("need burn_in >= 0, n_samples >= 1, thin >= 1")


@dataclass(frozen=True)
class PosteriorSample:
    """Thinned post-burn-in snapshots of the raw, unrelabeled chain."""

    snapshots: tuple
    seed: int
    config: GibbsConfig

    def __len__(self):
        return len(self.snapshots)


def allocation_probabilities(measure, data):
    """Categorical probabilities used for allocation draws.

    These are exactly the E-step responsibilities; the sampler and EM share
    one implementation.
    """
    return e_step(MixtureModel(measure), data)


def gibbs_allocations(measure, data, seed):
    """Draw 1-based allocations, each row from its responsibility vector."""
    rng = _as_rng(seed)
    arr = validate_observations(measure.family, data)
    if len(arr) == 0:
        return np.empty(0, dtype=np.int64)
    r = allocation_probabilities(measure, arr)
    cum = np.cumsum(r, axis=1)
    u = rng.random(len(arr))
    idx = np.minimum((u[:, None] >= cum).sum(axis=1), measure.G - 1)
    return idx.astype(np.int64) + 1


def _posterior_coefficients(prior, members):
    """Normal-inverse-Gamma update for one component's member observations."""
    n_g = len(members)
    k0 = prior.kappa0
    m0 = prior.normal_mean_loc
    kn = k0 + n_g
    if n_g:
        ybar = float(np.mean(members))
        ss = float(np.sum((members - ybar) ** 2))
        mn = (k0 * m0 + n_g * ybar) / kn
        bn = prior.ig_scale + 0.5 * ss + 0.5 * k0 * n_g * (ybar - m0) ** 2 / kn
    else:
        mn = m0
        bn = prior.ig_scale
    an = prior.ig_shape + 0.5 * n_g
    return mn, kn, an, bn


def _draw_component(rng, mn, kn, an, bn):
    variance = 1.0 / rng.gamma(an, 1.0 / bn)
    mu = rng.normal(mn, math.sqrt(variance / kn))
    return UnivariateNormal(mu, math.sqrt(variance))


def prior_draw(prior, seed):
    """One draw of (weights, components) from the prior, as a MixingMeasure."""
    rng = _as_rng(seed)
    eta = rng.dirichlet(prior.dirichlet_weights)
    comps = [
        _draw_component(rng, prior.normal_mean_loc, prior.kappa0, prior.ig_shape, prior.ig_scale)
        for _ in range(prior.G)
    ]
    return MixingMeasure(tuple(zip(eta.tolist(), comps)))


def gibbs_sweep(state, data, prior, seed):
    """One full scan: allocations, then weights, then component parameters.

    Components with no members fall back to their prior automatically since
    the update coefficients reduce to the prior's when n_g = 0.
    """
    if state.measure.family != "normal":
        raise DomainError("the Gibbs sampler handles univariate Normal mixtures")
    rng = _as_rng(seed)
    arr = validate_observations("normal", data)
    G = state.measure.G
    if prior.G != G:
        raise DomainError("prior and state disagree on the number of components")
    z = gibbs_allocations(state.measure, arr, rng)
    counts = np.bincount(z - 1, minlength=G) if len(arr) else np.zeros(G)
    eta = rng.dirichlet(np.asarray(prior.dirichlet_weights) + counts)
    comps = []
    for g in range(G):
        members = arr[z == g + 1] if len(arr) else arr
        comps.append(_draw_component(rng, *_posterior_coefficients(prior, members)))
    measure = MixingMeasure(tuple(zip(eta.tolist(), comps)))
    return GibbsState(z=z, measure=measure, iteration=state.iteration + 1)


def run_gibbs(data, G, prior, config=GibbsConfig()):
    """Run the sampler and return the thinned post-burn-in chain, unrelabeled."""
    arr = validate_observations("normal", data)
    G = int(G)
    if prior.G != G:
        raise DomainError("prior dirichlet_weights must have length G")
    rng = np.random.default_rng(config.seed)
    state = GibbsState(
        z=np.ones(len(arr), dtype=np.int64),
        measure=prior_draw(prior, rng),
        iteration=0,
    )
    snapshots = []
    total = config.burn_in + config.n_samples * config.thin
    for sweep_index in range(1, total + 1):
        state = gibbs_sweep(state, arr, prior, rng)
        if sweep_index > config.burn_in and (sweep_index - config.burn_in) % config.thin == 0:
            snapshots.append(state)
    return PosteriorSample(snapshots=tuple(snapshots), seed=config.seed, config=config)


# ---------------------------------------------------------------------------
# Label-invariant summaries of the mixing distribution.


@dataclass(frozen=True)
class ParamRegion:
    """Axis-aligned region in (mu, sigma) space; bounds may be infinite."""

    mu_min: float = -math.inf
    mu_max: float = math.inf
    sigma_min: float = 0.0
    sigma_max: float = math.inf

    def __post_init__(self):
        if self.mu_min > self.mu_max or self.sigma_min > self.sigma_max:
            raise DomainError("region is empty")

    def contains(self, component):
        return (
            self.mu_min <= component.mu <= self.mu_max
            and self.sigma_min <= component.sigma <= self.sigma_max
        )


@dataclass(frozen=True)
class AtomCountInSet:
    region: ParamRegion


@dataclass(frozen=True)
class TotalWeightInSet:
    region: ParamRegion


@dataclass(frozen=True)
class WeightOfLargestVarianceComponent:
    pass


@dataclass(frozen=True)
class PredictiveDensityAt:
    points: tuple

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        if not pts:
            raise DomainError("at least one evaluation point is required")
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class SummaryStatistics:
    """Per-snapshot functional values with their mean and quantiles."""

    values: np.ndarray
    mean: np.ndarray
    quantiles: dict


def _evaluate_functional(functional, measure):
    if isinstance(functional, AtomCountInSet):
        return float(sum(1 for _, c in measure.atoms if functional.region.contains(c)))
    if isinstance(functional, TotalWeightInSet):
        return math.fsum(w for w, c in measure.atoms if functional.region.contains(c))
    if isinstance(functional, WeightOfLargestVarianceComponent):
        top = max(c.sigma for _, c in measure.atoms)
        return max(w for w, c in measure.atoms if c.sigma == top)
    if isinstance(functional, PredictiveDensityAt):
        pts = np.asarray(functional.points)
        per_comp = np.vstack([w * np.exp(c.log_density(pts)) for w, c in measure.atoms])
        return np.array([math.fsum(per_comp[:, j].tolist()) for j in range(len(pts))])
    raise DomainError(f"unknown functional {functional!r}")


def summarize_H(sample, functional):
    """Posterior summary of a permutation-invariant functional of the mixing
    distribution, evaluated on every snapshot of the raw chain."""
    if len(sample) == 0:
        raise DomainError("the posterior sample is empty")
    values = np.array([_evaluate_functional(functional, s.measure) for s in sample.snapshots])
    qs = (2.5, 25.0, 50.0, 75.0, 97.5)
    quantiles = {f"{q:g}%": np.percentile(values, q, axis=0) for q in qs}
    return SummaryStatistics(values=values, mean=values.mean(axis=0), quantiles=quantiles)


# ---------------------------------------------------------------------------
# Within-model evidence and the posterior over the number of components.


@dataclass(frozen=True)
class EvidenceConfig:
    n_prior_draws: int = 5000
    seed: int = 0

    def __post_init__(self):
        if self.n_prior_draws < 1000:
            raise DomainError("n_prior_draws must be at least 1000")


@dataclass(frozen=True)
class EvidenceEstimate:
    """Monte-Carlo estimate of log p(y | G) with a delta-method standard error."""

    log_value: float
    log_se: float
    underflowed: bool

    def __float__(self):
        return self.log_value


def _prior_parameter_draws(prior, rng, m):
    etas = rng.dirichlet(prior.dirichlet_weights, size=m)
    variances = 1.0 / rng.gamma(prior.ig_shape, 1.0 / prior.ig_scale, size=(m, prior.G))
    sigmas = np.sqrt(variances)
    mus = prior.normal_mean_loc + sigmas * prior.normal_mean_scale * rng.standard_normal(
        (m, prior.G)
    )
    return etas, mus, sigmas


def _loglik_of_draws(data, etas, mus, sigmas):
    """Vectorized mixture log-likelihood for a batch of parameter draws."""
    y = np.asarray(data, dtype=float)[:, None, None]
    z = (y - mus[None, :, :]) / sigmas[None, :, :]
    comp_log = -0.5 * z * z - np.log(sigmas)[None, :, :] - 0.5 * _LOG_TWO_PI
    with np.errstate(divide="ignore"):
        comp_log = comp_log + np.log(etas)[None, :, :]
    return logsumexp(comp_log, axis=2).sum(axis=0)


def log_marginal_likelihood(data, G, prior, config=EvidenceConfig()):
    """Simple Monte-Carlo evidence: average the likelihood over prior draws.

    Stable in log space; documented caveat: the estimator is high-variance
    for diffuse priors, which the standard error makes visible.
    """
    arr = validate_observations("normal", data)
    G = int(G)
    if prior.G != G:
        raise DomainError("prior dirichlet_weights must have length G")
    rng = np.random.default_rng(config.seed)
    m = config.n_prior_draws
    etas, mus, sigmas = _prior_parameter_draws(prior, rng, m)
    if len(arr) == 0:
        return EvidenceEstimate(log_value=0.0, log_se=0.0, underflowed=False)
    lls = np.empty(m)
    chunk = max(1, int(4_000_000 / max(len(arr) * G, 1)))
    for start in range(0, m, chunk):
        stop = min(start + chunk, m)
        lls[start:stop] = _loglik_of_draws(arr, etas[start:stop], mus[start:stop], sigmas[start:stop])
    top = lls.max()
    if np.isneginf(top):
        warnings.warn("every prior draw underflowed the likelihood", RuntimeWarning)
        return EvidenceEstimate(log_value=-math.inf, log_se=math.nan, underflowed=True)
    w = np.exp(lls - top)
    mean_w = w.mean()
    log_value = float(logsumexp(lls) - math.log(m))
    log_se = float(w.std(ddof=1) / (mean_w * math.sqrt(m)))
    return EvidenceEstimate(log_value=log_value, log_se=log_se, underflowed=False)


def combine_log_marginals(log_marginals, prior_on_G):
    """Bayes' rule across model sizes, normalized in log space."""
    prior_on_G = np.asarray(prior_on_G, dtype=float)
    if np.any(prior_on_G < 0.0) or abs(math.fsum(prior_on_G.tolist()) - 1.0) > 1e-12:
        raise DomainError("prior_on_G must be a probability vector")
    log_marginals = np.asarray([float(v) for v in log_marginals])
    if len(log_marginals) != len(prior_on_G):
        raise DomainError("one marginal likelihood per model size is required")
    with np.errstate(divide="ignore"):
        lp = np.log(prior_on_G) + log_marginals
    post = np.exp(lp - logsumexp(lp))
    return post / post.sum()


def posterior_over_G(data, G_range, prior_builder, prior_on_G, config=EvidenceConfig()):
    """Posterior probabilities of each model size in ``G_range``.

    ``prior_builder(G)`` must return the within-model ConjugatePrior; the
    evidence of each size is estimated independently (fresh seed stream per
    size, all derived from config.seed).
    """
    G_range = [int(G) for G in G_range]
    if not G_range:
        raise DomainError("G_range must be non-empty")
    children = np.random.SeedSequence(config.seed).spawn(len(G_range))
    estimates = []
    for G, child in zip(G_range, children):
        sub = EvidenceConfig(n_prior_draws=config.n_prior_draws, seed=int(child.generate_state(1)[0]))
        estimates.append(log_marginal_likelihood(data, G, prior_builder(G), sub))
    return combine_log_marginals([e.log_value for e in estimates], prior_on_G)
