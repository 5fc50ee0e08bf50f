"""Mixing measures and mixture models.

A mixing measure is a finite list of (weight, component) atoms sharing one
parametric family; a mixture model pairs the family tag with such a measure.
The mixture density is the weight-weighted sum of component densities, and
every label-free comparison of two measures goes through :func:`canonicalize`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .components import FAMILIES, component_from_dict, validate_observations
from .errors import DomainError, InvalidMeasureError, SpecDocumentError

WEIGHT_SUM_TOL = 1e-12
# canonicalize(): atoms lighter than WEIGHT_EPS are dropped; atoms whose
# parameters agree within PARAM_EPS (absolute) are merged.
WEIGHT_EPS = 1e-12
PARAM_EPS = 1e-9


@dataclass(frozen=True)
class MixingMeasure:
    """Finite set of (weight, component) atoms with weights on the simplex."""

    atoms: tuple

    def __post_init__(self):
        atoms = tuple((float(w), c) for w, c in self.atoms)
        if len(atoms) < 1:
            raise InvalidMeasureError("a mixing measure needs at least one atom")
        families = {c.family for _, c in atoms}
        if len(families) > 1:
            raise InvalidMeasureError(f"atoms mix families: {sorted(families)}")
        for w, _ in atoms:
            if not (math.isfinite(w) and w >= 0.0):
                raise InvalidMeasureError("weights must be finite and non-negative")
        total = math.fsum(w for w, _ in atoms)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise InvalidMeasureError(f"weights sum to {total!r}, not 1")
        object.__setattr__(self, "atoms", atoms)

    def __len__(self):
        return len(self.atoms)

    @property
    def G(self):
        return len(self.atoms)

    @property
    def family(self):
        return self.atoms[0][1].family

    @property
    def weights(self):
        return np.array([w for w, _ in self.atoms])

    @property
    def components(self):
        return tuple(c for _, c in self.atoms)


@dataclass(frozen=True)
class MixtureModel:
    """A component family tag paired with a mixing measure over it."""

    measure: MixingMeasure
    family: str = ""

    def __post_init__(self):
        derived = self.measure.family
        if self.family == "":
            object.__setattr__(self, "family", derived)
        elif self.family != derived:
            raise InvalidMeasureError(
                f"family {self.family!r} does not match measure atoms ({derived!r})"
            )

    @property
    def G(self):
        return self.measure.G


def permute(measure, perm):
    """Reorder atoms: position k of the result holds atom ``perm[k]`` (1-based)."""
    G = len(measure)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(1, G + 1)):
        raise DomainError(f"perm must be a bijection of 1..{G}")
    return MixingMeasure(tuple(measure.atoms[p - 1] for p in perm))


def canonicalize(measure):
    """Reduce a measure to its canonical form.

    Drops atoms below the weight threshold, merges atoms whose parameters
    coincide within ``PARAM_EPS``, sorts by the family's parameter order
    (mean then sd for Normals, rate for Poisson) and re-normalizes.  Two
    measures that represent the same mixing distribution canonicalize to
    equal objects, which is what makes label-free comparison possible.
    """
    kept = [(w, c) for w, c in measure.atoms if w >= WEIGHT_EPS]
    if not kept:
        raise InvalidMeasureError("every atom fell below the weight threshold")
    kept.sort(key=lambda atom: (atom[1].sort_key, atom[0]))
    merged = [list(kept[0])]
    for w, c in kept[1:]:
        head = merged[-1]
        if c.close_to(head[1], PARAM_EPS):
            head[0] += w
        else:
            merged.append([w, c])
    total = math.fsum(w for w, _ in merged)
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        # only rescale when mass was actually dropped; an already valid
        # measure passes through bit for bit, so the map is idempotent
        merged = [(w / total, c) for w, c in merged]
    return MixingMeasure(tuple((w, c) for w, c in merged))


def density(model, y):
    """Mixture density at a single observation, summed in stored atom order.

    Uses compensated summation so the result depends only on the multiset of
    atoms, not on how they are ordered.
    """
    arr = validate_observations(model.family, y)
    if model.family == "bivariate_normal":
        if arr.shape[0] != 1:
            raise DomainError("density expects a single observation")
    elif arr.shape != (1,):
        raise DomainError("density expects a single observation")
    point = arr[0]
    return math.fsum(w * float(c.density(point)) for w, c in model.measure.atoms)


def log_density(model, y):
    """log of :func:`density`, evaluated by log-sum-exp for stability."""
    arr = validate_observations(model.family, y)
    if model.family == "bivariate_normal":
        if arr.shape[0] != 1:
            raise DomainError("log_density expects a single observation")
    elif arr.shape != (1,):
        raise DomainError("log_density expects a single observation")
    point = arr[0]
    terms = []
    for w, c in model.measure.atoms:
        if w > 0.0:
            terms.append(math.log(w) + float(c.log_density(point)))
    if not terms:
        return -math.inf
    return float(logsumexp(terms))


def log_weighted_densities(model, data):
    """Matrix of log(eta_g) + log f(y_i | theta_g), shape (n, G).

    Shared by the likelihood, the E-step and the Gibbs allocation update.
    ``data`` must already be validated for the model family.
    """
    arr = validate_observations(model.family, data)
    n = arr.shape[0]
    G = model.G
    out = np.empty((n, G))
    with np.errstate(divide="ignore"):
        for g, (w, c) in enumerate(model.measure.atoms):
            lw = math.log(w) if w > 0.0 else -math.inf
            out[:, g] = lw + c.log_density(arr)
    return out


def log_likelihood(model, data):
    """Sum over observations of the log mixture density.

    The empty dataset has log-likelihood 0 by the empty-product convention;
    -inf is returned (not raised) when some observation has zero density.
    """
    arr = validate_observations(model.family, data)
    if arr.shape[0] == 0:
        return 0.0
    per_point = logsumexp(log_weighted_densities(model, arr), axis=1)
    return math.fsum(per_point.tolist())


def model_to_dict(model):
    return {
        "family": model.family,
        "atoms": [{"weight": w, **c.params_dict()} for w, c in model.measure.atoms],
    }


def model_from_dict(doc, context="model"):
    if not isinstance(doc, dict):
        raise SpecDocumentError(f"{context}: expected a mapping")
    family = doc.get("family")
    atoms_doc = doc.get("atoms")
    extra = [k for k in doc if k not in ("family", "atoms")]
    if extra:
        raise SpecDocumentError(f"{context}: unknown field(s) {extra}")
    if family not in FAMILIES:
        raise SpecDocumentError(f"{context}: unknown family {family!r}")
    if not isinstance(atoms_doc, list) or not atoms_doc:
        raise SpecDocumentError(f"{context}: atoms must be a non-empty list")
    atoms = []
    for k, atom in enumerate(atoms_doc):
        if not isinstance(atom, dict) or "weight" not in atom:
            raise SpecDocumentError(f"{context}: atom {k} needs a weight field")
        params = {key: val for key, val in atom.items() if key != "weight"}
        comp = component_from_dict(family, params, context=f"{context}: atom {k}")
        atoms.append((float(atom["weight"]), comp))
    try:
        return MixtureModel(MixingMeasure(tuple(atoms)))
    except InvalidMeasureError as exc:
        raise SpecDocumentError(f"{context}: {exc}") from exc


def model_to_json(model):
    """Serialize a model; floats keep their shortest round-tripping form."""
    return json.dumps(model_to_dict(model), indent=2)


def model_from_json(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecDocumentError(f"invalid JSON: {exc}") from exc
    return model_from_dict(doc)
