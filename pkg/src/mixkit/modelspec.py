"""Model specification documents.

One JSON envelope covers every object the command line can ingest: mixture
models, hidden Markov chains, conjugate priors and compound-distribution
parameters.  A ``kind`` field discriminates; unknown fields anywhere are
rejected so that typos fail loudly instead of being ignored.
"""

from __future__ import annotations

import json

from .bayes import ConjugatePrior
from .components import component_from_dict
from .compound import (
    BetaBinomialParams,
    DirichletMultinomialParams,
    NegativeBinomialParams,
)
from .errors import DomainError, MixtureError, SpecDocumentError
from .models import MixtureModel, model_from_dict, model_to_dict
from .sampling import HMMSpec

SCHEMA_VERSION = 1

KINDS = (
    "mixture",
    "hmm",
    "prior",
    "beta_binomial",
    "negative_binomial",
    "dirichlet_multinomial",
)


def _require_fields(doc, fields, context):
    missing = [k for k in fields if k not in doc]
    extra = [k for k in doc if k not in fields]
    if missing:
        raise SpecDocumentError(f"{context}: missing field(s) {missing}")
    if extra:
        raise SpecDocumentError(f"{context}: unknown field(s) {extra}")


def _parse_mixture(doc):
    _require_fields(doc, ("schema_version", "kind", "family", "atoms"), "mixture")
    body = {k: v for k, v in doc.items() if k not in ("schema_version", "kind")}
    return model_from_dict(body, context="mixture")


def _parse_hmm(doc):
    _require_fields(doc, ("schema_version", "kind", "family", "initial", "transition", "emissions"), "hmm")
    family = doc["family"]
    emissions = doc["emissions"]
    if not isinstance(emissions, list) or not emissions:
        raise SpecDocumentError("hmm: emissions must be a non-empty list")
    comps = [
        component_from_dict(family, e, context=f"hmm: emission {k}")
        for k, e in enumerate(emissions)
    ]
    try:
        return HMMSpec(initial=doc["initial"], xi=doc["transition"], components=tuple(comps))
    except MixtureError as exc:
        raise SpecDocumentError(f"hmm: {exc}") from exc


def _parse_prior(doc):
    fields = (
        "schema_version",
        "kind",
        "dirichlet_weights",
        "normal_mean_loc",
        "normal_mean_scale",
        "ig_shape",
        "ig_scale",
    )
    _require_fields(doc, fields, "prior")
    try:
        return ConjugatePrior(
            dirichlet_weights=tuple(doc["dirichlet_weights"]),
            normal_mean_loc=doc["normal_mean_loc"],
            normal_mean_scale=doc["normal_mean_scale"],
            ig_shape=doc["ig_shape"],
            ig_scale=doc["ig_scale"],
        )
    except (MixtureError, TypeError) as exc:
        raise SpecDocumentError(f"prior: {exc}") from exc


def _parse_compound(doc, kind):
    try:
        if kind == "beta_binomial":
            _require_fields(doc, ("schema_version", "kind", "trials", "alpha", "beta"), kind)
            return BetaBinomialParams(trials=doc["trials"], alpha=doc["alpha"], beta=doc["beta"])
        if kind == "negative_binomial":
            _require_fields(doc, ("schema_version", "kind", "alpha", "beta"), kind)
            return NegativeBinomialParams(alpha=doc["alpha"], beta=doc["beta"])
        _require_fields(doc, ("schema_version", "kind", "trials", "concentration"), kind)
        return DirichletMultinomialParams(
            trials=doc["trials"], concentration=tuple(doc["concentration"])
        )
    except (DomainError, TypeError) as exc:
        raise SpecDocumentError(f"{kind}: {exc}") from exc


def parse_document(text):
    """Parse one specification document; returns the domain object it names."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecDocumentError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise SpecDocumentError("the document must be a JSON object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SpecDocumentError(f"schema_version must be {SCHEMA_VERSION}, got {version!r}")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise SpecDocumentError(f"kind must be one of {KINDS}, got {kind!r}")
    if kind == "mixture":
        return _parse_mixture(doc)
    if kind == "hmm":
        return _parse_hmm(doc)
    if kind == "prior":
        return _parse_prior(doc)
    return _parse_compound(doc, kind)


def load_document(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecDocumentError(f"cannot read {path}: {exc}") from exc
    return parse_document(text)


def document_for(obj):
    """The JSON-ready dict a given domain object serializes to."""
    if isinstance(obj, MixtureModel):
        return {"schema_version": SCHEMA_VERSION, "kind": "mixture", **model_to_dict(obj)}
    if isinstance(obj, HMMSpec):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "hmm",
            "family": obj.family,
            "initial": list(obj.initial),
            "transition": [list(r) for r in obj.xi],
            "emissions": [c.params_dict() for c in obj.components],
        }
    if isinstance(obj, ConjugatePrior):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "prior",
            "dirichlet_weights": list(obj.dirichlet_weights),
            "normal_mean_loc": obj.normal_mean_loc,
            "normal_mean_scale": obj.normal_mean_scale,
            "ig_shape": obj.ig_shape,
            "ig_scale": obj.ig_scale,
        }
    if isinstance(obj, BetaBinomialParams):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "beta_binomial",
            "trials": obj.trials,
            "alpha": obj.alpha,
            "beta": obj.beta,
        }
    if isinstance(obj, NegativeBinomialParams):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "negative_binomial",
            "alpha": obj.alpha,
            "beta": obj.beta,
        }
    if isinstance(obj, DirichletMultinomialParams):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "dirichlet_multinomial",
            "trials": obj.trials,
            "concentration": list(obj.concentration),
        }
    raise DomainError(f"cannot serialize {type(obj).__name__}")


def dump_document(obj):
    return json.dumps(document_for(obj), indent=2) + "\n"
