"""Batch command-line front end.

Each subcommand is deterministic given its seed, emits RFC-4180 CSV (or a
JSON report) with numbers at 17 significant digits, and writes a JSON
manifest alongside every output recording the command line, seed, effective
configuration, input and output paths, toolkit version and wall-clock time.
Outputs are written atomically (temp file, then rename).

Exit codes: 0 success, 2 bad arguments, 3 input parse failure, 4 numerical
failure.  The default seed is 0, overridable by the MIXKIT_SEED environment
variable and then by --seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time
from itertools import combinations

import numpy as np

from . import __version__
from .bayes import (
    ConjugatePrior,
    EvidenceConfig,
    GibbsConfig,
    PredictiveDensityAt,
    WeightOfLargestVarianceComponent,
    combine_log_marginals,
    default_prior,
    log_marginal_likelihood,
    run_gibbs,
    summarize_H,
)
from .compound import (
    BetaBinomialParams,
    DirichletMultinomialParams,
    NegativeBinomialParams,
    betabinom_pmf,
    dirmult_pmf,
    negbinom_pmf,
    negbinom_support_bound,
)
from .dp import expected_cluster_count, sample_crp_labels
from .em import EMConfig, fit_report, run_em, run_hard_em
from .errors import (
    DataFileError,
    DegeneratePointError,
    DomainError,
    EmptyComponentError,
    IntervalTooSmallError,
    InvalidMeasureError,
    SpecDocumentError,
)
from .models import MixtureModel, log_weighted_densities
from .modelspec import document_for, load_document
from .modes import find_modes
from .sampling import HMMSpec, sample_hmm, sample_mixture

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_NUMERIC = 4

ENV_SEED = "MIXKIT_SEED"


def _fmt(value):
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _atomic_write_text(path, text):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".mixkit-tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_csv(path, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    _atomic_write_text(path, buf.getvalue())


def _write_json(path, doc):
    _atomic_write_text(path, json.dumps(doc, indent=2) + "\n")


def _write_manifest(out_path, argv, seed, config, inputs, outputs, extra, started):
    doc = {
        "command": ["mixkit"] + list(argv),
        "seed": seed,
        "config": config,
        "inputs": list(inputs),
        "outputs": list(outputs),
        "version": __version__,
        "wall_clock_seconds": time.monotonic() - started,
        "extra": extra,
    }
    _write_json(out_path + ".manifest.json", doc)


def _resolve_seed(args):
    if getattr(args, "seed", None) is not None:
        return int(args.seed)
    env = os.environ.get(ENV_SEED)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise DomainError(f"{ENV_SEED} must be an integer, got {env!r}")
    return 0


def _parse_grid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError("grid must be written lo:hi:points")
    try:
        lo, hi, points = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise DomainError(f"cannot parse grid {text!r}")
    if not hi > lo:
        raise DomainError("grid needs hi > lo")
    if points < 2:
        raise DomainError("grid needs at least 2 points")
    return lo, hi, points


def _read_data(path):
    """Read a data CSV: column y, columns y1,y2, or headerless numerics."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DataFileError(f"cannot read {path}: {exc}")
    rows = [r for r in rows if r and any(f.strip() for f in r)]
    if not rows:
        raise DataFileError(f"{path} holds no data rows")

    def numeric(row):
        try:
            [float(f) for f in row]
            return True
        except ValueError:
            return False

    start = 0
    if not numeric(rows[0]):
        header = [f.strip() for f in rows[0]]
        start = 1
        if "y" in header:
            cols = [header.index("y")]
        elif "y1" in header and "y2" in header:
            cols = [header.index("y1"), header.index("y2")]
        else:
            raise DataFileError(f"{path}: header must name a column y (or y1 and y2)")
    else:
        width = len(rows[0])
        if width not in (1, 2):
            raise DataFileError(f"{path}: headerless data must have 1 or 2 columns")
        cols = list(range(width))
    out = []
    for k, row in enumerate(rows[start:], start=start + 1):
        try:
            out.append([float(row[c]) for c in cols])
        except (ValueError, IndexError):
            raise DataFileError(f"{path}: cannot parse line {k}")
    arr = np.asarray(out)
    return arr[:, 0] if arr.shape[1] == 1 else arr


def _load_spec(path, expected_kinds, what):
    obj = load_document(path)
    kind_map = {
        MixtureModel: "mixture",
        HMMSpec: "hmm",
        ConjugatePrior: "prior",
        BetaBinomialParams: "beta_binomial",
        NegativeBinomialParams: "negative_binomial",
        DirichletMultinomialParams: "dirichlet_multinomial",
    }
    kind = kind_map.get(type(obj))
    if kind not in expected_kinds:
        raise DomainError(f"{what} expects a spec of kind {expected_kinds}, got {kind!r}")
    return obj


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_simulate(args, argv):
    started = time.monotonic()
    seed = _resolve_seed(args)
    n = int(args.n)
    if n < 0:
        raise DomainError("--n must be non-negative")
    obj = _load_spec(args.spec, ("mixture", "hmm"), "simulate")
    if isinstance(obj, HMMSpec):
        if n < 1:
            raise DomainError("--n must be at least 1 for an hmm spec")
        states, data = sample_hmm(obj, n, seed)
        z = states
        family = obj.family
    else:
        sample = sample_mixture(obj, n, seed)
        data, z = sample.data, sample.z
        family = obj.family
    if family == "bivariate_normal":
        header = ["y1", "y2", "z"]
        rows = [(data[i, 0], data[i, 1], z[i]) for i in range(n)]
    else:
        header = ["y", "z"]
        rows = [(data[i], z[i]) for i in range(n)]
    _write_csv(args.out, header, rows)
    _write_manifest(
        args.out,
        argv,
        seed,
        {"n": n, "spec": args.spec},
        inputs=[args.spec],
        outputs=[args.out],
        extra={"rows": n},
        started=started,
    )
    return EXIT_OK


def _density_table(model, grid):
    if model.family == "bivariate_normal":
        raise DomainError("density tables support univariate families only")
    if model.family == "poisson":
        lams = [c.lam for c in model.measure.components]
        top = max(lams)
        if grid is None:
            y_max = int(math.ceil(top + 20.0 * math.sqrt(top)))
            ys = np.arange(0, y_max + 1)
        else:
            lo, hi, _ = grid
            ys = np.arange(max(0, int(math.ceil(lo))), int(math.floor(hi)) + 1)
            if ys.size == 0:
                raise DomainError("grid covers no non-negative integers")
        from scipy.special import logsumexp

        vals = np.exp(logsumexp(log_weighted_densities(model, ys), axis=1))
        return ys, vals, {"pmf_sum": math.fsum(vals.tolist())}
    if grid is None:
        mus = [c.mu for c in model.measure.components]
        smax = max(c.sigma for c in model.measure.components)
        lo, hi, points = min(mus) - 8.0 * smax, max(mus) + 8.0 * smax, 2001
    else:
        lo, hi, points = grid
    xs = np.linspace(lo, hi, points)
    dens = np.zeros_like(xs)
    for w, c in model.measure.atoms:
        dens += w * np.exp(c.log_density(xs))
    return xs, dens, {"trapezoid_integral": float(np.trapezoid(dens, xs))}


def _cmd_density(args, argv):
    started = time.monotonic()
    model = _load_spec(args.spec, ("mixture",), "density")
    grid = _parse_grid(args.grid) if args.grid else None
    xs, vals, extra = _density_table(model, grid)
    name = "pmf" if model.family == "poisson" else "density"
    _write_csv(args.out, ["y", name], list(zip(xs, vals)))
    _write_manifest(
        args.out,
        argv,
        None,
        {"spec": args.spec, "grid": args.grid},
        inputs=[args.spec],
        outputs=[args.out],
        extra=extra,
        started=started,
    )
    return EXIT_OK


def _gibbs_outputs(args, data, sample, grid):
    lo, hi, points = grid
    xs = np.linspace(lo, hi, points)
    predictive = summarize_H(sample, PredictiveDensityAt(tuple(xs)))
    top_weight = summarize_H(sample, WeightOfLargestVarianceComponent())
    chain_lines = []
    for snap in sample.snapshots:
        rec = {
            "iteration": snap.iteration,
            "weights": [w for w, _ in snap.measure.atoms],
            "mu": [c.mu for c in snap.measure.components],
            "sigma": [c.sigma for c in snap.measure.components],
        }
        chain_lines.append(json.dumps(rec))
    pred_rows = list(
        zip(xs, predictive.mean, predictive.quantiles["2.5%"], predictive.quantiles["97.5%"])
    )
    report = {
        "method": "gibbs",
        "n_snapshots": len(sample),
        "summaries": {
            "weight_of_largest_variance_component": {
                "mean": float(top_weight.mean),
                "quantiles": {k: float(v) for k, v in top_weight.quantiles.items()},
            }
        },
        "predictive_grid": {"lo": lo, "hi": hi, "points": points},
    }
    return report, "\n".join(chain_lines) + "\n", pred_rows


def _cmd_fit(args, argv):
    started = time.monotonic()
    seed = _resolve_seed(args)
    data = _read_data(args.data)
    G = int(args.G)
    if data.ndim == 2:
        family = "bivariate_normal"
    elif args.family == "poisson":
        family = "poisson"
    else:
        family = "normal"
    if G < 1 or len(data) < G:
        raise DomainError("need 1 <= G <= number of observations")

    if args.method in ("em", "hard-em"):
        config = EMConfig(
            max_iter=args.max_iter,
            tol=args.tol,
            variance_floor=args.variance_floor,
            restarts=args.restarts,
            seed=seed,
        )
        runner = run_em if args.method == "em" else run_hard_em
        state = runner(data, G, family, config)
        report = fit_report(state, config)
        report["method"] = args.method
        report["n_observations"] = len(data)
        _write_json(args.out, report)
        _write_manifest(
            args.out,
            argv,
            seed,
            report["config"],
            inputs=[args.data],
            outputs=[args.out],
            extra={"final_loglik": state.loglik, "iterations": state.iteration},
            started=started,
        )
        return EXIT_OK

    # gibbs
    if family != "normal":
        raise DomainError("gibbs fitting supports univariate Normal data only")
    prior = (
        _load_spec(args.prior, ("prior",), "fit --prior")
        if args.prior
        else default_prior(data, G)
    )
    config = GibbsConfig(burn_in=args.burn_in, n_samples=args.samples, thin=args.thin, seed=seed)
    sample = run_gibbs(data, G, prior, config)
    if args.grid:
        grid = _parse_grid(args.grid)
    else:
        span = float(data.max() - data.min()) or 1.0
        grid = (float(data.min()) - 0.1 * span, float(data.max()) + 0.1 * span, 101)
    report, chain_text, pred_rows = _gibbs_outputs(args, data, sample, grid)
    chain_path = args.out + ".chain.ndjson"
    pred_path = args.out + ".predictive.csv"
    report.update(
        {
            "G": G,
            "seed": seed,
            "config": {"burn_in": config.burn_in, "n_samples": config.n_samples, "thin": config.thin},
            "prior": document_for(prior),
            "chain_path": chain_path,
            "predictive_path": pred_path,
        }
    )
    _write_json(args.out, report)
    _atomic_write_text(chain_path, chain_text)
    _write_csv(pred_path, ["y", "predictive_mean", "predictive_q025", "predictive_q975"], pred_rows)
    _write_manifest(
        args.out,
        argv,
        seed,
        report["config"],
        inputs=[args.data] + ([args.prior] if args.prior else []),
        outputs=[args.out, chain_path, pred_path],
        extra={"n_snapshots": len(sample)},
        started=started,
    )
    return EXIT_OK


def _cmd_select_g(args, argv):
    started = time.monotonic()
    seed = _resolve_seed(args)
    data = _read_data(args.data)
    if data.ndim != 1:
        raise DomainError("select-g expects univariate data")
    g_min, g_max = int(args.g_min), int(args.g_max)
    if g_min < 1 or g_min > g_max:
        raise DomainError("need 1 <= g-min <= g-max")
    sizes = list(range(g_min, g_max + 1))
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    estimates = []
    for G, child in zip(sizes, children):
        sub = EvidenceConfig(n_prior_draws=args.prior_draws, seed=int(child.generate_state(1)[0]))
        estimates.append(log_marginal_likelihood(data, G, default_prior(data, G), sub))
    prior_on_G = np.full(len(sizes), 1.0 / len(sizes))
    posterior = combine_log_marginals([e.log_value for e in estimates], prior_on_G)
    rows = [(G, e.log_value, p) for G, e, p in zip(sizes, estimates, posterior)]
    _write_csv(args.out, ["G", "log_marginal", "posterior"], rows)
    _write_manifest(
        args.out,
        argv,
        seed,
        {"g_min": g_min, "g_max": g_max, "prior_draws": args.prior_draws},
        inputs=[args.data],
        outputs=[args.out],
        extra={
            "standard_errors": [e.log_se for e in estimates],
            "underflowed": [e.underflowed for e in estimates],
            "posterior_sum": math.fsum(posterior.tolist()),
        },
        started=started,
    )
    return EXIT_OK


def _compositions(n, k):
    for dividers in combinations(range(n + k - 1), k - 1):
        counts = []
        prev = -1
        for d in dividers:
            counts.append(d - prev - 1)
            prev = d
        counts.append(n + k - 1 - prev - 1)
        yield tuple(counts)


def _cmd_compound(args, argv):
    started = time.monotonic()
    params = _load_spec(
        args.spec, ("beta_binomial", "negative_binomial", "dirichlet_multinomial"), "compound"
    )
    if isinstance(params, BetaBinomialParams):
        ys = range(params.trials + 1)
        rows = [(y, betabinom_pmf(params, y)) for y in ys]
        header = ["y", "pmf"]
    elif isinstance(params, NegativeBinomialParams):
        y_max = int(args.y_max) if args.y_max is not None else negbinom_support_bound(params)
        if y_max < 0:
            raise DomainError("--y-max must be non-negative")
        rows = [(y, negbinom_pmf(params, y)) for y in range(y_max + 1)]
        header = ["y", "pmf"]
    else:
        k = len(params.concentration)
        n_cells = math.comb(params.trials + k - 1, k - 1)
        if n_cells > 200_000:
            raise DomainError(f"{n_cells} count vectors is too many to tabulate")
        header = [f"y{j + 1}" for j in range(k)] + ["pmf"]
        rows = [(*c, dirmult_pmf(params, c)) for c in _compositions(params.trials, k)]
    _write_csv(args.out, header, rows)
    _write_manifest(
        args.out,
        argv,
        None,
        {"spec": args.spec},
        inputs=[args.spec],
        outputs=[args.out],
        extra={"pmf_sum": math.fsum(float(r[-1]) for r in rows)},
        started=started,
    )
    return EXIT_OK


def _cmd_modes(args, argv):
    started = time.monotonic()
    model = _load_spec(args.spec, ("mixture",), "modes")
    if model.family != "normal":
        raise DomainError("mode counting supports univariate Normal mixtures only")
    if args.grid:
        lo, hi, points = _parse_grid(args.grid)
        locations = find_modes(model, (lo, hi), points)
    else:
        locations = find_modes(model)
    print(len(locations))
    _write_csv(args.out, ["mode", "location"], [(k + 1, x) for k, x in enumerate(locations)])
    _write_manifest(
        args.out,
        argv,
        None,
        {"spec": args.spec, "grid": args.grid},
        inputs=[args.spec],
        outputs=[args.out],
        extra={"count": len(locations), "locations": [float(x) for x in locations]},
        started=started,
    )
    return EXIT_OK


def _cmd_crp(args, argv):
    started = time.monotonic()
    seed = _resolve_seed(args)
    alpha = float(args.alpha)
    n = int(args.n)
    runs = int(args.runs)
    if runs < 1:
        raise DomainError("--runs must be at least 1")
    labels = sample_crp_labels(alpha, n, runs, seed)
    clusters = labels.max(axis=1).astype(int) + 1
    histogram = np.bincount(clusters, minlength=n + 1)[1:]
    expected = expected_cluster_count(alpha, n)
    rows = [(k + 1, int(c), c / runs) for k, c in enumerate(histogram)]
    _write_csv(args.out, ["clusters", "runs", "frequency"], rows)
    print(f"expected_clusters {_fmt(expected)}")
    _write_manifest(
        args.out,
        argv,
        seed,
        {"alpha": alpha, "n": n, "runs": runs},
        inputs=[],
        outputs=[args.out],
        extra={"empirical_mean": float(clusters.mean()), "expected_clusters": expected},
        started=started,
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mixkit",
        description="Finite-mixture toolkit: simulation, fitting, model selection, tables.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_seed(p):
        p.add_argument("--seed", type=int, default=None, help=f"RNG seed (default ${ENV_SEED} or 0)")

    p = sub.add_parser("simulate", help="draw labeled observations from a mixture or hmm spec")
    p.add_argument("--spec", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", required=True)
    add_seed(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("density", help="tabulate a mixture density or pmf on a grid")
    p.add_argument("--spec", required=True)
    p.add_argument("--grid", default=None, help="lo:hi:points")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("fit", help="fit a mixture by em, hard-em or gibbs")
    p.add_argument("--method", choices=("em", "hard-em", "gibbs"), required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--G", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--family", choices=("normal", "poisson"), default="normal")
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--variance-floor", type=float, default=None)
    p.add_argument("--burn-in", type=int, default=500)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--thin", type=int, default=1)
    p.add_argument("--prior", default=None, help="prior spec document (gibbs only)")
    p.add_argument("--grid", default=None, help="predictive grid lo:hi:points (gibbs only)")
    add_seed(p)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("select-g", help="estimate the posterior over the number of components")
    p.add_argument("--data", required=True)
    p.add_argument("--g-min", type=int, required=True)
    p.add_argument("--g-max", type=int, required=True)
    p.add_argument("--prior-draws", type=int, default=5000)
    p.add_argument("--out", required=True)
    add_seed(p)
    p.set_defaults(func=_cmd_select_g)

    p = sub.add_parser("compound", help="tabulate a compound distribution pmf")
    p.add_argument("--spec", required=True)
    p.add_argument("--y-max", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_compound)

    p = sub.add_parser("modes", help="count and locate the modes of a Normal mixture")
    p.add_argument("--spec", required=True)
    p.add_argument("--grid", default=None, help="lo:hi:points")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_modes)

    p = sub.add_parser("crp", help="histogram of cluster counts under sequential seating")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--runs", type=int, required=True)
    p.add_argument("--out", required=True)
    add_seed(p)
    p.set_defaults(func=_cmd_crp)

    return parser


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, argv)
    except (SpecDocumentError, DataFileError) as exc:
        print(f"mixkit: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DegeneratePointError, EmptyComponentError, IntervalTooSmallError) as exc:
        print(f"mixkit: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DomainError, InvalidMeasureError) as exc:
        print(f"mixkit: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
