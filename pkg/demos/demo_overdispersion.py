#!/usr/bin/env python3
"""Mixing a count distribution over its parameter spreads it out.

Compares the beta-binomial with the plain binomial it mixes, and the
negative binomial with the Poisson it mixes, both at matched means, then
checks a pmf against brute-force two-stage simulation.
"""

import math

import numpy as np
from scipy import stats

import mixkit as mk


def main():
    bb = mk.BetaBinomialParams(trials=10, alpha=6.0, beta=14.0)
    p_match = 6.0 / 20.0
    print("beta-binomial(10, 6, 14) vs binomial(10, 0.3):")
    print("  y   mixed     fixed-p")
    for y in range(11):
        print(f"  {y:2d}  {mk.betabinom_pmf(bb, y):.5f}   {stats.binom.pmf(y, 10, p_match):.5f}")
    print(f"  variance ratio vs binomial: {mk.over_dispersion_ratio(bb):.4f}")

    nb = mk.NegativeBinomialParams(alpha=3.0, beta=2.0)
    lam_match = 1.5
    print("\nnegative-binomial(3, 2) vs Poisson(1.5):")
    print("  y   mixed     fixed-rate")
    for y in range(9):
        print(f"  {y:2d}  {mk.negbinom_pmf(nb, y):.5f}   {stats.poisson.pmf(y, lam_match):.5f}")
    print(f"  mean {mk.negbinom_mean(nb):.4f}, variance {mk.negbinom_variance(nb):.4f}, "
          f"ratio vs Poisson: {mk.over_dispersion_ratio(nb):.4f}")

    rng = np.random.default_rng(3)
    draws = 200_000
    y = rng.poisson(rng.gamma(3.0, 0.5, size=draws))
    print("\ntwo-stage simulation check (gamma rate, then Poisson):")
    for k in range(6):
        mc = float(np.mean(y == k))
        exact = mk.negbinom_pmf(nb, k)
        print(f"  P(y = {k}): simulated {mc:.5f}, exact {exact:.5f}")

    dm = mk.DirichletMultinomialParams(trials=10, concentration=(6.0, 14.0))
    agree = all(mk.dirmult_pmf(dm, (k, 10 - k)) == mk.betabinom_pmf(bb, k) for k in range(11))
    print("\ntwo-category Dirichlet-multinomial equals the beta-binomial:", agree)


if __name__ == "__main__":
    main()
