#!/usr/bin/env python3
"""Random partitions from sequential seating.

Prints the exact partition law for a small table, compares it with sampled
seating frequencies, and shows how the expected number of occupied tables
grows with the crowd and the concentration.
"""

import math

import numpy as np

import mixkit as mk


def main():
    alpha, n = 1.0, 4
    print(f"exact partition law, n = {n}, alpha = {alpha}:")
    for part in mk.enumerate_partitions(n):
        p = math.exp(mk.partition_log_prob(part, alpha))
        print(f"  {str(part.blocks):28s} {p:.5f}")

    runs = 100_000
    labels = mk.sample_crp_labels(alpha, n, runs, seed=11)
    rows, counts = np.unique(labels, axis=0, return_counts=True)
    print(f"\nsampled frequencies over {runs} runs:")
    for row, count in zip(rows, counts):
        part = mk.Partition.from_labels(row + 1)
        exact = math.exp(mk.partition_log_prob(part, alpha))
        print(f"  {str(part.blocks):28s} {count / runs:.5f}  (exact {exact:.5f})")

    print("\nexpected occupied tables:")
    print("  n      alpha=0.5  alpha=1    alpha=5")
    for n_people in (4, 16, 64, 256):
        row = [mk.expected_cluster_count(a, n_people) for a in (0.5, 1.0, 5.0)]
        print(f"  {n_people:4d}   {row[0]:8.3f}  {row[1]:8.3f}  {row[2]:8.3f}")
    print("  (logarithmic growth: alpha * log(1 + n / alpha) is a good guide)")

    value = mk.expected_cluster_count(1.0, 4)
    print(f"\nexact rational check: expected tables for n=4, alpha=1 is {value} = 25/12")


if __name__ == "__main__":
    main()
