#!/usr/bin/env python3
"""Brute-force oracle for the tiny MI hand case frozen in the test suite.

Enumerates every pairwise distance, radius and marginal count literally
and sums the digamma terms, with no code shared with the library. The
number printed here is committed in tests/test_mi.py.
"""

import math

from scipy.special import digamma  # independent psi implementation

A = [0.0, 1.0, 2.0, 10.0]
B = [0.0, 1.0, 2.0, 10.0]
K = 1


def linf(u, v):
    return abs(u - v)


def main():
    m = len(A)
    rhos, counts_a, counts_b = [], [], []
    for i in range(m):
        joint = sorted(
            max(linf(A[i], A[j]), linf(B[i], B[j])) for j in range(m) if j != i
        )
        rho = joint[K - 1]
        rhos.append(rho)
        counts_a.append(sum(1 for j in range(m) if j != i and linf(A[i], A[j]) < rho))
        counts_b.append(sum(1 for j in range(m) if j != i and linf(B[i], B[j]) < rho))
    total = math.fsum(
        digamma(na + 1) + digamma(nb + 1) for na, nb in zip(counts_a, counts_b)
    )
    value = digamma(K) + digamma(m) - total / m
    print("rho      :", rhos)
    print("counts A :", counts_a)
    print("counts B :", counts_b)
    print("MI (nats): %.15f" % value)


if __name__ == "__main__":
    main()
