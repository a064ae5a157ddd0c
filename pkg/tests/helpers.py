"""Independent oracles and statistical helpers shared by the tests."""

import itertools

import numpy as np
from scipy import integrate, stats as sps


def chain_prob_quadrature(x):
    """P[X_1 < ... < X_n] for independent exponentials with rates x, by nested quadrature.

    Cost grows geometrically with n; keep n <= 3.

    f_k(s) = P[s < X_k < ... < X_n] = int_s^inf x_k e^{-x_k u} f_{k+1}(u) du.
    """
    x = list(x)

    def f(k, s):
        if k == len(x):
            return 1.0
        val, _ = integrate.quad(lambda u: x[k] * np.exp(-x[k] * u) * f(k + 1, u), s, np.inf, epsabs=1e-12, epsrel=1e-10)
        return val

    return f(0, 0.0)


def arrangement_counts(orders, labels):
    perms = list(itertools.permutations(labels))
    index = {p: k for k, p in enumerate(perms)}
    counts = np.zeros(len(perms), dtype=np.int64)
    for row in np.asarray(orders):
        counts[index[tuple(int(v) for v in row)]] += 1
    return perms, counts


def chisquare_pvalue(counts, probs):
    counts = np.asarray(counts, dtype=float)
    expected = np.asarray(probs, dtype=float) * counts.sum()
    return float(sps.chisquare(counts, expected).pvalue)


def within_sigma(observed_freq, p, N, k=3.0):
    sigma = np.sqrt(p * (1 - p) / N)
    return np.abs(observed_freq - p) <= k * sigma + 1e-15
