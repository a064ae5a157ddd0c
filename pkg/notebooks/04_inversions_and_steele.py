"""
Inversions and normalised size profiles
=======================================

For geometric sizes q^i with q < 1 the number of out-of-order pairs grows
linearly, with slope c_q.  For regularly varying sizes the normalised
partial sums approach t^theta.
"""

import numpy as np

from sizebiased import samplers, sizes, stats

q = 0.5
desc = sizes.geometric(q)
cq = stats.c_q(q)
print(f"c_q({q}) = {cq.value:.10f}  (tail bound {cq.bound:.1e}, {cq.terms} terms)")

for n in (1_000, 10_000, 20_000):
    order = samplers.sample_exponential(desc, n, seed=n)
    inv = stats.count_inversions(order)
    print(f"n={n:>6}  D_n/n = {inv.normalized:.4f}   E[D_n]/n = {stats.expected_inversions(desc, n) / n:.4f}")

# Steele's profile for w(i) = i tends to t^2.
t = stats.steele_grid(11)
print("t      :", t)
print("F_n(t) :", np.round(stats.steele_Fn(sizes.power(1.0), 10**5, t), 4))
print("sup |F_n - t^2| =", stats.steele_sup_distance(sizes.power(1.0), 10**5, 2.0))
