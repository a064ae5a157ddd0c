"""
Three samplers, one law
=======================

Sorting exponentials, repeated size-biased picks and size-biased insertion
all produce the same random arrangement.  Records of Karamata-Stirling
sizes are independent with a simple probability.
"""

import numpy as np

from sizebiased import probkernel, samplers, sizes, stats

desc = sizes.explicit_table([1.0, 2.0, 3.0, 4.0])
target = (4, 3, 2, 1)
exact = probkernel.chain_prob([4.0, 3.0, 2.0, 1.0])
for method in ("exponential", "picks", "insertion"):
    orders = samplers.sample_many(method, desc, 4, 20_000, seed=1)
    freq = np.mean(np.all(orders == target, axis=1))
    print(f"{method:<12} P[4,3,2,1] ~ {freq:.4f}   exact {exact:.4f}")

# Karamata-Stirling sizes with theta=2 are w(i) = i.  Item i beats all
# earlier items with probability theta / (theta + i - 1).
ks = sizes.karamata_stirling(2.0)
orders = samplers.sample_many("exponential", ks, 15, 50_000, seed=2)
rec = stats.record_indicators(orders)
print("record frequency :", np.round(rec.mean(axis=0)[:8], 3))
print("theta/(theta+i-1):", np.round(probkernel.record_probs(ks, 8), 3))

# Records at different indices are uncorrelated.
rho = np.corrcoef(rec[:, 1:].astype(float), rowvar=False)
print("largest |correlation| between record indicators:", np.abs(rho - np.eye(len(rho))).max().round(4))

# The Tsetlin library (move-to-front) settles into the same law.
states, P = samplers.transition_matrix_move_to_front([1, 2, 3, 4], desc)
pi = samplers.stationary_distribution(P)
print("move-to-front stationary P[4,3,2,1]:", pi[states.index(target)].round(6))
