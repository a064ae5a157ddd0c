"""
Exact probabilities of a size-biased order
==========================================

Items with sizes x_1, ..., x_n are ranked by independent exponentials with
those rates.  The chance of a given ranking is a product of ratios.
"""

import itertools

import numpy as np

from sizebiased import probkernel, stats

# Four items with sizes 1, 2, 3, 4.  The big item tends to come first.
x = np.array([1.0, 2.0, 3.0, 4.0])
perms = np.array(list(itertools.permutations(range(4))))
probs = probkernel.chain_prob(x[perms])
print("sum over all 24 rankings:", probs.sum())

# The most likely ranking lists sizes in decreasing order, the least likely
# in increasing order.
print("most likely :", perms[np.argmax(probs)] + 1, probs.max())
print("least likely:", perms[np.argmin(probs)] + 1, probs.min())

# Swapping two neighbours changes the probability by a simple ratio that
# only involves the pair and the total size behind it.
a = probkernel.chain_prob([4.0, 1.0, 3.0, 2.0])
b = probkernel.chain_prob([4.0, 3.0, 1.0, 2.0])
print("swap ratio  :", a / b, "=", probkernel.transposition_ratio(1.0, 3.0, 2.0))

# Inserting a new item into an existing list: where does it land?
pmf = probkernel.insertion_rank_pmf([3.0, 1.0, 2.0], 4.0)
print("insertion pmf for a size-4 newcomer:", np.round(pmf, 4))

# A Lehmer code records where each item landed among those before it.
code = [1, 2, 1, 3]
print("code", code, "builds", stats.order_from_lehmer(code))
