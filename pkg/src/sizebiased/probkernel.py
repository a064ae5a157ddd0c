"""
Exact finite-dimensional probabilities of the size-biased order.

The basic object is the homogeneous rational function

    p_n(x_1, ..., x_n) = prod_k  x_k / (x_k + x_{k+1} + ... + x_n),

the probability of the chain ``i_1 < i_2 < ... < i_n`` when ``x_k`` is the
size of item ``i_k``.  Every routine here works with logarithms of the
factors and exponentiates once at the end.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from . import sizes as _sizes
from .errors import DomainError, InvalidCode


def _as_sizes(x, allow_empty=False) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.shape[-1] == 0 and not allow_empty:
        raise DomainError("need at least one size")
    if not np.all(np.isfinite(arr)) or not np.all(arr > 0):
        raise DomainError("sizes must be positive and finite")
    return arr


def _suffix_sums(x: np.ndarray) -> np.ndarray:
    # t[..., k] = x[..., k] + ... + x[..., n-1], one backward pass
    return np.flip(np.cumsum(np.flip(x, axis=-1), axis=-1), axis=-1)


def log_chain_prob(sizes) -> float | np.ndarray:
    """Log of ``p_n(sizes)``; vectorised over leading axes."""
    x = _as_sizes(sizes)
    out = np.sum(np.log(x) - np.log(_suffix_sums(x)), axis=-1)
    return float(out) if out.ndim == 0 else out


def chain_prob(sizes) -> float | np.ndarray:
    """Probability that items with the given sizes appear in exactly this order.

    Parameters
    ----------
    sizes : array_like, shape (..., n)
        Sizes of the chain ``i_1, ..., i_n`` read front to back.  Leading axes
        are broadcast, so a matrix of arrangements gives a vector of
        probabilities.

    Examples
    --------
    >>> chain_prob([2, 1, 1])
    0.25
    """
    out = np.exp(log_chain_prob(sizes))
    return float(out) if np.ndim(out) == 0 else out


def head_prob(prefix_sizes: Sequence[float], tail_total: float) -> float:
    """Probability that the prefix chain precedes every item of a block of total size ``tail_total``."""
    prefix = _as_sizes(prefix_sizes)
    if prefix.ndim != 1:
        raise DomainError("prefix must be one-dimensional")
    if not (math.isfinite(tail_total) and tail_total > 0):
        raise DomainError("tail_total must be positive")
    return chain_prob(np.append(prefix, tail_total))


def transposition_ratio(x: float, y: float, tail_total: float = 0.0) -> float:
    """Ratio of two chain probabilities differing by swapping adjacent ``x, y``.

    ``tail_total`` is the total size of the items after the swapped pair.
    """
    if not (x > 0 and y > 0):
        raise DomainError("x and y must be positive")
    if not tail_total >= 0:
        raise DomainError("tail_total must be nonnegative")
    return (x + tail_total) / (y + tail_total)


def insertion_rank_pmf(existing_sizes: Sequence[float], new_size: float) -> np.ndarray:
    """Distribution of the gap where a size-biased insertion lands.

    Parameters
    ----------
    existing_sizes : sequence of float
        Sizes of the current list, front to back (may be empty).
    new_size : float
        Size of the inserted item.

    Returns
    -------
    numpy.ndarray, shape (i,)
        Entry ``k-1`` is the probability that the new item ends up in
        position ``k`` (``k = 1`` is the front).
    """
    x = float(new_size)
    if not (math.isfinite(x) and x > 0):
        raise DomainError("new size must be positive and finite")
    ex = _as_sizes(existing_sizes, allow_empty=True) if len(existing_sizes) else np.empty(0)
    if ex.size == 0:
        return np.ones(1)
    t = np.append(_suffix_sums(ex), 0.0)  # size to the right of gap k
    log_stop = np.log(x) - np.log(t + x)
    log_pass = np.log(t[:-1]) - np.log(t[:-1] + x)
    log_pmf = log_stop + np.concatenate(([0.0], np.cumsum(log_pass)))
    pmf = np.exp(log_pmf)
    # close the total exactly; this costs relative (not absolute) accuracy
    # when the last entry is tiny, so the direct value wins on disagreement
    last = 1.0 - math.fsum(pmf[:-1])
    if last >= 0 and abs(last - pmf[-1]) <= 1e-9:
        pmf[-1] = last
    return pmf


def record_prob(desc: _sizes.SizeFunction, i: int) -> float:
    """Probability that item ``i`` precedes all of ``1, ..., i-1``: ``w(i) / S_i``."""
    w = _sizes.values(desc, i)
    return float(w[-1] / math.fsum(w))


def record_probs(desc: _sizes.SizeFunction, n: int) -> np.ndarray:
    """``record_prob(desc, i)`` for ``i = 1..n``."""
    w = _sizes.values(desc, n)
    return w / _sizes.partial_sums(desc, n)


def check_lehmer(code: Sequence[int]) -> list[int]:
    ranks = [int(r) for r in code]
    for i, r in enumerate(ranks, start=1):
        if not 1 <= r <= i:
            raise InvalidCode(f"relative rank R_{i}={r} outside 1..{i}")
    return ranks


def lehmer_log_likelihood(desc: _sizes.SizeFunction, code: Sequence[int]) -> float:
    """Log-probability of a Lehmer code prefix under the size-biased order.

    Replays the insertions, adding the log of the insertion pmf at the
    realised rank.  Equals ``log_chain_prob`` of the arrangement the code
    builds.
    """
    ranks = check_lehmer(code)
    if not ranks:
        return 0.0
    w = _sizes.values(desc, len(ranks))
    arranged: list[float] = []
    total = 0.0
    for i, r in enumerate(ranks):
        pmf = insertion_rank_pmf(arranged, w[i])
        total += math.log(pmf[r - 1])
        arranged.insert(r - 1, w[i])
    return total
