"""
Finite-prefix samplers for the size-biased order on ``{1, ..., n}``.

Three independent mechanisms produce the same law:

* :func:`sample_exponential` sorts independent exponentials ``X_i`` with rates ``w(i)``;
* :func:`sample_by_picks` repeats size-biased picks, each done as a pointer
  walk over the source list;
* :func:`sample_by_insertion` inserts ``1, 2, ..., n`` in turn by a pointer
  walk over the gaps of the target list, recording relative ranks.

Arrangements are 1-D integer arrays of labels read front to back, so
``order[0]`` is the first item of the order.

Random numbers
--------------
All randomness comes from numpy's ``Philox`` counter-based generator.  An
integer seed ``s`` used for stream ``k`` keys the generator with
``s XOR splitmix64(k)``.  Monte Carlo drivers split replicates into blocks of
:data:`BLOCK` and give block ``b`` stream ``b``, so results do not depend on
how blocks are spread over workers.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Callable, Sequence

import numpy as np
from scipy import sparse

from . import sizes as _sizes
from .errors import DomainError, StateSpaceTooLarge
from .probkernel import insertion_rank_pmf

MASK64 = (1 << 64) - 1
BLOCK = 1024
MAX_TSETLIN_LABELS = 8


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def make_rng(seed, stream: int = 0) -> np.random.Generator:
    """Generator for ``(seed, stream)``; a Generator passed as ``seed`` is returned unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    key = (int(seed) & MASK64) ^ splitmix64(stream)
    return np.random.Generator(np.random.Philox(key=key))


def _open_uniform(rng: np.random.Generator, size) -> np.ndarray:
    # (k + 0.5) / 2**53 lies strictly inside (0, 1)
    return (rng.integers(0, 1 << 53, size=size, dtype=np.int64) + 0.5) / float(1 << 53)


def _scaled_sizes(desc, n: int) -> np.ndarray:
    # the law depends on sizes only up to a common factor
    logw = _sizes.log_values(desc, n)
    w = np.exp(logw - logw.max())
    if not np.all(w > 0):
        raise OverflowError(f"size ratios in the first {n} items of {desc!r} exceed the float range")
    return w


def sample_exponential(desc, n: int, seed=0) -> np.ndarray:
    """Sort labels ``1..n`` by independent exponentials with rates ``w(i)``.

    Keys are compared as ``log X_i = log(-log U_i) - log w(i)`` so that sizes
    far outside the float range are handled.  Exactly tied keys are redrawn.
    """
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    rng = make_rng(seed)
    logw = _sizes.log_values(desc, n)
    keys = np.log(-np.log(_open_uniform(rng, n))) - logw
    while True:
        order = np.argsort(keys, kind="stable")
        tied = np.flatnonzero(np.diff(keys[order]) == 0)
        if tied.size == 0:
            return order + 1
        idx = np.unique(np.concatenate((order[tied], order[tied + 1])))
        keys[idx] = np.log(-np.log(_open_uniform(rng, idx.size))) - logw[idx]


def sample_by_picks(desc, n: int, seed=0) -> np.ndarray:
    """Build the order from repeated size-biased picks.

    Each pick is a pointer walk from the front of the source list: at an
    item of size ``x`` with total ``t`` strictly to its right, the pointer
    moves on with probability ``t / (t + x)``; otherwise the item goes to the
    rear of the target and the walk restarts.
    """
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    rng = make_rng(seed)
    source_labels = list(range(1, n + 1))
    source_sizes = _scaled_sizes(desc, n).tolist()
    target = []
    while source_labels:
        right = list(itertools.accumulate(reversed(source_sizes)))[::-1]
        k = 0
        last = len(source_labels) - 1
        while k < last:
            x = source_sizes[k]
            t = right[k + 1]
            if rng.random() < x / (t + x):
                break
            k += 1
        target.append(source_labels.pop(k))
        source_sizes.pop(k)
    return np.array(target, dtype=np.int64)


def sample_by_insertion(desc, n: int, seed=0) -> tuple[np.ndarray, np.ndarray]:
    """Insert items ``1..n`` one at a time by size-biased insertion.

    The pointer starts in the leftmost gap of the target; with ``t`` the
    total size to the right of the pointer the item is placed there with
    probability ``x / (t + x)``, else the pointer moves one gap right.

    Returns
    -------
    order : numpy.ndarray
        Final arrangement of ``1..n``.
    code : numpy.ndarray
        Relative ranks ``R_1..R_n``; ``R_i`` is the position item ``i`` took
        when it was inserted.
    """
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    rng = make_rng(seed)
    w = _scaled_sizes(desc, n).tolist()
    labels: list[int] = []
    held: list[float] = []
    code = np.empty(n, dtype=np.int64)
    for i in range(n):
        x = w[i]
        # suffix totals of the current target, maintained per insertion
        right = list(itertools.accumulate(reversed(held)))[::-1]
        k = 0
        while k < len(held):
            t = right[k]
            if rng.random() < x / (t + x):
                break
            k += 1
        labels.insert(k, i + 1)
        held.insert(k, x)
        code[i] = k + 1
    return np.array(labels, dtype=np.int64), code


@dataclass(frozen=True)
class PoissonScatterSample:
    """Lowest atoms of a unit-rate Poisson process in the strips ``[S_{i-1}, S_i) x [0, inf)``."""

    t: np.ndarray
    x: np.ndarray
    boundaries: np.ndarray  # S_0 = 0, S_1, ..., S_n

    def order(self) -> np.ndarray:
        """Labels sorted by height of their lowest atom."""
        return np.argsort(self.x, kind="stable") + 1

    def lowest(self) -> int:
        return int(np.argmin(self.x)) + 1


def sample_poisson_scatter(desc, n: int, seed=0) -> PoissonScatterSample:
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    rng = make_rng(seed)
    w = _sizes.values(desc, n)
    bounds = np.concatenate(([0.0], _sizes.partial_sums(desc, n)))
    x = -np.log(_open_uniform(rng, n)) / w
    t = bounds[:-1] + rng.random(n) * (bounds[1:] - bounds[:-1])
    over = t >= bounds[1:]
    if over.any():
        t[over] = np.nextafter(bounds[1:][over], -np.inf)
    return PoissonScatterSample(t, x, bounds)


def _label_sizes(labels: Sequence[int], desc) -> dict[int, float]:
    labels = [int(v) for v in labels]
    if len(set(labels)) != len(labels) or min(labels) < 1:
        raise DomainError("labels must be distinct positive integers")
    w = _sizes.values(desc, max(labels))
    return {v: float(w[v - 1]) for v in labels}


def tsetlin_step(state: Sequence[int], desc, seed=0) -> np.ndarray:
    """One move of the size-biased top-to-random shuffle.

    The front item is removed and reinserted into the rest of the list by a
    size-biased insertion pointer walk.  Pass a Generator as ``seed`` to run
    a chain.
    """
    state = [int(v) for v in state]
    if not state:
        raise DomainError("state must be nonempty")
    rng = make_rng(seed)
    size_of = _label_sizes(state, desc)
    front, rest = state[0], state[1:]
    x = size_of[front]
    held = [size_of[v] for v in rest]
    right = list(itertools.accumulate(reversed(held)))[::-1]
    k = 0
    while k < len(rest):
        if rng.random() < x / (right[k] + x):
            break
        k += 1
    rest.insert(k, front)
    return np.array(rest, dtype=np.int64)


def arrangements(labels: Sequence[int]) -> list[tuple[int, ...]]:
    """All arrangements of ``labels`` in lexicographic order."""
    return list(itertools.permutations(sorted(int(v) for v in labels)))


def _check_state_space(labels):
    if len(labels) > MAX_TSETLIN_LABELS:
        raise StateSpaceTooLarge(
            f"{len(labels)} labels give {math.factorial(len(labels))} states; limit is {MAX_TSETLIN_LABELS} labels"
        )


def transition_matrix_tsetlin(labels: Sequence[int], desc):
    """Exact transition matrix of :func:`tsetlin_step` on all arrangements.

    Returns
    -------
    states : list of tuple
        Arrangements indexing rows and columns.
    matrix : scipy.sparse.csr_array
        Row-stochastic; each row has at most ``len(labels)`` nonzeros.
    """
    _check_state_space(labels)
    states = arrangements(labels)
    index = {s: k for k, s in enumerate(states)}
    size_of = _label_sizes(labels, desc)
    rows, cols, vals = [], [], []
    for r, s in enumerate(states):
        front, rest = s[0], s[1:]
        pmf = insertion_rank_pmf([size_of[v] for v in rest], size_of[front])
        for k, pk in enumerate(pmf):
            rows.append(r)
            cols.append(index[rest[:k] + (front,) + rest[k:]])
            vals.append(pk)
    m = len(states)
    return states, sparse.csr_array((vals, (rows, cols)), shape=(m, m))


def transition_matrix_move_to_front(labels: Sequence[int], desc):
    """Tsetlin library: pick an item with probability proportional to size, move it to the front."""
    _check_state_space(labels)
    states = arrangements(labels)
    index = {s: k for k, s in enumerate(states)}
    size_of = _label_sizes(labels, desc)
    total = math.fsum(size_of.values())
    rows, cols, vals = [], [], []
    for r, s in enumerate(states):
        for k, v in enumerate(s):
            rows.append(r)
            cols.append(index[(v,) + s[:k] + s[k + 1:]])
            vals.append(size_of[v] / total)
    m = len(states)
    return states, sparse.csr_array((vals, (rows, cols)), shape=(m, m))


def stationary_distribution(matrix) -> np.ndarray:
    """Stationary vector of an irreducible row-stochastic matrix, by a direct linear solve."""
    P = matrix.toarray() if sparse.issparse(matrix) else np.asarray(matrix, dtype=float)
    m = P.shape[0]
    A = P.T - np.eye(m)
    A[-1, :] = 1.0
    b = np.zeros(m)
    b[-1] = 1.0
    return np.linalg.solve(A, b)


def _insertion_order(desc, n, seed=0):
    return sample_by_insertion(desc, n, seed)[0]


SAMPLERS: dict[str, Callable] = {
    "exponential": sample_exponential,
    "picks": sample_by_picks,
    "insertion": _insertion_order,
}


def default_workers() -> int:
    env = os.environ.get("SBO_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _run_block(fn, seed, start, stop):
    rng = make_rng(seed, start // BLOCK)
    return [fn(rng) for _ in range(start, stop)]


def replicate(fn: Callable[[np.random.Generator], object], replicates: int, seed=0, workers: int | None = None) -> list:
    """Call ``fn(rng)`` once per replicate with block-derived generators.

    ``fn`` must be picklable when ``workers > 1`` (a module-level function or
    a ``functools.partial`` of one).  Output order and content are
    independent of ``workers``.
    """
    replicates = int(replicates)
    if replicates < 1:
        raise DomainError("replicates must be >= 1")
    blocks = [(s, min(s + BLOCK, replicates)) for s in range(0, replicates, BLOCK)]
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1 or len(blocks) == 1:
        chunks = [_run_block(fn, seed, a, b) for a, b in blocks]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(blocks))) as pool:
            chunks = list(pool.map(_run_block, *zip(*[(fn, seed, a, b) for a, b in blocks])))
    return [item for chunk in chunks for item in chunk]


def _call_sampler(method, desc, n, rng):
    return SAMPLERS[method](desc, n, rng)


def _exponential_block(desc, n, seed, start, stop):
    # one matrix draw per block; rows with exact ties fall back to the scalar sampler
    rng = make_rng(seed, start // BLOCK)
    logw = _sizes.log_values(desc, n)
    keys = np.log(-np.log(_open_uniform(rng, (stop - start, n)))) - logw
    orders = np.argsort(keys, axis=1, kind="stable")
    sorted_keys = np.take_along_axis(keys, orders, axis=1)
    orders += 1
    for r in np.flatnonzero((np.diff(sorted_keys, axis=1) == 0).any(axis=1)):
        orders[r] = sample_exponential(desc, n, rng)
    return orders


def sample_many(method: str, desc, n: int, replicates: int, seed=0, workers: int | None = None) -> np.ndarray:
    """Stack ``replicates`` sampled arrangements into an array of shape ``(replicates, n)``.

    ``exponential`` draws a whole block of replicates as one matrix; the
    pointer-walk samplers run replicate by replicate.
    """
    if method not in SAMPLERS:
        raise DomainError(f"unknown sampler {method!r}; choose from {sorted(SAMPLERS)}")
    n, replicates = int(n), int(replicates)
    if n < 1 or replicates < 1:
        raise DomainError("n and replicates must be >= 1")
    if method == "exponential":
        blocks = [(a, min(a + BLOCK, replicates)) for a in range(0, replicates, BLOCK)]
        return np.vstack([_exponential_block(desc, n, seed, a, b) for a, b in blocks])
    out = replicate(partial(_call_sampler, method, desc, n), replicates, seed, workers)
    return np.vstack(out)
