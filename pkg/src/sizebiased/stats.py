"""
Statistics of sampled arrangements: records, inversions, Lehmer codes and
normalised partial sums of sizes.

An arrangement ``order`` of ``1..n`` lists labels front to back.  Label
``i`` is a record when it comes before every smaller label, and a pair
``i < j`` is an inversion when ``j`` comes before ``i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import sizes as _sizes
from .errors import DomainError, InvalidCode


def positions(order: Sequence[int]) -> np.ndarray:
    """``pos[i-1]`` is the 1-based position of label ``i``.

    Raises
    ------
    DomainError
        If ``order`` is not an arrangement of ``1..n``.
    """
    arr = np.asarray(order, dtype=np.int64)
    n = arr.size
    if n == 0 or arr.ndim != 1:
        raise DomainError("order must be a nonempty 1-D arrangement")
    if arr.min() != 1 or arr.max() != n or np.unique(arr).size != n:
        raise DomainError("labels are not exactly 1..n")
    pos = np.empty(n, dtype=np.int64)
    pos[arr - 1] = np.arange(1, n + 1)
    return pos


def lehmer_code(order: Sequence[int]) -> np.ndarray:
    """Relative ranks: ``R_i`` is the position of ``i`` among ``1..i``."""
    pos = positions(order)
    n = pos.size
    code = np.empty(n, dtype=np.int64)
    # Fenwick tree over positions of the labels seen so far
    tree = [0] * (n + 1)
    for i, p in enumerate(pos.tolist()):
        before, k = 0, p
        while k > 0:
            before += tree[k]
            k -= k & -k
        code[i] = before + 1
        k = p
        while k <= n:
            tree[k] += 1
            k += k & -k
    return code


def order_from_lehmer(code: Sequence[int]) -> np.ndarray:
    """Inverse of :func:`lehmer_code`.

    >>> order_from_lehmer([1, 2, 1, 3]).tolist()
    [3, 1, 4, 2]
    """
    out: list[int] = []
    for i, r in enumerate(code, start=1):
        if not 1 <= r <= i:
            raise InvalidCode(f"relative rank R_{i}={r} outside 1..{i}")
        out.insert(int(r) - 1, i)
    return np.array(out, dtype=np.int64)


def count_records(order: Sequence[int]) -> list[int]:
    """Labels ``i`` that come before all of ``1, ..., i-1``.

    >>> count_records([1, 2, 3])
    [1]
    >>> count_records([3, 2, 1])
    [1, 2, 3]
    """
    pos = positions(order)
    prev_min = np.minimum.accumulate(np.concatenate(([pos.size + 1], pos[:-1])))
    return (np.flatnonzero(pos < prev_min) + 1).tolist()


def record_indicators(orders: np.ndarray) -> np.ndarray:
    """Boolean matrix of record indicators for a stack of arrangements of shape ``(N, n)``."""
    orders = np.asarray(orders, dtype=np.int64)
    if orders.ndim != 2:
        raise DomainError("expected an array of shape (N, n)")
    N, n = orders.shape
    pos = np.empty_like(orders)
    rows = np.arange(N)[:, None]
    pos[rows, orders - 1] = np.arange(1, n + 1)
    prev_min = np.minimum.accumulate(np.concatenate((np.full((N, 1), n + 1), pos[:, :-1]), axis=1), axis=1)
    return pos < prev_min


def _merge_count(a: list[int]) -> tuple[list[int], int]:
    if len(a) <= 1:
        return a, 0
    mid = len(a) // 2
    left, x = _merge_count(a[:mid])
    right, y = _merge_count(a[mid:])
    merged = []
    count = x + y
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            merged.append(left[i])
            i += 1
        else:
            merged.append(right[j])
            count += len(left) - i
            j += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    return merged, count


@dataclass(frozen=True)
class InversionSummary:
    n: int
    d_n: int

    @property
    def normalized(self) -> float:
        return self.d_n / self.n


def count_inversions(order: Sequence[int]) -> InversionSummary:
    """Number of pairs ``i < j`` with ``j`` placed before ``i`` (Kendall distance to ``1..n``).

    Merge sort on the position sequence, ``O(n log n)``.
    """
    pos = positions(order)
    return InversionSummary(int(pos.size), _merge_count(pos.tolist())[1])


def count_inversions_bruteforce(order: Sequence[int]) -> int:
    pos = positions(order)
    return int(sum(int(np.sum(pos[i + 1:] < pos[i])) for i in range(pos.size)))


@dataclass(frozen=True)
class SeriesValue:
    value: float
    bound: float
    terms: int


def c_q(q: float, tol: float = 1e-12) -> SeriesValue:
    """``c_q = sum_{k>=1} 1 / (1 + q^-k)``, the inversion rate of geometric sizes ``q^i``.

    Terms are summed until the tail bound ``q^(K+1) / (1 - q)`` drops below
    ``tol``; the bound is returned with the value.
    """
    if not 0 < q < 1:
        raise DomainError(f"q must lie in (0, 1), got {q}")
    if not tol > 0:
        raise DomainError("tol must be positive")
    K = 1
    while q ** (K + 1) / (1 - q) >= tol:
        K += 1
    k = np.arange(1, K + 1, dtype=float)
    # 1 / (1 + q^-k) = q^k / (q^k + 1)
    qk = q ** k
    return SeriesValue(math.fsum(qk / (1 + qk)), q ** (K + 1) / (1 - q), K)


def expected_inversions(desc: _sizes.SizeFunction, n: int) -> float:
    """Exact ``E[D_n] = sum_{k=1}^{n-1} (n - k) / (1 + q^-k)`` for geometric sizes with ``q < 1``."""
    if desc.family != _sizes.GEOMETRIC or not desc.params["q"] < 1:
        raise DomainError("expected_inversions needs a geometric size function with q < 1")
    n = int(n)
    if n < 2:
        raise DomainError("n must be >= 2")
    q = desc.params["q"]
    k = np.arange(1, n, dtype=float)
    with np.errstate(under="ignore"):
        qk = q ** k
    return math.fsum((n - k) * qk / (1 + qk))


def steele_Fn(desc: _sizes.SizeFunction, n: int, t) -> float | np.ndarray:
    """``F_n(t) = sum_{i <= n t} w(i) / (w(1) + ... + w(n))`` for ``t`` in ``[0, 1]``."""
    t_arr = np.asarray(t, dtype=float)
    if np.any((t_arr < 0) | (t_arr > 1)):
        raise DomainError("t must lie in [0, 1]")
    n = int(n)
    cum = np.concatenate(([0.0], _sizes.partial_sums(desc, n)))
    # floor(n t), tolerant of t * n landing a hair under an integer
    k = np.floor(t_arr * n + 1e-9).astype(np.int64).clip(0, n)
    out = cum[k] / cum[-1]
    return float(out) if out.ndim == 0 else out


def steele_grid(points: int = 101) -> np.ndarray:
    return np.linspace(0.0, 1.0, points)


def steele_sup_distance(desc: _sizes.SizeFunction, n: int, theta: float, points: int = 101) -> float:
    """``max_t |F_n(t) - t**theta|`` over an equispaced grid."""
    t = steele_grid(points)
    return float(np.max(np.abs(steele_Fn(desc, n, t) - t ** theta)))
