"""
Order types of a size-biased ordering of all positive integers.

The type is decided by the point cloud ``{X_i}``: how many exponentials fall
in an interval ``(x, y]`` is finite or infinite according to whether the
mean measure ``sum_i (exp(-w(i) x) - exp(-w(i) y))`` is finite.  For
``w -> inf`` that reduces to the Dirichlet series ``sum_i exp(-x w(i))`` and
its convergence abscissa ``beta = limsup log i / w(i)``.

:func:`classify` maps complete :class:`~sizebiased.sizes.SizeMetadata` to one
of eight types through a fixed decision table (see its docstring).
Metadata for explicit tables can only be estimated; such results carry
``heuristic=True``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from . import sizes as _sizes
from .errors import DomainError, FamilyNotDivergent, IncompleteMetadata
from .sizes import INFINITY, INTERIOR, ZERO, SizeFunction, SizeMetadata, Tristate


class OrderType(str, Enum):
    ZPos = "ZPos"  # positive integers: a first element, every element has finitely many predecessors
    ZNeg = "ZNeg"  # negative integers
    Z = "Z"
    Q = "Q"  # dense, no endpoints
    QThenFinite = "QThenFinite"  # Q followed by a finite order of random size
    QThenZNeg = "QThenZNeg"
    QThenZPos = "QThenZPos"
    QThenZ = "QThenZ"

    @property
    def pure(self) -> bool:
        return self is not OrderType.QThenFinite


class Case(str, Enum):
    SUMMABLE = "summable"
    INTERIOR_ACCUMULATION = "interior_accumulation"
    VANISHING_NONSUMMABLE = "vanishing_nonsummable"
    DIVERGENT_BETA_ZERO = "divergent_beta_zero"
    DIVERGENT_BETA_INFINITE = "divergent_beta_infinite"
    DIVERGENT_BETA_FINITE_CONVERGENT = "divergent_beta_finite_convergent"
    DIVERGENT_BETA_FINITE_DIVERGENT = "divergent_beta_finite_divergent"
    COMBINED_BETA_FINITE_CONVERGENT = "combined_beta_finite_convergent"
    COMBINED_BETA_FINITE_DIVERGENT = "combined_beta_finite_divergent"
    COMBINED_BETA_ZERO = "combined_beta_zero"
    COMBINED_BETA_INFINITE = "combined_beta_infinite"
    COMBINED_SMALL_NONSUMMABLE = "combined_small_nonsummable"


TYPE_OF_CASE = {
    Case.SUMMABLE: OrderType.ZPos,
    Case.INTERIOR_ACCUMULATION: OrderType.Q,
    Case.VANISHING_NONSUMMABLE: OrderType.Q,
    Case.DIVERGENT_BETA_ZERO: OrderType.ZNeg,
    Case.DIVERGENT_BETA_INFINITE: OrderType.Q,
    Case.DIVERGENT_BETA_FINITE_CONVERGENT: OrderType.QThenFinite,
    Case.DIVERGENT_BETA_FINITE_DIVERGENT: OrderType.QThenZNeg,
    Case.COMBINED_BETA_FINITE_CONVERGENT: OrderType.QThenZPos,
    Case.COMBINED_BETA_FINITE_DIVERGENT: OrderType.QThenZ,
    Case.COMBINED_BETA_ZERO: OrderType.Z,
    Case.COMBINED_BETA_INFINITE: OrderType.Q,
    # not among the enumerated combined cases: a nonsummable vanishing part
    # makes the mean measure of every interval infinite, so the cloud is dense
    Case.COMBINED_SMALL_NONSUMMABLE: OrderType.Q,
}

EXTENSION_CASES = frozenset({Case.COMBINED_SMALL_NONSUMMABLE})


@dataclass(frozen=True)
class ClassificationEvidence:
    fired_case: Case
    beta_value: float
    dirichlet_converges_at_beta: Tristate
    small_part_summable: Tristate
    accumulation_points: frozenset[str]
    note: str = ""

    @property
    def extension(self) -> bool:
        return self.fired_case in EXTENSION_CASES

    def to_dict(self) -> dict[str, Any]:
        return {
            "fired_case": self.fired_case.value,
            "beta_value": _beta_json(self.beta_value),
            "dirichlet_converges_at_beta": self.dirichlet_converges_at_beta.value,
            "small_part_summable": self.small_part_summable.value,
            "accumulation_points": sorted(self.accumulation_points),
            "extension": self.extension,
            "note": self.note,
        }


def _beta_json(beta: float):
    return "inf" if math.isinf(beta) else float(beta)


def _require_complete(meta: SizeMetadata):
    if not meta.complete:
        missing = [
            k
            for k in ("small_part_summable", "total_summable", "beta", "converges_at_beta")
            if getattr(meta, k) is None
        ]
        raise IncompleteMetadata(f"metadata fields unknown: {', '.join(missing)}")
    if not meta.accumulation_points:
        raise IncompleteMetadata("an infinite sequence of sizes has at least one accumulation point")


def _fire(meta: SizeMetadata) -> Case:
    acc = meta.accumulation_points
    beta = meta.beta
    if meta.total_summable is Tristate.YES:
        return Case.SUMMABLE
    if INTERIOR in acc:
        return Case.INTERIOR_ACCUMULATION
    if acc == {ZERO}:
        return Case.VANISHING_NONSUMMABLE
    if acc == {INFINITY}:
        if beta == 0:
            return Case.DIVERGENT_BETA_ZERO
        if math.isinf(beta):
            return Case.DIVERGENT_BETA_INFINITE
        if meta.converges_at_beta is Tristate.YES:
            return Case.DIVERGENT_BETA_FINITE_CONVERGENT
        if meta.converges_at_beta is Tristate.NO:
            return Case.DIVERGENT_BETA_FINITE_DIVERGENT
        raise IncompleteMetadata("0 < beta < inf requires convergence at beta to be yes or no")
    # acc == {zero, infinity}
    if meta.small_part_summable is Tristate.NO:
        return Case.COMBINED_SMALL_NONSUMMABLE
    if beta == 0:
        return Case.COMBINED_BETA_ZERO
    if math.isinf(beta):
        return Case.COMBINED_BETA_INFINITE
    if meta.converges_at_beta is Tristate.YES:
        return Case.COMBINED_BETA_FINITE_CONVERGENT
    if meta.converges_at_beta is Tristate.NO:
        return Case.COMBINED_BETA_FINITE_DIVERGENT
    raise IncompleteMetadata("0 < beta < inf requires convergence at beta to be yes or no")


def classify(meta: SizeMetadata) -> tuple[OrderType, ClassificationEvidence]:
    """Order type from limit metadata.

    Decision table, first match wins:

    1. summable sizes -> ``ZPos``;
    2. an accumulation point inside ``(0, inf)`` -> ``Q``;
    3. only ``0`` accumulates (sum divergent) -> ``Q``;
    4. only ``inf`` accumulates: ``beta = 0`` -> ``ZNeg``, ``beta = inf`` -> ``Q``,
       finite positive ``beta`` -> ``QThenFinite`` if the Dirichlet series
       converges at ``beta``, else ``QThenZNeg``;
    5. both ``0`` and ``inf`` accumulate, small part summable: ``beta = 0`` -> ``Z``,
       ``beta = inf`` -> ``Q``, finite positive ``beta`` -> ``QThenZPos`` if
       convergent at ``beta``, else ``QThenZ``;
    6. both accumulate, small part not summable -> ``Q`` (flagged as an extension).

    Here ``beta`` is the abscissa over the sizes tending to infinity.

    Raises
    ------
    IncompleteMetadata
        If any field needed by the table is unknown.
    """
    _require_complete(meta)
    case = _fire(meta)
    evidence = ClassificationEvidence(
        fired_case=case,
        beta_value=float(meta.beta),
        dirichlet_converges_at_beta=meta.converges_at_beta,
        small_part_summable=meta.small_part_summable,
        accumulation_points=meta.accumulation_points,
        note=meta.note,
    )
    return TYPE_OF_CASE[case], evidence


def classify_descriptor(desc: SizeFunction, **estimate_kw):
    """Classify a descriptor, estimating metadata numerically for explicit tables.

    Returns ``(type, evidence, heuristic)``.
    """
    if desc.family == _sizes.EXPLICIT_TABLE:
        meta = estimate_metadata(desc, **estimate_kw)
        return (*classify(meta), True)
    return (*classify(_sizes.analytic_metadata(desc)), False)


def classification_report(desc: SizeFunction, **estimate_kw) -> dict[str, Any]:
    """JSON-ready classification report for a descriptor."""
    kind, ev, heuristic = classify_descriptor(desc, **estimate_kw)
    return {
        "schema_version": 1,
        "type": kind.value,
        "case": ev.fired_case.value,
        "beta": _beta_json(ev.beta_value),
        "evidence": ev.to_dict(),
        "heuristic": heuristic,
        "descriptor": desc.to_dict(),
    }


def abscissa_analytic(desc: SizeFunction) -> float:
    """Closed-form ``beta = limsup log i / w(i)`` for families with ``w -> inf``.

    >>> abscissa_analytic(_sizes.log_power(1.0))
    1.0
    """
    if desc.family == _sizes.EXPLICIT_TABLE:
        raise FamilyNotDivergent("explicit tables are finite; use abscissa_numeric")
    meta = _sizes.analytic_metadata(desc)
    if INFINITY not in meta.accumulation_points:
        raise FamilyNotDivergent(f"{desc!r} does not tend to infinity")
    return float(meta.beta)


@dataclass(frozen=True)
class AbscissaEstimate:
    value: float
    confident: bool
    diverging: bool
    checkpoints: tuple[tuple[int, float], ...] = field(default=())


def _log_ratio(desc: SizeFunction, lo: int, hi: int) -> np.ndarray:
    # log i / w(i) for i in [lo, hi], computed without overflowing w
    logw = _sizes.log_values(desc, hi)[lo - 1:]
    i = np.arange(lo, hi + 1, dtype=float)
    with np.errstate(under="ignore"):
        return np.exp(np.log(np.log(i)) - logw)


def abscissa_numeric(desc: SizeFunction, i_max: int = 10**6, window: int = 1000) -> AbscissaEstimate:
    """Finite-range proxy for ``limsup log i / w(i)``.

    The estimate is the maximum of ``log i / w(i)`` over
    ``[i_max - window, i_max]``.  The same statistic taken at ``i_max / 2``
    and ``i_max / 4`` (dyadic checkpoints) decides ``confident``: the
    two increments must stay within 5% of ``max(estimate, 1)``, and the
    increments must not show sustained growth (the second at least 90% of
    the first, both positive), which is flagged as ``diverging``.
    """
    i_max, window = int(i_max), int(window)
    if not (window >= 100 and i_max >= window):
        raise DomainError("need i_max >= window >= 100")
    ratio = _log_ratio(desc, 2, i_max)  # index 0 <-> i = 2; log 1 = 0 adds nothing

    def at(c):
        lo = max(2, c - window)
        return float(ratio[lo - 2:c - 1].max())

    cps = [c for c in (i_max // 4, i_max // 2, i_max) if c - window >= 2]
    est = at(i_max)
    series = [(c, at(c)) for c in cps]
    confident = diverging = False
    if len(series) == 3:
        d1 = series[1][1] - series[0][1]
        d2 = series[2][1] - series[1][1]
        diverging = d1 > 0 and d2 > 0 and d2 >= 0.9 * d1
        scale = 0.05 * max(est, 1.0)
        confident = abs(d1) <= scale and abs(d2) <= scale and not diverging
    return AbscissaEstimate(est, confident, diverging, tuple(series))


def _terms(desc: SizeFunction, n: int, x: float) -> np.ndarray:
    with np.errstate(over="ignore", under="ignore"):
        return np.exp(-x * np.exp(_sizes.log_values(desc, n)))


def dirichlet_partial(desc: SizeFunction, x: float, n: int) -> float:
    """``sum_{i<=n} exp(-x w(i))`` with correctly rounded summation."""
    if not x > 0:
        raise DomainError("x must be positive")
    return math.fsum(_terms(desc, n, x))


def mean_measure(desc: SizeFunction, x: float, y: float, n_terms: int) -> float:
    """Expected number of ``X_i`` (``i <= n_terms``) falling in ``(x, y]``; ``y`` may be ``inf``."""
    if not (0 <= x <= y):
        raise DomainError("need 0 <= x <= y")
    if x == y:
        return 0.0
    w = np.exp(_sizes.log_values(desc, n_terms))
    with np.errstate(under="ignore", over="ignore", invalid="ignore"):
        lower = np.exp(-w * x)
        if math.isinf(y):
            return math.fsum(lower)
        # exp(-wx) - exp(-wy) written as exp(-wx) * -expm1(-w(y-x)), accurate for small w
        return math.fsum(lower * -np.expm1(-w * (y - x)))


@dataclass(frozen=True)
class EmbeddabilityReport:
    embeddable: bool
    no_interior_accumulation: bool
    small_part_summable: bool
    beta_zero_if_unbounded: bool

    @property
    def failed(self) -> list[str]:
        names = {
            "a": self.no_interior_accumulation,
            "b": self.small_part_summable,
            "c": self.beta_zero_if_unbounded,
        }
        return [k for k, ok in names.items() if not ok]


def abt_embeddable(meta: SizeMetadata, allow_heuristic: bool = False) -> EmbeddabilityReport:
    """Whether the order embeds in the integers, with the three conditions separately.

    (a) no accumulation point inside ``(0, inf)``; (b) ``w`` summable over
    ``{w <= 1}``; (c) ``beta = 0`` whenever ``inf`` is an accumulation point.

    Raises
    ------
    DomainError
        For estimated (``heuristic``) metadata unless ``allow_heuristic`` is set.
    """
    if meta.heuristic and not allow_heuristic:
        raise DomainError("metadata estimated from a table; pass allow_heuristic=True to use it anyway")
    _require_complete(meta)
    a = INTERIOR not in meta.accumulation_points
    b = meta.small_part_summable is not Tristate.NO
    c = INFINITY not in meta.accumulation_points or meta.beta == 0
    return EmbeddabilityReport(a and b and c, a, b, c)


def _trend(v: np.ndarray, blocks: int = 4, tol: float = 0.01) -> str:
    # direction of medians over the last dyadic blocks of v
    n = v.size
    edges = [n >> k for k in range(blocks, -1, -1)]
    meds = [float(np.median(v[a:b])) for a, b in zip(edges, edges[1:]) if b > a]
    if len(meds) < 3 or min(meds) <= 0:
        return "flat"
    ratios = [b / a for a, b in zip(meds, meds[1:])]
    if all(r > 1 + tol for r in ratios[-2:]):
        return "up"
    if all(r < 1 - tol for r in ratios[-2:]):
        return "down"
    return "flat"


def _converges_at(large_sizes: np.ndarray, beta: float, growth_tol: float) -> Tristate:
    partial = np.cumsum(np.exp(-beta * large_sizes))
    n = partial.size
    a, b, c = partial[n // 4 - 1], partial[n // 2 - 1], partial[-1]
    if b - a <= 0:
        return Tristate.YES
    return Tristate.NO if (c - b) / (b - a) >= growth_tol else Tristate.YES


def estimate_metadata(
    desc: SizeFunction,
    *,
    min_count: int = 16,
    summable_tol: float = 0.01,
    window: int = 100,
    growth_tol: float = 0.95,
) -> SizeMetadata:
    """Heuristic limit metadata for a finite table of sizes.

    The table is split into its small part (``w <= 1``) and large part.  A
    part with at least ``min_count`` entries contributes an accumulation
    point at ``0`` / ``inf`` when its values trend down / up over the last
    dyadic blocks, and an interior point when they are flat.  A part is
    deemed summable when its second half adds less than ``summable_tol`` of
    its total.  ``beta`` comes from :func:`abscissa_numeric`-style maxima over
    the large part (``0`` when they trend down, ``inf`` when they trend up).
    Convergence at ``beta`` compares the growth of the Dirichlet partial
    sums over the last two doublings: a ratio of increments of at least
    ``growth_tol`` (harmonic-like growth) counts as divergent.  Slowly
    varying tables can fool every one of these tests.
    """
    w = np.asarray(desc.table, dtype=float)
    n = w.size
    idx = np.arange(1, n + 1)
    small = w <= 1.0
    acc: set[str] = set()
    parts = {}
    for name, mask in (("small", small), ("large", ~small)):
        vals = w[mask]
        if vals.size >= min_count:
            parts[name] = (idx[mask], vals)
            tr = _trend(vals)
            if tr == "down":
                acc.add(ZERO)
            elif tr == "up":
                acc.add(INFINITY)
            else:
                acc.add(INTERIOR)
    if not acc:
        acc.add(INTERIOR)

    def summable(vals):
        tail = math.fsum(vals[vals.size // 2:])
        return tail <= summable_tol * math.fsum(vals)

    if "small" in parts:
        small_sum = Tristate.YES if summable(parts["small"][1]) else Tristate.NO
    else:
        small_sum = Tristate.YES if small.any() else Tristate.NOT_APPLICABLE
    total = Tristate.YES if (acc == {ZERO} and summable(w)) else Tristate.NO
    if total is Tristate.YES:
        small_sum = Tristate.YES

    beta = math.inf if (INTERIOR in acc or (acc == {ZERO} and total is Tristate.NO)) else 0.0
    conv = Tristate.NOT_APPLICABLE
    if INFINITY in acc and "large" in parts:
        li, lv = parts["large"]
        ratios = np.log(li.clip(min=2)) / lv
        tail_max = float(ratios[-min(window, li.size):].max())
        trend = _trend(ratios)
        if tail_max < 1e-3 or trend == "down":
            beta = 0.0
        elif trend == "up":
            beta = math.inf
        else:
            beta = tail_max
        if 0 < beta < math.inf:
            conv = _converges_at(lv, beta, growth_tol)
    note = "numeric estimate from an explicit table"
    return SizeMetadata(acc, small_sum, total, beta, conv, note, heuristic=True)
