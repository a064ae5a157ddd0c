"""
Size functions ``w(i) > 0`` indexed by the positive integers.

A :class:`SizeFunction` is an immutable descriptor: a family name, its
parameters and (for explicit tables) the tabulated values.  Everything that
consumes sizes goes through :func:`values` / :func:`log_values`, which return
``w(1), ..., w(n)`` as numpy arrays.

Analytic metadata
-----------------
The order type of the size-biased order depends only on limit behaviour of
``w``, which no finite computation can decide.  :func:`analytic_metadata`
therefore returns hard-coded facts per family and parameter region:

=========================  ===============  ========  ========  ======  =========  =====================================
family / region            accumulation     small     total     beta    conv@beta  governing case
=========================  ===============  ========  ========  ======  =========  =====================================
constant c                 interior         no if     no        inf     n/a        accumulation point inside (0, inf)
                                            c<=1
geometric q < 1            zero             yes       yes       0       n/a        summable sizes
geometric q = 1            interior         no        no        inf     n/a        same as constant 1
geometric q > 1            infinity         n/a       no        0       n/a        w -> inf, limsup log i / q^i = 0
power alpha < -1           zero             yes       yes       0       n/a        summable sizes
power -1 <= alpha < 0      zero             no        no        inf     n/a        w -> 0 with divergent sum
power alpha = 0            interior         no        no        inf     n/a        constant 1
power alpha > 0            infinity         yes       no        0       n/a        w -> inf polynomially
log_power p < 1            infinity         yes       no        inf     n/a        (log i)^(1-p) -> inf
log_power p = 1            infinity         yes       no        1       no         zeta series diverges at 1
log_power p > 1            infinity         yes       no        0       n/a        (log i)^(1-p) -> 0
log + 2 log log            infinity         yes       no        1       yes        sum 1/(i log^2 i) converges
karamata_stirling t < 1    zero             no        no        inf     n/a        w ~ i^(t-1)/Gamma(t) -> 0, divergent
karamata_stirling t = 1    interior         no        no        inf     n/a        constant 1
karamata_stirling t > 1    infinity         yes       no        0       n/a        w ~ i^(t-1)/Gamma(t) -> inf
=========================  ===============  ========  ========  ======  =========  =====================================

"small" is summability of ``w(i)`` over ``{i : w(i) <= 1}``; families whose
sizes exceed 1 only from some finite index on have a finite small part,
reported as summable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping

import numpy as np

from .errors import DomainError, IndexOutOfRange, UnsupportedFamily

EXPLICIT_TABLE = "explicit_table"
CONSTANT = "constant"
GEOMETRIC = "geometric"
POWER = "power"
LOG_POWER = "log_power"
LOG_PLUS_TWO_LOG_LOG = "log_plus_two_log_log"
KARAMATA_STIRLING = "karamata_stirling"

FAMILIES = {
    EXPLICIT_TABLE: (),
    CONSTANT: ("c",),
    GEOMETRIC: ("q",),
    POWER: ("alpha",),
    LOG_POWER: ("p",),
    LOG_PLUS_TWO_LOG_LOG: (),
    KARAMATA_STIRLING: ("theta",),
}

# accumulation points of the multiset of sizes
ZERO = "zero"
INFINITY = "infinity"
INTERIOR = "interior"

_LOG_FLOAT_MAX = math.log(np.finfo(float).max)
_KS_SWITCH = 1e300


class Tristate(str, Enum):
    YES = "yes"
    NO = "no"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class SizeFunction:
    """Immutable size-function descriptor.

    Use the constructors (:func:`constant`, :func:`geometric`, ...) rather
    than building instances by hand; they validate parameters.
    """

    family: str
    params: Mapping[str, float] = field(default_factory=dict, hash=False)
    table: tuple[float, ...] | None = None
    truncation_default: int = 1000

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnsupportedFamily(f"unknown size family {self.family!r}")
        expected = set(FAMILIES[self.family])
        if set(self.params) != expected:
            raise DomainError(
                f"family {self.family!r} takes parameters {sorted(expected)}, got {sorted(self.params)}"
            )
        if self.truncation_default < 1:
            raise DomainError("truncation_default must be a positive integer")
        for key, value in self.params.items():
            if not math.isfinite(value):
                raise DomainError(f"parameter {key}={value} is not finite")
        if self.family == EXPLICIT_TABLE:
            if not self.table:
                raise DomainError("explicit table must be nonempty")
            for i, v in enumerate(self.table, start=1):
                if not (math.isfinite(v) and v > 0):
                    raise DomainError(f"table entry w({i})={v} is not a positive finite real")
        elif self.table is not None:
            raise DomainError(f"family {self.family!r} does not take a table")
        positive = {CONSTANT: "c", GEOMETRIC: "q", LOG_POWER: "p", KARAMATA_STIRLING: "theta"}
        if self.family in positive and self.params[positive[self.family]] <= 0:
            raise DomainError(f"{positive[self.family]} must be positive for {self.family}")

    def __repr__(self):
        if self.family == EXPLICIT_TABLE:
            return f"SizeFunction(explicit_table, len={len(self.table)})"
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"SizeFunction({self.family}{', ' if args else ''}{args})"

    @property
    def length(self) -> int | None:
        """Number of defined sizes; ``None`` for the infinite parametric families."""
        return len(self.table) if self.table is not None else None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"family": self.family, "params": dict(self.params)}
        if self.table is not None:
            out["table"] = list(self.table)
        out["truncation_default"] = self.truncation_default
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SizeFunction":
        if "family" not in data:
            raise DomainError("descriptor JSON needs a 'family' key")
        family = str(data["family"])
        params = {str(k): float(v) for k, v in (data.get("params") or {}).items()}
        table = data.get("table")
        if table is not None:
            table = tuple(float(v) for v in table)
        return cls(family, params, table, int(data.get("truncation_default", 1000)))

    @classmethod
    def from_json(cls, text: str) -> "SizeFunction":
        return cls.from_dict(json.loads(text))


def constant(c: float = 1.0, **kw) -> SizeFunction:
    return SizeFunction(CONSTANT, {"c": float(c)}, **kw)


def geometric(q: float, **kw) -> SizeFunction:
    """``w(i) = q**i``."""
    return SizeFunction(GEOMETRIC, {"q": float(q)}, **kw)


def power(alpha: float, **kw) -> SizeFunction:
    """``w(i) = i**alpha``."""
    return SizeFunction(POWER, {"alpha": float(alpha)}, **kw)


def log_power(p: float, **kw) -> SizeFunction:
    """``w(i) = log(i + 1)**p``."""
    return SizeFunction(LOG_POWER, {"p": float(p)}, **kw)


def log_plus_two_log_log(**kw) -> SizeFunction:
    """``w(i) = log(i+1) + 2 log log(i+1)`` for ``i >= 2`` and ``w(1) = log 2``.

    The formula is negative at ``i = 1``; only the tail matters for the
    order type, so the first size is fixed at ``log 2``.
    """
    return SizeFunction(LOG_PLUS_TWO_LOG_LOG, {}, **kw)


def karamata_stirling(theta: float, **kw) -> SizeFunction:
    """``w(i) = (theta)_{i-1} / (i-1)!``, the sizes with record probabilities ``theta/(theta+i-1)``."""
    return SizeFunction(KARAMATA_STIRLING, {"theta": float(theta)}, **kw)


def explicit_table(values, **kw) -> SizeFunction:
    return SizeFunction(EXPLICIT_TABLE, {}, tuple(float(v) for v in values), **kw)


def _check_n(desc: SizeFunction, n: int) -> int:
    n = int(n)
    if n < 1:
        raise DomainError(f"index must be >= 1, got {n}")
    if desc.table is not None and n > len(desc.table):
        raise IndexOutOfRange(f"table has {len(desc.table)} entries, index {n} requested")
    return n


def _ks_log_values(theta: float, n: int) -> np.ndarray:
    # log w(i+1) - log w(i) = log((theta + i - 1) / i)
    i = np.arange(1, n, dtype=float)
    return np.concatenate(([0.0], np.cumsum(np.log1p((theta - 1.0) / i))))


def _ks_values(theta: float, n: int) -> np.ndarray:
    i = np.arange(1, n, dtype=float)
    with np.errstate(over="ignore"):
        w = np.concatenate(([1.0], np.cumprod((theta + i - 1.0) / i)))
    big = ~(w <= _KS_SWITCH)
    if big.any():
        # continue the recurrence in log-space from the first large index
        k = int(np.argmax(big))
        logs = math.log(w[k - 1]) + np.cumsum(np.log1p((theta - 1.0) / i[k - 1:]))
        with np.errstate(over="ignore"):
            w[k:] = np.exp(logs)
    return w


def log_values(desc: SizeFunction, n: int) -> np.ndarray:
    """Return ``log w(1), ..., log w(n)``; never overflows."""
    n = _check_n(desc, n)
    i = np.arange(1, n + 1, dtype=float)
    fam, p = desc.family, desc.params
    if fam == EXPLICIT_TABLE:
        return np.log(np.asarray(desc.table[:n], dtype=float))
    if fam == CONSTANT:
        return np.full(n, math.log(p["c"]))
    if fam == GEOMETRIC:
        return i * math.log(p["q"])
    if fam == POWER:
        return p["alpha"] * np.log(i)
    if fam == LOG_POWER:
        return p["p"] * np.log(np.log1p(i))
    if fam == LOG_PLUS_TWO_LOG_LOG:
        return np.log(_llog_values(i))
    if fam == KARAMATA_STIRLING:
        return _ks_log_values(p["theta"], n)
    raise UnsupportedFamily(fam)


def _llog_values(i: np.ndarray) -> np.ndarray:
    lg = np.log1p(i)
    w = lg + 2.0 * np.log(lg)
    w[0] = math.log(2.0)
    return w


def values(desc: SizeFunction, n: int) -> np.ndarray:
    """Return the array ``w(1), ..., w(n)``.

    Raises
    ------
    OverflowError
        If some ``w(i)`` exceeds the largest representable float.  Use
        :func:`log_values` for such ranges.
    """
    n = _check_n(desc, n)
    fam, p = desc.family, desc.params
    i = np.arange(1, n + 1, dtype=float)
    with np.errstate(over="ignore"):
        if fam == EXPLICIT_TABLE:
            w = np.asarray(desc.table[:n], dtype=float)
        elif fam == CONSTANT:
            w = np.full(n, p["c"])
        elif fam == GEOMETRIC:
            w = p["q"] ** i
        elif fam == POWER:
            w = i ** p["alpha"]
        elif fam == LOG_POWER:
            w = np.log1p(i) ** p["p"]
        elif fam == LOG_PLUS_TWO_LOG_LOG:
            w = _llog_values(i)
        elif fam == KARAMATA_STIRLING:
            w = _ks_values(p["theta"], n)
        else:
            raise UnsupportedFamily(fam)
    if not np.all(np.isfinite(w)):
        bad = int(np.argmax(~np.isfinite(w))) + 1
        raise OverflowError(f"w({bad}) exceeds the float range for {desc!r}")
    if not np.all(w > 0):
        bad = int(np.argmax(~(w > 0))) + 1
        raise OverflowError(f"w({bad}) underflows to zero for {desc!r}; use log_values")
    return w


def evaluate(desc: SizeFunction, i: int) -> float:
    """Return ``w(i)``.

    >>> evaluate(karamata_stirling(2.0), 4)
    4.0
    """
    i = _check_n(desc, i)
    if desc.family == KARAMATA_STIRLING:
        return float(values(desc, i)[-1])
    fam, p = desc.family, desc.params
    if fam == EXPLICIT_TABLE:
        return desc.table[i - 1]
    if fam == CONSTANT:
        return p["c"]
    try:
        if fam == GEOMETRIC:
            w = p["q"] ** i
        elif fam == POWER:
            w = float(i) ** p["alpha"]
        elif fam == LOG_POWER:
            w = math.log1p(i) ** p["p"]
        else:
            w = math.log(2.0) if i == 1 else math.log1p(i) + 2.0 * math.log(math.log1p(i))
    except OverflowError:
        raise OverflowError(f"w({i}) exceeds the float range for {desc!r}") from None
    if not (math.isfinite(w) and w > 0):
        raise OverflowError(f"w({i}) is not representable for {desc!r}")
    return float(w)


def partial_sum(desc: SizeFunction, n: int) -> float:
    """``S_n = w(1) + ... + w(n)``, correctly rounded (``math.fsum``)."""
    return math.fsum(values(desc, n))


def partial_sums(desc: SizeFunction, n: int) -> np.ndarray:
    """All of ``S_1, ..., S_n`` (running sum with Neumaier compensation)."""
    w = values(desc, n)
    out = np.empty(n)
    s = c = 0.0
    for k, x in enumerate(w.tolist()):
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
        out[k] = s + c
    return out


@dataclass(frozen=True)
class SizeMetadata:
    """Limit facts about a size function that decide the order type.

    ``beta`` is the convergence abscissa of ``sum_i exp(-x w(i))`` taken over
    the sizes tending to infinity (the whole sequence when ``w -> inf``).
    ``None`` in any slot means unknown.  ``heuristic`` marks metadata that
    was estimated from finitely many values rather than derived.
    """

    accumulation_points: frozenset[str]
    small_part_summable: Tristate | None
    total_summable: Tristate | None
    beta: float | None
    converges_at_beta: Tristate | None
    note: str = ""
    heuristic: bool = False

    def __post_init__(self):
        object.__setattr__(self, "accumulation_points", frozenset(self.accumulation_points))
        unknown = self.accumulation_points - {ZERO, INFINITY, INTERIOR}
        if unknown:
            raise DomainError(f"unknown accumulation labels {sorted(unknown)}")
        for name in ("small_part_summable", "total_summable", "converges_at_beta"):
            value = getattr(self, name)
            if value is not None and not isinstance(value, Tristate):
                object.__setattr__(self, name, Tristate(value))
        if self.beta is not None and not (self.beta >= 0):
            raise DomainError(f"beta must be nonnegative, got {self.beta}")
        if self.total_summable is Tristate.YES and self.small_part_summable not in (Tristate.YES, None):
            raise DomainError("a summable size function has a summable small part")

    @property
    def complete(self) -> bool:
        return None not in (self.small_part_summable, self.total_summable, self.beta, self.converges_at_beta)

    def to_dict(self) -> dict[str, Any]:
        return {
            "accumulation_points": sorted(self.accumulation_points),
            "small_part_summable": _tri_out(self.small_part_summable),
            "total_summable": _tri_out(self.total_summable),
            "beta": _beta_out(self.beta),
            "converges_at_beta": _tri_out(self.converges_at_beta),
            "heuristic": self.heuristic,
        }


def _tri_out(value):
    return None if value is None else value.value


def _beta_out(beta):
    if beta is None:
        return None
    return "inf" if math.isinf(beta) else beta


_Y, _N, _NA = Tristate.YES, Tristate.NO, Tristate.NOT_APPLICABLE
_INF = math.inf


def _constant_meta(c: float, note: str) -> SizeMetadata:
    small = _N if c <= 1 else _NA
    return SizeMetadata({INTERIOR}, small, _N, _INF, _NA, note)


def analytic_metadata(desc: SizeFunction) -> SizeMetadata:
    """Closed-form limit metadata for a parametric family (see module table).

    Raises
    ------
    UnsupportedFamily
        For explicit tables, which carry no limit information; estimate
        their metadata with :func:`sizebiased.classifier.estimate_metadata`.
    """
    fam, p = desc.family, desc.params
    if fam == EXPLICIT_TABLE:
        raise UnsupportedFamily("explicit tables have no analytic metadata; use numeric estimation")
    if fam == CONSTANT:
        return _constant_meta(p["c"], "constant sizes accumulate at their value")
    if fam == GEOMETRIC:
        q = p["q"]
        if q < 1:
            return SizeMetadata({ZERO}, _Y, _Y, 0.0, _NA, "geometric q<1: summable")
        if q == 1:
            return _constant_meta(1.0, "geometric q=1 is constant")
        return SizeMetadata({INFINITY}, _NA, _N, 0.0, _NA, "geometric q>1: log i / q^i -> 0")
    if fam == POWER:
        a = p["alpha"]
        if a < -1:
            return SizeMetadata({ZERO}, _Y, _Y, 0.0, _NA, "power alpha<-1: summable")
        if a < 0:
            return SizeMetadata({ZERO}, _N, _N, _INF, _NA, "power -1<=alpha<0: w->0, divergent sum")
        if a == 0:
            return _constant_meta(1.0, "power alpha=0 is constant")
        return SizeMetadata({INFINITY}, _Y, _N, 0.0, _NA, "power alpha>0: log i / i^alpha -> 0")
    if fam == LOG_POWER:
        e = p["p"]
        if e < 1:
            return SizeMetadata({INFINITY}, _Y, _N, _INF, _NA, "log power p<1: (log i)^(1-p) -> inf")
        if e == 1:
            return SizeMetadata({INFINITY}, _Y, _N, 1.0, _N, "log i: zeta series diverges at x=1")
        return SizeMetadata({INFINITY}, _Y, _N, 0.0, _NA, "log power p>1: (log i)^(1-p) -> 0")
    if fam == LOG_PLUS_TWO_LOG_LOG:
        return SizeMetadata({INFINITY}, _Y, _N, 1.0, _Y, "sum 1/(i log^2 i) converges at x=1")
    if fam == KARAMATA_STIRLING:
        t = p["theta"]
        if t < 1:
            return SizeMetadata({ZERO}, _N, _N, _INF, _NA, "w ~ i^(theta-1)/Gamma(theta) -> 0, divergent")
        if t == 1:
            return _constant_meta(1.0, "theta=1 is constant 1")
        return SizeMetadata({INFINITY}, _Y, _N, 0.0, _NA, "w ~ i^(theta-1)/Gamma(theta) -> inf polynomially")
    raise UnsupportedFamily(fam)
