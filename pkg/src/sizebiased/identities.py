"""
Randomised checks of the algebraic identities satisfied by ``p_n``.

Each check draws random positive size tuples, evaluates both sides with
:mod:`sizebiased.probkernel` and reports the largest residual.  The suite
backs the ``verify`` CLI command.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .probkernel import chain_prob, head_prob, insertion_rank_pmf, transposition_ratio
from .samplers import make_rng

REQUIRED_IDENTITIES = (
    "symmetrization",
    "recursion",
    "transposition",
    "cycle_reversion",
    "consistency",
    "shuffle",
    "monotonicity",
    "tsetlin_reversal",
    "insertion_quotient",
    "head",
)


@dataclass(frozen=True)
class IdentityResult:
    name: str
    max_residual: float
    trials: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tolerance

    def to_dict(self):
        return {
            "name": self.name,
            "max_residual": self.max_residual,
            "trials": self.trials,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def _sizes(rng, n):
    # log-uniform on [e^-3, e^3]
    return np.exp(rng.uniform(-3.0, 3.0, size=n))


def _perm_matrix(x, perms):
    return x[np.asarray(perms)]


def symmetrization(rng, max_n=7):
    n = int(rng.integers(1, max_n + 1))
    x = _sizes(rng, n)
    probs = chain_prob(_perm_matrix(x, list(itertools.permutations(range(n)))))
    return abs(math.fsum(np.atleast_1d(probs)) - 1.0)


def recursion(rng, max_n=7):
    n = int(rng.integers(1, max_n))
    m = int(rng.integers(1, max_n - n + 1))
    x, y = _sizes(rng, n), _sizes(rng, m)
    lhs = chain_prob(np.concatenate((x, y)))
    rhs = chain_prob(np.append(x, y.sum())) * chain_prob(y)
    return abs(lhs - rhs)


def transposition(rng, max_n=7):
    total = int(rng.integers(2, max_n + 1))
    n = int(rng.integers(0, total - 1))
    a, (x, y), b = _sizes(rng, n), _sizes(rng, 2), _sizes(rng, total - n - 2)
    ratio = chain_prob(np.concatenate((a, [x, y], b))) / chain_prob(np.concatenate((a, [y, x], b)))
    return abs(ratio / transposition_ratio(x, y, b.sum()) - 1.0)


def cycle_reversion(rng, max_n=7):
    # pairwise probabilities around the closed cycle x_1 -> ... -> x_n -> x_1;
    # without the closing pair the two products differ by x_1 / x_n
    n = int(rng.integers(2, max_n + 1))
    x = _sizes(rng, n)
    nxt = np.roll(x, -1)
    forward = math.prod(chain_prob(np.column_stack((x, nxt))))
    backward = math.prod(chain_prob(np.column_stack((nxt, x))))
    return abs(forward - backward)


def consistency(rng, max_n=7):
    # adding one item anywhere and summing out its position leaves p_n unchanged
    n = int(rng.integers(1, max_n))
    x = _sizes(rng, n)
    z = _sizes(rng, 1)[0]
    total = math.fsum(chain_prob(np.insert(x, k, z)) for k in range(n + 1))
    return abs(total - chain_prob(x))


def shuffles(n, m):
    """Index sequences interleaving ``0..n-1`` with ``n..n+m-1``, each block kept in order."""
    for slots in itertools.combinations(range(n + m), n):
        xs, ys = iter(range(n)), iter(range(n, n + m))
        chosen = set(slots)
        yield [next(xs) if k in chosen else next(ys) for k in range(n + m)]


def shuffle(rng, max_block=5):
    n, m = (int(v) for v in rng.integers(1, max_block + 1, size=2))
    x, y = _sizes(rng, n), _sizes(rng, m)
    z = np.concatenate((x, y))
    total = math.fsum(np.atleast_1d(chain_prob(z[np.array(list(shuffles(n, m)))])))
    return abs(total - chain_prob(x) * chain_prob(y))


def monotonicity(rng, max_n=6):
    n = int(rng.integers(1, max_n + 1))
    x = _sizes(rng, n)
    probs = np.atleast_1d(chain_prob(_perm_matrix(x, list(itertools.permutations(range(n))))))
    dec = chain_prob(np.sort(x)[::-1])
    inc = chain_prob(np.sort(x))
    return max(0.0, probs.max() - dec) + max(0.0, inc - probs.min())


def tsetlin_reversal(rng, max_n=6):
    n = int(rng.integers(1, max_n + 1))
    x = _sizes(rng, n)
    y = _sizes(rng, 1)[0]
    worst = 0.0
    for k in range(n + 1):
        moved = chain_prob(np.insert(x, k, y))
        lhs = moved / chain_prob(np.insert(x, 0, y)) * chain_prob([y, x.sum()])
        rhs = moved / chain_prob(x)
        worst = max(worst, abs(lhs - rhs))
    return worst


def insertion_quotient(rng, max_n=7):
    n = int(rng.integers(0, max_n))
    x = _sizes(rng, n)
    y = _sizes(rng, 1)[0]
    pmf = insertion_rank_pmf(x, y)
    base = chain_prob(x) if n else 1.0
    return max(abs(pmf[k] - chain_prob(np.insert(x, k, y)) / base) for k in range(n + 1))


def head(rng, max_n=6):
    n = int(rng.integers(1, max_n))
    m = int(rng.integers(1, max_n - n + 1))
    x, J = _sizes(rng, n), _sizes(rng, m)
    perms = list(itertools.permutations(range(m)))
    total = math.fsum(chain_prob(np.concatenate((x, J[list(p)]))) for p in perms)
    return abs(head_prob(x, J.sum()) - total)


CHECKS: dict[str, Callable] = {
    "symmetrization": symmetrization,
    "recursion": recursion,
    "transposition": transposition,
    "cycle_reversion": cycle_reversion,
    "consistency": consistency,
    "shuffle": shuffle,
    "monotonicity": monotonicity,
    "tsetlin_reversal": tsetlin_reversal,
    "insertion_quotient": insertion_quotient,
    "head": head,
}


def run_identity_suite(trials: int = 1000, seed=42, tolerance: float = 1e-10, names=None) -> list[IdentityResult]:
    """Run each identity on ``trials`` random size tuples; one result per identity."""
    results = []
    for name in names or CHECKS:
        rng = make_rng(seed, REQUIRED_IDENTITIES.index(name))
        check = CHECKS[name]
        worst = max(check(rng) for _ in range(trials))
        results.append(IdentityResult(name, float(worst), trials, tolerance))
    return results
