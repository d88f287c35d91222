"""Expander mixing lemma checks on relation graphs.

For a regular graph with valency v on n vertices and second eigenvalue
lam, every vertex subset B satisfies

    | e(B) - (v / 2n) |B|^2 |  <=  (1/2) lam |B|.

The combinatorial side is evaluated in exact rational arithmetic; a
tolerance of 1e-6 |B| on the right absorbs only the floating-point error
of lam.  The inequality is a theorem, so any reported failure means a
bug in the graph construction or the eigensolver, not in the mathematics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .scheme import SchemeGraph

__all__ = [
    "MixingCheck",
    "induced_edge_count",
    "mixing_gap",
    "MixingReport",
    "mixing_fuzz",
    "trial_rng",
]

MIXING_TOL_PER_VERTEX = 1e-6


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Counter-based substream keyed by (seed, trial); order-independent."""
    key = np.array([seed, trial], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def induced_edge_count(graph: SchemeGraph, subset) -> int:
    """Edges inside B by merging each member's sorted neighbor list with B."""
    b = np.asarray(sorted(subset), dtype=np.int32)
    if len(b) and (b[0] < 0 or b[-1] >= graph.n):
        raise ValueError(f"vertex index out of range [0, {graph.n})")
    if len(np.unique(b)) != len(b):
        raise ValueError("subset contains duplicate vertices")
    total = 0
    for v in b:
        nb = graph.neighbors[v]
        pos = np.searchsorted(b, nb)
        hits = (pos < len(b)) & (b[np.minimum(pos, len(b) - 1)] == nb)
        total += int((hits & (nb > v)).sum())
    return total


@dataclass
class MixingCheck:
    trial: int
    size: int
    edge_count: int
    expected: Fraction
    gap: Fraction
    bound: float
    tolerance: float
    passed: bool


def mixing_gap(graph: SchemeGraph, subset, lam: float, trial: int = 0) -> MixingCheck:
    """Both sides of the mixing inequality for one subset."""
    if graph.valency is None:
        raise ValueError("mixing bound requires a regular graph")
    size = len(set(subset))
    e_b = induced_edge_count(graph, subset)
    expected = Fraction(graph.valency * size * size, 2 * graph.n)
    gap = abs(Fraction(e_b) - expected)
    bound = 0.5 * lam * size
    tolerance = MIXING_TOL_PER_VERTEX * size
    return MixingCheck(
        trial=trial,
        size=size,
        edge_count=e_b,
        expected=expected,
        gap=gap,
        bound=bound,
        tolerance=tolerance,
        passed=float(gap) <= bound + tolerance,
    )


@dataclass
class MixingReport:
    q: int
    d: int
    index: int
    n: int
    valency: int
    second: float
    trials: int
    seed: int
    checks: list[MixingCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def mixing_fuzz(graph: SchemeGraph, lam: float, trials: int, seed: int) -> MixingReport:
    """Forced subsets (full, empty, singleton) plus seeded random subsets.

    Random trial k draws |B| uniformly from {1..n} and then B uniformly,
    from the (seed, trial) substream, so re-runs and parallel execution
    agree row by row.
    """
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    n = graph.n
    checks = [
        mixing_gap(graph, range(n), lam, trial=0),
        mixing_gap(graph, (), lam, trial=1),
        mixing_gap(graph, (0,), lam, trial=2),
    ]
    for k in range(trials):
        trial = k + 3
        rng = trial_rng(seed, trial)
        size = int(rng.integers(1, n + 1))
        subset = rng.choice(n, size=size, replace=False)
        checks.append(mixing_gap(graph, subset.tolist(), lam, trial=trial))
    return MixingReport(
        q=graph.field.q,
        d=graph.d,
        index=graph.index,
        n=n,
        valency=graph.valency,
        second=lam,
        trials=trials,
        seed=seed,
        checks=checks,
    )
