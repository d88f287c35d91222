"""End-to-end distance-set experiments on sphere subsets.

A trial samples E on the unit sphere with |E| = min(ceil(C q^{d/2}), |S|),
lifts it to line classes E1, counts E1-internal edges per relation, and
checks the chain that drives the distance bound:

  * |E1| >= |E|/2 (antipodal pairs collapse at worst 2-to-1),
  * the per-relation edge counts decompose all C(|E1|, 2) pairs,
  * an edge in relation i forces a distance in the value pair of i,
  * the value pairs are disjoint, so |distance set| >= #nonempty relations,
  * each edge count respects the mixing bound for its graph.

Violations raise: they falsify this implementation, not the mathematics.
Threshold misses (the configured minimum |distance set|/q or nonempty
fraction) are reported, never raised; the constants are empirical knobs,
not ground truth.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field as dc_field

from .ffield import Field, field_for_order
from .geometry import Omega, Sphere, build_omega, distance_set, enumerate_sphere, lift
from .mixing import induced_edge_count, trial_rng
from .scheme import RelationValue, SchemeGraph, build_all_graphs, relation_values
from .spectra import adjacency_matrix, second_eigenvalue, sym_eigenvalues

__all__ = [
    "InvariantViolation",
    "ExperimentConfig",
    "TrialResult",
    "BudgetRow",
    "sample_subset",
    "brute_oracle_distance",
    "falconer_trial",
    "edge_budget_check",
    "ExperimentReport",
    "run_experiment",
]

BUDGET_TOL_PER_VERTEX = 1e-6


class InvariantViolation(RuntimeError):
    """A proof-pipeline invariant failed; the implementation is at fault."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Falconer experiment parameters; thresholds are empirical defaults."""

    q: int
    d: int
    C: float = 1.0
    trials: int = 50
    seed: int = 0
    min_delta_ratio: float = 0.5
    min_relation_fraction: float = 0.5

    def __post_init__(self):
        if self.d < 3:
            raise ValueError(f"the distance bound needs d >= 3, got d={self.d}")
        if self.C <= 0:
            raise ValueError(f"C must be positive, got {self.C}")
        if self.trials < 1:
            raise ValueError(f"need at least one trial, got {self.trials}")

    def subset_size(self, sphere_size: int) -> int:
        return min(math.ceil(self.C * self.q ** (self.d / 2)), sphere_size)


def sample_subset(sphere: Sphere, size: int, rng) -> list:
    """Uniform sample without replacement, returned in sphere order."""
    if not 1 <= size <= len(sphere):
        raise ValueError(f"size {size} out of range [1, {len(sphere)}]")
    picks = rng.choice(len(sphere), size=size, replace=False)
    return [sphere.points[k] for k in sorted(picks.tolist())]


def brute_oracle_distance(field: Field, points) -> set[int]:
    """Independent oracle: all ordered pairs, arithmetic inlined."""
    pts = list(points)
    if not pts:
        raise ValueError("distance set of an empty point set")
    out = set()
    for x in pts:
        for y in pts:
            acc = 0
            for a, b in zip(x, y):
                delta = field.add(a, field.neg(b))
                acc = field.add(acc, field.mul(delta, delta))
            out.add(acc)
    return out


@dataclass
class TrialResult:
    trial: int
    e_size: int
    e1_size: int
    delta: frozenset
    edge_counts: list[int]
    nonempty_relations: int
    relation_fraction: float
    implication_pass: bool
    budget_pass: bool
    delta_full_field: bool

    @property
    def delta_size(self) -> int:
        return len(self.delta)


def falconer_trial(E, omega: Omega, graphs: list[SchemeGraph],
                   values: tuple[RelationValue, ...], trial: int = 0,
                   lambdas: list[float] | None = None) -> TrialResult:
    """One pipeline pass over a sphere subset, with hard invariant checks."""
    field = omega.field
    delta = distance_set(field, E)
    e1, _mult = lift(field, E, omega)
    e_size, e1_size = len(list(E)), len(e1)
    if 2 * e1_size < e_size:
        raise InvariantViolation(f"|E1| = {e1_size} < |E|/2 = {e_size}/2")
    edge_counts = [induced_edge_count(g, e1) for g in graphs]
    if sum(edge_counts) != e1_size * (e1_size - 1) // 2:
        raise InvariantViolation(
            f"edge decomposition broken: {sum(edge_counts)} != C({e1_size}, 2)"
        )
    for value, count in zip(values, edge_counts):
        if count >= 1 and not delta.intersection(value.pair):
            raise InvariantViolation(
                f"relation {value.index} has {count} edges but no distance in {value.pair}"
            )
    nonempty = sum(1 for c in edge_counts if c >= 1)
    if len(delta) < nonempty:
        raise InvariantViolation(
            f"|delta| = {len(delta)} < {nonempty} nonempty relations"
        )
    budget_pass = True
    if lambdas is not None:
        edge_budget_check(e1, graphs, lambdas)
    return TrialResult(
        trial=trial,
        e_size=e_size,
        e1_size=e1_size,
        delta=frozenset(delta),
        edge_counts=edge_counts,
        nonempty_relations=nonempty,
        relation_fraction=nonempty / len(values),
        implication_pass=True,
        budget_pass=budget_pass,
        delta_full_field=len(delta) == field.q,
    )


@dataclass
class BudgetRow:
    index: int
    edge_count: int
    bound: float
    slack: float
    passed: bool


def edge_budget_check(e1, graphs: list[SchemeGraph], lambdas: list[float]) -> list[BudgetRow]:
    """Mixing upper bound e_i(E1) <= (v_i/2n)|E1|^2 + lam_i |E1|/2 per relation."""
    size = len(list(e1))
    rows = []
    for graph, lam in zip(graphs, lambdas):
        count = induced_edge_count(graph, e1)
        bound = (
            graph.valency * size * size / (2 * graph.n)
            + 0.5 * lam * size
            + BUDGET_TOL_PER_VERTEX * size
        )
        row = BudgetRow(
            index=graph.index,
            edge_count=count,
            bound=bound,
            slack=bound - count,
            passed=count <= bound,
        )
        if not row.passed:
            raise InvariantViolation(
                f"edge budget violated for relation {graph.index}: "
                f"{count} > {bound}"
            )
        rows.append(row)
    return rows


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    field_header: dict
    sphere_size: int
    omega_size: int
    trial_results: list[TrialResult]
    delta_ratio_stats: dict = dc_field(default_factory=dict)
    relation_fraction_stats: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return (
            self.delta_ratio_stats["min"] >= self.config.min_delta_ratio
            and self.relation_fraction_stats["min"] >= self.config.min_relation_fraction
        )


def _stats(values) -> dict:
    return {
        "min": min(values),
        "median": statistics.median(values),
        "max": max(values),
    }


def run_experiment(config: ExperimentConfig, modulus=None) -> ExperimentReport:
    """Run seeded trials and aggregate the distance-set statistics."""
    field = field_for_order(config.q, modulus)
    sphere = enumerate_sphere(field, config.d)
    omega = build_omega(field, config.d)
    graphs = build_all_graphs(omega)
    values = relation_values(field, config.d)
    lambdas = [
        second_eigenvalue(sym_eigenvalues(adjacency_matrix(g)), g.valency)
        for g in graphs
    ]
    size = config.subset_size(len(sphere))
    results = []
    for trial in range(config.trials):
        rng = trial_rng(config.seed, trial)
        points = sample_subset(sphere, size, rng)
        results.append(
            falconer_trial(points, omega, graphs, values, trial=trial, lambdas=lambdas)
        )
    return ExperimentReport(
        config=config,
        field_header=field.header(),
        sphere_size=len(sphere),
        omega_size=len(omega),
        trial_results=results,
        delta_ratio_stats=_stats([r.delta_size / config.q for r in results]),
        relation_fraction_stats=_stats([r.relation_fraction for r in results]),
    )
