"""Relations on Omega and the (q+1)/2 relation graphs.

Two distinct lines [U], [V] (canonical unit representatives) are related
according to the unordered dot-product class {c, -c} with c = U.V, which
is the representative-independent form of the value pair
{Q(U+V), Q(U-V)} = {2 + 2c, 2 - 2c}.  Relation i carries the offset
alpha_i with value pair {2 + alpha_i, 2 - alpha_i}:

  d odd:   alpha_1 = -2,  alpha_i = 2 nu^{-(i-1)} for 2 <= i <= (q-1)/2,
           alpha_{(q+1)/2} = 0
  d even:  alpha_i = 2^{-1} nu^i for 1 <= i <= (q-1)/2,
           alpha_{(q+1)/2} = 0

The value pairs are pairwise disjoint and cover F_q, so classification is
a total function on distinct line pairs.  Relation indices are only
meaningful relative to the pinned generator nu; serialized graphs embed
the full field header.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .ffield import Field
from .geometry import Omega, dot

__all__ = [
    "RelationValue",
    "relation_count",
    "relation_values",
    "alpha_of",
    "dot_class_table",
    "classify",
    "SchemeGraph",
    "build_graph",
    "build_all_graphs",
    "relation_matrix",
    "PartitionReport",
    "check_partition",
    "RegularityReport",
    "IrregularGraphError",
    "check_regular",
    "SchemeAxiomsReport",
    "check_scheme_axioms",
]


class IrregularGraphError(RuntimeError):
    """A relation graph came out irregular; the construction is broken."""


@dataclass(frozen=True)
class RelationValue:
    """Relation index i with its offset alpha_i and value pair {2 +- alpha_i}."""

    index: int
    alpha: int
    pair: tuple[int, ...]


def relation_count(q: int) -> int:
    return (q + 1) // 2


def relation_values(field: Field, d: int) -> tuple[RelationValue, ...]:
    """All (q+1)/2 relation values for the given dimension parity."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    q = field.q
    m = relation_count(q)
    two = 2  # codes below p are the prime-subfield constants
    values = []
    for i in range(1, m + 1):
        if i == m:
            alpha = 0
        elif d % 2 == 1:
            alpha = field.neg(two) if i == 1 else field.mul(two, field.pow(field.nu, -(i - 1)))
        else:
            alpha = field.mul(field.inv(two), field.pow(field.nu, i))
        pair = tuple(sorted({field.add(two, alpha), field.sub(two, alpha)}))
        values.append(RelationValue(i, alpha, pair))
    return tuple(values)


def alpha_of(field: Field, d: int, i: int) -> RelationValue:
    values = relation_values(field, d)
    if not 1 <= i <= len(values):
        raise ValueError(f"relation index {i} out of range [1, {len(values)}]")
    return values[i - 1]


def dot_class_table(field: Field, d: int) -> np.ndarray:
    """Length-q table mapping a dot-product value to its relation index.

    Entry c holds the unique i whose dot class {alpha_i/2, -alpha_i/2}
    contains c.  Construction fails loudly if the classes collide or miss
    a value, which would falsify the partition property.
    """
    q = field.q
    table = np.zeros(q, dtype=np.int16)
    inv2 = field.inv(2)
    for rel in relation_values(field, d):
        c = field.mul(rel.alpha, inv2)
        for value in {c, field.neg(c)}:
            if table[value]:
                raise RuntimeError(f"dot value {value} claimed by two relations")
            table[value] = rel.index
    if not table.all() and q > 1:
        missing = int(np.nonzero(table == 0)[0][0])
        raise RuntimeError(f"dot value {missing} not covered by any relation")
    return table


def classify(field: Field, d: int, u, v) -> int:
    """Relation index of a pair of distinct canonical line representatives."""
    if tuple(u) == tuple(v):
        raise ValueError("the diagonal is the identity relation, not classified")
    return int(dot_class_table(field, d)[dot(field, u, v)])


def relation_matrix(omega: Omega, d: int | None = None) -> np.ndarray:
    """n x n relation indices for all line pairs, 0 on the diagonal."""
    field = omega.field
    d = omega.d if d is None else d
    reps = np.array(omega.lines, dtype=np.int64)
    mul, add = field.mul_table, field.add_table
    acc = mul[reps[:, 0, None], reps[None, :, 0]]
    for k in range(1, reps.shape[1]):
        acc = add[acc, mul[reps[:, k, None], reps[None, :, k]]]
    rel = dot_class_table(field, d)[acc]
    np.fill_diagonal(rel, 0)
    return rel


class SchemeGraph:
    """One relation graph (Omega, R_i): sorted neighbor lists plus metadata."""

    def __init__(self, field: Field, d: int, value: RelationValue, neighbors):
        self.field = field
        self.d = d
        self.index = value.index
        self.value = value
        self.neighbors = [np.asarray(nb, dtype=np.int32) for nb in neighbors]
        self.n = len(self.neighbors)
        degrees = np.array([len(nb) for nb in self.neighbors], dtype=np.int64)
        self.degrees = degrees
        self.edge_count = int(degrees.sum()) // 2
        self.valency = int(degrees[0]) if self.n and (degrees == degrees[0]).all() else None

    def __repr__(self):
        return (
            f"SchemeGraph(q={self.field.q}, d={self.d}, i={self.index}, "
            f"n={self.n}, valency={self.valency})"
        )

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u, nb in enumerate(self.neighbors):
            for v in nb[nb > u]:
                out.append((u, int(v)))
        return out

    def bit_matrix(self) -> np.ndarray:
        """Packed adjacency rows (np.packbits layout); n <= 4096 only."""
        if self.n > 4096:
            raise ValueError(f"bit matrix limited to 4096 vertices, have {self.n}")
        dense = np.zeros((self.n, self.n), dtype=np.uint8)
        for u, nb in enumerate(self.neighbors):
            dense[u, nb] = 1
        return np.packbits(dense, axis=1)

    def header(self) -> dict:
        h = self.field.header()
        h.update({"d": self.d, "i": self.index, "n": self.n, "valency": self.valency})
        return h


def _graph_from_relation_matrix(omega: Omega, rel: np.ndarray, value: RelationValue) -> SchemeGraph:
    mask = rel == value.index
    neighbors = [np.flatnonzero(mask[v]).astype(np.int32) for v in range(rel.shape[0])]
    return SchemeGraph(omega.field, omega.d, value, neighbors)


def build_graph(omega: Omega, i: int) -> SchemeGraph:
    value = alpha_of(omega.field, omega.d, i)
    return _graph_from_relation_matrix(omega, relation_matrix(omega), value)


def build_all_graphs(omega: Omega) -> list[SchemeGraph]:
    """All (q+1)/2 relation graphs from a single classification pass."""
    rel = relation_matrix(omega)
    return [
        _graph_from_relation_matrix(omega, rel, value)
        for value in relation_values(omega.field, omega.d)
    ]


@dataclass
class PartitionReport:
    q: int
    d: int
    n: int
    relations: int
    edge_counts: list[int]
    pairs: list[tuple[int, ...]]
    symmetric: bool
    total_function: bool
    edges_sum_ok: bool
    pairs_disjoint: bool
    pairs_cover_field: bool

    @property
    def passed(self) -> bool:
        return (
            self.symmetric
            and self.total_function
            and self.edges_sum_ok
            and self.pairs_disjoint
            and self.pairs_cover_field
        )


def check_partition(omega: Omega) -> PartitionReport:
    """Every distinct line pair in exactly one relation; value pairs tile F_q."""
    field, d = omega.field, omega.d
    rel = relation_matrix(omega)
    n = len(omega)
    m = relation_count(field.q)
    off_diag = rel[~np.eye(n, dtype=bool)] if n else rel
    values = relation_values(field, d)
    edge_counts = [int((rel == v.index).sum()) // 2 for v in values]
    all_pair_values = [x for v in values for x in v.pair]
    return PartitionReport(
        q=field.q,
        d=d,
        n=n,
        relations=m,
        edge_counts=edge_counts,
        pairs=[v.pair for v in values],
        symmetric=bool((rel == rel.T).all()),
        total_function=bool(((off_diag >= 1) & (off_diag <= m)).all()),
        edges_sum_ok=sum(edge_counts) == n * (n - 1) // 2,
        pairs_disjoint=len(set(all_pair_values)) == len(all_pair_values),
        pairs_cover_field=set(all_pair_values) == set(range(field.q)),
    )


@dataclass
class RegularityReport:
    q: int
    d: int
    index: int
    n: int
    valency: int
    order_ratio: float
    valency_ratio: float


def check_regular(graph: SchemeGraph) -> RegularityReport:
    """Common degree plus the measured (1+o(1)) factors of order and valency."""
    if graph.valency is None:
        degs = np.unique(graph.degrees)
        raise IrregularGraphError(
            f"(q={graph.field.q}, d={graph.d}, i={graph.index}) has degrees {degs.tolist()}"
        )
    q, d = graph.field.q, graph.d
    return RegularityReport(
        q=q,
        d=d,
        index=graph.index,
        n=graph.n,
        valency=graph.valency,
        order_ratio=graph.n / (q ** (d - 1) / 2),
        valency_ratio=graph.valency / q ** (d - 2),
    )


@dataclass
class SchemeAxiomsReport:
    q: int
    d: int
    n: int
    relations: int
    symmetric: bool
    constant: bool
    intersection_numbers: dict = dc_field(default_factory=dict)
    failures: list = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.symmetric and self.constant


def check_scheme_axioms(omega: Omega, max_vertices: int = 2500) -> SchemeAxiomsReport:
    """Symmetry and constancy of the intersection numbers p_ij^k.

    For (u, v) in R_k the number of w with (u, w) in R_i and (w, v) in R_j
    is the (u, v) entry of A_i A_j; constancy over each relation class
    (k = 0 is the diagonal) is the defining association-scheme axiom.
    """
    n = len(omega)
    if n > max_vertices:
        raise ValueError(f"|Omega| = {n} exceeds the O(n^3) guard {max_vertices}")
    field, d = omega.field, omega.d
    rel = relation_matrix(omega)
    m = relation_count(field.q)
    symmetric = bool((rel == rel.T).all())
    adjacency = [(rel == i).astype(np.float64) for i in range(1, m + 1)]
    masks = {0: np.eye(n, dtype=bool)}
    for k in range(1, m + 1):
        masks[k] = rel == k
    numbers: dict = {}
    failures: list = []
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            product = adjacency[i - 1] @ adjacency[j - 1]
            for k in range(0, m + 1):
                if not masks[k].any():
                    numbers[(i, j, k)] = 0
                    continue
                vals = product[masks[k]]
                first = int(round(float(vals[0])))
                if np.abs(vals - first).max() > 0.5:
                    failures.append((i, j, k))
                    numbers[(i, j, k)] = None
                else:
                    numbers[(i, j, k)] = first
    return SchemeAxiomsReport(
        q=field.q,
        d=d,
        n=n,
        relations=m,
        symmetric=symmetric,
        constant=not failures,
        intersection_numbers=numbers,
        failures=failures,
    )
