"""Dense symmetric eigensolver and spectral reports for relation graphs.

The solver is cyclic Jacobi: sweeps of Givens rotations over all (p, q)
pairs until the off-diagonal Frobenius norm drops below 1e-12 times the
initial Frobenius norm (absolute for the zero matrix), with a hard cap of
100 sweeps.  Adjacency matrices here are 0/1 with at most a few thousand
rows, where Jacobi is accurate and the O(n^3)-per-sweep cost is fine; the
sweep kernel is JIT-compiled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .ffield import Field
from .scheme import SchemeGraph

__all__ = [
    "Spectrum",
    "ConvergenceError",
    "adjacency_matrix",
    "sym_eigenvalues",
    "second_eigenvalue",
    "SpectralBoundRow",
    "SpectralBoundReport",
    "spectral_bound_report",
]

JACOBI_REL_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


class ConvergenceError(RuntimeError):
    """Jacobi iteration failed to reach the residual target."""


@dataclass
class Spectrum:
    """Eigenvalues sorted descending, with the achieved residual."""

    eigenvalues: np.ndarray
    residual: float
    sweeps: int


def adjacency_matrix(graph: SchemeGraph) -> np.ndarray:
    """Dense 0/1 symmetric adjacency with zero diagonal."""
    a = np.zeros((graph.n, graph.n), dtype=np.float64)
    for u, nb in enumerate(graph.neighbors):
        a[u, nb] = 1.0
    return a


@njit(cache=True)
def _jacobi_kernel(a, rel_tol, max_sweeps):
    n = a.shape[0]
    norm0 = 0.0
    for i in range(n):
        for j in range(n):
            norm0 += a[i, j] * a[i, j]
    norm0 = math.sqrt(norm0)
    if norm0 == 0.0:
        return 0.0, 0
    target = rel_tol * norm0
    sweeps = 0
    while True:
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off += a[i, j] * a[i, j]
        off = math.sqrt(2.0 * off)
        if off <= target or sweeps >= max_sweeps:
            return off / norm0, sweeps
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0


def sym_eigenvalues(matrix: np.ndarray, rel_tol: float = JACOBI_REL_TOL,
                    max_sweeps: int = JACOBI_MAX_SWEEPS) -> Spectrum:
    """Full spectrum of a symmetric matrix by cyclic Jacobi rotations."""
    a = np.array(matrix, dtype=np.float64, order="C", copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix is not symmetric")
    if a.shape[0] == 0:
        return Spectrum(np.zeros(0), 0.0, 0)
    residual, sweeps = _jacobi_kernel(a, rel_tol, max_sweeps)
    if residual > rel_tol:
        raise ConvergenceError(
            f"no convergence after {sweeps} sweeps, residual {residual:.3e}"
        )
    eigenvalues = np.sort(np.diag(a))[::-1].copy()
    return Spectrum(eigenvalues, float(residual), int(sweeps))


def second_eigenvalue(spectrum: Spectrum, valency: int) -> float:
    """max |lambda| after removing one occurrence of the valency.

    The largest eigenvalue of a regular graph must equal the valency; a
    mismatch beyond 1e-6 signals an irregular graph or a solver failure.
    """
    ev = spectrum.eigenvalues
    if len(ev) <= 1:
        return 0.0
    top = float(ev[0])
    if abs(top - valency) > 1e-6:
        raise ValueError(
            f"largest eigenvalue {top} does not match valency {valency}"
        )
    rest = np.delete(ev, 0)
    return float(np.abs(rest).max())


@dataclass
class SpectralBoundRow:
    index: int
    n: int
    valency: int
    second: float
    second_ratio: float
    valency_ratio: float
    within_slack: bool
    valency_ratio_in_range: bool


@dataclass
class SpectralBoundReport:
    q: int
    d: int
    slack: float
    rows: list[SpectralBoundRow]

    @property
    def passed(self) -> bool:
        return all(r.within_slack for r in self.rows)

    def violations(self) -> list[SpectralBoundRow]:
        return [r for r in self.rows if not r.within_slack]


def spectral_bound_report(field: Field, d: int, graphs, spectra,
                          slack: float = 3.0) -> SpectralBoundReport:
    """Second-eigenvalue ratios against q^{(d-2)/2} for every relation.

    The asymptotic constant in the bound is unquantified, so the slack is
    a reporting threshold (default 3.0), not ground truth.  The measured
    valency over q^{d-2} is flagged against [0.25, 2.0] for nonempty
    graphs; empty relations report a ratio of zero.
    """
    q = field.q
    scale = q ** ((d - 2) / 2)
    rows = []
    for graph, spectrum in zip(graphs, spectra):
        lam = second_eigenvalue(spectrum, graph.valency)
        v_ratio = graph.valency / q ** (d - 2)
        rows.append(
            SpectralBoundRow(
                index=graph.index,
                n=graph.n,
                valency=graph.valency,
                second=lam,
                second_ratio=lam / scale,
                valency_ratio=v_ratio,
                within_slack=lam / scale <= slack,
                valency_ratio_in_range=(0.25 <= v_ratio <= 2.0) if graph.valency else True,
            )
        )
    return SpectralBoundReport(q=q, d=d, slack=slack, rows=rows)
