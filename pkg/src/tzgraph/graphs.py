"""Finite connected weighted graphs and their discrete calculus.

A graph carries a positive vertex measure ``mu`` and positive symmetric
edge weights ``w``.  For a function ``u`` on the vertices (a *vertex
field*, stored as a plain float array aligned with the fixed vertex
ordering) the discrete operators are

    laplacian(u)(x)        = (1/mu(x)) * sum_{y~x} w_xy (u(y) - u(x))
    gradient_norm_sq(u)(x) = (1/(2 mu(x))) * sum_{y~x} w_xy (u(y) - u(x))^2
    integrate(f)           = sum_x mu(x) f(x)
    average(f)             = integrate(f) / Vol(G),   Vol(G) = sum_x mu(x)

The Laplacian is negative semidefinite and self-adjoint for the
mu-weighted inner product; on a connected graph its kernel is exactly the
constants, so the smallest nonzero eigenvalue ``lambda1`` of ``-laplacian``
is positive.  Graphs are immutable after construction and safe to share;
every operation here is a pure function.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import AlignmentError, DisconnectedGraphError, GraphConstructionError

__all__ = [
    "WeightedGraph",
    "GraphConstants",
    "laplacian",
    "laplacian_matrix",
    "gradient_norm_sq",
    "integrate",
    "average",
    "graph_constants",
    "as_field",
]


class WeightedGraph:
    """Connected weighted graph with a positive vertex measure.

    Parameters
    ----------
    vertex_ids : sequence of hashable labels
        Distinct vertex labels; their order fixes the coordinate system
        used by every matrix and vertex field.
    mu : sequence of float
        Positive vertex measure, aligned with ``vertex_ids``.
    edges : iterable of (label, label, float)
        Undirected edges with positive weights, one entry per unordered
        pair.  Self-loops and duplicate pairs are rejected.

    Raises
    ------
    GraphConstructionError
        On empty/duplicate vertices, nonpositive data, self-loops,
        duplicate edges, or unknown endpoints.
    DisconnectedGraphError
        When the edge set does not connect all vertices; the error names
        two mutually unreachable labels.
    """

    def __init__(
        self,
        vertex_ids: Sequence[Hashable],
        mu: Sequence[float],
        edges: Iterable[tuple[Hashable, Hashable, float]],
    ):
        ids = tuple(vertex_ids)
        if not ids:
            raise GraphConstructionError("graph needs at least one vertex")
        if len(set(ids)) != len(ids):
            raise GraphConstructionError("duplicate vertex labels")
        index = {label: i for i, label in enumerate(ids)}

        mu_arr = np.array(mu, dtype=float)
        if mu_arr.shape != (len(ids),):
            raise GraphConstructionError(
                f"measure has {mu_arr.size} entries for {len(ids)} vertices"
            )
        if not np.all(np.isfinite(mu_arr)) or np.any(mu_arr <= 0.0):
            raise GraphConstructionError("vertex measure must be positive and finite")

        tails: list[int] = []
        heads: list[int] = []
        weights: list[float] = []
        seen: set[tuple[int, int]] = set()
        for a, b, w in edges:
            if a not in index or b not in index:
                missing = a if a not in index else b
                raise GraphConstructionError(f"edge references unknown vertex {missing!r}")
            i, j = index[a], index[b]
            if i == j:
                raise GraphConstructionError(f"self-loop at vertex {a!r}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise GraphConstructionError(f"duplicate edge {a!r}-{b!r}")
            seen.add(key)
            w = float(w)
            if not np.isfinite(w) or w <= 0.0:
                raise GraphConstructionError(f"edge {a!r}-{b!r} has nonpositive weight")
            tails.append(i)
            heads.append(j)
            weights.append(w)

        self.vertex_ids = ids
        self._index = index
        self.mu = mu_arr
        self.edge_tail = np.asarray(tails, dtype=int)
        self.edge_head = np.asarray(heads, dtype=int)
        self.edge_weight = np.asarray(weights, dtype=float)
        for arr in (self.mu, self.edge_tail, self.edge_head, self.edge_weight):
            arr.flags.writeable = False

        adjacency: list[list[int]] = [[] for _ in ids]
        for i, j in zip(tails, heads):
            adjacency[i].append(j)
            adjacency[j].append(i)
        self._adjacency = tuple(tuple(nbrs) for nbrs in adjacency)

        self._check_connected()
        self._neg_laplacian_cache: np.ndarray | None = None

    @property
    def n(self) -> int:
        return len(self.vertex_ids)

    @property
    def m(self) -> int:
        return self.edge_weight.size

    @property
    def volume(self) -> float:
        return float(self.mu.sum())

    @property
    def min_measure(self) -> float:
        return float(self.mu.min())

    @property
    def min_weight(self) -> float | None:
        """Smallest edge weight, or None for the single-vertex graph."""
        return float(self.edge_weight.min()) if self.m else None

    def index_of(self, label: Hashable) -> int:
        return self._index[label]

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self._adjacency[i]

    def _check_connected(self) -> None:
        reached = self._bfs_distances(0) >= 0
        if not reached.all():
            far = int(np.argmin(reached))
            raise DisconnectedGraphError(self.vertex_ids[0], self.vertex_ids[far])

    def _bfs_distances(self, source: int) -> np.ndarray:
        dist = np.full(self.n, -1, dtype=int)
        dist[source] = 0
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for w in self._adjacency[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return dist

    def diameter_edges(self) -> int:
        """Largest shortest-path edge count over all vertex pairs."""
        best = 0
        for source in range(self.n):
            best = max(best, int(self._bfs_distances(source).max()))
        return best

    def neg_laplacian(self) -> np.ndarray:
        """Matrix of ``-laplacian`` in the vertex ordering (read-only view)."""
        if self._neg_laplacian_cache is None:
            mat = -laplacian_matrix(self)
            mat.flags.writeable = False
            self._neg_laplacian_cache = mat
        return self._neg_laplacian_cache

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, m={self.m}, volume={self.volume:.6g})"


@dataclass(frozen=True)
class GraphConstants:
    """Scalar invariants entering the elliptic estimate.

    ``ell`` is the vertex count of the longest shortest path (graph
    diameter in edges plus one), so ``ell - 1`` dominates the edge count of
    any extremal path an individual field could select.  ``lambda1`` is the
    smallest eigenvalue of ``-laplacian`` on the mu-mean-zero subspace; it
    is None for the single-vertex graph, where the spectral constants are
    undefined.  ``w0`` is None exactly when the graph has no edges.
    """

    volume: float
    w0: float | None
    mu0: float
    ell: int
    lambda1: float | None


def as_field(g: WeightedGraph, values: Sequence[float] | np.ndarray) -> np.ndarray:
    """Validate a vertex field against the graph and return it as an array."""
    arr = np.asarray(values, dtype=float)
    if arr.shape != (g.n,):
        raise AlignmentError(f"field has shape {arr.shape}, graph has {g.n} vertices")
    if not np.all(np.isfinite(arr)):
        raise AlignmentError("field contains non-finite entries")
    return arr


def laplacian(g: WeightedGraph, u: Sequence[float] | np.ndarray) -> np.ndarray:
    """Pointwise weighted Laplacian: (1/mu) sum of w * neighbor differences."""
    u = as_field(g, u)
    out = np.zeros(g.n)
    diff = g.edge_weight * (u[g.edge_head] - u[g.edge_tail])
    np.add.at(out, g.edge_tail, diff)
    np.add.at(out, g.edge_head, -diff)
    return out / g.mu


def laplacian_matrix(g: WeightedGraph) -> np.ndarray:
    """Dense matrix L with L @ u == laplacian(g, u)."""
    n = g.n
    mat = np.zeros((n, n))
    for i, j, w in zip(g.edge_tail, g.edge_head, g.edge_weight):
        mat[i, j] += w / g.mu[i]
        mat[j, i] += w / g.mu[j]
        mat[i, i] -= w / g.mu[i]
        mat[j, j] -= w / g.mu[j]
    return mat


def gradient_norm_sq(g: WeightedGraph, u: Sequence[float] | np.ndarray) -> np.ndarray:
    """Squared gradient length: (1/(2 mu)) sum of w * squared differences."""
    u = as_field(g, u)
    out = np.zeros(g.n)
    sq = g.edge_weight * (u[g.edge_head] - u[g.edge_tail]) ** 2
    np.add.at(out, g.edge_tail, sq)
    np.add.at(out, g.edge_head, sq)
    return out / (2.0 * g.mu)


def integrate(g: WeightedGraph, f: Sequence[float] | np.ndarray) -> float:
    """Integral of a vertex field against the vertex measure."""
    return float(np.dot(g.mu, as_field(g, f)))


def average(g: WeightedGraph, f: Sequence[float] | np.ndarray) -> float:
    """Measure-weighted mean of a vertex field."""
    return integrate(g, f) / g.volume


def graph_constants(g: WeightedGraph) -> GraphConstants:
    """Volume, weight/measure minima, diameter-based ``ell``, and lambda1.

    The operator ``-laplacian`` is not symmetric under a nonuniform
    measure, so its spectrum is computed from the similarity transform by
    ``diag(sqrt(mu))``, which is symmetric with the same eigenvalues.
    """
    ell = g.diameter_edges() + 1
    if g.n == 1:
        return GraphConstants(g.volume, g.min_weight, g.min_measure, ell, None)
    sqrt_mu = np.sqrt(g.mu)
    sym = g.neg_laplacian() * sqrt_mu[:, None] / sqrt_mu[None, :]
    sym = 0.5 * (sym + sym.T)
    eigenvalues = np.linalg.eigvalsh(sym)
    lambda1 = float(eigenvalues[1])
    return GraphConstants(g.volume, g.min_weight, g.min_measure, ell, lambda1)
