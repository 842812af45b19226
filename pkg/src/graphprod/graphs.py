"""Graph representation, deterministic constructions, and random graph generators.

Graphs are simple and undirected, stored as a dense boolean adjacency matrix
(symmetric, empty diagonal). Vertices are 0-indexed integers. All randomness
flows through counter-based Philox streams keyed by (seed, stream), so every
generator is a pure function of its spec and seed: identical inputs reproduce
bit-identical graphs across runs and machines.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, replace
from typing import Iterable, Optional

import networkx as nx
import numpy as np
from numpy.random import Generator, Philox

from .errors import (
    InvalidParameterError,
    UnachievableDensityError,
    VertexRangeError,
)

__all__ = [
    "Graph",
    "RngSeed",
    "GeneratorSpec",
    "MODELS",
    "DEFAULT_REWIRE_PROBABILITY",
    "generate",
    "density_calibrated_spec",
    "write_edge_list",
    "read_edge_list",
    "degeneracy_order",
]

#: Canonical model tags accepted by GeneratorSpec.
MODELS = (
    "erdos-renyi",
    "random-regular",
    "watts-strogatz",
    "barabasi-albert",
    "complete",
    "path",
    "empty",
)

#: Rewiring probability used by density-calibrated small-world specs.
#: Fixed repo-wide so experiment results replicate.
DEFAULT_REWIRE_PROBABILITY = 0.3


class Graph:
    """Simple undirected graph over vertices 0..n-1.

    The adjacency matrix is validated (square, boolean, symmetric, empty
    diagonal) on every construction path and then frozen, so instances are
    immutable and safe to share across workers.
    """

    __slots__ = ("adj", "label", "_bitrows")

    def __init__(self, adj, label: Optional[str] = None):
        adj = np.ascontiguousarray(adj, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise InvalidParameterError(f"adjacency must be square, got shape {adj.shape}")
        if adj.shape[0] and np.diagonal(adj).any():
            raise InvalidParameterError("adjacency diagonal must be empty (simple graph)")
        if not np.array_equal(adj, adj.T):
            raise InvalidParameterError("adjacency must be symmetric (undirected graph)")
        adj.setflags(write=False)
        object.__setattr__(self, "adj", adj)
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "_bitrows", None)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    @property
    def edge_count(self) -> int:
        return int(self.adj.sum()) // 2

    @property
    def density(self) -> float:
        if self.n < 2:
            return 0.0
        return self.edge_count / (self.n * (self.n - 1) / 2)

    def degrees(self) -> np.ndarray:
        """Degree of every vertex as an int64 array."""
        return self.adj.sum(axis=1).astype(np.int64)

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise VertexRangeError(f"vertex {v} out of range [0, {self.n})")

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return int(self.adj[v].sum())

    def neighborhood(self, v: int) -> set[int]:
        """Open neighborhood N(v); never contains v itself."""
        self._check_vertex(v)
        return set(np.flatnonzero(self.adj[v]).tolist())

    def edges(self) -> list[tuple[int, int]]:
        """Sorted edge list with u < v."""
        iu, iv = np.nonzero(np.triu(self.adj, k=1))
        return list(zip(iu.tolist(), iv.tolist()))

    def bitrows(self) -> tuple[int, ...]:
        """Adjacency rows as Python int bitmasks (bit j set iff j ~ i).

        Cached; the backbone of the clique routines, where bitwise AND plus
        popcount does the neighborhood intersections.
        """
        if self._bitrows is None:
            if self.n == 0:
                rows: tuple[int, ...] = ()
            else:
                packed = np.packbits(self.adj, axis=1, bitorder="little")
                rows = tuple(
                    int.from_bytes(packed[i].tobytes(), "little") for i in range(self.n)
                )
            object.__setattr__(self, "_bitrows", rows)
        return self._bitrows

    def relabel(self, order: Iterable[int]) -> "Graph":
        """Graph with vertex i of the result being `order[i]` of self."""
        perm = np.asarray(list(order), dtype=np.int64)
        if sorted(perm.tolist()) != list(range(self.n)):
            raise InvalidParameterError("order must be a permutation of 0..n-1")
        return Graph(self.adj[np.ix_(perm, perm)], label=self.label)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.adj, other.adj)

    def __hash__(self):
        return hash((self.n, self.adj.tobytes()))

    def __repr__(self) -> str:
        tag = f" {self.label!r}" if self.label else ""
        return f"<Graph{tag} n={self.n} m={self.edge_count}>"

    # -- deterministic constructions ------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], label=None) -> "Graph":
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise VertexRangeError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise InvalidParameterError(f"loop ({u},{v}) not allowed")
            adj[u, v] = adj[v, u] = True
        return cls(adj, label=label)

    @classmethod
    def complete(cls, n: int, label=None) -> "Graph":
        adj = np.ones((n, n), dtype=bool)
        if n:
            np.fill_diagonal(adj, False)
        return cls(adj, label=label)

    @classmethod
    def empty(cls, n: int, label=None) -> "Graph":
        return cls(np.zeros((n, n), dtype=bool), label=label)

    @classmethod
    def path(cls, n: int, label=None) -> "Graph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)], label=label)

    @classmethod
    def cycle(cls, n: int, label=None) -> "Graph":
        if n < 3:
            raise InvalidParameterError("cycle needs n >= 3")
        edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
        return cls.from_edges(n, edges, label=label)


@dataclass(frozen=True)
class RngSeed:
    """Key of a counter-based Philox random stream.

    Identical (seed, stream) pairs yield bit-identical generator output, and
    distinct stream indices give statistically independent streams, so
    replicated experiments can be split across workers without changing the
    sampled graphs.
    """

    seed: int
    stream: int = 0

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise InvalidParameterError("seed must fit in 64 bits")
        if not 0 <= self.stream < 2**64:
            raise InvalidParameterError("stream must fit in 64 bits")

    def generator(self) -> Generator:
        return Generator(Philox(key=np.array([self.seed, self.stream], dtype=np.uint64)))

    def child(self, offset: int) -> "RngSeed":
        """Substream at stream + offset (used to fan out replicas)."""
        return replace(self, stream=self.stream + offset)


@dataclass(frozen=True)
class GeneratorSpec:
    """Model tag plus the parameters of one random-graph construction.

    Parameter fields are model-specific: p for erdos-renyi, d for
    random-regular, (k, beta) for watts-strogatz, m for barabasi-albert.
    Deterministic models (complete, path, empty) take no parameters.
    """

    model: str
    n: int
    p: Optional[float] = None
    d: Optional[int] = None
    k: Optional[int] = None
    beta: Optional[float] = None
    m: Optional[int] = None

    def validate(self) -> None:
        if self.model not in MODELS:
            raise InvalidParameterError(f"unknown model {self.model!r}; expected one of {MODELS}")
        if self.n < 0:
            raise InvalidParameterError("n must be non-negative")
        if self.model == "erdos-renyi":
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise InvalidParameterError(f"erdos-renyi needs 0 <= p <= 1, got {self.p}")
        elif self.model == "random-regular":
            if self.d is None or not 0 <= self.d < max(self.n, 1):
                raise InvalidParameterError(f"random-regular needs 0 <= d < n, got d={self.d}")
            if (self.d * self.n) % 2 != 0:
                raise InvalidParameterError(f"d*n must be even, got d={self.d}, n={self.n}")
        elif self.model == "watts-strogatz":
            if self.k is None or self.k % 2 != 0 or not 0 <= self.k < max(self.n, 1):
                raise InvalidParameterError(
                    f"watts-strogatz needs even k with 0 <= k < n, got k={self.k}"
                )
            if self.beta is None or not 0.0 <= self.beta <= 1.0:
                raise InvalidParameterError(f"watts-strogatz needs 0 <= beta <= 1, got {self.beta}")
        elif self.model == "barabasi-albert":
            if self.m is None or not 1 <= self.m < max(self.n, 1):
                raise InvalidParameterError(f"barabasi-albert needs 1 <= m < n, got m={self.m}")

    def describe(self) -> str:
        parts = [f"model={self.model}", f"n={self.n}"]
        for name in ("p", "d", "k", "beta", "m"):
            value = getattr(self, name)
            if value is not None:
                parts.append(f"{name}={value}")
        return " ".join(parts)


def _erdos_renyi(n: int, p: float, rng: Generator) -> np.ndarray:
    adj = np.zeros((n, n), dtype=bool)
    if n >= 2:
        iu, iv = np.triu_indices(n, k=1)
        present = rng.random(iu.shape[0]) < p
        adj[iu[present], iv[present]] = True
        adj |= adj.T
    return adj


def _from_networkx(g: "nx.Graph", n: int) -> np.ndarray:
    adj = np.zeros((n, n), dtype=bool)
    for u, v in g.edges():
        if u != v:
            adj[u, v] = adj[v, u] = True
    return adj


def generate(spec: GeneratorSpec, seed: RngSeed) -> Graph:
    """Sample (or construct) a graph from `spec`, deterministically in `seed`."""
    spec.validate()
    n = spec.n
    label = spec.model
    if spec.model == "erdos-renyi":
        return Graph(_erdos_renyi(n, spec.p, seed.generator()), label=label)
    if spec.model == "complete":
        return Graph.complete(n, label=label)
    if spec.model == "path":
        return Graph.path(n, label=label)
    if spec.model == "empty":
        return Graph.empty(n, label=label)
    if spec.model == "random-regular":
        if spec.d == 0 or n == 0:
            return Graph.empty(n, label=label)
        g = nx.random_regular_graph(spec.d, n, seed=seed.generator())
        return Graph(_from_networkx(g, n), label=label)
    if spec.model == "watts-strogatz":
        if spec.k < 2:
            return Graph.empty(n, label=label)
        g = nx.watts_strogatz_graph(n, spec.k, spec.beta, seed=seed.generator())
        return Graph(_from_networkx(g, n), label=label)
    if spec.model == "barabasi-albert":
        # Seed clique on m+1 vertices: realized edge count is then exactly
        # m*n - C(m+1,2), matching the density calibration below.
        initial = nx.complete_graph(spec.m + 1)
        g = nx.barabasi_albert_graph(n, spec.m, seed=seed.generator(), initial_graph=initial)
        return Graph(_from_networkx(g, n), label=label)
    raise InvalidParameterError(f"unknown model {spec.model!r}")


#: Largest tolerated |realized density - target| for calibrated specs.
DENSITY_TOLERANCE = 0.05


def density_calibrated_spec(model: str, n: int, target_density: float) -> GeneratorSpec:
    """Pick model parameters whose edge density best matches `target_density`.

    Exact for erdos-renyi; for the discrete-parameter models the closest
    admissible parameter is chosen (ties broken toward the smaller value) and
    an UnachievableDensityError is raised if the best deviation exceeds
    DENSITY_TOLERANCE.
    """
    if not 0.0 < target_density < 1.0:
        raise InvalidParameterError(f"target density must be in (0, 1), got {target_density}")
    if n < 4:
        raise InvalidParameterError(f"density calibration needs n >= 4, got n={n}")

    if model == "erdos-renyi":
        return GeneratorSpec(model=model, n=n, p=target_density)

    pairs_total = n * (n - 1) / 2

    if model == "random-regular":
        candidates = [d for d in range(n) if (d * n) % 2 == 0]
        d_best = min(candidates, key=lambda d: (abs(d / (n - 1) - target_density), d))
        deviation = abs(d_best / (n - 1) - target_density)
        if deviation > DENSITY_TOLERANCE:
            raise UnachievableDensityError(
                f"no regular degree within {DENSITY_TOLERANCE} of density "
                f"{target_density} at n={n} (best d={d_best}, off by {deviation:.4f})"
            )
        return GeneratorSpec(model=model, n=n, d=d_best)

    if model == "watts-strogatz":
        k = 2 * round(target_density * (n - 1) / 2)
        largest_even = n - 1 if (n - 1) % 2 == 0 else n - 2
        k = max(2, min(k, largest_even))
        deviation = abs(k / (n - 1) - target_density)
        if k < 2 or deviation > DENSITY_TOLERANCE:
            raise UnachievableDensityError(
                f"no even ring degree within {DENSITY_TOLERANCE} of density "
                f"{target_density} at n={n} (best k={k}, off by {deviation:.4f})"
            )
        return GeneratorSpec(
            model=model, n=n, k=k, beta=DEFAULT_REWIRE_PROBABILITY
        )

    if model == "barabasi-albert":
        def ba_density(m: int) -> float:
            return (m * n - m * (m + 1) / 2) / pairs_total

        m_best = min(range(1, n), key=lambda m: (abs(ba_density(m) - target_density), m))
        deviation = abs(ba_density(m_best) - target_density)
        if deviation > DENSITY_TOLERANCE:
            raise UnachievableDensityError(
                f"no attachment count within {DENSITY_TOLERANCE} of density "
                f"{target_density} at n={n} (best m={m_best}, off by {deviation:.4f})"
            )
        return GeneratorSpec(model=model, n=n, m=m_best)

    if model in ("complete", "path", "empty"):
        realized = {"complete": 1.0, "path": (n - 1) / pairs_total, "empty": 0.0}[model]
        if abs(realized - target_density) > DENSITY_TOLERANCE:
            raise UnachievableDensityError(
                f"{model} graph has fixed density {realized:.4f}, not {target_density}"
            )
        return GeneratorSpec(model=model, n=n)

    raise InvalidParameterError(f"unknown model {model!r}; expected one of {MODELS}")


# -- edge-list text format ----------------------------------------------
#
# First line "n m", then m lines "u v" with u < v. The reader rejects loops,
# duplicate edges, malformed lines, and out-of-range indices.


def write_edge_list(g: Graph, path) -> None:
    edges = g.edges()
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{g.n} {len(edges)}\n")
        for u, v in edges:
            fh.write(f"{u} {v}\n")


def read_edge_list(path, label: Optional[str] = None) -> Graph:
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise InvalidParameterError(f"{path}: header must be 'n m'")
        try:
            n, m = int(header[0]), int(header[1])
        except ValueError as exc:
            raise InvalidParameterError(f"{path}: non-integer header") from exc
        if n < 0 or m < 0:
            raise InvalidParameterError(f"{path}: negative n or m")
        adj = np.zeros((n, n), dtype=bool)
        for lineno in range(m):
            parts = fh.readline().split()
            if len(parts) != 2:
                raise InvalidParameterError(f"{path}: edge line {lineno + 2} malformed")
            u, v = int(parts[0]), int(parts[1])
            if u == v:
                raise InvalidParameterError(f"{path}: loop ({u},{v}) rejected")
            if not (0 <= u < v < n):
                raise InvalidParameterError(
                    f"{path}: edge ({u},{v}) must satisfy 0 <= u < v < n={n}"
                )
            if adj[u, v]:
                raise InvalidParameterError(f"{path}: duplicate edge ({u},{v})")
            adj[u, v] = adj[v, u] = True
        if fh.readline().strip():
            raise InvalidParameterError(f"{path}: trailing content after {m} edges")
    return Graph(adj, label=label)


def degeneracy_order(g: Graph) -> list[int]:
    """Vertices in degeneracy order (repeatedly remove a minimum-degree vertex).

    Ties break toward the smaller vertex id, so the order (and everything
    seeded by it, e.g. clique-search node counts) is reproducible.
    """
    n = g.n
    deg = g.degrees().tolist()
    neighbors = [np.flatnonzero(g.adj[i]).tolist() for i in range(n)]
    removed = [False] * n
    heap = [(deg[i], i) for i in range(n)]
    heapq.heapify(heap)
    order: list[int] = []
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != deg[v]:
            continue
        removed[v] = True
        order.append(v)
        for w in neighbors[v]:
            if not removed[w]:
                deg[w] -= 1
                heapq.heappush(heap, (deg[w], w))
    return order
