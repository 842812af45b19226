"""Exact clique censuses, per-vertex incident-clique counts, and maximum clique.

All counters are Python ints (arbitrary precision): product-census identities
like k! * X_k * Y_k overflow 64 bits at moderate sizes, and the theory
comparisons need exact integers.

Enumeration uses vertices relabeled into degeneracy order with forward-only
neighbor bitmasks, so every clique is visited exactly once and search-tree
node counts are reproducible. Searches carry an explicit node budget; running
out raises BudgetExceededError rather than ever returning a silent partial
count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Optional

import numpy as np

from .errors import BudgetExceededError, InvalidParameterError
from .graphs import Graph, degeneracy_order
from .products import DEFAULT_VERTEX_CAP, tensor_product

__all__ = [
    "CliqueCensus",
    "MaxCliqueResult",
    "DEFAULT_NODE_BUDGET",
    "count_k_cliques",
    "per_vertex_clique_counts",
    "incident_clique_count",
    "max_clique",
    "tensor_census_identity_check",
]

#: Default search-node budget. Exhaustion is a hard error: silently truncated
#: counts would corrupt every statistical comparison downstream.
DEFAULT_NODE_BUDGET = 10**9


class _Budget:
    __slots__ = ("remaining",)

    def __init__(self, limit: int):
        self.remaining = limit

    def spend(self, amount: int = 1) -> None:
        self.remaining -= amount
        if self.remaining < 0:
            raise BudgetExceededError(
                "clique search exceeded its node budget; rerun with a larger budget"
            )


@dataclass
class CliqueCensus:
    """Exact k-clique counts, optionally with per-vertex incident counts.

    counts[k] is the number of k-cliques; keys with zero count are omitted
    (use .count(k)). per_vertex, when present, maps k to a tuple whose v-th
    entry is the number of k-cliques lying entirely inside N(v).
    """

    counts: dict[int, int]
    max_k_evaluated: int
    per_vertex: Optional[dict[int, tuple[int, ...]]] = field(default=None)

    def count(self, k: int) -> int:
        return self.counts.get(k, 0)

    def largest_k(self) -> int:
        return max(self.counts) if self.counts else 0


@dataclass(frozen=True)
class MaxCliqueResult:
    omega: int
    witness: tuple[int, ...]
    nodes_explored: int


def _forward_rows(g: Graph) -> tuple[list[int], list[int]]:
    """Relabel into degeneracy order; return (forward-neighbor masks, order).

    In the relabeled space, mask i has bit j set iff i ~ j and j > i.
    """
    order = degeneracy_order(g)
    relabeled = g.relabel(order)
    rows = relabeled.bitrows()
    fwd = [rows[i] >> (i + 1) << (i + 1) for i in range(len(rows))]
    return fwd, order


def _count_extensions(fwd: list[int], cand: int, depth: int, k_max: int,
                      counts: list[int], budget: _Budget) -> None:
    """Add every clique extending the current prefix through `cand`.

    `cand` holds vertices adjacent to the whole prefix and above its largest
    member, so each clique is counted exactly once.
    """
    budget.spend(bin(cand).count("1"))
    t = cand
    next_depth = depth + 1
    while t:
        low = t & -t
        t ^= low
        counts[next_depth] += 1
        if next_depth < k_max:
            nxt = cand & fwd[low.bit_length() - 1]
            if nxt:
                _count_extensions(fwd, nxt, next_depth, k_max, counts, budget)


def count_k_cliques(
    g: Graph,
    k_max: int,
    budget: int = DEFAULT_NODE_BUDGET,
    per_vertex: bool = False,
) -> CliqueCensus:
    """Exact census of k-cliques for every k <= k_max.

    With per_vertex=True, also tabulates A_k(v) (k-cliques inside N(v)) for
    every vertex and every k <= k_max - 1, tied to the census by the handshake
    identity sum_v A_k(v) = (k+1) * counts[k+1].
    """
    if k_max < 1:
        raise InvalidParameterError(f"k_max must be >= 1, got {k_max}")
    n = g.n
    tracker = _Budget(budget)
    counts = [0] * (k_max + 1)
    if n:
        counts[1] = n
    if k_max >= 2 and n >= 2:
        fwd, _ = _forward_rows(g)
        for i in range(n):
            cand = fwd[i]
            if cand:
                _count_extensions(fwd, cand, 1, k_max, counts, tracker)
    census = CliqueCensus(
        counts={k: c for k, c in enumerate(counts) if k >= 1 and c > 0},
        max_k_evaluated=k_max,
    )
    if per_vertex:
        census.per_vertex = {
            k: per_vertex_clique_counts(g, k, budget=tracker.remaining)
            for k in range(1, k_max)
        }
    return census


def _neighborhood_masks(g: Graph) -> tuple[int, ...]:
    return g.bitrows()


def incident_clique_count(g: Graph, v: int, k: int, budget: int = DEFAULT_NODE_BUDGET) -> int:
    """A_k(v): the number of k-cliques contained entirely in N(v)."""
    g._check_vertex(v)
    if k < 1:
        raise InvalidParameterError(f"k must be >= 1, got {k}")
    if k == 1:
        return g.degree(v)
    fwd, order = _forward_rows(g)
    pos = [0] * g.n
    for i, u in enumerate(order):
        pos[u] = i
    mask = 0
    for u in np.flatnonzero(g.adj[v]).tolist():
        mask |= 1 << pos[u]
    return _count_in_mask(fwd, mask, k, _Budget(budget))


def _count_in_mask(fwd: list[int], mask: int, k: int, budget: _Budget) -> int:
    """Number of k-cliques whose vertices all lie in `mask` (relabeled space)."""
    counts = [0] * (k + 1)
    t = mask
    while t:
        low = t & -t
        t ^= low
        counts[1] += 1
        if k >= 2:
            cand = mask & fwd[low.bit_length() - 1]
            if cand:
                _count_extensions(fwd, cand, 1, k, counts, budget)
    return counts[k]


def per_vertex_clique_counts(
    g: Graph, k: int, budget: int = DEFAULT_NODE_BUDGET
) -> tuple[int, ...]:
    """A_k(v) for every vertex v.

    k=2 (edges among neighbors) goes through an exact matrix-product fast
    path; counts stay below 2^53 at supported sizes so float BLAS is exact.
    """
    if k < 1:
        raise InvalidParameterError(f"k must be >= 1, got {k}")
    n = g.n
    if n == 0:
        return ()
    if k == 1:
        return tuple(int(d) for d in g.degrees())
    if k == 2:
        a = g.adj.astype(np.float64)
        common = a @ a
        doubled = (common * a).sum(axis=1)  # each neighbor-edge counted twice
        return tuple(int(round(x)) // 2 for x in doubled.tolist())
    fwd, order = _forward_rows(g)
    pos = [0] * n
    for i, u in enumerate(order):
        pos[u] = i
    tracker = _Budget(budget)
    out = []
    for v in range(n):
        mask = 0
        for u in np.flatnonzero(g.adj[v]).tolist():
            mask |= 1 << pos[u]
        out.append(_count_in_mask(fwd, mask, k, tracker))
    return tuple(out)


def _greedy_seed_clique(rows: tuple[int, ...], n: int) -> list[int]:
    """Cheap initial lower bound: greedy cliques grown from a few late roots."""
    best: list[int] = []
    for start in range(n - 1, max(-1, n - 6), -1):
        clique = [start]
        cand = rows[start]
        while cand:
            v = (cand & -cand).bit_length() - 1
            clique.append(v)
            cand &= rows[v]
        if len(clique) > len(best):
            best = clique
    return best


def max_clique(g: Graph, budget: int = DEFAULT_NODE_BUDGET) -> MaxCliqueResult:
    """Exact maximum clique by branch and bound.

    Candidates are greedily colored at every node and processed in reverse
    color order; a branch is cut when |current| + color bound cannot beat the
    incumbent. Vertices are pre-sorted in degeneracy order, which keeps the
    search tree (and nodes_explored) reproducible.
    """
    if g.n < 1:
        raise InvalidParameterError("max_clique needs at least one vertex")
    order = degeneracy_order(g)
    relabeled = g.relabel(order)
    rows = relabeled.bitrows()
    n = g.n

    best_clique = _greedy_seed_clique(rows, n)
    best = len(best_clique)
    nodes = 0
    tracker = _Budget(budget)

    def expand(stack: list[int], pool: int) -> None:
        nonlocal best, best_clique, nodes
        nodes += 1
        tracker.spend()
        ordered: list[int] = []
        bounds: list[int] = []
        color = 0
        rem = pool
        while rem:
            color += 1
            avail = rem
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                avail ^= low
                avail &= ~rows[v]
                rem ^= low
                ordered.append(v)
                bounds.append(color)
        depth = len(stack)
        for i in range(len(ordered) - 1, -1, -1):
            if depth + bounds[i] <= best:
                return
            v = ordered[i]
            sub = pool & rows[v]
            stack.append(v)
            if sub:
                expand(stack, sub)
            elif depth + 1 > best:
                best = depth + 1
                best_clique = stack.copy()
            stack.pop()
            pool &= ~(1 << v)

    if n:
        expand([], (1 << n) - 1)
    witness = tuple(sorted(order[v] for v in best_clique))
    return MaxCliqueResult(omega=best, witness=witness, nodes_explored=nodes)


def tensor_census_identity_check(
    g: Graph,
    h: Graph,
    k: int,
    budget: int = DEFAULT_NODE_BUDGET,
    vertex_cap: int = DEFAULT_VERTEX_CAP,
) -> bool:
    """True iff the tensor product has exactly k! * X_k * Y_k k-cliques.

    Left side counted directly on the materialized product; right side from
    the factor censuses. Exact integer arithmetic throughout.
    """
    product, _ = tensor_product(g, h, vertex_cap=vertex_cap)
    z_k = count_k_cliques(product, k, budget=budget).count(k)
    x_k = count_k_cliques(g, k, budget=budget).count(k)
    y_k = count_k_cliques(h, k, budget=budget).count(k)
    return z_k == factorial(k) * x_k * y_k
