"""Brute-force reference values for small graphs."""

from __future__ import annotations

import itertools

import networkx as nx
import numpy as np

from .errors import CapabilityError, ContractError
from .even_factor import EvenFactor
from .graph import Edge, Graph, is_connected, norm


def _nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def distance_matrix(g: Graph) -> np.ndarray:
    d = np.full((g.n, g.n), np.inf)
    for s, lengths in nx.all_pairs_shortest_path_length(_nx(g)):
        for t, k in lengths.items():
            d[s, t] = k
    return d


def optimal_graphic_tsp(g: Graph, limit: int = 14) -> int:
    """Shortest closed spanning walk, by Held-Karp on the shortest-path metric."""
    if g.n > limit:
        raise CapabilityError(f"Held-Karp is limited to n <= {limit} (got {g.n})")
    if not is_connected(g):
        raise ContractError("graph must be connected")
    n = g.n
    if n <= 1:
        return 0
    if n == 2:
        return 2
    d = distance_matrix(g)
    full = 1 << (n - 1)  # vertex 0 is the fixed start; bit i stands for vertex i + 1
    dp = np.full((full, n - 1), np.inf)
    for i in range(n - 1):
        dp[1 << i, i] = d[0, i + 1]
    inner = d[1:, 1:]
    for mask in range(1, full):
        row = dp[mask]
        if not np.isfinite(row).any():
            continue
        best = (row[:, None] + inner).min(axis=0)
        for k in range(n - 1):
            bit = 1 << k
            if not mask & bit and best[k] < dp[mask | bit, k]:
                dp[mask | bit, k] = best[k]
    return int((dp[full - 1] + d[1:, 0]).min())


def min_cost_even_factor(g: Graph, limit: int = 24) -> tuple[EvenFactor, int]:
    """Cheapest even factor, by walking the whole cycle space.

    In a cubic graph every even-degree spanning subgraph has degrees 0 and 2,
    so the cycle space is exactly the set of even factors.
    """
    if g.n > limit:
        raise CapabilityError(f"even factor enumeration is limited to n <= {limit} (got {g.n})")
    if not g.is_simple():
        raise ContractError("graph must be simple")
    basis = []
    for c in nx.cycle_basis(_nx(g)):
        basis.append(frozenset(norm(c[i], c[(i + 1) % len(c)]) for i in range(len(c))))
    best: tuple[int, tuple[Edge, ...]] | None = None
    for picks in itertools.product((0, 1), repeat=len(basis)):
        acc: set[Edge] = set()
        for take, c in zip(picks, basis):
            if take:
                acc ^= c
        if any(d > 2 for d in _degrees(g.n, acc)):
            continue
        cost = EvenFactor(g.n, frozenset(acc)).cost
        key = (cost, tuple(sorted(acc)))
        if best is None or key < best:
            best = key
    factor = EvenFactor(g.n, frozenset(best[1]))
    return factor, best[0]


def _degrees(n: int, edges) -> list[int]:
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return deg
