"""Generate every bridgeless simple cubic graph up to a given order.

Graphs on n + 2 vertices come from graphs on n vertices by edge insertion:
subdivide two edges (or one edge twice) and join the two new vertices.
Loopless multigraphs are kept as intermediates.  Isomorphic copies are
removed with pynauty certificates when pynauty is installed (the multigraph
is encoded by subdividing every edge), otherwise with a Weisfeiler-Lehman
hash followed by an exact networkx isomorphism test.  Starting from the
theta multigraph, edge insertion reaches every bridgeless cubic multigraph,
so the bridgeless counts are complete (1, 2, 5, 18, 81, 480 for n = 4..14).
Graphs with a bridge would need looped intermediates and are not produced.

Usage: python3 tools/make_catalog.py [--max-n 14] [--out tests/data]
Writes cubic_bridgeless_n<N>.g6 (one graph6 string per line) and prints the
count per order.
"""

from __future__ import annotations

import argparse
import itertools
from pathlib import Path

import networkx as nx

from cubictsp.graph import Graph, find_bridges, to_graph6


def _to_nx(edges: list[tuple[int, int]], n: int) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(n))
    for u, v in edges:
        if h.has_edge(u, v):
            h[u][v]["mult"] += 1
        else:
            h.add_edge(u, v, mult=1)
    for u, v in h.edges:
        h[u][v]["label"] = str(h[u][v]["mult"])
    return h


def _same_mult(a, b) -> bool:
    return a["mult"] == b["mult"]


def _certificate(n: int, edges: list[tuple[int, int]]) -> bytes:
    import pynauty

    adj: dict[int, list[int]] = {v: [] for v in range(n + len(edges))}
    for k, (u, v) in enumerate(edges):
        adj[n + k] = [u, v]
    g = pynauty.Graph(n + len(edges), adjacency_dict=adj,
                      vertex_coloring=[set(range(n)), set(range(n, n + len(edges)))])
    return pynauty.certificate(g)


class CertSet:
    """Multigraphs up to isomorphism, keyed by canonical certificate."""

    def __init__(self):
        self.seen: set[bytes] = set()
        self.items: list[tuple[int, list[tuple[int, int]]]] = []

    def add(self, n: int, edges: list[tuple[int, int]]) -> bool:
        key = _certificate(n, edges)
        if key in self.seen:
            return False
        self.seen.add(key)
        self.items.append((n, edges))
        return True


class IsoSet:
    """Multigraphs up to isomorphism, bucketed by WL hash."""

    def __init__(self):
        self.buckets: dict[str, list[nx.Graph]] = {}
        self.items: list[tuple[int, list[tuple[int, int]]]] = []

    def add(self, n: int, edges: list[tuple[int, int]]) -> bool:
        h = _to_nx(edges, n)
        key = nx.weisfeiler_lehman_graph_hash(h, edge_attr="label", iterations=3)
        bucket = self.buckets.setdefault(key, [])
        for other in bucket:
            if nx.is_isomorphic(h, other, edge_match=_same_mult):
                return False
        bucket.append(h)
        self.items.append((n, edges))
        return True


def insertions(n: int, edges: list[tuple[int, int]]):
    """All results of one edge insertion, as (n + 2, edges)."""
    x, y = n, n + 1
    m = len(edges)
    for i, j in itertools.combinations_with_replacement(range(m), 2):
        rest = [e for k, e in enumerate(edges) if k not in (i, j)]
        a, b = edges[i]
        if i == j:
            new = rest + [(a, x), (x, y), (y, b), (x, y)]
        else:
            c, d = edges[j]
            new = rest + [(a, x), (x, b), (c, y), (y, d), (x, y)]
        yield n + 2, [tuple(sorted(e)) for e in new]


def _store():
    try:
        import pynauty  # noqa: F401
    except ImportError:
        return IsoSet
    return CertSet


def generate(max_n: int) -> dict[int, list[Graph]]:
    store = _store()
    level = store()
    level.add(2, [(0, 1)] * 3)  # the theta multigraph
    simple: dict[int, list[Graph]] = {}
    n = 2
    while n < max_n:
        nxt = store()
        for k, edges in level.items:
            for kk, new in insertions(k, edges):
                nxt.add(kk, new)
        level = nxt
        n += 2
        simple[n] = [Graph(k, e) for k, e in level.items if Graph(k, e).is_simple()]
    return simple


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=14)
    ap.add_argument("--out", default="tests/data")
    args = ap.parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for n, graphs in sorted(generate(args.max_n).items()):
        bridgeless = [g for g in graphs if not find_bridges(g)]
        lines = sorted(to_graph6(g) for g in bridgeless)
        if lines:
            (out / f"cubic_bridgeless_n{n}.g6").write_text("\n".join(lines) + "\n")
        print(f"n={n}: {len(bridgeless)} bridgeless")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
