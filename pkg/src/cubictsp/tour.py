"""Turn an even factor into a closed spanning walk and check walks."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from .errors import ContractError, InvariantError
from .even_factor import EvenFactor
from .graph import Edge, Graph, norm


def tour_bound(n: int) -> Fraction:
    """The guaranteed length: 13n/10 - 2 from eight vertices on, n below."""
    return Fraction(13 * n, 10) - 2 if n >= 8 else Fraction(n)


@dataclass(frozen=True)
class Tour:
    walk: tuple[int, ...]
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def length(self) -> int:
        return len(self.walk) - 1

    def to_json(self) -> dict:
        return {"length": self.length, "walk": list(self.walk), **self.meta}


def factor_components(factor: EvenFactor) -> list[list[int]]:
    comps = [sorted(c) for c in factor.circuits] + [[v] for v in factor.isolated]
    return sorted(comps)


def spanning_tree_edges(g: Graph, factor: EvenFactor) -> list[Edge]:
    """BFS tree of the component graph G/F, rooted at the component of vertex 0."""
    comps = factor_components(factor)
    where = {v: i for i, c in enumerate(comps) for v in c}
    root = where[0]
    seen = {root}
    queue = deque([root])
    tree = []
    while queue:
        i = queue.popleft()
        for v in comps[i]:
            for w in g.neighbors(v):
                j = where[w]
                if j not in seen:
                    seen.add(j)
                    tree.append(norm(v, w))
                    queue.append(j)
    if len(seen) != len(comps):
        raise InvariantError("component graph is disconnected", sorted(set(range(len(comps))) - seen))
    return tree


def build_tour(g: Graph, factor: EvenFactor, meta: dict | None = None) -> Tour:
    """Eulerian circuit of F plus the doubled spanning tree of G/F, from vertex 0."""
    factor.validate(g)
    if g.n == 0:
        raise ContractError("empty graph")
    tree = spanning_tree_edges(g, factor)
    if g.n == 1:
        return Tour((0,), dict(meta or {}))
    h = nx.MultiGraph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(sorted(factor.edges))
    h.add_edges_from(tree + tree)
    walk = [u for u, _ in nx.eulerian_circuit(h, source=0)]
    walk.append(walk[0])
    tour = Tour(tuple(walk), dict(meta or {}))
    expected = len(factor.edges) + 2 * len(tree)
    if tour.length != expected or tour.length != factor.cost - 2:
        raise InvariantError(f"tour length {tour.length} differs from c(F) - 2 = {factor.cost - 2}")
    report = validate_tour(g, tour)
    if not report.closed or not report.adjacent or report.missing:
        raise InvariantError("assembled walk is not a closed spanning walk", report.to_json())
    return tour


@dataclass
class TourReport:
    closed: bool
    adjacent: bool
    missing: list[int]
    length: int
    bound: Fraction
    bad_step: tuple[int, int] | None = None

    @property
    def within_bound(self) -> bool:
        return self.length <= self.bound

    @property
    def ok(self) -> bool:
        return self.closed and self.adjacent and not self.missing and self.within_bound

    @property
    def slack(self) -> Fraction:
        return self.bound - self.length

    def to_json(self) -> dict:
        out = {
            "ok": self.ok,
            "closed": self.closed,
            "adjacent": self.adjacent,
            "missing": self.missing,
            "length": self.length,
            "bound": str(self.bound),
            "slack": str(self.slack),
        }
        if self.bad_step is not None:
            out["bad_step"] = list(self.bad_step)
        return out


def validate_tour(g: Graph, tour: Tour | list[int] | tuple[int, ...], bound: Fraction | None = None) -> TourReport:
    """Closed, adjacent steps, every vertex visited, length within ``bound``."""
    walk = tuple(tour.walk if isinstance(tour, Tour) else tour)
    if bound is None:
        bound = tour_bound(g.n)
    closed = len(walk) >= 1 and walk[0] == walk[-1]
    bad = None
    for a, b in zip(walk, walk[1:]):
        if not (0 <= a < g.n and 0 <= b < g.n) or not g.has_edge(a, b):
            bad = (a, b)
            break
    missing = sorted(set(range(g.n)) - set(walk))
    return TourReport(closed, bad is None, missing, max(len(walk) - 1, 0), Fraction(bound), bad)
