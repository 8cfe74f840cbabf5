"""Choose the starting 2-factor and certify the boundary inequality."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import CapabilityError, ContractError, InvariantError
from .graph import Edge, Graph, norm
from .matching import Matching, decompose_uniform_third, enumerate_perfect_matchings, meets_cuts_once
from .structure import GoodCollection, bucket_counts, enumerate_3_edge_cuts


@dataclass(frozen=True)
class TwoFactor:
    edges: frozenset[Edge]
    circuits: tuple[tuple[int, ...], ...]

    @property
    def lengths(self) -> list[int]:
        return [len(c) for c in self.circuits]

    def has_triangle(self) -> bool:
        return any(len(c) == 3 for c in self.circuits)


def cycle_decomposition(n: int, edges: Iterable[Edge]) -> list[tuple[int, ...]]:
    """Split a 2-regular edge set into canonical circuits.

    Each circuit starts at its smallest vertex and continues towards the
    smaller of that vertex's two neighbours.  Vertices not covered by the edges
    are ignored.
    """
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    for v, nb in adj.items():
        if len(nb) != 2:
            raise InvariantError(f"vertex {v} has degree {len(nb)} in a 2-regular edge set", v)
    seen: set[int] = set()
    out = []
    for s in sorted(adj):
        if s in seen:
            continue
        cyc = [s]
        seen.add(s)
        prev, cur = s, min(adj[s])
        while cur != s:
            cyc.append(cur)
            seen.add(cur)
            a, b = adj[cur]
            prev, cur = cur, (b if a == prev else a)
        out.append(tuple(cyc))
    return out


def two_factor_from_matching(g: Graph, m: Matching) -> TwoFactor:
    """The complement of a perfect matching in a cubic graph."""
    if not g.is_cubic() or not m.is_perfect(g):
        raise ContractError("need a perfect matching of a cubic graph")
    rest = frozenset(e for e in g.edge_set() if e not in m.edge_set)
    return TwoFactor(rest, tuple(cycle_decomposition(g.n, rest)))


def two_factor_from_edges(g: Graph, edges: Iterable[Edge]) -> TwoFactor:
    es = frozenset(norm(*e) for e in edges)
    deg = [0] * g.n
    for u, v in es:
        if not g.has_edge(u, v):
            raise ContractError(f"edge {(u, v)} is not in the graph")
        deg[u] += 1
        deg[v] += 1
    if any(d != 2 for d in deg):
        raise ContractError("edge set is not a 2-factor")
    return TwoFactor(es, tuple(cycle_decomposition(g.n, es)))


# ---------------------------------------------------------------------------
# the weighted boundary functional
# ---------------------------------------------------------------------------

def edge_weights(collections: Iterable[GoodCollection]) -> dict[Edge, Fraction]:
    """w(e) = sum of A_H over members H whose boundary contains e."""
    w: dict[Edge, Fraction] = {}
    for coll in collections:
        for member in coll.members:
            for e in member.boundary:
                w[e] = w.get(e, Fraction(0)) + coll.weight
    return w


def f_value(weights: dict[Edge, Fraction], m: Matching) -> Fraction:
    return sum((weights.get(e, Fraction(0)) for e in m.edges), Fraction(0))


def averaging_bound(collections: Iterable[GoodCollection]) -> Fraction:
    """(1/3) * sum over collections of A_H * b_H * |H|."""
    return sum((c.weight * c.b_h * len(c.members) for c in collections), Fraction(0)) / 3


def verify_boundary_inequality(collections: Iterable[GoodCollection], factor_edges) -> Fraction:
    """sum A_H * (2 b_H |H^0| - (3 a_H - 2 b_H) |H^*|) for the given 2-factor."""
    total = Fraction(0)
    for coll in collections:
        counts = bucket_counts(coll, factor_edges)
        total += coll.weight * (2 * coll.b_h * counts[0] - (3 * coll.a_h - 2 * coll.b_h) * counts[coll.a_h])
    return total


@dataclass
class SelectionCertificate:
    mode: str
    f_value: Fraction
    averaging_bound: Fraction
    inequality: Fraction
    buckets: dict[str, dict[int, int]]
    cut_check: str  # "enumerated" or "by-decomposition"
    cuts: int | None
    candidates: int
    matching: Matching = field(repr=False)
    cuts_ok: bool | None = None  # None when no cut list was enumerated

    @property
    def ok(self) -> bool:
        return self.inequality <= 0 and self.f_value <= self.averaging_bound and self.cuts_ok is not False

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "f_value": str(self.f_value),
            "averaging_bound": str(self.averaging_bound),
            "inequality": str(self.inequality),
            "inequality_ok": self.inequality <= 0,
            "buckets": {k: {str(b): c for b, c in v.items()} for k, v in self.buckets.items()},
            "cut_check": self.cut_check,
            "cuts": self.cuts,
            "candidates": self.candidates,
            "cuts_ok": self.cuts_ok,
            "matching": [list(e) for e in self.matching.edges],
        }


def select_two_factor(
    g: Graph,
    collections: list[GoodCollection],
    mode: str = "auto",
    cut_limit: int = 24,
) -> tuple[TwoFactor, SelectionCertificate]:
    """Complement of a perfect matching that minimises f among admissible ones.

    exhaustive: all perfect matchings meeting every 3-edge-cut exactly once.
    decomposition: the matchings of an exact uniform-third decomposition.
    Ties go to the canonically smallest matching.
    """
    if mode == "auto":
        mode = "exhaustive" if g.n <= cut_limit else "decomposition"
    weights = edge_weights(collections)
    if mode == "exhaustive":
        try:
            cuts = enumerate_3_edge_cuts(g, cut_limit)
        except CapabilityError as exc:
            raise CapabilityError(f"{exc}; pass mode='decomposition'") from exc
        pool = [m for m in enumerate_perfect_matchings(g, limit=max(cut_limit, g.n)) if meets_cuts_once(m, cuts)]
        cut_check, n_cuts = "enumerated", len(cuts)
    elif mode == "decomposition":
        pool = decompose_uniform_third(g).matchings
        cuts = None
        cut_check, n_cuts = "by-decomposition", None
        if g.n <= cut_limit:
            cuts = enumerate_3_edge_cuts(g, cut_limit)
            n_cuts = len(cuts)
            if not all(meets_cuts_once(m, cuts) for m in pool):
                raise InvariantError("a decomposition matching meets a 3-edge-cut three times", g.edges)
            cut_check = "enumerated"
    else:
        raise ContractError(f"unknown selection mode {mode!r}")
    if not pool:
        raise InvariantError("no admissible perfect matching", list(g.edges))
    best = min(pool, key=lambda m: (f_value(weights, m), m.edges))
    factor = two_factor_from_matching(g, best)
    if factor.has_triangle():
        raise InvariantError("selected 2-factor contains a triangle", factor.circuits)
    cert = SelectionCertificate(
        mode=mode,
        f_value=f_value(weights, best),
        averaging_bound=averaging_bound(collections),
        inequality=verify_boundary_inequality(collections, factor.edges),
        buckets={c.kind: bucket_counts(c, factor.edges) for c in collections},
        cut_check=cut_check,
        cuts=n_cuts,
        candidates=len(pool),
        matching=best,
        cuts_ok=None if cuts is None else meets_cuts_once(best, cuts),
    )
    if cert.f_value > cert.averaging_bound:
        raise InvariantError("selected matching exceeds the averaging bound", str(cert.f_value))
    if cert.inequality > 0:
        raise InvariantError("boundary inequality violated by the selected 2-factor", str(cert.inequality))
    return factor, cert
