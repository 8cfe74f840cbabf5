"""Perfect matchings and exact decomposition of the uniform 1/3 point."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

import networkx as nx

from .errors import CapabilityError, ContractError, InvariantError
from .graph import Edge, Graph, norm

THIRD = Fraction(1, 3)


@dataclass(frozen=True, order=True)
class Matching:
    edges: tuple[Edge, ...]

    @classmethod
    def of(cls, edges: Iterable[Sequence[int]]) -> "Matching":
        return cls(tuple(sorted(norm(*e) for e in edges)))

    def __contains__(self, e) -> bool:
        return norm(*e) in self.edge_set

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def is_matching(self) -> bool:
        ends = [x for e in self.edges for x in e]
        return len(ends) == len(set(ends))

    def is_perfect(self, g: Graph) -> bool:
        ends = {x for e in self.edges for x in e}
        return self.is_matching() and len(ends) == g.n and all(g.has_edge(*e) for e in self.edges)


def _check(g: Graph, m: Matching) -> Matching:
    if not m.is_perfect(g):
        raise InvariantError("matcher returned something that is not a perfect matching", m.edges)
    return m


def _prepare(g: Graph, forced, forbidden) -> tuple[set[Edge], set[Edge]]:
    forced = {norm(*e) for e in forced}
    forbidden = {norm(*e) for e in forbidden}
    if forced & forbidden:
        raise ContractError("an edge cannot be both forced and forbidden")
    ends = [x for e in forced for x in e]
    if len(ends) != len(set(ends)):
        raise ContractError("forced edges must be pairwise non-adjacent")
    for e in forced | forbidden:
        if not g.has_edge(*e):
            raise ContractError(f"edge {e} is not in the graph")
    return forced, forbidden


def find_perfect_matching(
    g: Graph,
    forced: Iterable[Sequence[int]] = (),
    forbidden: Iterable[Sequence[int]] = (),
    method: str = "blossom",
) -> Matching | None:
    """A perfect matching containing ``forced`` and avoiding ``forbidden``, or None.

    Forced edges are handled by deleting their endpoints first.
    """
    forced, forbidden = _prepare(g, forced, forbidden)
    if g.n % 2:
        return None
    covered = {x for e in forced for x in e}
    rest = [e for e in g.edge_set() if e not in forbidden and e[0] not in covered and e[1] not in covered]
    free = [v for v in range(g.n) if v not in covered]
    if method == "blossom":
        h = nx.Graph()
        h.add_nodes_from(free)
        h.add_edges_from(sorted(rest))
        found = nx.max_weight_matching(h, maxcardinality=True)
        if 2 * len(found) != len(free):
            return None
        return _check(g, Matching.of(list(forced) + list(found)))
    if method == "exhaustive":
        adj: dict[int, list[int]] = {v: [] for v in free}
        for u, v in sorted(rest):
            adj[u].append(v)
            adj[v].append(u)
        for m in _backtrack(free, adj):
            return _check(g, Matching.of(list(forced) + m))
        return None
    raise ContractError(f"unknown matching method {method!r}")


def _backtrack(free: list[int], adj: dict[int, list[int]]):
    """Yield perfect matchings of the graph induced on ``free`` (branch on the lowest vertex)."""
    order = sorted(free)
    used: set[int] = set()
    chosen: list[Edge] = []

    def rec(i: int):
        while i < len(order) and order[i] in used:
            i += 1
        if i == len(order):
            yield list(chosen)
            return
        v = order[i]
        used.add(v)
        for w in sorted(adj[v]):
            if w in used:
                continue
            used.add(w)
            chosen.append(norm(v, w))
            yield from rec(i + 1)
            chosen.pop()
            used.discard(w)
        used.discard(v)

    yield from rec(0)


def enumerate_perfect_matchings(g: Graph, limit: int = 24) -> list[Matching]:
    """Every perfect matching, sorted canonically."""
    if g.n > limit:
        raise CapabilityError(f"perfect matching enumeration is limited to n <= {limit} (got {g.n})")
    if g.n % 2:
        return []
    adj: dict[int, list[int]] = {v: [] for v in range(g.n)}
    for u, v in g.edge_set():
        adj[u].append(v)
        adj[v].append(u)
    out = sorted({Matching.of(m) for m in _backtrack(list(range(g.n)), adj)})
    return [_check(g, m) for m in out]


# ---------------------------------------------------------------------------
# uniform-third decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FractionalDecomposition:
    terms: tuple[tuple[Fraction, Matching], ...]

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def matchings(self) -> list[Matching]:
        return [m for _, m in self.terms]

    def edge_values(self) -> dict[Edge, Fraction]:
        val: dict[Edge, Fraction] = {}
        for lam, m in self.terms:
            for e in m.edges:
                val[e] = val.get(e, Fraction(0)) + lam
        return val

    def verify(self, g: Graph) -> None:
        """Exact re-check of the decomposition invariants; raises on failure."""
        if any(lam <= 0 for lam, _ in self.terms):
            raise InvariantError("non-positive coefficient in decomposition")
        if sum(lam for lam, _ in self.terms) != 1:
            raise InvariantError("coefficients do not sum to 1", [str(l) for l, _ in self.terms])
        for _, m in self.terms:
            _check(g, m)
        val = self.edge_values()
        for e in g.edge_set():
            if val.get(e, 0) != THIRD:
                raise InvariantError(f"edge {e} carries {val.get(e, 0)} instead of 1/3", e)

    def to_json(self) -> list[dict]:
        return [{"lambda": str(lam), "matching": [list(e) for e in m.edges]} for lam, m in self.terms]


class _ExactPhaseOne:
    """Phase-one simplex over Fractions with explicit basis inverse.

    Rows are the constraints ``A lam = b``; artificial variables start in
    the basis.  The lexicographic ratio rule keeps the method finite for any
    entering choice, which lets columns be generated on demand.  Duals are
    updated in place after each pivot instead of being recomputed.
    """

    def __init__(self, rows: int, rhs: list[Fraction]):
        self.rows = rows
        self.binv = [[Fraction(int(i == j)) for j in range(rows)] for i in range(rows)]
        self.x = list(rhs)
        self.basis: list[object] = [("art", i) for i in range(rows)]
        self.y = [Fraction(1)] * rows

    def duals(self) -> list[Fraction]:
        return list(self.y)

    def objective(self) -> Fraction:
        return sum((x for x, b in zip(self.x, self.basis) if isinstance(b, tuple)), Fraction(0))

    def enter(self, key, column: list[Fraction]) -> bool:
        support = [j for j in range(self.rows) if column[j]]
        d = [sum((self.binv[i][j] * column[j] for j in support), Fraction(0)) for i in range(self.rows)]
        ratios = {i: self.x[i] / d[i] for i in range(self.rows) if d[i] > 0}
        if not ratios:
            raise InvariantError("phase-one simplex is unbounded, which cannot happen")
        low = min(ratios.values())
        ties = [i for i, q in ratios.items() if q == low]
        r = min(ties, key=lambda i: [v / d[i] for v in self.binv[i]]) if len(ties) > 1 else ties[0]
        piv = d[r]
        row_r = [v / piv for v in self.binv[r]]
        nz = [k for k, v in enumerate(row_r) if v]
        x_r = self.x[r] / piv
        # entering columns have zero phase-one cost, so y' = y - (y . a) / piv * row_r(old)
        z = sum((self.y[j] * column[j] for j in support), Fraction(0))
        if z:
            for k in nz:
                self.y[k] -= z * row_r[k]
        for i in range(self.rows):
            if i == r or not d[i]:
                continue
            f = d[i]
            row = self.binv[i]
            for k in nz:
                row[k] -= f * row_r[k]
            self.x[i] -= f * x_r
        self.binv[r] = row_r
        self.x[r] = x_r
        self.basis[r] = key
        return True


def _column(edge_index: dict[Edge, int], m: Matching) -> list[Fraction]:
    col = [Fraction(0)] * (len(edge_index) + 1)
    for e in m.edges:
        col[edge_index[e]] = Fraction(1)
    col[-1] = Fraction(1)
    return col


def _max_weight_perfect(g: Graph, weight: dict[Edge, Fraction]) -> Matching:
    scale = lcm(*(w.denominator for w in weight.values())) if weight else 1
    ints = {e: int(w * scale) for e, w in weight.items()}
    shift = 1 - min(ints.values()) if ints else 0
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    for e in sorted(g.edge_set()):
        h.add_edge(*e, weight=ints[e] + shift)
    found = nx.max_weight_matching(h, maxcardinality=True)
    return _check(g, Matching.of(found))


def decompose_uniform_third(g: Graph, method: str = "auto", enumerate_below: int = 20,
                            max_iter: int = 100_000) -> FractionalDecomposition:
    """Write the all-1/3 edge vector as a convex combination of perfect matchings.

    ``method`` is "enumerate" (columns are all perfect matchings), "generate"
    (columns priced by a max-weight perfect matching) or "auto".
    """
    if not g.is_simple() or not g.is_cubic():
        raise ContractError("decomposition needs a simple cubic graph")
    if method == "auto":
        method = "enumerate" if g.n <= enumerate_below else "generate"
    edges = sorted(g.edge_set())
    index = {e: i for i, e in enumerate(edges)}
    rows = len(edges) + 1
    lp = _ExactPhaseOne(rows, [THIRD] * len(edges) + [Fraction(1)])
    columns: dict[Matching, list[Fraction]] = {}

    if method == "enumerate":
        pool = enumerate_perfect_matchings(g)
        if not pool:
            raise InvariantError("graph has no perfect matching", g.edges)
        for m in pool:
            columns[m] = _column(index, m)
    elif method != "generate":
        raise ContractError(f"unknown decomposition method {method!r}")

    for _ in range(max_iter):
        y = lp.duals()
        if method == "enumerate":
            best, best_val = None, Fraction(0)
            for m, col in columns.items():
                val = y[-1] + sum(y[index[e]] for e in m.edges)
                if val > best_val:
                    best, best_val = m, val
        else:
            weight = {e: y[index[e]] for e in edges}
            best = _max_weight_perfect(g, weight)
            best_val = y[-1] + sum(y[index[e]] for e in best.edges)
            if best_val <= 0:
                best = None
            else:
                columns.setdefault(best, _column(index, best))
        if best is None:
            break
        lp.enter(best, columns[best])
    else:
        raise InvariantError("decomposition did not converge", g.edges)

    if lp.objective() != 0:
        raise InvariantError("uniform 1/3 point not reached; graph is not bridgeless cubic?", g.edges)
    lam: dict[Matching, Fraction] = {}
    for key, x in zip(lp.basis, lp.x):
        if isinstance(key, Matching) and x > 0:
            lam[key] = lam.get(key, Fraction(0)) + x
    result = FractionalDecomposition(tuple(sorted(((v, m) for m, v in lam.items()), key=lambda t: t[1])))
    result.verify(g)
    return result


def meets_cuts_once(m: Matching, cuts: Iterable[Sequence[Edge]]) -> bool:
    s = m.edge_set
    return all(sum(1 for e in cut if e in s) == 1 for cut in cuts)
