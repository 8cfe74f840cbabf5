"""Short circuits, diamonds, reducible patterns, 3-edge-cuts and good collections."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable

from .errors import CapabilityError, ContractError, InvariantError
from .graph import Edge, Graph, components, norm

R = Fraction(13, 10)


# ---------------------------------------------------------------------------
# circuits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CircuitPattern:
    vertices: tuple[int, ...]
    chords: tuple[Edge, ...]
    boundary: tuple[Edge, ...]

    @property
    def length(self) -> int:
        return len(self.vertices)

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    @property
    def chordless(self) -> bool:
        return not self.chords

    @property
    def independent_boundary(self) -> bool:
        ends = [x for e in self.boundary for x in e]
        return len(ends) == len(set(ends))

    def edges(self) -> list[Edge]:
        vs = self.vertices
        return [norm(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]


def _pattern(g: Graph, cyc: list[int]) -> CircuitPattern:
    vs = set(cyc)
    on_circuit = {norm(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))}
    chords = tuple(sorted(e for e in set(g.induced_edges(vs)) if e not in on_circuit))
    return CircuitPattern(tuple(cyc), chords, tuple(g.boundary(vs)))


def enumerate_short_circuits(g: Graph, max_len: int = 8, min_len: int = 3) -> list[CircuitPattern]:
    """Every circuit with ``min_len <= length <= max_len``, each exactly once.

    A circuit is reported starting at its smallest vertex and walking towards
    the smaller of that vertex's two circuit neighbours; output is sorted by
    (length, vertex sequence).
    """
    if max_len > 8:
        raise CapabilityError("circuit enumeration is limited to length 8")
    if not g.is_simple():
        raise ContractError("circuit enumeration needs a simple graph")
    found = []
    for s in range(g.n):
        path = [s]
        on_path = {s}
        stack = [iter(g.neighbors(s))]
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                on_path.discard(path.pop())
                continue
            if nxt == s:
                if len(path) >= max(3, min_len) and path[1] < path[-1]:
                    found.append(list(path))
                continue
            if nxt < s or nxt in on_path or len(path) >= max_len:
                continue
            path.append(nxt)
            on_path.add(nxt)
            stack.append(iter(g.neighbors(nxt)))
    found.sort(key=lambda c: (len(c), c))
    return [_pattern(g, c) for c in found]


def touches(circuit: Iterable[int], subgraph: Iterable[int]) -> bool:
    """``circuit`` meets ``subgraph`` and has a vertex outside it."""
    c, h = set(circuit), set(subgraph)
    return bool(c & h) and bool(c - h)


# ---------------------------------------------------------------------------
# diamonds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Diamond:
    kind: str  # "d4" | "d6" | "d8"
    vertices: frozenset[int]
    circuit: CircuitPattern


def find_diamonds(g: Graph, circuits: list[CircuitPattern] | None = None) -> list[Diamond]:
    """4-, 6- and 8-diamonds, one per vertex set.

    "k chords" is read as "at least k": more chords only happen when the
    circuit spans a whole component (K4, prism(3), K33, some 8-vertex graphs).
    """
    if circuits is None:
        circuits = enumerate_short_circuits(g, 8)

    def unique(kind, cands):
        out, seen = [], set()
        for c in cands:
            if c.vertex_set not in seen:
                seen.add(c.vertex_set)
                out.append(Diamond(kind, c.vertex_set, c))
        return out

    d8 = unique("d8", [c for c in circuits if c.length == 8 and len(c.chords) >= 3])
    d8_sets = [d.vertices for d in d8]
    d6 = unique("d6", [
        c for c in circuits
        if c.length == 6 and len(c.chords) >= 2 and not any(c.vertex_set <= s for s in d8_sets)
    ])
    d6_sets = [d.vertices for d in d6]
    d4 = unique("d4", [
        c for c in circuits
        if c.length == 4 and len(c.chords) >= 1 and not any(c.vertex_set <= s for s in d6_sets)
    ])
    return d4 + d6 + d8


def four_diamond_vertices(diamonds: list[Diamond]) -> frozenset[int]:
    return frozenset(v for d in diamonds if d.kind == "d4" for v in d.vertices)


# ---------------------------------------------------------------------------
# reducible subgraphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReducibleInstance:
    """A reducible pattern with role labels.

    type 1: u1..u5 (chord u2u5), attachments v1, v3, v4 of u1, u3, u4
    type 2: the 8-diamond's circuit, its two boundary vertices v1, v2
    type 3: u1..u7 (chords u5u6, u4u7), attachments v1, v2, v3 of u1, u2, u3
    type 4: v1..v6 (chord v1v3)
    """

    type: int
    roles: tuple[tuple[str, int], ...]
    vertices: frozenset[int]

    def __getitem__(self, role: str) -> int:
        return dict(self.roles)[role]

    @property
    def role_map(self) -> dict[str, int]:
        return dict(self.roles)


def _outside(g: Graph, v: int, inside: frozenset[int]) -> int:
    out = [w for w in g.neighbors(v) if w not in inside]
    if len(out) != 1:
        raise InvariantError(f"vertex {v} should have exactly one outside neighbour", out)
    return out[0]


def _rotate(cyc: tuple[int, ...], first: int, second: int) -> list[int]:
    """Cyclic sequence starting at ``first`` and continuing to ``second``."""
    k = len(cyc)
    i = cyc.index(first)
    if cyc[(i + 1) % k] == second:
        return [cyc[(i + j) % k] for j in range(k)]
    if cyc[(i - 1) % k] == second:
        return [cyc[(i - j) % k] for j in range(k)]
    raise InvariantError("second vertex is not next to the first on the circuit")


def _type1(g: Graph, c: CircuitPattern) -> ReducibleInstance | None:
    if c.length != 5 or len(c.chords) != 1 or not c.independent_boundary:
        return None
    a, b = c.chords[0]
    cyc = c.vertices
    k = len(cyc)
    ia = cyc.index(a)
    # apex: the circuit vertex adjacent to both chord ends
    apex = next(
        x for x in (cyc[(ia + 1) % k], cyc[(ia - 1) % k])
        if b in (cyc[(cyc.index(x) + 1) % k], cyc[(cyc.index(x) - 1) % k])
    )
    seq = _rotate(cyc, apex, a)  # u1 u2 u3 u4 u5
    u1, u2, u3, u4, u5 = seq
    roles = dict(u1=u1, u2=u2, u3=u3, u4=u4, u5=u5)
    for name in ("u1", "u3", "u4"):
        roles["v" + name[1]] = _outside(g, roles[name], c.vertex_set)
    return ReducibleInstance(1, tuple(roles.items()), c.vertex_set)


def _type2(g: Graph, c: CircuitPattern) -> ReducibleInstance | None:
    if c.length != 8 or len(c.chords) != 3:
        return None
    chord_ends = {x for e in c.chords for x in e}
    ends = sorted(v for v in c.vertices if v not in chord_ends)
    if len(ends) != 2:
        return None
    roles = {f"c{i}": v for i, v in enumerate(c.vertices)}
    roles.update(v1=ends[0], v2=ends[1])
    return ReducibleInstance(2, tuple(roles.items()), c.vertex_set)


def _type3(g: Graph, c: CircuitPattern) -> ReducibleInstance | None:
    if c.length != 7 or len(c.chords) != 2 or not c.independent_boundary:
        return None
    cyc = c.vertices
    k = 7
    chords = set(c.chords)
    for i in range(k):
        for step in (1, -1):
            p = [cyc[(i + step * j) % k] for j in range(k)]
            # p0 p1 p2 p3 = u5 u4 u6 u7 with chords u5u6 and u4u7
            if {norm(p[0], p[2]), norm(p[1], p[3])} == chords:
                u5, u4, u6, u7, u3, u1, u2 = p
                roles = dict(u1=u1, u2=u2, u3=u3, u4=u4, u5=u5, u6=u6, u7=u7)
                for name in ("u1", "u2", "u3"):
                    roles["v" + name[1]] = _outside(g, roles[name], c.vertex_set)
                return ReducibleInstance(3, tuple(roles.items()), c.vertex_set)
    return None


def _type4(g: Graph, c: CircuitPattern) -> ReducibleInstance | None:
    if c.length != 6 or len(c.chords) != 1:
        return None
    a, b = c.chords[0]
    cyc = c.vertices
    ia, ib = cyc.index(a), cyc.index(b)
    if (ia - ib) % 6 not in (2, 4):
        return None
    v1 = a  # smaller chord end
    mid = next(x for x in cyc if g.has_edge(x, a) and g.has_edge(x, b) and x not in (a, b))
    seq = _rotate(cyc, v1, mid)
    if seq[2] != b:
        raise InvariantError("type-4 labelling failed", seq)
    roles = {f"v{i + 1}": v for i, v in enumerate(seq)}
    return ReducibleInstance(4, tuple(roles.items()), c.vertex_set)


def reducible_instances(g: Graph, circuits: list[CircuitPattern] | None = None) -> list[ReducibleInstance]:
    """All reducible patterns, ordered by (type, sorted vertex set)."""
    if circuits is None:
        circuits = enumerate_short_circuits(g, 8, 5)
    found = []
    for c in circuits:
        for det in (_type1, _type2, _type3, _type4):
            inst = det(g, c)
            if inst is not None:
                found.append(inst)
    found.sort(key=lambda r: (r.type, sorted(r.vertices)))
    return found


def find_reducible(g: Graph) -> ReducibleInstance | None:
    found = reducible_instances(g)
    return found[0] if found else None


def is_irreducible(g: Graph) -> bool:
    return find_reducible(g) is None


# ---------------------------------------------------------------------------
# 3-edge-cuts
# ---------------------------------------------------------------------------

def _is_cut(g: Graph, triple: tuple[int, int, int]) -> bool:
    """Removing the three edge slots splits g and they form one cut delta(S)."""
    drop = set(triple)
    rest = Graph(g.n, [e for i, e in enumerate(g.edges) if i not in drop])
    comps = components(rest)
    if len(comps) < 2:
        return False
    where = {v: i for i, comp in enumerate(comps) for v in comp}
    # every removed edge must cross, and the crossing pattern must be 2-colourable
    side: dict[int, int] = {}
    links = [(where[g.edges[i][0]], where[g.edges[i][1]]) for i in triple]
    if any(a == b for a, b in links):
        return False
    adj: dict[int, list[int]] = {i: [] for i in range(len(comps))}
    for a, b in links:
        adj[a].append(b)
        adj[b].append(a)
    for s in adj:
        if s in side:
            continue
        side[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in side:
                    side[y] = 1 - side[x]
                    stack.append(y)
                elif side[y] == side[x]:
                    return False
    return True


def _bridges_without(n: int, ends: list[tuple[int, int]], inc: list[list[int]], skip: set[int]) -> list[int]:
    """Edge ids that are bridges once the ids in ``skip`` are deleted (iterative lowpoint DFS)."""
    disc = [-1] * n
    low = [0] * n
    out = []
    t = 0
    for root in range(n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = t
        t += 1
        stack = [(root, -1, iter(inc[root]))]
        while stack:
            v, via, it = stack[-1]
            for eid in it:
                if eid == via or eid in skip:
                    continue
                a, b = ends[eid]
                w = b if a == v else a
                if disc[w] < 0:
                    disc[w] = low[w] = t
                    t += 1
                    stack.append((w, eid, iter(inc[w])))
                    break
                low[v] = min(low[v], disc[w])
            else:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[v])
                    if low[v] > disc[p]:
                        out.append(via)
    return out


def enumerate_3_edge_cuts(g: Graph, limit: int = 24) -> list[tuple[Edge, Edge, Edge]]:
    """All edge cuts delta(S) with exactly three edges (vertex stars included).

    Every such cut {e, f, h} makes h a bridge of G - e - f, so candidates come
    from one bridge search per pair of edges and are then confirmed.
    """
    if g.n > limit:
        raise CapabilityError(
            f"3-edge-cut enumeration is limited to n <= {limit} (got n={g.n}); "
            "use decomposition mode, where the cut condition holds by construction"
        )
    ends = list(g.edges)
    inc: list[list[int]] = [[] for _ in range(g.n)]
    for i, (u, v) in enumerate(ends):
        inc[u].append(i)
        inc[v].append(i)
    triples = set()
    for i, j in itertools.combinations(range(g.m), 2):
        for h in _bridges_without(g.n, ends, inc, {i, j}):
            triples.add(tuple(sorted((i, j, h))))
    cuts = set()
    for triple in triples:
        if _is_cut(g, triple):
            cuts.add(tuple(sorted(g.edges[i] for i in triple)))
    return sorted(cuts)


# ---------------------------------------------------------------------------
# good collections
# ---------------------------------------------------------------------------

KINDS = ("D4", "D6", "C4noint", "C5noint", "C44noint", "C6noint", "C4int5")

# (n_H, b_H, s_H, t_H, p_H/n_H)
TABLE: dict[str, tuple[int, int, Fraction, Fraction, Fraction]] = {
    "D4": (4, 2, Fraction(3, 2), Fraction(6, 5), Fraction(1)),
    "D6": (6, 2, Fraction(4, 3), Fraction(5, 4), Fraction(1)),
    "C4noint": (4, 4, Fraction(3, 2), Fraction(6, 5), Fraction(1)),
    "C5noint": (5, 5, Fraction(7, 5), Fraction(5, 4), Fraction(1)),
    "C44noint": (6, 4, Fraction(4, 3), Fraction(6, 5), Fraction(1)),
    "C6noint": (6, 6, Fraction(4, 3), Fraction(6, 5), Fraction(1, 6)),
    "C4int5": (4, 4, Fraction(11, 8), Fraction(5, 4), Fraction(1)),
}

# b_H -> (u_H, multiplier of p_H/n_H in v_H)
UV_TABLE = {2: (1, 2), 4: (1, 2), 5: (1, 5), 6: (1, 2), 7: (2, 7), 9: (1, 3)}


@dataclass(frozen=True)
class CollectionParameters:
    n: int
    b: int
    s: Fraction
    t: Fraction
    p_over_n: Fraction
    r: Fraction = R

    def __post_init__(self):
        if self.b not in UV_TABLE:
            raise ContractError(f"boundary size b={self.b} is not one of {sorted(UV_TABLE)}")

    @property
    def a(self) -> int:
        return 2 * (self.b // 2)

    @property
    def p(self) -> Fraction:
        return self.p_over_n * self.n

    @property
    def weight(self) -> Fraction:
        """The multiplier A_H used in the boundary functional."""
        return self.p / (self.a - Fraction(2 * self.b, 3)) * (self.r - self.t)

    @property
    def averaged_cost(self) -> Fraction:
        """Weighted average of s and t that must not exceed r."""
        x = Fraction(3 * self.a, 2) - self.b
        y = self.p_over_n * self.b
        return (x * self.s + y * self.t) / (x + y)

    @property
    def uv(self) -> tuple[Fraction, Fraction]:
        u, mult = UV_TABLE[self.b]
        return Fraction(u), self.p_over_n * mult

    @property
    def uv_average(self) -> Fraction:
        u, v = self.uv
        return (u * self.s + v * self.t) / (u + v)


@dataclass(frozen=True)
class Member:
    vertices: frozenset[int]
    boundary: tuple[Edge, ...]


@dataclass
class GoodCollection:
    kind: str
    params: CollectionParameters
    members: list[Member] = field(default_factory=list)

    @property
    def n_h(self) -> int:
        return self.params.n

    @property
    def b_h(self) -> int:
        return self.params.b

    @property
    def a_h(self) -> int:
        return self.params.a

    @property
    def weight(self) -> Fraction:
        return self.params.weight

    def check(self, g: Graph) -> None:
        for m in self.members:
            if len(m.vertices) != self.n_h or len(m.boundary) != self.b_h:
                raise InvariantError(f"{self.kind} member has wrong shape", sorted(m.vertices))
            if tuple(g.boundary(m.vertices)) != m.boundary:
                raise InvariantError(f"{self.kind} member boundary mismatch", sorted(m.vertices))


def default_parameters(kind: str) -> CollectionParameters:
    n, b, s, t, pn = TABLE[kind]
    return CollectionParameters(n, b, s, t, pn)


@dataclass
class Structure:
    """Everything the factor selection and swap phases need about G."""

    graph: Graph
    circuits: list[CircuitPattern]
    diamonds: list[Diamond]
    cstar: list[CircuitPattern]
    collections: list[GoodCollection]

    @cached_property
    def diamond4_vertices(self) -> frozenset[int]:
        return four_diamond_vertices(self.diamonds)

    @cached_property
    def diamonds4(self) -> list[frozenset[int]]:
        return [d.vertices for d in self.diamonds if d.kind == "d4"]

    def collection(self, kind: str) -> GoodCollection:
        return next(c for c in self.collections if c.kind == kind)

    def hosts(self, length: int) -> list[CircuitPattern]:
        """Chordless circuits of the given length (swap hosts)."""
        return [c for c in self.circuits if c.length == length and c.chordless]


def analyze(g: Graph, check_irreducible: bool = True) -> Structure:
    """Build the seven good collections of an irreducible graph."""
    if not g.is_simple() or not g.is_cubic():
        raise ContractError("collections are defined for simple cubic graphs")
    circuits = enumerate_short_circuits(g, 8)
    if check_irreducible:
        red = reducible_instances(g, [c for c in circuits if c.length >= 5])
        if red:
            raise ContractError(f"graph is reducible (type {red[0].type} at {sorted(red[0].vertices)})")
    diamonds = find_diamonds(g, circuits)
    cstar = [c for c in circuits if c.length in (4, 5) and c.chordless]
    indep = {
        k: [c for c in circuits if c.length == k and c.chordless and c.independent_boundary]
        for k in (4, 5, 6)
    }

    def member(vs) -> Member:
        return Member(frozenset(vs), tuple(g.boundary(vs)))

    def noint(vs) -> bool:
        return not any(touches(x.vertex_set, vs) for x in cstar)

    members: dict[str, list[Member]] = {k: [] for k in KINDS}
    members["D4"] = [member(d.vertices) for d in diamonds if d.kind == "d4"]
    members["D6"] = [member(d.vertices) for d in diamonds if d.kind == "d6"]
    for k, kind in ((4, "C4noint"), (5, "C5noint"), (6, "C6noint")):
        members[kind] = [member(c.vertex_set) for c in indep[k] if noint(c.vertex_set)]
    seen = set()
    for c in circuits:
        if c.length != 6 or len(c.chords) != 1:
            continue
        a, b = c.chords[0]
        if (c.vertices.index(a) - c.vertices.index(b)) % 6 != 3:
            continue
        if c.vertex_set in seen:
            continue
        seen.add(c.vertex_set)
        if noint(c.vertex_set):
            members["C44noint"].append(member(c.vertex_set))
    for c in indep[4]:
        vs = c.vertex_set
        hits5 = any(x.length == 5 and touches(vs, x.vertex_set) for x in cstar)
        hits46 = any(x.length in (4, 6) and touches(vs, x.vertex_set) for x in cstar)
        if hits5 and not hits46:
            members["C4int5"].append(member(vs))
    collections = [GoodCollection(k, default_parameters(k), members[k]) for k in KINDS]
    for coll in collections:
        coll.check(g)
    return Structure(g, circuits, diamonds, cstar, collections)


def build_collections(g: Graph) -> list[GoodCollection]:
    return analyze(g).collections


# ---------------------------------------------------------------------------
# classification against a 2-factor
# ---------------------------------------------------------------------------

def boundary_in_factor(m: Member, factor_edges: frozenset[Edge] | set[Edge]) -> int:
    return sum(1 for e in m.boundary if e in factor_edges)


def classify_members(coll: GoodCollection, factor_edges) -> dict[int, list[Member]]:
    """Bucket members by how many of their boundary edges lie in the 2-factor."""
    buckets: dict[int, list[Member]] = {k: [] for k in range(0, coll.a_h + 1, 2)}
    for m in coll.members:
        k = boundary_in_factor(m, factor_edges)
        if k % 2 or k not in buckets:
            raise InvariantError(f"{coll.kind} member has {k} boundary edges in the 2-factor",
                                 sorted(m.vertices))
        buckets[k].append(m)
    return buckets


def bucket_counts(coll: GoodCollection, factor_edges) -> dict[int, int]:
    return {k: len(v) for k, v in classify_members(coll, factor_edges).items()}


def star_members(coll: GoodCollection, factor_edges) -> list[Member]:
    return classify_members(coll, factor_edges)[coll.a_h]


def independent_subfamily(members: list[Member], exhaustive_below: int = 20) -> list[Member]:
    """Pairwise vertex-disjoint subfamily of size >= len(members)/4.

    Greedy first; falls back to an exact maximum search for small families.
    """
    chosen: list[Member] = []
    used: set[int] = set()
    for m in members:
        if not (m.vertices & used):
            chosen.append(m)
            used |= m.vertices
    if 4 * len(chosen) >= len(members):
        return chosen
    if len(members) > exhaustive_below:
        raise InvariantError("greedy independent subfamily is below a quarter", len(chosen))
    best = chosen
    for size in range(len(members), len(chosen), -1):
        for combo in itertools.combinations(members, size):
            if all(not (a.vertices & b.vertices) for a, b in itertools.combinations(combo, 2)):
                return list(combo)
    return best
