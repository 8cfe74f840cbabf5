"""Undirected multigraphs, text formats, validation predicates and generators."""

from __future__ import annotations

import random
from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ContractError, GraphFormatError, UnsupportedFormatError

Edge = tuple[int, int]


def norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class EdgeRef:
    """One concrete edge: endpoints plus the slot among parallel copies."""

    u: int
    v: int
    slot: int = 0

    def __post_init__(self):
        if self.u == self.v:
            raise ValueError("edge endpoints must be distinct")
        if self.u > self.v:
            a, b = self.v, self.u
            object.__setattr__(self, "u", a)
            object.__setattr__(self, "v", b)
        if self.slot < 0:
            raise ValueError("slot must be non-negative")

    @property
    def pair(self) -> Edge:
        return (self.u, self.v)


class Graph:
    """Immutable undirected multigraph on vertices ``0..n-1`` (no loops).

    Edges are kept as a sorted tuple of normalised pairs, one entry per
    parallel copy, so two graphs compare equal iff they are equal as
    labelled multigraphs.
    """

    __slots__ = ("n", "edges", "_adj", "_mult")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        normed = []
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            normed.append(norm(u, v))
        normed.sort()
        self.n = n
        self.edges: tuple[Edge, ...] = tuple(normed)
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        self._mult = Counter(self.edges)

    # -- basic queries -----------------------------------------------------
    def neighbors(self, v: int) -> tuple[int, ...]:
        """Neighbours of ``v`` in sorted order, repeated per parallel edge."""
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def multiplicity(self, u: int, v: int) -> int:
        return self._mult.get(norm(u, v), 0)

    def has_edge(self, u: int, v: int) -> bool:
        return norm(u, v) in self._mult

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self._mult)

    def edge_refs(self) -> list[EdgeRef]:
        out = []
        for (u, v), k in sorted(self._mult.items()):
            out.extend(EdgeRef(u, v, s) for s in range(k))
        return out

    def is_simple(self) -> bool:
        return all(k == 1 for k in self._mult.values())

    def is_cubic(self) -> bool:
        return all(len(a) == 3 for a in self._adj)

    def boundary(self, vertices: Iterable[int]) -> list[Edge]:
        """Edges (with multiplicity) having exactly one end in ``vertices``."""
        s = set(vertices)
        return [e for e in self.edges if (e[0] in s) != (e[1] in s)]

    def induced_edges(self, vertices: Iterable[int]) -> list[Edge]:
        s = set(vertices)
        return [e for e in self.edges if e[0] in s and e[1] in s]

    # -- derived graphs ----------------------------------------------------
    def remove_edges(self, drop: Iterable[Sequence[int]]) -> "Graph":
        left = Counter(norm(*e) for e in drop)
        kept = []
        for e in self.edges:
            if left[e]:
                left[e] -= 1
            else:
                kept.append(e)
        return Graph(self.n, kept)

    def add_edges(self, extra: Iterable[Sequence[int]]) -> "Graph":
        return Graph(self.n, list(self.edges) + [norm(*e) for e in extra])

    def relabel(self, mapping: dict[int, int], n: int) -> "Graph":
        return Graph(n, [(mapping[u], mapping[v]) for u, v in self.edges])

    # -- dunder ------------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


# ---------------------------------------------------------------------------
# graph6
# ---------------------------------------------------------------------------

def _g6_size(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n <= 68719476735:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise UnsupportedFormatError("graph too large for graph6")


def to_graph6(g: Graph) -> str:
    if not g.is_simple():
        raise UnsupportedFormatError("graph6 cannot encode parallel edges")
    es = g.edge_set()
    bits = [1 if (i, j) in es else 0 for j in range(1, g.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    body = "".join(
        chr(63 + int("".join(map(str, bits[k:k + 6])), 2)) for k in range(0, len(bits), 6)
    )
    return _g6_size(g.n) + body


def from_graph6(text: str) -> Graph:
    s = text.strip()
    start = 0
    if s.startswith(">>graph6<<"):
        start = len(">>graph6<<")
        s = s[start:]
    if not s:
        raise GraphFormatError("empty graph6 string", start)
    for pos, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise GraphFormatError(f"invalid graph6 character {ch!r}", start + pos)
    vals = [ord(c) - 63 for c in s]
    if vals[0] < 63:
        n, body = vals[0], 1
    elif len(vals) >= 2 and vals[1] < 63:
        if len(vals) < 4:
            raise GraphFormatError("truncated graph6 size header", start + len(vals))
        n, body = (vals[1] << 12) | (vals[2] << 6) | vals[3], 4
    else:
        if len(vals) < 8:
            raise GraphFormatError("truncated graph6 size header", start + len(vals))
        n = 0
        for x in vals[2:8]:
            n = (n << 6) | x
        body = 8
    need = n * (n - 1) // 2
    nbytes = (need + 5) // 6
    if len(vals) - body != nbytes:
        raise GraphFormatError(
            f"graph6 body has {len(vals) - body} bytes, expected {nbytes} for n={n}",
            start + min(len(vals), body + nbytes),
        )
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = vals[body + k // 6]
            if (byte >> (5 - k % 6)) & 1:
                edges.append((i, j))
            k += 1
    # padding bits must be zero
    for pad in range(need, nbytes * 6):
        if (vals[body + pad // 6] >> (5 - pad % 6)) & 1:
            raise GraphFormatError("non-zero graph6 padding bits", start + body + pad // 6)
    return Graph(n, edges)


# ---------------------------------------------------------------------------
# edge list
# ---------------------------------------------------------------------------

def to_edge_list(g: Graph) -> str:
    lines = [f"# n={g.n}"] + [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def from_edge_list(text: str) -> Graph:
    """Parse ``u v`` lines; ``# n=<count>`` declares the vertex count."""
    n_decl = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            tag = line[1:].strip()
            if tag.startswith("n="):
                try:
                    n_decl = int(tag[2:])
                except ValueError:
                    raise GraphFormatError("bad vertex count directive", lineno, "line") from None
                if n_decl < 0:
                    raise GraphFormatError("negative vertex count", lineno, "line")
            continue
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"expected 'u v', got {raw!r}", lineno, "line")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"non-integer vertex id in {raw!r}", lineno, "line") from None
        if u < 0 or v < 0:
            raise GraphFormatError("negative vertex id", lineno, "line")
        if u == v:
            raise GraphFormatError(f"loop edge at vertex {u}", lineno, "line")
        if n_decl is not None and max(u, v) >= n_decl:
            raise GraphFormatError(f"vertex id {max(u, v)} out of range n={n_decl}", lineno, "line")
        pairs.append((u, v, lineno))
    n = n_decl if n_decl is not None else (max((max(u, v) for u, v, _ in pairs), default=-1) + 1)
    for u, v, lineno in pairs:
        if max(u, v) >= n:
            raise GraphFormatError(f"vertex id {max(u, v)} out of range n={n}", lineno, "line")
    return Graph(n, [(u, v) for u, v, _ in pairs])


FORMATS = ("graph6", "edge-list")
_ALIASES = {"g6": "graph6", "graph6": "graph6", "edges": "edge-list", "edge-list": "edge-list",
            "edgelist": "edge-list"}


def _canon_format(fmt: str) -> str:
    try:
        return _ALIASES[fmt]
    except KeyError:
        raise UnsupportedFormatError(f"unknown format {fmt!r}") from None


def parse_graph(text: str, format: str = "graph6") -> Graph:
    fmt = _canon_format(format)
    if fmt == "graph6":
        return from_graph6(text)
    if not text.strip():
        raise GraphFormatError("empty edge-list input", 1, "line")
    return from_edge_list(text)


def serialize_graph(g: Graph, format: str = "graph6") -> str:
    fmt = _canon_format(format)
    if fmt == "graph6":
        return to_graph6(g)
    return to_edge_list(g)


def to_dot(g: Graph, highlight: Iterable[Sequence[int]] = (), name: str = "G") -> str:
    """DOT text; ``highlight`` edges are drawn bold with a traversal count."""
    counts = Counter(norm(*e) for e in highlight)
    lines = [f"graph {name} {{"]
    lines += [f"  {v};" for v in range(g.n)]
    seen: Counter = Counter()
    for u, v in g.edges:
        e = (u, v)
        k = counts.get(e, 0)
        # spread the traversal count over the first parallel copy only
        if k and not seen[e]:
            lines.append(f'  {u} -- {v} [penwidth=3, label="{k}"];')
        else:
            lines.append(f"  {u} -- {v};")
        seen[e] += 1
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Validation:
    connected: bool
    cubic: bool
    simple: bool
    bridgeless: bool

    @property
    def ok(self) -> bool:
        return self.connected and self.cubic and self.simple and self.bridgeless

    def failed(self) -> list[str]:
        return [k for k in ("simple", "connected", "cubic", "bridgeless") if not getattr(self, k)]


def components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [s], deque([s])
        while queue:
            x = queue.popleft()
            for y in g.neighbors(x):
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(components(g)) == 1


def find_bridges(g: Graph) -> list[Edge]:
    """Bridges by DFS low-points; a parallel pair is never a bridge."""
    inc: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for eid, (u, v) in enumerate(g.edges):
        inc[u].append((v, eid))
        inc[v].append((u, eid))
    pre = [-1] * g.n
    low = [0] * g.n
    bridges = []
    counter = 0
    for root in range(g.n):
        if pre[root] != -1:
            continue
        pre[root] = low[root] = counter
        counter += 1
        stack = [(root, -1, iter(inc[root]))]
        while stack:
            v, via, it = stack[-1]
            advanced = False
            for w, eid in it:
                if eid == via:
                    continue
                if pre[w] == -1:
                    pre[w] = low[w] = counter
                    counter += 1
                    stack.append((w, eid, iter(inc[w])))
                    advanced = True
                    break
                low[v] = min(low[v], pre[w])
            if advanced:
                continue
            stack.pop()
            if stack:
                parent = stack[-1][0]
                low[parent] = min(low[parent], low[v])
                if low[v] > pre[parent]:
                    bridges.append(norm(parent, v))
    return sorted(bridges)


def validate(g: Graph) -> Validation:
    return Validation(
        connected=is_connected(g),
        cubic=g.is_cubic(),
        simple=g.is_simple(),
        bridgeless=not find_bridges(g),
    )


def girth(g: Graph) -> float:
    """Length of a shortest circuit (2 for parallel edges, inf for forests)."""
    if not g.is_simple():
        return 2
    best = float("inf")
    for s in range(g.n):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.neighbors(x):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    best = min(best, dist[x] + dist[y] + 1)
    return best


# ---------------------------------------------------------------------------
# contraction
# ---------------------------------------------------------------------------

def contract_vertex_set(g: Graph, s: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Contract ``s`` into one vertex.

    Surviving vertices keep their relative order; the new vertex takes the
    position of ``min(s)``.  Edges inside ``s`` disappear, parallel edges are
    kept.  Returns the graph and the full old->new mapping.
    """
    s = set(s)
    if not s:
        raise ContractError("cannot contract an empty vertex set")
    rep = min(s)
    order = [v for v in range(g.n) if v not in s or v == rep]
    pos = {v: i for i, v in enumerate(order)}
    mapping = {v: pos[rep] if v in s else pos[v] for v in range(g.n)}
    edges = [
        (mapping[u], mapping[v]) for u, v in g.edges if not (u in s and v in s)
    ]
    return Graph(len(order), edges), mapping


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def generalized_petersen(n: int, k: int) -> Graph:
    if n < 3 or not 1 <= k < n / 2:
        raise ContractError(f"generalized Petersen GP({n},{k}) needs n>=3 and 1<=k<n/2")
    edges = []
    for i in range(n):
        edges.append((i, (i + 1) % n))
        edges.append((i, n + i))
        edges.append((n + i, n + (i + k) % n))
    return Graph(2 * n, edges)


def petersen() -> Graph:
    return generalized_petersen(5, 2)


def prism(k: int) -> Graph:
    """C_k x K_2 on 2k vertices."""
    if k < 3:
        raise ContractError("prism needs k >= 3")
    return generalized_petersen(k, 1)


def flower_snark(k: int) -> Graph:
    """Flower graph J_k on 4k vertices (a snark for odd k >= 5)."""
    if k < 3:
        raise ContractError("flower snark needs k >= 3")
    a = lambda i: 4 * (i % k)
    b = lambda i: 4 * (i % k) + 1
    c = lambda i: 4 * (i % k) + 2
    d = lambda i: 4 * (i % k) + 3
    edges = []
    for i in range(k):
        edges += [(a(i), b(i)), (a(i), c(i)), (a(i), d(i)), (b(i), b(i + 1))]
    for i in range(k - 1):
        edges += [(c(i), c(i + 1)), (d(i), d(i + 1))]
    edges += [(c(k - 1), d(0)), (d(k - 1), c(0))]
    return Graph(4 * k, edges)


def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for j in range(n) for i in range(j)])


def complete_bipartite_33() -> Graph:
    return Graph(6, [(i, j) for i in range(3) for j in range(3, 6)])


def random_cubic_bridgeless(n: int, seed: int, max_tries: int = 100_000) -> Graph:
    """Pairing-model sample, rejecting loops, parallel edges and bridges."""
    if n < 4 or n % 2:
        raise ContractError(f"cubic graphs need an even vertex count >= 4, got {n}")
    rng = random.Random(seed)
    points = [v for v in range(n) for _ in range(3)]
    for _ in range(max_tries):
        rng.shuffle(points)
        pairs = [norm(points[i], points[i + 1]) for i in range(0, 3 * n, 2)]
        if any(u == v for u, v in pairs) or len(set(pairs)) != len(pairs):
            continue
        g = Graph(n, pairs)
        if is_connected(g) and not find_bridges(g):
            return g
    raise ContractError(f"no cubic bridgeless graph found for n={n} in {max_tries} tries")


def generate(family: str, *params: int) -> Graph:
    """Dispatch by family name: petersen, prism, generalized_petersen,
    flower_snark, random_cubic_bridgeless, k4, k33."""
    makers = {
        "petersen": petersen,
        "prism": prism,
        "generalized_petersen": generalized_petersen,
        "gp": generalized_petersen,
        "flower_snark": flower_snark,
        "random_cubic_bridgeless": random_cubic_bridgeless,
        "random": random_cubic_bridgeless,
        "k4": lambda: complete_graph(4),
        "k33": complete_bipartite_33,
    }
    try:
        maker = makers[family]
    except KeyError:
        raise ContractError(f"unknown family {family!r}") from None
    return maker(*params)
