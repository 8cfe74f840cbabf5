"""Reduce to an irreducible core and expand even factors back out."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import CapabilityError, ContractError, InvariantError
from .even_factor import EvenFactor
from .graph import Edge, Graph, contract_vertex_set, norm, validate
from .structure import ReducibleInstance, find_reducible

SMALL = 8
RATIO = Fraction(13, 10)


@dataclass
class ReductionRecord:
    """Undo information for one reduction, in the labels of the larger graph."""

    type: int
    roles: dict[str, int]
    removed: tuple[int, ...]
    internal: tuple[Edge, ...]
    boundary: tuple[Edge, ...]  # (inside, outside) pairs
    mapping: dict[int, int]  # surviving old vertex -> new label
    n_before: int
    n_after: int
    new_vertex: int | None = None  # contraction types
    added_edge: Edge | None = None  # type 2, in new labels
    chain: list[tuple[int, int]] = field(default_factory=list)  # type 2: (v1^i, v2^i)
    path: tuple[int, ...] = ()  # type 2: P^k
    circuit: tuple[int, ...] = ()  # type 2: C^k

    @property
    def contraction(self) -> bool:
        return self.new_vertex is not None

    def inverse(self) -> dict[int, int]:
        return {new: old for old, new in self.mapping.items()}

    def preferred_edge(self) -> Edge | None:
        """An edge of the reduced graph that keeps a Hamiltonian factor Hamiltonian on expansion."""
        if self.type == 2:
            return self.added_edge
        if self.type == 3:
            return norm(self.new_vertex, self.mapping[self.roles["v1"]])
        return None

    def to_json(self) -> dict:
        out = {
            "type": self.type,
            "roles": self.roles,
            "removed": list(self.removed),
            "n_before": self.n_before,
            "n_after": self.n_after,
        }
        if self.contraction:
            out["new_vertex"] = self.new_vertex
        if self.type == 2:
            out.update(added_edge=list(self.added_edge), chain=[list(p) for p in self.chain],
                       path=list(self.path), circuit=list(self.circuit))
        return out


# ---------------------------------------------------------------------------
# small graphs
# ---------------------------------------------------------------------------

def _hamiltonian_path(g: Graph, start: int, end: int, allowed: set[int],
                      first: int | None = None) -> list[int] | None:
    """DFS for a path from ``start`` to ``end`` through exactly ``allowed``."""
    path = [start]
    used = {start}

    def rec() -> bool:
        v = path[-1]
        if len(path) == len(allowed):
            return v == end
        nxt = [first] if len(path) == 1 and first is not None else sorted(set(g.neighbors(v)))
        for w in nxt:
            if w in used or w not in allowed or (w == end and len(path) + 1 < len(allowed)):
                continue
            path.append(w)
            used.add(w)
            if rec():
                return True
            path.pop()
            used.discard(w)
        return False

    return path if rec() else None


def hamiltonian_circuit_small(g: Graph, required_edge: Sequence[int] | None = None,
                              limit: int = 20) -> tuple[int, ...]:
    """A Hamiltonian circuit through ``required_edge`` found by brute force."""
    if g.n > limit:
        raise CapabilityError(f"brute-force Hamiltonian search is limited to n <= {limit}")
    if g.n < 3:
        raise ContractError("need at least 3 vertices")
    if required_edge is None:
        required_edge = g.edges[0]
    u, w = norm(*required_edge)
    if not g.has_edge(u, w):
        raise ContractError(f"required edge {(u, w)} is not in the graph")
    # walk u -> w -> ... -> back to u
    for end in sorted(set(g.neighbors(u))):
        if end == w and g.multiplicity(u, w) < 2 and g.n > 2:
            continue
        path = _hamiltonian_path(g, u, end, set(range(g.n)), first=w)
        if path is not None:
            return tuple(path)
    raise InvariantError("no Hamiltonian circuit through the required edge", (u, w))


def solve_small(g: Graph, preferred_edge: Sequence[int] | None = None) -> EvenFactor:
    """A Hamiltonian circuit as an even factor (cost n + 2)."""
    return EvenFactor.from_circuits(g.n, [hamiltonian_circuit_small(g, preferred_edge)])


# ---------------------------------------------------------------------------
# reductions
# ---------------------------------------------------------------------------

def _outside(g: Graph, v: int, inside: set[int]) -> int:
    out = [w for w in g.neighbors(v) if w not in inside]
    if len(out) != 1:
        raise InvariantError(f"vertex {v} should have one neighbour outside the reduced set", out)
    return out[0]


def _contract(g: Graph, inst: ReducibleInstance, s: set[int], roles: dict[str, int]) -> tuple[ReductionRecord, Graph]:
    h, mapping = contract_vertex_set(g, s)
    boundary = tuple(sorted((x, w) for x in s for w in g.neighbors(x) if w not in s))
    rec = ReductionRecord(
        type=inst.type,
        roles=roles,
        removed=tuple(sorted(s)),
        internal=tuple(g.induced_edges(s)),
        boundary=boundary,
        mapping={v: mapping[v] for v in range(g.n) if v not in s},
        n_before=g.n,
        n_after=h.n,
        new_vertex=mapping[min(s)],
    )
    return rec, h


def _reduce_type2(g: Graph, inst: ReducibleInstance) -> tuple[ReductionRecord, Graph]:
    roles = inst.role_map
    s = set(inst.vertices)
    v1, v2 = roles["v1"], roles["v2"]
    path = _hamiltonian_path(g, v1, v2, s)
    if path is None:
        raise InvariantError("8-diamond has no Hamiltonian path between its boundary vertices", sorted(s))
    path = tuple(path)
    circuit = tuple(roles[f"c{i}"] for i in range(8))
    a, b = _outside(g, v1, s), _outside(g, v2, s)
    chain = [(a, b)]
    while True:
        if a == b:
            raise InvariantError("chain endpoints coincide, so the graph has a bridge", a)
        if not g.has_edge(a, b):
            break
        s |= {a, b}
        path = (a,) + path + (b,)
        circuit = path
        a, b = _outside(g, a, s), _outside(g, b, s)
        chain.append((a, b))
    keep = [v for v in range(g.n) if v not in s]
    mapping = {v: i for i, v in enumerate(keep)}
    edges = [(mapping[x], mapping[y]) for x, y in g.edges if x not in s and y not in s]
    added = norm(mapping[a], mapping[b])
    h = Graph(len(keep), edges + [added])
    if not g.has_edge(circuit[0], circuit[-1]):
        raise InvariantError("C^k does not close", circuit)
    roles = dict(roles, **{"v1k": a, "v2k": b})
    rec = ReductionRecord(
        type=2, roles=roles, removed=tuple(sorted(s)), internal=tuple(g.induced_edges(s)),
        boundary=((path[0], a), (path[-1], b)), mapping=mapping, n_before=g.n, n_after=h.n,
        added_edge=added, chain=chain, path=path, circuit=circuit,
    )
    return rec, h


def reduce_once(g: Graph, inst: ReducibleInstance) -> tuple[ReductionRecord, Graph]:
    roles = inst.role_map
    if inst.type in (1, 3):
        return _contract(g, inst, set(inst.vertices), roles)
    if inst.type == 2:
        return _reduce_type2(g, inst)
    if inst.type == 4:
        tri = {roles["v1"], roles["v2"], roles["v3"]}
        roles = dict(roles, x=_outside(g, roles["v2"], set(inst.vertices)))
        return _contract(g, inst, tri, roles)
    raise ContractError(f"unknown reducible type {inst.type}")


def reduce_to_irreducible(g: Graph) -> tuple[Graph, list[ReductionRecord]]:
    """Apply reductions (lowest type first) while n > 8 and something is reducible."""
    val = validate(g)
    if not val.ok:
        raise ContractError(f"input graph is not {', '.join(val.failed())}")
    records: list[ReductionRecord] = []
    cur = g
    while cur.n > SMALL:
        inst = find_reducible(cur)
        if inst is None:
            break
        rec, nxt = reduce_once(cur, inst)
        val = validate(nxt)
        if not val.ok:
            raise InvariantError(
                f"type-{inst.type} reduction produced a graph that is not {', '.join(val.failed())}",
                rec.to_json(),
            )
        if replay_graph(rec, nxt) != cur:
            raise InvariantError("reduction record does not replay to the original graph", rec.to_json())
        records.append(rec)
        cur = nxt
    return cur, records


def replay_graph(rec: ReductionRecord, reduced: Graph) -> Graph:
    """Rebuild the pre-reduction graph from the reduced one."""
    if reduced.n != rec.n_after:
        raise ContractError("reduced graph does not match the record")
    inv = rec.inverse()
    edges = []
    skipped = False
    for e in reduced.edges:
        if rec.contraction and rec.new_vertex in e:
            continue
        if rec.type == 2 and e == rec.added_edge and not skipped:
            skipped = True
            continue
        edges.append((inv[e[0]], inv[e[1]]))
    return Graph(rec.n_before, edges + list(rec.internal) + list(rec.boundary))


# ---------------------------------------------------------------------------
# expansion
# ---------------------------------------------------------------------------

def _walk(seq: Sequence[int]) -> list[Edge]:
    return [norm(seq[i], seq[i + 1]) for i in range(len(seq) - 1)]


def _ring(seq: Sequence[int]) -> list[Edge]:
    return _walk(list(seq) + [seq[0]])


# splice paths per used pair of inside vertices; the outside ends are added at expansion time
_TYPE1 = {
    frozenset({"u1", "u3"}): ("u1", "u2", "u5", "u4", "u3"),
    frozenset({"u1", "u4"}): ("u1", "u5", "u2", "u3", "u4"),
    frozenset({"u3", "u4"}): ("u3", "u2", "u1", "u5", "u4"),
}
_TYPE3 = {
    frozenset({"u2", "u3"}): ("u2", "u5", "u4", "u6", "u7", "u3"),
    frozenset({"u1", "u2"}): ("u1", "u3", "u7", "u4", "u6", "u5", "u2"),
    frozenset({"u1", "u3"}): ("u1", "u2", "u5", "u6", "u4", "u7", "u3"),
}
_TYPE4 = {
    frozenset({"v3", "v1"}): ("v3", "v2", "v1"),
    frozenset({"v3", "v2"}): ("v3", "v1", "v2"),
    frozenset({"v1", "v2"}): ("v1", "v3", "v2"),
}


@dataclass
class ExpansionStep:
    type: int
    case: str
    n_before: int
    n_after: int
    cost_before: int
    cost_after: int

    @property
    def delta(self) -> int:
        return self.cost_after - self.cost_before

    def to_json(self) -> dict:
        return {"type": self.type, "case": self.case, "n": self.n_after, "cost": self.cost_after,
                "delta": self.delta}


def _allowed_delta(rec: ReductionRecord, delta: int) -> bool:
    if rec.type == 1:
        return delta in (4, 5)
    if rec.type == 2:
        return delta in (len(rec.removed), len(rec.removed) + 2)
    if rec.type == 3:
        return delta <= 7
    return delta <= 2


def expand_factor(rec: ReductionRecord, factor: EvenFactor) -> tuple[EvenFactor, str]:
    """Lift an even factor of the reduced graph; also returns the case name."""
    if factor.n != rec.n_after:
        raise ContractError("factor does not live on the record's reduced graph")
    inv = rec.inverse()
    roles = rec.roles
    by_vertex = {v: k for k, v in roles.items()}
    edges: set[Edge] = set()
    used_inside: dict[int, int] = {}  # inside vertex -> its outside neighbour
    has_added = False
    outside_of = {}
    for x, w in rec.boundary:
        outside_of[w] = x
    for e in factor.edges:
        if rec.contraction and rec.new_vertex in e:
            w = inv[e[0] if e[1] == rec.new_vertex else e[1]]
            if w not in outside_of:
                raise ContractError(f"factor edge {e} does not match a boundary edge of the record")
            used_inside[outside_of[w]] = w
        elif rec.type == 2 and e == rec.added_edge:
            has_added = True
        else:
            edges.add(norm(inv[e[0]], inv[e[1]]))

    def r(names: Sequence[str]) -> list[int]:
        return [roles[k] for k in names]

    if rec.type in (1, 3, 4) and len(used_inside) not in (0, 2):
        raise ContractError("contracted vertex has odd degree in the factor")

    if rec.type == 2:
        a, b = roles["v1k"], roles["v2k"]
        if has_added:
            edges |= set(_walk((a,) + rec.path + (b,)))
            case = "splice"
        else:
            edges |= set(_ring(rec.circuit))
            case = "circuit"
    elif used_inside:
        table = {1: _TYPE1, 3: _TYPE3, 4: _TYPE4}[rec.type]
        key = frozenset(by_vertex[x] for x in used_inside)
        seq = r(table[key])
        edges |= set(_walk([used_inside[seq[0]]] + seq + [used_inside[seq[-1]]]))
        case = "+".join(sorted(key))
    elif rec.type == 1:
        edges |= set(_ring(r(("u1", "u2", "u3", "u4", "u5"))))
        case = "isolated"
    elif rec.type == 3:
        edges |= set(_ring(r(("u1", "u2", "u5", "u4", "u6", "u7", "u3"))))
        case = "isolated"
    else:
        e45 = norm(roles["v4"], roles["v5"])
        e56 = norm(roles["v5"], roles["v6"])
        has45, has56 = e45 in edges, e56 in edges
        if not has45 and not has56:
            edges |= set(_ring(r(("v1", "v2", "v3", "v4", "v5", "v6"))))
            case = "isolated"
        elif has45 and not has56:
            edges.discard(e45)
            edges |= set(_walk(r(("v4", "v3", "v2", "v1", "v6", "v5"))))
            case = "isolated+v4v5"
        elif has56 and not has45:
            edges.discard(e56)
            edges |= set(_walk(r(("v6", "v1", "v2", "v3", "v4", "v5"))))
            case = "isolated+v5v6"
        else:
            edges -= {e45, e56}
            edges |= set(_walk(r(("v4", "v3", "v2", "v1", "v6"))))
            case = "isolated+v4v5v6"
    out = EvenFactor(rec.n_before, frozenset(edges))
    delta = out.cost - factor.cost
    if not _allowed_delta(rec, delta):
        raise InvariantError(f"type-{rec.type} expansion ({case}) changed the cost by {delta}", rec.to_json())
    return out, case


def expand_all(records: list[ReductionRecord], factor: EvenFactor,
               graphs: list[Graph] | None = None) -> tuple[EvenFactor, list[ExpansionStep]]:
    """Undo the records in reverse order, checking c <= 13n/10 wherever it held before."""
    steps = []
    for i in range(len(records) - 1, -1, -1):
        rec = records[i]
        before = factor
        factor, case = expand_factor(rec, factor)
        if graphs is not None:
            factor.validate(graphs[i])
        held = before.cost <= RATIO * before.n
        if held and factor.cost > RATIO * factor.n:
            raise InvariantError(f"expansion broke c <= 13n/10 at n={factor.n}", rec.to_json())
        steps.append(ExpansionStep(rec.type, case, before.n, factor.n, before.cost, factor.cost))
    return factor, steps
