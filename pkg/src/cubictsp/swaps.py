"""Bounded even factors, 4-/5-/6-swaps and the per-vertex cost ledgers."""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .errors import ContractError, InvariantError, StaleCandidateError
from .factor_select import TwoFactor, cycle_decomposition
from .graph import Edge, Graph, norm
from .structure import CircuitPattern, touches

SIX_FIFTHS = Fraction(6, 5)
SAVING = {"swap4": 2, "swap5_t1": 1, "swap5_t2": 3, "swap6": 4}
PREFERENCE = (6, 4, 5)


@dataclass
class XCircuit:
    id: int
    cycle: tuple[int, ...]
    isolated: set[int] = field(default_factory=set)
    j4: int = 0
    j5: int = 0
    j6: int = 0
    jd: int = 0
    origin: frozenset[int] = frozenset()

    @property
    def vertices(self) -> set[int]:
        return set(self.cycle) | self.isolated

    @property
    def size(self) -> int:
        return len(self.cycle) + len(self.isolated)

    @property
    def cost(self) -> int:
        return self.size + len(self.isolated) + 2

    @property
    def swaps(self) -> int:
        return self.j4 + self.j5 + self.j6

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "circuit": list(self.cycle),
            "isolated": sorted(self.isolated),
            "j4": self.j4, "j5": self.j5, "j6": self.j6, "jd": self.jd,
            "cost": self.cost,
        }


@dataclass(frozen=True)
class SwapCandidate:
    kind: str
    host: tuple[int, ...]
    circuits: tuple[int, ...]
    remove: tuple[Edge, ...]
    add: tuple[Edge, ...]
    isolate: int | None = None
    absorb: int | None = None

    @property
    def saving(self) -> int:
        return SAVING[self.kind]


@dataclass
class SwapRecord:
    phase: int
    kind: str
    host: tuple[int, ...]
    participants: tuple[int, ...]
    participant_lengths: tuple[int, ...]
    saving: int
    cost_before: int
    cost_after: int
    merged_into: int

    def to_json(self) -> dict:
        return {
            "phase": self.phase, "kind": self.kind, "host": list(self.host),
            "participants": list(self.participants),
            "circuit_lengths": list(self.participant_lengths),
            "saving": self.saving, "cost_before": self.cost_before, "cost_after": self.cost_after,
        }


def _canonical(cycle: list[int]) -> tuple[int, ...]:
    k = len(cycle)
    i = cycle.index(min(cycle))
    fwd = [cycle[(i + j) % k] for j in range(k)]
    bwd = [cycle[(i - j) % k] for j in range(k)]
    return tuple(min(fwd, bwd))


class FactorState:
    """A BE factor kept as X-circuits, with swap history and a cost ledger."""

    def __init__(self, g: Graph, diamonds4: Iterable[frozenset[int]] = ()):
        self.g = g
        self.diamonds4 = [frozenset(d) for d in diamonds4]
        self.diamond_vertices = frozenset(v for d in self.diamonds4 for v in d)
        self.edges: set[Edge] = set()
        self.xs: dict[int, XCircuit] = {}
        self.owner: dict[int, int] = {}
        self.isolated: set[int] = set()
        self.ledger: dict[int, Fraction] | None = None
        self.history: list[SwapRecord] = []
        self._next = 0

    # -- construction ------------------------------------------------------
    @classmethod
    def from_two_factor(cls, g: Graph, factor: TwoFactor, diamonds4: Iterable[frozenset[int]] = ()):
        if factor.has_triangle():
            raise ContractError("the starting 2-factor must be triangle-free")
        st = cls(g, diamonds4)
        st.edges = set(factor.edges)
        for cyc in factor.circuits:
            x = XCircuit(st._next, tuple(cyc), origin=frozenset([st._next]))
            x.jd = st._diamonds_inside(x.vertices)
            st.xs[x.id] = x
            for v in cyc:
                st.owner[v] = x.id
            st._next += 1
        if len(st.owner) != g.n:
            raise ContractError("the 2-factor does not cover every vertex")
        return st

    def copy(self) -> "FactorState":
        return copy.deepcopy(self)

    def _diamonds_inside(self, vs: set[int]) -> int:
        return sum(1 for d in self.diamonds4 if d <= vs)

    # -- queries -----------------------------------------------------------
    @property
    def n(self) -> int:
        return self.g.n

    def cost(self) -> int:
        return self.g.n + 2 * len(self.xs) + len(self.isolated)

    def circuits(self) -> list[tuple[int, ...]]:
        return [x.cycle for x in self.xs.values()]

    def even_factor_edges(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def on_circuit(self, v: int) -> bool:
        return v not in self.isolated

    def k_diamond(self, x: XCircuit) -> int:
        return len(x.vertices & self.diamond_vertices)

    def derive_binding(self) -> dict[int, int]:
        """Recompute isolated-vertex bindings from scratch (least fixpoint)."""
        bound: dict[int, int] = {}
        changed = True
        while changed:
            changed = False
            for v in sorted(self.isolated):
                if v in bound:
                    continue
                support: dict[int, int] = {}
                for w in self.g.neighbors(v):
                    if w in self.isolated:
                        if w in bound:
                            support[bound[w]] = support.get(bound[w], 0) + 1
                    else:
                        support[self.owner[w]] = support.get(self.owner[w], 0) + 1
                hits = [c for c, k in support.items() if k >= 2]
                if len(hits) > 1:
                    raise InvariantError(f"isolated vertex {v} bound to two circuits", hits)
                if hits:
                    bound[v] = hits[0]
                    changed = True
        return bound

    def check(self) -> None:
        """Validate the whole state; raises InvariantError with a witness."""
        seen: set[int] = set()
        deg = [0] * self.g.n
        for e in self.edges:
            if not self.g.has_edge(*e):
                raise InvariantError("factor edge not in graph", e)
            deg[e[0]] += 1
            deg[e[1]] += 1
        for x in self.xs.values():
            vs = x.vertices
            if vs & seen:
                raise InvariantError("X-circuits overlap", sorted(vs & seen))
            seen |= vs
            k = len(x.cycle)
            for i in range(k):
                if norm(x.cycle[i], x.cycle[(i + 1) % k]) not in self.edges:
                    raise InvariantError("circuit edge missing from factor", x.cycle)
            for v in vs:
                if self.owner.get(v) != x.id:
                    raise InvariantError("owner map out of date", v)
        if seen != set(range(self.g.n)):
            raise InvariantError("X-circuits do not partition V(G)", sorted(set(range(self.g.n)) - seen))
        for v in range(self.g.n):
            want = 0 if v in self.isolated else 2
            if deg[v] != want:
                raise InvariantError(f"vertex {v} has factor degree {deg[v]}", v)
        if sum(len(x.cycle) for x in self.xs.values()) != len(self.edges):
            raise InvariantError("factor has edges outside the recorded circuits")
        bound = self.derive_binding()
        if set(bound) != self.isolated:
            raise InvariantError("some isolated vertex is not bound", sorted(self.isolated - set(bound)))
        for v, c in bound.items():
            if self.owner[v] != c:
                raise InvariantError(f"binding of {v} disagrees with the incremental state", (v, c, self.owner[v]))
        if sum(x.cost for x in self.xs.values()) != self.cost():
            raise InvariantError("X-circuit costs do not add up")

    # -- swap detection ----------------------------------------------------
    def _outside_edge(self, host: tuple[int, ...], i: int) -> Edge:
        k = len(host)
        v = host[i]
        prev, nxt = host[(i - 1) % k], host[(i + 1) % k]
        out = [w for w in self.g.neighbors(v) if w != prev and w != nxt]
        if len(out) != 1:
            raise ContractError("swap hosts must be chordless circuits of a cubic graph")
        return norm(v, out[0])

    def detect(self, host: tuple[int, ...]) -> SwapCandidate | None:
        k = len(host)
        F = self.edges
        bnd_in = [self._outside_edge(host, i) in F for i in range(k)]
        on = [norm(host[i], host[(i + 1) % k]) in F for i in range(k)]
        if k in (4, 6):
            if not all(bnd_in) or not any(on):
                return None
            start = on.index(True)
            h = [host[(start + j) % k] for j in range(k)]
            taken = [norm(h[i], h[i + 1]) for i in range(0, k, 2)]
            if any(norm(h[i], h[(i + 1) % k]) in F for i in range(1, k, 2)) or not all(e in F for e in taken):
                return None
            circ = [self.owner[h[i]] for i in range(0, k, 2)]
            if len(set(circ)) != len(circ):
                return None
            added = [norm(h[i], h[(i + 1) % k]) for i in range(1, k, 2)]
            return SwapCandidate("swap4" if k == 4 else "swap6", tuple(h), tuple(circ), tuple(taken), tuple(added))
        if k == 5:
            missing = [i for i in range(5) if not bnd_in[i]]
            if len(missing) != 1:
                return None
            m = missing[0]
            v1, v2, v3, v4, v5 = (host[(m + j) % 5] for j in (1, 2, 3, 4, 5))
            e12, e23, e34, e45, e51 = norm(v1, v2), norm(v2, v3), norm(v3, v4), norm(v4, v5), norm(v5, v1)
            if e23 in F and e45 in F and e51 in F and e12 not in F and e34 not in F:
                c1, c2 = self.owner[v2], self.owner[v1]
                if c1 == c2:
                    return None
                return SwapCandidate("swap5_t1", (v1, v2, v3, v4, v5), (c1, c2),
                                     (e23, e51, e45), (e12, e34), isolate=v5)
            if v5 in self.isolated and e12 in F and e34 in F and e23 not in F:
                c1, c2 = self.owner[v1], self.owner[v3]
                if c1 == c2:
                    return None
                if self.owner[v5] not in (c1, c2):
                    raise InvariantError("isolated host vertex bound outside the participating circuits", v5)
                return SwapCandidate("swap5_t2", (v1, v2, v3, v4, v5), (c1, c2),
                                     (e12, e34), (e23, e51, e45), absorb=v5)
            return None
        raise ContractError("swap hosts have length 4, 5 or 6")

    def touches_short_factor_circuit(self, host: tuple[int, ...]) -> bool:
        """Does ``host`` touch a circuit of length 4 or 5 of the current factor?

        Chorded short circuits count too: a 4-circuit inside a 6-diamond can
        be a factor circuit, and letting it merge in phase 1 would put a
        circuit shorter than 6 into a phase-1 swap.
        """
        hv = set(host)
        for x in self.xs.values():
            if len(x.cycle) in (4, 5) and touches(hv, x.cycle):
                return True
        return False

    # -- swap application --------------------------------------------------
    def apply(self, cand: SwapCandidate, phase: int = 0) -> SwapRecord:
        fresh = self.detect(cand.host)
        if fresh != cand:
            raise StaleCandidateError(f"candidate on {cand.host} no longer applies")
        parts = tuple(cand.circuits)
        before = self.cost()
        olds = [self.xs[p] for p in parts]
        lengths = tuple(len(x.cycle) for x in olds)
        union = set().union(*(x.vertices for x in olds))

        if phase == 2:
            self._phase2_ledger(olds, cand.saving)

        for e in cand.remove:
            self.edges.remove(e)
        for e in cand.add:
            if e in self.edges:
                raise InvariantError("swap adds an edge already in the factor", e)
            self.edges.add(e)
        iso = set().union(*(x.isolated for x in olds))
        if cand.isolate is not None:
            iso.add(cand.isolate)
            self.isolated.add(cand.isolate)
        if cand.absorb is not None:
            iso.discard(cand.absorb)
            self.isolated.discard(cand.absorb)
        on_cycle = union - iso
        adj: dict[int, list[int]] = {v: [] for v in on_cycle}
        for u, v in self.edges:
            if u in adj:
                adj[u].append(v)
                adj[v].append(u)
        cycles = cycle_decomposition(self.g.n, [e for e in self.edges if e[0] in adj])
        if len(cycles) != 1 or set(cycles[0]) != on_cycle:
            raise InvariantError("swap did not merge the participating circuits into one", cycles)

        new = XCircuit(
            self._next, _canonical(list(cycles[0])), iso,
            j4=sum(x.j4 for x in olds) + (cand.kind == "swap4"),
            j5=sum(x.j5 for x in olds) + cand.kind.startswith("swap5"),
            j6=sum(x.j6 for x in olds) + (cand.kind == "swap6"),
            jd=self._diamonds_inside(union),
            origin=frozenset().union(*(x.origin for x in olds)),
        )
        self._next += 1
        for p in parts:
            del self.xs[p]
        self.xs[new.id] = new
        for v in union:
            self.owner[v] = new.id
        after = self.cost()
        if before - after != cand.saving:
            raise InvariantError(f"{cand.kind} saved {before - after}, expected {cand.saving}", cand.host)
        if self.ledger is not None and sum(self.ledger.values()) != after:
            raise InvariantError("cost ledger no longer sums to c(F)", str(sum(self.ledger.values())))
        rec = SwapRecord(phase, cand.kind, cand.host, parts, lengths, cand.saving, before, after, new.id)
        self.history.append(rec)
        return rec

    def _phase2_ledger(self, olds: list[XCircuit], saving: int) -> None:
        if self.ledger is None:
            raise ContractError("phase 2 needs the phase-1 ledger (call assign_c1 first)")
        m = len(olds)
        for x in olds:
            free = [v for v in x.vertices if v not in self.diamond_vertices]
            if not free:
                raise InvariantError("participating X-circuit lies entirely inside 4-diamonds", x.to_json())
            share = Fraction(saving, m * len(free))
            for v in free:
                self.ledger[v] -= share


# ---------------------------------------------------------------------------
# phases
# ---------------------------------------------------------------------------

def swap_hosts(circuits: Iterable[CircuitPattern]) -> dict[int, list[tuple[int, ...]]]:
    hosts: dict[int, list[tuple[int, ...]]] = {4: [], 5: [], 6: []}
    for c in circuits:
        if c.chordless and c.length in hosts:
            hosts[c.length].append(c.vertices)
    for k in hosts:
        hosts[k].sort()
    return hosts


def next_candidate(state: FactorState, hosts, phase: int):
    for k in PREFERENCE:
        for h in hosts[k]:
            cand = state.detect(h)
            if cand is None:
                continue
            if phase == 1 and state.touches_short_factor_circuit(h):
                continue
            return cand
    return None


def run_phase(state: FactorState, hosts, phase: int, check: bool = False,
              trace: Callable[[SwapRecord], None] | None = None) -> FactorState:
    while True:
        cand = next_candidate(state, hosts, phase)
        if cand is None:
            return state
        rec = state.apply(cand, phase)
        if check:
            state.check()
        if trace is not None:
            trace(rec)


def run_phase1(state: FactorState, hosts, **kw) -> FactorState:
    return run_phase(state, hosts, 1, **kw)


def run_phase2(state: FactorState, hosts, **kw) -> FactorState:
    return run_phase(state, hosts, 2, **kw)


def assign_c1(state: FactorState) -> dict[int, Fraction]:
    """Per-vertex costs after phase 1; diamond vertices are capped at 6/5 when needed."""
    ledger: dict[int, Fraction] = {}
    for x in state.xs.values():
        vs = x.vertices
        share = Fraction(x.cost, len(vs))
        dia = vs & state.diamond_vertices
        k = len(dia)
        if share <= SIX_FIFTHS or k == 0 or k == len(vs):
            for v in vs:
                ledger[v] = share
        else:
            rest = (x.cost - SIX_FIFTHS * k) / (len(vs) - k)
            for v in vs:
                ledger[v] = SIX_FIFTHS if v in dia else rest
    if sum(ledger.values()) != state.cost():
        raise InvariantError("c1 does not sum to c(F1)")
    state.ledger = ledger
    return dict(ledger)
