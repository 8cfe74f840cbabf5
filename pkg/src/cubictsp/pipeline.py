"""End-to-end solver: validate, reduce, pick a 2-factor, swap, expand, walk."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .audit import AuditReport, audit_bounds
from .errors import ContractError, InvariantError
from .even_factor import EvenFactor
from .factor_select import SelectionCertificate, TwoFactor, select_two_factor
from .graph import Graph, validate
from .reduction import SMALL, ExpansionStep, ReductionRecord, expand_all, reduce_to_irreducible, solve_small
from .structure import Structure, analyze
from .swaps import FactorState, SwapRecord, assign_c1, run_phase1, run_phase2, swap_hosts
from .tour import Tour, TourReport, build_tour, tour_bound, validate_tour

SCHEMA_VERSION = 1
RATIO = Fraction(13, 10)


@dataclass
class SwapRun:
    f1: FactorState
    f2: FactorState
    phase1: list[SwapRecord]
    phase2: list[SwapRecord]
    c1: dict[int, Fraction]

    @property
    def records(self) -> list[SwapRecord]:
        return self.phase1 + self.phase2

    def even_factor(self) -> EvenFactor:
        return EvenFactor(self.f2.n, self.f2.even_factor_edges())


def run_swap_phases(g: Graph, structure: Structure, factor: TwoFactor, check: bool = False,
                    trace: Callable[[SwapRecord], None] | None = None) -> SwapRun:
    """Both swap phases from a triangle-free 2-factor, with the c1 ledger in between."""
    if factor.has_triangle():
        raise ContractError("the starting 2-factor must be triangle-free")
    state = FactorState.from_two_factor(g, factor, structure.diamonds4)
    hosts = swap_hosts(structure.circuits)
    run_phase1(state, hosts, check=check, trace=trace)
    phase1 = list(state.history)
    c1 = assign_c1(state)
    f1 = state.copy()
    run_phase2(state, hosts, check=check, trace=trace)
    phase2 = state.history[len(phase1):]
    return SwapRun(f1, state, phase1, list(phase2), c1)


def audit_run(g: Graph, structure: Structure, factor: TwoFactor, run: SwapRun,
              selected: bool = True) -> AuditReport:
    return audit_bounds(g, structure, factor.edges, run.f1, run.f2, run.phase1, run.c1, selected)


@dataclass
class Result:
    graph: Graph
    tour: Tour
    report: TourReport
    factor: EvenFactor
    core: Graph
    route: str  # "small", "reduced-small" or "core"
    records: list[ReductionRecord] = field(default_factory=list)
    steps: list[ExpansionStep] = field(default_factory=list)
    selection: SelectionCertificate | None = None
    swaps: list[SwapRecord] = field(default_factory=list)
    audit: AuditReport | None = None
    core_cost: int | None = None

    @property
    def core_bound_ok(self) -> bool:
        if self.core_cost is None:
            return True
        return self.core.n <= SMALL or self.core_cost <= RATIO * self.core.n

    @property
    def ok(self) -> bool:
        return (
            self.report.ok
            and self.core_bound_ok
            and (self.selection is None or self.selection.ok)
            and self.swaps_ok
        )

    @property
    def swaps_ok(self) -> bool:
        return all(r.cost_before - r.cost_after == r.saving for r in self.swaps)

    @property
    def audit_ok(self) -> bool:
        """Per-class ledger bounds; diagnostic only, the tour bound does not depend on them."""
        return self.audit is None or self.audit.ok

    def certificates(self) -> dict:
        out: dict = {
            "tour": self.report.to_json(),
            "length_identity": {"ok": self.tour.length == self.factor.cost - 2,
                                "factor_cost": self.factor.cost},
            "core": {"n": self.core.n, "cost": self.core_cost, "ok": self.core_bound_ok},
            "expansion": [s.to_json() for s in self.steps],
        }
        if self.selection is not None:
            out["selection"] = {**self.selection.to_json(), "ok": self.selection.ok}
        out["swaps"] = {"count": len(self.swaps), "savings_ok": self.swaps_ok}
        return out

    def to_json(self, dump_reductions: bool = False, trace: bool = False) -> dict:
        out = {
            "schema": SCHEMA_VERSION,
            "ok": self.ok,
            "n": self.graph.n,
            "route": self.route,
            "length": self.tour.length,
            "bound": str(tour_bound(self.graph.n)),
            "tour": list(self.tour.walk),
            "factor": self.factor.to_json(),
            "reductions": len(self.records),
            "certificates": self.certificates(),
        }
        if self.audit is not None:
            out["audit"] = {"ok": self.audit.ok, "checks": self.audit.to_json()}
        if dump_reductions:
            out["reduction_records"] = [r.to_json() for r in self.records]
        if trace:
            out["swap_trace"] = [r.to_json() for r in self.swaps]
        return out


def solve(g: Graph, mode: str = "auto", check: bool = False,
          trace: Callable[[SwapRecord], None] | None = None) -> Result:
    """Closed spanning walk of length at most 13n/10 - 2 (n >= 8), with certificates."""
    val = validate(g)
    if not val.ok:
        raise ContractError(f"input graph is not {', '.join(val.failed())}")
    if g.n <= SMALL:
        factor = solve_small(g)
        return _finish(g, factor, g, "small", core_cost=factor.cost)

    core, records = reduce_to_irreducible(g)
    selection = audit = None
    swaps: list[SwapRecord] = []
    if core.n <= SMALL:
        preferred = records[-1].preferred_edge() if records else None
        core_factor = solve_small(core, preferred)
        route = "reduced-small"
    else:
        structure = analyze(core)
        two_factor, selection = select_two_factor(core, structure.collections, mode=mode)
        run = run_swap_phases(core, structure, two_factor, check=check, trace=trace)
        audit = audit_run(core, structure, two_factor, run, selected=True)
        swaps = run.records
        core_factor = run.even_factor()
        route = "core"
    core_cost = core_factor.cost
    graphs = _replay_chain(core, records) if check else None
    factor, steps = expand_all(records, core_factor, graphs)
    return _finish(g, factor, core, route, records, steps, selection, swaps, audit, core_cost)


def _replay_chain(core: Graph, records: list[ReductionRecord]) -> list[Graph]:
    from .reduction import replay_graph

    graphs = [core]
    for rec in reversed(records):
        graphs.append(replay_graph(rec, graphs[-1]))
    graphs.reverse()
    return graphs[:-1] if records else []


def _finish(g, factor, core, route, records=(), steps=(), selection=None, swaps=(), audit=None,
            core_cost=None) -> Result:
    factor.validate(g)
    meta = {"factor_cost": factor.cost, "swaps": len(swaps), "reductions": len(records)}
    tour = build_tour(g, factor, meta)
    report = validate_tour(g, tour)
    return Result(g, tour, report, factor, core, route, list(records), list(steps), selection,
                  list(swaps), audit, core_cost)
