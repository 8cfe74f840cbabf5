from __future__ import annotations

import random
from functools import lru_cache
from pathlib import Path

import networkx as nx
import pytest

from cubictsp.graph import Graph, from_graph6
from cubictsp.matching import Matching

DATA = Path(__file__).parent / "data"

# acceptance criterion number -> (passed, detail), filled by test_acceptance
RESULTS: dict[int, tuple[bool, str]] = {}

# one reducible pattern each, found by scanning the catalog (type 2 is built by hand)
TYPE1_N12 = "KA_M@e_BH_G`"
TYPE3_N10 = "IR@M@eGBG"
TYPE4_N10 = "IB`MDCoBG"


@lru_cache(maxsize=None)
def catalog(n: int) -> tuple[Graph, ...]:
    """All bridgeless cubic graphs on n vertices (tools/make_catalog.py)."""
    lines = (DATA / f"cubic_bridgeless_n{n}.g6").read_text().split()
    return tuple(from_graph6(s) for s in lines)


def type2_chain_graph() -> Graph:
    """An 8-diamond whose chain grows twice, capped by a K4 minus an edge.

    Circuit 0..7 with chords 15, 26, 37; the free vertices 0 and 4 lead to the
    rungs 8-9 and 10-11; 12..15 is K4 without the edge 12-15.
    """
    ring = [(i, (i + 1) % 8) for i in range(8)]
    chords = [(1, 5), (2, 6), (3, 7)]
    chain = [(0, 8), (4, 9), (8, 9), (8, 10), (9, 11), (10, 11), (10, 12), (11, 15)]
    cap = [(12, 13), (12, 14), (13, 14), (13, 15), (14, 15)]
    return Graph(16, ring + chords + chain + cap)


def random_matching(g: Graph, rng: random.Random) -> Matching:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    for u, v in g.edges:
        h.add_edge(u, v, weight=rng.random())
    return Matching.of(nx.max_weight_matching(h, maxcardinality=True))


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        passed, detail = RESULTS[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if passed else 'FAIL'} - {detail}")
