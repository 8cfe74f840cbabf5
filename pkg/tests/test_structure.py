import itertools
from collections import Counter
from fractions import Fraction

import networkx as nx
import pytest

from cubictsp.errors import CapabilityError, ContractError
from cubictsp.graph import Graph, complete_bipartite_33, complete_graph, norm, parse_graph, petersen, prism
from cubictsp.structure import (
    KINDS,
    CollectionParameters,
    Member,
    analyze,
    bucket_counts,
    default_parameters,
    enumerate_3_edge_cuts,
    enumerate_short_circuits,
    find_diamonds,
    find_reducible,
    independent_subfamily,
    reducible_instances,
    touches,
)

from conftest import TYPE1_N12, TYPE3_N10, TYPE4_N10, catalog, type2_chain_graph


def nx_graph(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def gadget_graph():
    """Petersen with the edge 0-1 replaced by a K4 minus an edge (vertices 10..13)."""
    rest = [e for e in petersen().edges if e != (0, 1)]
    gadget = [(0, 10), (10, 11), (10, 12), (11, 12), (11, 13), (12, 13), (13, 1)]
    return Graph(14, rest + gadget)


# -- circuits ----------------------------------------------------------------

def test_k4_circuits():
    fours = [c for c in enumerate_short_circuits(complete_graph(4)) if c.length == 4]
    assert len(fours) == 3
    assert all(len(c.chords) == 2 for c in fours)


def test_petersen_pentagons():
    fives = enumerate_short_circuits(petersen(), 5)
    assert len(fives) == 12
    assert all(c.length == 5 and c.chordless and c.independent_boundary for c in fives)


def test_prism3_four_circuits():
    fours = [c for c in enumerate_short_circuits(prism(3), 4) if c.length == 4]
    assert len(fours) == 3 and all(c.chordless for c in fours)


def test_circuit_counts_match_networkx():
    graphs = [petersen(), prism(5), complete_bipartite_33()] + list(catalog(12))[::9]
    for g in graphs:
        ours = Counter(c.length for c in enumerate_short_circuits(g, 8))
        theirs = Counter(len(c) for c in nx.simple_cycles(nx_graph(g), length_bound=8) if len(c) >= 3)
        assert ours == theirs


def test_circuit_pattern_fields():
    g = petersen()
    for c in enumerate_short_circuits(g, 8):
        vs = c.vertices
        assert all(g.has_edge(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))
        assert set(c.boundary) == set(g.boundary(vs))
        assert vs[0] == min(vs) and vs[1] < vs[-1]


def test_circuit_enumeration_limits():
    with pytest.raises(CapabilityError):
        enumerate_short_circuits(petersen(), 9)
    with pytest.raises(ContractError):
        enumerate_short_circuits(Graph(2, [(0, 1)] * 3))


def test_touches():
    assert touches({1, 2, 3}, {3, 4})
    assert not touches({3, 4}, {3, 4, 5})
    assert not touches({1, 2}, {3, 4})


# -- diamonds ----------------------------------------------------------------

def test_diamonds_examples():
    assert find_diamonds(petersen()) == []
    d = find_diamonds(prism(3))
    assert [x.kind for x in d] == ["d6"] and d[0].vertices == frozenset(range(6))
    d = find_diamonds(gadget_graph())
    assert [(x.kind, sorted(x.vertices)) for x in d] == [("d4", [10, 11, 12, 13])]


def test_diamond_exclusion_chain():
    g = type2_chain_graph()
    kinds = Counter(d.kind for d in find_diamonds(g))
    assert kinds["d8"] >= 1
    d8 = [d.vertices for d in find_diamonds(g) if d.kind == "d8"]
    for d in find_diamonds(g):
        if d.kind == "d6":
            assert not any(d.vertices <= s for s in d8)


# -- reducible patterns ------------------------------------------------------

def test_irreducible_examples():
    assert find_reducible(petersen()) is None
    assert find_reducible(complete_graph(4)) is None


@pytest.mark.parametrize("g6, kind", [(TYPE1_N12, 1), (TYPE3_N10, 3), (TYPE4_N10, 4)])
def test_reducible_examples(g6, kind):
    inst = find_reducible(parse_graph(g6))
    assert inst.type == kind


def test_type2_roles():
    inst = find_reducible(type2_chain_graph())
    assert inst.type == 2
    assert (inst["v1"], inst["v2"]) == (0, 4)
    assert len(inst.vertices) == 8


def test_type1_roles_form_the_pattern():
    g = parse_graph(TYPE1_N12)
    r = find_reducible(g).role_map
    u = [r[f"u{i}"] for i in range(1, 6)]
    assert all(g.has_edge(u[i], u[(i + 1) % 5]) for i in range(5))
    assert g.has_edge(r["u2"], r["u5"])
    for i in (1, 3, 4):
        assert g.has_edge(r[f"u{i}"], r[f"v{i}"])


def test_type3_roles_form_the_pattern():
    g = parse_graph(TYPE3_N10)
    r = find_reducible(g).role_map
    assert g.has_edge(r["u5"], r["u6"]) and g.has_edge(r["u4"], r["u7"])
    for i in (1, 2, 3):
        assert g.has_edge(r[f"u{i}"], r[f"v{i}"])


def test_type4_roles_form_the_pattern():
    g = parse_graph(TYPE4_N10)
    r = find_reducible(g).role_map
    v = [r[f"v{i}"] for i in range(1, 7)]
    assert all(g.has_edge(v[i], v[(i + 1) % 6]) for i in range(6))
    assert g.has_edge(v[0], v[2])


def naive_patterns(g):
    """Pattern types found by plain cycle listing and chord counting."""
    h = nx_graph(g)
    types = set()
    for cyc in nx.simple_cycles(h, length_bound=8):
        k = len(cyc)
        vs = set(cyc)
        ring = {norm(cyc[i], cyc[(i + 1) % k]) for i in range(k)}
        chords = [e for e in map(lambda e: norm(*e), h.subgraph(vs).edges) if e not in ring]
        bnd = [(a, b) for a in vs for b in h[a] if b not in vs]
        ends = [x for e in bnd for x in e]
        indep = len(ends) == len(set(ends))
        pos = {v: i for i, v in enumerate(cyc)}
        gaps = sorted(min((pos[a] - pos[b]) % k, (pos[b] - pos[a]) % k) for a, b in chords)
        if k == 5 and len(chords) == 1 and indep:
            types.add(1)
        if k == 8 and len(chords) == 3:
            types.add(2)
        if k == 7 and gaps == [2, 2] and indep:
            a, b = chords
            if len({*a, *b}) == 4:
                types.add(3)
        if k == 6 and gaps == [2]:
            types.add(4)
    return types


def test_reducible_detection_matches_naive_scan():
    for n in (10, 12):
        for g in catalog(n):
            ours = {r.type for r in reducible_instances(g)}
            naive = naive_patterns(g)
            # type 3 also needs the chords to form a 4-diamond; the naive check is looser
            assert ours - {3} == naive - {3}
            assert 3 not in ours or 3 in naive
    assert naive_patterns(type2_chain_graph()) >= {2}


# -- 3-edge-cuts -------------------------------------------------------------

def brute_cuts(g):
    h = nx_graph(g)
    out = []
    for triple in itertools.combinations(sorted(set(g.edges)), 3):
        k = h.copy()
        k.remove_edges_from(triple)
        comps = list(nx.connected_components(k))
        if len(comps) < 2:
            continue
        side = comps[0]
        crossing = [e for e in g.edges if (e[0] in side) != (e[1] in side)]
        if len(comps) == 2 and len(crossing) == 3:
            out.append(triple)
    return sorted(out)


def test_cut_examples():
    assert len(enumerate_3_edge_cuts(complete_graph(4))) == 4
    assert len(enumerate_3_edge_cuts(petersen())) == 10


def test_cuts_match_brute_force():
    graphs = list(catalog(10)) + list(catalog(12))[::4] + [gadget_graph()]
    for g in graphs:
        assert sorted(tuple(sorted(c)) for c in enumerate_3_edge_cuts(g)) == brute_cuts(g)


def test_cut_limit():
    with pytest.raises(CapabilityError):
        enumerate_3_edge_cuts(prism(13), limit=24)


# -- collections -------------------------------------------------------------

WEIGHTS = {"D4": "3/5", "D6": "9/20", "C4noint": "3/10", "C5noint": "3/8",
           "C44noint": "9/20", "C6noint": "1/20", "C4int5": "3/20"}
AVERAGED = {"D4": "13/10", "D6": "23/18", "C4noint": "13/10", "C5noint": "51/40",
       "C44noint": "56/45", "C6noint": "13/10", "C4int5": "31/24"}


def weight_by_hand(n, b, t, pn):
    a = 2 * (b // 2)
    return pn * n / (a - Fraction(2 * b, 3)) * (Fraction(13, 10) - t)


@pytest.mark.parametrize("kind", KINDS)
def test_collection_weights(kind):
    p = default_parameters(kind)
    assert p.weight == Fraction(WEIGHTS[kind])
    assert p.weight == weight_by_hand(p.n, p.b, p.t, p.p_over_n)
    assert p.a == 2 * (p.b // 2)


@pytest.mark.parametrize("kind", KINDS)
def test_averaged_costs(kind):
    p = default_parameters(kind)
    assert p.averaged_cost == Fraction(AVERAGED[kind])
    assert p.uv_average == p.averaged_cost
    assert p.averaged_cost <= Fraction(13, 10)


def test_unpopulated_boundary_sizes_still_validate():
    for b in (7, 9):
        p = CollectionParameters(8, b, Fraction(4, 3), Fraction(6, 5), Fraction(1))
        assert p.a == b - 1 and p.weight > 0
    with pytest.raises(ContractError):
        CollectionParameters(4, 3, Fraction(1), Fraction(1), Fraction(1))


def test_analyze_petersen():
    s = analyze(petersen())
    assert s.diamonds == []
    assert len(s.cstar) == 12
    assert all(len(c.members) == 0 for c in s.collections if c.kind == "C5noint")


def test_analyze_rejects_reducible():
    with pytest.raises(ContractError):
        analyze(parse_graph(TYPE4_N10))


def test_members_have_declared_shape():
    for g in catalog(12):
        if find_reducible(g) is not None:
            continue
        for coll in analyze(g).collections:
            for m in coll.members:
                assert len(m.vertices) == coll.n_h
                assert len(m.boundary) == coll.b_h
                assert set(m.boundary) == set(g.boundary(m.vertices))


def two_factors(g):
    from cubictsp.matching import enumerate_perfect_matchings
    from cubictsp.factor_select import two_factor_from_matching

    return [two_factor_from_matching(g, m) for m in enumerate_perfect_matchings(g)]


def test_bucket_counts_partition_members():
    for g in catalog(12):
        if find_reducible(g) is not None:
            continue
        s = analyze(g)
        for f in two_factors(g):
            for coll in s.collections:
                counts = bucket_counts(coll, f.edges)
                assert sum(counts.values()) == len(coll.members)
                assert all(k % 2 == 0 for k in counts)


def test_d4_bucket_counts():
    g = gadget_graph()
    d4 = analyze(g, check_irreducible=False).collection("D4")
    assert len(d4.members) == 1
    seen = Counter()
    for f in two_factors(g):
        counts = bucket_counts(d4, f.edges)
        assert sum(counts.values()) == 1
        seen.update(counts)
    # a factor crosses the gadget's 2-edge-cut either twice or not at all
    assert set(seen) <= {0, 2} and seen[2] > 0


def test_independent_subfamily():
    ms = [Member(frozenset(s), ()) for s in ({1, 2}, {2, 3}, {3, 4}, {5, 6}, {6, 7})]
    sub = independent_subfamily(ms)
    assert 4 * len(sub) >= len(ms)
    assert all(not (a.vertices & b.vertices) for a, b in itertools.combinations(sub, 2))
