import itertools

import pytest

from cubictsp.errors import ContractError, GraphFormatError, UnsupportedFormatError
from cubictsp.graph import (
    EdgeRef,
    Graph,
    complete_bipartite_33,
    complete_graph,
    contract_vertex_set,
    find_bridges,
    from_edge_list,
    generate,
    girth,
    is_connected,
    parse_graph,
    petersen,
    prism,
    random_cubic_bridgeless,
    serialize_graph,
    to_dot,
    validate,
)

from conftest import catalog


def brute_bridges(g: Graph):
    out = []
    for e in set(g.edges):
        if not is_connected(g.remove_edges([e])):
            out.append(e)
    return sorted(out)


def test_graph6_k4():
    k4 = parse_graph("C~", "graph6")
    assert k4.n == 4 and k4.m == 6
    assert k4 == complete_graph(4)
    assert serialize_graph(k4, "graph6") == "C~"


def test_graph6_empty_graph():
    g = Graph(0)
    assert serialize_graph(g) == "?"
    assert parse_graph("?") == g


def test_graph6_header_prefix_accepted():
    assert parse_graph(">>graph6<<C~") == complete_graph(4)


def test_edge_list_triangle():
    g = parse_graph("0 1\n1 2\n2 0", "edge-list")
    assert g.n == 3 and set(g.edges) == {(0, 1), (1, 2), (0, 2)}


def test_edge_list_comments_and_declared_n():
    g = from_edge_list("# n=5\n0 1  # an edge\n\n3 4\n")
    assert g.n == 5 and g.edges == ((0, 1), (3, 4))


def test_round_trip_petersen_both_formats():
    p = petersen()
    for fmt in ("graph6", "edge-list"):
        assert parse_graph(serialize_graph(p, fmt), fmt) == p


def test_round_trip_whole_catalog():
    for n in (4, 6, 8, 10, 12, 14):
        for g in catalog(n):
            assert parse_graph(serialize_graph(g)) == g
            assert parse_graph(serialize_graph(g, "edges"), "edges") == g


def test_graph6_rejects_multigraph():
    with pytest.raises(UnsupportedFormatError):
        serialize_graph(Graph(2, [(0, 1), (0, 1)]))


@pytest.mark.parametrize(
    "text, offset",
    [("C~~", 2), ("C\x7f", 1), ("", 0), ("~?", 2)],
)
def test_graph6_errors_carry_offsets(text, offset):
    with pytest.raises(GraphFormatError) as info:
        parse_graph(text, "graph6")
    if offset is not None:
        assert info.value.offset == offset


def test_graph6_nonzero_padding_rejected():
    # n=2 has one adjacency bit and five padding bits
    with pytest.raises(GraphFormatError, match="padding"):
        parse_graph("A@")


@pytest.mark.parametrize(
    "text, line",
    [("0 1\n1 1\n", 2), ("0 1\nx 2\n", 2), ("# n=2\n0 5\n", 2), ("0 1 2\n", 1), ("-1 2\n", 1)],
)
def test_edge_list_errors_name_the_line(text, line):
    with pytest.raises(GraphFormatError) as info:
        parse_graph(text, "edges")
    assert info.value.offset == line and info.value.kind == "line"


def test_unknown_format():
    with pytest.raises(UnsupportedFormatError):
        parse_graph("C~", "sparse6")


def test_loops_rejected_on_construction():
    with pytest.raises(ValueError):
        Graph(3, [(1, 1)])


def test_edge_ref_normalises():
    e = EdgeRef(5, 2, 1)
    assert e.pair == (2, 5) and e.slot == 1
    with pytest.raises(ValueError):
        EdgeRef(3, 3)


def test_multigraph_bookkeeping():
    g = Graph(2, [(0, 1)] * 3)
    assert g.multiplicity(1, 0) == 3
    assert g.is_cubic() and not g.is_simple()
    assert [r.slot for r in g.edge_refs()] == [0, 1, 2]
    assert find_bridges(g) == []


def test_validate_flags():
    assert validate(complete_graph(4)).ok
    assert validate(petersen()).ok
    two_triangles = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    v = validate(two_triangles)
    assert v.connected and v.simple and not v.bridgeless and not v.cubic
    assert find_bridges(two_triangles) == [(2, 3)]
    assert validate(Graph(4, [(0, 1), (2, 3)])).failed() == ["connected", "cubic", "bridgeless"]


def test_petersen_is_bridgeless_by_brute_force():
    assert brute_bridges(petersen()) == []


def test_bridge_detector_matches_brute_force():
    rngs = [Graph(10, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3), (5, 6), (6, 7), (7, 8), (8, 6), (8, 9)])]
    graphs = list(catalog(10)) + list(catalog(12))[:20] + rngs
    for g in graphs:
        assert find_bridges(g) == brute_bridges(g)


def test_generators():
    p = generate("petersen")
    assert (p.n, p.m, girth(p)) == (10, 15, 5)
    pr = prism(3)
    assert (pr.n, pr.m) == (6, 9)
    assert validate(complete_bipartite_33()).ok
    assert validate(generate("flower_snark", 5)).ok
    assert validate(generate("gp", 8, 3)).ok
    with pytest.raises(ContractError):
        generate("prism", 2)
    with pytest.raises(ContractError):
        random_cubic_bridgeless(11, 0)
    with pytest.raises(ContractError):
        generate("dodecahedron")


def test_random_generator_valid_and_deterministic():
    for seed in range(100):
        g = random_cubic_bridgeless(12, seed)
        assert validate(g).ok
    assert random_cubic_bridgeless(20, 7) == random_cubic_bridgeless(20, 7)


def test_prism3_is_hamiltonian():
    g = prism(3)
    found = any(
        all(g.has_edge(p[i], p[(i + 1) % 6]) for i in range(6))
        for p in itertools.permutations(range(6))
    )
    assert found


def test_contract_triangle_of_k4():
    h, mapping = contract_vertex_set(complete_graph(4), {0, 1, 2})
    assert h.n == 2 and h.multiplicity(0, 1) == 3
    assert mapping == {0: 0, 1: 0, 2: 0, 3: 1}


def test_contract_everything():
    h, _ = contract_vertex_set(petersen(), range(10))
    assert h.n == 1 and h.m == 0


def test_contract_type1_pattern_gives_independent_neighbours():
    from conftest import TYPE1_N12
    from cubictsp.structure import find_reducible

    g = parse_graph(TYPE1_N12)
    inst = find_reducible(g)
    assert inst.type == 1
    h, mapping = contract_vertex_set(g, inst.vertices)
    v = mapping[min(inst.vertices)]
    assert h.degree(v) == 3 and len(set(h.neighbors(v))) == 3


def test_contract_empty_set_rejected():
    with pytest.raises(ContractError):
        contract_vertex_set(petersen(), [])


def test_dot_marks_traversals():
    text = to_dot(complete_graph(4), [(0, 1), (1, 0), (1, 2)])
    assert '0 -- 1 [penwidth=3, label="2"]' in text
    assert '1 -- 2 [penwidth=3, label="1"]' in text
    assert text.startswith("graph G {")
