from __future__ import annotations

import json
from fractions import Fraction

import pytest

from coverreps.bundled import bundled_graph_maps
from coverreps.free_group import FreeAutomorphism
from coverreps.laurent import LaurentPoly
from coverreps.polytope import in_hull
from coverreps.shadow import (DisconnectedGraph, GraphMap, GraphMapError, LatticeNotInvariant, NotAVertex,
                              TransitionGraph, a_matrix, equivariant_shadow, load_graph_map,
                              parse_edge_path, simple_cycles, stability_probe, trace_polynomial,
                              trace_support, transition_graph, vertex_labels, vertex_subgraph)
from oracles import closed_walk_sums, closed_walks, scaled

MAPS = bundled_graph_maps()


def rose(images, projection=None):
    gm = GraphMap.from_automorphism(FreeAutomorphism.from_strings(images))
    if projection is not None:
        gm.projection = tuple(tuple(r) for r in projection)
    return gm


def summary(tg):
    return [(e.source, e.target, e.sign, e.translation) for e in tg.edges]


def two_loops(t0=0, t1=1, s1=1):
    return TransitionGraph.from_edges(["a"], [("a", "a", 1, (t0,)), ("a", "a", s1, (t1,))])


# -- labels and transition graphs -------------------------------------------------------------------


def test_rose_label_is_zero():
    assert vertex_labels(rose(["xy", "y"])) == {"b": (0,)}


def test_theta_labels_follow_connecting_edge():
    gm = MAPS["theta"]
    labels = vertex_labels(gm, ((1, 0),))
    # the BFS reaches v through a, whose marking is zero
    assert labels == {"u": (0,), "v": (0,)}
    labels = vertex_labels(gm, ((1, 0),), base="v")
    assert labels["v"] == (0,) and labels["u"] == (0,)


def test_label_differences_match_translations():
    for gm in MAPS.values():
        p = gm.deck_projection()
        labels = vertex_labels(gm, p)
        for e, (t, h) in gm.edges.items():
            pm = tuple(sum(a * b for a, b in zip(row, gm.marking[e])) for row in p)
            # tau(e) = a(t) + P m(e) - a(h) vanishes on tree edges
            path = gm.bfs_paths()[h]
            if path and path[-1] == (e, 1) and gm.bfs_paths()[t] == path[:-1]:
                assert tuple(x - y for x, y in zip(labels[h], labels[t])) == pm


def test_identity_transition_graph():
    tg = transition_graph(rose(["x", "y"]))
    assert summary(tg) == [("x", "x", 1, (0, 0)), ("y", "y", 1, (0, 0))]


def test_twist_transition_graph():
    tg = transition_graph(rose(["xy", "y"]))
    assert summary(tg) == [("x", "x", 1, (0,)), ("x", "y", 1, (1,)), ("y", "y", 1, (0,))]


def test_inversion_transition_graph():
    tg = transition_graph(rose(["X"]))
    assert summary(tg) == [("x", "x", -1, ())]


def test_out_degree_is_image_length():
    for gm in MAPS.values():
        tg = transition_graph(gm)
        for e in gm.edges:
            assert sum(1 for t in tg.edges if t.source == e) == len(gm.images[e])


# -- A-matrix and traces ------------------------------------------------------------------------------


def test_a_matrix_twist():
    a = a_matrix(transition_graph(rose(["xy", "y"])))
    one, t = LaurentPoly.constant(1), LaurentPoly.variable(1, 1)
    assert a == [[one, t], [LaurentPoly.zero(1), one]]


def test_a_matrix_identity_and_inversion():
    a = a_matrix(transition_graph(rose(["x", "y"])))
    assert a[0][0] == LaurentPoly.constant(2) and a[0][1].is_zero()
    assert a_matrix(transition_graph(rose(["X"]))) == [[-LaurentPoly.constant(0)]]


def test_trace_supports():
    tg = transition_graph(rose(["xy", "y"]))
    assert trace_polynomial(tg, 1) == LaurentPoly.constant(1) * 2
    assert trace_support(tg, 1) == {(Fraction(0),)}
    ident = transition_graph(rose(["x", "y"]))
    assert all(trace_support(ident, k) == {(0, 0)} for k in range(1, 5))
    inv = transition_graph(rose(["X"]))
    assert trace_polynomial(inv, 2) == LaurentPoly.constant(0)
    assert trace_polynomial(inv, 1) == -LaurentPoly.constant(0)
    with pytest.raises(ValueError):
        trace_polynomial(inv, 0)


def _trace_matches_walks(tg, k_max):
    edges = summary(tg)
    for k in range(1, k_max + 1):
        want = closed_walk_sums(edges, tg.vertices, tg.rank, k)
        if dict(trace_polynomial(tg, k).terms) != want:
            return False
    return True


@pytest.mark.parametrize("name", sorted(MAPS))
def test_trace_matches_closed_walk_oracle(name):
    tg = transition_graph(MAPS[name])
    assert len(tg.vertices) <= 8
    assert _trace_matches_walks(tg, 6)


def test_trace_matches_oracle_synthetic():
    tg = TransitionGraph.from_edges(["a", "b", "c"], [
        ("a", "b", 1, (1, 0)), ("b", "a", -1, (0, 1)), ("b", "c", 1, (1, 1)), ("c", "a", 1, (-1, 0)),
        ("a", "a", -1, (0, 0)), ("c", "c", 1, (2, -1)), ("c", "b", -1, (0, 0))])
    assert _trace_matches_walks(tg, 6)


# -- shadows --------------------------------------------------------------------------------------------


def test_twist_shadow_is_origin():
    sh = equivariant_shadow(transition_graph(rose(["xy", "y"])))
    assert sh.vertices == [(0,)] and sh.dimension == 0


def test_twist_b_shadow_is_origin():
    gm = rose(["x", "yx"])
    assert gm.deck_projection() == ((0, 1),)
    assert equivariant_shadow(transition_graph(gm)).vertices == [(0,)]


def test_two_loop_shadow_is_segment():
    sh = equivariant_shadow(two_loops())
    assert sh.vertices == [(0,), (1,)] and sh.dimension == 1
    assert sh.contains((Fraction(1, 2),)) and not sh.contains((2,))


def test_shadow_witnesses_realize_vertices():
    for gm in MAPS.values():
        tg = transition_graph(gm)
        sh = equivariant_shadow(tg)
        for v in sh.vertices:
            assert sh.witnesses[v].normalized(tg) == v


@pytest.mark.parametrize("name", sorted(MAPS))
def test_trace_supports_inside_shadow(name):
    tg = transition_graph(MAPS[name])
    sh = equivariant_shadow(tg)
    assert sh.complete
    for k in range(1, 11):
        for q in trace_support(tg, k):
            assert in_hull(q, sh.vertices), (k, q)


@pytest.mark.parametrize("name", sorted(MAPS))
def test_expected_dimension(name):
    gm = MAPS[name]
    if gm.expected_dimension is not None:
        assert equivariant_shadow(transition_graph(gm)).dimension == gm.expected_dimension


@pytest.mark.parametrize("name", sorted(MAPS))
def test_shadow_independent_of_base(name):
    gm = MAPS[name]
    ref = equivariant_shadow(transition_graph(gm)).vertices
    for v in gm.vertices:
        assert equivariant_shadow(transition_graph(gm, base=v)).vertices == ref


def test_torelli_shadow_vertices():
    sh = equivariant_shadow(transition_graph(MAPS["rose_torelli"]))
    assert sh.dimension == 2 and len(sh.vertices) == 3


def test_cycle_cap_reports_truncation():
    tg = transition_graph(MAPS["rose_torelli"])
    enum = simple_cycles(tg, cap=3)
    assert not enum.complete and len(enum.cycles) == 3
    assert not equivariant_shadow(tg, cap=3).complete


def test_shadow_serialization():
    tg = transition_graph(MAPS["rose_conj"])
    d = equivariant_shadow(tg).to_dict(tg)
    assert d["dimension"] == 1 and all("witness_vertices" in v for v in d["vertices"])
    assert json.loads(json.dumps(d)) == d


# -- vertex subgraphs and stability ---------------------------------------------------------------------


def test_singleton_shadow_vertex_subgraph_is_recurrent_part():
    tg = transition_graph(rose(["xy", "y"]))
    sub = vertex_subgraph(tg, equivariant_shadow(tg), (0,))
    # the x -> y edge lies on no cycle
    assert summary(sub) == [("x", "x", 1, (0,)), ("y", "y", 1, (0,))]


def test_two_loop_vertex_subgraph():
    tg = two_loops()
    sub = vertex_subgraph(tg, equivariant_shadow(tg), (1,))
    assert summary(sub) == [("a", "a", 1, (1,))]


def test_vertex_subgraph_rejects_non_vertex():
    tg = two_loops()
    with pytest.raises(NotAVertex):
        vertex_subgraph(tg, equivariant_shadow(tg), (Fraction(1, 2),))


def _closed_under_cycles(sub, v, max_len=8):
    edge_list = [(e.source, e.target) for e in sub.edges]
    covered = set()
    for length in range(1, max_len + 1):
        for walk in closed_walks(edge_list, sub.vertices, length):
            total = [0] * sub.rank
            for k in walk:
                total = [a + b for a, b in zip(total, sub.edges[k].translation)]
            if scaled(total, length) != tuple(v):
                return False
            covered.update(walk)
    return covered == set(range(len(sub.edges)))


@pytest.mark.parametrize("name", sorted(MAPS))
def test_vertex_subgraphs_closed_under_cycles(name):
    tg = transition_graph(MAPS[name])
    sh = equivariant_shadow(tg)
    for v in sh.vertices:
        sub = vertex_subgraph(tg, sh, v)
        assert sub.edges
        assert _closed_under_cycles(sub, v)


def test_single_loop_is_stable():
    tg = TransitionGraph.from_edges(["a"], [("a", "a", 1, (3,))])
    rep = stability_probe(tg, 6)
    assert rep.surviving == [1, 2, 3, 4, 5, 6] and rep.period == 1


def test_opposite_loops_cancel():
    rep = stability_probe(two_loops(2, 2, -1), 5)
    assert rep.surviving == [] and rep.traces[0].is_zero()


def test_opposite_loops_distinct_translations():
    # T - T^2: odd powers keep both extreme monomials, so nothing cancels
    rep = stability_probe(two_loops(1, 2, -1), 4)
    assert rep.surviving == [1, 2, 3, 4]


def test_empty_subgraph_is_empty():
    rep = stability_probe(TransitionGraph.from_edges([], [], 1), 4)
    assert rep.surviving == [] and rep.verdict == "empty"
    with pytest.raises(ValueError):
        stability_probe(two_loops(), 0)


def test_inversion_alternates():
    rep = stability_probe(transition_graph(rose(["X"])), 6)
    # trace(A^k) = (-1)^k is never zero
    assert rep.surviving == [1, 2, 3, 4, 5, 6]
    assert all(t == LaurentPoly.constant(0) * (-1) ** k for k, t in enumerate(rep.traces, 1))


# -- graph map files -----------------------------------------------------------------------------------


def test_round_trip_bundled():
    for gm in MAPS.values():
        assert GraphMap.from_dict(json.loads(json.dumps(gm.to_dict()))) == gm


def test_parse_edge_path():
    assert parse_edge_path("a b^-1") == (("a", 1), ("b", -1))


def _theta_dict():
    return json.loads(json.dumps(MAPS["theta"].to_dict()))


def test_rejects_broken_path():
    d = _theta_dict()
    d["edges"][0]["image"] = "a a"
    with pytest.raises(GraphMapError, match="not an edge path"):
        GraphMap.from_dict(d)


def test_rejects_unknown_base_and_edges():
    d = _theta_dict()
    d["base"] = "w"
    with pytest.raises(GraphMapError):
        GraphMap.from_dict(d)
    d = _theta_dict()
    d["edges"][1]["image"] = "q"
    with pytest.raises(GraphMapError):
        GraphMap.from_dict(d)


def test_rejects_disconnected_graph():
    with pytest.raises(DisconnectedGraph):
        GraphMap(("p", "q"), {"x": ("p", "p"), "y": ("q", "q")}, {"x": (1, 0), "y": (0, 1)},
                 {"x": (("x", 1),), "y": (("y", 1),)}, "p")


def test_rejects_non_invariant_projection():
    gm = rose(["xy", "y"], projection=[(0, 1)])
    with pytest.raises(LatticeNotInvariant):
        transition_graph(gm)


def test_load_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(GraphMapError, match="invalid JSON"):
        load_graph_map(bad)
    bad.write_text("{}")
    with pytest.raises(GraphMapError, match="missing field"):
        load_graph_map(bad)


def test_dot_export():
    tg = transition_graph(rose(["xy", "y"]))
    dot = tg.to_dot()
    assert dot.count("->") == 3 and 'translation="1"' in dot
