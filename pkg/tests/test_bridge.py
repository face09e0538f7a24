from __future__ import annotations

import pytest

from steinberg import bridge, graph as gr, groupoid as gp, lpa
from steinberg.lpa import LpaElement, Monomial
from steinberg.scalars import INTEGERS, RATIONALS, RingError, integers_mod

F5 = integers_mod(5)
ACYCLIC = {"vertex": gr.single_vertex(), "edge": gr.edge_graph(), "line3": gr.line(3),
           "line4": gr.line(4), "tree2": gr.binary_tree(2)}


def test_boundary_path_examples() -> None:
    assert [str(p) for p in bridge.boundary_paths(gr.single_vertex())] == ["v"]
    assert sorted(str(p) for p in bridge.boundary_paths(gr.edge_graph())) == ["e", "w"]
    assert sorted(str(p) for p in bridge.boundary_paths(gr.line(3))) == ["e1.e2", "e2", "v3"]
    assert all(p.end in gr.sinks(g) for g in ACYCLIC.values() for p in bridge.boundary_paths(g))


@pytest.mark.parametrize("g", [gr.loop(), gr.toeplitz(), gr.rose(2)], ids=str)
def test_cyclic_graphs_rejected(g) -> None:
    with pytest.raises(bridge.BridgeError, match="groupoid is infinite; bridge requires acyclic"):
        bridge.boundary_paths(g)
    with pytest.raises(bridge.BridgeError):
        bridge.build_graph_groupoid(g)
    with pytest.raises(bridge.BridgeError):
        bridge.verify_pi_iso(g)


def test_groupoid_examples() -> None:
    assert len(bridge.build_graph_groupoid(gr.single_vertex())) == 1
    g = bridge.build_graph_groupoid(gr.edge_graph())
    assert sorted(g.names) == sorted(["e", "w", "(e,1,w)", "(w,-1,e)"])
    assert len(g.units) == 2 and gp.isotropy(g) == sorted(g.units)
    assert len(bridge.build_graph_groupoid(gr.line(3))) == 9


@pytest.mark.parametrize("name", ACYCLIC)
def test_built_groupoids_validate(name: str) -> None:
    gg = bridge.GraphGroupoid(ACYCLIC[name])
    G = gg.groupoid
    assert gp.validate_groupoid(G).ok
    for (x, k, y), i in gg.index.items():
        assert k == len(x) - len(y)
        assert G.names[G.source[i]] == str(y) and G.names[G.range[i]] == str(x)


def test_pi_examples() -> None:
    g = gr.edge_graph()
    gg = bridge.GraphGroupoid(g)
    img = bridge.pi_expand(lpa.vertex_monomial(g, "v"), g)
    assert [gg.groupoid.names[i] for i in img.support()] == ["e"]
    img = bridge.pi_expand(lpa.edge_monomial(g, "e"), g)
    assert [gg.groupoid.names[i] for i in img.support()] == ["(e,1,w)"]
    assert bridge.pi_expand(LpaElement.zero(g), g).is_zero()


@pytest.mark.parametrize("name", ["vertex", "edge", "line3", "line4", "tree2"])
@pytest.mark.parametrize("ring", [RATIONALS, F5], ids=str)
def test_pi_is_an_injective_homomorphism(name: str, ring) -> None:
    rep = bridge.verify_pi_iso(ACYCLIC[name], ring, samples=100, seed=1)
    assert rep.passed, rep.to_json()
    assert rep.injectivity_rank == rep.expected_rank


def test_expected_ranks() -> None:
    ranks = {n: bridge.verify_pi_iso(g, RATIONALS, 10).injectivity_rank for n, g in ACYCLIC.items()}
    # one matrix block per sink, of size the number of paths into it
    assert ranks == {"vertex": 1, "edge": 4, "line3": 9, "line4": 16, "tree2": 4 * 9}


def test_rank_over_integers_and_composite_modulus() -> None:
    assert bridge.verify_pi_iso(gr.line(3), INTEGERS, 20).passed
    with pytest.raises(RingError):
        bridge.verify_pi_iso(gr.line(3), integers_mod(6), 5)


@pytest.mark.parametrize("name", ACYCLIC)
@pytest.mark.parametrize("ring", [RATIONALS, F5], ids=str)
def test_two_routes_agree(name: str, ring) -> None:
    lhs, rhs = bridge.core_routes_agree(ACYCLIC[name], ring)
    assert lhs == rhs == len(bridge.boundary_paths(ACYCLIC[name]))


def test_pi_respects_adjoint() -> None:
    g = gr.line(3)
    gg = bridge.GraphGroupoid(g)
    G = gg.groupoid
    for m in lpa.normal_basis(g, 4):
        star = Monomial(m.beta, m.alpha)
        assert sorted(G.inverse[i] for i in gg.cylinder(m)) == gg.cylinder(star)
