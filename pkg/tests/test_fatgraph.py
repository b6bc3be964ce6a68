import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mmmcycles.cyclic import CyclicSet, c_z, coboundary, is_morphism
from mmmcycles.fatgraph import (FatGraph, FatSimplex, GraphFormatError,
                                angle_map, c_fat, dumps_graph, figure_eight,
                                interleaved_eight, load_graph, loads_graph,
                                random_collapse_chain, random_trivalent, validate)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def theta() -> FatGraph:
    """Two trivalent vertices joined by three edges, planar."""
    return FatGraph({0: [0, 1, 2], 1: [3, 5, 4]}, [(0, 3), (1, 4), (2, 5)])


# -- topology oracles ---------------------------------------------------------------

def test_figure_eight_faces_and_topology():
    g = figure_eight()
    assert validate(g) == []
    assert g.faces() == [(0, 2), (1,), (3,)]
    assert g.topology() == (-1, 0, 3, 1)


def test_interleaved_eight_is_a_punctured_torus():
    assert interleaved_eight().topology() == (-1, 1, 1, 1)


def test_theta_graphs():
    assert theta().topology() == (-1, 0, 3, 0)
    twisted = FatGraph({0: [0, 1, 2], 1: [3, 4, 5]}, [(0, 3), (1, 4), (2, 5)])
    assert twisted.topology() == (-1, 1, 1, 0)


def test_multiplicity_and_codimension():
    g = figure_eight()
    assert g.multiplicity(0) == 2
    assert g.codimension() == 1
    assert theta().codimension() == 0


# -- validation -----------------------------------------------------------------------

def test_validate_messages():
    assert any("valence < 3" in m for m in validate(FatGraph({0: [0, 1]}, [(0, 1)])))
    assert any("fixed-point" in m for m in validate(FatGraph({0: [0, 1, 2]}, {0: 0, 1: 2, 2: 1})))
    assert any("dangling" in m for m in validate(FatGraph({0: [0, 1, 2]}, [(0, 1)])))
    two = FatGraph({0: [0, 1, 2, 3], 1: [4, 5, 6, 7]}, [(0, 1), (2, 3), (4, 5), (6, 7)])
    assert validate(two) == ["graph is not connected"]


# -- collapses ------------------------------------------------------------------------

def test_collapse_theta_edge():
    g, m = theta().collapse_edge(0)
    assert g.star(0) == (1, 2, 5, 4)
    assert validate(g) == []
    assert m.vertex_map == {0: 0, 1: 0}
    # the two angles opened by the collapsed edge
    assert m.angle_map[0] == 4 and m.angle_map[3] == 2
    assert g.topology()[:3] == theta().topology()[:3]
    for v in theta().vertices:
        assert is_morphism(angle_map(m, v))


def test_collapse_loop_refused():
    with pytest.raises(ValueError):
        figure_eight().collapse_edge(0)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_collapse_preserves_surface(seed):
    rng = random.Random(seed)
    g = random_trivalent(rng)
    chi, genus, s, _ = g.topology()
    edges = [e for e in g.edges if not g.is_loop(e[0])]
    h, m = g.collapse_edge(rng.choice(rng.choice(edges)))
    assert validate(h) == []
    assert h.topology()[:3] == (chi, genus, s)
    assert h.codimension() == 1
    assert all(is_morphism(angle_map(m, v)) for v in g.vertices)


@given(seeds)
def test_relabel_is_isomorphism(seed):
    rng = random.Random(seed)
    g = random_trivalent(rng)
    vp = dict(zip(g.vertices, rng.sample(range(50), len(g.vertices))))
    hp = dict(zip(g.half_edges, rng.sample(range(200), len(g.half_edges))))
    h, m = g.relabel(vp, hp)
    assert m.is_isomorphism()
    assert h.topology() == g.topology()


# -- the fat graph cocycle ------------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(seeds)
def test_c_fat_zero_is_minus_twice_euler_characteristic(seed):
    g = random_trivalent(random.Random(seed))
    assert c_fat(FatSimplex(graph=g), 0) == -2 * g.euler_characteristic()


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_c_fat_one_is_cocycle(seed):
    chain = random_collapse_chain(random.Random(seed), 3)
    assert coboundary(lambda f: c_fat(f, 1), chain) == 0


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_c_fat_two_is_cocycle(seed):
    chain = random_collapse_chain(random.Random(seed), 5, max_edges=15)
    assert coboundary(lambda f: c_fat(f, 2), chain) == 0


def test_c_fat_frozen_value():
    # planar graph with four trivalent vertices; collapse 0-1, then the edge to 2
    g0 = FatGraph({0: [0, 1, 2], 1: [3, 4, 5], 2: [6, 7, 8], 3: [9, 10, 11]},
                  [(0, 3), (1, 6), (2, 9), (4, 11), (5, 7), (8, 10)])
    assert validate(g0) == []
    g1, m1 = g0.collapse_edge(0)
    g2, m2 = g1.collapse_edge(1)
    assert [g2.valence(v) for v in g2.vertices] == [5, 3]
    simplex = FatSimplex([m1, m2])
    per_vertex = [c_z(simplex.angle_simplex(v), 1) for v in g0.vertices]
    # vertices 2 and 3 do not grow at the first step, so they contribute 0;
    # each merging vertex has angle sizes 3, 4, 5 and prefactor -1/120
    assert per_vertex[2] == per_vertex[3] == 0
    assert all(x * -120 in (-3, -1, 1, 3) for x in per_vertex[:2])
    assert c_fat(simplex, 1) == sum(per_vertex) == Fraction(1, 60)


def test_c_fat_dimension_guard():
    with pytest.raises(ValueError):
        c_fat(FatSimplex(graph=figure_eight()), 1)


def test_angles_are_cyclic_sets():
    g = figure_eight()
    assert g.angles(0) == CyclicSet([0, 1, 2, 3])
    assert g.angle(1) == (1, 2)


# -- file format ----------------------------------------------------------------------

FIG8 = """{
  "vertices": [{"id": 0, "star": ["a", "A", "b", "B"]}],
  "pairing": [["a", "A"], ["b", "B"]]
}
"""


def test_load_figure_eight_document(tmp_path):
    path = tmp_path / "fig8.json"
    path.write_text(FIG8)
    g = load_graph(path)
    assert g.topology()[:3] == (-1, 0, 3)
    assert [g.name(h) for h in g.star(0)] == ["a", "A", "b", "B"]


def test_round_trip():
    g = loads_graph(FIG8)
    assert loads_graph(dumps_graph(g)) == g


def test_dangling_half_edge_reports_line():
    doc = """{
  "vertices": [{"id": 0, "star": ["a", "A", "b", "B"]}],
  "pairing": [["a", "A"]]
}
"""
    with pytest.raises(GraphFormatError) as err:
        loads_graph(doc)
    assert "dangling" in str(err.value)
    assert err.value.line == 2


def test_valence_two_rejected():
    doc = json.dumps({"vertices": [{"id": 0, "star": ["a", "b", "c"]}, {"id": 1, "star": ["A", "B"]}],
                      "pairing": [["a", "A"], ["b", "B"], ["c", "c2"]]})
    with pytest.raises(GraphFormatError):
        loads_graph(doc)
    doc = json.dumps({"vertices": [{"id": 0, "star": ["a", "b", "c"]}, {"id": 1, "star": ["A", "B"]},
                                   {"id": 2, "star": ["C"]}],
                      "pairing": [["a", "A"], ["b", "B"], ["c", "C"]]})
    with pytest.raises(GraphFormatError) as err:
        loads_graph(doc)
    assert "valence < 3" in str(err.value)


def test_syntax_error_has_line():
    with pytest.raises(GraphFormatError) as err:
        loads_graph('{\n "vertices": [\n')
    assert err.value.line is not None
