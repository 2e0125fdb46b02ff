"""Metrized graphs: exact Laplacian, curvature, energy and subdivision."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dynheights.errors import GraphShapeError
from dynheights.graphs import (DiscreteMeasure, MetrizedGraph, PLFunction,
                               VertexDivisor, circle_haar_measure, curvature,
                               dirichlet_energy, extend_pl, laplacian_pl,
                               load_graph_json, pairing, subdivide)

lengths = st.fractions(min_value=Fraction(1, 10), max_value=10,
                       max_denominator=12)
values = st.fractions(min_value=-10, max_value=10, max_denominator=12)


@st.composite
def graph_with_function(draw):
    n = draw(st.integers(2, 8))
    vs = [f"v{i}" for i in range(n)]
    edges = [(vs[i], vs[draw(st.integers(0, i - 1))], draw(lengths))
             for i in range(1, n)]
    extra = draw(st.integers(0, 6))
    for _ in range(extra):
        i = draw(st.integers(0, n - 1))
        j = draw(st.integers(0, n - 1))
        if i != j:
            edges.append((vs[i], vs[j], draw(lengths)))
    G = MetrizedGraph.of(vs, edges)
    f = PLFunction({v: draw(values) for v in vs})
    return G, f


def _two_vertex_graph():
    G = MetrizedGraph.of(["a", "b"], [("a", "b", Fraction(1)),
                                      ("a", "b", Fraction(1))])
    return G, PLFunction({"a": Fraction(0), "b": Fraction(1)})


def test_graph_validation():
    with pytest.raises(GraphShapeError):
        MetrizedGraph.of(["a"], [("a", "a", Fraction(1))])  # loop
    with pytest.raises(GraphShapeError):
        MetrizedGraph.of(["a", "b"], [("a", "b", Fraction(0))])  # length 0
    with pytest.raises(GraphShapeError):
        MetrizedGraph.of(["a"], [("a", "b", Fraction(1))])  # unknown vertex


def test_laplacian_two_vertex_oracle():
    G, f = _two_vertex_graph()
    lap = laplacian_pl(G, f)
    assert lap.mass_at("a") == -2 and lap.mass_at("b") == 2


def test_laplacian_of_constant_is_zero():
    G, _ = _two_vertex_graph()
    f = PLFunction({"a": Fraction(3), "b": Fraction(3)})
    lap = laplacian_pl(G, f)
    assert all(m == 0 for m in lap.vertex_masses.values())


@settings(max_examples=60)
@given(graph_with_function())
def test_laplacian_mass_conservation(Gf):
    G, f = Gf
    assert laplacian_pl(G, f).total_mass(G) == 0


@settings(max_examples=40)
@given(graph_with_function(), values)
def test_laplacian_linearity(Gf, c):
    G, f = Gf
    g = PLFunction({v: c * f(v) + 1 for v in G.vertices})
    lap_f = laplacian_pl(G, f)
    lap_g = laplacian_pl(G, g)
    assert all(lap_g.mass_at(v) == c * lap_f.mass_at(v) for v in G.vertices)


def test_curvature_point_mass():
    G, _ = _two_vertex_graph()
    f0 = PLFunction({"a": Fraction(0), "b": Fraction(0)})
    D = VertexDivisor.of([(1, "a")])
    curv = curvature(G, D, f0)
    assert curv.mass_at("a") == 1 and curv.mass_at("b") == 0


def test_curvature_negative_laplacian():
    G, f = _two_vertex_graph()
    curv = curvature(G, VertexDivisor.of([]), f)
    assert curv.mass_at("a") == 2 and curv.mass_at("b") == -2


@settings(max_examples=60)
@given(graph_with_function(), st.lists(st.integers(-3, 3), max_size=4))
def test_curvature_total_mass_is_degree(Gf, coeffs):
    G, f = Gf
    D = VertexDivisor.of([(c, G.vertices[i % len(G.vertices)])
                          for i, c in enumerate(coeffs)])
    assert curvature(G, D, f).total_mass(G) == sum(coeffs)


@settings(max_examples=60)
@given(graph_with_function())
def test_energy_equals_pairing(Gf):
    G, f = Gf
    E = dirichlet_energy(G, f)
    assert E >= 0
    assert E == pairing(f, laplacian_pl(G, f))


@settings(max_examples=40)
@given(graph_with_function(), values)
def test_energy_quadratic_scaling(Gf, c):
    G, f = Gf
    g = PLFunction({v: c * f(v) for v in G.vertices})
    assert dirichlet_energy(G, g) == c * c * dirichlet_energy(G, f)


def test_energy_zero_iff_constant_connected():
    G, f = _two_vertex_graph()
    assert dirichlet_energy(G, f) == 2  # two unit edges, slope 1
    const = PLFunction({"a": Fraction(5), "b": Fraction(5)})
    assert dirichlet_energy(G, const) == 0


@settings(max_examples=30)
@given(graph_with_function(), st.sampled_from([1, 2, 3, 5]))
def test_subdivision_invariance(Gf, e):
    G, f = Gf
    refined, embed = subdivide(G, e)
    f2 = extend_pl(G, refined, f, e)
    assert dirichlet_energy(refined, f2) == dirichlet_energy(G, f)
    lap = laplacian_pl(G, f)
    lap2 = laplacian_pl(refined, f2)
    for v in G.vertices:
        assert lap2.mass_at(embed[v]) == lap.mass_at(v)
    # inserted vertices carry no mass under linear extension
    inserted = set(refined.vertices) - set(embed.values())
    assert all(lap2.mass_at(v) == 0 for v in inserted)


def test_subdivide_identity_and_lengths():
    G, _ = _two_vertex_graph()
    same, embed = subdivide(G, 1)
    assert same.edges == G.edges and embed == {"a": "a", "b": "b"}
    refined, _ = subdivide(G, 3)
    assert len(refined.edges) == 6
    assert all(l == Fraction(1, 3) for _, _, l in refined.edges)
    assert refined.total_length() == G.total_length()


def test_circle_haar_measure():
    cyc = MetrizedGraph.of(["a", "b", "c"],
                           [("a", "b", Fraction(1)),
                            ("b", "c", Fraction(2)),
                            ("c", "a", Fraction(3))])
    mu = circle_haar_measure(cyc, Fraction(3))
    assert all(d == Fraction(1, 2) for d in mu.edge_densities.values())
    assert mu.total_mass(cyc) == 3
    assert circle_haar_measure(cyc, 0).total_mass(cyc) == 0
    # density invariant under subdivision (same mass, same length)
    refined, _ = subdivide(cyc, 4)
    mu2 = circle_haar_measure(refined, Fraction(3))
    assert set(mu2.edge_densities.values()) == {Fraction(1, 2)}


def test_non_cycle_rejected():
    G, _ = _two_vertex_graph()
    path = MetrizedGraph.of(["a", "b"], [("a", "b", Fraction(1))])
    with pytest.raises(GraphShapeError):
        circle_haar_measure(path, Fraction(1))


def test_json_round_trip():
    text = """{
      "vertices": ["a", "b", "c"],
      "edges": [{"u": "a", "v": "b", "length": "1/2"},
                {"u": "b", "v": "c", "length": 2}],
      "divisor": [{"coeff": 2, "vertex": "a"}],
      "f": {"a": "1/3", "b": 0, "c": -1}
    }"""
    G, D, f = load_graph_json(text)
    assert G.total_length() == Fraction(5, 2)
    assert D.degree() == 2
    assert f("a") == Fraction(1, 3)
    assert curvature(G, D, f).total_mass(G) == 2
