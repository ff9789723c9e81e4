import random

import oracles
import pytest

from pierced.code import Code, bit
from pierced.ideal import CanonicalForm, PseudoMonomial, canonical_form
from pierced.piercing import random_pierced_code
from pierced.structure import (
    InvalidPeo,
    NotDegreeTwo,
    OrderAxiomViolation,
    RelGraph,
    build_graph,
    build_poset,
    chordality,
    find_elimination_neuron,
    is_perfect_elimination_order,
    max_clique_size,
)


def edges_1based(g):
    return {(i + 1, j + 1) for i, j in g.edges()}


def below_1based(p):
    return {(i + 1, j + 1) for i, j in p.relations()}


def test_nine_structures(nine):
    cf = canonical_form(nine)
    g, p = build_graph(cf), build_poset(cf)
    edges, below = oracles.relations(nine.n, oracles.as_sets(nine))
    assert edges_1based(g) == edges
    assert below_1based(p) == below
    # ball 9 sits inside 5, which sits inside 1
    assert p.lt(8, 4) and p.lt(4, 0) and p.lt(8, 0)
    assert chordality(g).chordal
    assert max_clique_size(g, chordality(g).order) == 3


def test_nine_natural_order_elimination(nine):
    cf = canonical_form(nine)
    g, p = build_graph(cf), build_poset(cf)
    # neuron 9 qualifies as an elimination neuron
    assert p.is_minimal(8) and g.is_simplicial(8)
    assert find_elimination_neuron(g, p) is not None


def test_code_d_cycle(code_d):
    g = build_graph(canonical_form(code_d))
    assert edges_1based(g) == {(1, 2), (2, 3), (3, 4), (1, 4)}
    assert not chordality(g).chordal
    assert not is_perfect_elimination_order(g, [0, 1, 2, 3])


def test_degree_three_rejected(code_c):
    with pytest.raises(NotDegreeTwo):
        build_graph(canonical_form(code_c))
    with pytest.raises(NotDegreeTwo):
        build_poset(canonical_form(code_c))


def test_power_set_complete(power4):
    g = build_graph(canonical_form(power4))
    assert len(g.edges()) == 6
    assert max_clique_size(g, [0, 1, 2, 3]) == 4


def test_order_axioms_checked():
    cyclic = CanonicalForm(2, frozenset({PseudoMonomial(0b01, 0b10), PseudoMonomial(0b10, 0b01)}))
    with pytest.raises(OrderAxiomViolation):
        build_poset(cyclic)
    broken = CanonicalForm(3, frozenset({PseudoMonomial(0b001, 0b010), PseudoMonomial(0b010, 0b100)}))
    with pytest.raises(OrderAxiomViolation):
        build_poset(broken)


def test_invalid_peo_rejected():
    g = RelGraph(4, (0b1010, 0b0101, 0b1010, 0b0101), 0b1111)
    with pytest.raises(InvalidPeo):
        max_clique_size(g, [0, 1, 2, 3])


def test_restriction():
    g = RelGraph(3, (0b110, 0b101, 0b011), 0b111)
    h = g.without(1)
    assert h.neighbors(0) == 0b100
    assert not h.has_edge(0, 1)
    assert h.is_clique(0b101)


def test_random_codes_match_oracle():
    for seed in range(60):
        c, _ = random_pierced_code(random.Random(seed).randint(1, 8), 3, seed)
        cf = canonical_form(c)
        g, p = build_graph(cf), build_poset(cf)
        edges, below = oracles.relations(c.n, oracles.as_sets(c))
        assert edges_1based(g) == edges
        assert below_1based(p) == below
        res = chordality(g)
        assert res.chordal
        assert oracles.is_peo(c.n, edges, [v + 1 for v in res.order])
        assert max_clique_size(g, res.order) == oracles.max_clique(c.n, edges)


def test_covers_are_hasse_edges(nine):
    p = build_poset(canonical_form(nine))
    covers = {(i + 1, j + 1) for i, j in p.covers()}
    assert (9, 5) in covers and (5, 1) in covers and (9, 1) not in covers
    assert p.below(0) == sum(bit(i) for i in range(2, 9))


def test_simplicial_path():
    # path 1-2-3: ends simplicial, middle not
    g = RelGraph(3, (0b010, 0b101, 0b010), 0b111)
    assert g.is_simplicial(0) and not g.is_simplicial(1)
    assert chordality(g).chordal
    c = Code.from_sets(3, [[], [1], [2], [3], [1, 2], [2, 3]])
    assert edges_1based(build_graph(canonical_form(c))) == {(1, 2), (2, 3)}
