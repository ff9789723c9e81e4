import numpy as np
import pytest

from pierced.code import Code, Interval
from pierced.geometry import Ball, Realization, WitnessRegistry, realize
from pierced.ideal import canonical_form
from pierced.piercing import compute_piercing_order
from pierced.splitting import is_splittable, min_realization_dim
from pierced.verify import (
    monte_carlo_code_check,
    pairwise_relation_check,
    verify_all,
    witness_check,
)


def build(c, dim=None, seed=0):
    v = compute_piercing_order(c)
    split = is_splittable(v.graph, v.poset, v.order.cliques)
    dim = dim or min_realization_dim(v, split)
    r, reg = realize(c, v.order, dim, split, seed=seed, g=v.graph)
    return v, r, reg


def test_single_ball():
    c = Code.from_sets(1, [[], [1]])
    _, r, reg = build(c)
    assert witness_check(r, c, reg).witnessed == {0, 1}
    mc = monte_carlo_code_check(r, c, 1000, 0)
    assert set(mc.counts) <= {0, 1} and mc.ok


def test_nine_all_checks(nine):
    v, r, reg = build(nine)
    rep = verify_all(r, nine, v.cf, reg, 20_000, 1)
    assert rep.ok
    assert len(rep.witnesses.witnessed) == 25


def test_five_all_checks(five):
    v, r, reg = build(five)
    assert r.dim == 3
    rep = verify_all(r, five, v.cf, reg, 20_000, 1)
    assert rep.ok and len(rep.witnesses.witnessed) == 16


def test_ex11_disjoint_intervals(ex11):
    v, r, _ = build(ex11)
    assert r.dim == 1
    b1, b4 = r.balls[0], r.balls[3]
    assert abs(b1.center[0] - b4.center[0]) > b1.radius + b4.radius
    assert pairwise_relation_check(r, v.cf).ok


def test_pairwise_two_disjoint_balls():
    r = Realization(2, (Ball((0.0, 0.0), 1.0), Ball((5.0, 0.0), 1.0)))
    c = Code.from_sets(2, [[], [1], [2]])
    assert pairwise_relation_check(r, canonical_form(c)).ok
    bad = Realization(2, (Ball((0.0, 0.0), 1.0), Ball((1.0, 0.0), 1.0)))
    assert not pairwise_relation_check(bad, canonical_form(c)).ok


def test_monte_carlo_flags_foreign_codeword():
    r = Realization(2, (Ball((0.0, 0.0), 1.0), Ball((1.0, 0.0), 1.0)))
    c = Code.from_sets(2, [[], [1], [2]])
    mc = monte_carlo_code_check(r, c, 5000, 0)
    assert not mc.ok and 0b11 in mc.violations


def test_monte_carlo_is_deterministic(nine):
    _, r, _ = build(nine)
    a = monte_carlo_code_check(r, nine, 60_000, 4)
    b = monte_carlo_code_check(r, nine, 60_000, 4)
    assert a == b


def test_witness_check_reports_missing():
    r = Realization(1, (Ball((0.0,), 1.0),))
    c = Code.from_sets(1, [[], [1]])
    reg = WitnessRegistry()
    reg.put(Interval(1, 1), np.array([0.0]))
    rep = witness_check(r, c, reg)
    assert rep.missing == (0,)


def test_witness_from_interval_nudge():
    r = Realization(1, (Ball((0.0,), 1.0),))
    c = Code.from_sets(1, [[], [1]])
    reg = WitnessRegistry()
    reg.put(Interval(0, 1), np.array([1.0]))
    assert witness_check(r, c, reg).ok


def test_doubling_outermost_ball_is_caught(nine):
    v, r, reg = build(nine)
    first = v.order.piercing_sequence[0].neuron
    bad = r.with_radius(first, 2 * r.balls[first].radius)
    rep = verify_all(bad, nine, v.cf, reg, 100_000, 0)
    assert not rep.ok
    assert not rep.witnesses.ok and not rep.monte_carlo.ok and not rep.relations.ok


def test_some_doublings_still_realize_the_code(nine):
    """Doubling a ball that only contains others, or a leaf with room to grow,
    leaves the code unchanged; the checks rightly accept it."""
    v, r, reg = build(nine)
    caught = []
    for i in range(nine.n):
        rep = verify_all(r.with_radius(i, 2 * r.balls[i].radius), nine, v.cf, reg, 50_000, 0)
        caught.append(not rep.ok)
        if rep.ok:
            # no hidden damage: the pairwise picture is unchanged too
            assert pairwise_relation_check(r.with_radius(i, 2 * r.balls[i].radius), v.cf).ok
    assert any(caught)


@pytest.mark.parametrize("samples", [0, -1])
def test_monte_carlo_needs_samples(samples, nine):
    _, r, _ = build(nine)
    with pytest.raises(ValueError):
        monte_carlo_code_check(r, nine, samples, 0)
