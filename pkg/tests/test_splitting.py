import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pierced.code import Code, Interval, bit, bits, mask_from_labels
from pierced.piercing import (
    NotPierced,
    Pierced,
    compute_piercing_order,
    random_pierced_code,
)
from pierced.splitting import (
    NotAClique,
    NotSplittable,
    attaching_set,
    exhaustive_split,
    is_accessible,
    is_splittable,
    min_realization_dim,
    split_attaching,
)


def analyse(c):
    v = compute_piercing_order(c)
    assert isinstance(v, Pierced)
    return v, is_splittable(v.graph, v.poset, v.order.cliques)


def m(*labels):
    return mask_from_labels(labels)


def test_nine(nine):
    v, split = analyse(nine)
    assert attaching_set(v.graph, m(3, 4)) == m(5, 7, 9)
    entry = split.lookup(m(3, 4))
    assert entry.attaching == m(5, 7, 9)
    assert (entry.a, entry.b) == (m(5, 9), m(7))
    assert split.splittable
    assert min_realization_dim(v, split) == 2


def test_five(five):
    v, split = analyse(five)
    assert attaching_set(v.graph, m(1, 2)) == m(3, 4, 5)
    assert not split.splittable
    w = split.witness()
    assert w.clique == m(1, 2) and w.attaching == m(3, 4, 5)
    assert min_realization_dim(v, split) == 3


def test_power_set(power4):
    v, split = analyse(power4)
    assert attaching_set(v.graph, m(1, 2, 3)) == m(4)
    assert split.splittable
    assert all(e.attaching.bit_count() == 1 for e in split.entries)
    assert min_realization_dim(v, split) == 3


def test_ex11(ex11):
    v, split = analyse(ex11)
    assert split.splittable
    assert min_realization_dim(v, split) == 1


def test_k_zero():
    c = Code.from_sets(2, [[], [1], [2]])
    v, split = analyse(c)
    assert v.k == 0 and min_realization_dim(v, split) == 1


def test_not_pierced(code_d):
    with pytest.raises(NotPierced):
        min_realization_dim(compute_piercing_order(code_d))


def test_not_a_clique(five):
    v, _ = analyse(five)
    with pytest.raises(NotAClique):
        attaching_set(v.graph, m(3, 4))


def test_accessibility(nine, five):
    v, split = analyse(nine)
    assert is_accessible(Interval(m(1), m(1, 3)), v.graph, split, 2)
    # bottom meets {5,7,9} in {5}: neither {5,9} nor {7}
    assert not is_accessible(Interval(m(1, 5), m(1, 3, 4, 5)), v.graph, split, 2)
    assert is_accessible(Interval(m(1, 5, 9), m(1, 3, 4, 5, 9)), v.graph, split, 2)
    assert is_accessible(Interval(m(1, 7), m(1, 3, 4, 7)), v.graph, split, 2)
    # sigma disjoint from a two-sided attaching set
    assert not is_accessible(Interval(m(1), m(1, 3, 4)), v.graph, split, 2)
    # restricted to the neurons placed before 7, 8 and 9 the set is {5} on one side only
    assert is_accessible(Interval(m(1), m(1, 3, 4)), v.graph, split, 2, alive=m(1, 2, 3, 4, 5, 6))
    v5, split5 = analyse(five)
    with pytest.raises(NotSplittable):
        is_accessible(Interval(0, m(1, 2)), v5.graph, split5, 2)


def test_partition_invariants_and_exhaustive_agreement():
    rng = random.Random(17)
    for seed in range(80):
        c, _ = random_pierced_code(rng.randint(2, 9), rng.randint(1, 3), seed)
        v, split = analyse(c)
        for e in split.entries:
            # independent in G
            assert all(v.graph.neighbors(i) & e.attaching == 0 for i in bits(e.attaching))
            assert e.splits == exhaustive_split(v.poset, e.attaching)
            if e.splits:
                assert e.a | e.b == e.attaching and e.a & e.b == 0
                for side in (e.a, e.b):
                    assert all(v.poset.comparable(i, j) for i in bits(side) for j in bits(side) if i != j)
                assert not any(v.poset.comparable(i, j) for i in bits(e.a) for j in bits(e.b))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.integers(1, 3), st.integers(0, 2 ** 32), st.randoms())
def test_splittability_invariant_under_relabeling(n, k, seed, rnd):
    c, _ = random_pierced_code(n, k, seed)
    perm = list(range(n))
    rnd.shuffle(perm)
    d = Code(n, frozenset(sum(bit(perm[i]) for i in bits(w)) for w in c.words))
    assert analyse(c)[1].splittable == analyse(d)[1].splittable


def test_split_attaching_cases(nine):
    v, _ = analyse(nine)
    assert split_attaching(v.poset, 0) == (0, 0)
    assert split_attaching(v.poset, m(5, 9)) == (m(5, 9), 0)
    assert split_attaching(v.poset, m(3, 4, 6)) is None
