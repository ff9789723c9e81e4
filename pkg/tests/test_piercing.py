import itertools
import random

import oracles
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pierced.code import (
    Code,
    Interval,
    bit,
    bits,
    canonicalize,
    delete_neurons,
    full_mask,
)
from pierced.ideal import PseudoMonomial, canonical_form
from pierced.piercing import (
    NotChordal,
    NotDegreeTwo,
    NotPierced,
    Pierced,
    PiercingOrder,
    PiercingStep,
    ReplayMismatch,
    compute_piercing_order,
    order_from_removal,
    random_pierced_code,
    replay,
    verify_abstract_piercing,
)


def test_nine(nine):
    v = compute_piercing_order(nine, debug=True)
    assert isinstance(v, Pierced) and v.k == 2
    assert replay(v.order) == nine
    natural = order_from_removal(nine, list(range(8, -1, -1)))
    assert natural.k == 2 and replay(natural) == nine


def test_five(five):
    v = compute_piercing_order(five, debug=True)
    assert isinstance(v, Pierced) and v.k == 2
    assert order_from_removal(five, [4, 3, 2, 1, 0]).k == 2


def test_verdicts(code_c, code_d):
    v = compute_piercing_order(code_c)
    assert isinstance(v, NotDegreeTwo) and str(v.witness) == "x1*x2*x3"
    assert isinstance(compute_piercing_order(code_d), NotChordal)


def test_power_set(power4):
    v = compute_piercing_order(power4)
    assert isinstance(v, Pierced) and v.k == 3


def test_ex11(ex11):
    v = compute_piercing_order(ex11)
    assert isinstance(v, Pierced) and v.k == 1
    assert replay(v.order) == ex11


def test_bad_removal_sequence(code_d):
    with pytest.raises(NotPierced):
        order_from_removal(code_d, [0, 1, 2, 3])


def test_replay_rejects_bad_interval():
    bad = PiercingOrder(2, (PiercingStep(1, 0, 0b01), PiercingStep(0, 0b10, 0b10)), (0b11, 0b01))
    with pytest.raises(ReplayMismatch):
        replay(bad)


def test_abstract_piercing():
    c = Code.from_sets(2, [[], [1], [2], [1, 2]])
    assert verify_abstract_piercing(c, 1, Interval(0, 0b01))
    assert not verify_abstract_piercing(c, 1, Interval(0, 0))
    with pytest.raises(ValueError):
        verify_abstract_piercing(c, 1, Interval(0, 0b10))


def test_step_validation():
    with pytest.raises(ValueError):
        PiercingStep(0, 0b10, 0b01)
    with pytest.raises(ValueError):
        PiercingStep(0, 0, 0b01)


def test_generator_is_deterministic():
    assert random_pierced_code(7, 2, 5) == random_pierced_code(7, 2, 5)
    c, order = random_pierced_code(7, 2, 5)
    assert canonicalize(c)[1].is_identity
    assert replay(order) == c
    assert order.k <= 2


def check_structural(c: Code):
    """Properties every pierced code and computed order must satisfy."""
    v = compute_piercing_order(c)
    assert isinstance(v, Pierced)
    order = v.order
    removal = order.removal_order
    edges, below = oracles.relations(c.n, oracles.as_sets(c))
    # removal order: PEO and linear extension (smaller elements removed first)
    assert oracles.is_peo(c.n, edges, [i + 1 for i in removal])
    pos = {v: t for t, v in enumerate(removal)}
    assert all(pos[i - 1] < pos[j - 1] for i, j in below)
    # k equals clique number minus one
    assert v.k == oracles.max_clique(c.n, edges) - 1
    # each step's canonical-form decomposition, and deletion of each neuron
    cf = canonical_form(c)
    for i in range(c.n):
        assert canonical_form(delete_neurons(c, bit(i))) == cf.without(i)
    alive = full_mask(c.n)
    for step in order.steps:
        sub = delete_neurons(c, full_mask(c.n) & ~alive)
        rest = delete_neurons(c, full_mask(c.n) & ~(alive & ~bit(step.neuron)))
        keep = list(bits(alive))
        idx = keep.index(step.neuron)
        local = {old: new for new, old in enumerate(keep)}

        keep_rest = [j for j in keep if j != step.neuron]
        # labels of the smaller code, renumbered into this stage's labels
        back = {t: keep.index(j) for t, j in enumerate(keep_rest)}

        def lift(f, back=back):
            return PseudoMonomial(sum(bit(back[t]) for t in bits(f.pos)), sum(bit(back[t]) for t in bits(f.neg)))

        expected = {lift(f) for f in canonical_form(rest).elements}
        expected |= {PseudoMonomial(bit(idx) | bit(local[j]), 0) for j in keep if j != step.neuron and not step.tau >> j & 1}
        expected |= {PseudoMonomial(bit(idx), bit(local[j])) for j in bits(step.sigma)}
        assert canonical_form(sub).elements == expected
        alive &= ~bit(step.neuron)
    # replay
    assert replay(order) == c
    # every maximal clique restricts to a full power set
    for clique in order.cliques:
        if clique.bit_count() == v.k + 1:
            restricted = delete_neurons(c, full_mask(c.n) & ~clique)
            assert len(restricted.words) == 1 << restricted.n


def test_structural_properties_sample():
    rng = random.Random(3)
    for seed in range(40):
        c, _ = random_pierced_code(rng.randint(1, 8), rng.randint(0, 3), seed)
        check_structural(c)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 3), st.integers(0, 2 ** 32))
def test_structural_properties_hypothesis(n, k, seed):
    c, _ = random_pierced_code(n, k, seed)
    check_structural(c)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7), st.integers(0, 2), st.integers(0, 2 ** 32), st.randoms())
def test_recognition_invariant_under_relabeling(n, k, seed, rnd):
    c, _ = random_pierced_code(n, k, seed)
    perm = list(range(n))
    rnd.shuffle(perm)
    d = Code(n, frozenset(sum(bit(perm[i]) for i in bits(w)) for w in c.words))
    a, b = compute_piercing_order(c), compute_piercing_order(d)
    assert isinstance(b, Pierced) and a.k == b.k


def test_random_non_pierced_codes_are_rejected_consistently():
    rng = random.Random(9)
    for _ in range(80):
        n = rng.randint(2, 6)
        words = {0} | {rng.randrange(1 << n) for _ in range(rng.randint(1, 12))}
        c, _ = canonicalize(Code(n, frozenset(words)))
        v = compute_piercing_order(c, debug=True)
        if isinstance(v, Pierced):
            assert replay(v.order) == c
        else:
            # no removal sequence at all works: brute force for tiny n
            if c.n <= 5:
                for perm in itertools.permutations(range(c.n)):
                    with pytest.raises(NotPierced):
                        order_from_removal(c, perm)
