"""Recognition of inductively pierced codes and greedy piercing orders."""

from __future__ import annotations

import random
from dataclasses import dataclass

from pierced.code import (
    Code,
    Interval,
    bit,
    bits,
    canonicalize,
    compress_mask,
    delete_neurons,
    format_braced,
    full_mask,
    interval_contained,
    popcount,
)
from pierced.ideal import CanonicalForm, PseudoMonomial, canonical_form, is_degree_two
from pierced.structure import (
    ContainmentPoset,
    RelGraph,
    build_graph,
    build_poset,
    chordality,
    find_elimination_neuron,
    max_clique_size,
)

GENERATOR_RETRIES = 50


class ConsistencyFailure(AssertionError):
    pass


class ReplayMismatch(ValueError):
    pass


class NotPierced(ValueError):
    pass


@dataclass(frozen=True)
class PiercingStep:
    neuron: int
    sigma: int
    tau: int

    def __post_init__(self):
        if self.sigma & ~self.tau:
            raise ValueError("sigma must be a subset of tau")
        if self.tau >> self.neuron & 1:
            raise ValueError("the pierced neuron cannot lie in its own interval")

    @property
    def rank(self) -> int:
        return popcount(self.tau & ~self.sigma)

    @property
    def interval(self) -> Interval:
        return Interval(self.sigma, self.tau)

    def __str__(self) -> str:
        return (
            f"pierce neuron={self.neuron + 1} sigma={format_braced(self.sigma)} "
            f"tau={format_braced(self.tau)} rank={self.rank}"
        )


@dataclass(frozen=True)
class PiercingOrder:
    """Steps in removal order: ``steps[0]`` is the neuron pierced last.

    Read backwards, the steps rebuild the code from ``{∅}``; the removal
    order itself is a perfect elimination order of G(C) and a linear
    extension of P(C).
    """

    n: int
    steps: tuple[PiercingStep, ...]
    cliques: tuple[int, ...]

    @property
    def removal_order(self) -> tuple[int, ...]:
        return tuple(s.neuron for s in self.steps)

    @property
    def piercing_sequence(self) -> tuple[PiercingStep, ...]:
        """Steps in construction order, first-pierced first."""
        return tuple(reversed(self.steps))

    @property
    def k(self) -> int:
        return max((s.rank for s in self.steps), default=0)


@dataclass(frozen=True)
class Pierced:
    order: PiercingOrder
    k: int
    cf: CanonicalForm
    graph: RelGraph
    poset: ContainmentPoset


@dataclass(frozen=True)
class NotDegreeTwo:
    witness: PseudoMonomial
    cf: CanonicalForm


@dataclass(frozen=True)
class NotChordal:
    cf: CanonicalForm
    graph: RelGraph
    poset: ContainmentPoset


RecognitionVerdict = Pierced | NotDegreeTwo | NotChordal


def verify_abstract_piercing(c: Code, i: int, iv: Interval) -> bool:
    """Whether neuron ``i`` pierces ``c`` along ``iv`` in the abstract sense.

    ``iv`` is given over the labels of ``c`` and must avoid ``i``.
    """
    if (iv.sigma | iv.tau) >> i & 1:
        raise ValueError("interval must not involve the pierced neuron")
    keep = full_mask(c.n) & ~bit(i)
    deleted = delete_neurons(c, bit(i))
    if not interval_contained(deleted, Interval(compress_mask(iv.sigma, keep), compress_mask(iv.tau, keep))):
        return False
    with_i = {w for w in c.words if w >> i & 1}
    if with_i != {w | bit(i) for w in iv.members()}:
        return False
    without_i = {w for w in c.words if not w >> i & 1}
    # Every codeword of the deletion must already be a codeword of c.
    return {w & ~bit(i) for w in c.words} <= without_i


def _check_against_scratch(c: Code, alive: int, g: RelGraph, p: ContainmentPoset) -> None:
    sub = delete_neurons(c, full_mask(c.n) & ~alive)
    cf = canonical_form(sub)
    g2, p2 = build_graph(cf), build_poset(cf)
    for i_new, i in enumerate(bits(alive)):
        if compress_mask(g.neighbors(i), alive) != g2.neighbors(i_new):
            raise ConsistencyFailure(f"graph of deletion differs at neuron {i + 1}")
        if compress_mask(p.above(i), alive) != p2.above(i_new):
            raise ConsistencyFailure(f"poset of deletion differs at neuron {i + 1}")


def compute_piercing_order(c: Code, debug: bool = False) -> RecognitionVerdict:
    """Greedy elimination: canonical form, degree-two test, then repeatedly
    strip an elimination neuron.

    Each step pierces the interval from the neuron's up-set in P(C) to the
    up-set plus its neighbourhood in G(C), read off the structures of the
    partially deleted code.  ``debug`` rebuilds those structures from scratch
    at every step and compares.
    """
    cf = canonical_form(c)
    if not is_degree_two(cf):
        witness = min((f for f in cf.elements if f.degree != 2), key=lambda f: (f.degree, str(f)))
        return NotDegreeTwo(witness, cf)
    g, p = build_graph(cf), build_poset(cf)
    alive = full_mask(c.n)
    steps = []
    cliques = []
    while alive:
        gg, pp = g.restrict(alive), p.restrict(alive)
        if debug:
            _check_against_scratch(c, alive, gg, pp)
        i = find_elimination_neuron(gg, pp)
        if i is None:
            if chordality(gg).chordal:
                raise ConsistencyFailure("chordal degree-two code without an elimination neuron")
            return NotChordal(cf, g, p)
        sigma = pp.above(i)
        nbrs = gg.neighbors(i)
        steps.append(PiercingStep(i, sigma, sigma | nbrs))
        cliques.append(nbrs | bit(i))
        alive &= ~bit(i)
    order = PiercingOrder(c.n, tuple(steps), tuple(cliques))
    return Pierced(order, min_k(order, g), cf, g, p)


def min_k(order: PiercingOrder, g: RelGraph | None = None) -> int:
    """Largest step rank; cross-checked against the clique number of G(C)."""
    k = order.k
    if g is not None:
        clique = max_clique_size(g, order.removal_order)
        if clique - 1 != k:
            raise ConsistencyFailure(f"max rank {k} but largest clique has size {clique}")
    return k


def replay(order: PiercingOrder) -> Code:
    """Rebuild the code by applying the steps from the first-pierced neuron on."""
    words = {0}
    present = 0
    for step in order.piercing_sequence:
        if (step.sigma | step.tau) & ~present:
            raise ReplayMismatch(f"step for neuron {step.neuron + 1} refers to neurons not yet pierced")
        if not all(w in words for w in step.interval.members()):
            raise ReplayMismatch(f"interval {step.interval} not contained before piercing {step.neuron + 1}")
        words |= {w | bit(step.neuron) for w in step.interval.members()}
        present |= bit(step.neuron)
    return Code(order.n, frozenset(words))


def order_from_removal(c: Code, removal: list[int] | tuple[int, ...]) -> PiercingOrder:
    """Check a proposed removal sequence straight from the codewords.

    At each stage the codewords containing the removed neuron must be a
    translate of an interval that the rest of the code contains.  Raises
    :class:`NotPierced` naming the first neuron that fails.
    """
    if sorted(removal) != list(range(c.n)):
        raise ValueError("removal sequence must list every neuron once")
    words = set(c.words)
    steps = []
    for i in removal:
        with_i = [w & ~bit(i) for w in words if w >> i & 1]
        rest = {w for w in words if not w >> i & 1}
        if not with_i:
            raise NotPierced(f"neuron {i + 1} fires in no codeword at this stage")
        sigma = with_i[0]
        tau = 0
        for w in with_i:
            sigma &= w
            tau |= w
        iv = Interval(sigma, tau)
        if len(with_i) != 1 << iv.rank or not all(w in rest for w in iv.members()):
            raise NotPierced(f"neuron {i + 1} is not a piercing of the remaining code")
        steps.append(PiercingStep(i, sigma, tau))
        words = rest
    cliques = tuple(bit(s.neuron) | s.interval.free for s in steps)
    return PiercingOrder(c.n, tuple(steps), cliques)


def random_pierced_code(n: int, k_cap: int, seed: int) -> tuple[Code, PiercingOrder]:
    """Random code built by ``n`` successive piercings of rank at most ``k_cap``.

    Labels are shuffled at the end so the natural order is usually not a
    piercing order.  The returned order lists the generated steps in removal
    order.  Deterministic in ``seed``.
    """
    if n < 1 or k_cap < 0:
        raise ValueError("need n >= 1 and k_cap >= 0")
    rng = random.Random(seed)
    while True:
        words = {0}
        steps = []
        for m in range(n):
            sigma, tau = _sample_interval(words, m, k_cap, rng)
            words |= {w | bit(m) for w in Interval(sigma, tau).members()}
            steps.append(PiercingStep(m, sigma, tau))
        code = Code(n, frozenset(words))
        _, nmap = canonicalize(code)
        if nmap.is_identity:
            break
    perm = list(range(n))
    rng.shuffle(perm)

    def relabel(mask: int) -> int:
        return sum(bit(perm[i]) for i in bits(mask))

    code = Code(n, frozenset(relabel(w) for w in words))
    removal = tuple(
        PiercingStep(perm[s.neuron], relabel(s.sigma), relabel(s.tau)) for s in reversed(steps)
    )
    cliques = tuple(bit(s.neuron) | (s.tau & ~s.sigma) for s in removal)
    return code, PiercingOrder(n, removal, cliques)


def _sample_interval(words: set[int], m: int, k_cap: int, rng: random.Random) -> tuple[int, int]:
    ordered = sorted(words)
    present = (1 << m) - 1
    for _ in range(GENERATOR_RETRIES):
        gamma = rng.choice(ordered)
        sigma = sum(bit(i) for i in bits(gamma) if rng.random() < 0.5)
        if sigma not in words:
            continue
        spare = present & ~sigma
        r = rng.randint(0, min(k_cap, popcount(spare)))
        tau = sigma
        pool = list(bits(spare))
        rng.shuffle(pool)
        for j in pool:
            if popcount(tau & ~sigma) == r:
                break
            if all(w | bit(j) in words for w in Interval(sigma, tau).members()):
                tau |= bit(j)
        if popcount(tau & ~sigma) == r:
            return sigma, tau
    gamma = rng.choice(ordered)
    return gamma, gamma
