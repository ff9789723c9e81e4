"""Attaching sets, splittability, accessible intervals and minimal dimension."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from pierced.code import Interval, bit, bits, format_braced, popcount
from pierced.piercing import NotPierced, Pierced, RecognitionVerdict
from pierced.structure import ContainmentPoset, RelGraph


class NotAClique(ValueError):
    pass


class NotSplittable(ValueError):
    pass


@dataclass(frozen=True)
class CliqueSplit:
    """Attaching set of a k-clique and, when it splits, the chosen A ⊔ B.

    A is the comparability component holding the smallest member; B is the
    other one, or empty.  ``a``/``b`` are None when the set does not split.
    """

    clique: int
    attaching: int
    a: int | None
    b: int | None

    @property
    def splits(self) -> bool:
        return self.a is not None

    def describe(self) -> str:
        head = f"clique {format_braced(self.clique)}: attaching set {format_braced(self.attaching)}"
        if not self.splits:
            return head + " does not split into two incomparable chains"
        return head + f", partition {format_braced(self.a)} ⊔ {format_braced(self.b)}"


@dataclass(frozen=True)
class SplitCertificate:
    k: int
    entries: tuple[CliqueSplit, ...]

    @property
    def splittable(self) -> bool:
        return all(e.splits for e in self.entries)

    def lookup(self, clique: int) -> CliqueSplit | None:
        for e in self.entries:
            if e.clique == clique:
                return e
        return None

    def witness(self) -> CliqueSplit | None:
        """First clique whose attaching set fails to split."""
        return next((e for e in self.entries if not e.splits), None)


def attaching_set(g: RelGraph, sigma: int, k: int | None = None) -> int:
    """Neurons outside ``sigma`` adjacent to all of it.

    When ``sigma`` is a k-clique and k+1 is the clique number, two adjacent
    members would form a (k+2)-clique, so the result must be independent.
    """
    if not g.is_clique(sigma):
        raise NotAClique(f"{format_braced(sigma)} is not a clique of G(C)")
    out = 0
    for i in bits(g.vertices & ~sigma):
        if sigma & ~g.neighbors(i) == 0:
            out |= bit(i)
    if k is not None and popcount(sigma) == k:
        assert all(g.neighbors(i) & out == 0 for i in bits(out)), "attaching set not independent"
    return out


def split_attaching(p: ContainmentPoset, attach: int) -> tuple[int, int] | None:
    """Partition into at most two comparability components, each a chain."""
    comps = []
    left = attach
    while left:
        start = left & -left
        comp = start
        frontier = start
        while frontier:
            i = frontier.bit_length() - 1
            frontier &= ~bit(i)
            new = sum(bit(j) for j in bits(left & ~comp) if p.comparable(i, j))
            comp |= new
            frontier |= new
        comps.append(comp)
        left &= ~comp
    if len(comps) > 2:
        return None
    for comp in comps:
        if any(not p.comparable(i, j) for i, j in itertools.combinations(bits(comp), 2)):
            return None
    comps.sort(key=lambda m: m & -m)
    a = comps[0] if comps else 0
    b = comps[1] if len(comps) > 1 else 0
    return a, b


def is_splittable(g: RelGraph, p: ContainmentPoset, cliques: tuple[int, ...] | list[int]) -> SplitCertificate:
    """Check every k-subset of every recorded (k+1)-clique.

    ``cliques`` are the elimination cliques recorded by the piercing order;
    they contain every maximal clique of a chordal graph.
    """
    top = max((popcount(c) for c in cliques), default=1)
    k = top - 1
    seen = set()
    entries = []
    for c in cliques:
        if popcount(c) != top or k < 1:
            continue
        for drop in bits(c):
            sigma = c & ~bit(drop)
            if sigma in seen:
                continue
            seen.add(sigma)
            attach = attaching_set(g, sigma, k)
            part = split_attaching(p, attach)
            a, b = part if part is not None else (None, None)
            entries.append(CliqueSplit(sigma, attach, a, b))
    entries.sort(key=lambda e: sorted(bits(e.clique)))
    return SplitCertificate(k, tuple(entries))


def exhaustive_split(p: ContainmentPoset, attach: int) -> bool:
    """Slow cross-check: try every bipartition of the attaching set."""
    members = list(bits(attach))

    def chain(m: list[int]) -> bool:
        return all(p.comparable(i, j) for i, j in itertools.combinations(m, 2))

    for choice in range(1 << len(members)):
        a = [m for t, m in enumerate(members) if choice >> t & 1]
        b = [m for t, m in enumerate(members) if not choice >> t & 1]
        if chain(a) and chain(b) and not any(p.comparable(i, j) for i in a for j in b):
            return True
    return False


def is_accessible(
    iv: Interval,
    g: RelGraph,
    split: SplitCertificate,
    k: int,
    alive: int | None = None,
) -> bool:
    """Accessibility of ``iv`` in the code on the ``alive`` neurons.

    Restricting the stored partition to ``alive`` gives the partition of the
    partial code up to swapping sides, and the test is symmetric in A and B.
    """
    if not split.splittable:
        raise NotSplittable("accessibility is only defined for splittable codes")
    if iv.rank < k:
        return True
    if iv.rank > k:
        return False
    alive = g.vertices if alive is None else alive
    free = iv.free
    entry = split.lookup(free)
    if entry is None:
        attach = attaching_set(g, free)
        if attach:
            raise NotSplittable(f"k-clique {format_braced(free)} missing from certificate")
        return True
    a, b = entry.a & alive, entry.b & alive
    meet = iv.sigma & (a | b)
    return meet in (a, b)


def min_realization_dim(verdict: RecognitionVerdict, split: SplitCertificate | None = None) -> int:
    if not isinstance(verdict, Pierced):
        raise NotPierced("minimal dimension is only defined for inductively pierced codes")
    k = verdict.k
    if k == 0:
        return 1
    if split is None:
        split = is_splittable(verdict.graph, verdict.poset, verdict.order.cliques)
    return k if split.splittable else k + 1

