"""The relationship graph G(C) and containment poset P(C) of a degree-two code.

Both structures live on the 0-based neuron labels of their code and carry a
``vertices`` mask, so deleting neurons is just restriction.
"""

from __future__ import annotations

from dataclasses import dataclass

from pierced.code import bit, bits, full_mask, popcount
from pierced.ideal import CanonicalForm, is_degree_two


class NotDegreeTwo(ValueError):
    pass


class OrderAxiomViolation(ValueError):
    pass


class InvalidPeo(ValueError):
    pass


@dataclass(frozen=True)
class RelGraph:
    n: int
    adj: tuple[int, ...]
    vertices: int

    def neighbors(self, i: int) -> int:
        return self.adj[i] & self.vertices

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adj[i] >> j & 1) and bool(self.vertices >> i & 1) and bool(self.vertices >> j & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in bits(self.vertices) for j in bits(self.neighbors(i)) if i < j]

    def is_clique(self, mask: int) -> bool:
        if mask & ~self.vertices:
            return False
        return all((mask & ~bit(i)) & ~self.adj[i] == 0 for i in bits(mask))

    def is_simplicial(self, i: int) -> bool:
        return self.is_clique(self.neighbors(i))

    def restrict(self, vertices: int) -> RelGraph:
        return RelGraph(self.n, self.adj, self.vertices & vertices)

    def without(self, i: int) -> RelGraph:
        return self.restrict(~bit(i))


@dataclass(frozen=True)
class ContainmentPoset:
    """``lt(i, j)`` means ball i sits inside ball j in every realization."""

    n: int
    up: tuple[int, ...]
    vertices: int

    def lt(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1) and bool(self.vertices >> i & 1) and bool(self.vertices >> j & 1)

    def above(self, i: int) -> int:
        """Strict up-set: everything containing ``i``."""
        return self.up[i] & self.vertices

    def below(self, i: int) -> int:
        """Strict down-set (order ideal): everything contained in ``i``."""
        return sum(bit(j) for j in bits(self.vertices) if self.up[j] >> i & 1)

    def comparable(self, i: int, j: int) -> bool:
        return self.lt(i, j) or self.lt(j, i)

    def is_minimal(self, i: int) -> bool:
        return self.below(i) == 0

    def relations(self) -> list[tuple[int, int]]:
        return [(i, j) for i in bits(self.vertices) for j in bits(self.above(i))]

    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram edges (i, j) with i < j and nothing in between."""
        out = []
        for i in bits(self.vertices):
            above = self.above(i)
            for j in bits(above):
                if not any(self.up[m] >> j & 1 for m in bits(above & ~bit(j))):
                    out.append((i, j))
        return out

    def restrict(self, vertices: int) -> ContainmentPoset:
        return ContainmentPoset(self.n, self.up, self.vertices & vertices)

    def without(self, i: int) -> ContainmentPoset:
        return self.restrict(~bit(i))


def build_graph(cf: CanonicalForm) -> RelGraph:
    if not is_degree_two(cf):
        raise NotDegreeTwo("relationship graph needs a degree-two canonical form")
    n = cf.n
    everything = full_mask(n)
    adj = [everything & ~bit(i) for i in range(n)]
    for f in cf.elements:
        i, j = bits(f.support)
        adj[i] &= ~bit(j)
        adj[j] &= ~bit(i)
    return RelGraph(n, tuple(adj), everything)


def build_poset(cf: CanonicalForm) -> ContainmentPoset:
    if not is_degree_two(cf):
        raise NotDegreeTwo("containment poset needs a degree-two canonical form")
    n = cf.n
    up = [0] * n
    for f in cf.elements:
        if popcount(f.pos) == 1 and popcount(f.neg) == 1:
            up[f.pos.bit_length() - 1] |= f.neg
    for i in range(n):
        if up[i] >> i & 1:
            raise OrderAxiomViolation(f"neuron {i + 1} below itself")
        for j in bits(up[i]):
            if up[j] >> i & 1:
                raise OrderAxiomViolation(f"neurons {i + 1} and {j + 1} contain each other")
            if up[j] & ~up[i]:
                k = (up[j] & ~up[i]).bit_length() - 1
                raise OrderAxiomViolation(f"{i + 1} < {j + 1} < {k + 1} but not {i + 1} < {k + 1}")
    return ContainmentPoset(n, tuple(up), full_mask(n))


@dataclass(frozen=True)
class PeoResult:
    chordal: bool
    order: tuple[int, ...] | None = None


def is_perfect_elimination_order(g: RelGraph, order: list[int] | tuple[int, ...]) -> bool:
    """Each vertex's later neighbours must form a clique."""
    if sorted(order) != list(bits(g.vertices)):
        return False
    later = g.vertices
    for v in order:
        later &= ~bit(v)
        if not g.is_clique(g.neighbors(v) & later):
            return False
    return True


def chordality(g: RelGraph) -> PeoResult:
    """Maximum cardinality search, then an explicit PEO check.

    MCS visits vertices in an order whose reverse is a perfect elimination
    order exactly when the graph is chordal.  Ties go to the lowest index.
    """
    weight = {v: 0 for v in bits(g.vertices)}
    visit = []
    while weight:
        v = max(weight, key=lambda u: (weight[u], -u))
        del weight[v]
        visit.append(v)
        for u in bits(g.neighbors(v)):
            if u in weight:
                weight[u] += 1
    order = tuple(reversed(visit))
    if is_perfect_elimination_order(g, order):
        return PeoResult(True, order)
    return PeoResult(False, None)


def max_clique_size(g: RelGraph, peo: list[int] | tuple[int, ...]) -> int:
    if not is_perfect_elimination_order(g, peo):
        raise InvalidPeo("not a perfect elimination order of this graph")
    if not peo:
        return 0
    later = g.vertices
    best = 0
    for v in peo:
        later &= ~bit(v)
        best = max(best, popcount(g.neighbors(v) & later))
    return best + 1


def find_elimination_neuron(g: RelGraph, p: ContainmentPoset) -> int | None:
    """Lowest neuron that is simplicial in ``g`` and minimal in ``p``."""
    for i in bits(g.vertices & p.vertices):
        if p.is_minimal(i) and g.is_simplicial(i):
            return i
    return None
