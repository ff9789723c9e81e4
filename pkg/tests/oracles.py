"""Slow reference implementations that share no code with the package.

Codes here are sets of frozensets of 1-based labels.
"""

from itertools import combinations, product


def as_sets(code):
    return {frozenset(i + 1 for i in range(code.n) if w >> i & 1) for w in code.words}


def vanishes(pos, neg, words):
    return not any(pos <= w and not (neg & w) for w in words)


def canonical_form(n, words):
    """All pseudo-monomials in the ideal, then keep the divisibility-minimal ones."""
    members = []
    for signs in product((None, "x", "1-x"), repeat=n):
        pos = frozenset(i + 1 for i, s in enumerate(signs) if s == "x")
        neg = frozenset(i + 1 for i, s in enumerate(signs) if s == "1-x")
        if (pos or neg) and vanishes(pos, neg, words):
            members.append((pos, neg))
    return {
        (p, q)
        for p, q in members
        if not any((p2, q2) != (p, q) and p2 <= p and q2 <= q for p2, q2 in members)
    }


def relations(n, words):
    """Graph edges and containments read directly off the codewords."""
    edges, below = set(), set()
    for i, j in combinations(range(1, n + 1), 2):
        both = any(i in w and j in w for w in words)
        only_i = any(i in w and j not in w for w in words)
        only_j = any(j in w and i not in w for w in words)
        if both and only_i and only_j:
            edges.add((i, j))
        if both and not only_i:
            below.add((i, j))
        if both and not only_j:
            below.add((j, i))
    return edges, below


def is_peo(n, edges, order):
    adj = {v: set() for v in range(1, n + 1)}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    for pos, v in enumerate(order):
        later = adj[v] & set(order[pos + 1:])
        if any(b not in adj[a] for a, b in combinations(later, 2)):
            return False
    return True


def max_clique(n, edges):
    adj = {v: set() for v in range(1, n + 1)}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    best = 1 if n else 0
    for size in range(2, n + 1):
        if any(all(b in adj[a] for a, b in combinations(c, 2)) for c in combinations(range(1, n + 1), size)):
            best = size
        else:
            break
    return best
