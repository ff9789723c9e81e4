"""Pseudo-monomials over F2 and the canonical form of a code's neural ideal.

The ideal itself is never built.  A pseudo-monomial lies in the ideal exactly
when it vanishes on every codeword, and that criterion drives everything here.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from pierced.code import Code, bits, compress_mask, full_mask, popcount, submasks

DEFAULT_CAP = 14
ORACLE_CAP = 12


class LimitExceeded(ValueError):
    pass


@dataclass(frozen=True, order=True)
class PseudoMonomial:
    """``prod_{i in pos} x_i * prod_{j in neg} (1 - x_j)`` with 0-based masks."""

    pos: int
    neg: int

    def __post_init__(self):
        if self.pos & self.neg:
            raise ValueError("pos and neg must be disjoint")

    @property
    def degree(self) -> int:
        return popcount(self.pos) + popcount(self.neg)

    @property
    def support(self) -> int:
        return self.pos | self.neg

    def depends_on(self, i: int) -> bool:
        return bool(self.support >> i & 1)

    def __str__(self) -> str:
        factors = [f"x{i + 1}" for i in bits(self.pos)]
        factors += [f"(1-x{j + 1})" for j in bits(self.neg)]
        return "*".join(factors) if factors else "1"


def indicator(sigma: int, n: int) -> PseudoMonomial:
    return PseudoMonomial(sigma, full_mask(n) & ~sigma)


def evaluate(f: PseudoMonomial, w: int) -> int:
    return int(f.pos & ~w == 0 and f.neg & w == 0)


def divides(f: PseudoMonomial, g: PseudoMonomial) -> bool:
    return f.pos & ~g.pos == 0 and f.neg & ~g.neg == 0


def in_ideal(f: PseudoMonomial, c: Code) -> bool:
    return not any(evaluate(f, w) for w in c.words)


@dataclass(frozen=True)
class CanonicalForm:
    n: int
    elements: frozenset[PseudoMonomial]

    def __iter__(self):
        return iter(sorted(self.elements, key=lambda f: (f.degree, str(f))))

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, f: PseudoMonomial) -> bool:
        return f in self.elements

    def strings(self) -> list[str]:
        return sorted(str(f) for f in self.elements)

    def without(self, i: int) -> CanonicalForm:
        """Elements not involving neuron ``i``, renumbered as in a deletion."""
        keep = full_mask(self.n) & ~(1 << i)
        return CanonicalForm(
            self.n - 1,
            frozenset(
                PseudoMonomial(compress_mask(f.pos, keep), compress_mask(f.neg, keep))
                for f in self.elements
                if not f.depends_on(i)
            ),
        )


def is_degree_two(cf: CanonicalForm) -> bool:
    return all(f.degree == 2 for f in cf.elements)


# --- production algorithm ------------------------------------------------------

def _box_table(c: Code) -> np.ndarray:
    """Boolean table over all 3^n sign patterns: does the box hold a codeword?

    Entry index is ``sum(digit_i * 3**i)`` with digit 0 = neuron absent
    (factor 1-x_i), 1 = neuron present (factor x_i), 2 = unconstrained.
    """
    n = c.n
    occ = np.zeros(1 << n, dtype=bool)
    occ[np.fromiter(c.words, dtype=np.int64, count=len(c.words))] = True
    # C-order reshape puts bit n-1 on axis 0; reverse so axis a <-> bit a.
    table = occ.reshape((2,) * n).transpose(tuple(range(n - 1, -1, -1))) if n else occ.reshape(())
    for axis in range(n):
        free = np.logical_or(table.take(0, axis=axis), table.take(1, axis=axis))
        table = np.concatenate([table, np.expand_dims(free, axis)], axis=axis)
    # Flatten with axis 0 fastest so that index = sum(digit_a * 3**a).
    return np.asarray(table).transpose(tuple(range(n - 1, -1, -1))).reshape(-1) if n else table.reshape(1)


@lru_cache(maxsize=32)
def _lattice(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(pos, neg, degree) for every table index of the 3^n lattice."""
    size = 3 ** n
    idx = np.arange(size, dtype=np.int64)
    pos = np.zeros(size, dtype=np.int64)
    neg = np.zeros(size, dtype=np.int64)
    for i in range(n):
        digit = (idx // 3 ** i) % 3
        pos |= (digit == 1).astype(np.int64) << i
        neg |= (digit == 0).astype(np.int64) << i
    deg = np.zeros(size, dtype=np.int64)
    for i in range(n):
        deg += ((pos | neg) >> i) & 1
    for arr in (pos, neg, deg):
        arr.flags.writeable = False
    return pos, neg, deg


def _divisible_by_any(pos: np.ndarray, neg: np.ndarray, cpos: np.ndarray, cneg: np.ndarray) -> np.ndarray:
    if cpos.size == 0 or pos.size == 0:
        return np.zeros(pos.shape, dtype=bool)
    out = np.zeros(pos.shape, dtype=bool)
    step = max(1, 4_000_000 // cpos.size)
    for lo in range(0, pos.size, step):
        p = pos[lo:lo + step, None]
        q = neg[lo:lo + step, None]
        hit = ((cpos[None, :] & ~p) == 0) & ((cneg[None, :] & ~q) == 0)
        out[lo:lo + step] = hit.any(axis=1)
    return out


def canonical_form(c: Code, cap: int = DEFAULT_CAP) -> CanonicalForm:
    """Minimal pseudo-monomials vanishing on every codeword.

    Degrees are visited in increasing order; a pseudo-monomial is collected
    when it lies in the ideal and no previously collected element divides
    it.  Ideal membership for all 3^n patterns comes from one box-occupancy
    table, so the cost is O(3^n) rather than O(3^n |C|).
    """
    if c.n > cap:
        raise LimitExceeded(f"canonical_form supports n <= {cap}, got n={c.n}")
    if not c.words:
        raise ValueError("canonical form of the empty code is the unit ideal")
    in_j = ~_box_table(c)
    pos, neg, deg = _lattice(c.n)
    cpos = np.zeros(0, dtype=np.int64)
    cneg = np.zeros(0, dtype=np.int64)
    for d in range(1, c.n + 1):
        cand = np.flatnonzero(in_j & (deg == d))
        if cand.size == 0:
            continue
        p, q = pos[cand], neg[cand]
        keep = ~_divisible_by_any(p, q, cpos, cneg)
        cpos = np.concatenate([cpos, p[keep]])
        cneg = np.concatenate([cneg, q[keep]])
    return CanonicalForm(c.n, frozenset(PseudoMonomial(int(a), int(b)) for a, b in zip(cpos, cneg)))


# --- independent cross-checks ----------------------------------------------------

def _vanishing(words: np.ndarray, pos: np.ndarray, neg: np.ndarray) -> np.ndarray:
    """For each (pos, neg) pair: vanishes on all codewords?  Direct evaluation."""
    out = np.ones(pos.shape, dtype=bool)
    step = max(1, 4_000_000 // max(1, words.size))
    for lo in range(0, pos.size, step):
        p = pos[lo:lo + step, None]
        q = neg[lo:lo + step, None]
        fires = ((words[None, :] & p) == p) & ((words[None, :] & q) == 0)
        out[lo:lo + step] = ~fires.any(axis=1)
    return out


def _all_pseudo_monomials(n: int, max_degree: int | None = None) -> Iterable[tuple[int, int]]:
    top = n if max_degree is None else min(n, max_degree)
    for d in range(1, top + 1):
        for combo in itertools.combinations(range(n), d):
            support = sum(1 << i for i in combo)
            for pos in submasks(support):
                yield pos, support & ~pos


def canonical_form_oracle(c: Code, cap: int = ORACLE_CAP) -> CanonicalForm:
    """Brute force: every pseudo-monomial, membership by evaluation, then
    pairwise divisibility to keep only the minimal ones."""
    if c.n > cap:
        raise LimitExceeded(f"oracle supports n <= {cap}, got n={c.n}")
    pairs = np.array(list(_all_pseudo_monomials(c.n)), dtype=np.int64).reshape(-1, 2)
    words = np.array(sorted(c.words), dtype=np.int64)
    members = pairs[_vanishing(words, pairs[:, 0], pairs[:, 1])]
    mp, mn = members[:, 0], members[:, 1]
    minimal = []
    for a, b in zip(mp, mn):
        proper = ((mp & ~a) == 0) & ((mn & ~b) == 0) & ((mp != a) | (mn != b))
        if not proper.any():
            minimal.append(PseudoMonomial(int(a), int(b)))
    return CanonicalForm(c.n, frozenset(minimal))


def degree_bounded_scan(c: Code, d: int) -> frozenset[PseudoMonomial]:
    """Minimal ideal elements among pseudo-monomials of degree at most ``d``.

    Polynomial in n for fixed d.  Agrees with the low-degree part of the
    canonical form, but says nothing about elements of higher degree.
    """
    if d < 1:
        raise ValueError("degree cap must be at least 1")
    pairs = np.array(list(_all_pseudo_monomials(c.n, d)), dtype=np.int64).reshape(-1, 2)
    words = np.array(sorted(c.words), dtype=np.int64)
    hits = pairs[_vanishing(words, pairs[:, 0], pairs[:, 1])]
    found: list[PseudoMonomial] = []
    for a, b in sorted(map(tuple, hits), key=lambda ab: popcount(ab[0]) + popcount(ab[1])):
        f = PseudoMonomial(int(a), int(b))
        if not any(divides(g, f) for g in found):
            found.append(f)
    return frozenset(found)


def parse_pseudo_monomial(text: str) -> PseudoMonomial:
    """Inverse of ``str(PseudoMonomial)``: ``"x1*(1-x3)"``."""
    pos = neg = 0
    for factor in text.replace(" ", "").split("*"):
        if factor.startswith("(1-x") and factor.endswith(")"):
            neg |= 1 << (int(factor[4:-1]) - 1)
        elif factor.startswith("x"):
            pos |= 1 << (int(factor[1:]) - 1)
        else:
            raise ValueError(f"bad factor {factor!r}")
    return PseudoMonomial(pos, neg)
