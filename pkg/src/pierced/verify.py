"""Independent checks that a realization produces the intended code."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from pierced.code import Code, Interval, bit, bits, format_braced, format_set
from pierced.geometry import TOL, Realization, WitnessRegistry, sign_vector
from pierced.ideal import CanonicalForm
from pierced.structure import build_graph

MC_CHUNK = 50_000
BOUNDARY_GAP = 1e-9


@dataclass(frozen=True)
class WitnessReport:
    witnessed: frozenset[int]
    missing: tuple[int, ...]
    wrong: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.missing and not self.wrong


@dataclass(frozen=True)
class MonteCarloReport:
    samples: int
    discarded: int
    counts: dict[int, int]
    violations: dict[int, int]
    coverage: float

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def warning(self) -> str | None:
        if self.coverage < 1.0:
            return f"only {self.coverage:.1%} of codewords were hit by sampling"
        return None


@dataclass(frozen=True)
class RelationReport:
    failures: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.failures


def _word_of(signs: tuple[int, ...]) -> int:
    return sum(bit(i) for i, s in enumerate(signs) if s > 0)


def _nudge(r: Realization, iv: Interval, target: int, x: np.ndarray) -> np.ndarray:
    """Move off each boundary through ``x`` to the side ``target`` asks for.

    Steps are a small fraction of the distance to every other boundary, so
    no strict sign changes.  Balls are handled one at a time.
    """
    y = np.array(x, dtype=float)
    for j in bits(iv.free):
        b = r.balls[j]
        gaps = [abs(np.linalg.norm(y - o.c) - o.radius) for i, o in enumerate(r.balls) if i != j]
        room = min([g for g in gaps if g > TOL] + [b.radius])
        outward = (y - b.c) / np.linalg.norm(y - b.c)
        y = y + (-1 if target >> j & 1 else 1) * 0.25 * room * outward
    return y


def witness_check(r: Realization, c: Code, reg: WitnessRegistry) -> WitnessReport:
    """Every codeword needs a point whose strict sign vector spells it."""
    found: set[int] = set()
    wrong = []
    for iv, x in sorted(reg.items(), key=lambda kv: kv[0].rank):
        if iv.rank == 0:
            signs = sign_vector(r.balls, x)
            if 0 in signs or _word_of(signs) != iv.sigma:
                wrong.append(f"atom witness for {format_braced(iv.sigma)} has signs {signs}")
                continue
            found.add(iv.sigma)
    for iv, x in reg.items():
        if iv.rank == 0:
            continue
        for w in iv.members():
            if w in found or w not in c.words:
                continue
            y = _nudge(r, iv, w, x)
            signs = sign_vector(r.balls, y)
            if 0 not in signs and _word_of(signs) == w:
                found.add(w)
    missing = tuple(sorted(c.words - found))
    return WitnessReport(frozenset(found & c.words), missing, tuple(wrong))


def monte_carlo_code_check(
    r: Realization, c: Code, samples: int, seed: int, boundary_gap: float = BOUNDARY_GAP
) -> MonteCarloReport:
    """Uniform samples over the inflated bounding box; strict membership."""
    if samples < 1:
        raise ValueError("need at least one sample")
    centers = r.centers()
    radii = r.radii()
    if len(radii) == 0:
        return MonteCarloReport(samples, 0, {0: samples}, {}, 1.0)
    pad = radii.max()
    lo = (centers - radii[:, None]).min(axis=0) - pad
    hi = (centers + radii[:, None]).max(axis=0) + pad
    weights = 1 << np.arange(len(radii), dtype=np.int64)
    counts: dict[int, int] = {}
    discarded = 0
    chunks = range(0, samples, MC_CHUNK)
    seeds = np.random.SeedSequence(seed).spawn(len(chunks))
    for start, ss in zip(chunks, seeds):
        size = min(MC_CHUNK, samples - start)
        rng = np.random.default_rng(ss)
        pts = lo + (hi - lo) * rng.random((size, r.dim))
        dist = np.linalg.norm(pts[:, None, :] - centers[None, :, :], axis=2)
        gap = dist - radii[None, :]
        near = (np.abs(gap) <= boundary_gap).any(axis=1)
        discarded += int(near.sum())
        words = ((gap[~near] < 0) * weights).sum(axis=1)
        uniq, cnt = np.unique(words, return_counts=True)
        for w, n in zip(uniq.tolist(), cnt.tolist()):
            counts[w] = counts.get(w, 0) + n
    violations = {w: n for w, n in counts.items() if w not in c.words}
    coverage = len(set(counts) & c.words) / len(c.words) if c.words else 1.0
    return MonteCarloReport(samples, discarded, dict(sorted(counts.items())), violations, coverage)


def pairwise_relation_check(r: Realization, cf: CanonicalForm) -> RelationReport:
    """Degree-two relations as metric facts about pairs of balls."""
    failures = []

    def dist(i: int, j: int) -> float:
        return float(np.linalg.norm(r.balls[i].c - r.balls[j].c))

    for f in cf.elements:
        if f.degree != 2:
            failures.append(f"{f} is not degree two")
            continue
        if f.neg == 0:
            i, j = bits(f.pos)
            if not dist(i, j) > r.balls[i].radius + r.balls[j].radius:
                failures.append(f"{f}: balls {i + 1} and {j + 1} should be disjoint")
        elif f.pos and f.neg:
            i, j = f.pos.bit_length() - 1, f.neg.bit_length() - 1
            if not dist(i, j) + r.balls[i].radius < r.balls[j].radius:
                failures.append(f"{f}: ball {i + 1} should sit inside ball {j + 1}")
        else:
            failures.append(f"{f}: complement relation cannot hold with ∅ as a codeword")
    if not failures:
        g = build_graph(cf)
        for i, j in g.edges():
            d = dist(i, j)
            ri, rj = r.balls[i].radius, r.balls[j].radius
            if not abs(ri - rj) < d < ri + rj:
                failures.append(f"balls {i + 1} and {j + 1} should cross")
    return RelationReport(tuple(failures))


@dataclass(frozen=True)
class FullReport:
    well_formed: object
    witnesses: WitnessReport
    monte_carlo: MonteCarloReport
    relations: RelationReport

    @property
    def ok(self) -> bool:
        return self.well_formed.ok and self.witnesses.ok and self.monte_carlo.ok and self.relations.ok

    def lines(self, n: int) -> list[str]:
        out = [
            f"well-formed: {'pass' if self.well_formed.ok else 'FAIL'}",
            *[f"  {p}" for p in self.well_formed.problems],
            f"witnesses: {'pass' if self.witnesses.ok else 'FAIL'} ({len(self.witnesses.witnessed)} codewords witnessed)",
            *[f"  missing {format_set(w, n)}" for w in self.witnesses.missing],
            *[f"  {m}" for m in self.witnesses.wrong],
            (
                f"monte carlo: {'pass' if self.monte_carlo.ok else 'FAIL'} ({self.monte_carlo.samples} samples, "
                f"coverage {self.monte_carlo.coverage:.3f}, {self.monte_carlo.discarded} near boundaries)"
            ),
            *[f"  observed non-codeword {format_set(w, n)} x{k}" for w, k in self.monte_carlo.violations.items()],
            f"pairwise relations: {'pass' if self.relations.ok else 'FAIL'}",
            *[f"  {m}" for m in self.relations.failures],
        ]
        if self.monte_carlo.warning:
            out.append(f"warning: {self.monte_carlo.warning}")
        return out


def verify_all(
    r: Realization,
    c: Code,
    cf: CanonicalForm,
    reg: WitnessRegistry | None,
    samples: int,
    seed: int,
    tol: float = TOL,
) -> FullReport:
    from pierced.geometry import well_formed_check

    return FullReport(
        well_formed_check(r, tol),
        witness_check(r, c, reg) if reg is not None else _witness_by_search(r, c, samples, seed),
        monte_carlo_code_check(r, c, samples, seed, tol),
        pairwise_relation_check(r, cf),
    )


def _witness_by_search(r: Realization, c: Code, samples: int, seed: int) -> WitnessReport:
    """Without a registry, look for atoms near centres and sampled points."""
    found = set()
    rng = np.random.default_rng(seed)
    for b in r.balls:
        for scale in (0.0, 0.5, 0.9, 0.99, 1.01, 1.1):
            for _ in range(1 if scale == 0 else 64):
                u = rng.normal(size=r.dim)
                u /= np.linalg.norm(u)
                x = b.c + scale * b.radius * u
                signs = sign_vector(r.balls, x)
                if 0 not in signs:
                    found.add(_word_of(signs))
    report = monte_carlo_code_check(r, c, samples, seed)
    found |= set(report.counts)
    return WitnessReport(frozenset(found & c.words), tuple(sorted(c.words - found)))
