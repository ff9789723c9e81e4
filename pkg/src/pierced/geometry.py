"""Well-formed open-ball realizations built one piercing at a time.

The construction keeps a registry mapping intervals to points where they are
pierceable.  Each new ball is centred at the registered point of its
interval and made small enough that every other registered point survives;
the intervals it creates get fresh points near its centre.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from pierced.code import Code, Interval, bit, bits, format_braced, popcount
from pierced.piercing import PiercingOrder, PiercingStep
from pierced.splitting import SplitCertificate, is_accessible
from pierced.structure import RelGraph

TOL = 1e-9
MIN_RADIUS = 1e-12
RESCALE = 1e3
MAX_RESCALES = 2
SAMPLE_BUDGET = 100_000


class DegenerateConfiguration(ValueError):
    pass


class NoPointFound(RuntimeError):
    pass


class RadiusUnderflow(RuntimeError):
    pass


class DimensionTooSmall(ValueError):
    pass


@dataclass(frozen=True)
class Ball:
    center: tuple[float, ...]
    radius: float

    def __post_init__(self):
        if not self.radius > 0 or not math.isfinite(self.radius):
            raise ValueError(f"radius must be positive and finite, got {self.radius}")
        if not all(math.isfinite(x) for x in self.center):
            raise ValueError("center must be finite")

    @property
    def c(self) -> np.ndarray:
        return np.asarray(self.center, dtype=float)

    @property
    def dim(self) -> int:
        return len(self.center)


@dataclass(frozen=True)
class Realization:
    dim: int
    balls: tuple[Ball, ...]

    def __post_init__(self):
        for b in self.balls:
            if b.dim != self.dim:
                raise ValueError(f"ball of dimension {b.dim} in a {self.dim}-dimensional realization")

    def centers(self) -> np.ndarray:
        return np.array([b.center for b in self.balls], dtype=float).reshape(len(self.balls), self.dim)

    def radii(self) -> np.ndarray:
        return np.array([b.radius for b in self.balls], dtype=float)

    def with_radius(self, i: int, radius: float) -> Realization:
        balls = list(self.balls)
        balls[i] = Ball(balls[i].center, radius)
        return Realization(self.dim, tuple(balls))

    def to_document(self, witnesses: dict[Interval, np.ndarray] | None = None) -> dict:
        doc = {
            "dim": self.dim,
            "balls": [{"center": [float(x) for x in b.center], "radius": float(b.radius)} for b in self.balls],
        }
        if witnesses:
            doc["witnesses"] = [
                {"sigma": _labels(iv.sigma), "tau": _labels(iv.tau), "point": [float(x) for x in pt]}
                for iv, pt in sorted(witnesses.items(), key=lambda kv: (kv[0].rank, kv[0].sigma, kv[0].tau))
            ]
        return doc

    @classmethod
    def from_document(cls, doc: dict) -> Realization:
        dim = doc["dim"]
        balls = tuple(Ball(tuple(float(x) for x in b["center"]), float(b["radius"])) for b in doc["balls"])
        return cls(int(dim), balls)


def _labels(mask: int) -> list[int]:
    return [i + 1 for i in bits(mask)]


@dataclass(frozen=True)
class SphereFlat:
    """``{center + radius * u : u a unit vector in span(basis)}``.

    ``basis`` has one orthonormal row per direction; a single row means the
    sphere is the pair of points ``center ± radius * basis[0]``.
    """

    center: np.ndarray
    radius: float
    basis: np.ndarray

    @property
    def m(self) -> int:
        return self.basis.shape[0]

    def project(self, x: np.ndarray) -> np.ndarray:
        """Nearest point of the sphere to ``x``."""
        y = self.basis.T @ (self.basis @ (x - self.center))
        norm = np.linalg.norm(y)
        if norm == 0:
            y = self.basis[0]
            norm = 1.0
        return self.center + self.radius * y / norm

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        if self.m != 1:
            raise ValueError("only a 0-sphere has finitely many points")
        return self.center + self.radius * self.basis[0], self.center - self.radius * self.basis[0]

    def tangent(self, x: np.ndarray) -> np.ndarray:
        """Orthonormal rows spanning the tangent space of the sphere at ``x``."""
        radial = self.basis @ (x - self.center)
        radial /= np.linalg.norm(radial)
        # Complement of ``radial`` inside span(basis).
        q, _ = np.linalg.qr(np.column_stack([radial, np.eye(self.m)]))
        return (q[:, 1:self.m].T @ self.basis).reshape(self.m - 1, -1)


def sign_vector(balls: list[Ball] | tuple[Ball, ...], p: np.ndarray, tol: float = TOL) -> tuple[int, ...]:
    """+1 inside, 0 on the boundary within ``tol``, -1 outside the closure."""
    out = []
    for b in balls:
        gap = np.linalg.norm(np.asarray(p, dtype=float) - b.c) - b.radius
        out.append(0 if abs(gap) <= tol else (1 if gap < 0 else -1))
    return tuple(out)


def sphere_flat_intersection(balls: list[Ball] | tuple[Ball, ...], tol: float = TOL) -> SphereFlat | None:
    """Intersection of the boundary spheres, or None when it is empty.

    Spheres are processed smallest first; each one cuts the current sphere in
    its radical hyperplane.  Tangency and concentric coincidence raise
    :class:`DegenerateConfiguration`.
    """
    if not balls:
        raise ValueError("need at least one ball")
    d = balls[0].dim
    if len(balls) > d + 1:
        raise ValueError(f"at most {d + 1} spheres in dimension {d}")
    order = sorted(balls, key=lambda b: (b.radius, b.center))
    first = order[0]
    center, radius, basis = first.c, first.radius, np.eye(d)
    for b in order[1:]:
        off = b.c - center
        w = basis.T @ (basis @ off)
        s = (radius ** 2 + off @ off - b.radius ** 2) / 2
        wn = np.linalg.norm(w)
        if wn <= tol:
            if abs(s) <= tol * max(1.0, radius):
                raise DegenerateConfiguration("concentric spheres within tolerance")
            return None
        t = s / wn
        if basis.shape[0] == 1:
            if abs(abs(t) - radius) <= tol:
                raise DegenerateConfiguration("a point lies on more spheres than the dimension allows")
            return None
        h2 = radius ** 2 - t ** 2
        if abs(t) > radius + tol:
            return None
        if h2 <= (tol * max(1.0, radius)) ** 2 or abs(t) >= radius - tol:
            raise DegenerateConfiguration("tangent spheres within tolerance")
        unit = w / wn
        center = center + t * unit
        radius = math.sqrt(h2)
        basis = _complement(basis, unit)
    return SphereFlat(center, radius, basis)


def _complement(basis: np.ndarray, unit: np.ndarray) -> np.ndarray:
    coords = basis @ unit
    q, _ = np.linalg.qr(np.column_stack([coords, np.eye(basis.shape[0])]))
    return q[:, 1:basis.shape[0]].T @ basis


# --- witness registry ---------------------------------------------------------------

@dataclass
class WitnessRegistry:
    points: dict[Interval, np.ndarray] = field(default_factory=dict)

    def __contains__(self, iv: Interval) -> bool:
        return iv in self.points

    def __getitem__(self, iv: Interval) -> np.ndarray:
        return self.points[iv]

    def __len__(self) -> int:
        return len(self.points)

    def put(self, iv: Interval, x: np.ndarray) -> None:
        self.points[iv] = np.array(x, dtype=float)

    def items(self):
        return self.points.items()

    def scaled(self, factor: float) -> WitnessRegistry:
        return WitnessRegistry({iv: x * factor for iv, x in self.points.items()})


def _pattern_ok(balls: dict[int, Ball], iv: Interval, x: np.ndarray, margin: float, tol: float = TOL) -> bool:
    """Sign pattern of ``iv`` at ``x``: inside σ, on τ∖σ, outside the rest,
    with strict entries at least ``margin`` away from their boundary."""
    for j, b in balls.items():
        gap = float(np.linalg.norm(x - b.c) - b.radius)
        if iv.free >> j & 1:
            if abs(gap) > tol:
                return False
        elif iv.sigma >> j & 1:
            if gap > -margin:
                return False
        elif gap < margin:
            return False
    return True


def registry_errors(balls: dict[int, Ball], reg: WitnessRegistry, tol: float = TOL) -> list[str]:
    return [
        f"witness for {iv} has the wrong sign pattern"
        for iv, x in reg.items()
        if not _pattern_ok(balls, iv, x, 0.0, tol)
    ]


def find_pierceable_point(
    balls: dict[int, Ball],
    iv: Interval,
    gamma: int,
    start: np.ndarray,
    step: float,
    margin: float,
) -> np.ndarray:
    """Walk from a point on every sphere in ``gamma`` to one piercing ``iv``.

    Neurons of ``gamma`` are handled in ascending order: each one outside
    τ∖σ is pushed to its side along the intersection of the spheres still
    required, with the step shrunk until nothing already fixed breaks.
    Every ball outside ``gamma`` must already have the right sign at
    ``start``.
    """
    x = np.array(start, dtype=float)
    on = gamma
    fixed = 0
    for i in bits(gamma):
        if iv.free >> i & 1:
            continue
        rest = on & ~bit(i)
        flat = sphere_flat_intersection([balls[j] for j in bits(rest)]) if rest else None
        if rest and flat is None:
            raise NoPointFound(f"spheres {format_braced(rest)} do not meet")
        outward = (x - balls[i].c) / np.linalg.norm(x - balls[i].c)
        direction = -outward if iv.sigma >> i & 1 else outward
        if flat is not None:
            if flat.m < 2:
                raise NoPointFound("no room to move along a 0-sphere")
            tangent = flat.tangent(x)
            direction = tangent.T @ (tangent @ direction)
        norm = np.linalg.norm(direction)
        if norm <= 1e-15:
            raise NoPointFound(f"sphere {i + 1} is tangent to the walk")
        direction /= norm
        partial = Interval(iv.sigma & (fixed | bit(i)), (iv.sigma & (fixed | bit(i))) | (rest & ~fixed) | (iv.free & fixed))
        sub = {j: balls[j] for j in bits(fixed | on)}
        for shrink in range(40):
            y = x + step * 0.5 ** shrink * direction
            if flat is not None:
                y = flat.project(y)
            if _pattern_ok(sub, partial, y, margin):
                x = y
                break
        else:
            raise NoPointFound(f"walk stalled at neuron {i + 1} for {iv}")
        on &= ~bit(i)
        fixed |= bit(i)
    if not _pattern_ok(balls, iv, x, margin):
        raise NoPointFound(f"walk ended off the pattern of {iv}")
    return x


def _sample_point(
    balls: dict[int, Ball],
    iv: Interval,
    around: np.ndarray,
    spread: float,
    flat: SphereFlat | None,
    margin: float,
    rng: np.random.Generator,
) -> np.ndarray | None:
    d = around.shape[0]
    left = SAMPLE_BUDGET
    while left > 0:
        batch = min(left, 5000)
        left -= batch
        raw = rng.normal(size=(batch, d))
        raw /= np.linalg.norm(raw, axis=1, keepdims=True)
        raw *= spread * rng.random((batch, 1)) ** (1 / d)
        for y in around + raw:
            if flat is not None:
                y = flat.project(y)
            if _pattern_ok(balls, iv, y, margin):
                return y
    return None


# --- the construction ------------------------------------------------------------

@dataclass
class _State:
    dim: int
    k: int
    balls: dict[int, Ball]
    reg: WitnessRegistry
    g: RelGraph | None
    split: SplitCertificate | None
    rng: np.random.Generator
    alive: int = 0
    debug: bool = False

    def wanted(self, iv: Interval) -> bool:
        """Intervals the induction promises to keep pierceable."""
        if iv.rank > min(self.k, self.dim):
            return False
        if iv.rank < self.dim:
            return True
        if self.split is None or self.g is None:
            return False
        return is_accessible(iv, self.g, self.split, self.k, self.alive)


def _flat_of(balls: dict[int, Ball], mask: int) -> SphereFlat | None:
    return sphere_flat_intersection([balls[j] for j in bits(mask)]) if mask else None


def _margin(balls: dict[int, Ball], skip: int, x: np.ndarray) -> float:
    out = math.inf
    for j, b in balls.items():
        if skip >> j & 1:
            continue
        out = min(out, abs(float(np.linalg.norm(x - b.c)) - b.radius))
    return out


def add_piercing_ball(st: _State, step: PiercingStep) -> None:
    """Place ball ``step.neuron`` at the witness of its interval and refresh
    the registry (see module docstring)."""
    iv = step.interval
    if iv not in st.reg:
        raise NoPointFound(f"no registered point for {iv} before piercing neuron {step.neuron + 1}")
    p = st.reg[iv]
    free = iv.free
    r = iv.rank
    d = st.dim
    n = step.neuron

    flat = _flat_of(st.balls, free)
    normals = np.array([(p - st.balls[j].c) / st.balls[j].radius for j in bits(free)]).reshape(r, d)

    bounds = [_margin(st.balls, free, p)]
    bounds += [float(np.linalg.norm(p - x)) for other, x in st.reg.items() if other != iv]
    bounds += [st.balls[j].radius for j in bits(free)]
    q = None
    if r:
        smin = float(np.linalg.svd(normals, compute_uv=False).min())
        bounds.append(smin * min(st.balls[j].radius for j in bits(free)) / math.sqrt(r))
        if flat is None:
            raise NoPointFound(f"spheres {format_braced(free)} do not meet")
        if flat.m == 1:
            a, b = flat.points()
            q = a if np.linalg.norm(a - p) > np.linalg.norm(b - p) else b
            bounds.append(float(np.linalg.norm(p - q)))
        else:
            bounds.append(flat.radius)
    rho = 0.25 * min(bounds)
    if not rho >= MIN_RADIUS:
        raise RadiusUnderflow(f"radius {rho:.3g} for neuron {n + 1}")

    new_ball = Ball(tuple(float(v) for v in p), rho)
    st.balls[n] = new_ball
    st.alive |= bit(n)
    del st.reg.points[iv]

    # Re-register the pierced interval away from the new ball.
    if r < d:
        if flat is None:
            y = p + 3 * rho * np.eye(d)[0]
        else:
            tangent = flat.tangent(p)[0]
            radial = (p - flat.center) / flat.radius
            theta = 2 * math.asin(min(1.0, 1.5 * rho / flat.radius))
            y = flat.center + flat.radius * (math.cos(theta) * radial + math.sin(theta) * tangent)
        if _pattern_ok(st.balls, iv, y, 0.0):
            st.reg.put(iv, y)
        else:
            raise NoPointFound(f"could not re-register {iv} after piercing neuron {n + 1}")
    elif q is not None and st.wanted(iv) and _pattern_ok(st.balls, iv, q, 0.0):
        st.reg.put(iv, q)

    # New intervals: each neuron of τ∖σ inside, on or outside; n inside or on.
    members = list(bits(free))
    for choice in itertools.product((1, 0, -1), repeat=r):
        inside = sum(bit(j) for j, c in zip(members, choice) if c == 1)
        zero = sum(bit(j) for j, c in zip(members, choice) if c == 0)
        t = np.array([-float(c) for c in choice])
        for n_on in (False, True):
            sigma2 = iv.sigma | inside | (0 if n_on else bit(n))
            tau2 = sigma2 | zero | (bit(n) if n_on else 0)
            new_iv = Interval(sigma2, tau2)
            if not st.wanted(new_iv):
                continue
            x = _chart_point(st, p, rho, normals, t, zero, n_on, n, new_iv)
            st.reg.put(new_iv, x)

    if st.debug:
        errors = registry_errors(st.balls, st.reg)
        if errors:
            raise AssertionError("; ".join(errors))


def _chart_point(
    st: _State,
    p: np.ndarray,
    rho: float,
    normals: np.ndarray,
    t: np.ndarray,
    zero: int,
    n_on: bool,
    n: int,
    iv: Interval,
) -> np.ndarray:
    d = p.shape[0]
    target = zero | (bit(n) if n_on else 0)
    margin = 10 * TOL
    if not t.any() and not n_on and _pattern_ok(st.balls, iv, p, margin):
        return p.copy()
    if t.any():
        u = np.linalg.lstsq(normals, t, rcond=None)[0]
    else:
        # Stay tangent to every sphere through p.
        null = _null_space(normals, d)
        u = null[0] if null.shape[0] else np.eye(d)[0]
    u = u / np.linalg.norm(u)
    flat = _flat_of(st.balls, target)
    for s in (rho, rho / 2, rho / 4, rho / 8) if not n_on else (rho,):
        if n_on:
            x = p + rho * u
        else:
            x = p + 0.5 * s * u
        if flat is not None:
            x = flat.project(x)
        if _pattern_ok(st.balls, iv, x, margin):
            return x
    # Constraint-by-constraint walk from a point on as many of the relevant spheres as fit.
    gamma = target
    for j in bits(iv.tau & ~iv.sigma & ~target):
        gamma |= bit(j)
    for j in bits((iv.tau | bit(n)) ^ iv.sigma):
        if popcount(gamma) >= d:
            break
        gamma |= bit(j)
    start_flat = _flat_of(st.balls, gamma)
    if start_flat is not None:
        try:
            start = start_flat.project(p + 0.5 * rho * u)
            return find_pierceable_point(st.balls, iv, gamma, start, 0.5 * rho, margin)
        except (NoPointFound, DegenerateConfiguration):
            pass
    found = _sample_point(st.balls, iv, p, rho, flat, margin, st.rng)
    if found is None:
        raise NoPointFound(f"no point found for {iv} after piercing neuron {n + 1}")
    return found


def _null_space(a: np.ndarray, d: int) -> np.ndarray:
    if a.shape[0] == 0:
        return np.eye(d)
    _, s, vt = np.linalg.svd(a)
    rank = int((s > 1e-12).sum())
    null = vt[rank:]
    # Fix signs so the output does not depend on LAPACK conventions.
    for row in null:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1
    return null


def realize(
    c: Code,
    order: PiercingOrder,
    dim: int | None = None,
    split: SplitCertificate | None = None,
    seed: int = 0,
    g: RelGraph | None = None,
    debug: bool = False,
) -> tuple[Realization, WitnessRegistry]:
    """Balls realizing ``c`` in ``dim`` dimensions following ``order``.

    ``dim`` defaults to the minimum allowed by the order's k and ``split``.
    Dimension k needs a splittable certificate and the graph G(C) for the
    accessibility test.
    """
    k = order.k
    splittable = split is not None and split.splittable
    least = 1 if k == 0 else (k if splittable else k + 1)
    if dim is None:
        dim = least
    if dim < least:
        if dim < k:
            reason = f"a code needing {k}-piercings has no well-formed ball realization below dimension {k}"
        else:
            reason = f"the code is not splittable, so dimension {k} is impossible; need {k + 1}"
        raise DimensionTooSmall(f"dimension {dim} too small: {reason}")
    if dim == k and k >= 1 and g is None:
        raise ValueError("realizing in dimension k needs the relationship graph")
    if not order.steps:
        return Realization(dim, ()), WitnessRegistry()

    scale = 1.0
    for attempt in range(MAX_RESCALES + 1):
        try:
            return _build(c, order, dim, k, split if dim == k else None, g, scale, seed, debug)
        except RadiusUnderflow:
            if attempt == MAX_RESCALES:
                raise
            scale *= RESCALE
    raise AssertionError("unreachable")


def _build(c, order, dim, k, split, g, scale, seed, debug):
    rng = np.random.default_rng(seed)
    st = _State(dim, k, {}, WitnessRegistry(), g, split, rng, debug=debug)
    seq = order.piercing_sequence
    first = seq[0].neuron
    if seq[0].sigma or seq[0].tau:
        raise ValueError("the first pierced neuron must have the interval [∅, ∅]")
    e1 = np.eye(dim)[0]
    st.balls[first] = Ball(tuple([0.0] * dim), scale)
    st.alive = bit(first)
    for iv, x in (
        (Interval(0, bit(first)), scale * e1),
        (Interval(bit(first), bit(first)), np.zeros(dim)),
        (Interval(0, 0), 3 * scale * e1),
    ):
        if st.wanted(iv):
            st.reg.put(iv, x)
    for step in seq[1:]:
        add_piercing_ball(st, step)
    balls = tuple(st.balls[i] for i in range(c.n))
    return Realization(dim, balls), st.reg


# --- well-formedness --------------------------------------------------------------

@dataclass(frozen=True)
class WellFormedReport:
    ok: bool
    problems: tuple[str, ...]


def well_formed_check(r: Realization, tol: float = TOL) -> WellFormedReport:
    """Pairwise tangency, then every clique of crossing spheres up to d+1."""
    problems = []
    m = len(r.balls)
    cross = [0] * m
    for i, j in itertools.combinations(range(m), 2):
        a, b = r.balls[i], r.balls[j]
        dist = float(np.linalg.norm(a.c - b.c))
        outer = a.radius + b.radius
        inner = abs(a.radius - b.radius)
        if abs(dist - outer) <= tol or abs(dist - inner) <= tol:
            problems.append(f"spheres {i + 1} and {j + 1} are tangent or coincide")
        elif inner < dist < outer:
            cross[i] |= bit(j)
            cross[j] |= bit(i)

    def grow(clique: list[int], cand: int):
        if len(clique) >= 3:
            try:
                sphere_flat_intersection([r.balls[i] for i in clique], tol)
            except DegenerateConfiguration as exc:
                problems.append(f"spheres {format_braced(sum(bit(i) for i in clique))}: {exc}")
                return
        if len(clique) == r.dim + 1:
            return
        for j in bits(cand):
            grow(clique + [j], cand & cross[j] & ~((bit(j) << 1) - 1))

    for i in range(m):
        grow([i], cross[i] & ~((bit(i) << 1) - 1))
    return WellFormedReport(not problems, tuple(problems))
