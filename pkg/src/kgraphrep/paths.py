"""Infinite paths of a k-graph: shifts, prefixing, equality, periodicity, orbits.

Two representations are supported.  An eventually periodic path is a finite
prefix followed by a repeated loop whose degree is strictly positive in every
coordinate; all questions about such paths are decided exactly.  A lazy path
carries a segment generator and a declared depth bound, and comparisons
against it degrade to depth-qualified verdicts instead of guessing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .degrees import Degree, degree_range
from .kgraph import (KGraph, Morphism, KGraphError, SourceRangeMismatchError,
                     compose, enumerate_morphisms, factorize, segment)


class DepthExceededError(KGraphError):
    pass


class UndecidedError(KGraphError):
    """A lazy comparison ran out of declared depth before deciding."""


class InfinitePath:
    graph: KGraph
    range: str

    def segment(self, n: Degree) -> Morphism:
        raise NotImplementedError

    @property
    def is_exact(self) -> bool:
        raise NotImplementedError

    def available_depth(self) -> Degree | None:
        """None for exact paths, the declared bound for lazy ones."""
        raise NotImplementedError


@dataclass(frozen=True)
class EventuallyPeriodicPath(InfinitePath):
    """prefix . cycle . cycle . ...; construct through ep_path for normalization."""

    prefix: Morphism
    cycle: Morphism

    def __post_init__(self):
        if self.prefix.graph is not self.cycle.graph:
            raise KGraphError("prefix and cycle belong to different graphs")
        if self.cycle.range != self.cycle.source:
            raise KGraphError(f"cycle {self.cycle} is not a loop")
        if self.prefix.source != self.cycle.range:
            raise SourceRangeMismatchError(
                f"prefix ends at {self.prefix.source}, cycle sits at {self.cycle.range}")
        if any(c < 1 for c in self.cycle.degree.coords):
            raise KGraphError(
                f"cycle degree {self.cycle.degree} must be positive in every coordinate")

    @property
    def graph(self):
        return self.prefix.graph

    @property
    def range(self):
        return self.prefix.range

    @property
    def is_exact(self):
        return True

    def available_depth(self):
        return None

    def _unroll(self, n: Degree) -> Morphism:
        big = self.prefix
        while not n <= big.degree:
            big = compose(big, self.cycle)
        return big

    def segment(self, n: Degree) -> Morphism:
        head, _ = factorize(self._unroll(n), n)
        return head

    def __str__(self):
        cyc = f"({self.cycle})^inf"
        if self.prefix.is_identity():
            return f"{cyc}@{self.range}"
        return f"{self.prefix} {cyc}@{self.range}"


class LazyPath(InfinitePath):
    """A depth-bounded path given by a segment generator.

    The generator must be pure and functorial: for m <= n the degree-m head
    of generate(n) must equal generate(m).
    """

    def __init__(self, graph: KGraph, range_vertex: str, depth: Degree, generate, label: str):
        self.graph = graph
        self.range = range_vertex
        self.depth = depth
        self._generate = generate
        self.label = label
        self._cache: dict[Degree, Morphism] = {}

    @property
    def is_exact(self):
        return False

    def available_depth(self):
        return self.depth

    def segment(self, n: Degree) -> Morphism:
        if not n <= self.depth:
            raise DepthExceededError(f"segment {n} exceeds declared depth {self.depth}")
        got = self._cache.get(n)
        if got is None:
            got = self._generate(n)
            if got.degree != n or got.range != self.range:
                raise KGraphError(f"generator for {self.label} returned a bad segment at {n}")
            self._cache[n] = got
        return got

    def __str__(self):
        return f"{self.label}@{self.range}~depth{self.depth}"


def _primitive_cycle(cycle: Morphism) -> Morphism:
    d = cycle.degree
    g = 0
    for c in d.coords:
        g = _gcd(g, c)
    for j in sorted((j for j in range(2, g + 1) if g % j == 0), reverse=True):
        m = Degree(tuple(c // j for c in d.coords))
        root = segment(cycle, Degree.zero(d.rank), m)
        if root.source != root.range:
            continue
        power = root
        for _ in range(j - 1):
            power = compose(power, root)
        if power == cycle:
            return _primitive_cycle(root)
    return cycle


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def ep_path(prefix: Morphism, cycle: Morphism) -> EventuallyPeriodicPath:
    """Normalized eventually periodic path.

    The cycle is reduced to its primitive power, then single edges are shed
    from the end of the prefix into the cycle (rotating it) as long as they
    match, so structurally equal values are a fast equality pre-check.
    """
    cycle = _primitive_cycle(cycle)
    changed = True
    while changed:
        changed = False
        for color in range(1, prefix.graph.rank + 1):
            if prefix.degree.count(color) == 0:
                continue
            ec = Degree.unit(prefix.graph.rank, color)
            head, last = factorize(prefix, prefix.degree - ec)
            body, tail = factorize(cycle, cycle.degree - ec)
            if last == tail:
                prefix = head
                cycle = _primitive_cycle(compose(last, body))
                changed = True
                break
    return EventuallyPeriodicPath(prefix, cycle)


def pure_cycle_path(cycle: Morphism) -> EventuallyPeriodicPath:
    return ep_path(cycle.graph.identity(cycle.range), cycle)


def path_segment(x: InfinitePath, n: Degree) -> Morphism:
    return x.segment(n)


def shift(x: InfinitePath, m: Degree) -> InfinitePath:
    """Remove the initial degree-m piece."""
    if m.is_zero():
        return x
    if isinstance(x, EventuallyPeriodicPath):
        big = x._unroll(m)
        _, tail = factorize(big, m)
        return ep_path(tail, x.cycle)
    seg = x.segment(m)
    new_depth = x.depth - m if m <= x.depth else None
    if new_depth is None:
        raise DepthExceededError(f"shift by {m} exceeds depth {x.depth}")

    def generate(n, _x=x, _m=m):
        _, tail = factorize(_x.segment(_m + n), _m)
        return tail

    return LazyPath(x.graph, seg.source, new_depth, generate,
                    f"shift{m}.{x.label}")


def prefix_path(lam: Morphism, x: InfinitePath) -> InfinitePath:
    """Prepend the morphism lam; defined when s(lam) = r(x)."""
    if lam.source != x.range:
        raise SourceRangeMismatchError(f"s({lam}) = {lam.source} but r(x) = {x.range}")
    if lam.is_identity():
        return x
    if isinstance(x, EventuallyPeriodicPath):
        return ep_path(compose(lam, x.prefix), x.cycle)

    def generate(n, _lam=lam, _x=x):
        inner = _x.segment(n.clamped_sub(_lam.degree))
        head, _ = factorize(compose(_lam, inner), n)
        return head

    return LazyPath(x.graph, lam.range, x.depth + lam.degree, generate,
                    f"{lam}.{x.label}".replace(" ", "."))


# ---------------------------------------------------------------------------
# Equality


@dataclass(frozen=True)
class PathsVerdict:
    kind: str               # "equal" | "not-equal" | "equal-up-to"
    depth: Degree | None = None

    @property
    def is_equal(self) -> bool:
        return self.kind == "equal"

    @property
    def possibly_equal(self) -> bool:
        return self.kind in ("equal", "equal-up-to")

    def __str__(self):
        if self.kind == "equal-up-to":
            return f"equal-up-to{self.depth}"
        return self.kind


EQUAL = PathsVerdict("equal")
NOT_EQUAL = PathsVerdict("not-equal")


def paths_equal(x: InfinitePath, y: InfinitePath) -> PathsVerdict:
    """Decide x = y; exact for two eventually periodic paths.

    For those, agreement of the degree-N segments with
    N = d(prefix_x) v d(prefix_y) + d(cycle_x) + d(cycle_y) already forces
    equality: the shifted tails are then fully periodic paths with both cycle
    degrees as periods, which pins them down.
    """
    if x is y:
        return EQUAL
    if x.graph is not y.graph or x.range != y.range:
        return NOT_EQUAL
    if isinstance(x, EventuallyPeriodicPath) and isinstance(y, EventuallyPeriodicPath):
        if x.prefix == y.prefix and x.cycle == y.cycle:
            return EQUAL
        n = x.prefix.degree.join(y.prefix.degree) + x.cycle.degree + y.cycle.degree
        return EQUAL if x.segment(n) == y.segment(n) else NOT_EQUAL
    dx = x.available_depth()
    dy = y.available_depth()
    depth = dx if dy is None else dy if dx is None else dx.meet(dy)
    if x.segment(depth) != y.segment(depth):
        return NOT_EQUAL
    return PathsVerdict("equal-up-to", depth)


# ---------------------------------------------------------------------------
# Periodicity


@dataclass(frozen=True)
class PeriodVerdict:
    kind: str               # "periodic" | "aperiodic-up-to"
    period: Degree | None = None
    depth: Degree | None = None

    @property
    def is_periodic(self):
        return self.kind == "periodic"

    def __str__(self):
        if self.kind == "periodic":
            return f"periodic{self.period}"
        return f"aperiodic-up-to{self.depth}"


def is_aperiodic(x: InfinitePath, depth: Degree) -> PeriodVerdict:
    """Look for shifts m != n with sigma^m(x) = sigma^n(x).

    Eventually periodic paths always admit one (the cycle degree works once
    the prefix is consumed), so they report a period.  Lazy paths refute all
    pairs up to `depth` at the available resolution.
    """
    if isinstance(x, EventuallyPeriodicPath):
        base = shift(x, x.prefix.degree)
        for p in degree_range(x.cycle.degree):
            if p.is_zero():
                continue
            if paths_equal(shift(base, p), base).is_equal:
                return PeriodVerdict("periodic", p)
        return PeriodVerdict("periodic", x.cycle.degree)
    # Compare the degree-`depth` windows x(m, m+depth); the generator must
    # reach 2*depth.
    shifts = degree_range(depth)
    cache = {}

    def window(m):
        got = cache.get(m)
        if got is None:
            _, got = factorize(x.segment(m + depth), m)
            cache[m] = got
        return got

    for m, n in itertools.combinations(shifts, 2):
        if window(m) == window(n):
            period = n - m if m <= n else n.join(m) - n.meet(m)
            return PeriodVerdict("periodic", period)
    return PeriodVerdict("aperiodic-up-to", None, depth)


# ---------------------------------------------------------------------------
# Orbits


@dataclass(frozen=True)
class GroupoidWitness:
    """sigma^shift_x(x) = sigma^shift_y(y); the groupoid element is (x, shift_x - shift_y, y)."""

    x: InfinitePath
    shift_x: Degree
    y: InfinitePath
    shift_y: Degree
    exact: bool = True

    def __post_init__(self):
        verdict = paths_equal(shift(self.x, self.shift_x), shift(self.y, self.shift_y))
        if not verdict.possibly_equal:
            raise KGraphError("invalid groupoid witness")

    def degree_difference(self) -> tuple[int, ...]:
        return tuple(a - b for a, b in zip(self.shift_x.coords, self.shift_y.coords))


def _tail_closure(x: EventuallyPeriodicPath) -> dict[tuple, tuple[Degree, EventuallyPeriodicPath]]:
    """All shifts of the periodic tail of x, keyed by an unrolled cycle word.

    The tail is fully periodic, so its shifts form a finite set closed under
    the k coordinate shifts; breadth-first closure enumerates it with a
    witness shift for each element.  Keys are segments of a fixed depth so
    closures of different paths can be intersected.
    """
    tail = shift(x, x.prefix.degree)
    assert isinstance(tail, EventuallyPeriodicPath)
    seen: dict[tuple, tuple[Degree, EventuallyPeriodicPath]] = {}
    frontier = [(x.prefix.degree, tail)]
    key_depth = tail.cycle.degree.scale(2)
    seen[tuple(tail.segment(key_depth).edges)] = (x.prefix.degree, tail)
    units = [Degree.unit(x.graph.rank, c) for c in range(1, x.graph.rank + 1)]
    while frontier:
        shift_amount, path = frontier.pop(0)
        for unit in units:
            nxt = shift(path, unit)
            key = tuple(nxt.segment(key_depth).edges)
            if key not in seen:
                seen[key] = (shift_amount + unit, nxt)
                frontier.append((shift_amount + unit, nxt))
    return seen


def in_same_orbit(x: InfinitePath, y: InfinitePath,
                  search_bound: Degree | None = None) -> GroupoidWitness | None:
    """Exact tail-equivalence decision for two eventually periodic paths.

    Instead of bounding the shifts a priori (single-coordinate shifts of a
    periodic tail can cycle with a longer period than the cycle degree), the
    finite sets of tail shifts of both paths are computed in full and
    intersected.  Lazy paths get a bounded search and an UndecidedError when
    it is exhausted.
    """
    if x.graph is not y.graph:
        return None
    direct = paths_equal(x, y)
    if direct.is_equal:
        zero = Degree.zero(x.graph.rank)
        return GroupoidWitness(x, zero, y, zero)
    if isinstance(x, EventuallyPeriodicPath) and isinstance(y, EventuallyPeriodicPath):
        ax = _tail_closure(x)
        ay = _tail_closure(y)
        depth = (next(iter(ax.values()))[1].cycle.degree
                 + next(iter(ay.values()))[1].cycle.degree)
        bx = {tuple(p.segment(depth).edges): (m, p) for m, p in ax.values()}
        by = {tuple(p.segment(depth).edges): (m, p) for m, p in ay.values()}
        common = sorted(set(bx) & set(by))
        if not common:
            return None
        key = min(common, key=lambda k: (bx[k][0].total(), bx[k][0].coords, k))
        return GroupoidWitness(x, bx[key][0], y, by[key][0])
    bound_x = search_bound or _lazy_search_bound(x)
    bound_y = search_bound or _lazy_search_bound(y)
    for m in degree_range(bound_x):
        xm = shift(x, m)
        for n in degree_range(bound_y):
            verdict = paths_equal(xm, shift(y, n))
            if verdict.possibly_equal:
                return GroupoidWitness(x, m, y, n, exact=verdict.is_equal)
    raise UndecidedError("lazy orbit search exhausted its depth without a decision")


def _lazy_search_bound(x: InfinitePath) -> Degree:
    d = x.available_depth()
    if d is None and isinstance(x, EventuallyPeriodicPath):
        return x.prefix.degree + x.cycle.degree
    return Degree(tuple(c // 2 for c in d.coords))


@dataclass(frozen=True)
class OrbitEnumeration:
    """Deduplicated window of an orbit with the discovered decompositions."""

    base: InfinitePath
    bound: Degree
    paths: list
    decompositions: list          # per path: list of (prefix morphism, shift degree)
    depth_limited: bool
    registry: object = None


def orbit_enumerate(omega: InfinitePath, bound: Degree,
                    resolution: Degree | None = None) -> list[InfinitePath]:
    return enumerate_orbit_window(omega, bound, resolution).paths


def enumerate_orbit_window(omega: InfinitePath, bound: Degree,
                           resolution: Degree | None = None) -> OrbitEnumeration:
    """All distinct paths a.sigma^j(omega) with d(a) <= bound and j <= bound.

    Enumeration is breadth-first over (total degree of a, j); duplicates are
    detected through fixed-depth segment keys and confirmed with paths_equal,
    which is exact for eventually periodic paths.
    """
    graph = omega.graph
    if resolution is None:
        resolution = _default_resolution(omega, bound)
    registry = PathRegistry(resolution)
    shifts = degree_range(bound)
    tails = []
    for j in shifts:
        tails.append((j, shift(omega, j)))
    prefixes = []
    for d in degree_range(bound):
        for v in graph.vertices:
            prefixes.extend(enumerate_morphisms(graph, v, d))
    jobs = sorted(((a, j) for a in prefixes for (j, _) in tails),
                  key=lambda aj: (aj[0].degree.total() + aj[1].total(),
                                  aj[0].degree.coords, aj[1].coords, aj[0].edges))
    tail_by_shift = dict(tails)
    for a, j in jobs:
        tail = tail_by_shift[j]
        if a.source != tail.range:
            continue
        candidate = prefix_path(a, tail)
        registry.add(candidate, (a, j))
    return OrbitEnumeration(omega, bound, registry.paths, registry.decompositions,
                            registry.depth_limited, registry)


def _default_resolution(omega: InfinitePath, bound: Degree) -> Degree:
    if isinstance(omega, EventuallyPeriodicPath):
        return bound + bound + omega.prefix.degree + omega.cycle.degree.scale(2)
    depth = omega.available_depth()
    wish = Degree(tuple(2 * c + 4 for c in bound.coords))
    return wish.meet(depth)


class PathRegistry:
    """Deduplicates paths by a fixed-depth segment key plus exact confirmation."""

    def __init__(self, resolution: Degree):
        self.resolution = resolution
        self.paths: list[InfinitePath] = []
        self.decompositions: list[list] = []
        self._buckets: dict[tuple, list[int]] = {}
        self.depth_limited = False

    def key(self, path: InfinitePath) -> tuple:
        return (path.range,) + tuple(path.segment(self.resolution).edges)

    def find(self, path: InfinitePath, key=None) -> int | None:
        key = self.key(path) if key is None else key
        for idx in self._buckets.get(key, ()):
            verdict = paths_equal(self.paths[idx], path)
            if verdict.possibly_equal:
                if verdict.kind == "equal-up-to":
                    self.depth_limited = True
                return idx
        return None

    def add(self, path: InfinitePath, decomposition=None) -> int:
        key = self.key(path)
        idx = self.find(path, key)
        if idx is None:
            idx = len(self.paths)
            self.paths.append(path)
            self.decompositions.append([])
            self._buckets.setdefault(key, []).append(idx)
        if decomposition is not None:
            self.decompositions[idx].append(decomposition)
        return idx


def ep_paths(graph: KGraph, prefix_bound: Degree, cycle_bound: Degree) -> list[EventuallyPeriodicPath]:
    """All eventually periodic paths within the given prefix and cycle bounds."""
    found: list[EventuallyPeriodicPath] = []
    for cd in degree_range(cycle_bound):
        if any(c < 1 for c in cd.coords):
            continue
        for pd in degree_range(prefix_bound):
            for v in graph.vertices:
                for p in enumerate_morphisms(graph, v, pd):
                    for c in enumerate_morphisms(graph, p.source, cd):
                        if c.source != c.range:
                            continue
                        candidate = ep_path(p, c)
                        if not any(paths_equal(candidate, known).is_equal for known in found):
                            found.append(candidate)
    return found
