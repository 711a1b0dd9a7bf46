"""Purely atomic permutative representations on countable orbit index sets.

A representation is specified by orbits (a base path with a multiplicity)
and a window degree.  Basis points are (orbit, path, fiber) triples; the
registry of orbit paths starts as the window enumeration and grows on demand
when generators push vectors past it, so every single relation instance is
evaluated exactly.  All coefficients are exact rationals (or Gaussian
rationals when a complex base unitary is supplied).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .degrees import Degree
from .exact import conjugate_scalar, exact_rank
from .kgraph import KGraph, KGraphError, Morphism, compose, factorize, morphisms_up_to, segment
from .paths import (DepthExceededError, EventuallyPeriodicPath, InfinitePath,
                    OrbitEnumeration, UndecidedError, enumerate_orbit_window,
                    in_same_orbit, paths_equal, prefix_path, shift)
from .sets import AtomSingleton, Cylinder, SetExpr


class WindowExceededError(KGraphError):
    """A lazy base ran out of declared depth while resolving a vector."""


class OrbitCollisionError(KGraphError):
    pass


class MultiplicityMismatchError(KGraphError):
    pass


class NotWellDefinedError(KGraphError):
    def __init__(self, path, decompositions):
        self.path = path
        self.decompositions = decompositions
        super().__init__(f"induced operator disagrees across decompositions of {path}")


class Vec:
    """Finitely supported vector over the basis points; zero entries dropped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        if coeffs:
            for k, v in coeffs.items():
                if v:
                    self.coeffs[k] = v

    @staticmethod
    def basis(point, scale=Fraction(1)) -> "Vec":
        return Vec({point: scale})

    @staticmethod
    def zero() -> "Vec":
        return Vec()

    def is_zero(self):
        return not self.coeffs

    def support(self):
        return sorted(self.coeffs)

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return Vec(out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) - v
        return Vec(out)

    def scale(self, factor):
        return Vec({k: factor * v for k, v in self.coeffs.items()})

    def __eq__(self, other):
        return isinstance(other, Vec) and self.coeffs == other.coeffs

    def __hash__(self):
        raise TypeError("Vec is mutable-ish; not hashable")

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{v}*e{k}" for k, v in sorted(self.coeffs.items()))


@dataclass(frozen=True)
class OrbitSpec:
    base: InfinitePath
    multiplicity: int

    def __post_init__(self):
        if self.multiplicity < 1:
            raise KGraphError("multiplicity must be at least 1")


class OrbitWindow:
    """One orbit's path registry with decompositions base = a.sigma^j(omega)."""

    def __init__(self, enumeration: OrbitEnumeration, multiplicity: int):
        self.base = enumeration.base
        self.bound = enumeration.bound
        self.multiplicity = multiplicity
        self.registry = enumeration.registry
        self.initial_count = len(self.registry.paths)

    @property
    def paths(self):
        return self.registry.paths

    @property
    def depth_limited(self):
        return self.registry.depth_limited

    def decompositions(self, idx):
        return self.registry.decompositions[idx]

    def prefix_index(self, word: Morphism, idx: int) -> int:
        path = self.paths[idx]
        new_path = prefix_path(word, path)
        a, j = self.registry.decompositions[idx][0]
        try:
            return self.registry.add(new_path, (compose(word, a), j))
        except DepthExceededError as exc:
            raise WindowExceededError(str(exc)) from exc

    def shift_index(self, amount: Degree, idx: int) -> int:
        path = self.paths[idx]
        new_path = shift(path, amount)
        a, j = self.registry.decompositions[idx][0]
        absorbed = amount.meet(a.degree)
        tail_part = segment(a, absorbed, a.degree)
        try:
            return self.registry.add(new_path, (tail_part, j + (amount - absorbed)))
        except DepthExceededError as exc:
            raise WindowExceededError(str(exc)) from exc

    def find(self, path: InfinitePath):
        try:
            return self.registry.find(path)
        except DepthExceededError as exc:
            raise WindowExceededError(str(exc)) from exc


class AtomicRepresentation:
    """A purely atomic permutative representation with window-scale registries.

    Points are (orbit, path, fiber) with fibers numbered from 1.  The
    generator for a morphism acts by prefixing the path and keeping the
    fiber; its adjoint strips the initial segment when it matches and kills
    the vector otherwise.
    """

    def __init__(self, graph: KGraph, orbits: list[OrbitSpec], window: Degree,
                 resolution: Degree | None = None):
        if not orbits:
            raise KGraphError("at least one orbit is required")
        self.graph = graph
        self.orbit_specs = list(orbits)
        self.window = window
        for spec in orbits:
            if spec.base.graph is not graph:
                raise KGraphError("orbit base belongs to a different graph")
        self._check_orbit_collisions()
        self.windows = [OrbitWindow(enumerate_orbit_window(spec.base, window, resolution),
                                    spec.multiplicity)
                        for spec in orbits]

    def _check_orbit_collisions(self):
        for i in range(len(self.orbit_specs)):
            for j in range(i + 1, len(self.orbit_specs)):
                a, b = self.orbit_specs[i].base, self.orbit_specs[j].base
                try:
                    witness = in_same_orbit(a, b)
                except UndecidedError:
                    continue
                if witness is not None:
                    raise OrbitCollisionError(
                        f"declared bases {a} and {b} lie in the same orbit")

    # -- basis bookkeeping ------------------------------------------------

    def window_points(self):
        """Initial window basis, breadth-first by decomposition then fiber."""
        points = []
        for o, window in enumerate(self.windows):
            for p in range(window.initial_count):
                for f in range(1, window.multiplicity + 1):
                    points.append((o, p, f))
        return points

    def path_of(self, point) -> InfinitePath:
        o, p, _ = point
        return self.windows[o].paths[p]

    def decompositions_of(self, point):
        o, p, _ = point
        return self.windows[o].decompositions(p)

    def multiplicity_of_orbit(self, o: int) -> int:
        return self.orbit_specs[o].multiplicity

    def base_point_index(self, o: int = 0) -> int:
        idx = self.windows[o].find(self.orbit_specs[o].base)
        if idx is None:
            idx = self.windows[o].registry.add(
                self.orbit_specs[o].base,
                (self.graph.identity(self.orbit_specs[o].base.range),
                 Degree.zero(self.graph.rank)))
        return idx

    @property
    def depth_limited(self):
        return any(w.depth_limited for w in self.windows)

    # -- operator actions --------------------------------------------------

    def apply(self, word: Morphism, vec: Vec) -> Vec:
        """Generator action: e_(path, f) goes to e_(word.path, f) when composable."""
        out = {}
        for (o, p, f), c in vec.coeffs.items():
            window = self.windows[o]
            if word.source != window.paths[p].range:
                continue
            key = (o, window.prefix_index(word, p), f)
            out[key] = out.get(key, 0) + c
        return Vec(out)

    def apply_star(self, word: Morphism, vec: Vec) -> Vec:
        out = {}
        for (o, p, f), c in vec.coeffs.items():
            window = self.windows[o]
            path = window.paths[p]
            if path.range != word.range or path.segment(word.degree) != word:
                continue
            key = (o, window.shift_index(word.degree, p), f)
            out[key] = out.get(key, 0) + c
        return Vec(out)

    def apply_word(self, words, vec: Vec) -> Vec:
        """Apply a product of generators and adjoints, rightmost first.

        Items are (morphism, star_flag).
        """
        for word, star in reversed(list(words)):
            vec = self.apply_star(word, vec) if star else self.apply(word, vec)
        return vec

    def project(self, expr: SetExpr, vec: Vec) -> Vec:
        """Projection-valued measure of a set expression, acting diagonally."""
        out = {}
        for (o, p, f), c in vec.coeffs.items():
            if expr.contains(self.windows[o].paths[p]):
                out[(o, p, f)] = c
        return Vec(out)

    # -- permutative structure ---------------------------------------------

    def in_domain(self, word: Morphism, point) -> bool:
        """Membership in the domain set of the prefix bijection for `word`."""
        return self.path_of(point).range == word.source

    def in_range_set(self, word: Morphism, point) -> bool:
        """Membership in the image set: the path starts with `word`."""
        path = self.path_of(point)
        return path.range == word.range and path.segment(word.degree) == word

    def prefix_point(self, word: Morphism, point):
        o, p, f = point
        if not self.in_domain(word, point):
            raise KGraphError(f"point {point} is not in the domain of {word}")
        return (o, self.windows[o].prefix_index(word, p), f)

    def shift_point(self, amount: Degree, point):
        o, p, f = point
        return (o, self.windows[o].shift_index(amount, p), f)

    def encoding(self, point, n: Degree) -> Morphism:
        """Initial segment of the path a basis point sits over."""
        return self.path_of(point).segment(n)

    def derivative(self, word: Morphism, point) -> Fraction:
        """Radon-Nikodym derivative of the prefix map under counting measure.

        Prefix maps send basis points to basis points bijectively, so this
        is constantly 1 on the domain.
        """
        if not self.in_domain(word, point):
            raise KGraphError(f"point {point} is not in the domain of {word}")
        return Fraction(1)

    # -- decisions -----------------------------------------------------------

    def atom_dimension(self, path: InfinitePath) -> int:
        """Multiplicity of the orbit containing `path`, or 0."""
        for o, window in enumerate(self.windows):
            if window.find(path) is not None:
                return window.multiplicity
            base = self.orbit_specs[o].base
            if base.is_exact and path.is_exact:
                if in_same_orbit(base, path) is not None:
                    return window.multiplicity
        return 0

    def is_irreducible(self) -> bool:
        return len(self.orbit_specs) == 1 and self.orbit_specs[0].multiplicity == 1

    def is_monic(self) -> bool:
        return all(spec.multiplicity == 1 for spec in self.orbit_specs)

    def cyclic_vector(self):
        """Candidate cyclic vector sum(e_i / 2^i) and its cylinder span rank."""
        points = self.window_points()
        vec = Vec({pt: Fraction(1, 2 ** (n + 1)) for n, pt in enumerate(points)})
        index = {pt: i for i, pt in enumerate(points)}
        rows = []
        for lam in morphisms_up_to(self.graph, self.window):
            image = self.project(Cylinder(lam), vec)
            row = [Fraction(0)] * len(points)
            for pt, c in image.coeffs.items():
                if pt in index:
                    row[index[pt]] = c
            rows.append(row)
        rank = exact_rank(rows) if rows else 0
        return vec, SpanCheck(rank, len(points), rank == len(points))

    def with_swapped_prefix_images(self, edge_name: str, idx_a: int, idx_b: int):
        """Testing aid: corrupt the prefix bijection of one edge by swapping
        the images of two basis paths (orbit 0)."""
        return _SwappedRepresentation(self, edge_name, idx_a, idx_b)


@dataclass(frozen=True)
class SpanCheck:
    rank: int
    window_dimension: int
    spans_window: bool


class _SwappedRepresentation:
    """Delegating wrapper whose action under a single edge is corrupted."""

    def __init__(self, inner: AtomicRepresentation, edge_name: str, idx_a: int, idx_b: int):
        self._inner = inner
        self._edge = edge_name
        self._a = idx_a
        self._b = idx_b

    def __getattr__(self, name):
        return getattr(self._inner, name)

    def apply(self, word: Morphism, vec: Vec) -> Vec:
        if word.edges == (self._edge,):
            swapped = {}
            for (o, p, f), c in vec.coeffs.items():
                if o == 0 and p == self._a:
                    p = self._b
                elif o == 0 and p == self._b:
                    p = self._a
                swapped[(o, p, f)] = c
            vec = Vec(swapped)
        return self._inner.apply(word, vec)


def orbit_representation(graph: KGraph, base: InfinitePath, multiplicity: int,
                         window: Degree, resolution: Degree | None = None) -> AtomicRepresentation:
    """Single-orbit representation on the index set Orbit(base) x fibers."""
    return AtomicRepresentation(graph, [OrbitSpec(base, multiplicity)], window, resolution)


# ---------------------------------------------------------------------------
# Equivalence and disjointness


@dataclass(frozen=True)
class EquivalenceVerdict:
    equivalent: bool | None       # None when a lazy comparison was exhausted
    reason: str
    matched_orbits: tuple[tuple[int, int], ...] = ()

    def __str__(self):
        return f"equivalent={self.equivalent} ({self.reason})"


def _match_orbits(rep_a: AtomicRepresentation, rep_b: AtomicRepresentation):
    if rep_a.graph is not rep_b.graph:
        raise KGraphError("representations must share one graph instance")
    matches = []
    used = set()
    undecided = False
    for i, sa in enumerate(rep_a.orbit_specs):
        for j, sb in enumerate(rep_b.orbit_specs):
            if j in used:
                continue
            try:
                witness = in_same_orbit(sa.base, sb.base)
            except UndecidedError:
                undecided = True
                continue
            if witness is not None:
                matches.append((i, j))
                used.add(j)
                break
    return matches, used, undecided


def are_disjoint(rep_a: AtomicRepresentation, rep_b: AtomicRepresentation) -> bool:
    """True when no orbit of one meets an orbit of the other."""
    matches, _, undecided = _match_orbits(rep_a, rep_b)
    if undecided and not matches:
        raise UndecidedError("orbit comparison exhausted a lazy depth bound")
    return not matches


def unitarily_equivalent(rep_a: AtomicRepresentation,
                         rep_b: AtomicRepresentation) -> EquivalenceVerdict:
    """Equivalent iff orbits match bijectively with equal multiplicities."""
    matches, used, undecided = _match_orbits(rep_a, rep_b)
    matched_a = {i for i, _ in matches}
    if len(matched_a) < len(rep_a.orbit_specs) or len(used) < len(rep_b.orbit_specs):
        if undecided:
            return EquivalenceVerdict(None, "undecided: lazy orbit comparison exhausted",
                                      tuple(matches))
        return EquivalenceVerdict(False, "orbit supports differ", tuple(matches))
    for i, j in matches:
        ma = rep_a.orbit_specs[i].multiplicity
        mb = rep_b.orbit_specs[j].multiplicity
        if ma != mb:
            return EquivalenceVerdict(
                False, f"multiplicity {ma} vs {mb} on a shared orbit", tuple(matches))
    return EquivalenceVerdict(True, "orbits match with equal multiplicities", tuple(matches))


# ---------------------------------------------------------------------------
# Intertwiners


class Intertwiner:
    """Operator induced by a unitary on the base atom fibers.

    On a basis point over path gamma = a.sigma^j(omega) the operator routes
    through the base atom: strip a, rebuild omega, mix fibers by the base
    matrix, and rebuild gamma on the other side.  In the permutative model
    the fiber index rides along untouched, so the fast action keeps the path
    and mixes fibers; verify_intertwiner re-derives it decomposition by
    decomposition to confirm that.
    """

    def __init__(self, rep_a: AtomicRepresentation, rep_b: AtomicRepresentation,
                 base_matrix):
        self.rep_a = rep_a
        self.rep_b = rep_b
        self.base_matrix = base_matrix
        self.mult = rep_a.orbit_specs[0].multiplicity

    def _resolve_in_b(self, path: InfinitePath) -> int:
        window = self.rep_b.windows[0]
        idx = window.find(path)
        if idx is not None:
            return idx
        witness = in_same_orbit(path, self.rep_b.orbit_specs[0].base)
        if witness is None:
            raise KGraphError(f"path {path} is not in the target orbit")
        return window.registry.add(path, (path.segment(witness.shift_x), witness.shift_y))

    def apply(self, vec: Vec) -> Vec:
        out = Vec.zero()
        for (o, p, f), c in vec.coeffs.items():
            path = self.rep_a.windows[o].paths[p]
            q = self._resolve_in_b(path)
            for f2 in range(1, self.mult + 1):
                weight = self.base_matrix[f2 - 1][f - 1]
                if weight:
                    out = out + Vec.basis((0, q, f2), c * weight)
        return out

    def apply_star(self, vec: Vec) -> Vec:
        out = Vec.zero()
        window_a = self.rep_a.windows[0]
        for (o, q, f2), c in vec.coeffs.items():
            path = self.rep_b.windows[o].paths[q]
            p = window_a.find(path)
            if p is None:
                witness = in_same_orbit(path, self.rep_a.orbit_specs[0].base)
                if witness is None:
                    raise KGraphError(f"path {path} is not in the source orbit")
                p = window_a.registry.add(path, (path.segment(witness.shift_x),
                                                 witness.shift_y))
            for f in range(1, self.mult + 1):
                weight = conjugate_scalar(self.base_matrix[f2 - 1][f - 1])
                if weight:
                    out = out + Vec.basis((0, p, f), c * weight)
        return out

    def apply_via_decomposition(self, point, decomposition) -> Vec:
        """Route e_point through an explicit decomposition a.sigma^j(omega)."""
        a, j = decomposition
        omega = self.rep_a.orbit_specs[0].base
        word_j = omega.segment(j)
        vec = Vec.basis(point)
        vec = self.rep_a.apply_star(a, vec)
        vec = self.rep_a.apply(word_j, vec)
        base_idx_a = self.rep_a.base_point_index(0)
        base_idx_b = self._resolve_in_b(omega)
        mixed = Vec.zero()
        for (o, p, f), c in vec.coeffs.items():
            if p != base_idx_a:
                raise KGraphError("decomposition route missed the base atom")
            for f2 in range(1, self.mult + 1):
                weight = self.base_matrix[f2 - 1][f - 1]
                if weight:
                    mixed = mixed + Vec.basis((0, base_idx_b, f2), c * weight)
        mixed = self.rep_b.apply_star(word_j, mixed)
        return self.rep_b.apply(a, mixed)


def identity_matrix(size: int):
    return tuple(tuple(Fraction(1) if i == j else Fraction(0) for j in range(size))
                 for i in range(size))


def _is_unitary(matrix, size) -> bool:
    for i in range(size):
        for j in range(size):
            acc = 0
            for k in range(size):
                acc = acc + conjugate_scalar(matrix[k][i]) * matrix[k][j]
            expected = 1 if i == j else 0
            if acc != expected:
                return False
    return True


def build_intertwiner(rep_a: AtomicRepresentation, rep_b: AtomicRepresentation,
                      base_matrix=None) -> Intertwiner:
    """Intertwiner from a unitary on the shared base atom's fibers.

    Requires single-orbit representations over the same orbit with equal
    multiplicities.  Well-definedness across every decomposition discovered
    in the window is checked; a disagreement raises NotWellDefinedError
    naming the decompositions.
    """
    if rep_a.graph is not rep_b.graph:
        raise KGraphError("representations must share one graph instance")
    if len(rep_a.orbit_specs) != 1 or len(rep_b.orbit_specs) != 1:
        raise KGraphError("intertwiner construction expects single-orbit representations")
    if in_same_orbit(rep_a.orbit_specs[0].base, rep_b.orbit_specs[0].base) is None:
        raise KGraphError("bases lie in different orbits; the representations are disjoint")
    mult = rep_a.orbit_specs[0].multiplicity
    if mult != rep_b.orbit_specs[0].multiplicity:
        raise MultiplicityMismatchError(
            f"multiplicities differ: {mult} vs {rep_b.orbit_specs[0].multiplicity}")
    if base_matrix is None:
        base_matrix = identity_matrix(mult)
    if not _is_unitary(base_matrix, mult):
        raise KGraphError("base matrix is not unitary")
    intertwiner = Intertwiner(rep_a, rep_b, base_matrix)
    for p in range(rep_a.windows[0].initial_count):
        decomps = rep_a.windows[0].decompositions(p)
        if len(decomps) < 2:
            continue
        for f in range(1, mult + 1):
            images = [intertwiner.apply_via_decomposition((0, p, f), d) for d in decomps]
            if any(img != images[0] for img in images[1:]):
                raise NotWellDefinedError(rep_a.windows[0].paths[p], decomps)
    return intertwiner
