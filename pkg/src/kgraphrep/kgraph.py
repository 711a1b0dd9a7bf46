"""Finite k-graphs presented as colored-graph skeletons with commuting squares.

A skeleton lists vertices, colored edges and, for each pair of distinct
colors, a pairing of two-edge paths (the squares).  Words of edges are read
range-to-source: in a word ``a b`` the source of ``a`` equals the range of
``b``, and the whole word has range r(a) and source s(b).  Validation checks
that the square pairings are bijections, that tri-colored words resolve
consistently (the cube condition), and that every vertex receives an edge of
every color.  Morphisms are kept in a color-sorted normal form, which the
cube condition makes unique.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .degrees import Degree, degree_range


class KGraphError(Exception):
    pass


class SkeletonError(KGraphError):
    """Structurally malformed skeleton (bad endpoint, color, or square shape)."""


class NotComposableError(KGraphError):
    def __init__(self, position: int, message: str = ""):
        self.position = position
        super().__init__(message or f"edge word not composable at position {position}")


class SourceRangeMismatchError(KGraphError):
    pass


class DegreeTooLargeError(KGraphError):
    pass


class BadIntervalError(KGraphError):
    pass


class RangeMismatchError(KGraphError):
    pass


class MissingSquareError(KGraphError):
    """A flip was requested for a two-edge word no square covers."""


@dataclass(frozen=True)
class Edge:
    name: str
    color: int
    source: str
    range: str


@dataclass(frozen=True)
class Square:
    """Identifies the two-edge word `left` with the two-edge word `right`."""

    left: tuple[str, str]
    right: tuple[str, str]


@dataclass(frozen=True)
class Skeleton:
    rank: int
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    squares: tuple[Square, ...]

    def __post_init__(self):
        if self.rank < 1:
            raise SkeletonError("rank must be at least 1")
        if not self.vertices:
            raise SkeletonError("at least one vertex is required")
        if len(set(self.vertices)) != len(self.vertices):
            raise SkeletonError("duplicate vertex names")
        vset = set(self.vertices)
        names = set()
        for e in self.edges:
            if e.name in names:
                raise SkeletonError(f"duplicate edge name {e.name!r}")
            names.add(e.name)
            if e.name in vset:
                raise SkeletonError(f"edge name {e.name!r} collides with a vertex")
            if not 1 <= e.color <= self.rank:
                raise SkeletonError(f"edge {e.name!r} has color {e.color} outside 1..{self.rank}")
            if e.source not in vset or e.range not in vset:
                raise SkeletonError(f"edge {e.name!r} has an unknown endpoint")
        by_name = {e.name: e for e in self.edges}
        for sq in self.squares:
            for word in (sq.left, sq.right):
                for n in word:
                    if n not in by_name:
                        raise SkeletonError(f"square references unknown edge {n!r}")
                a, b = by_name[word[0]], by_name[word[1]]
                if a.source != b.range:
                    raise SkeletonError(f"square word {word} is not composable")
                if a.color == b.color:
                    raise SkeletonError(f"square word {word} repeats color {a.color}")
            la, lb = by_name[sq.left[0]], by_name[sq.left[1]]
            ra, rb = by_name[sq.right[0]], by_name[sq.right[1]]
            if {la.color, lb.color} != {ra.color, rb.color} or la.color == ra.color:
                raise SkeletonError(f"square {sq} does not transpose its two colors")
            if la.range != ra.range or lb.source != rb.source:
                raise SkeletonError(f"square {sq} sides do not share range and source")

    def edge(self, name: str) -> Edge:
        for e in self.edges:
            if e.name == name:
                return e
        raise KeyError(name)


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Violation:
    kind: str

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class SquareNotBijective(Violation):
    range_vertex: str
    source_vertex: str
    color_pair: tuple[int, int]
    detail: str

    def describe(self):
        i, j = self.color_pair
        return (f"square pairing for colors ({i},{j}) between {self.source_vertex} "
                f"and {self.range_vertex} is not a bijection: {self.detail}")


@dataclass(frozen=True)
class CubeInconsistent(Violation):
    word: tuple[str, ...]
    first_result: tuple[str, ...]
    second_result: tuple[str, ...]

    def describe(self):
        return (f"tri-colored word {' '.join(self.word)} resolves to both "
                f"{' '.join(self.first_result)} and {' '.join(self.second_result)}")


@dataclass(frozen=True)
class NotSourceFree(Violation):
    vertex: str
    color: int

    def describe(self):
        return f"vertex {self.vertex} receives no edge of color {self.color}"


class InvalidSkeletonError(KGraphError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        lines = "; ".join(v.describe() for v in violations)
        super().__init__(f"skeleton is not a k-graph: {lines}")


class _FlipTable:
    """Square pairings indexed by two-edge words, usable in both directions."""

    def __init__(self, skeleton: Skeleton):
        self.pairs: dict[tuple[str, str], tuple[str, str]] = {}
        self.duplicates: set[tuple[str, str]] = set()
        for sq in skeleton.squares:
            for a, b in ((sq.left, sq.right), (sq.right, sq.left)):
                if a in self.pairs and self.pairs[a] != b:
                    self.duplicates.add(a)
                self.pairs[a] = b

    def flip(self, a: Edge, b: Edge, by_name) -> tuple[Edge, Edge]:
        key = (a.name, b.name)
        try:
            na, nb = self.pairs[key]
        except KeyError:
            raise MissingSquareError(f"no square covers the word {a.name} {b.name}") from None
        return by_name[na], by_name[nb]


def _sort_word(flips: _FlipTable, by_name, word: list[Edge], strategy: str = "leftmost",
               rng=None) -> list[Edge]:
    """Flip adjacent out-of-order color pairs until the word is color-sorted.

    Each flip removes exactly one color inversion, so this terminates.
    """
    w = list(word)
    while True:
        out_of_order = [i for i in range(len(w) - 1) if w[i].color > w[i + 1].color]
        if not out_of_order:
            return w
        if strategy == "leftmost":
            i = out_of_order[0]
        elif strategy == "rightmost":
            i = out_of_order[-1]
        elif strategy == "random":
            i = rng.choice(out_of_order)
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        w[i], w[i + 1] = flips.flip(w[i], w[i + 1], by_name)


def check_skeleton(skeleton: Skeleton) -> list[Violation]:
    """All k-graph axiom violations of a structurally well-formed skeleton."""
    violations: list[Violation] = []
    by_name = {e.name: e for e in skeleton.edges}
    flips = _FlipTable(skeleton)

    # Square bijectivity per (range, source, color pair).
    words_by_key: dict[tuple, list[tuple[str, str]]] = {}
    for a in skeleton.edges:
        for b in skeleton.edges:
            if a.source == b.range and a.color != b.color:
                key = (a.range, b.source, frozenset((a.color, b.color)))
                words_by_key.setdefault(key, []).append((a.name, b.name))
    seen_keys = set()
    for (rv, sv, colors), words in sorted(words_by_key.items(),
                                          key=lambda kv: (kv[0][0], kv[0][1], sorted(kv[0][2]))):
        i, j = sorted(colors)
        if (rv, sv, i, j) in seen_keys:
            continue
        seen_keys.add((rv, sv, i, j))
        problems = []
        images = {}
        for w in words:
            if w in flips.duplicates:
                problems.append(f"word {w[0]} {w[1]} appears in more than one square")
                continue
            partner = flips.pairs.get(w)
            if partner is None:
                problems.append(f"word {w[0]} {w[1]} is not paired")
                continue
            pa, pb = by_name[partner[0]], by_name[partner[1]]
            if (pa.color, pb.color) != (by_name[w[1]].color, by_name[w[0]].color):
                problems.append(f"word {w[0]} {w[1]} is paired across the wrong colors")
                continue
            if partner in images:
                problems.append(f"words {images[partner][0]} {images[partner][1]} and "
                                f"{w[0]} {w[1]} share the partner {partner[0]} {partner[1]}")
            images[partner] = w
        if problems:
            violations.append(SquareNotBijective("square-not-bijective", rv, sv, (i, j),
                                                 "; ".join(sorted(problems))))

    # Cube condition: both maximal resolutions of a tri-colored word agree.
    if skeleton.rank >= 3 and not violations:
        for e1 in skeleton.edges:
            for e2 in skeleton.edges:
                if e2.range != e1.source:
                    continue
                for e3 in skeleton.edges:
                    if e3.range != e2.source:
                        continue
                    if len({e1.color, e2.color, e3.color}) != 3:
                        continue
                    word = [e1, e2, e3]
                    try:
                        first = _reverse_colors(flips, by_name, word, start_front=True)
                        second = _reverse_colors(flips, by_name, word, start_front=False)
                    except MissingSquareError:
                        continue  # already reported as a square violation
                    if [e.name for e in first] != [e.name for e in second]:
                        violations.append(CubeInconsistent(
                            "cube-inconsistent",
                            tuple(e.name for e in word),
                            tuple(e.name for e in first),
                            tuple(e.name for e in second)))

    for v in skeleton.vertices:
        for color in range(1, skeleton.rank + 1):
            if not any(e.range == v and e.color == color for e in skeleton.edges):
                violations.append(NotSourceFree("not-source-free", v, color))

    return violations


def _reverse_colors(flips, by_name, word, start_front: bool):
    """Fully reverse the color order of a 3-edge word via adjacent flips."""
    w = list(word)
    order = (0, 1, 0) if start_front else (1, 0, 1)
    for i in order:
        w[i], w[i + 1] = flips.flip(w[i], w[i + 1], by_name)
    return w


class KGraph:
    """A validated skeleton together with lookup tables for the morphism algebra."""

    def __init__(self, skeleton: Skeleton, _token=None):
        if _token is not _VALIDATED:
            raise KGraphError("use validate(skeleton) to construct a KGraph")
        self.skeleton = skeleton
        self.rank = skeleton.rank
        self.vertices = skeleton.vertices
        self._by_name = {e.name: e for e in skeleton.edges}
        self._flips = _FlipTable(skeleton)
        self._in_edges: dict[tuple[str, int], list[Edge]] = {}
        for e in skeleton.edges:
            self._in_edges.setdefault((e.range, e.color), []).append(e)
        for edges in self._in_edges.values():
            edges.sort(key=lambda e: e.name)

    def edge(self, name: str) -> Edge:
        try:
            return self._by_name[name]
        except KeyError:
            raise KGraphError(f"unknown edge {name!r}") from None

    def has_edge(self, name: str) -> bool:
        return name in self._by_name

    def edges_with_range(self, vertex: str, color: int) -> list[Edge]:
        return self._in_edges.get((vertex, color), [])

    def flip(self, a: Edge, b: Edge) -> tuple[Edge, Edge]:
        return self._flips.flip(a, b, self._by_name)

    def zero(self) -> Degree:
        return Degree.zero(self.rank)

    def identity(self, vertex: str) -> "Morphism":
        if vertex not in self.vertices:
            raise KGraphError(f"unknown vertex {vertex!r}")
        return Morphism(self, vertex, ())

    def morphism(self, edge_names, range_vertex: str | None = None) -> "Morphism":
        return normal_form(self, edge_names, range_vertex)

    def __repr__(self):
        return (f"KGraph(rank={self.rank}, vertices={len(self.vertices)}, "
                f"edges={len(self.skeleton.edges)})")


_VALIDATED = object()


def validate(skeleton: Skeleton) -> KGraph:
    """Return the k-graph presented by `skeleton` or raise with every violation."""
    violations = check_skeleton(skeleton)
    if violations:
        raise InvalidSkeletonError(violations)
    return KGraph(skeleton, _token=_VALIDATED)


# ---------------------------------------------------------------------------
# Morphisms


@dataclass(frozen=True)
class Morphism:
    """A path in color-sorted normal form; the empty word is a vertex.

    Words are stored as edge-name tuples, range on the left.  Construct via
    normal_form / compose rather than directly.
    """

    graph: KGraph
    range: str
    edges: tuple[str, ...]

    @property
    def source(self) -> str:
        if not self.edges:
            return self.range
        return self.graph.edge(self.edges[-1]).source

    @property
    def degree(self) -> Degree:
        counts = [0] * self.graph.rank
        for n in self.edges:
            counts[self.graph.edge(n).color - 1] += 1
        return Degree(tuple(counts))

    def is_identity(self) -> bool:
        return not self.edges

    def edge_objects(self) -> list[Edge]:
        return [self.graph.edge(n) for n in self.edges]

    def __str__(self):
        if not self.edges:
            return f"@{self.range}"
        return " ".join(self.edges)

    def __repr__(self):
        return f"Morphism({self})"


def normal_form(graph: KGraph, edges, range_vertex: str | None = None) -> Morphism:
    """Color-sorted representative of a composable edge word.

    The word is sorted by repeatedly flipping the leftmost out-of-order
    adjacent pair through its square; cube consistency makes the result
    independent of the flip order.
    """
    word = []
    for item in edges:
        if isinstance(item, Edge):
            word.append(item)
        elif isinstance(item, Morphism):
            word.extend(item.edge_objects())
        else:
            word.append(graph.edge(item))
    if not word:
        if range_vertex is None:
            raise KGraphError("an empty word needs an explicit vertex")
        return graph.identity(range_vertex)
    if range_vertex is not None and word[0].range != range_vertex:
        raise NotComposableError(0, f"word has range {word[0].range}, expected {range_vertex}")
    for i in range(len(word) - 1):
        if word[i].source != word[i + 1].range:
            raise NotComposableError(i + 1)
    sorted_word = _sort_word(graph._flips, graph._by_name, word)
    return Morphism(graph, sorted_word[0].range, tuple(e.name for e in sorted_word))


def compose(mu: Morphism, nu: Morphism) -> Morphism:
    if mu.graph is not nu.graph:
        raise KGraphError("cannot compose morphisms of different graphs")
    if mu.source != nu.range:
        raise SourceRangeMismatchError(
            f"source {mu.source} of {mu} is not the range {nu.range} of {nu}")
    if mu.is_identity():
        return nu
    if nu.is_identity():
        return mu
    return normal_form(mu.graph, mu.edges + nu.edges, mu.range)


def _pull_color_front(graph: KGraph, word: list[Edge], color: int) -> list[Edge]:
    idx = next(i for i, e in enumerate(word) if e.color == color)
    while idx > 0:
        word[idx - 1], word[idx] = graph.flip(word[idx - 1], word[idx])
        idx -= 1
    return word


def factorize(lam: Morphism, m: Degree) -> tuple[Morphism, Morphism]:
    """The unique pair (mu, nu) with lam = mu nu and d(mu) = m."""
    graph = lam.graph
    d = lam.degree
    if not m <= d:
        raise DegreeTooLargeError(f"{m} is not dominated by d({lam}) = {d}")
    word = lam.edge_objects()
    head: list[Edge] = []
    remaining = list(m.coords)
    for color in range(1, graph.rank + 1):
        for _ in range(remaining[color - 1]):
            word = _pull_color_front(graph, word, color)
            head.append(word.pop(0))
    mu = Morphism(graph, lam.range, tuple(e.name for e in head))
    nu_range = head[-1].source if head else lam.range
    nu = normal_form(graph, word, nu_range) if word else graph.identity(nu_range)
    return mu, nu


def segment(lam: Morphism, p: Degree, q: Degree) -> Morphism:
    """The middle factor lam(p, q) of the factorization at p then q."""
    if not (p <= q and q <= lam.degree):
        raise BadIntervalError(f"need p <= q <= d(lam), got p={p} q={q} d={lam.degree}")
    head, _ = factorize(lam, q)
    _, mid = factorize(head, p)
    return mid


def enumerate_morphisms(graph: KGraph, vertex: str, n: Degree) -> list[Morphism]:
    """All morphisms with range `vertex` and degree `n`, as normal forms.

    Color-sorted composable words are exactly the normal forms, so a block
    by block extension produces each morphism once.
    """
    if n.rank != graph.rank:
        raise KGraphError(f"degree rank {n.rank} does not match graph rank {graph.rank}")
    results: list[Morphism] = []

    def extend(at: str, color: int, acc: list[Edge]):
        if color > graph.rank:
            results.append(Morphism(graph, vertex, tuple(e.name for e in acc)))
            return
        needed = n.count(color)

        def block(v: str, left: int):
            if left == 0:
                extend(v, color + 1, acc)
                return
            for e in graph.edges_with_range(v, color):
                acc.append(e)
                block(e.source, left - 1)
                acc.pop()

        block(at, needed)

    extend(vertex, 1, [])
    return results


def morphisms_up_to(graph: KGraph, bound: Degree) -> list[Morphism]:
    """All morphisms of degree dominated by `bound`, over every vertex."""
    out = []
    for n in degree_range(bound):
        for v in graph.vertices:
            out.extend(enumerate_morphisms(graph, v, n))
    return out


@dataclass(frozen=True)
class MinimalExtension:
    alpha: Morphism
    beta: Morphism


def lambda_min(lam: Morphism, eta: Morphism) -> list[MinimalExtension]:
    """All (alpha, beta) with lam alpha = eta beta of degree d(lam) v d(eta).

    Enumerates completions of `lam` and factors each against `eta`, unlike
    the double enumeration used by the brute-force test oracle.
    """
    if lam.graph is not eta.graph:
        raise KGraphError("morphisms of different graphs")
    if lam.range != eta.range:
        raise RangeMismatchError(f"r({lam}) = {lam.range} but r({eta}) = {eta.range}")
    top = lam.degree.join(eta.degree)
    out = []
    for alpha in enumerate_morphisms(lam.graph, lam.source, top - lam.degree):
        tau = compose(lam, alpha)
        head, beta = factorize(tau, eta.degree)
        if head == eta:
            out.append(MinimalExtension(alpha, beta))
    out.sort(key=lambda ext: (ext.alpha.edges, ext.beta.edges))
    return out


def graph_properties(graph: KGraph) -> dict:
    """Source-freeness, strong connectivity, and finiteness flags."""
    source_free = not any(isinstance(v, NotSourceFree) for v in check_skeleton(graph.skeleton))
    vertices = graph.vertices
    arcs: dict[str, set[str]] = {v: set() for v in vertices}
    for e in graph.skeleton.edges:
        arcs[e.source].add(e.range)
    strongly_connected = True
    for start in vertices:
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in arcs[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if seen != set(vertices):
            strongly_connected = False
            break
    return {"source_free": source_free,
            "strongly_connected": strongly_connected,
            "finite": True}
