"""Text formats for graphs, representation specs, and verification reports.

Graph files declare a colored directed graph and its squares.  Edge lines
read `edge NAME color C from SOURCE to RANGE`: an edge points from its
source to its range, so paths compose with the range on the left.  Square
lines `square A B = C D` identify the word A B with the word C D, again
range on the left.

Reports are a line-delimited stream of JSON objects with a versioned header;
identical inputs produce byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .degrees import Degree, parse_degree
from .kgraph import Edge, KGraph, KGraphError, Skeleton, SkeletonError, Square, normal_form
from .paths import LazyPath, ep_path, in_same_orbit, UndecidedError
from .represent import AtomicRepresentation, OrbitSpec

REPORT_FORMAT = "kgraphrep-report"
REPORT_VERSION = 1


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    message: str

    def __str__(self):
        return f"{self.line}:{self.column}: {self.message}"


@dataclass
class GraphParse:
    skeleton: Skeleton | None
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self):
        return self.skeleton is not None and not self.diagnostics


@dataclass
class RepParse:
    representation: AtomicRepresentation | None
    graph_ref: str | None
    window: Degree | None
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self):
        return self.representation is not None and not self.diagnostics


def _tokenize(line: str):
    """Tokens with 1-based column positions; `#` starts a comment."""
    tokens = []
    col = 0
    current = []
    start = 0
    for i, ch in enumerate(line):
        if ch == "#":
            break
        if ch.isspace():
            if current:
                tokens.append(("".join(current), start + 1))
                current = []
        else:
            if not current:
                start = i
            current.append(ch)
    if current:
        tokens.append(("".join(current), start + 1))
    return tokens


def parse_graph(text: str) -> GraphParse:
    """Parse a graph file; every rejection carries a position."""
    diagnostics: list[Diagnostic] = []
    rank = None
    vertices: list[str] = []
    edges: list[Edge] = []
    squares: list[Square] = []
    edge_names = {}

    def bad(line_no, col, message):
        diagnostics.append(Diagnostic(line_no, col, message))

    for line_no, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(raw)
        if not tokens:
            continue
        head, head_col = tokens[0]
        rest = tokens[1:]
        if head == "rank":
            if rank is not None:
                bad(line_no, head_col, "duplicate rank declaration")
                continue
            if len(rest) != 1 or not rest[0][0].isdigit():
                bad(line_no, head_col, "expected: rank K")
                continue
            rank = int(rest[0][0])
            if rank < 1:
                bad(line_no, rest[0][1], "rank must be at least 1")
        elif head == "vertex":
            if not rest:
                bad(line_no, head_col, "expected: vertex NAME...")
                continue
            for name, col in rest:
                if name in vertices:
                    bad(line_no, col, f"duplicate vertex {name!r}")
                else:
                    vertices.append(name)
        elif head == "edge":
            words = [t[0] for t in rest]
            if (len(rest) != 7 or words[1] != "color" or words[3] != "from"
                    or words[5] != "to"):
                bad(line_no, head_col, "expected: edge NAME color C from SOURCE to RANGE")
                continue
            name = words[0]
            if name in edge_names:
                bad(line_no, rest[0][1], f"duplicate edge name {name!r}")
                continue
            if not words[2].isdigit():
                bad(line_no, rest[2][1], f"color must be a positive integer, got {words[2]!r}")
                continue
            color = int(words[2])
            if rank is not None and not 1 <= color <= rank:
                bad(line_no, rest[2][1], f"color {color} outside 1..{rank}")
                continue
            source, src_col = rest[4]
            range_v, rng_col = rest[6]
            if source not in vertices:
                bad(line_no, src_col, f"unknown vertex {source!r}")
                continue
            if range_v not in vertices:
                bad(line_no, rng_col, f"unknown vertex {range_v!r}")
                continue
            edge_names[name] = Edge(name, color, source, range_v)
            edges.append(edge_names[name])
        elif head == "square":
            words = [t[0] for t in rest]
            if len(rest) != 5 or words[2] != "=":
                bad(line_no, head_col, "expected: square A B = C D")
                continue
            missing = [(w, rest[i][1]) for i, w in enumerate(words)
                       if i != 2 and w not in edge_names]
            if missing:
                for w, col in missing:
                    bad(line_no, col, f"unknown edge {w!r} in square")
                continue
            left = (words[0], words[1])
            right = (words[3], words[4])
            for first, second, col in ((left[0], left[1], rest[0][1]),
                                       (right[0], right[1], rest[3][1])):
                a, b = edge_names[first], edge_names[second]
                if a.source != b.range:
                    bad(line_no, col, f"square word {first} {second} is not composable")
                elif a.color == b.color:
                    bad(line_no, col, f"square word {first} {second} repeats a color")
            la, lb = edge_names[left[0]], edge_names[left[1]]
            ra, rb = edge_names[right[0]], edge_names[right[1]]
            if not diagnostics or diagnostics[-1].line != line_no:
                if {la.color, lb.color} != {ra.color, rb.color} or la.color == ra.color:
                    bad(line_no, head_col, "square sides must transpose the same two colors")
                elif la.range != ra.range or lb.source != rb.source:
                    bad(line_no, head_col, "square sides must share range and source")
                else:
                    squares.append(Square(left, right))
        else:
            bad(line_no, head_col, f"unknown declaration {head!r}")

    if rank is None:
        bad(1, 1, "missing rank declaration")
    if not vertices and rank is not None:
        bad(1, 1, "no vertices declared")
    if diagnostics:
        return GraphParse(None, diagnostics)
    try:
        skeleton = Skeleton(rank, tuple(vertices), tuple(edges), tuple(squares))
    except SkeletonError as exc:
        return GraphParse(None, [Diagnostic(1, 1, str(exc))])
    return GraphParse(skeleton)


def emit_graph(skeleton: Skeleton) -> str:
    """Serialize losslessly; parsing the output reproduces the skeleton."""
    lines = [f"rank {skeleton.rank}", "vertex " + " ".join(skeleton.vertices)]
    for e in skeleton.edges:
        lines.append(f"edge {e.name} color {e.color} from {e.source} to {e.range}")
    for sq in skeleton.squares:
        lines.append(f"square {sq.left[0]} {sq.left[1]} = {sq.right[0]} {sq.right[1]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Representation files


def thue_morse_path(graph: KGraph, zero_edge: str, one_edge: str,
                    depth: Degree, label: str = "thue-morse") -> LazyPath:
    """Lazy path whose word in the chosen color follows the Thue-Morse
    sequence, while every other color repeats its unique loop.

    Requires the two chosen edges to be same-colored loops at one vertex and
    all involved squares to commute identically, which makes the segments a
    plain product and hence functorial.
    """
    e0, e1 = graph.edge(zero_edge), graph.edge(one_edge)
    if e0.color != e1.color or e0.name == e1.name:
        raise KGraphError("the two sequence edges must be distinct and same-colored")
    vertex = e0.range
    if {e0.source, e1.source, e1.range} != {vertex}:
        raise KGraphError("the sequence edges must be loops at one common vertex")
    loops = {}
    for color in range(1, graph.rank + 1):
        if color == e0.color:
            continue
        at = [e for e in graph.edges_with_range(vertex, color) if e.source == vertex]
        if len(at) != 1:
            raise KGraphError(f"need exactly one color-{color} loop at {vertex}")
        loops[color] = at[0]
        for seq_edge in (e0, e1):
            flipped = graph.flip(seq_edge, at[0])
            if (flipped[0].name, flipped[1].name) != (at[0].name, seq_edge.name):
                raise KGraphError(
                    f"square of {seq_edge.name} with {at[0].name} must commute identically")

    def bit(n: int) -> int:
        return bin(n).count("1") & 1

    def generate(n: Degree):
        word = []
        for color in range(1, graph.rank + 1):
            if color == e0.color:
                word.extend(e1.name if bit(i) else e0.name for i in range(n.count(color)))
            else:
                word.extend([loops[color].name] * n.count(color))
        return normal_form(graph, word, vertex)

    return LazyPath(graph, vertex, depth, generate, label)


def parse_rep(text: str, graph: KGraph, default_window: Degree | None = None) -> RepParse:
    """Parse a representation file against a validated graph."""
    diagnostics: list[Diagnostic] = []
    graph_ref = None
    window = None
    orbit_decls = []            # (line, col, OrbitSpec)

    def bad(line_no, col, message):
        diagnostics.append(Diagnostic(line_no, col, message))

    lazy_depth_for = None

    lines = list(enumerate(text.splitlines(), start=1))
    for line_no, raw in lines:
        tokens = _tokenize(raw)
        if not tokens:
            continue
        head, head_col = tokens[0]
        words = [t[0] for t in tokens[1:]]
        cols = [t[1] for t in tokens[1:]]
        if head == "graph":
            if len(words) != 1:
                bad(line_no, head_col, "expected: graph PATH")
            else:
                graph_ref = words[0]
        elif head == "window":
            if len(words) != 1:
                bad(line_no, head_col, "expected: window N1,...,Nk")
                continue
            try:
                window = parse_degree(words[0], graph.rank)
            except ValueError as exc:
                bad(line_no, cols[0], str(exc))
        else:
            continue
    if window is None:
        window = default_window or Degree((3,) * graph.rank)
    lazy_depth = Degree(tuple(4 * c + 32 for c in window.coords))

    for line_no, raw in lines:
        tokens = _tokenize(raw)
        if not tokens:
            continue
        head, head_col = tokens[0]
        words = [t[0] for t in tokens[1:]]
        cols = [t[1] for t in tokens[1:]]
        if head in ("graph", "window"):
            continue
        if head == "orbit":
            prefix_names: list[str] = []
            idx = 0
            if idx < len(words) and words[idx] == "prefix":
                if idx + 1 >= len(words) or words[idx + 1] != "[":
                    bad(line_no, cols[idx], "expected: prefix [ EDGES... ]")
                    continue
                idx += 2
                while idx < len(words) and words[idx] != "]":
                    prefix_names.append(words[idx])
                    idx += 1
                if idx == len(words):
                    bad(line_no, head_col, "unterminated prefix word")
                    continue
                idx += 1
            if idx >= len(words) or words[idx] != "cycle":
                bad(line_no, head_col, "expected: orbit [prefix [ W ]] cycle WORD mult M")
                continue
            idx += 1
            cycle_names = []
            while idx < len(words) and words[idx] != "mult":
                cycle_names.append(words[idx])
                idx += 1
            if idx >= len(words) or len(words) != idx + 2:
                bad(line_no, head_col, "expected: mult M at the end of the orbit line")
                continue
            if not words[idx + 1].isdigit() or int(words[idx + 1]) < 1:
                bad(line_no, cols[idx + 1], "multiplicity must be a positive integer")
                continue
            mult = int(words[idx + 1])
            unknown = [n for n in prefix_names + cycle_names if not graph.has_edge(n)]
            if unknown:
                bad(line_no, head_col, f"unknown edge {unknown[0]!r}")
                continue
            if not cycle_names:
                bad(line_no, head_col, "cycle word is empty")
                continue
            try:
                cycle = normal_form(graph, cycle_names)
            except KGraphError as exc:
                bad(line_no, head_col, f"cycle word: {exc}")
                continue
            if cycle.source != cycle.range:
                bad(line_no, head_col, f"cycle word has source {cycle.source} "
                                       f"but range {cycle.range}; it must be a loop")
                continue
            zero_coords = [i + 1 for i, c in enumerate(cycle.degree.coords) if c == 0]
            if zero_coords:
                bad(line_no, head_col,
                    f"cycle degree {cycle.degree} is zero in color {zero_coords[0]}; "
                    f"an infinite path needs every color infinitely often")
                continue
            try:
                if prefix_names:
                    prefix = normal_form(graph, prefix_names)
                    if prefix.source != cycle.range:
                        bad(line_no, head_col,
                            f"prefix ends at {prefix.source}, cycle sits at {cycle.range}")
                        continue
                else:
                    prefix = graph.identity(cycle.range)
                base = ep_path(prefix, cycle)
            except KGraphError as exc:
                bad(line_no, head_col, str(exc))
                continue
            orbit_decls.append((line_no, head_col, OrbitSpec(base, mult)))
        elif head == "lazy":
            if (len(words) != 8 or words[0] != "thue-morse" or words[1] != "over"
                    or words[4] != "cycle-color" or words[6] != "mult"):
                bad(line_no, head_col,
                    "expected: lazy thue-morse over E1 E2 cycle-color C mult M")
                continue
            e0, e1 = words[2], words[3]
            if not graph.has_edge(e0) or not graph.has_edge(e1):
                missing = e0 if not graph.has_edge(e0) else e1
                bad(line_no, head_col, f"unknown edge {missing!r}")
                continue
            if not words[5].isdigit():
                bad(line_no, cols[5], "cycle-color must be a color index")
                continue
            if not words[7].isdigit() or int(words[7]) < 1:
                bad(line_no, cols[7], "multiplicity must be a positive integer")
                continue
            color = int(words[5])
            if not 1 <= color <= graph.rank or color == graph.edge(e0).color:
                bad(line_no, cols[5],
                    f"cycle-color {color} must be a different color than the sequence edges")
                continue
            try:
                base = thue_morse_path(graph, e0, e1, lazy_depth)
            except KGraphError as exc:
                bad(line_no, head_col, str(exc))
                continue
            orbit_decls.append((line_no, head_col, OrbitSpec(base, int(words[7]))))
        else:
            bad(line_no, head_col, f"unknown declaration {head!r}")

    if not orbit_decls and not diagnostics:
        bad(1, 1, "no orbits declared")
    if diagnostics:
        return RepParse(None, graph_ref, window, diagnostics)

    for i in range(len(orbit_decls)):
        for j in range(i + 1, len(orbit_decls)):
            la, ca, sa = orbit_decls[i]
            lb, _, sb = orbit_decls[j]
            try:
                witness = in_same_orbit(sa.base, sb.base)
            except UndecidedError:
                continue
            if witness is not None:
                bad(lb, 1, f"orbit collides with the orbit declared on line {la}")
    if diagnostics:
        return RepParse(None, graph_ref, window, diagnostics)
    rep = AtomicRepresentation(graph, [d[2] for d in orbit_decls], window)
    return RepParse(rep, graph_ref, window)


# ---------------------------------------------------------------------------
# Reports


def report_header() -> dict:
    return {"format": REPORT_FORMAT, "version": REPORT_VERSION}


def check_entry(result) -> dict:
    entry = {"kind": "check", "id": result.check, "params": result.params,
             "status": result.status}
    if result.witness is not None:
        entry["witness"] = result.witness
    return entry


def verdict_entry(decision: str, value, reason: str = "", **extra) -> dict:
    entry = {"kind": "verdict", "decision": decision, "value": value}
    if reason:
        entry["reason"] = reason
    entry.update(extra)
    return entry


def summary_entry(entries) -> dict:
    checks = [e for e in entries if e.get("kind") == "check"]
    failed = [e for e in checks if e.get("status") == "fail"]
    return {"kind": "summary", "checks": len(checks), "failures": len(failed)}


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Degree):
        return list(value.coords)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


def emit_report(entries: list[dict]) -> str:
    """Stable serialization: sorted keys, compact separators, one object per line."""
    lines = [json.dumps(_jsonable(report_header()), sort_keys=True, separators=(",", ":"))]
    for entry in entries:
        lines.append(json.dumps(_jsonable(entry), sort_keys=True, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> list[dict]:
    return [json.loads(line) for line in text.splitlines() if line.strip()]
