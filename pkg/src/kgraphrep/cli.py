"""Command-line interface.

Exit codes: 0 when every requested check passes and decisions come out
affirmative, 1 on check failures or negative decisions, 2 on input errors.
Reports go to stdout; diagnostics go to stderr.  A failing run still emits a
complete report.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .degrees import Degree, degree_range, parse_degree
from .fileformats import (check_entry, emit_report, parse_graph, parse_rep,
                          summary_entry, verdict_entry)
from .kgraph import InvalidSkeletonError, check_skeleton, lambda_min, normal_form, validate
from .paths import ep_path, ep_paths, orbit_enumerate
from .represent import build_intertwiner, unitarily_equivalent
from .verify import (DEFAULT_SAMPLE_CAP, atom_identity_suite, decompose_slices,
                     encoding_suite, failures, permutative_axiom_suite,
                     pvm_identity_suite, sample_points, semibranching_suite,
                     verify_ck, verify_intertwiner, verify_purely_atomic)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


def _fail_input(messages, json_mode):
    for m in messages:
        print(m, file=sys.stderr)
    if json_mode:
        sys.stdout.write(emit_report([verdict_entry("input", False, str(messages[0]))]))
    return EXIT_INPUT_ERROR


def _load_graph(path: str, json_mode: bool):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        return None, [str(exc)]
    parsed = parse_graph(text)
    if not parsed.ok:
        return None, [f"{path}:{d}" for d in parsed.diagnostics]
    return parsed.skeleton, []


def _load_rep(path: str, window, graph_cache: dict):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        return None, None, [str(exc)]
    graph_ref = None
    for line in text.splitlines():
        tokens = line.split()
        if tokens and tokens[0] == "graph" and len(tokens) >= 2:
            graph_ref = tokens[1]
            break
    if graph_ref is None:
        return None, None, [f"{path}: missing graph reference"]
    graph_path = str((Path(path).parent / graph_ref).resolve())
    if graph_path not in graph_cache:
        skeleton, errors = _load_graph(graph_path, False)
        if errors:
            return None, None, errors
        violations = check_skeleton(skeleton)
        if violations:
            return None, None, [f"{graph_path}: {v.describe()}" for v in violations]
        graph_cache[graph_path] = validate(skeleton)
    graph = graph_cache[graph_path]
    parsed = parse_rep(text, graph, default_window=window)
    if not parsed.ok:
        return None, None, [f"{path}:{d}" for d in parsed.diagnostics]
    return parsed.representation, graph, []


def _emit(entries, json_mode, human_lines):
    if json_mode:
        sys.stdout.write(emit_report(entries))
    else:
        for line in human_lines:
            print(line)


def cmd_validate(args) -> int:
    skeleton, errors = _load_graph(args.file, args.json)
    if errors:
        return _fail_input(errors, args.json)
    violations = check_skeleton(skeleton)
    entries = [verdict_entry("valid-kgraph", not violations,
                             "" if not violations else f"{len(violations)} violations")]
    human = []
    for v in violations:
        entries.append({"kind": "violation", "violation": v.kind, "detail": v.describe()})
        human.append(f"violation [{v.kind}]: {v.describe()}")
    if not violations:
        g = validate(skeleton)
        human.append(f"valid k-graph: rank {g.rank}, {len(g.vertices)} vertices, "
                     f"{len(skeleton.edges)} edges, {len(skeleton.squares)} squares")
    _emit(entries, args.json, human)
    return EXIT_OK if not violations else EXIT_CHECK_FAILED


def cmd_paths(args) -> int:
    skeleton, errors = _load_graph(args.file, args.json)
    if errors:
        return _fail_input(errors, args.json)
    try:
        graph = validate(skeleton)
        prefix_bound = parse_degree(args.prefix_bound, graph.rank) if args.prefix_bound \
            else Degree.zero(graph.rank)
        cycle_bound = parse_degree(args.cycle_bound, graph.rank)
    except (InvalidSkeletonError, ValueError) as exc:
        return _fail_input([str(exc)], args.json)
    found = ep_paths(graph, prefix_bound, cycle_bound)
    entries = [verdict_entry("ep-paths", len(found),
                             prefix_bound=str(prefix_bound), cycle_bound=str(cycle_bound))]
    human = [f"{len(found)} eventually periodic paths "
             f"(prefix bound {prefix_bound}, cycle bound {cycle_bound})"]
    for p in found:
        entries.append({"kind": "path", "path": str(p), "range": p.range})
        human.append(f"  {p}")
    _emit(entries, args.json, human)
    return EXIT_OK


def _word(graph, text):
    return normal_form(graph, [n for n in text.replace(",", " ").split() if n])


def cmd_lmin(args) -> int:
    skeleton, errors = _load_graph(args.file, args.json)
    if errors:
        return _fail_input(errors, args.json)
    try:
        graph = validate(skeleton)
        left = _word(graph, args.left)
        right = _word(graph, args.right)
        extensions = lambda_min(left, right)
    except Exception as exc:  # input-level errors
        return _fail_input([str(exc)], args.json)
    entries = [verdict_entry("lambda-min", len(extensions),
                             left=str(left), right=str(right))]
    for ext in extensions:
        entries.append({"kind": "extension", "alpha": str(ext.alpha), "beta": str(ext.beta)})
    rendered = "{" + ", ".join(f"({ext.alpha}, {ext.beta})" for ext in extensions) + "}"
    _emit(entries, args.json, [rendered])
    return EXIT_OK


def cmd_orbit(args) -> int:
    skeleton, errors = _load_graph(args.file, args.json)
    if errors:
        return _fail_input(errors, args.json)
    try:
        graph = validate(skeleton)
        cycle = _word(graph, args.cycle)
        prefix = _word(graph, args.prefix) if args.prefix else graph.identity(cycle.range)
        base = ep_path(prefix, cycle)
        bound = parse_degree(args.bound, graph.rank) if args.bound \
            else Degree((2,) * graph.rank)
    except Exception as exc:
        return _fail_input([str(exc)], args.json)
    members = orbit_enumerate(base, bound)
    entries = [verdict_entry("orbit-window", len(members), base=str(base), bound=str(bound))]
    human = [f"{len(members)} orbit members within bound {bound} of {base}"]
    for p in members:
        entries.append({"kind": "path", "path": str(p), "range": p.range})
        human.append(f"  {p}")
    _emit(entries, args.json, human)
    return EXIT_OK


def _rep_common(args):
    window = parse_degree(args.window) if args.window else None
    return window


def _run_suites(rep, cap):
    points = sample_points(rep.window_points(), cap)
    results = []
    results += verify_ck(rep, points)
    results += verify_purely_atomic(rep, points)
    results += permutative_axiom_suite(rep, points)
    results += pvm_identity_suite(rep, points)
    results += atom_identity_suite(rep, points)
    results += encoding_suite(rep, points)
    results += semibranching_suite(rep, points)
    return results


def cmd_rep_verify(args) -> int:
    window = _rep_common(args)
    rep, graph, errors = _load_rep(args.rep, window, {})
    if errors:
        return _fail_input(errors, args.json)
    results = _run_suites(rep, args.sample)
    bad = failures(results)
    entries = [check_entry(r) for r in results]
    entries.append(verdict_entry("irreducible", rep.is_irreducible()))
    entries.append(verdict_entry("monic", rep.is_monic()))
    entries.append(summary_entry(entries))
    human = [f"{r.status:4s} {r.check} {r.params}" for r in results if r.failed] or \
            [f"all {len(results)} relation instances pass on "
             f"{len(rep.window_points())} window basis points"]
    human.append(f"irreducible: {rep.is_irreducible()}  monic: {rep.is_monic()}")
    _emit(entries, args.json, human)
    return EXIT_OK if not bad else EXIT_CHECK_FAILED


def cmd_rep_compare(args) -> int:
    window = _rep_common(args)
    cache: dict = {}
    rep_a, graph_a, errors = _load_rep(args.rep_a, window, cache)
    if errors:
        return _fail_input(errors, args.json)
    rep_b, graph_b, errors = _load_rep(args.rep_b, window, cache)
    if errors:
        return _fail_input(errors, args.json)
    if graph_a is not graph_b:
        return _fail_input(["representations reference different graphs"], args.json)
    verdict = unitarily_equivalent(rep_a, rep_b)
    entries = [verdict_entry("unitarily-equivalent", verdict.equivalent, verdict.reason,
                             matched_orbits=len(verdict.matched_orbits))]
    human = [f"equivalent: {verdict.equivalent} ({verdict.reason})"]
    if verdict.equivalent:
        intertwiner = build_intertwiner(rep_a, rep_b)
        results = verify_intertwiner(intertwiner,
                                     sample_points(rep_a.window_points(), args.sample))
        entries = [check_entry(r) for r in results] + entries
        bad = failures(results)
        human.append(f"intertwiner checks: {len(results) - len(bad)}/{len(results)} pass")
        entries.append(summary_entry(entries))
        _emit(entries, args.json, human)
        return EXIT_OK if not bad else EXIT_CHECK_FAILED
    entries.append(summary_entry(entries))
    _emit(entries, args.json, human)
    return EXIT_CHECK_FAILED if verdict.equivalent is not True else EXIT_OK


def cmd_rep_decompose(args) -> int:
    window = _rep_common(args)
    rep, graph, errors = _load_rep(args.rep, window, {})
    if errors:
        return _fail_input(errors, args.json)
    decomposition = decompose_slices(rep, sample_cap=args.sample)
    bad = failures(decomposition.checks)
    entries = [check_entry(r) for r in decomposition.checks]
    entries.append(verdict_entry("slices", decomposition.count,
                                 periods=[str(v) for v in decomposition.period_verdicts]))
    entries.append(summary_entry(entries))
    human = [f"{decomposition.count} invariant slices; base periodicity: "
             + ", ".join(str(v) for v in decomposition.period_verdicts)]
    for r in decomposition.checks:
        if r.failed:
            human.append(f"fail {r.check} {r.params}: {r.witness}")
    _emit(entries, args.json, human)
    return EXIT_OK if not bad else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgraphrep",
        description="Validate k-graphs and analyze purely atomic permutative representations")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the k-graph axioms of a graph file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("paths", help="list eventually periodic paths within bounds")
    p.add_argument("file")
    p.add_argument("--prefix-bound", default="")
    p.add_argument("--cycle-bound", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_paths)

    p = sub.add_parser("lmin", help="minimal common extensions of two words")
    p.add_argument("file")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_lmin)

    p = sub.add_parser("orbit", help="enumerate an orbit window of a periodic path")
    p.add_argument("file")
    p.add_argument("--cycle", required=True)
    p.add_argument("--prefix", default="")
    p.add_argument("--bound", default="")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_orbit)

    for name, fn, two in (("rep-verify", cmd_rep_verify, False),
                          ("rep-compare", cmd_rep_compare, True),
                          ("rep-decompose", cmd_rep_decompose, False)):
        p = sub.add_parser(name)
        if two:
            p.add_argument("rep_a")
            p.add_argument("rep_b")
        else:
            p.add_argument("rep")
        p.add_argument("--window", default="", help="override: N1,...,Nk (default 3 per color)")
        p.add_argument("--sample", type=int, default=DEFAULT_SAMPLE_CAP)
        p.add_argument("--json", action="store_true")
        p.set_defaults(func=fn)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
