import itertools

import pytest

from kgraphrep import (Degree, InvalidSkeletonError, check_skeleton, compose,
                       degree_range, enumerate_morphisms, factorize, graph_properties,
                       lambda_min, normal_form, segment, validate)
from kgraphrep.kgraph import (BadIntervalError, DegreeTooLargeError, NotComposableError,
                              RangeMismatchError, SkeletonError, SourceRangeMismatchError)

from conftest import bflip_skeleton, broken_cube_skeleton, delta_skeleton
from oracles import brute_lambda_min, confluence_fuzz


# -- validation -------------------------------------------------------------

def test_fixture_graphs_validate(delta, mono2, flip2, bflip, cyc7):
    for g in (delta, mono2, flip2, bflip, cyc7):
        assert check_skeleton(g.skeleton) == []


def test_broken_cube_rejected():
    violations = check_skeleton(broken_cube_skeleton())
    kinds = {v.kind for v in violations}
    assert kinds == {"cube-inconsistent"}
    with pytest.raises(InvalidSkeletonError):
        validate(broken_cube_skeleton())


def test_unpaired_square_is_square_violation():
    sk = delta_skeleton()
    stripped = type(sk)(sk.rank, sk.vertices, sk.edges, ())
    violations = check_skeleton(stripped)
    assert any(v.kind == "square-not-bijective" for v in violations)


def test_missing_color_reports_not_source_free(bflip):
    sk = bflip_skeleton()
    without_g = type(sk)(sk.rank, sk.vertices,
                         tuple(e for e in sk.edges if e.name != "g"),
                         tuple(s for s in sk.squares if "g" not in s.left + s.right))
    violations = check_skeleton(without_g)
    assert any(v.kind == "not-source-free" and v.vertex == "v" and v.color == 2
               for v in violations)


def test_structural_errors_raise_skeleton_error():
    sk = delta_skeleton()
    with pytest.raises(SkeletonError):
        type(sk)(0, sk.vertices, sk.edges, sk.squares)
    with pytest.raises(SkeletonError):
        type(sk)(sk.rank, sk.vertices, sk.edges + (sk.edges[0],), sk.squares)


# -- normal form ------------------------------------------------------------

def test_normal_form_bflip_example(bflip):
    m = normal_form(bflip, ["e", "h", "f", "g"])
    assert m.edges == ("e", "e", "h", "g")
    assert m.degree == Degree((2, 2))
    assert m.range == "u" and m.source == "u"


def test_normal_form_empty_is_identity(bflip):
    ident = normal_form(bflip, [], range_vertex="v")
    assert ident.is_identity() and ident.range == "v" and ident.degree == Degree((0, 0))


def test_normal_form_flip2_swaps_index(flip2):
    m = normal_form(flip2, ["r", "b1"])
    assert m.edges == ("b2", "r")


def test_normal_form_rejects_noncomposable(bflip):
    with pytest.raises(NotComposableError) as err:
        normal_form(bflip, ["e", "g"])  # s(e)=u but r(g)=v
    assert err.value.position == 1


# -- compose ----------------------------------------------------------------

def test_compose_identifies_square_sides(bflip):
    eh = compose(bflip.morphism(["e"]), bflip.morphism(["h"]))
    hf = compose(bflip.morphism(["h"]), bflip.morphism(["f"]))
    assert eh == hf == bflip.morphism(["e", "h"])


def test_compose_identity_laws(bflip):
    lam = bflip.morphism(["e", "h"])
    assert compose(bflip.identity("u"), lam) == lam
    assert compose(lam, bflip.identity("v")) == lam


def test_compose_mismatch_raises(bflip):
    with pytest.raises(SourceRangeMismatchError):
        compose(bflip.morphism(["e"]), bflip.morphism(["g"]))


def test_compose_flip2(flip2):
    assert compose(flip2.morphism(["r"]), flip2.morphism(["b1"])).edges == ("b2", "r")


# -- factorize / segment ------------------------------------------------------

def test_factorize_recomposes(bflip):
    lam = bflip.morphism(["e", "e", "h", "g"])
    mu, nu = factorize(lam, Degree((1, 1)))
    assert mu.degree == Degree((1, 1))
    assert mu.edges == ("e", "h")
    assert compose(mu, nu) == lam


def test_factorize_edge_cases(bflip):
    lam = bflip.morphism(["e", "e", "h", "g"])
    mu, nu = factorize(lam, Degree((0, 0)))
    assert mu == bflip.identity("u") and nu == lam
    mu, nu = factorize(lam, lam.degree)
    assert mu == lam and nu == bflip.identity("u")
    with pytest.raises(DegreeTooLargeError):
        factorize(lam, Degree((3, 0)))


def test_segment_examples(bflip):
    lam = bflip.morphism(["e", "e", "h", "g"])
    assert segment(lam, Degree((0, 0)), lam.degree) == lam
    assert segment(lam, Degree((0, 0)), Degree((1, 1))) == bflip.morphism(["e", "h"])
    mid = segment(lam, Degree((1, 1)), Degree((1, 1)))
    assert mid.is_identity() and mid.range == "v"
    with pytest.raises(BadIntervalError):
        segment(lam, Degree((2, 2)), Degree((1, 1)))


def test_factorization_roundtrip_all_small_degrees(mono2, flip2, bflip):
    for graph in (mono2, flip2, bflip):
        for v in graph.vertices:
            for lam in enumerate_morphisms(graph, v, Degree((2, 2))):
                for m in degree_range(lam.degree):
                    mu, nu = factorize(lam, m)
                    assert compose(mu, nu) == lam
                    assert mu.degree == m


def test_unique_factorization_by_brute_force(flip2, bflip):
    for graph in (flip2, bflip):
        for v in graph.vertices:
            for lam in enumerate_morphisms(graph, v, Degree((2, 1))):
                for m in degree_range(lam.degree):
                    pairs = []
                    for mu in enumerate_morphisms(graph, v, m):
                        for nu in enumerate_morphisms(graph, mu.source, lam.degree - m):
                            if compose(mu, nu) == lam:
                                pairs.append((mu, nu))
                    assert pairs == [factorize(lam, m)]


# -- enumeration ---------------------------------------------------------------

def test_enumerate_bflip_collapses_spellings(bflip):
    found = enumerate_morphisms(bflip, "u", Degree((1, 1)))
    assert [m.edges for m in found] == [("e", "h")]


def test_enumerate_mono2_free_blue(mono2):
    found = enumerate_morphisms(mono2, "w", Degree((2, 0)))
    assert sorted(m.edges for m in found) == [("b1", "b1"), ("b1", "b2"),
                                              ("b2", "b1"), ("b2", "b2")]


def test_enumerate_degree_zero(bflip):
    assert enumerate_morphisms(bflip, "v", Degree((0, 0))) == [bflip.identity("v")]


def test_enumerate_count_consistency(mono2, flip2, bflip):
    for graph in (mono2, flip2, bflip):
        for v in graph.vertices:
            for m in degree_range(Degree((1, 1))):
                for n in degree_range(Degree((1, 1))):
                    total = len(enumerate_morphisms(graph, v, m + n))
                    split = sum(len(enumerate_morphisms(graph, lam.source, n))
                                for lam in enumerate_morphisms(graph, v, m))
                    assert total == split


# -- minimal extensions ----------------------------------------------------------

def test_lambda_min_bflip_example(bflip):
    exts = lambda_min(bflip.morphism(["e"]), bflip.morphism(["h"]))
    assert [(x.alpha.edges, x.beta.edges) for x in exts] == [(("h",), ("f",))]


def test_lambda_min_reflexive(bflip):
    lam = bflip.morphism(["e", "h"])
    exts = lambda_min(lam, lam)
    assert len(exts) == 1
    assert exts[0].alpha.is_identity() and exts[0].beta.is_identity()


def test_lambda_min_disjoint_edges(mono2):
    assert lambda_min(mono2.morphism(["b1"]), mono2.morphism(["b2"])) == []


def test_lambda_min_range_mismatch(bflip):
    with pytest.raises(RangeMismatchError):
        lambda_min(bflip.morphism(["e"]), bflip.morphism(["f"]))


def test_lambda_min_matches_brute_force(flip2, bflip):
    for graph in (flip2, bflip):
        pool = [m for v in graph.vertices
                for n in degree_range(Degree((2, 2)))
                for m in enumerate_morphisms(graph, v, n)]
        for lam, eta in itertools.product(pool, pool):
            if lam.range != eta.range:
                continue
            fast = {(x.alpha.edges, x.beta.edges) for x in lambda_min(lam, eta)}
            assert fast == brute_lambda_min(lam, eta)


# -- properties and confluence ------------------------------------------------

def test_graph_properties(bflip, mono2):
    assert graph_properties(bflip) == {"source_free": True,
                                       "strongly_connected": True,
                                       "finite": True}
    assert graph_properties(mono2)["strongly_connected"] is True


def test_graph_properties_disconnected():
    from kgraphrep import Edge, Skeleton, Square
    sk = Skeleton(1, ("a", "b"),
                  (Edge("x", 1, "a", "a"), Edge("y", 1, "a", "b"), Edge("z", 1, "b", "b")),
                  ())
    g = validate(sk)
    props = graph_properties(g)
    assert props["source_free"] is True
    assert props["strongly_connected"] is False


def test_confluence_fuzz_on_valid_fixtures(mono2, flip2, bflip):
    for graph in (mono2, flip2, bflip):
        report = confluence_fuzz(graph.skeleton, trials=200)
        assert report.agreed, report.disagreements[:3]


def test_confluence_fuzz_detects_broken_cube():
    report = confluence_fuzz(broken_cube_skeleton(), trials=200)
    assert not report.agreed
