from fractions import Fraction

import pytest

from kgraphrep import (AtomicRepresentation, AtomSingleton, Complement, Cylinder,
                       Degree, FullSpace, MultiplicityMismatchError,
                       OrbitCollisionError, OrbitSpec, Vec, are_disjoint,
                       build_intertwiner, identity_matrix, orbit_representation,
                       paths_equal, pure_cycle_path, thue_morse_path,
                       unitarily_equivalent)
from kgraphrep.exact import GaussianRational, I_UNIT
from kgraphrep.paths import ep_path


def delta_rep(delta, mult=1, window=(3, 3)):
    z = pure_cycle_path(delta.morphism(["b", "r"]))
    return orbit_representation(delta, z, mult, Degree(window))


def bflip_rep(bflip, base_word=("e", "e", "h", "g"), mult=1, window=(3, 3)):
    base = pure_cycle_path(bflip.morphism(list(base_word)))
    return orbit_representation(bflip, base, mult, Degree(window))


def mono2_rep(mono2, mult=1, window=(2, 2)):
    base = pure_cycle_path(mono2.morphism(["b1", "r"]))
    return orbit_representation(mono2, base, mult, Degree(window))


# -- construction ---------------------------------------------------------------

def test_delta_window_is_single_point(delta):
    rep = delta_rep(delta)
    assert len(rep.window_points()) == 1


def test_bflip_window_two_paths(bflip):
    rep = bflip_rep(bflip)
    assert len(rep.window_points()) == 2
    ranges = {rep.path_of(pt).range for pt in rep.window_points()}
    assert ranges == {"u", "v"}


def test_multiplicity_scales_window(bflip):
    rep = bflip_rep(bflip, mult=3)
    assert len(rep.window_points()) == 6
    fibers = {pt[2] for pt in rep.window_points()}
    assert fibers == {1, 2, 3}


def test_zero_multiplicity_rejected(delta):
    z = pure_cycle_path(delta.morphism(["b", "r"]))
    with pytest.raises(Exception):
        OrbitSpec(z, 0)


def test_orbit_collision_rejected(bflip):
    x = pure_cycle_path(bflip.morphism(["e", "e", "h", "g"]))
    y = pure_cycle_path(bflip.morphism(["f", "f", "g", "h"]))
    with pytest.raises(OrbitCollisionError):
        AtomicRepresentation(bflip, [OrbitSpec(x, 1), OrbitSpec(y, 1)], Degree((2, 2)))


def test_two_disjoint_orbits_allowed(mono2):
    a = pure_cycle_path(mono2.morphism(["b1", "r"]))
    b = pure_cycle_path(mono2.morphism(["b2", "r"]))
    rep = AtomicRepresentation(mono2, [OrbitSpec(a, 1), OrbitSpec(b, 2)], Degree((2, 2)))
    orbits = {pt[0] for pt in rep.window_points()}
    assert orbits == {0, 1}


# -- operator actions --------------------------------------------------------------

def test_delta_generators_act_trivially(delta):
    rep = delta_rep(delta)
    pt = rep.window_points()[0]
    e = Vec.basis(pt)
    for name in ("b", "r"):
        word = delta.morphism([name])
        assert rep.apply(word, e) == e
        assert rep.apply_star(word, e) == e


def test_bflip_actions(bflip):
    rep = bflip_rep(bflip)
    points = rep.window_points()
    x_pt = next(pt for pt in points if rep.path_of(pt).range == "u")
    y_pt = next(pt for pt in points if rep.path_of(pt).range == "v")
    e_edge = bflip.morphism(["e"])
    h_edge = bflip.morphism(["h"])
    assert rep.apply(e_edge, Vec.basis(x_pt)) == Vec.basis(x_pt)
    assert rep.apply_star(e_edge, Vec.basis(x_pt)) == Vec.basis(x_pt)
    assert rep.apply(h_edge, Vec.basis(y_pt)) == Vec.basis(x_pt)
    assert rep.apply(h_edge, Vec.basis(x_pt)).is_zero()


def test_orthogonality_of_distinct_edges(mono2):
    rep = mono2_rep(mono2)
    pt = rep.window_points()[0]
    e = Vec.basis(pt)
    b1, b2 = mono2.morphism(["b1"]), mono2.morphism(["b2"])
    assert rep.apply_star(b2, rep.apply(b1, e)).is_zero()
    assert rep.apply_star(b1, rep.apply(b1, e)) == e


def test_apply_is_linear(bflip):
    rep = bflip_rep(bflip, mult=2)
    pts = rep.window_points()
    v = Vec({pts[0]: Fraction(1, 2), pts[2]: Fraction(-3)})
    word = bflip.morphism(["e"])
    image = rep.apply(word, v)
    expected = rep.apply(word, Vec.basis(pts[0])).scale(Fraction(1, 2)) \
        + rep.apply(word, Vec.basis(pts[2])).scale(Fraction(-3))
    assert image == expected


# -- projections ---------------------------------------------------------------------

def test_pvm_cylinder_and_atoms(bflip):
    rep = bflip_rep(bflip)
    points = rep.window_points()
    x_pt = next(pt for pt in points if rep.path_of(pt).range == "u")
    y_pt = next(pt for pt in points if rep.path_of(pt).range == "v")
    x_path, y_path = rep.path_of(x_pt), rep.path_of(y_pt)
    z_e = Cylinder(bflip.morphism(["e"]))
    assert rep.project(z_e, Vec.basis(x_pt)) == Vec.basis(x_pt)
    assert rep.project(z_e, Vec.basis(y_pt)).is_zero()
    assert rep.project(Complement(FullSpace()), Vec.basis(x_pt)).is_zero()
    assert rep.project(AtomSingleton(x_path), Vec.basis(y_pt)).is_zero()
    assert rep.project(AtomSingleton(y_path), Vec.basis(y_pt)) == Vec.basis(y_pt)


def test_atom_projection_is_cylinder_limit(bflip):
    """Cylinder projections of growing degree stabilize to the atom projection."""
    rep = bflip_rep(bflip)
    points = rep.window_points()
    x_pt = next(pt for pt in points if rep.path_of(pt).range == "u")
    x_path = rep.path_of(x_pt)
    target = rep.project(AtomSingleton(x_path), Vec.basis(x_pt))
    for n in [Degree((2, 2)), Degree((3, 3)), Degree((4, 4))]:
        approx = rep.project(Cylinder(x_path.segment(n)), Vec.basis(x_pt))
        assert approx == target


# -- atoms, irreducibility, equivalence ------------------------------------------------

def test_atom_dimension_constant_on_orbit(bflip):
    rep = bflip_rep(bflip, mult=3)
    x = pure_cycle_path(bflip.morphism(["e", "e", "h", "g"]))
    y = pure_cycle_path(bflip.morphism(["f", "f", "g", "h"]))
    assert rep.atom_dimension(x) == 3
    assert rep.atom_dimension(y) == 3


def test_atom_dimension_outside_orbit(mono2):
    rep = mono2_rep(mono2)
    other = pure_cycle_path(mono2.morphism(["b2", "r"]))
    assert rep.atom_dimension(other) == 0


def test_is_irreducible(delta):
    assert delta_rep(delta, mult=1).is_irreducible() is True
    assert delta_rep(delta, mult=2).is_irreducible() is False


def test_two_orbit_rep_not_irreducible(mono2):
    a = pure_cycle_path(mono2.morphism(["b1", "r"]))
    b = pure_cycle_path(mono2.morphism(["b2", "r"]))
    rep = AtomicRepresentation(mono2, [OrbitSpec(a, 1), OrbitSpec(b, 1)], Degree((2, 2)))
    assert rep.is_irreducible() is False


def test_equivalence_same_orbit_same_mult(bflip):
    rep_x = bflip_rep(bflip, base_word=("e", "e", "h", "g"))
    rep_y = bflip_rep(bflip, base_word=("f", "f", "g", "h"))
    verdict = unitarily_equivalent(rep_x, rep_y)
    assert verdict.equivalent is True
    assert not are_disjoint(rep_x, rep_y)


def test_equivalence_fails_on_multiplicity(bflip):
    rep1 = bflip_rep(bflip, mult=1)
    rep2 = bflip_rep(bflip, mult=2)
    verdict = unitarily_equivalent(rep1, rep2)
    assert verdict.equivalent is False
    assert "multiplicity" in verdict.reason


def test_disjoint_orbits(mono2):
    rep_a = mono2_rep(mono2)
    rep_b = orbit_representation(mono2, pure_cycle_path(mono2.morphism(["b2", "r"])),
                                 1, Degree((2, 2)))
    assert are_disjoint(rep_a, rep_b)
    assert unitarily_equivalent(rep_a, rep_b).equivalent is False


# -- monic -----------------------------------------------------------------------------

def test_monic_flags(delta, bflip):
    assert delta_rep(delta, mult=1).is_monic() is True
    assert delta_rep(delta, mult=2).is_monic() is False
    assert bflip_rep(bflip, mult=1).is_monic() is True


def test_cyclic_vector_ranks(delta, bflip):
    vec, check = delta_rep(delta, mult=1).cyclic_vector()
    assert check.rank == check.window_dimension == 1 and check.spans_window
    vec, check = bflip_rep(bflip, mult=1).cyclic_vector()
    assert check.rank == check.window_dimension == 2 and check.spans_window
    vec, check = bflip_rep(bflip, mult=2).cyclic_vector()
    assert check.window_dimension == 4 and check.rank == 2 and not check.spans_window


def test_cyclic_vector_coefficients(bflip):
    vec, _ = bflip_rep(bflip, mult=1).cyclic_vector()
    values = sorted(vec.coeffs.values(), reverse=True)
    assert values == [Fraction(1, 2), Fraction(1, 4)]


# -- encoding and coding maps -----------------------------------------------------------

def test_encoding_examples(bflip):
    rep = bflip_rep(bflip)
    x_pt = next(pt for pt in rep.window_points() if rep.path_of(pt).range == "u")
    assert rep.encoding(x_pt, Degree((0, 0))) == bflip.identity("u")
    assert rep.encoding(x_pt, Degree((1, 1))) == bflip.morphism(["e", "h"])


def test_shift_then_prefix_round_trip(bflip, mono2):
    for rep in (bflip_rep(bflip), mono2_rep(mono2)):
        for pt in rep.window_points():
            n = Degree((1, 1))
            shifted = rep.shift_point(n, pt)
            head = rep.encoding(pt, n)
            assert rep.prefix_point(head, shifted) == pt


# -- intertwiners --------------------------------------------------------------------------

def test_identity_intertwiner_bflip(bflip):
    rep_x = bflip_rep(bflip, base_word=("e", "e", "h", "g"))
    rep_y = bflip_rep(bflip, base_word=("f", "f", "g", "h"))
    intertwiner = build_intertwiner(rep_x, rep_y)
    for pt in rep_x.window_points():
        image = intertwiner.apply(Vec.basis(pt))
        assert len(image.coeffs) == 1
        target = next(iter(image.coeffs))
        assert paths_equal(rep_y.path_of(target), rep_x.path_of(pt)).is_equal
    back = intertwiner.apply_star(intertwiner.apply(Vec.basis(rep_x.window_points()[0])))
    assert back == Vec.basis(rep_x.window_points()[0])


def test_scalar_minus_one_intertwiner(bflip):
    rep = bflip_rep(bflip)
    other = bflip_rep(bflip)
    intertwiner = build_intertwiner(rep, other, ((Fraction(-1),),))
    pt = rep.window_points()[0]
    image = intertwiner.apply(Vec.basis(pt))
    assert list(image.coeffs.values()) == [Fraction(-1)]


def test_swap_matrix_intertwiner_delta(delta):
    rep = delta_rep(delta, mult=2)
    other = delta_rep(delta, mult=2)
    swap = ((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0)))
    intertwiner = build_intertwiner(rep, other, swap)
    (o, p, f) = rep.window_points()[0]
    image = intertwiner.apply(Vec.basis((o, p, 1)))
    assert list(image.coeffs) == [(0, p, 2)]


def test_complex_unitary_intertwiner(delta):
    rep = delta_rep(delta, mult=1)
    intertwiner = build_intertwiner(rep, delta_rep(delta, mult=1), ((I_UNIT,),))
    pt = rep.window_points()[0]
    image = intertwiner.apply(Vec.basis(pt))
    assert list(image.coeffs.values()) == [I_UNIT]
    assert intertwiner.apply_star(image) == Vec.basis(pt)


def test_multiplicity_mismatch_raises(delta):
    with pytest.raises(MultiplicityMismatchError):
        build_intertwiner(delta_rep(delta, mult=1), delta_rep(delta, mult=2))


def test_nonunitary_matrix_rejected(delta):
    with pytest.raises(Exception):
        build_intertwiner(delta_rep(delta), delta_rep(delta), ((Fraction(2),),))


def test_well_definedness_never_fires_for_scalars(bflip, mono2, delta):
    """Every fixture pairing with the identity base matrix passes the
    multi-decomposition agreement check."""
    reps = [bflip_rep(bflip), delta_rep(delta, mult=2), mono2_rep(mono2)]
    for rep in reps:
        twin = AtomicRepresentation(rep.graph, rep.orbit_specs, rep.window)
        mult = rep.orbit_specs[0].multiplicity
        intertwiner = build_intertwiner(rep, twin, identity_matrix(mult))
        assert intertwiner is not None


def test_multiple_decompositions_recorded(bflip):
    rep = bflip_rep(bflip)
    window = rep.windows[0]
    x_idx = next(p for p in range(window.initial_count)
                 if window.paths[p].range == "u")
    decomps = window.decompositions(x_idx)
    assert len(decomps) >= 2
    degrees = {(a.degree.coords, j.coords) for a, j in decomps}
    assert ((0, 0), (0, 0)) in degrees          # x = id_u . x
    assert any(a.edges == ("e",) for a, _ in decomps)  # x = e . shifted x
