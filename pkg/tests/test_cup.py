import numpy as np
import pytest

from svarc.errors import DegreeOverflow, NotGeometricCover, PairingNotNatural
from svarc.model.category import subcategory_generated_by
from svarc.model.cochain import CochainComplex, relative_complex
from svarc.model.cup import CupLength, cup_classes, cup_cochain, cup_length, relative_cup, validate_pairing
from svarc.model.factorization import Pairing, ring_pairing
from svarc.model.instances import interval_m
from svarc.model.instances import projective_plane as plane_category

GENERATOR = [1, 0, 0, 1, 1, 0]


@pytest.fixture(scope="module")
def plane(projective_plane):
    return CochainComplex(projective_plane.category, projective_plane.system)


def test_cup_square_on_the_projective_plane(projective_plane, plane):
    square = cup_cochain(plane, GENERATOR, 1, GENERATOR, 1, projective_plane.pairing)
    assert list(square) == [0, 0, 0, 1]
    f = plane.cohomology(1).class_of(GENERATOR)
    assert not cup_classes([f, f], projective_plane.pairing).is_zero()


def test_cup_with_zero(projective_plane, plane):
    square = cup_cochain(plane, GENERATOR, 1, [0] * 6, 1, projective_plane.pairing)
    assert not square.any()


def test_cup_is_independent_of_representatives(projective_plane, plane):
    f = plane.cohomology(1).class_of(GENERATOR)
    shifted = np.array(GENERATOR, dtype=object) + plane.coboundary(0)([1, 0, 0])
    g = plane.cohomology(1).class_of(shifted)
    assert f == g
    assert cup_classes([f, f], projective_plane.pairing) == cup_classes([g, g], projective_plane.pairing)
    assert cup_classes([f, g], projective_plane.pairing) == cup_classes([g, f], projective_plane.pairing)


def test_cup_lengths(parallel_arrows, projective_plane, plane):
    S = CochainComplex(parallel_arrows.category, parallel_arrows.system)
    assert cup_length(S, parallel_arrows.pairing) == CupLength(1)
    assert cup_length(plane, projective_plane.pairing) == CupLength(2)
    assert cup_length(plane, projective_plane.pairing, restrict_to={1: []}) == CupLength(0)


def test_cup_length_of_the_interval():
    interval = interval_m(3)
    cx = CochainComplex(interval.category, interval.system)
    assert cup_length(cx, interval.pairing).value == 0


def test_cup_length_reports_the_cap(groupoid):
    cx = CochainComplex(groupoid.category, groupoid.system, max_degree=3)
    result = cup_length(cx, groupoid.pairing)
    assert result == CupLength(3, capped=True)
    assert str(result) == ">= 3"
    assert cup_length(cx, groupoid.pairing, degree_cap=2) == CupLength(2, capped=True)


def test_cup_beyond_the_cap(groupoid):
    cx = CochainComplex(groupoid.category, groupoid.system, max_degree=3)
    with pytest.raises(DegreeOverflow):
        cup_cochain(cx, [1], 1, [1], 3, groupoid.pairing)


def test_ring_pairings_are_natural():
    P2 = plane_category()
    for modulus in (0, 2, 3):
        validate_pairing(ring_pairing(P2, modulus))


def test_flipped_pairing_is_rejected():
    p = ring_pairing(plane_category())
    tables = dict(p.tables)
    tables[("beta1", "alpha1")] = -tables[("beta1", "alpha1")]
    with pytest.raises(PairingNotNatural):
        validate_pairing(Pairing(p.left, p.right, p.out, tables, "flipped"))


def test_relative_cup_over_a_cover_of_the_parallel_arrows(parallel_arrows):
    S, D = parallel_arrows.category, parallel_arrows.system
    pieces = [subcategory_generated_by(S, ["alpha"]), subcategory_generated_by(S, ["beta"])]
    classes = [relative_complex(S, u, D).cohomology(1).generators[0] for u in pieces]
    product = relative_cup(classes, pieces, parallel_arrows.pairing)
    assert product.degree == 2
    assert product.cohomology.group.is_trivial


def test_relative_cup_needs_a_geometric_cover(projective_plane):
    P2, D = projective_plane.category, projective_plane.system
    pieces = [subcategory_generated_by(P2, ["alpha1"]), subcategory_generated_by(P2, ["beta1"])]
    classes = [relative_complex(P2, u, D).cohomology(1).zero() for u in pieces]
    with pytest.raises(NotGeometricCover):
        relative_cup(classes, pieces, projective_plane.pairing)


def test_relative_cup_is_compatible_with_gamma(projective_plane, plane):
    P2, D, pairing = projective_plane.category, projective_plane.system, projective_plane.pairing
    u = subcategory_generated_by(P2, ["alpha1"])
    rel = relative_complex(P2, u, D)
    (x,) = rel.cohomology(1).generators
    product = relative_cup([x, x], [u, u], pairing, absolute=plane)
    assert not product.is_zero()
    gx = plane.cohomology(1).class_of(rel.embed(plane, x.representative, 1))
    target = product.cohomology.complex
    image = plane.cohomology(2).class_of(target.embed(plane, product.representative, 2))
    assert image == cup_classes([gx, gx], pairing)
