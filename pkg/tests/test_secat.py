import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from svarc.errors import NotABifibration, SetExplosion
from svarc.model.category import (
    FunctorMap,
    Subcategory,
    constant_functor,
    identity_functor,
    interval_category,
    product,
    subcategory_generated_by,
)
from svarc.model.cover import is_geometric_cover, realizable_sets
from svarc.model.factorization import constant_system, multiplication_pairing
from svarc.model.instances import F2, iso_pair
from svarc.model.secat import (
    HOMOTOPIC,
    INFINITE,
    STRICT,
    has_section,
    maximal_sectioned_subcategories,
    minimum_cover,
    secat,
    sections,
    svarc_bound,
)


def test_realizable_sets(parallel_arrows, projective_plane):
    S = parallel_arrows.category
    family = realizable_sets(S)
    assert family.maximal_sets == (
        frozenset({"id_C", "alpha", "id_D"}),
        frozenset({"id_C", "beta", "id_D"}),
    )
    assert len(realizable_sets(interval_category(0))) == 1
    P2 = realizable_sets(projective_plane.category)
    assert len(P2) == 4
    assert frozenset({"id_X", "id_Y", "id_Z", "alpha2", "beta1", "gamma2"}) in P2.maximal_sets


def test_realizable_sets_of_a_loop(groupoid):
    family = realizable_sets(groupoid.category)
    assert family.maximal_sets == (frozenset({"id_*", "h"}),)


def test_too_many_states(projective_plane):
    with pytest.raises(SetExplosion):
        realizable_sets(projective_plane.category, max_states=2)


def test_geometric_covers(parallel_arrows):
    S = parallel_arrows.category
    alpha = subcategory_generated_by(S, ["alpha"])
    beta = subcategory_generated_by(S, ["beta"])
    assert is_geometric_cover([alpha, beta], S)
    check = is_geometric_cover([alpha], S)
    assert not check
    assert check.witness == ("beta",)
    assert is_geometric_cover([Subcategory.whole(S)], S)
    assert is_geometric_cover([alpha], alpha)


def test_minimum_cover():
    assert minimum_cover(0b111, [0b011, 0b110, 0b100, 0b001]) == [0, 1]
    assert minimum_cover(0b11, [0b01]) is None
    assert minimum_cover(0, []) == []
    assert minimum_cover(0b1111, [0b0001, 0b0010, 0b0100, 0b1000, 0b0111]) == [3, 4]


@given(st.lists(st.integers(min_value=1, max_value=255), min_size=1, max_size=7))
def test_minimum_cover_is_minimum(masks):
    universe = 0
    for m in masks:
        universe |= m
    chosen = minimum_cover(universe, masks)
    covered = 0
    for i in chosen:
        covered |= masks[i]
    assert covered == universe
    smallest = next(
        k
        for k in range(1, len(masks) + 1)
        for combo in itertools.combinations(masks, k)
        if _union(combo) == universe
    )
    assert len(chosen) == smallest


def _union(masks):
    out = 0
    for m in masks:
        out |= m
    return out


def test_sections_of_the_doblecir_covering(doblecir):
    P = doblecir.functor
    alpha = subcategory_generated_by(P.target, ["alpha"])
    found = list(sections(P, alpha))
    assert len(found) == 2
    for witness in found:
        assert P.compose(witness.section).key == alpha.inclusion().key
    assert not has_section(P, Subcategory.whole(P.target))
    assert has_section(P, alpha, HOMOTOPIC)


def test_no_sections_of_the_groupoid(groupoid):
    P = groupoid.functor
    whole = Subcategory.whole(P.target)
    assert list(sections(P, whole)) == []
    assert list(sections(P, whole, HOMOTOPIC)) == []
    assert has_section(P, Subcategory(P.target, {"*"}, {"id_*"}))


def test_secat_of_the_doblecir_covering(doblecir):
    P = doblecir.functor
    result = secat(P)
    assert result.value == 1
    assert {u.label() for u in result.certificate.pieces} == {"<alpha>", "<beta>"}
    assert result.certificate.kind == STRICT
    assert len(maximal_sectioned_subcategories(P)) == 2
    assert secat(P, HOMOTOPIC).value == 1


def test_secat_of_the_groupoid(groupoid):
    result = secat(groupoid.functor)
    assert result.value is INFINITE
    assert result.certificate is None
    assert str(result) == "infinite"
    assert secat(groupoid.functor, HOMOTOPIC).value is INFINITE
    assert INFINITE > 10**9


def test_secat_of_the_projective_plane(projective_plane):
    result = secat(projective_plane.functor)
    assert result.value == 3
    assert len(result.certificate.pieces) == 4
    assert is_geometric_cover(result.certificate.pieces, projective_plane.category)


def test_secat_of_an_identity(parallel_arrows):
    assert secat(identity_functor(parallel_arrows.category)).value == 0


def test_svarc_bound_on_the_doblecir_covering(doblecir):
    report = svarc_bound(doblecir.functor, doblecir.system, doblecir.pairing, check_homotopic=True)
    assert report.cpl.value == 1
    assert report.sg == 1
    assert report.sg_homotopic == 1
    assert report.holds
    (generator,) = report.kernel[1]
    assert not generator.is_zero()


def test_svarc_bound_on_the_projective_plane(projective_plane):
    report = svarc_bound(projective_plane.functor, projective_plane.system, projective_plane.pairing)
    assert (report.cpl.value, report.sg) == (2, 3)
    assert report.holds


def test_svarc_bound_on_the_groupoid(groupoid):
    report = svarc_bound(groupoid.functor, groupoid.system, groupoid.pairing, degree_cap=2)
    assert report.sg is INFINITE
    assert report.cpl.value == 2
    assert report.cpl.capped
    assert report.holds


def test_svarc_bound_of_an_identity(parallel_arrows):
    P = identity_functor(parallel_arrows.category)
    report = svarc_bound(P, parallel_arrows.system, parallel_arrows.pairing)
    assert (report.cpl.value, report.sg) == (0, 0)
    assert report.holds


def test_svarc_bound_needs_a_bifibration(parallel_arrows):
    P = constant_functor(interval_category(0), parallel_arrows.category, "D")
    with pytest.raises(NotABifibration):
        svarc_bound(P, parallel_arrows.system, parallel_arrows.pairing)


def test_svarc_bound_with_a_cyclic_total_category():
    point = interval_category(0)
    P = constant_functor(iso_pair(), point, "0")
    D = constant_system(point, F2)
    report = svarc_bound(P, D, multiplication_pairing(D))
    assert (report.cpl.value, report.sg) == (0, 0)
    assert report.kernel == {}
    assert report.holds

    I1 = interval_category(1)
    E = product(I1, iso_pair())
    P = FunctorMap(E, I1, {x: x[0] for x in E.objects}, {m: m[0] for m in E.morphisms})
    D = constant_system(I1, F2)
    report = svarc_bound(P, D, multiplication_pairing(D))
    assert (report.cpl.value, report.sg) == (0, 0)
    assert all(x.is_zero() for x in report.kernel[1])
    assert report.holds
