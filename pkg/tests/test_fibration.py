import pytest

from svarc.model.category import (
    FunctorMap,
    constant_functor,
    identity_functor,
    interval_category,
    make_category,
    opposite_functor,
    product,
    subcategory_generated_by,
)
from svarc.model.fibration import (
    cartesian_lifts,
    classify,
    fiber,
    is_cartesian,
    is_opcartesian,
    opcartesian_lifts,
    pullback,
    pullback_functor,
    pushforward_functor,
    vertical_isomorphisms,
)


def isomorphic_pair_over_a_point():
    E = make_category(
        ["A", "B"],
        [("f", "A", "B"), ("g", "B", "A")],
        [("g", "f", "id_A"), ("f", "g", "id_B")],
        name="E",
    )
    point = interval_category(0)
    return constant_functor(E, point, "0")


def test_bundled_functors_are_coverings(doblecir, groupoid, projective_plane):
    for instance in (doblecir, groupoid, projective_plane):
        report = classify(instance.functor)
        assert report.is_covering
        assert report.is_bifibration
        assert not report.witnesses


def test_cartesian_arrows(doblecir, groupoid):
    assert is_cartesian(groupoid.functor, "f")
    assert is_opcartesian(groupoid.functor, "f")
    assert is_cartesian(doblecir.functor, "alpha1")
    assert is_opcartesian(doblecir.functor, "beta2")
    for m in doblecir.functor.source.identities:
        assert is_cartesian(doblecir.functor, m)
        assert is_opcartesian(doblecir.functor, m)


def test_point_of_an_interval():
    I0, I1 = interval_category(0), interval_category(1)
    report = classify(constant_functor(I0, I1, "0"))
    assert report.is_fibration
    assert not report.is_opfibration
    assert report.witnesses["opfibration"] == [("u0", "0")]
    assert not report.is_covering


def test_point_of_the_parallel_arrows(parallel_arrows):
    S = parallel_arrows.category
    P = constant_functor(interval_category(0), S, "D")
    report = classify(P)
    assert report.is_opfibration
    assert not report.is_fibration
    assert cartesian_lifts(P, "alpha", "0") == []
    assert ("alpha", "0") in report.witnesses["fibration"]


def test_projection_is_a_bifibration_but_not_a_covering(parallel_arrows):
    S = parallel_arrows.category
    E = product(S, interval_category(1))
    P = FunctorMap(E, S, {x: x[0] for x in E.objects}, {m: m[0] for m in E.morphisms})
    report = classify(P)
    assert report.is_bifibration
    assert not report.is_covering
    assert report.chosen_lifts[("alpha", ("D", "1"))] == ("alpha", "id_1")


def test_cartesian_is_dual_to_opcartesian(doblecir):
    P = doblecir.functor
    P_op = opposite_functor(P)
    for m in P.source.morphisms:
        assert bool(is_cartesian(P, m)) == bool(is_opcartesian(P_op, m))
        assert bool(is_opcartesian(P, m)) == bool(is_cartesian(P_op, m))


def test_fibers(doblecir, groupoid):
    over_D = fiber(doblecir.functor, "D")
    assert over_D.objects == {"D1", "D2"}
    assert over_D.morphisms == {"id_D1", "id_D2"}
    over_point = fiber(groupoid.functor, "*")
    assert over_point.objects == {"A", "B"}
    assert over_point.morphisms == {"id_A", "id_B"}
    I1 = interval_category(1)
    assert fiber(identity_functor(I1), "1").objects == {"1"}


def test_pullback_along_a_subcategory(doblecir):
    P = doblecir.functor
    u = subcategory_generated_by(P.target, ["alpha"])
    E2, P2, F2 = pullback(P, u.inclusion())
    assert len(E2.objects) == 4
    assert len(E2.non_identity) == 2
    assert P.compose(F2).key == u.inclusion().compose(P2).key
    report = classify(P2)
    assert report.is_bifibration
    assert report.is_covering


def test_pullback_along_the_identity(groupoid):
    P = groupoid.functor
    E2, P2, F2 = pullback(P, identity_functor(P.target))
    assert len(E2.objects) == len(P.source.objects)
    assert len(E2.morphisms) == len(P.source.morphisms)
    assert classify(P2).is_bifibration


def test_fiber_functors_of_the_doblecir_covering(doblecir):
    P = doblecir.functor
    report = classify(P)
    back = pullback_functor(P, "alpha", report)
    assert back.obj_map == {"D1": "C1", "D2": "C2"}
    assert back.mor_map == {"id_D1": "id_C1", "id_D2": "id_C2"}
    forward = pushforward_functor(P, "beta", report)
    assert forward.obj_map == {"C1": "D2", "C2": "D1"}


def test_fiber_functors_need_lifts():
    I0, I1 = interval_category(0), interval_category(1)
    with pytest.raises(AssertionError):
        pushforward_functor(constant_functor(I0, I1, "0"), "u0")


def test_cartesian_lifts_are_unique_up_to_vertical_isomorphism():
    P = isomorphic_pair_over_a_point()
    lifts = cartesian_lifts(P, "id_0", "A")
    assert lifts == ["id_A", "g"]
    assert vertical_isomorphisms(P, "id_A", "g") == ["f"]
    assert vertical_isomorphisms(P, "g", "g") == ["id_B"]
    assert opcartesian_lifts(P, "id_0", "A") == ["id_A", "f"]
