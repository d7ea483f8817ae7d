import pytest
from hypothesis import given

from svarc.errors import UnknownInstance
from svarc.model.category import interval_category
from svarc.model.fibration import classify
from svarc.model.instances import (
    BUNDLED,
    FIBERS,
    generate_random,
    load_bundled,
    parallel_arrows,
    projective_plane,
    projective_plane_covering,
    projective_plane_total,
)
from svarc.util.serialize import category_from_dict, category_to_dict, read_category, read_functor

from strategies import random_instances, seeds


@pytest.mark.parametrize("name", sorted(BUNDLED))
def test_bundled_instances_load(name):
    instance = load_bundled(name)
    assert instance.category is not None
    if instance.functor is not None:
        assert instance.functor.target is instance.category


def test_unknown_instance():
    with pytest.raises(UnknownInstance):
        load_bundled("moebius")


def test_instance_shapes():
    S = load_bundled("parallel_arrows_S").category
    assert (len(S.objects), len(S.morphisms)) == (2, 4)
    plane = load_bundled("projective_plane_covering")
    assert (len(plane.category.objects), len(plane.category.morphisms)) == (3, 9)
    assert plane.category.compose("beta1", "alpha1") == plane.category.compose("beta2", "alpha2") == "gamma1"
    assert plane.category.compose("beta1", "alpha2") == plane.category.compose("beta2", "alpha1") == "gamma2"
    assert len(plane.total.objects) == 6
    assert len(plane.total.non_identity) == 12
    terminal = load_bundled("terminal")
    assert category_to_dict(terminal.category) == category_to_dict(interval_category(0))


def test_latin_square_covering():
    P = projective_plane_covering().functor
    assert P("alpha11") == "alpha1"
    assert P("alpha12") == "alpha2"
    assert P("beta21") == "beta2"
    assert P("gamma22") == "gamma1"


@pytest.mark.parametrize(
    "filename, build",
    [("S.json", parallel_arrows), ("P2.json", projective_plane), ("P2_total.json", projective_plane_total)],
)
def test_data_files_match_the_code(data_file, filename, build):
    assert category_to_dict(read_category(data_file(filename))) == category_to_dict(build())


@pytest.mark.parametrize(
    "filename, name",
    [
        ("doblecir.json", "doblecir_covering"),
        ("groupoid.json", "groupoid_to_Z2"),
        ("projective_plane.json", "projective_plane_covering"),
    ],
)
def test_functor_files_match_the_code(data_file, filename, name):
    P = read_functor(data_file(filename))
    expected = load_bundled(name).functor
    assert category_to_dict(P.target) == category_to_dict(expected.target)
    assert category_to_dict(P.source) == category_to_dict(expected.source)
    assert P.obj_map == expected.obj_map
    assert P.mor_map == expected.mor_map


def test_random_instances_are_reproducible():
    a = generate_random(7, n_objects=4, with_covering=True)
    b = generate_random(7, n_objects=4, with_covering=True)
    assert category_to_dict(a.category) == category_to_dict(b.category)
    assert a.functor.key == b.functor.key


def test_random_single_object():
    instance = generate_random(3, n_objects=1)
    assert len(instance.category.morphisms) == 1


def test_random_instance_with_a_loop():
    instance = generate_random(5, n_objects=3, acyclic=False)
    assert instance.category.has_cycle
    assert instance.category.nerve_dimension is None


@given(random_instances(max_objects=5))
def test_random_instances_validate(instance):
    c = instance.category
    rebuilt = category_from_dict(category_to_dict(c))
    assert rebuilt.morphisms == tuple(str(m) for m in c.morphisms)


@given(seeds)
def test_random_posets_are_thin(seed):
    c = generate_random(seed, n_objects=4, thin=True).category
    for x in c.objects:
        for y in c.objects:
            assert len(c.hom(x, y)) <= 1


@given(random_instances(max_objects=4, with_covering=True))
def test_random_coverings(instance):
    report = classify(instance.functor)
    assert report.is_covering
    assert report.is_bifibration


@pytest.mark.parametrize(
    "with_covering, fiber", [(True, "involution"), (False, "involution"), (False, "pair")]
)
def test_random_projections_with_a_groupoid_fiber(with_covering, fiber):
    instance = generate_random(7, n_objects=3, edge_prob=0.8, max_parallel=1, with_covering=with_covering, fiber=fiber)
    P = instance.functor
    sheets = 2 if with_covering else 1
    assert len(P.source.objects) == len(instance.category.objects) * sheets * len(FIBERS[fiber]().objects)
    assert P.source.has_cycle
    report = classify(P)
    assert report.is_bifibration
    assert not report.is_covering
