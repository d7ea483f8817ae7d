"""
Bundled example instances and a random instance generator.

Every bundled instance is rebuilt in code and validated on load; the same data
ships as files under svarc/data for the command line.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import UnknownInstance
from ..util.seed_all import seed_all
from .abelian import AbGroup
from .category import (
    FinCat,
    FunctorMap,
    Subcategory,
    free_category,
    identity_functor,
    interval_category,
    make_category,
    poset_category,
    product,
    validate_functor,
)
from .factorization import (
    NaturalSystem,
    Pairing,
    constant_system,
    multiplication_pairing,
    sign_twisted_system,
    zero_pairing,
)

Z = AbGroup((0,))
F2 = AbGroup((2,))


@dataclass
class Instance:
    name: str
    category: FinCat
    system: Optional[NaturalSystem] = None
    pairing: Optional[Pairing] = None
    functor: Optional[FunctorMap] = None
    relative: Optional[Subcategory] = None
    extra: dict = field(default_factory=dict, repr=False)

    @property
    def total(self):
        return self.functor.source if self.functor is not None else None


def parallel_arrows():
    return make_category(
        ["C", "D"],
        [("alpha", "C", "D"), ("beta", "C", "D")],
        name="S",
    )


def parallel_arrows_system(S, orientation="pull"):
    """
    All values Z and all maps the identity except one -id: beta^* at id_D
    (orientation 'pull') or beta_* at id_C (orientation 'push').
    """
    if orientation == "pull":
        return sign_twisted_system(S, Z, pull_signs={"beta": -1}, name="D")
    return sign_twisted_system(S, Z, push_signs={"beta": -1}, name="D'")


def parallel_arrows_S():
    S = parallel_arrows()
    D = parallel_arrows_system(S)
    relative = Subcategory.checked(S, {"C"}, {"id_C"})
    alternate = parallel_arrows_system(S, "push")
    return Instance(
        "parallel_arrows_S",
        S,
        D,
        zero_pairing(D),
        relative=relative,
        extra={"alternate_system": alternate},
    )


def iso_pair(name="E"):
    """Two objects and mutually inverse arrows f, g."""
    return make_category(
        ["A", "B"],
        [("f", "A", "B"), ("g", "B", "A")],
        [("g", "f", "id_A"), ("f", "g", "id_B")],
        name=name,
    )


def involution(name="Z2"):
    return make_category(["*"], [("h", "*", "*")], [("h", "h", "id_*")], name=name)


FIBERS = {"pair": iso_pair, "involution": involution}


def groupoid_to_Z2():
    E, Z2 = iso_pair(), involution()
    P = validate_functor(
        E,
        Z2,
        {"A": "*", "B": "*"},
        {"id_A": "id_*", "id_B": "id_*", "f": "h", "g": "h"},
    )
    D = constant_system(Z2, F2)
    return Instance("groupoid_to_Z2", Z2, D, multiplication_pairing(D), functor=P)


def doblecir_covering():
    S = parallel_arrows()
    E = make_category(
        ["C1", "C2", "D1", "D2"],
        [
            ("alpha1", "C1", "D1"),
            ("alpha2", "C2", "D2"),
            ("beta1", "C1", "D2"),
            ("beta2", "C2", "D1"),
        ],
        name="E",
    )
    obj_map = {"C1": "C", "C2": "C", "D1": "D", "D2": "D"}
    mor_map = {f"id_{x}": f"id_{y}" for x, y in obj_map.items()}
    mor_map.update({"alpha1": "alpha", "alpha2": "alpha", "beta1": "beta", "beta2": "beta"})
    P = validate_functor(E, S, obj_map, mor_map)
    D = parallel_arrows_system(S)
    return Instance("doblecir_covering", S, D, zero_pairing(D), functor=P)


def projective_plane():
    return make_category(
        ["X", "Y", "Z"],
        [
            ("alpha1", "X", "Y"),
            ("alpha2", "X", "Y"),
            ("beta1", "Y", "Z"),
            ("beta2", "Y", "Z"),
            ("gamma1", "X", "Z"),
            ("gamma2", "X", "Z"),
        ],
        [
            ("beta1", "alpha1", "gamma1"),
            ("beta2", "alpha2", "gamma1"),
            ("beta1", "alpha2", "gamma2"),
            ("beta2", "alpha1", "gamma2"),
        ],
        name="P2",
    )


def projective_plane_total():
    sheets = (1, 2)
    objects = [f"{x}{i}" for x in "XYZ" for i in sheets]
    arrows = [(f"alpha{i}{j}", f"X{i}", f"Y{j}") for i in sheets for j in sheets]
    arrows += [(f"beta{j}{k}", f"Y{j}", f"Z{k}") for j in sheets for k in sheets]
    arrows += [(f"gamma{i}{k}", f"X{i}", f"Z{k}") for i in sheets for k in sheets]
    compose = [
        (f"beta{j}{k}", f"alpha{i}{j}", f"gamma{i}{k}")
        for i in sheets
        for j in sheets
        for k in sheets
    ]
    return make_category(objects, arrows, compose, name="E")


def projective_plane_covering():
    """
    Latin-square covering: an arrow between sheets i and j goes to the first
    base arrow when i == j and to the second otherwise.
    """
    P2, E = projective_plane(), projective_plane_total()
    obj_map = {x: x[0] for x in E.objects}
    mor_map = {f"id_{x}": f"id_{x[0]}" for x in E.objects}
    for m in E.non_identity:
        name, i, j = m[:-2], m[-2], m[-1]
        mor_map[m] = f"{name}{1 if i == j else 2}"
    P = validate_functor(E, P2, obj_map, mor_map)
    logging.warning("projective plane covering uses the Latin-square sheet assignment")
    D = constant_system(P2, F2)
    return Instance("projective_plane_covering", P2, D, multiplication_pairing(D), functor=P)


def interval_m(m=1):
    c = interval_category(m)
    D = constant_system(c, Z)
    return Instance(f"interval_{m}", c, D, multiplication_pairing(D))


def terminal():
    instance = interval_m(0)
    instance.name = "terminal"
    return instance


BUNDLED = {
    "parallel_arrows_S": parallel_arrows_S,
    "groupoid_to_Z2": groupoid_to_Z2,
    "doblecir_covering": doblecir_covering,
    "projective_plane_covering": projective_plane_covering,
    "interval_m": interval_m,
    "terminal": terminal,
}


def load_bundled(name, **kwargs):
    if name not in BUNDLED:
        raise UnknownInstance(f"unknown instance {name!r}; choose from {', '.join(BUNDLED)}")
    instance = BUNDLED[name](**kwargs)
    logging.debug(f"loaded bundled instance {instance.name}")
    return instance


def _random_quiver(n_objects, edge_prob, max_parallel):
    objects = [f"o{i}" for i in range(n_objects)]
    edges = []
    for i in range(n_objects):
        for j in range(i + 1, n_objects):
            if np.random.rand() < edge_prob:
                for _ in range(np.random.randint(1, max_parallel + 1)):
                    edges.append((f"e{len(edges)}", objects[i], objects[j]))
    return objects, edges


def _path_signs(c, edge_signs):
    """Multiplicative extension of signs on generating edges to paths named 'g.f'."""
    signs = {}
    for m in c.non_identity:
        sign = 1
        for e in m.split("."):
            sign *= edge_signs[e]
        signs[m] = sign
    return signs


def _covering(base, objects, edges, sheets):
    """Free category on `sheets` copies of the quiver, edges permuting the sheets."""
    lifted_objects = [f"{x}@{s}" for x in objects for s in range(sheets)]
    lifted_edges = []
    for e, d, c in edges:
        perm = np.random.permutation(sheets)
        for s in range(sheets):
            lifted_edges.append((f"{e}@{s}", f"{d}@{s}", f"{c}@{perm[s]}"))
    E = free_category(lifted_objects, lifted_edges, name="E")
    obj_map = {x: x.split("@")[0] for x in E.objects}
    mor_map = {}
    for m in E.morphisms:
        if E.is_identity(m):
            mor_map[m] = base.identity[obj_map[E.dom[m]]]
        else:
            mor_map[m] = ".".join(part.split("@")[0] for part in m.split("."))
    return validate_functor(E, base, obj_map, mor_map)


def _with_fiber(P, fiber):
    """P o pr: E x G -> B for a small groupoid G; a bifibration, never a covering."""
    E = product(P.source, fiber)
    obj_map = {x: P.obj(x[0]) for x in E.objects}
    mor_map = {m: P(m[0]) for m in E.morphisms}
    return validate_functor(E, P.target, obj_map, mor_map)


def generate_random(
    seed,
    n_objects=4,
    edge_prob=0.5,
    max_parallel=2,
    acyclic=True,
    thin=False,
    with_covering=False,
    sheets=2,
    fiber=None,
    modulus=0,
    twisted=False,
):
    """
    Random validated instance: a free category on a random acyclic quiver (or a
    random poset when `thin`), an optional covering, and a constant or
    sign-twisted system with a natural pairing. `fiber` ("pair" or "involution")
    multiplies the total category by that groupoid, over the covering when there
    is one and over the identity of the base otherwise.
    """
    seed_all(seed)
    group = AbGroup.cyclic(modulus) if modulus else Z
    if thin:
        objects = [f"o{i}" for i in range(n_objects)]
        relations = [
            (objects[i], objects[j])
            for i in range(n_objects)
            for j in range(i + 1, n_objects)
            if np.random.rand() < edge_prob
        ]
        c = poset_category(objects, relations, name=f"poset{seed}")
        edges = None
    else:
        objects, edges = _random_quiver(n_objects, edge_prob, max_parallel)
        if acyclic:
            c = free_category(objects, edges, name=f"free{seed}")
        else:
            c = _with_idempotent_loop(objects, edges, seed)

    if twisted:
        if edges is not None and acyclic:
            signs = _path_signs(c, {e: int(np.random.choice([-1, 1])) for e, _, _ in edges})
        else:
            eps = {x: int(np.random.choice([-1, 1])) for x in c.objects}
            signs = {m: eps[c.dom[m]] * eps[c.cod[m]] for m in c.non_identity}
        D = sign_twisted_system(c, group, signs, signs, name="twisted")
    else:
        D = constant_system(c, group)
    pairing = multiplication_pairing(D)

    functor = None
    if with_covering:
        assert edges is not None and acyclic, "coverings are generated over free categories"
        functor = _covering(c, objects, edges, sheets)
    if fiber is not None:
        functor = _with_fiber(functor or identity_functor(c), FIBERS[fiber]("G"))
    logging.debug(f"random instance seed={seed}: {c}")
    return Instance(f"random{seed}", c, D, pairing, functor=functor)


def _with_idempotent_loop(objects, edges, seed):
    """Free category on the quiver plus an idempotent endomorphism on a separate object L."""
    free = free_category(objects, edges)
    arrows = [(m, free.dom[m], free.cod[m]) for m in free.non_identity]
    arrows.append(("loop", "L", "L"))
    compose = [(g, f, h) for (g, f), h in free.table.items() if not (free.is_identity(g) or free.is_identity(f))]
    compose.append(("loop", "loop", "loop"))
    return make_category(list(objects) + ["L"], arrows, compose, name=f"looped{seed}")
