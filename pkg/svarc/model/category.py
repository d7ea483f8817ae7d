"""
Finite small categories given by explicit composition tables, functors between
them, subcategories, natural transformations and functor homotopy.

Ids of objects and morphisms are arbitrary hashables (strings in files, tuples
for derived categories such as products and factorization categories). All
orders are declaration orders, which keeps every enumeration deterministic.
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Tuple

import networkx as nx

from ..errors import (
    BadCompositionDomain,
    InvalidCategory,
    InvalidFunctor,
    InvalidSubcategory,
    MissingIdentity,
    NonAssociative,
    SetExplosion,
)

# upper bound on functors materialized by homotopy decisions
MAX_FUNCTORS = 20000


@dataclass(frozen=True, eq=False)
class FinCat:
    objects: Tuple
    morphisms: Tuple
    dom: Dict = field(repr=False)
    cod: Dict = field(repr=False)
    identity: Dict = field(repr=False)
    table: Dict = field(repr=False)
    name: str = ""

    @cached_property
    def object_index(self):
        return {x: i for i, x in enumerate(self.objects)}

    @cached_property
    def morphism_index(self):
        return {m: i for i, m in enumerate(self.morphisms)}

    @cached_property
    def identities(self):
        return frozenset(self.identity.values())

    def is_identity(self, m):
        return m in self.identities

    @cached_property
    def non_identity(self):
        return tuple(m for m in self.morphisms if m not in self.identities)

    @cached_property
    def _hom(self):
        hom = {}
        for m in self.morphisms:
            hom.setdefault((self.dom[m], self.cod[m]), []).append(m)
        return {k: tuple(v) for k, v in hom.items()}

    def hom(self, a, b):
        return self._hom.get((a, b), ())

    @cached_property
    def _out(self):
        out = {x: [] for x in self.objects}
        for m in self.morphisms:
            out[self.dom[m]].append(m)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def _in(self):
        into = {x: [] for x in self.objects}
        for m in self.morphisms:
            into[self.cod[m]].append(m)
        return {k: tuple(v) for k, v in into.items()}

    def out_of(self, x):
        return self._out[x]

    def into(self, x):
        return self._in[x]

    def composable(self, g, f):
        return self.dom[g] == self.cod[f]

    def compose(self, g, *fs):
        """g o f1 o f2 o ..."""
        result = g
        for f in fs:
            if not self.composable(result, f):
                raise BadCompositionDomain(
                    f"{result!r} o {f!r}: dom {self.dom[result]!r} != cod {self.cod[f]!r}"
                )
            result = self.table[(result, f)]
        return result

    def composable_pairs(self):
        for f in self.morphisms:
            for g in self.out_of(self.cod[f]):
                yield g, f

    @cached_property
    def has_cycle(self):
        """True when non-identity arrows form a directed cycle (self-loops included)."""
        return not nx.is_directed_acyclic_graph(self.arrow_graph)

    @cached_property
    def arrow_graph(self):
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.objects)
        for m in self.non_identity:
            graph.add_edge(self.dom[m], self.cod[m], key=m)
        return graph

    @cached_property
    def nerve_dimension(self):
        """Largest n with a non-degenerate n-chain, or None for an unbounded nerve."""
        if self.has_cycle:
            return None
        if not self.non_identity:
            return 0
        return nx.dag_longest_path_length(nx.DiGraph(self.arrow_graph))

    def __str__(self):
        return self.name or f"<{len(self.objects)} objects, {len(self.morphisms)} morphisms>"


def _fill_identity_laws(morphisms, dom, cod, identity, table):
    table = dict(table)
    for m in morphisms:
        table.setdefault((identity[cod[m]], m), m)
        table.setdefault((m, identity[dom[m]]), m)
    return table


def make_category(objects, arrows, compose=(), identities=None, name=""):
    """
    Build and validate a category from objects, (id, dom, cod) arrows and
    [g, f, g o f] triples. Identities are created as "id_<object>" unless given.
    """
    objects = tuple(objects)
    morphisms, dom, cod = [], {}, {}
    if identities is None:
        identities = {x: f"id_{x}" for x in objects}
        for x in objects:
            morphisms.append(identities[x])
            dom[identities[x]] = cod[identities[x]] = x
    for m, d, c in arrows:
        if m in dom:
            raise InvalidCategory(f"duplicate morphism id {m!r}")
        morphisms.append(m)
        dom[m], cod[m] = d, c
    table = {(g, f): h for g, f, h in compose}
    return validate_category(
        {
            "name": name,
            "objects": list(objects),
            "morphisms": [(m, dom[m], cod[m]) for m in morphisms],
            "identities": dict(identities),
            "compose": [(g, f, h) for (g, f), h in table.items()],
        }
    )


def validate_category(raw):
    """
    Check every category axiom on raw data and return a FinCat. Triples involving
    an identity may be omitted and are filled from the identity laws first.
    """
    objects = tuple(raw["objects"])
    if len(set(objects)) != len(objects):
        raise InvalidCategory("duplicate object ids")
    object_set = set(objects)
    morphisms, dom, cod = [], {}, {}
    for entry in raw["morphisms"]:
        if isinstance(entry, dict):
            m, d, c = entry["id"], entry["dom"], entry["cod"]
        else:
            m, d, c = entry
        if m in dom:
            raise InvalidCategory(f"duplicate morphism id {m!r}")
        if d not in object_set or c not in object_set:
            raise InvalidCategory(f"morphism {m!r} has unknown endpoint ({d!r} -> {c!r})")
        morphisms.append(m)
        dom[m], cod[m] = d, c
    morphisms = tuple(morphisms)

    identity = dict(raw.get("identities", {}))
    for x in objects:
        if x not in identity:
            raise MissingIdentity(f"object {x!r} has no identity morphism")
        i = identity[x]
        if i not in dom or dom[i] != x or cod[i] != x:
            raise MissingIdentity(f"identity {i!r} of {x!r} is not an endomorphism of {x!r}")

    given = {}
    for g, f, h in raw.get("compose", ()):
        if g not in dom or f not in dom or h not in dom:
            raise BadCompositionDomain(f"compose triple ({g!r}, {f!r}, {h!r}) names an unknown morphism")
        if dom[g] != cod[f]:
            raise BadCompositionDomain(f"{g!r} o {f!r} is listed but dom {dom[g]!r} != cod {cod[f]!r}")
        if dom[h] != dom[f] or cod[h] != cod[g]:
            raise BadCompositionDomain(f"{g!r} o {f!r} = {h!r} has the wrong endpoints")
        if (g, f) in given and given[(g, f)] != h:
            raise BadCompositionDomain(f"{g!r} o {f!r} listed twice with different results")
        given[(g, f)] = h

    for m in morphisms:
        left = given.get((identity[cod[m]], m), m)
        right = given.get((m, identity[dom[m]]), m)
        if left != m or right != m:
            raise MissingIdentity(f"identity law fails for {m!r}: {left!r}, {right!r}")
    table = _fill_identity_laws(morphisms, dom, cod, identity, given)

    for f in morphisms:
        for g in morphisms:
            if dom[g] == cod[f] and (g, f) not in table:
                raise BadCompositionDomain(f"composite {g!r} o {f!r} is missing from the table")

    cat = FinCat(objects, morphisms, dom, cod, identity, table, raw.get("name", ""))
    for f in morphisms:
        for g in cat.out_of(cod[f]):
            gf = table[(g, f)]
            for h in cat.out_of(cod[g]):
                left = table[(table[(h, g)], f)]
                right = table[(h, gf)]
                if left != right:
                    raise NonAssociative(h, g, f, left, right)
    logging.debug(f"category {cat} validated")
    return cat


def free_category(objects, edges, name=""):
    """
    Free category on an acyclic quiver; composites are named "g.f" from the
    generating edge names.
    """
    objects = tuple(objects)
    edges = tuple(edges)
    graph = nx.DiGraph()
    graph.add_nodes_from(objects)
    graph.add_edges_from((d, c) for _, d, c in edges)
    assert nx.is_directed_acyclic_graph(graph), "free categories are only finite on acyclic quivers"
    # every nonempty path as (edge tuple in application order, dom, cod)
    all_paths = []
    frontier = [((e,), d, c) for e, d, c in edges]
    while frontier:
        all_paths.extend(frontier)
        frontier = [
            (p + (e,), d, c2)
            for p, d, c in frontier
            for e, d2, c2 in edges
            if d2 == c
        ]

    def name_of(path):
        return ".".join(reversed(path))

    arrows = [(name_of(p), d, c) for p, d, c in all_paths]
    by_path = {p: name_of(p) for p, _, _ in all_paths}
    compose = []
    for p, d, c in all_paths:
        for q, d2, c2 in all_paths:
            if d2 == c:
                compose.append((by_path[q], by_path[p], by_path[p + q]))
    return make_category(objects, arrows, compose, name=name)


def poset_category(objects, relations, name=""):
    """Thin category of the reflexive-transitive closure of `relations` (pairs x <= y)."""
    objects = tuple(objects)
    graph = nx.DiGraph()
    graph.add_nodes_from(objects)
    graph.add_edges_from(relations)
    closure = nx.transitive_closure_dag(graph)
    arrows = [(f"{x}<{y}", x, y) for x in objects for y in objects if closure.has_edge(x, y)]
    by_pair = {(d, c): m for m, d, c in arrows}
    for x in objects:
        by_pair[(x, x)] = f"id_{x}"
    compose = []
    for m, d, c in arrows:
        for m2, d2, c2 in arrows:
            if d2 == c:
                compose.append((m2, m, by_pair[(d, c2)]))
    return make_category(objects, arrows, compose, name=name)


def interval_category(m):
    """Zigzag 0 -> 1 <- 2 -> ... with m + 1 objects."""
    assert m >= 0, "interval length must be nonnegative"
    objects = [str(i) for i in range(m + 1)]
    arrows = []
    for i in range(m):
        if i % 2 == 0:
            arrows.append((f"u{i}", str(i), str(i + 1)))
        else:
            arrows.append((f"u{i}", str(i + 1), str(i)))
    return make_category(objects, arrows, name=f"I{m}")


def product(c, d):
    objects = tuple((x, y) for x in c.objects for y in d.objects)
    morphisms = tuple((f, g) for f in c.morphisms for g in d.morphisms)
    dom = {(f, g): (c.dom[f], d.dom[g]) for f, g in morphisms}
    cod = {(f, g): (c.cod[f], d.cod[g]) for f, g in morphisms}
    identity = {(x, y): (c.identity[x], d.identity[y]) for x, y in objects}
    table = {
        ((f2, g2), (f1, g1)): (c.table[(f2, f1)], d.table[(g2, g1)])
        for f2, f1 in c.composable_pairs()
        for g2, g1 in d.composable_pairs()
    }
    return FinCat(objects, morphisms, dom, cod, identity, table, f"{c} x {d}")


def product_with_interval(c, m):
    return product(c, interval_category(m))


def opposite(c):
    table = {(f, g): h for (g, f), h in c.table.items()}
    return FinCat(c.objects, c.morphisms, c.cod, c.dom, c.identity, table, f"{c}^op")


@dataclass(frozen=True, eq=False)
class FunctorMap:
    source: FinCat
    target: FinCat
    obj_map: Dict = field(repr=False)
    mor_map: Dict = field(repr=False)

    def obj(self, x):
        return self.obj_map[x]

    def __call__(self, m):
        return self.mor_map[m]

    @cached_property
    def key(self):
        return tuple(self.obj_map[x] for x in self.source.objects) + tuple(
            self.mor_map[m] for m in self.source.morphisms
        )

    def __eq__(self, other):
        if not isinstance(other, FunctorMap):
            return NotImplemented
        return self.source is other.source and self.target is other.target and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def compose(self, other):
        """self o other."""
        assert other.target is self.source, "composing functors with mismatched categories"
        return FunctorMap(
            other.source,
            self.target,
            {x: self.obj_map[other.obj_map[x]] for x in other.source.objects},
            {m: self.mor_map[other.mor_map[m]] for m in other.source.morphisms},
        )


def validate_functor(source, target, obj_map, mor_map):
    for x in source.objects:
        if obj_map.get(x) not in target.object_index:
            raise InvalidFunctor(f"object {x!r} is not sent to an object of {target}")
    for m in source.morphisms:
        fm = mor_map.get(m)
        if fm not in target.morphism_index:
            raise InvalidFunctor(f"morphism {m!r} is not sent to a morphism of {target}")
        if target.dom[fm] != obj_map[source.dom[m]] or target.cod[fm] != obj_map[source.cod[m]]:
            raise InvalidFunctor(f"F({m!r}) = {fm!r} does not preserve dom/cod")
    for x in source.objects:
        if mor_map[source.identity[x]] != target.identity[obj_map[x]]:
            raise InvalidFunctor(f"identity of {x!r} is not sent to an identity")
    for g, f in source.composable_pairs():
        if mor_map[source.table[(g, f)]] != target.table[(mor_map[g], mor_map[f])]:
            raise InvalidFunctor(f"F({g!r} o {f!r}) != F({g!r}) o F({f!r})")
    return FunctorMap(source, target, dict(obj_map), dict(mor_map))


def identity_functor(c):
    return FunctorMap(c, c, {x: x for x in c.objects}, {m: m for m in c.morphisms})


def constant_functor(source, target, x):
    i = target.identity[x]
    return FunctorMap(source, target, {y: x for y in source.objects}, {m: i for m in source.morphisms})


def opposite_functor(F, source_op=None, target_op=None):
    return FunctorMap(
        source_op or opposite(F.source), target_op or opposite(F.target), F.obj_map, F.mor_map
    )


@dataclass(frozen=True)
class Subcategory:
    parent: FinCat = field(repr=False, compare=False)
    objects: FrozenSet = frozenset()
    morphisms: FrozenSet = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "objects", frozenset(self.objects))
        object.__setattr__(self, "morphisms", frozenset(self.morphisms))

    @classmethod
    def checked(cls, parent, objects, morphisms):
        sub = cls(parent, objects, morphisms)
        for m in sub.morphisms:
            if m not in parent.morphism_index:
                raise InvalidSubcategory(f"{m!r} is not a morphism of {parent}")
            if parent.dom[m] not in sub.objects or parent.cod[m] not in sub.objects:
                raise InvalidSubcategory(f"endpoints of {m!r} are not in the subcategory")
        for x in sub.objects:
            if parent.identity[x] not in sub.morphisms:
                raise InvalidSubcategory(f"identity of {x!r} is missing")
        for g in sub.morphisms:
            for f in sub.morphisms:
                if parent.composable(g, f) and parent.table[(g, f)] not in sub.morphisms:
                    raise InvalidSubcategory(f"{g!r} o {f!r} is missing")
        return sub

    @classmethod
    def whole(cls, parent):
        return cls(parent, parent.objects, parent.morphisms)

    @classmethod
    def empty(cls, parent):
        return cls(parent)

    def contains_chain(self, chain):
        return all(m in self.morphisms for m in chain)

    def issubset(self, other):
        return self.objects <= other.objects and self.morphisms <= other.morphisms

    def sorted_morphisms(self):
        return sorted(self.morphisms, key=self.parent.morphism_index.__getitem__)

    def sorted_objects(self):
        return sorted(self.objects, key=self.parent.object_index.__getitem__)

    @cached_property
    def category(self):
        p = self.parent
        morphisms = tuple(self.sorted_morphisms())
        return FinCat(
            tuple(self.sorted_objects()),
            morphisms,
            {m: p.dom[m] for m in morphisms},
            {m: p.cod[m] for m in morphisms},
            {x: p.identity[x] for x in self.objects},
            {(g, f): p.table[(g, f)] for g in morphisms for f in morphisms if p.composable(g, f)},
            f"sub({p})",
        )

    def inclusion(self):
        return FunctorMap(
            self.category,
            self.parent,
            {x: x for x in self.objects},
            {m: m for m in self.morphisms},
        )

    def label(self):
        """Non-identity arrows (or objects when there are none), for reports."""
        arrows = [m for m in self.sorted_morphisms() if not self.parent.is_identity(m)]
        if arrows:
            return "<" + ", ".join(str(m) for m in arrows) + ">"
        return "{" + ", ".join(str(x) for x in self.sorted_objects()) + "}"


def close_morphisms(parent, objects, morphisms):
    """Objects and morphisms of the smallest subcategory containing the given ones."""
    objects = set(objects)
    morphisms = set(morphisms)
    for m in morphisms:
        objects.add(parent.dom[m])
        objects.add(parent.cod[m])
    morphisms.update(parent.identity[x] for x in objects)
    frontier = list(morphisms)
    while frontier:
        new = []
        for m in frontier:
            for n in list(morphisms):
                for g, f in ((m, n), (n, m)):
                    if parent.composable(g, f):
                        h = parent.table[(g, f)]
                        if h not in morphisms:
                            morphisms.add(h)
                            new.append(h)
        frontier = new
    return frozenset(objects), frozenset(morphisms)


def subcategory_generated_by(parent, gens=(), objects=()):
    return Subcategory(parent, *close_morphisms(parent, objects, gens))


def union_subcategory(u, v):
    assert u.parent is v.parent, "subcategories of different categories"
    return subcategory_generated_by(u.parent, u.morphisms | v.morphisms, u.objects | v.objects)


def enumerate_functors(src, dst, obj_choices=None, mor_choices=None):
    """
    Yield every functor src -> dst consistent with the optional allowed-choice
    tables, in lexicographic order of (object images, morphism images).
    """
    obj_choices = obj_choices or {}
    mor_choices = mor_choices or {}
    objects = src.objects
    morphisms = src.non_identity
    position = {m: i for i, m in enumerate(morphisms)}

    # composition constraints g o f = h checked when the last of the three is assigned
    checks = {m: [] for m in morphisms}
    for g, f in src.composable_pairs():
        if src.is_identity(g) or src.is_identity(f):
            continue
        h = src.table[(g, f)]
        involved = [x for x in (g, f, h) if not src.is_identity(x)]
        last = max(involved, key=position.__getitem__)
        checks[last].append((g, f, h))

    obj_map, mor_map = {}, {}

    def image(m):
        if src.is_identity(m):
            return dst.identity[obj_map[src.dom[m]]]
        return mor_map[m]

    def assign_morphisms(k):
        if k == len(morphisms):
            full = dict(mor_map)
            for x in objects:
                full[src.identity[x]] = dst.identity[obj_map[x]]
            yield FunctorMap(src, dst, dict(obj_map), full)
            return
        m = morphisms[k]
        candidates = dst.hom(obj_map[src.dom[m]], obj_map[src.cod[m]])
        allowed = mor_choices.get(m)
        for t in candidates:
            if allowed is not None and t not in allowed:
                continue
            mor_map[m] = t
            if all(dst.table[(image(g), image(f))] == image(h) for g, f, h in checks[m]):
                yield from assign_morphisms(k + 1)
        mor_map.pop(m, None)

    def feasible(x):
        # every arrow between assigned objects needs a candidate image
        for m in itertools.chain(src.out_of(x), src.into(x)):
            d, c = src.dom[m], src.cod[m]
            if d in obj_map and c in obj_map and not src.is_identity(m):
                candidates = dst.hom(obj_map[d], obj_map[c])
                allowed = mor_choices.get(m)
                if not any(allowed is None or t in allowed for t in candidates):
                    return False
        return True

    def assign_objects(k):
        if k == len(objects):
            yield from assign_morphisms(0)
            return
        x = objects[k]
        allowed = obj_choices.get(x)
        for y in dst.objects:
            if allowed is not None and y not in allowed:
                continue
            obj_map[x] = y
            if feasible(x):
                yield from assign_objects(k + 1)
        obj_map.pop(x, None)

    yield from assign_objects(0)


@dataclass(frozen=True, eq=False)
class NatTrans:
    source: FunctorMap
    target: FunctorMap
    components: Dict = field(repr=False)

    def __repr__(self):
        return f"NatTrans({self.components})"


def natural_transformations(F, G):
    assert F.source is G.source and F.target is G.target, "functors must share source and target"
    c, d = F.source, F.target
    objects = c.objects
    components = {}

    def square_ok(x):
        for m in itertools.chain(c.out_of(x), c.into(x)):
            a, b = c.dom[m], c.cod[m]
            if a in components and b in components:
                if d.table[(G(m), components[a])] != d.table[(components[b], F(m))]:
                    return False
        return True

    def assign(k):
        if k == len(objects):
            yield NatTrans(F, G, dict(components))
            return
        x = objects[k]
        for t in d.hom(F.obj(x), G.obj(x)):
            components[x] = t
            if square_ok(x):
                yield from assign(k + 1)
        components.pop(x, None)

    return list(assign(0))


def transformation_graph(src, dst, max_functors=None):
    """
    Undirected graph on all functors src -> dst with an edge wherever a natural
    transformation exists in either direction; edges carry one (transformation,
    direction) witness.
    """
    max_functors = max_functors or MAX_FUNCTORS
    functors = []
    for F in enumerate_functors(src, dst):
        functors.append(F)
        if len(functors) > max_functors:
            raise SetExplosion(f"more than {max_functors} functors {src} -> {dst}")
    graph = nx.Graph()
    graph.add_nodes_from(range(len(functors)))
    for i, F in enumerate(functors):
        for j in range(i + 1, len(functors)):
            forward = natural_transformations(F, functors[j])
            if forward:
                graph.add_edge(i, j, witness={(i, j): forward[0]})
                continue
            backward = natural_transformations(functors[j], F)
            if backward:
                graph.add_edge(i, j, witness={(j, i): backward[0]})
    logging.debug(f"{len(functors)} functors {src} -> {dst}, {graph.number_of_edges()} transformation edges")
    return functors, graph


def homotopy_classes(src, dst, max_functors=None):
    """Connected components of the transformation graph, each in enumeration order."""
    functors, graph = transformation_graph(src, dst, max_functors)
    components = [sorted(c) for c in nx.connected_components(graph)]
    components.sort(key=lambda c: c[0])
    return [[functors[i] for i in c] for c in components]


def homotopic(F, G, max_functors=None):
    """
    Decide F ~ G. Returns (flag, zigzag) where the zigzag lists natural
    transformations along a path from F to G, each oriented as it exists.
    """
    assert F.source is G.source and F.target is G.target, "functors must share source and target"
    if F == G:
        return True, []
    for direct in (natural_transformations(F, G), natural_transformations(G, F)):
        if direct:
            return True, [direct[0]]
    functors, graph = transformation_graph(F.source, F.target, max_functors)
    i, j = functors.index(F), functors.index(G)
    if not nx.has_path(graph, i, j):
        return False, None
    path = nx.shortest_path(graph, i, j)
    zigzag = []
    for a, b in zip(path, path[1:]):
        (theta,) = graph.edges[a, b]["witness"].values()
        zigzag.append(theta)
    return True, zigzag
