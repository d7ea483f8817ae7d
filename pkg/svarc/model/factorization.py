"""
Factorization categories and natural systems.

A morphism of the factorization category from l to m is a pair (a, b) of base
morphisms with m = a o l o b; it is stored as the triple (a, b, l) so that ids
stay unique. A natural system is given by its push maps a_* = D(a, id) and pull
maps b^* = D(id, b); D(a, b) is then b^* after a_*.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from ..errors import MalformedHom, NotFunctorial
from .abelian import AbGroup, AbHom
from .category import FinCat, FunctorMap, validate_category


@dataclass(frozen=True, eq=False)
class FactCat:
    base: FinCat
    category: FinCat


def build_fact_cat(c, validate=True):
    morphisms, dom, cod, table = [], {}, {}, {}
    identity = {}
    for lam in c.morphisms:
        for alpha in c.out_of(c.cod[lam]):
            for beta in c.into(c.dom[lam]):
                m = (alpha, beta, lam)
                morphisms.append(m)
                dom[m] = lam
                cod[m] = c.compose(alpha, lam, beta)
        identity[lam] = (c.identity[c.cod[lam]], c.identity[c.dom[lam]], lam)
    for m in morphisms:
        alpha, beta, lam = m
        mu = cod[m]
        for alpha2 in c.out_of(c.cod[mu]):
            for beta2 in c.into(c.dom[mu]):
                table[((alpha2, beta2, mu), m)] = (c.compose(alpha2, alpha), c.compose(beta, beta2), lam)
    raw = {
        "name": f"F({c})",
        "objects": list(c.morphisms),
        "morphisms": [(m, dom[m], cod[m]) for m in morphisms],
        "identities": identity,
        "compose": [(g, f, h) for (g, f), h in table.items()],
    }
    if validate:
        category = validate_category(raw)
    else:
        category = FinCat(tuple(c.morphisms), tuple(morphisms), dom, cod, identity, table, raw["name"])
    logging.debug(f"factorization category of {c}: {len(morphisms)} morphisms")
    return FactCat(c, category)


def induced_hat(F, fc_source=None, fc_target=None):
    """F^(a, b) = (F a, F b) between factorization categories."""
    fc_source = fc_source or build_fact_cat(F.source, validate=False)
    fc_target = fc_target or build_fact_cat(F.target, validate=False)
    return FunctorMap(
        fc_source.category,
        fc_target.category,
        {lam: F(lam) for lam in F.source.morphisms},
        {(a, b, lam): (F(a), F(b), F(lam)) for a, b, lam in fc_source.category.morphisms},
    )


def arrow_projection(fc):
    """pi(l) = cod l, pi(a, b) = a."""
    c = fc.base
    return FunctorMap(
        fc.category,
        c,
        {lam: c.cod[lam] for lam in c.morphisms},
        {m: m[0] for m in fc.category.morphisms},
    )


@dataclass(frozen=True, eq=False)
class NaturalSystem:
    base: FinCat
    value: Dict = field(repr=False)
    push: Dict = field(repr=False)  # (alpha, lam) -> D_lam -> D_{alpha o lam}
    pull: Dict = field(repr=False)  # (beta, lam) -> D_lam -> D_{lam o beta}
    name: str = ""

    def __getitem__(self, lam):
        return self.value[lam]

    def push_map(self, alpha, lam):
        return self.push[(alpha, lam)]

    def pull_map(self, beta, lam):
        return self.pull[(beta, lam)]

    def structure(self, alpha, beta, lam):
        """D(alpha, beta) = beta^* o alpha_*."""
        c = self.base
        return self.pull[(beta, c.compose(alpha, lam))].compose(self.push[(alpha, lam)])

    def __str__(self):
        return self.name or "D"


def _default_map(source, target, where):
    if source != target:
        raise MalformedHom(f"{where} is missing and D-values {source} and {target} differ")
    return AbHom.identity(source)


def validate_natural_system(base, value, push=None, pull=None, name=""):
    """
    Assemble a natural system from values and the given structure maps (a map
    between equal groups may be omitted and defaults to the identity) and check
    functoriality on every composable pair of factorization morphisms.
    """
    push, pull = dict(push or {}), dict(pull or {})
    c = base
    for lam in c.morphisms:
        if lam not in value:
            raise MalformedHom(f"no group assigned to {lam!r}")
    full_push, full_pull = {}, {}
    for lam in c.morphisms:
        for alpha in c.out_of(c.cod[lam]):
            src, dst = value[lam], value[c.compose(alpha, lam)]
            h = push.pop((alpha, lam), None)
            h = h if h is not None else _default_map(src, dst, f"push of {alpha!r} at {lam!r}")
            if h.source != src or h.target != dst:
                raise MalformedHom(f"push of {alpha!r} at {lam!r} has the wrong groups")
            full_push[(alpha, lam)] = h
        for beta in c.into(c.dom[lam]):
            src, dst = value[lam], value[c.compose(lam, beta)]
            h = pull.pop((beta, lam), None)
            h = h if h is not None else _default_map(src, dst, f"pull of {beta!r} at {lam!r}")
            if h.source != src or h.target != dst:
                raise MalformedHom(f"pull of {beta!r} at {lam!r} has the wrong groups")
            full_pull[(beta, lam)] = h
    if push or pull:
        extra = next(iter(push or pull))
        raise MalformedHom(f"structure map at {extra!r} does not match composable morphisms")

    D = NaturalSystem(c, dict(value), full_push, full_pull, name)
    for lam in c.morphisms:
        if full_push[(c.identity[c.cod[lam]], lam)] != AbHom.identity(value[lam]):
            raise NotFunctorial(f"identity push at {lam!r} is not the identity", (lam,))
        if full_pull[(c.identity[c.dom[lam]], lam)] != AbHom.identity(value[lam]):
            raise NotFunctorial(f"identity pull at {lam!r} is not the identity", (lam,))
    for lam in c.morphisms:
        for alpha, beta in itertools.product(c.out_of(c.cod[lam]), c.into(c.dom[lam])):
            first = D.structure(alpha, beta, lam)
            mu = c.compose(alpha, lam, beta)
            for alpha2, beta2 in itertools.product(c.out_of(c.cod[mu]), c.into(c.dom[mu])):
                both = D.structure(c.compose(alpha2, alpha), c.compose(beta, beta2), lam)
                if D.structure(alpha2, beta2, mu).compose(first) != both:
                    raise NotFunctorial(
                        f"D(({alpha2!r}, {beta2!r}) o ({alpha!r}, {beta!r})) at {lam!r} "
                        f"is not the composite of the structure maps",
                        ((alpha, beta, lam), (alpha2, beta2, mu)),
                    )
    logging.debug(f"natural system {D} on {c} validated")
    return D


def pullback_system(F, D):
    """(F*D)_l = D_{F l}, structure maps through F^."""
    c = F.source
    value = {lam: D.value[F(lam)] for lam in c.morphisms}
    push = {
        (alpha, lam): D.push[(F(alpha), F(lam))]
        for lam in c.morphisms
        for alpha in c.out_of(c.cod[lam])
    }
    pull = {
        (beta, lam): D.pull[(F(beta), F(lam))]
        for lam in c.morphisms
        for beta in c.into(c.dom[lam])
    }
    return NaturalSystem(c, value, push, pull, f"F*{D}")


def constant_system(c, group):
    ident = AbHom.identity(group)
    return NaturalSystem(
        c,
        {lam: group for lam in c.morphisms},
        {(a, lam): ident for lam in c.morphisms for a in c.out_of(c.cod[lam])},
        {(b, lam): ident for lam in c.morphisms for b in c.into(c.dom[lam])},
        f"const {group}",
    )


def sign_twisted_system(c, group, push_signs=None, pull_signs=None, name=""):
    """
    Constant group with a_* = push_signs[a] and b^* = pull_signs[b] (default +1).
    Functorial exactly when both sign assignments are multiplicative.
    """
    push_signs = push_signs or {}
    pull_signs = pull_signs or {}
    value = {lam: group for lam in c.morphisms}
    push = {
        (a, lam): AbHom.scalar(group, push_signs.get(a, 1))
        for lam in c.morphisms
        for a in c.out_of(c.cod[lam])
    }
    pull = {
        (b, lam): AbHom.scalar(group, pull_signs.get(b, 1))
        for lam in c.morphisms
        for b in c.into(c.dom[lam])
    }
    return validate_natural_system(c, value, push, pull, name or f"twisted {group}")


@dataclass(frozen=True, eq=False)
class Pairing:
    """
    Bilinear maps D_l1 x D'_l2 -> D''_{l1 o l2} for every composable pair,
    stored as arrays T[k, i, j] = coordinate k of e_i . e_j.
    """

    left: NaturalSystem
    right: NaturalSystem
    out: NaturalSystem
    tables: Dict = field(repr=False)
    name: str = ""

    @property
    def is_endopairing(self):
        return self.left is self.right is self.out

    def apply(self, l1, l2, x, y):
        c = self.out.base
        target = self.out.value[c.compose(l1, l2)]
        T = self.tables[(l1, l2)]
        result = np.zeros(target.ngens, dtype=object)
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            for j, yj in enumerate(y):
                if yj == 0:
                    continue
                result = result + xi * yj * T[:, i, j]
        return target.normalize(result)


def _table(out_group, left_group, right_group, entry):
    T = np.zeros((out_group.ngens, left_group.ngens, right_group.ngens), dtype=object)
    for i in range(left_group.ngens):
        for j in range(right_group.ngens):
            T[:, i, j] = entry(i, j)
    return T


def zero_pairing(D):
    c = D.base
    tables = {
        (g, f): _table(D.value[c.compose(g, f)], D.value[g], D.value[f], lambda i, j: 0)
        for g, f in c.composable_pairs()
    }
    return Pairing(D, D, D, tables, "zero")


def multiplication_pairing(D):
    """Pointwise ring product; every value of D must be the same cyclic group."""
    groups = set(D.value.values())
    assert len(groups) == 1, "multiplication pairing needs a single coefficient group"
    (group,) = groups
    if group.is_trivial:
        # Z/1 is the zero ring
        return zero_pairing(D)
    assert group.ngens == 1, f"multiplication pairing needs a cyclic group, got {group}"
    c = D.base
    tables = {
        (g, f): _table(group, group, group, lambda i, j: 1) for g, f in c.composable_pairs()
    }
    return Pairing(D, D, D, tables, f"product in {group}")


def ring_pairing(c, modulus=0):
    """Ring multiplication on the constant system Z (modulus 0) or Z/m; the system is `.left`."""
    group = AbGroup.cyclic(modulus) if modulus else AbGroup((0,))
    return multiplication_pairing(constant_system(c, group))


def pullback_pairing(F, pairing, systems=None):
    """F*mu at (l1, l2) is mu at (F l1, F l2), over the pulled back systems."""
    if systems is None:
        left = pullback_system(F, pairing.left)
        right = left if pairing.right is pairing.left else pullback_system(F, pairing.right)
        if pairing.out is pairing.left:
            out = left
        elif pairing.out is pairing.right:
            out = right
        else:
            out = pullback_system(F, pairing.out)
    else:
        left, right, out = systems
    c = F.source
    tables = {(g, f): pairing.tables[(F(g), F(f))] for g, f in c.composable_pairs()}
    return Pairing(left, right, out, tables, f"F*{pairing.name}")
