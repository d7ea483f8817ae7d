"""
Cup products of cochains and cohomology classes, pairing validation and cup-length.

(f u g)(l1, ..., ln, l(n+1), ..., l(n+m)) = f(l1, ..., ln) . g(l(n+1), ..., l(n+m))
where the product is the pairing at (l1 o ... o ln, l(n+1) o ... o l(n+m)).
"""

import itertools
import logging
from dataclasses import dataclass

import numpy as np

from ..errors import DegreeOverflow, NotGeometricCover, PairingNotNatural
from .category import subcategory_generated_by
from .cochain import CochainComplex, chain_composite, relative_complex
from .cover import is_geometric_cover


def validate_pairing(p):
    """Check the three naturality identities of a pairing on generators."""
    c = p.out.base
    L, R, O = p.left, p.right, p.out
    for l1, l2 in c.composable_pairs():
        T = p.tables.get((l1, l2))
        assert T is not None, f"pairing has no table at ({l1!r}, {l2!r})"
        assert T.shape == (O[c.compose(l1, l2)].ngens, L[l1].ngens, R[l2].ngens), "pairing table shape"
    for l1, l2 in c.composable_pairs():
        for i, j in itertools.product(range(L[l1].ngens), range(R[l2].ngens)):
            x, y = L[l1].basis_vector(i), R[l2].basis_vector(j)
            xy = p.apply(l1, l2, x, y)
            lam = c.compose(l1, l2)
            for f in c.out_of(c.cod[l1]):
                # f_*(x.y) = (f_* x).y
                if not np.array_equal(O.push[(f, lam)](xy), p.apply(c.compose(f, l1), l2, L.push[(f, l1)](x), y)):
                    raise PairingNotNatural(2, (f, l1, l2, i, j))
            for h in c.into(c.dom[l2]):
                # h^*(x.y) = x.(h^* y)
                if not np.array_equal(O.pull[(h, lam)](xy), p.apply(l1, c.compose(l2, h), x, R.pull[(h, l2)](y))):
                    raise PairingNotNatural(3, (l1, l2, h, i, j))
    for l1 in c.morphisms:
        for g in c.into(c.dom[l1]):
            for l2 in c.into(c.dom[g]):
                for i, j in itertools.product(range(L[l1].ngens), range(R[l2].ngens)):
                    x, y = L[l1].basis_vector(i), R[l2].basis_vector(j)
                    # (g^* x).y = x.(g_* y)
                    left = p.apply(c.compose(l1, g), l2, L.pull[(g, l1)](x), y)
                    right = p.apply(l1, c.compose(g, l2), x, R.push[(g, l2)](y))
                    if not np.array_equal(left, right):
                        raise PairingNotNatural(1, (l1, g, l2, i, j))
    logging.debug(f"pairing {p.name} on {c} is natural")
    return p


def _split(c, chain, n):
    """Front n-chain and back chain of `chain`, each as (key, composite)."""
    entries = chain.entries
    if not entries:
        key = chain.obj
        return (key, c.identity[key]), (key, c.identity[key])
    front, back = entries[:n], entries[n:]
    front_end, back_end = c.cod[entries[0]], c.dom[entries[-1]]
    front_key = front if front else front_end
    back_key = back if back else back_end
    return (
        (front_key, chain_composite(c, front, front_end)),
        (back_key, chain_composite(c, back, back_end)),
    )


def cup_cochain(cx, f, n, g, m, pairing, right=None, out=None):
    """
    Product of an n-cochain of `cx` and an m-cochain of `right` (default cx),
    as an (n + m)-cochain of `out` (default cx).
    """
    right = right or cx
    out = out or cx
    if not out.bounded and n + m > out.max_degree:
        raise DegreeOverflow(f"cup product of degree {n + m} exceeds the cap {out.max_degree}")
    c = out.category
    dst = out.group(n + m)
    result = np.zeros(dst.group.ngens, dtype=object)
    left_group, right_group = cx.group(n), right.group(m)
    for k, chain in enumerate(dst.basis):
        (front_key, front_comp), (back_key, back_comp) = _split(c, chain, n)
        x = left_group.value_at(f, front_key)
        y = right_group.value_at(g, back_key)
        if x is None or y is None:
            continue
        result[dst.block(k)] = pairing.apply(front_comp, back_comp, x, y)
    return result


def iterated_cup(cx, cochains, pairing):
    """Left-nested product of [(cochain, degree), ...] for an endopairing."""
    (vec, degree), rest = cochains[0], cochains[1:]
    for g, m in rest:
        vec = cup_cochain(cx, vec, degree, g, m, pairing)
        degree += m
    return vec, degree


def cup_classes(classes, pairing):
    """{f1} u ... u {fn} = {f1 u ... u fn}, in the complex of the first class."""
    cx = classes[0].cohomology.complex
    vec, degree = iterated_cup(cx, [(x.representative, x.degree) for x in classes], pairing)
    return cx.cohomology(degree).class_of(vec)


def relative_cup(classes, pieces, pairing, absolute=None, max_degree=None):
    """
    Product of classes in H^(p_i)(C, U_i; D) landing in H^p(C, U_0 u ... u U_n; D);
    the pieces must form a geometric cover of their union.
    """
    rel = [x.cohomology.complex for x in classes]
    c, D = rel[0].category, rel[0].system
    union = subcategory_generated_by(
        c,
        frozenset().union(*(u.morphisms for u in pieces)),
        frozenset().union(*(u.objects for u in pieces)),
    )
    check = is_geometric_cover(pieces, union)
    if not check:
        raise NotGeometricCover(f"chain {check.witness} of the union lies in no piece")
    absolute = absolute or CochainComplex(c, D, max_degree=max_degree)
    embedded = [(r.embed(absolute, x.representative, x.degree), x.degree) for r, x in zip(rel, classes)]
    vec, degree = iterated_cup(absolute, embedded, pairing)
    target = relative_complex(c, union, D, max_degree=max_degree)
    restricted = target.restrict(absolute, vec, degree)
    assert np.array_equal(target.embed(absolute, restricted, degree), absolute.group(degree).group.normalize(vec)), (
        "relative cup product does not vanish on the union"
    )
    return target.cohomology(degree).class_of(restricted)


@dataclass(frozen=True)
class CupLength:
    value: int
    capped: bool = False

    def __str__(self):
        return f">= {self.value}" if self.capped else str(self.value)


def cup_length(cx, pairing, restrict_to=None, degree_cap=None):
    """
    Largest n with a nonzero product of n classes of degree >= 1 taken from
    `restrict_to` (degree -> generating classes; default all of H^k).
    Multilinearity lets the search run over generator tuples only.
    """
    cap = cx.max_degree if degree_cap is None else degree_cap
    if restrict_to is None:
        restrict_to = {k: cx.cohomology(k).generators for k in range(1, cap + 1)}
    gens = [
        x
        for k in sorted(restrict_to)
        if 1 <= k <= cap
        for x in restrict_to[k]
        if not x.is_zero()
    ]
    if not gens:
        return CupLength(0)

    def key(x):
        return (x.degree, tuple(x.coords))

    level = {}
    for x in gens:
        level.setdefault(key(x), x)
    length, capped = 1, False
    while True:
        following = {}
        for p in level.values():
            for g in gens:
                degree = p.degree + g.degree
                if degree > cap:
                    # a finite nerve has nothing above its dimension
                    if not (cx.bounded and degree > cx.max_degree):
                        capped = True
                    continue
                q = cup_classes([p, g], pairing)
                if not q.is_zero():
                    following.setdefault(key(q), q)
        if not following:
            break
        level = following
        length += 1
    logging.info(f"cup-length {length}{' (cap reached)' if capped else ''} over {len(gens)} generators")
    return CupLength(length, capped)
