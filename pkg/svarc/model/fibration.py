"""
Cartesian and op-Cartesian arrows, (op-)fibrations, coverings, fibers and pullbacks.
Every quantifier is decided by exhaustive enumeration over the finite categories.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List

from .category import FinCat, FunctorMap, Subcategory


@dataclass(frozen=True)
class LiftCheck:
    holds: bool
    witness: tuple = None

    def __bool__(self):
        return self.holds


def is_cartesian(P, phi):
    """
    phi: e1 -> e2 is Cartesian when every beta: e -> e2 and abar: Pe -> Pe1 with
    P(phi) o abar = P(beta) factor as beta = phi o alpha for a unique alpha over abar.
    """
    E, B = P.source, P.target
    e1, e2 = E.dom[phi], E.cod[phi]
    p_phi = P(phi)
    for beta in E.into(e2):
        e = E.dom[beta]
        for abar in B.hom(P.obj(e), P.obj(e1)):
            if B.table[(p_phi, abar)] != P(beta):
                continue
            alphas = [a for a in E.hom(e, e1) if P(a) == abar and E.table[(phi, a)] == beta]
            if len(alphas) != 1:
                return LiftCheck(False, (beta, abar, len(alphas)))
    return LiftCheck(True)


def is_opcartesian(P, phi):
    """Dual of is_cartesian: unique alpha: e2 -> e over abar with alpha o phi = beta."""
    E, B = P.source, P.target
    e1, e2 = E.dom[phi], E.cod[phi]
    p_phi = P(phi)
    for beta in E.out_of(e1):
        e = E.cod[beta]
        for abar in B.hom(P.obj(e2), P.obj(e)):
            if B.table[(abar, p_phi)] != P(beta):
                continue
            alphas = [a for a in E.hom(e2, e) if P(a) == abar and E.table[(a, phi)] == beta]
            if len(alphas) != 1:
                return LiftCheck(False, (beta, abar, len(alphas)))
    return LiftCheck(True)


def cartesian_lifts(P, phibar, e2):
    """Cartesian arrows over phibar with codomain e2, in declaration order."""
    return [phi for phi in P.source.into(e2) if P(phi) == phibar and is_cartesian(P, phi)]


def opcartesian_lifts(P, phibar, e1):
    return [phi for phi in P.source.out_of(e1) if P(phi) == phibar and is_opcartesian(P, phi)]


@dataclass
class FibrationReport:
    functor: FunctorMap = field(repr=False)
    is_fibration: bool
    is_opfibration: bool
    is_covering: bool
    witnesses: Dict[str, List] = field(default_factory=dict)
    chosen_lifts: Dict = field(default_factory=dict, repr=False)
    chosen_oplifts: Dict = field(default_factory=dict, repr=False)

    @property
    def is_bifibration(self):
        return self.is_fibration and self.is_opfibration


def _is_covering(P, witnesses):
    E, B = P.source, P.target
    images = {P.obj(e) for e in E.objects}
    missing = [b for b in B.objects if b not in images]
    if missing:
        witnesses["covering"] = [("not surjective on objects", missing[0])]
        return False
    for e in E.objects:
        for arrows, base_arrows, side in (
            (E.into(e), B.into(P.obj(e)), "incoming"),
            (E.out_of(e), B.out_of(P.obj(e)), "outgoing"),
        ):
            mapped = [P(m) for m in arrows]
            if len(set(mapped)) != len(mapped) or set(mapped) != set(base_arrows):
                witnesses["covering"] = [(f"{side} arrows not bijective", e)]
                return False
    return True


def classify(P):
    E, B = P.source, P.target
    witnesses = {}
    chosen, chosen_op = {}, {}
    fib = opfib = True
    for phibar in B.morphisms:
        for e2 in E.objects:
            if P.obj(e2) != B.cod[phibar]:
                continue
            lifts = cartesian_lifts(P, phibar, e2)
            if lifts:
                chosen[(phibar, e2)] = lifts[0]
            else:
                fib = False
                witnesses.setdefault("fibration", []).append((phibar, e2))
        for e1 in E.objects:
            if P.obj(e1) != B.dom[phibar]:
                continue
            lifts = opcartesian_lifts(P, phibar, e1)
            if lifts:
                chosen_op[(phibar, e1)] = lifts[0]
            else:
                opfib = False
                witnesses.setdefault("opfibration", []).append((phibar, e1))
    covering = _is_covering(P, witnesses)
    assert not covering or (fib and opfib), "a covering failed to be a bifibration"
    logging.info(
        f"{E} -> {B}: fibration={fib}, opfibration={opfib}, covering={covering}"
    )
    return FibrationReport(P, fib, opfib, covering, witnesses, chosen, chosen_op)


def fiber(P, b):
    E = P.source
    objects = [e for e in E.objects if P.obj(e) == b]
    identity = P.target.identity[b]
    morphisms = [m for m in E.morphisms if P(m) == identity]
    return Subcategory(E, objects, morphisms)


def pullback(P, F):
    """
    Pullback of P: E -> B along F: B' -> B. Returns (E', P', F') with
    P o F' = F o P'.
    """
    E, B2 = P.source, F.source
    assert P.target is F.target, "pullback of functors with different targets"
    objects = tuple((x, e) for x in B2.objects for e in E.objects if F.obj(x) == P.obj(e))
    morphisms = tuple(
        (u, phi)
        for u in B2.morphisms
        for phi in E.morphisms
        if F(u) == P(phi)
    )
    dom = {(u, phi): (B2.dom[u], E.dom[phi]) for u, phi in morphisms}
    cod = {(u, phi): (B2.cod[u], E.cod[phi]) for u, phi in morphisms}
    identity = {(x, e): (B2.identity[x], E.identity[e]) for x, e in objects}
    table = {}
    for u2, phi2 in morphisms:
        for u1, phi1 in morphisms:
            if dom[(u2, phi2)] == cod[(u1, phi1)]:
                table[((u2, phi2), (u1, phi1))] = (B2.table[(u2, u1)], E.table[(phi2, phi1)])
    E2 = FinCat(objects, morphisms, dom, cod, identity, table, f"{B2} x_{P.target} {E}")
    P2 = FunctorMap(E2, B2, {o: o[0] for o in objects}, {m: m[0] for m in morphisms})
    F2 = FunctorMap(E2, E, {o: o[1] for o in objects}, {m: m[1] for m in morphisms})
    return E2, P2, F2


def _vertical_factor(P, through, target, base_identity):
    """The unique arrow a over base_identity with through o a = target."""
    E = P.source
    found = [
        a for a in E.hom(E.dom[target], E.dom[through])
        if P(a) == base_identity and E.table[(through, a)] == target
    ]
    assert len(found) == 1, "Cartesian factorization is not unique"
    return found[0]


def pullback_functor(P, phibar, report=None):
    """phibar^*: fiber over cod phibar -> fiber over dom phibar, from the chosen Cartesian lifts."""
    report = report or classify(P)
    assert report.is_fibration, "pullback functors need a fibration"
    E, B = P.source, P.target
    b1, b2 = B.dom[phibar], B.cod[phibar]
    src, dst = fiber(P, b2), fiber(P, b1)
    lift = {e2: report.chosen_lifts[(phibar, e2)] for e2 in src.objects}
    obj_map = {e2: E.dom[lift[e2]] for e2 in src.objects}
    mor_map = {}
    for nu in src.morphisms:
        a, b = E.dom[nu], E.cod[nu]
        mor_map[nu] = _vertical_factor(P, lift[b], E.table[(nu, lift[a])], B.identity[b1])
    return FunctorMap(src.category, dst.category, obj_map, mor_map)


def pushforward_functor(P, phibar, report=None):
    """phibar_*: fiber over dom phibar -> fiber over cod phibar, from the chosen op-Cartesian lifts."""
    report = report or classify(P)
    assert report.is_opfibration, "pushforward functors need an op-fibration"
    E, B = P.source, P.target
    b1, b2 = B.dom[phibar], B.cod[phibar]
    src, dst = fiber(P, b1), fiber(P, b2)
    lift = {e1: report.chosen_oplifts[(phibar, e1)] for e1 in src.objects}
    obj_map = {e1: E.cod[lift[e1]] for e1 in src.objects}
    mor_map = {}
    for nu in src.morphisms:
        a, b = E.dom[nu], E.cod[nu]
        target = E.table[(lift[b], nu)]
        found = [
            m for m in E.hom(obj_map[a], obj_map[b])
            if P(m) == B.identity[b2] and E.table[(m, lift[a])] == target
        ]
        assert len(found) == 1, "op-Cartesian factorization is not unique"
        mor_map[nu] = found[0]
    return FunctorMap(src.category, dst.category, obj_map, mor_map)


def vertical_isomorphisms(P, phi1, phi2):
    """Vertical isomorphisms nu with phi2 o nu = phi1, for arrows sharing a codomain."""
    E = P.source
    assert E.cod[phi1] == E.cod[phi2], "lifts must share their codomain"
    base_identity = P.target.identity[P.obj(E.dom[phi1])]
    result = []
    for nu in E.hom(E.dom[phi1], E.dom[phi2]):
        if P(nu) != base_identity or E.table[(phi2, nu)] != phi1:
            continue
        inverse = any(
            E.table[(mu, nu)] == E.identity[E.dom[phi1]] and E.table[(nu, mu)] == E.identity[E.dom[phi2]]
            for mu in E.hom(E.dom[phi2], E.dom[phi1])
        )
        if inverse:
            result.append(nu)
    return result
