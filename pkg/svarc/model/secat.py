"""
Sectional category and Svarc genus of a functor P: E -> B by exhaustive search.

sc(P) is the least n such that B has a geometric cover by n + 1 subcategories,
each with a strict section of P (P o s = inclusion); Sg(P) asks for homotopic
sections (P o s ~ inclusion) instead. Pieces are taken among the maximal
sectioned subcategories and the cover is found by an exact set-cover search
over the maximal realizable sets of B.
"""

import functools
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

from tqdm.auto import tqdm

from ..errors import NotABifibration
from .category import (
    Subcategory,
    close_morphisms,
    enumerate_functors,
    homotopic,
    homotopy_classes,
)
from .cochain import CochainComplex, ker_generators
from .cover import is_geometric_cover, realizable_sets
from .cup import cup_length
from .factorization import pullback_system
from .fibration import classify

STRICT = "strict"
HOMOTOPIC = "homotopic"


@functools.total_ordering
class Infinite:
    """The value of sc and Sg when no cover by sectioned pieces exists."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __hash__(self):
        return hash("infinite")

    def __str__(self):
        return "infinite"

    __repr__ = __str__


INFINITE = Infinite()


@dataclass(frozen=True, eq=False)
class SectionWitness:
    section: object
    zigzag: Optional[list] = None


def _inclusion_class(P, u, cache):
    """Keys of the functors u -> B homotopic to the inclusion of u."""
    key = (u.objects, u.morphisms)
    if key not in cache:
        inclusion = u.inclusion()
        for component in homotopy_classes(u.category, P.target):
            if inclusion in component:
                cache[key] = {F.key for F in component}
                break
    return cache[key]


def sections(P, u, kind=STRICT, _cache=None):
    """Stream of sections of P over the subcategory u of its target."""
    E = P.source
    sub = u.category
    if kind == STRICT:
        obj_choices = {x: [e for e in E.objects if P.obj(e) == x] for x in sub.objects}
        mor_choices = {m: [phi for phi in E.morphisms if P(phi) == m] for m in sub.morphisms}
        for s in enumerate_functors(sub, E, obj_choices, mor_choices):
            yield SectionWitness(s)
        return
    assert kind == HOMOTOPIC, f"unknown section kind {kind!r}"
    allowed = _inclusion_class(P, u, {} if _cache is None else _cache)
    inclusion = u.inclusion()
    for s in enumerate_functors(sub, E):
        composite = P.compose(s)
        if composite.key in allowed:
            _, zigzag = homotopic(composite, inclusion)
            yield SectionWitness(s, zigzag)


def has_section(P, u, kind=STRICT, _cache=None):
    return next(sections(P, u, kind, _cache), None) is not None


def maximal_sectioned_subcategories(P, kind=STRICT, show_pbar=False):
    """
    Maximal subcategories of the base admitting a section. Sectionability passes
    to subcategories, so the search only grows sectioned subcategories one
    arrow or object at a time.
    """
    B = P.target
    cache = {}

    def closed(objects, morphisms):
        return close_morphisms(B, objects, morphisms)

    def sectioned(state):
        return has_section(P, Subcategory(B, *state), kind, cache)

    starts = [x for x in B.objects if sectioned(closed({x}, ()))]
    frontier = [closed({x}, ()) for x in starts]
    seen = set(frontier)
    sectioned_states = set(frontier)
    maximal = []
    level = 0
    while frontier:
        level += 1
        if show_pbar:
            iterable = tqdm(frontier, leave=False, desc=f"sectioned pieces, level {level}")
        else:
            iterable = frontier
        following = []
        for objects, morphisms in iterable:
            extended = False
            steps = [((), (m,)) for m in B.non_identity if m not in morphisms]
            steps += [((x,), ()) for x in starts if x not in objects]
            for extra_objects, extra_morphisms in steps:
                state = closed(objects | set(extra_objects), morphisms | set(extra_morphisms))
                if state in seen:
                    extended = extended or state in sectioned_states
                    continue
                seen.add(state)
                if sectioned(state):
                    sectioned_states.add(state)
                    following.append(state)
                    extended = True
            if not extended:
                maximal.append(Subcategory(B, objects, morphisms))
        frontier = following
    logging.debug(f"{len(maximal)} maximal {kind} sectioned subcategories of {B}")
    return _antichain(maximal)


def _antichain(pieces):
    result = []
    for u in sorted(pieces, key=lambda v: -len(v.morphisms)):
        if not any(u.issubset(v) for v in result):
            result.append(u)
    return result


def minimum_cover(universe, masks):
    """
    Exact minimum set cover over bitmasks by branch and bound; returns the chosen
    mask indices or None when the masks cannot cover the universe.
    """
    if universe == 0:
        return []
    if functools.reduce(lambda a, b: a | b, masks, 0) & universe != universe:
        return None

    def greedy():
        chosen, covered = [], 0
        while covered != universe:
            i = max(range(len(masks)), key=lambda k: ((masks[k] & ~covered).bit_count(), -k))
            chosen.append(i)
            covered |= masks[i]
        return chosen

    best = greedy()

    def search(covered, chosen):
        nonlocal best
        if covered == universe:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        remaining = universe & ~covered
        widest = max((m & remaining).bit_count() for m in masks)
        if len(chosen) + math.ceil(remaining.bit_count() / widest) >= len(best):
            return
        # branch on the uncovered element with the fewest covering masks
        element = min(
            (e for e in range(universe.bit_length()) if remaining >> e & 1),
            key=lambda e: (sum(1 for m in masks if m >> e & 1), e),
        )
        for i, m in enumerate(masks):
            if m >> element & 1:
                chosen.append(i)
                search(covered | m, chosen)
                chosen.pop()

    search(0, [])
    return sorted(best)


@dataclass
class CoverCertificate:
    pieces: List[Subcategory]
    sections: List[SectionWitness] = field(repr=False)
    kind: str = STRICT


@dataclass
class SecatResult:
    value: object
    certificate: Optional[CoverCertificate] = None
    candidates: List[Subcategory] = field(default_factory=list, repr=False)

    def __str__(self):
        return str(self.value)


def secat(P, kind=STRICT, show_pbar=False, family=None):
    """sc(P) for kind 'strict', Sg(P) for kind 'homotopic'."""
    B = P.target
    if family is None:
        family = realizable_sets(B)
    candidates = maximal_sectioned_subcategories(P, kind, show_pbar)
    sets = list(family.maximal_sets)
    universe = (1 << len(sets)) - 1
    masks = [sum(1 << k for k, s in enumerate(sets) if s <= u.morphisms) for u in candidates]
    chosen = minimum_cover(universe, masks)
    if chosen is None:
        logging.info(f"no cover of {B} by {kind} sectioned pieces: value infinite")
        return SecatResult(INFINITE, None, candidates)
    pieces = [candidates[i] for i in chosen]
    assert is_geometric_cover(pieces, B, family), "set cover produced a non-cover"
    witnesses = [next(sections(P, u, kind)) for u in pieces]
    value = max(len(pieces) - 1, 0)
    logging.info(f"{kind} sectional category of {P.source} -> {B}: {value} ({len(candidates)} candidates)")
    return SecatResult(value, CoverCertificate(pieces, witnesses, kind), candidates)


@dataclass
class BoundReport:
    cpl: object
    sg: object
    holds: bool
    sg_homotopic: object = None
    kernel: dict = field(default_factory=dict, repr=False)
    certificate: Optional[CoverCertificate] = field(default=None, repr=False)


def svarc_bound(P, D, pairing, degree_cap=None, check_homotopic=False, show_pbar=False):
    """
    Cup-length of ker(P^*) against Sg(P) for a bifibration P, where Sg(P) = sc(P)
    is computed with strict sections.
    """
    report = classify(P)
    if not report.is_bifibration:
        raise NotABifibration(f"{P.source} -> {P.target} is not a bifibration: {report.witnesses}")
    target = CochainComplex(P.target, D, max_degree=degree_cap)
    cap = target.max_degree if degree_cap is None else degree_cap
    # ker P^* only needs the total category up to degree cap
    pulled = pullback_system(P, D)
    source = CochainComplex(P.source, pulled, max_degree=cap)
    kernel = {
        k: ker_generators(P, D, k, cap, target=target, source=source, pulled=pulled)
        for k in range(1, cap + 1)
    }
    cpl = cup_length(target, pairing, restrict_to=kernel, degree_cap=cap)
    strict = secat(P, STRICT, show_pbar)
    sg_homotopic = None
    if check_homotopic:
        sg_homotopic = secat(P, HOMOTOPIC, show_pbar).value
        assert sg_homotopic == strict.value, "homotopic and strict sectional categories differ on a bifibration"
    holds = strict.value is INFINITE or cpl.value <= strict.value
    logging.info(f"cpl(ker P*) = {cpl}, Sg = {strict.value}: {'holds' if holds else 'FAILS'}")
    return BoundReport(cpl, strict.value, holds, sg_homotopic, kernel, strict.certificate)
