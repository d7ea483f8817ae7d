"""
Geometric covers.

A chain lies in a subcategory exactly when the subcategory generated by its
arrows does, so covering every chain (there may be infinitely many when arrows
form loops) reduces to covering the finitely many maximal realizable sets:
closures of the arrow sets of chains that are maximal under inclusion.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Tuple

from ..errors import SetExplosion
from .category import Subcategory, close_morphisms

# reachable (object, arrow set) states explored before giving up
MAX_REALIZABLE_STATES = 200000


@dataclass(frozen=True, eq=False)
class RealizableSetFamily:
    base: object
    maximal_sets: Tuple
    witnesses: Dict

    def __len__(self):
        return len(self.maximal_sets)

    def __iter__(self):
        return iter(self.maximal_sets)


def realizable_sets(c, max_states=None):
    """Maximal realizable morphism sets of c, each with a witnessing chain."""
    max_states = max_states or MAX_REALIZABLE_STATES
    seen = {}
    stack = []
    for x in c.objects:
        state = (x, frozenset())
        seen[state] = ()
        stack.append(state)
    # a state is (domain of the last arrow, arrows used); chains grow to the right
    while stack:
        x, used = stack.pop()
        chain = seen[(x, used)]
        for m in c.into(x):
            if c.is_identity(m):
                continue
            state = (c.dom[m], used | {m})
            if state not in seen:
                seen[state] = chain + (m,)
                stack.append(state)
                if len(seen) > max_states:
                    raise SetExplosion(f"more than {max_states} realizable states in {c}")

    closures = {}
    for (x, used), chain in seen.items():
        _, morphisms = close_morphisms(c, {x}, used)
        closures.setdefault(morphisms, chain if chain else (c.identity[x],))
    ordered = sorted(closures, key=lambda s: (-len(s), sorted(c.morphism_index[m] for m in s)))
    maximal = []
    for s in ordered:
        if not any(s <= t for t in maximal):
            maximal.append(s)
    maximal.sort(key=lambda s: sorted(c.morphism_index[m] for m in s))
    logging.debug(f"{c}: {len(seen)} chain states, {len(maximal)} maximal realizable sets")
    return RealizableSetFamily(c, tuple(maximal), {s: closures[s] for s in maximal})


@dataclass(frozen=True)
class CoverCheck:
    covered: bool
    witness: Tuple = None

    def __bool__(self):
        return self.covered


def is_geometric_cover(pieces, scope, family=None):
    """
    True when every chain of `scope` (a Subcategory or a whole FinCat) lies in
    some piece; otherwise the witness is an uncovered chain.
    """
    if isinstance(scope, Subcategory):
        scope_cat = scope.category
    else:
        scope_cat = scope
    if family is None:
        family = realizable_sets(scope_cat)
    for s in family.maximal_sets:
        if not any(s <= piece.morphisms for piece in pieces):
            return CoverCheck(False, family.witnesses[s])
    return CoverCheck(True)
