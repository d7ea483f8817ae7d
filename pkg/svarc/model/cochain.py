"""
Nerve chains, cochain complexes with coefficients in a natural system and their
cohomology.

An n-chain (l1, ..., ln) has dom li = cod l(i+1); its composite is l1 o ... o ln.
A cochain assigns to each chain an element of D at the composite. The reduced
complex only has coordinates on non-degenerate chains (no identity entries) and
is the production path; the full complex is kept for cross-checking.
Relative complexes drop every chain lying entirely in a subcategory.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np

from ..errors import ComplexBroken, DegreeOverflow, NotInNumerator, UnboundedNerve
from ..util.smith import hstack, int_vector, zeros
from .abelian import (
    AbGroup,
    AbHom,
    element_is_zero,
    hom_kernel,
    induced_subquotient_map,
    kernel_of_subquotient_map,
    subquotient,
)
from .factorization import pullback_system


@dataclass(frozen=True)
class ChainIndex:
    entries: Tuple
    composite: object
    obj: object = None  # the object of a 0-chain
    degenerate: bool = False

    @property
    def degree(self):
        return len(self.entries)

    @property
    def key(self):
        return self.obj if not self.entries else self.entries

    def __str__(self):
        if not self.entries:
            return f"({self.obj})"
        return "(" + ", ".join(str(e) for e in self.entries) + ")"


def _sort_key(c, chain):
    return (c.morphism_index[chain.composite],) + tuple(c.morphism_index[e] for e in chain.entries)


def enumerate_chains(c, n, reduced=True):
    """n-chains ordered by composite, then by entries (declaration order)."""
    assert n >= 0, "chain degree must be nonnegative"
    if n == 0:
        return [ChainIndex((), c.identity[x], x) for x in c.objects]
    candidates = c.non_identity if reduced else c.morphisms
    allowed = set(candidates)
    partial = [((m,), m) for m in candidates]
    for _ in range(n - 1):
        partial = [
            (entries + (m,), c.table[(comp, m)])
            for entries, comp in partial
            for m in c.into(c.dom[entries[-1]])
            if m in allowed
        ]
    chains = [
        ChainIndex(entries, comp, None, any(c.is_identity(e) for e in entries))
        for entries, comp in partial
    ]
    chains.sort(key=lambda ch: _sort_key(c, ch))
    return chains


def chain_composite(c, entries, endpoint):
    """Composite of a possibly empty chain; `endpoint` is its object when empty."""
    if not entries:
        return c.identity[endpoint]
    return c.compose(*entries)


@dataclass(frozen=True, eq=False)
class CochainGroup:
    degree: int
    basis: Tuple
    group: AbGroup
    offsets: Tuple
    index: dict

    def block(self, k):
        return slice(self.offsets[k], self.offsets[k + 1])

    def value_at(self, vec, key):
        """Coordinates of a cochain on the chain `key`, or None if it has no coordinate."""
        k = self.index.get(key)
        if k is None:
            return None
        return vec[self.block(k)]


class CochainComplex:
    """
    Cochain complex of `category` with coefficients in `system`. Groups and
    coboundaries are assembled lazily per degree and cached.
    """

    def __init__(self, category, system, reduced=True, exclude=None, max_degree=None, name=""):
        self.category = category
        self.system = system
        self.reduced = reduced
        self.exclude = exclude
        self.name = name or str(category)
        dim = category.nerve_dimension
        if max_degree is None:
            if dim is None:
                raise UnboundedNerve(
                    f"{category} has a cycle of non-identity arrows; a maximal degree is required"
                )
            max_degree = dim
        self.max_degree = max_degree
        # reduced complexes of a finite nerve vanish above its dimension
        self.bounded = reduced and dim is not None
        self._groups = {}
        self._coboundaries = {}
        self._cohomology = {}

    def _check_degree(self, n):
        if n < 0:
            raise DegreeOverflow(f"negative degree {n}")
        if not self.bounded and n > self.max_degree + 1:
            raise DegreeOverflow(f"degree {n} exceeds the cap {self.max_degree} of {self.name}")

    def chains(self, n):
        self._check_degree(n)
        chains = enumerate_chains(self.category, n, self.reduced)
        if self.exclude is not None:
            if n == 0:
                chains = [ch for ch in chains if ch.obj not in self.exclude.objects]
            else:
                chains = [ch for ch in chains if not self.exclude.contains_chain(ch.entries)]
        return chains

    def group(self, n):
        if n not in self._groups:
            basis = tuple(self.chains(n))
            groups = [self.system.value[ch.composite] for ch in basis]
            offsets = [0]
            for g in groups:
                offsets.append(offsets[-1] + g.ngens)
            index = {ch.key: k for k, ch in enumerate(basis)}
            self._groups[n] = CochainGroup(n, basis, AbGroup.direct_sum(groups), tuple(offsets), index)
            logging.debug(f"{self.name}: degree {n} has {len(basis)} chains, group {self._groups[n].group}")
        return self._groups[n]

    def coboundary(self, n):
        if n not in self._coboundaries:
            self._coboundaries[n] = self._assemble_coboundary(n)
        return self._coboundaries[n]

    def _assemble_coboundary(self, n):
        c, D = self.category, self.system
        src, dst = self.group(n), self.group(n + 1)
        m = zeros(dst.group.ngens, src.group.ngens)

        def add(row_block, key, hom, sign):
            k = src.index.get(key)
            if k is None:
                return
            m[row_block, src.block(k)] += sign * hom.matrix

        for t, chain in enumerate(dst.basis):
            rows = dst.block(t)
            lam = chain.entries
            last = n + 1
            # leading face: l1_* f(l2, ..., l_{n+1})
            tail = lam[1:]
            tail_key = tail if tail else c.dom[lam[0]]
            add(rows, tail_key, D.push[(lam[0], chain_composite(c, tail, c.dom[lam[0]]))], 1)
            # inner faces
            for i in range(1, last):
                merged = lam[: i - 1] + (c.table[(lam[i - 1], lam[i])],) + lam[i + 1:]
                add(rows, merged, AbHom.identity(D.value[chain.composite]), (-1) ** i)
            # trailing face: l_{n+1}^* f(l1, ..., ln)
            head = lam[:-1]
            head_key = head if head else c.cod[lam[0]]
            add(rows, head_key, D.pull[(lam[-1], chain_composite(c, head, c.cod[lam[0]]))], (-1) ** last)
        return AbHom(src.group, dst.group, m)

    def check_square_zero(self, n):
        if n == 0:
            return
        composite = self.coboundary(n).compose(self.coboundary(n - 1))
        if not composite.is_zero():
            raise ComplexBroken(f"d{n} o d{n - 1} != 0 on {self.name}")

    def cohomology(self, n):
        if n not in self._cohomology:
            self._cohomology[n] = self._compute_cohomology(n)
        return self._cohomology[n]

    def _compute_cohomology(self, n):
        if not self.bounded and n > self.max_degree:
            raise DegreeOverflow(f"H^{n} is beyond the cap {self.max_degree} of {self.name}")
        self.check_square_zero(n)
        ambient = self.group(n).group
        cocycles = hom_kernel(self.coboundary(n))
        if n == 0:
            boundaries = zeros(ambient.ngens, 0)
        else:
            d = self.coboundary(n - 1)
            boundaries = hstack([d.matrix], ambient.ngens)
        group = CohomologyGroup(n, self, subquotient(ambient, cocycles, boundaries))
        logging.debug(f"H^{n}({self.name}) = {group.group}")
        return group

    def embed(self, other, vec, n):
        """Coordinates on the chains of `other` (a complex with more chains), zero elsewhere."""
        src, dst = self.group(n), other.group(n)
        out = np.zeros(dst.group.ngens, dtype=object)
        for k, chain in enumerate(src.basis):
            out[dst.block(dst.index[chain.key])] = vec[src.block(k)]
        return out

    def restrict(self, other, vec, n):
        """Coordinates of a cochain of `other` on the chains of this complex."""
        src, dst = other.group(n), self.group(n)
        out = np.zeros(dst.group.ngens, dtype=object)
        for k, chain in enumerate(dst.basis):
            out[dst.block(k)] = vec[src.block(src.index[chain.key])]
        return out

    def inclusion_map(self, other, n):
        """Chain-level inclusion of this (relative) complex into `other`."""
        src, dst = self.group(n), other.group(n)
        m = zeros(dst.group.ngens, src.group.ngens)
        for k, chain in enumerate(src.basis):
            rows, cols = dst.block(dst.index[chain.key]), src.block(k)
            for i in range(cols.stop - cols.start):
                m[rows.start + i, cols.start + i] = 1
        return AbHom(src.group, dst.group, m)


@dataclass(frozen=True, eq=False)
class CohomologyGroup:
    degree: int
    complex: CochainComplex
    sq: object

    @property
    def group(self):
        return self.sq.normal_form

    @cached_property
    def generators(self):
        return [CohomologyClass(self, g) for g in self.sq.generators()]

    def class_of(self, cocycle):
        cocycle = int_vector(cocycle)
        if not self.sq.contains(cocycle):
            raise NotInNumerator(f"{list(cocycle)} is not a cocycle in degree {self.degree}")
        return CohomologyClass(self, cocycle)

    def from_coords(self, coords):
        return CohomologyClass(self, self.sq.lift(coords))

    def zero(self):
        return CohomologyClass(self, self.complex.group(self.degree).group.zero())

    def __str__(self):
        return str(self.group)


@dataclass(frozen=True, eq=False)
class CohomologyClass:
    cohomology: CohomologyGroup
    representative: np.ndarray

    @property
    def degree(self):
        return self.cohomology.degree

    @cached_property
    def coords(self):
        return self.cohomology.sq.reduce(self.representative)

    def is_zero(self):
        return element_is_zero(self.cohomology.sq, self.representative)

    def __add__(self, other):
        assert other.cohomology is self.cohomology, "adding classes of different groups"
        return CohomologyClass(self.cohomology, self.representative + other.representative)

    def __neg__(self):
        return CohomologyClass(self.cohomology, -self.representative)

    def __rmul__(self, k):
        return CohomologyClass(self.cohomology, int(k) * self.representative)

    def __eq__(self, other):
        if not isinstance(other, CohomologyClass):
            return NotImplemented
        return other.cohomology is self.cohomology and (self + -other).is_zero()

    __hash__ = None

    def __repr__(self):
        return f"[{', '.join(str(v) for v in self.representative)}]"


def coboundary(cx, n):
    return cx.coboundary(n)


def cohomology(c, D, n, max_degree=None):
    return CochainComplex(c, D, max_degree=max_degree).cohomology(n)


def full_complex_cohomology(c, D, n, max_degree=None):
    return CochainComplex(c, D, reduced=False, max_degree=max_degree).cohomology(n)


def relative_complex(c, u, D, max_degree=None):
    return CochainComplex(c, D, exclude=u, max_degree=max_degree, name=f"({c}, {u.label()})")


def relative_cohomology(c, u, D, n, max_degree=None):
    return relative_complex(c, u, D, max_degree).cohomology(n)


def gamma_map(c, u, D, n, max_degree=None, relative=None, absolute=None):
    """H^n(C, U; D) -> H^n(C; D) induced by the inclusion of relative cochains."""
    relative = relative or relative_complex(c, u, D, max_degree)
    absolute = absolute or CochainComplex(c, D, max_degree=max_degree)
    H_rel, H_abs = relative.cohomology(n), absolute.cohomology(n)
    return induced_subquotient_map(relative.inclusion_map(absolute, n), H_rel.sq, H_abs.sq)


def induced_cochain_map(F, source, target, n):
    """
    F^*: cochains of `target` (over F.target, system D) -> cochains of `source`
    (over F.source, system F^*D); (F^*f)(l1, ..., ln) = f(F l1, ..., F ln).
    """
    src, dst = target.group(n), source.group(n)
    m = zeros(dst.group.ngens, src.group.ngens)
    for k, chain in enumerate(dst.basis):
        if n == 0:
            key = F.obj(chain.obj)
        else:
            key = tuple(F(e) for e in chain.entries)
        j = src.index.get(key)
        if j is None:
            continue
        rows, cols = dst.block(k), src.block(j)
        for i in range(rows.stop - rows.start):
            m[rows.start + i, cols.start + i] = 1
    return AbHom(src.group, dst.group, m)


@dataclass
class InducedMap:
    """F^* on H^n, with both cohomology groups."""

    hom: AbHom
    target_cohomology: CohomologyGroup
    source_cohomology: CohomologyGroup


def _complexes(F, D, max_degree, target, source, pulled):
    target = target or CochainComplex(F.target, D, max_degree=max_degree)
    if source is None:
        pulled = pulled or pullback_system(F, D)
        source = CochainComplex(F.source, pulled, max_degree=max_degree)
    return target, source


def induced_cohomology_map(F, D, n, max_degree=None, target=None, source=None, pulled=None):
    target, source = _complexes(F, D, max_degree, target, source, pulled)
    H_target, H_source = target.cohomology(n), source.cohomology(n)
    hom = induced_subquotient_map(induced_cochain_map(F, source, target, n), H_target.sq, H_source.sq)
    return InducedMap(hom, H_target, H_source)


def ker_generators(F, D, n, max_degree=None, target=None, source=None, pulled=None):
    """Classes generating ker(F^*: H^n(target; D) -> H^n(source; F^*D))."""
    induced = induced_cohomology_map(F, D, n, max_degree, target, source, pulled)
    lifting, _ = kernel_of_subquotient_map(induced.hom)
    H = induced.target_cohomology
    return [H.from_coords(lifting[:, k]) for k in range(lifting.shape[1])]


def restriction_map(c, u, D, n, max_degree=None, absolute=None):
    """iota^*: H^n(C; D) -> H^n(U; D restricted to U)."""
    inclusion = u.inclusion()
    absolute = absolute or CochainComplex(c, D, max_degree=max_degree)
    return induced_cohomology_map(inclusion, D, n, max_degree, target=absolute)
