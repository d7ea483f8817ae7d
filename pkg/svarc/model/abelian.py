"""
Finitely generated abelian groups, homomorphisms between them and subquotients.

A group is presented by an ordered list of cyclic generators: order 0 means a
copy of Z, order d >= 2 a copy of Z/d. Direct sums simply concatenate the
orders; a group is in normal form when the free generators come first and the
torsion orders form a divisibility chain. Elements are integer vectors and
"zero" means membership in the relation lattice spanned by d_i e_i.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Tuple

import numpy as np

from ..errors import (
    DenominatorNotContained,
    MalformedHom,
    NotChainCompatible,
    NotInNumerator,
)
from ..util.smith import (
    LatticeSolver,
    diagonal,
    hstack,
    image_basis,
    int_matrix,
    int_vector,
    integer_kernel,
    matmul,
    smith_normal_form_with_inverse,
    zeros,
)


@dataclass(frozen=True)
class AbGroup:
    orders: Tuple[int, ...] = ()

    def __post_init__(self):
        orders = tuple(int(d) for d in self.orders)
        for d in orders:
            if d < 0 or d == 1:
                raise MalformedHom(f"cyclic generator order must be 0 or >= 2, got {d}")
        object.__setattr__(self, "orders", orders)

    @classmethod
    def of(cls, free_rank=0, torsion=()):
        """Group Z^r + Z/d1 + ... + Z/dk in normal form (d1 | d2 | ...)."""
        torsion = tuple(int(d) for d in torsion)
        for d in torsion:
            if d < 2:
                raise MalformedHom(f"invariant factor {d} < 2")
        for d, e in zip(torsion, torsion[1:]):
            if e % d != 0:
                raise MalformedHom(f"invariant factors {torsion} are not a divisibility chain")
        return cls((0,) * int(free_rank) + torsion)

    @classmethod
    def cyclic(cls, d):
        d = int(d)
        if d == 1:
            return cls(())
        return cls((d,))

    @classmethod
    def trivial(cls):
        return cls(())

    @classmethod
    def direct_sum(cls, groups):
        return cls(tuple(d for g in groups for d in g.orders))

    @property
    def ngens(self):
        return len(self.orders)

    @cached_property
    def invariants(self):
        """(free_rank, invariant factors) of the isomorphism type."""
        free = sum(1 for d in self.orders if d == 0)
        tors = [d for d in self.orders if d > 0]
        if not tors:
            return free, ()
        m = zeros(len(tors), len(tors))
        for i, d in enumerate(tors):
            m[i, i] = d
        _, S, _, _ = smith_normal_form_with_inverse(m)
        return free, tuple(int(d) for d in diagonal(S) if d > 1)

    @property
    def free_rank(self):
        return self.invariants[0]

    @property
    def torsion(self):
        return self.invariants[1]

    def is_isomorphic(self, other):
        return self.invariants == other.invariants

    @property
    def is_trivial(self):
        return self.ngens == 0

    def order(self):
        """Number of elements, or None for infinite groups."""
        if any(d == 0 for d in self.orders):
            return None
        return math.prod(self.orders)

    def relation_matrix(self):
        cols = [i for i, d in enumerate(self.orders) if d > 0]
        m = zeros(self.ngens, len(cols))
        for j, i in enumerate(cols):
            m[i, j] = self.orders[i]
        return m

    def normalize(self, x):
        x = int_vector(x)
        assert len(x) == self.ngens, f"element of length {len(x)} in group with {self.ngens} generators"
        for i, d in enumerate(self.orders):
            if d > 0:
                x[i] = x[i] % d
        return x

    def is_zero(self, x):
        return not any(self.normalize(x))

    def zero(self):
        return np.zeros(self.ngens, dtype=object)

    def basis_vector(self, i):
        x = self.zero()
        x[i] = 1
        return x

    def elements(self):
        """All elements of a finite group, as normalized vectors."""
        assert self.order() is not None, "cannot enumerate an infinite group"
        for coords in itertools.product(*(range(d) for d in self.orders)):
            yield int_vector(coords)

    def __str__(self):
        free, tors = self.invariants
        parts = []
        if free == 1:
            parts.append("Z")
        elif free > 1:
            parts.append(f"Z^{free}")
        parts.extend(f"Z/{d}" for d in tors)
        return " + ".join(parts) if parts else "0"


def parse_group(text):
    """Inverse of str(AbGroup) for normal forms: '0', 'Z', 'Z^2 + Z/2', ..."""
    text = text.strip()
    if text == "0":
        return AbGroup.trivial()
    free, tors = 0, []
    for part in text.split("+"):
        part = part.strip()
        if part == "Z":
            free += 1
        elif part.startswith("Z^"):
            free += int(part[2:])
        elif part.startswith("Z/"):
            tors.append(int(part[2:]))
        else:
            raise ValueError(f"cannot parse group {text!r}")
    return AbGroup.of(free, sorted(tors))


@dataclass(frozen=True, eq=False)
class AbHom:
    """
    Homomorphism given by an integer matrix: columns indexed by source
    generators, rows by target generators.
    """

    source: AbGroup
    target: AbGroup
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = int_matrix(self.matrix, shape=(self.target.ngens, self.source.ngens))
        if m.shape != (self.target.ngens, self.source.ngens):
            raise MalformedHom(
                f"matrix shape {m.shape} does not match {self.target.ngens}x{self.source.ngens}"
            )
        for j, d in enumerate(self.source.orders):
            if d == 0:
                continue
            for i, e in enumerate(self.target.orders):
                v = d * m[i, j]
                if (e == 0 and v != 0) or (e > 0 and v % e != 0):
                    raise MalformedHom(
                        f"generator {j} of order {d} is sent to an element of non-dividing order "
                        f"(coordinate {i} of {self.target})"
                    )
        for i, e in enumerate(self.target.orders):
            if e > 0:
                m[i, :] = m[i, :] % e
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, group):
        m = zeros(group.ngens, group.ngens)
        for i in range(group.ngens):
            m[i, i] = 1
        return cls(group, group, m)

    @classmethod
    def zero(cls, source, target):
        return cls(source, target, zeros(target.ngens, source.ngens))

    @classmethod
    def scalar(cls, group, k):
        m = zeros(group.ngens, group.ngens)
        for i in range(group.ngens):
            m[i, i] = k
        return cls(group, group, m)

    @classmethod
    def block_diagonal(cls, homs):
        source = AbGroup.direct_sum([h.source for h in homs])
        target = AbGroup.direct_sum([h.target for h in homs])
        m = zeros(target.ngens, source.ngens)
        r = c = 0
        for h in homs:
            m[r:r + h.target.ngens, c:c + h.source.ngens] = h.matrix
            r += h.target.ngens
            c += h.source.ngens
        return cls(source, target, m)

    def __call__(self, x):
        x = int_vector(x)
        return self.target.normalize(matmul(self.matrix, x.reshape(-1, 1)).reshape(-1))

    def compose(self, other):
        """self o other."""
        assert other.target == self.source, "composing homomorphisms with mismatched groups"
        return AbHom(other.source, self.target, matmul(self.matrix, other.matrix))

    def __add__(self, other):
        assert (self.source, self.target) == (other.source, other.target)
        return AbHom(self.source, self.target, self.matrix + other.matrix)

    def __neg__(self):
        return AbHom(self.source, self.target, -self.matrix)

    def __eq__(self, other):
        if not isinstance(other, AbHom):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and np.array_equal(self.matrix, other.matrix)
        )

    __hash__ = None

    def is_zero(self):
        return not self.matrix.any()


def hom_kernel(h):
    """Generator matrix (columns, source coordinates) of ker h."""
    n = h.source.ngens
    augmented = hstack([h.matrix, h.target.relation_matrix()], h.target.ngens)
    if augmented.shape[1] == 0:
        return zeros(n, 0)
    kernel = integer_kernel(augmented)
    projected = kernel[:n, :]
    if projected.shape[1] == 0 or not projected.any():
        return zeros(n, 0)
    return image_basis(projected)


@dataclass(frozen=True, eq=False)
class Subquotient:
    """
    <numerator> / <denominator> inside an ambient group, both taken modulo the
    ambient relation lattice.
    """

    ambient: AbGroup
    numerator: np.ndarray = field(repr=False)
    denominator: np.ndarray = field(repr=False)
    normal_form: AbGroup = None
    lifting: np.ndarray = field(repr=False, default=None)
    _basis: LatticeSolver = field(repr=False, default=None)
    _P: np.ndarray = field(repr=False, default=None)
    _positions: tuple = field(repr=False, default=())

    def reduce(self, x):
        """Normal-form coordinates of an element of the numerator."""
        x = int_vector(x)
        if self._basis is None:
            if self.ambient.is_zero(x):
                return np.zeros(0, dtype=object)
            raise NotInNumerator(f"{list(x)} is not in the numerator subgroup")
        c = self._basis.solve(x)
        if c is None:
            raise NotInNumerator(f"{list(x)} is not in the numerator subgroup")
        y = matmul(self._P, c.reshape(-1, 1)).reshape(-1)
        return self.normal_form.normalize([y[p] for p in self._positions])

    def lift(self, coords):
        """Ambient representative of normal-form coordinates."""
        coords = int_vector(coords)
        return self.ambient.normalize(matmul(self.lifting, coords.reshape(-1, 1)).reshape(-1))

    def contains(self, x):
        if self._basis is None:
            return self.ambient.is_zero(x)
        return self._basis.contains(int_vector(x))

    def generators(self):
        return [self.lift(self.normal_form.basis_vector(i)) for i in range(self.normal_form.ngens)]


def subquotient(ambient, num, den):
    n = ambient.ngens
    num = int_matrix(num, shape=(n, 0))
    den = int_matrix(den, shape=(n, 0))
    relations = ambient.relation_matrix()
    N = hstack([num, relations], n)
    D = hstack([den, relations], n)
    if N.shape[1] == 0 or not N.any():
        for j in range(D.shape[1]):
            if D[:, j].any():
                raise DenominatorNotContained(f"denominator column {j} is not in the numerator")
        return Subquotient(ambient, num, den, AbGroup.trivial(), zeros(n, 0))
    B = image_basis(N)
    solver = LatticeSolver(B)
    r = B.shape[1]
    coords = zeros(r, D.shape[1])
    for j in range(D.shape[1]):
        c = solver.solve(D[:, j])
        if c is None:
            raise DenominatorNotContained(
                f"denominator column {j} = {list(D[:, j])} is not in the numerator (d.d != 0 upstream?)"
            )
        coords[:, j] = c
    P, S, _, P_inv = smith_normal_form_with_inverse(coords)
    diag = list(diagonal(S)) + [0] * (r - min(S.shape))
    free = [i for i, d in enumerate(diag) if d == 0]
    tors = [i for i, d in enumerate(diag) if d > 1]
    positions = tuple(free + tors)
    normal_form = AbGroup.of(len(free), [diag[i] for i in tors])
    lifting = zeros(n, len(positions))
    B_P_inv = matmul(B, P_inv)
    for k, p in enumerate(positions):
        lifting[:, k] = ambient.normalize(B_P_inv[:, p])
    logging.debug(f"subquotient of {ambient} has normal form {normal_form}")
    return Subquotient(ambient, num, den, normal_form, lifting, solver, P, positions)


def element_is_zero(sq, x):
    x = int_vector(x)
    if not sq.contains(x):
        raise NotInNumerator(f"{list(x)} is not in the numerator subgroup")
    return not sq.reduce(x).any()


def induced_subquotient_map(f, src, dst):
    """Map on normal forms induced by an ambient homomorphism f: src.ambient -> dst.ambient."""
    assert f.source == src.ambient and f.target == dst.ambient, "map does not match ambients"
    for j in range(src.numerator.shape[1]):
        image = f(src.numerator[:, j])
        if not dst.contains(image):
            raise NotChainCompatible(f"numerator generator {j} is not sent into the numerator")
    for j in range(src.denominator.shape[1]):
        image = f(src.denominator[:, j])
        if not dst.contains(image) or dst.reduce(image).any():
            raise NotChainCompatible(f"denominator generator {j} is not sent into the denominator")
    m = zeros(dst.normal_form.ngens, src.normal_form.ngens)
    for k, g in enumerate(src.generators()):
        m[:, k] = dst.reduce(f(g))
    return AbHom(src.normal_form, dst.normal_form, m)


def kernel_of_subquotient_map(f):
    """
    Minimal generators (columns, source normal-form coordinates) of ker f for a
    map between normal forms.
    """
    K = hom_kernel(f)
    sq = subquotient(f.source, K, zeros(f.source.ngens, 0))
    return sq.lifting.copy(), sq.normal_form
