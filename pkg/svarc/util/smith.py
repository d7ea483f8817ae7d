"""
Exact integer matrices and the Smith normal form.

Matrices are 2-D numpy arrays with dtype=object holding Python ints, so every
entry is an arbitrary-precision integer and no float ever appears.
"""

import numpy as np
try:
    from sympy import igcdex
except ImportError:
    from sympy.core.intfunc import igcdex


def int_matrix(rows, shape=None):
    """
    Build an exact integer matrix from nested sequences.
    `shape` is needed when `rows` is empty.
    """
    if isinstance(rows, np.ndarray) and rows.ndim == 2:
        out = np.empty(rows.shape, dtype=object)
        for idx, v in np.ndenumerate(rows):
            out[idx] = int(v)
        return out
    rows = [[int(v) for v in row] for row in rows]
    if not rows:
        assert shape is not None, "empty matrix needs an explicit shape"
        return zeros(*shape)
    width = len(rows[0])
    assert all(len(row) == width for row in rows), "ragged matrix"
    out = zeros(len(rows), width)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            out[i, j] = v
    return out


def int_vector(values):
    out = np.zeros(len(values), dtype=object)
    for i, v in enumerate(values):
        out[i] = int(v)
    return out


def zeros(rows, cols):
    return np.zeros((rows, cols), dtype=object)


def identity(n):
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def matmul(a, b):
    assert a.shape[1] == b.shape[0], f"shape mismatch {a.shape} @ {b.shape}"
    if a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    return a.dot(b)


def hstack(blocks, rows):
    blocks = [b for b in blocks if b.shape[1] > 0]
    if not blocks:
        return zeros(rows, 0)
    return np.concatenate(blocks, axis=1)


def from_columns(cols, rows):
    if not cols:
        return zeros(rows, 0)
    out = zeros(rows, len(cols))
    for j, c in enumerate(cols):
        out[:, j] = c
    return out


def _smallest_nonzero(S, t):
    best = None
    rows, cols = S.shape
    for i in range(t, rows):
        for j in range(t, cols):
            v = S[i, j]
            if v != 0 and (best is None or abs(v) < best[0]):
                best = (abs(v), i, j)
    return best


def _bezout(a, b):
    # plain elimination when a | b keeps the pivot column clean
    if b % a == 0:
        return 1, 0, a
    x, y, g = igcdex(a, b)
    return int(x), int(y), int(g)


class _Reduction:
    """Row and column operations on S, recorded in U, U^-1 and V."""

    def __init__(self, m):
        rows, cols = m.shape
        self.S = int_matrix(m) if m.size else zeros(rows, cols)
        self.U = identity(rows)
        self.U_inv = identity(rows)
        self.V = identity(cols)

    def swap_rows(self, i, k):
        if i == k:
            return
        self.S[[i, k], :] = self.S[[k, i], :]
        self.U[[i, k], :] = self.U[[k, i], :]
        self.U_inv[:, [i, k]] = self.U_inv[:, [k, i]]

    def swap_cols(self, j, k):
        if j == k:
            return
        self.S[:, [j, k]] = self.S[:, [k, j]]
        self.V[:, [j, k]] = self.V[:, [k, j]]

    def negate_row(self, i):
        self.S[i, :] = -self.S[i, :]
        self.U[i, :] = -self.U[i, :]
        self.U_inv[:, i] = -self.U_inv[:, i]

    def add_row(self, target, source):
        # row_target += row_source
        self.S[target, :] = self.S[target, :] + self.S[source, :]
        self.U[target, :] = self.U[target, :] + self.U[source, :]
        self.U_inv[:, source] = self.U_inv[:, source] - self.U_inv[:, target]

    def combine_rows(self, t, i):
        # unimodular 2x2 step on rows (t, i) clearing S[i, t]
        a, b = self.S[t, t], self.S[i, t]
        x, y, g = _bezout(a, b)
        p, q = a // g, b // g
        for M in (self.S, self.U):
            rt, ri = M[t, :].copy(), M[i, :].copy()
            M[t, :] = x * rt + y * ri
            M[i, :] = -q * rt + p * ri
        ct, ci = self.U_inv[:, t].copy(), self.U_inv[:, i].copy()
        self.U_inv[:, t] = p * ct + q * ci
        self.U_inv[:, i] = -y * ct + x * ci

    def combine_cols(self, t, j):
        a, b = self.S[t, t], self.S[t, j]
        x, y, g = _bezout(a, b)
        p, q = a // g, b // g
        for M in (self.S, self.V):
            ct, cj = M[:, t].copy(), M[:, j].copy()
            M[:, t] = x * ct + y * cj
            M[:, j] = -q * ct + p * cj


def _reduce(m):
    red = _Reduction(m)
    S = red.S
    rows, cols = S.shape
    for t in range(min(rows, cols)):
        pivot = _smallest_nonzero(S, t)
        if pivot is None:
            break
        _, i0, j0 = pivot
        red.swap_rows(t, i0)
        red.swap_cols(t, j0)
        while True:
            for i in range(t + 1, rows):
                if S[i, t] != 0:
                    red.combine_rows(t, i)
            for j in range(t + 1, cols):
                if S[t, j] != 0:
                    red.combine_cols(t, j)
            if any(S[i, t] != 0 for i in range(t + 1, rows)):
                continue
            d = S[t, t]
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if S[i, j] % d != 0),
                None,
            )
            if bad is None:
                break
            red.add_row(t, bad)
        if S[t, t] < 0:
            red.negate_row(t)
    return red


def smith_normal_form(m):
    """
    Return (U, S, V) with S = U.m.V diagonal, nonnegative, d1 | d2 | ...
    and U, V unimodular.
    """
    red = _reduce(m)
    return red.U, red.S, red.V


def smith_normal_form_with_inverse(m):
    """As smith_normal_form, also returning U^-1."""
    red = _reduce(m)
    return red.U, red.S, red.V, red.U_inv


def diagonal(S):
    return [S[i, i] for i in range(min(S.shape))]


def rank_of(S):
    return sum(1 for d in diagonal(S) if d != 0)


def image_basis(m):
    """Columns forming a basis of the lattice spanned by the columns of m."""
    _, S, V = smith_normal_form(m)
    r = rank_of(S)
    return matmul(m, V)[:, :r].copy()


def integer_kernel(m):
    """Columns forming a basis of {x in Z^n : m.x = 0}."""
    _, S, V = smith_normal_form(m)
    r = rank_of(S)
    return V[:, r:].copy()


class LatticeSolver:
    """
    Coordinates of vectors in a lattice given by a basis (columns of full column rank).
    """

    def __init__(self, basis):
        self.basis = basis
        self.U, self.S, self.V = smith_normal_form(basis)
        self.rank = rank_of(self.S)
        assert self.rank == basis.shape[1], "lattice basis is not independent"

    def solve(self, x):
        """Return c with basis.c = x, or None if x is not in the lattice."""
        y = matmul(self.U, x.reshape(-1, 1)).reshape(-1)
        coords = np.zeros(self.rank, dtype=object)
        for i in range(self.rank):
            d = self.S[i, i]
            if y[i] % d != 0:
                return None
            coords[i] = y[i] // d
        if any(v != 0 for v in y[self.rank:]):
            return None
        return matmul(self.V, coords.reshape(-1, 1)).reshape(-1)

    def contains(self, x):
        return self.solve(x) is not None
