"""Seeded random objects for property tests and the CLI."""

from __future__ import annotations

import numpy as np

from .f2 import F2Matrix
from .homalg import DGModuleX, F2Complex, LaurentComplex
from .poly import LaurentPoly, PolyMatrix

ONE_PLUS_T = LaurentPoly.from_exponents([0, 1])


def rng_from(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_invertible(rng, n: int) -> F2Matrix:
    while True:
        m = F2Matrix.from_dense(rng.integers(0, 2, size=(n, n)))
        if m.rank() == n:
            return m


def _zigzag(rng, length: int):
    """A string module: vertices joined by X or d edges of alternating direction."""
    n = length + 1
    d, x = [], []
    for e in range(length):
        a, b = (e, e + 1) if e % 2 == 0 else (e + 1, e)
        (d if rng.random() < 0.5 else x).append((b, a))
    if rng.random() < 0.5:
        flip = {i: n - 1 - i for i in range(n)}
        d = [(flip[i], flip[j]) for i, j in d]
        x = [(flip[i], flip[j]) for i, j in x]
    return n, d, x


def random_dg_module(rng, max_dim: int = 10, conjugate: bool = True) -> DGModuleX:
    """Direct sum of small indecomposables, disguised by a random basis change."""
    rng = rng_from(rng)
    dim = int(rng.integers(1, max_dim + 1))
    d_entries, x_entries = [], []
    used = 0
    while used < dim:
        room = dim - used
        kind = rng.integers(0, 4)
        if kind == 0 or room == 1:
            size, de, xe = 1, [], []
        elif kind == 1 and room >= 4:
            # free module of rank one over F2[X, d]/(X^2, d^2): 1, X, d, Xd
            size, de, xe = 4, [(2, 0), (3, 1)], [(1, 0), (3, 2)]
        else:
            size, de, xe = _zigzag(rng, int(rng.integers(1, min(room, 6))))
        d_entries += [(i + used, j + used) for i, j in de]
        x_entries += [(i + used, j + used) for i, j in xe]
        used += size
    d = F2Matrix.from_entries(dim, dim, d_entries)
    x = F2Matrix.from_entries(dim, dim, x_entries)
    if conjugate:
        p = random_invertible(rng, dim)
        pi = p.inverse()
        d, x = p @ d @ pi, p @ x @ pi
    return DGModuleX(F2Complex(d), x)


def random_quasi_free(rng, max_rank: int = 6) -> DGModuleX:
    """A random differential on a free F2[X]/(X^2)-module of rank <= max_rank.

    Basis ``e_i, X e_i``; the differential is ``A + X B`` in block form and
    must satisfy ``A^2 = 0`` and ``AB + BA = 0``.  We take ``A`` of square
    zero by conjugation and pick ``B`` from the solution space.
    """
    rng = rng_from(rng)
    r = int(rng.integers(1, max_rank + 1))
    k = int(rng.integers(0, r // 2 + 1))
    a0 = F2Matrix.from_entries(r, r, [(k + i, i) for i in range(k)])
    p = random_invertible(rng, r)
    a = p @ a0 @ p.inverse()
    # solve AB + BA = 0 for B: linear in the r*r entries of B
    cols = []
    for j in range(r):
        for i in range(r):
            e = F2Matrix.from_entries(r, r, [(i, j)])
            m = a @ e + e @ a
            v = 0
            for (s, t) in m.entries():
                v |= 1 << (s * r + t)
            cols.append(v)
    from .f2 import kernel_vectors
    sols = kernel_vectors(cols, len(cols))
    pick = 0
    for v in sols:
        if rng.random() < 0.5:
            pick ^= v
    b_entries = []
    for idx in range(r * r):
        if (pick >> idx) & 1:
            j, i = divmod(idx, r)
            b_entries.append((i, j))
    b = F2Matrix.from_entries(r, r, b_entries)
    z = F2Matrix.zeros(r)
    d = F2Matrix.block_diag([a, a])
    d = d + F2Matrix.zeros(r).hstack(z).vstack(b.hstack(z))
    x = F2Matrix.zeros(r).hstack(z).vstack(F2Matrix.identity(r).hstack(z))
    return DGModuleX(F2Complex(d), x)


def random_laurent_poly(rng, support: int = 3, max_deg: int = 4,
                        min_deg: int = 0) -> LaurentPoly:
    size = int(rng.integers(1, support + 1))
    exps = rng.choice(np.arange(min_deg, max_deg + 1), size=size, replace=False)
    return LaurentPoly.from_exponents(int(e) for e in exps)


def elementary(n: int, i: int, j: int, c: LaurentPoly) -> PolyMatrix:
    rows = [[LaurentPoly.one() if a == b else LaurentPoly.zero() for b in range(n)]
            for a in range(n)]
    rows[i][j] = c
    return PolyMatrix(rows, n, n)


def random_unimodular(rng, n: int, steps: int = 4,
                      polynomial: bool = True) -> tuple[PolyMatrix, PolyMatrix]:
    """A random product of elementary matrices and its inverse.

    With ``polynomial`` the entries and the inverse's entries stay in F2[t].
    """
    P = PolyMatrix.identity(n)
    Pi = PolyMatrix.identity(n)
    if n < 2:
        return P, Pi
    for _ in range(steps):
        i, j = rng.choice(n, size=2, replace=False)
        c = random_laurent_poly(rng, support=2, max_deg=2,
                                min_deg=0 if polynomial else -2)
        E = elementary(n, int(i), int(j), c)
        P = P @ E
        Pi = E @ Pi
    perm = rng.permutation(n)
    Q = PolyMatrix([[LaurentPoly.one() if perm[b] == a else LaurentPoly.zero()
                     for b in range(n)] for a in range(n)], n, n)
    return P @ Q, Q.T @ Pi


def random_laurent_complex(rng, max_rank: int = 8, support: int = 3,
                           max_deg: int = 4) -> LaurentComplex:
    """``d = P [[0, A], [0, 0]] P^-1`` with polynomial ``P`` and ``P^-1``.

    Entries stay polynomial, so the t=1 module has finitely many operations.
    """
    rng = rng_from(rng)
    n = int(rng.integers(1, max_rank + 1))
    top = int(rng.integers(0, n // 2 + 1))
    zero = LaurentPoly.zero()
    rows = [[zero] * n for _ in range(n)]
    for i in range(top):
        for j in range(top, n):
            if rng.random() < 0.5:
                # bias towards factors vanishing at t = 1
                e = int(rng.integers(0, 4))
                rows[i][j] = random_laurent_poly(rng, support, max_deg) * ONE_PLUS_T ** e
    d0 = PolyMatrix(rows, n, n)
    P, Pi = random_unimodular(rng, n, steps=int(rng.integers(0, 4)))
    return LaurentComplex(P @ d0 @ Pi)
