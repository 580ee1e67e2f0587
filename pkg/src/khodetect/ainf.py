"""Strictly unital ungraded A-infinity modules over F2[X]/(X^2).

A module is stored as the list ``ops = [m0, m1, m2, ...]`` where ``m_j``
is the operation with ``j`` copies of ``X`` as its algebra inputs.  Over F2
the structure equations collapse to ``sum_{i+j=n} m_i m_j = 0``.

Homotopy transfer of an ungraded module can produce infinitely many
nonzero operations.  Their generating series ``sum_j m_j Y^j`` is then a
rational matrix ``N(Y) / den(Y)`` with ``den(0) = 1``, and that is how such
modules (and morphisms) are stored; finite ones have ``den = 1``.

An optional ``grading`` of ``(h, q)`` pairs follows the Khovanov
convention: ``m_j`` shifts bidegree by ``(1 - j, -2j)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .f2 import F2Matrix
from .homalg import ComplexError, DGModuleX, F2Complex, homology_retraction
from .poly import ONE, LaurentPoly, PolyMatrix, solve_rational


class TransferError(RuntimeError):
    pass


@dataclass(frozen=True)
class Violation:
    index: int
    nonzero_entries: int

    def __str__(self):
        return f"relation {self.index} fails ({self.nonzero_entries} nonzero entries)"


def _trim(mats: Sequence[F2Matrix]) -> tuple[F2Matrix, ...]:
    mats = list(mats)
    while mats and mats[-1].is_zero():
        mats.pop()
    return tuple(mats)


def _max_degree(N: PolyMatrix) -> int:
    return max((x.degree for row in N.entries for x in row if x), default=0)


def _expand(N: PolyMatrix, den: LaurentPoly, count: int) -> list[F2Matrix]:
    """First ``count`` coefficients of the power series ``N / den``."""
    dk = [k for k in den.exponents() if k > 0]
    out = []
    for n in range(count):
        c = N.coefficient_matrix(n)
        for k in dk:
            if k <= n:
                c = c + out[n - k]
        out.append(c)
    return out


def _reduce_series(N: PolyMatrix, den: LaurentPoly):
    if den.valuation != 0 or den.coefficient(0) != 1:
        raise ValueError("denominator must have constant term 1")
    g = den
    for row in N.entries:
        for x in row:
            if x:
                g = g.gcd(x)
                if g == ONE:
                    return N, den
    g = g.normalized()
    if g == ONE:
        return N, den
    return N.map(lambda x: x.exact_div(g) if x else x), den.exact_div(g)


class _Series:
    """A sequence of matrices with a rational generating series."""

    __slots__ = ()

    def _init_series(self, mats, series, shape):
        if series is None:
            self._seq = _trim(mats)
            self._num, self._den = None, ONE
            return
        N, den = series
        if N.shape != shape:
            raise ValueError("series has the wrong shape")
        N, den = _reduce_series(N, LaurentPoly.coerce(den))
        if den == ONE:
            if N.entries and any(x and x.valuation < 0 for row in N.entries for x in row):
                raise ValueError("series has negative powers")
            self._seq = _trim(N.coefficient_matrix(e) for e in range(_max_degree(N) + 1))
            self._num, self._den = None, ONE
        else:
            self._seq = ()
            self._num, self._den = N, den
            self._cache = []

    @property
    def is_finite(self) -> bool:
        return self._num is None

    @property
    def denominator(self) -> LaurentPoly:
        return self._den

    def _zero(self) -> F2Matrix:
        raise NotImplementedError

    def _get(self, j: int) -> F2Matrix:
        if j < 0:
            raise IndexError(j)
        if self._num is None:
            return self._seq[j] if j < len(self._seq) else self._zero()
        if j >= len(self._cache):
            self._cache = _expand(self._num, self._den, max(j + 1, 2 * len(self._cache)))
        return self._cache[j]

    def _nonzero_at(self, j: int) -> bool:
        return j >= 0 and (self._num is not None or j < len(self._seq))

    def series(self) -> tuple[PolyMatrix, LaurentPoly]:
        """``(N, den)`` with ``sum_j s_j Y^j = N(Y) / den(Y)``."""
        if self._num is not None:
            return self._num, self._den
        if not self._seq:
            return PolyMatrix.zeros(*self._zero().shape), ONE
        return PolyMatrix.from_coefficients(self._seq), ONE

    def _stored_repr(self) -> str:
        if self._num is None:
            return f"{len(self._seq)} terms"
        return f"rational, denominator {self._den}"


class AinfModuleX(_Series):
    """An A-infinity module over F2[X]/(X^2)."""

    __slots__ = ("dim", "_seq", "_num", "_den", "_cache", "grading")

    def __init__(self, dim: int, ops: Sequence[F2Matrix] = (), grading=None,
                 series: tuple | None = None):
        self.dim = dim
        for m in ops:
            if m.shape != (dim, dim):
                raise ValueError(f"operation of shape {m.shape} on a module of dim {dim}")
        self._init_series(ops, series, (dim, dim))
        if grading is not None:
            if not self.is_finite:
                raise ValueError("graded modules have finitely many operations")
            grading = tuple(tuple(g) for g in grading)
            if len(grading) != dim:
                raise ValueError("grading length does not match dimension")
            for j, m in enumerate(self._seq):
                dh, dq = 1 - j, -2 * j
                for t, s in m.entries():
                    if grading[t] != (grading[s][0] + dh, grading[s][1] + dq):
                        raise ComplexError(f"operation m{j} is not homogeneous")
        self.grading = grading

    @property
    def ops(self) -> tuple:
        """The operations of a finite module."""
        if not self.is_finite:
            raise ValueError("module has infinitely many operations; use op(j) or series()")
        return self._seq

    def _zero(self):
        return F2Matrix.zeros(self.dim)

    def op(self, j: int) -> F2Matrix:
        return self._get(j)

    def __repr__(self):
        return f"AinfModuleX(dim={self.dim}, {self._stored_repr()})"

    def __eq__(self, other):
        return (isinstance(other, AinfModuleX) and self.dim == other.dim
                and self.series() == other.series())

    __hash__ = None

    @classmethod
    def trivial(cls, dim: int) -> "AinfModuleX":
        return cls(dim)

    @classmethod
    def free(cls, rank: int) -> "AinfModuleX":
        """``F2[X]/(X^2)^rank`` with zero differential, basis ``1_i, X_i``."""
        entries = [(2 * i + 1, 2 * i) for i in range(rank)]
        x = F2Matrix.from_entries(2 * rank, 2 * rank, entries)
        return cls(2 * rank, [F2Matrix.zeros(2 * rank), x])


class AinfMorphismX(_Series):
    """Components ``f_0, f_1, ...`` of a morphism ``source -> target``."""

    __slots__ = ("source", "target", "_seq", "_num", "_den", "_cache")

    def __init__(self, source: AinfModuleX, target: AinfModuleX,
                 maps: Sequence[F2Matrix] = (), series: tuple | None = None):
        self.source, self.target = source, target
        for f in maps:
            if f.shape != (target.dim, source.dim):
                raise ValueError("morphism component has the wrong shape")
        self._init_series(maps, series, (target.dim, source.dim))

    @property
    def maps(self) -> tuple:
        if not self.is_finite:
            raise ValueError("morphism has infinitely many components; use map(j) or series()")
        return self._seq

    def _zero(self):
        return F2Matrix.zeros(self.target.dim, self.source.dim)

    def map(self, j: int) -> F2Matrix:
        return self._get(j)

    def __repr__(self):
        return f"AinfMorphismX({self.source.dim}->{self.target.dim}, {self._stored_repr()})"


def identity(M: AinfModuleX) -> AinfMorphismX:
    return AinfMorphismX(M, M, (F2Matrix.identity(M.dim),))


def _series_violations(R: PolyMatrix, den: LaurentPoly) -> list[Violation]:
    """Nonzero coefficients of ``R / den`` up to the degree of ``R``."""
    if R.is_zero():
        return []
    coeffs = _expand(R, den, _max_degree(R) + 1)
    return [Violation(n, c.nnz) for n, c in enumerate(coeffs) if not c.is_zero()]


def check_relations(M: AinfModuleX) -> list[Violation]:
    if not M.is_finite:
        N, den = M.series()
        return _series_violations(N @ N, den * den)
    out = []
    ops = M.ops
    L = len(ops)
    for n in range(max(2 * L - 1, 0)):
        acc = M._zero()
        for i in range(max(0, n - L + 1), min(n, L - 1) + 1):
            acc = acc + ops[i] @ ops[n - i]
        if not acc.is_zero():
            out.append(Violation(n, acc.nnz))
    return out


def check_morphism(f: AinfMorphismX) -> list[Violation]:
    src, tgt = f.source, f.target
    if not (f.is_finite and src.is_finite and tgt.is_finite):
        F, dF = f.series()
        Ds, ds = src.series()
        Dt, dt = tgt.series()
        R = (F @ Ds).scale(dt) + (Dt @ F).scale(ds)
        return _series_violations(R, dF * ds * dt)
    maps = f.maps
    top = len(maps) + max(len(src.ops), len(tgt.ops))
    out = []
    for n in range(top):
        acc = f._zero()
        for j in range(n + 1):
            if n - j >= len(maps):
                continue
            if j < len(src.ops):
                acc = acc + maps[n - j] @ src.ops[j]
            if j < len(tgt.ops):
                acc = acc + tgt.ops[j] @ maps[n - j]
        if not acc.is_zero():
            out.append(Violation(n, acc.nnz))
    return out


def compose(g: AinfMorphismX, f: AinfMorphismX) -> AinfMorphismX:
    """``(g f)_n = sum_{i+j=n} g_i f_j``."""
    if f.target.dim != g.source.dim:
        raise ValueError("morphisms are not composable")
    if f.is_finite and g.is_finite:
        fm, gm = f.maps, g.maps
        comps = []
        for n in range(len(fm) + len(gm) - 1):
            acc = F2Matrix.zeros(g.target.dim, f.source.dim)
            for i in range(max(0, n - len(fm) + 1), min(n, len(gm) - 1) + 1):
                acc = acc + gm[i] @ fm[n - i]
            comps.append(acc)
        return AinfMorphismX(f.source, g.target, comps)
    G, dg = g.series()
    F, df = f.series()
    return AinfMorphismX(f.source, g.target, series=(G @ F, dg * df))


def promote(M: DGModuleX) -> AinfModuleX:
    gr = M.complex.grading
    if gr is not None and not all(isinstance(g, tuple) for g in gr):
        gr = None
    return AinfModuleX(M.dim, [M.differential, M.x_action], grading=gr)


@dataclass(frozen=True, eq=False)
class RetractionData:
    include: F2Matrix
    project: F2Matrix
    homotopy: F2Matrix
    degrees: tuple | None = None

    def problems(self, d: F2Matrix) -> list[str]:
        i, p, h = self.include, self.project, self.homotopy
        n, k = i.shape
        out = []
        if p.shape != (k, n) or h.shape != (n, n) or d.shape != (n, n):
            return ["shape mismatch"]
        if p @ i != F2Matrix.identity(k):
            out.append("project . include != 1")
        if i @ p + F2Matrix.identity(n) != d @ h + h @ d:
            out.append("include . project + 1 != dh + hd")
        if not (h @ h).is_zero():
            out.append("h h != 0")
        if not (h @ i).is_zero():
            out.append("h include != 0")
        if not (p @ h).is_zero():
            out.append("project h != 0")
        if not (d @ i).is_zero():
            out.append("include does not land in cycles")
        return out


def retraction_onto_homology(M: AinfModuleX, rng=None) -> RetractionData:
    """Retraction of ``(M, m0)`` onto its homology, built by elimination.

    With ``rng`` the representatives and the homotopy are randomized.
    """
    r = homology_retraction(F2Complex(M.op(0), M.grading), rng)
    return RetractionData(r.include, r.project, r.homotopy, r.degrees)


def transfer(M: AinfModuleX, r: RetractionData, check: bool = True):
    """Transfer the structure along ``r``; returns ``(H, incl)``.

    ``m'_n = p T_n`` and ``incl_n = h T_n`` where ``T_n`` is the sum over
    compositions ``k_1 + ... + k_s = n`` of ``m_k1 h m_k2 h ... m_ks i``.
    The terms are summed directly while they can still die out; past the
    nilpotency bound the series ``T = (1 + M_+ h)^-1 M_+ i`` is solved
    over F2(Y) instead, with ``M_+ = sum_{j>=1} m_j Y^j``.
    """
    if not M.is_finite:
        raise NotImplementedError("transfer from a module with infinitely many operations")
    if check:
        bad = r.problems(M.op(0))
        if bad:
            raise ValueError("invalid retraction data: " + "; ".join(bad))
    i, p, h = r.include, r.project, r.homotopy
    k = i.ncols
    L = len(M.ops)
    width = max(L - 1, 1)
    # a nilpotent recurrence on (L-1) stacked columns of length dim dies by then
    cap = width * M.dim + L + 1
    zero = F2Matrix.zeros(M.dim, k)
    T = [None]
    mh = [None] + [M.ops[j] @ h for j in range(1, L)]
    n = 0
    run = 0
    while n <= cap:
        n += 1
        acc = M.ops[n] @ i if n < L else zero
        for j in range(1, min(n, L)):
            prev = T[n - j]
            if not prev.is_zero():
                acc = acc + mh[j] @ prev
        T.append(acc)
        run = run + 1 if acc.is_zero() else 0
        if n >= L - 1 and run >= width:
            ops = [F2Matrix.zeros(k)] + [p @ t for t in T[1:]]
            incl = [i] + [h @ t for t in T[1:]]
            grading = r.degrees if M.grading is not None else None
            H = AinfModuleX(k, ops, grading=grading)
            return H, AinfMorphismX(H, M, incl)
    Mplus = PolyMatrix.from_coefficients([F2Matrix.zeros(M.dim)] + list(M.ops[1:]))
    hp, ip, pp = PolyMatrix.from_f2(h), PolyMatrix.from_f2(i), PolyMatrix.from_f2(p)
    A = PolyMatrix.identity(M.dim) + Mplus @ hp
    NT, den = solve_rational(A, Mplus @ ip)
    H = AinfModuleX(k, series=(pp @ NT, den))
    incl = AinfMorphismX(H, M, series=(ip.scale(den) + hp @ NT, den))
    return H, incl


def transfer_to_homology(M: AinfModuleX, rng=None, prefer_finite: int = 8):
    """Transfer onto homology, preferring a retraction with finite output.

    Without a grading the operations ``X (h X)^n`` need not die out; another
    choice of preimages sometimes fixes that.  After ``prefer_finite``
    random attempts the rational answer is returned.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    best = None
    for attempt in range(prefer_finite + 1):
        r = retraction_onto_homology(M, rng if attempt else None)
        H, incl = transfer(M, r)
        if H.is_finite and incl.is_finite:
            return H, incl
        if best is None or (H.is_finite and not best[0].is_finite):
            best = (H, incl)
    return best
