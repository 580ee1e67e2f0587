"""Chain complexes over F2, differential modules over F2[X]/(X^2), and free
complexes over F2[t, t^-1].

Complexes may carry an optional grading (an ``int`` or an ``(h, q)`` pair
per basis vector).  When present, all homology computations are done one
graded piece at a time, which is what makes Khovanov complexes tractable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

from .f2 import Coordinates, F2Matrix, iter_bits, kernel_vectors, rank_of, reduce_vector
from .poly import LaurentPoly, PolyMatrix, smith_normal_form


class ComplexError(ValueError):
    """Raised when data violates a complex or module invariant."""


def _succ(g):
    if g is None:
        return None
    if isinstance(g, tuple):
        return (g[0] + 1,) + tuple(g[1:])
    return g + 1


def _pred(g):
    if g is None:
        return None
    if isinstance(g, tuple):
        return (g[0] - 1,) + tuple(g[1:])
    return g - 1


@dataclass(frozen=True, eq=False)
class F2Complex:
    """A (possibly graded) differential F2-vector space."""

    differential: F2Matrix
    grading: tuple | None = None

    def __post_init__(self):
        d = self.differential
        if not d.is_square():
            raise ComplexError("differential must be square")
        if not (d @ d).is_zero():
            raise ComplexError("differential does not square to zero")
        if self.grading is not None:
            grading = tuple(self.grading)
            object.__setattr__(self, "grading", grading)
            if len(grading) != d.nrows:
                raise ComplexError("grading length does not match dimension")
            for i, j in d.entries():
                if grading[i] != _succ(grading[j]):
                    raise ComplexError(
                        f"differential entry {j}->{i} does not raise the homological degree by 1")

    @property
    def total_dim(self) -> int:
        return self.differential.nrows

    @property
    def is_graded(self) -> bool:
        return self.grading is not None

    def pieces(self) -> "_Pieces":
        cached = self.__dict__.get("_pieces")
        if cached is None:
            cached = _Pieces(self)
            object.__setattr__(self, "_pieces", cached)
        return cached


class _Pieces:
    """Graded pieces of a complex with local coordinates and local blocks."""

    def __init__(self, C: F2Complex):
        n = C.total_dim
        grading = C.grading if C.grading is not None else (None,) * n
        self.index: dict[Hashable, list[int]] = {}
        for i, g in enumerate(grading):
            self.index.setdefault(g, []).append(i)
        self.local = {}
        for g, idx in self.index.items():
            for k, i in enumerate(idx):
                self.local[i] = k
        self.grading = grading
        cols = C.differential.columns()
        # out[g]: local columns of d restricted to piece g, in local coords of succ(g)
        self.out: dict[Hashable, list[int]] = {}
        for g, idx in self.index.items():
            loc = self.local
            block = []
            for i in idx:
                v = 0
                for r in iter_bits(cols[i]):
                    v |= 1 << loc[r]
                block.append(v)
            self.out[g] = block

    def degrees(self) -> list:
        keys = list(self.index)
        if keys == [None]:
            return keys
        return sorted(keys)

    def dim(self, g) -> int:
        return len(self.index.get(g, ()))

    def incoming(self, g) -> list[int]:
        """Local columns (in coords of ``g``) of d restricted to ``pred(g)``."""
        return self.out.get(_pred(g), [])


def homology_dims(C: F2Complex):
    """Dimension of ``ker d / im d``: an int if ungraded, else a dict by degree."""
    P = C.pieces()
    dims = {}
    for g in P.degrees():
        dims[g] = P.dim(g) - rank_of(P.out[g]) - rank_of(P.incoming(g))
    if not C.is_graded:
        return dims[None]
    return {g: v for g, v in dims.items() if v}


@dataclass
class SplitPiece:
    """Decomposition ``C_g = H ⊕ B ⊕ A`` of one graded piece (local coords).

    ``reps`` are cycles spanning a complement of the boundaries and ``bnd``
    is a basis of the boundaries; ``bnd[k] = d(pre_vecs[k])`` where
    ``pre_vecs`` are local vectors of the previous piece.
    """

    reps: list[int]
    bnd: list[int]
    pre_vecs: list[int]


def split_pieces(C: F2Complex, rng=None) -> dict:
    """Split every graded piece; ``rng`` randomizes the choices."""
    P = C.pieces()
    out = {}
    for g in P.degrees():
        incoming = P.incoming(g)
        basis: dict[int, int] = {}
        bnd, pre = [], []
        for j, col in enumerate(incoming):
            r = reduce_vector(col, basis)
            if r:
                basis[r & -r] = r
                bnd.append(col)
                pre.append(1 << j)
        reps = []
        for z in kernel_vectors(P.out[g], P.dim(g)):
            r = reduce_vector(z, basis)
            if r:
                basis[r & -r] = r
                reps.append(z)
        out[g] = SplitPiece(reps, bnd, pre)
    if rng is not None:
        def comb(vecs):
            v = 0
            for w in vecs:
                if rng.random() < 0.5:
                    v ^= w
            return v
        cycles = {g: sp.reps + sp.bnd for g, sp in out.items()}
        for g, sp in out.items():
            sp.reps = [z ^ comb(sp.bnd) for z in sp.reps]
            prev = cycles.get(_pred(g), []) if g is not None else cycles[g]
            sp.pre_vecs = [a ^ comb(prev) for a in sp.pre_vecs]
    return out


@dataclass(frozen=True, eq=False)
class Retraction:
    """Deformation retraction of a complex onto its homology.

    ``project @ include == I`` and ``include @ project + I == d h + h d``,
    with ``h h == 0``, ``h include == 0`` and ``project h == 0``.
    """

    include: F2Matrix
    project: F2Matrix
    homotopy: F2Matrix
    degrees: tuple | None


def _globalize(v: int, idx: Sequence[int]) -> int:
    out = 0
    for k in iter_bits(v):
        out |= 1 << idx[k]
    return out


def homology_retraction(C: F2Complex, rng=None) -> Retraction:
    """Retraction onto homology; pass a numpy ``rng`` for a random one."""
    P = C.pieces()
    split = split_pieces(C, rng)
    n = C.total_dim
    inc_cols: list[int] = []
    degrees = []
    offsets = {}
    for g in P.degrees():
        offsets[g] = len(inc_cols)
        idx = P.index[g]
        for z in split[g].reps:
            inc_cols.append(_globalize(z, idx))
            degrees.append(g)
    hdim = len(inc_cols)
    proj_cols = [0] * n
    htpy_cols = [0] * n
    for g in P.degrees():
        sp = split[g]
        idx = P.index[g]
        prev_idx = P.index.get(_pred(g), []) if g is not None else idx
        nxt = split.get(_succ(g)) if g is not None else sp
        lift_vecs = list(nxt.pre_vecs) if nxt is not None else []
        basis = sp.reps + sp.bnd + lift_vecs
        if len(basis) != len(idx):
            raise ComplexError("homology splitting has the wrong size")
        coords = Coordinates(basis)
        nh, nb = len(sp.reps), len(sp.bnd)
        pre_global = [_globalize(a, prev_idx) for a in sp.pre_vecs]
        off = offsets[g]
        for k, i in enumerate(idx):
            c = coords(1 << k)
            proj_cols[i] = (c & ((1 << nh) - 1)) << off
            hv = 0
            for b in iter_bits((c >> nh) & ((1 << nb) - 1)):
                hv ^= pre_global[b]
            htpy_cols[i] = hv
    include = F2Matrix.from_columns(n, inc_cols)
    project = F2Matrix.from_columns(hdim, proj_cols)
    homotopy = F2Matrix.from_columns(n, htpy_cols)
    return Retraction(include, project, homotopy,
                      tuple(degrees) if C.is_graded else None)


@dataclass(frozen=True, eq=False)
class DGModuleX:
    """A differential module over F2[X]/(X^2): ``X d = d X`` and ``X^2 = 0``."""

    complex: F2Complex
    x_action: F2Matrix

    def __post_init__(self):
        x, d = self.x_action, self.complex.differential
        if x.shape != d.shape:
            raise ComplexError("X action has the wrong size")
        if not (x @ x).is_zero():
            raise ComplexError("X action does not square to zero")
        if x @ d != d @ x:
            raise ComplexError("X action does not commute with the differential")
        gr = self.complex.grading
        if gr is not None:
            for i, j in x.entries():
                if not _x_degree_ok(gr[j], gr[i]):
                    raise ComplexError(f"X action entry {j}->{i} has the wrong degree")

    @classmethod
    def from_matrices(cls, d, x, grading=None) -> "DGModuleX":
        if not isinstance(d, F2Matrix):
            d = F2Matrix.from_dense(d)
        if not isinstance(x, F2Matrix):
            x = F2Matrix.from_dense(x)
        return cls(F2Complex(d, grading), x)

    @property
    def dim(self) -> int:
        return self.complex.total_dim

    @property
    def differential(self) -> F2Matrix:
        return self.complex.differential


def _x_degree_ok(src, tgt) -> bool:
    if isinstance(src, tuple):
        return tgt[0] == src[0] and tgt[1] == src[1] - 2
    return tgt == src


@dataclass(frozen=True, eq=False)
class HomologyModule:
    """Homology with a chosen basis and the induced X action."""

    dim: int
    x_on_H: F2Matrix
    retraction: Retraction

    @property
    def degrees(self):
        return self.retraction.degrees


def homology_module(M: DGModuleX) -> HomologyModule:
    r = homology_retraction(M.complex)
    x_h = r.project @ (M.x_action @ r.include)
    if not (x_h @ x_h).is_zero():
        raise ComplexError("induced X action does not square to zero")
    return HomologyModule(r.include.ncols, x_h, r)


def is_free_over_X(dim: int, x_on_H: F2Matrix) -> bool:
    """Freeness over the local ring F2[X]/(X^2), by the Nakayama count."""
    if x_on_H.shape != (dim, dim):
        raise ValueError("action has the wrong size")
    if not (x_on_H @ x_on_H).is_zero():
        raise ComplexError("X action does not square to zero")
    return 2 * x_on_H.rank() == dim


def is_free_over_WX(dim: int, w_on_H: F2Matrix, x_on_H: F2Matrix) -> bool:
    """Freeness over F2[W, X]/(W^2, X^2): ``dim H == 4 dim H/(WH + XH)``."""
    for m in (w_on_H, x_on_H):
        if m.shape != (dim, dim):
            raise ValueError("action has the wrong size")
        if not (m @ m).is_zero():
            raise ComplexError("action does not square to zero")
    if w_on_H @ x_on_H != x_on_H @ w_on_H:
        raise ComplexError("W and X actions do not commute")
    image = w_on_H.hstack(x_on_H).rank()
    return dim == 4 * (dim - image)


# ---------------------------------------------------------------------------
# complexes over F2[t, t^-1]


@dataclass(frozen=True, eq=False)
class LaurentComplex:
    """A free differential module over F2[t, t^-1]."""

    differential: PolyMatrix

    def __post_init__(self):
        d = self.differential
        if d.nrows != d.ncols:
            raise ComplexError("differential must be square")
        if not (d @ d).is_zero():
            raise ComplexError("differential does not square to zero")

    @property
    def rank(self) -> int:
        return self.differential.nrows


@dataclass(frozen=True)
class TwoStepDecomposition:
    """A basis in which the differential is a sum of ``b -> q(t) c`` pieces.

    ``basis_change`` has the new basis vectors as columns (in old
    coordinates); ``basis_change_inv`` is its inverse.
    """

    basis_change: PolyMatrix
    basis_change_inv: PolyMatrix
    pairs: tuple[tuple[int, int, LaurentPoly], ...]
    free_indices: tuple[int, ...]

    def normal_form(self) -> PolyMatrix:
        n = self.basis_change.nrows
        rows = [[LaurentPoly.zero()] * n for _ in range(n)]
        for b, c, q in self.pairs:
            rows[c][b] = q
        return PolyMatrix(rows, n, n)

    @property
    def torsion(self) -> list[LaurentPoly]:
        return [q for _, _, q in self.pairs if not q.is_unit()]


def decompose_two_step(C: LaurentComplex) -> TwoStepDecomposition:
    """Split off the kernel as a free summand, then Smith-reduce the rest."""
    d = C.differential
    n = C.rank
    snf = smith_normal_form(d)
    r = len(snf.invariant_factors)
    V, Vi = snf.V, snf.V_inv
    # columns r.. of V span ker d; the first r columns span a complement
    conj = Vi @ d @ V
    kern = list(range(r, n))
    comp = list(range(r))
    A = conj.submatrix(kern, comp)
    if not conj.submatrix(comp, list(range(n))).is_zero() or not conj.submatrix(kern, kern).is_zero():
        raise ComplexError("kernel splitting failed")
    inner = smith_normal_form(A)
    S, Si, Tm, Ti = inner.U, inner.U_inv, inner.V, inner.V_inv
    # new basis: x' = x * S^-1 (kernel part), y' = y * T (complement part)
    k = len(kern)
    block = [[LaurentPoly.zero()] * n for _ in range(n)]
    block_inv = [[LaurentPoly.zero()] * n for _ in range(n)]
    for a in range(r):
        for b in range(r):
            block[a][b] = Tm[a, b]
            block_inv[a][b] = Ti[a, b]
    for a in range(k):
        for b in range(k):
            block[r + a][r + b] = Si[a, b]
            block_inv[r + a][r + b] = S[a, b]
    P = V @ PolyMatrix(block, n, n)
    Pi = PolyMatrix(block_inv, n, n) @ Vi
    diag = inner.D.diagonal()
    pairs = []
    used = set()
    for i, q in enumerate(diag):
        if q:
            pairs.append((i, r + i, q))
            used.update((i, r + i))
    free = tuple(j for j in range(n) if j not in used)
    dec = TwoStepDecomposition(P, Pi, tuple(pairs), free)
    if Pi @ d @ P != dec.normal_form():
        raise ComplexError("two-step decomposition does not reproduce the differential")
    return dec


def universal_coefficients_check(C: LaurentComplex) -> bool:
    """Compare ``dim H(C at t=1)`` with ``dim H(C) ⊗ F2 + dim Tor(H(C), F2)``."""
    d1 = C.differential.at_one()
    lhs = C.rank - 2 * d1.rank()
    dec = decompose_two_step(C)
    tensor = len(dec.free_indices) + sum(1 for _, _, q in dec.pairs if q.at_one() == 0)
    tor = sum(1 for _, _, q in dec.pairs if q.at_one() == 0)
    return lhs == tensor + tor


def laurent_homology_summary(C: LaurentComplex) -> tuple[int, list[LaurentPoly]]:
    """Free rank and nonunit invariant factors of ``H(C)``, via Smith form."""
    inv = smith_normal_form(C.differential).invariant_factors
    return C.rank - 2 * len(inv), [q for q in inv if not q.is_unit()]
