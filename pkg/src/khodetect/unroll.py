"""Unrolled complexes of A-infinity modules over F2[X]/(X^2).

The unrolling of ``M`` is ``M ⊗ F2[Y^-1, Y]]`` with differential
``D(Y) = sum_j m_j Y^j``.  Everything here works with the finite polynomial
matrix ``D``: ranks over F2(Y) give the homology dimension, and the Y-adic
filtration gives the spectral sequence whose d1 is the X action.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ainf import AinfModuleX, AinfMorphismX, check_morphism, check_relations
from .f2 import F2Matrix, kernel_vectors, rank_of
from .poly import LaurentPoly, PolyMatrix, rational_rank, smith_normal_form


class UnrollError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class UnrolledDifferential:
    """``matrix / denominator``; the denominator is 1 unless ops are periodic."""

    dim: int
    matrix: PolyMatrix
    denominator: LaurentPoly = LaurentPoly.one()

    def to_string(self) -> str:
        rows = []
        for i in range(self.dim):
            rows.append("[" + ", ".join(self.matrix[i, j].to_string("Y")
                                        for j in range(self.dim)) + "]")
        return "\n".join(rows)


def unroll_module(M: AinfModuleX, check: bool = True) -> UnrolledDifferential:
    if check and check_relations(M):
        raise UnrollError("module violates the A-infinity relations")
    D, den = M.series()
    if check and not (D @ D).is_zero():
        raise UnrollError("unrolled differential does not square to zero")
    return UnrolledDifferential(M.dim, D, den)


def _graded_rank(M: AinfModuleX) -> int:
    """F2(Y)-rank of ``D`` for a bigraded module.

    With ``m_j`` of bidegree ``(1-j, -2j)``, conjugating by ``diag(Y^{-q/2})``
    turns ``D(Y)`` into ``Y``-free ``sum_j m_j``, whose rank splits over
    the blocks of constant ``2h - q``.
    """
    total = F2Matrix.zeros(M.dim)
    for m in M.ops:
        total = total + m
    cols = total.columns()
    groups: dict[int, list[int]] = {}
    for s, (h, q) in enumerate(M.grading):
        groups.setdefault(2 * h - q, []).append(cols[s])
    return sum(rank_of(g) for g in groups.values())


def unrolled_rank(M: AinfModuleX, method: str = "auto") -> int:
    """Rank of the unrolled differential over F2(Y)."""
    if method == "auto":
        method = "graded" if M.grading is not None else "rational"
    if method == "graded":
        if M.grading is None:
            raise ValueError("graded method needs a bigraded module")
        return _graded_rank(M)
    if method == "rational":
        return rational_rank(M.series()[0])
    raise ValueError(f"unknown method {method!r}")


def unrolled_homology_dim(M: AinfModuleX, method: str = "auto") -> int:
    return M.dim - 2 * unrolled_rank(M, method)


def is_unrolled_acyclic(M: AinfModuleX, method: str = "auto") -> bool:
    return unrolled_homology_dim(M, method) == 0


def unroll_morphism_series(f: AinfMorphismX, check: bool = True):
    """``(N, den)`` with ``F(Y) = N / den``; checks ``F D_s = D_t F``."""
    if check and check_morphism(f):
        raise UnrollError("not an A-infinity morphism")
    F, dF = f.series()
    if check:
        Ds, ds = f.source.series()
        Dt, dt = f.target.series()
        if (F @ Ds).scale(dt) != (Dt @ F).scale(ds):
            raise UnrollError("unrolled map is not a chain map")
    return F, dF


def unroll_morphism(f: AinfMorphismX, check: bool = True) -> PolyMatrix:
    """``F(Y) = sum_j f_j Y^j`` for a morphism with finitely many components."""
    if not (f.is_finite and f.source.is_finite and f.target.is_finite):
        raise UnrollError("infinite data unrolls to a rational matrix; "
                          "use unroll_morphism_series")
    return unroll_morphism_series(f, check)[0]


# ---------------------------------------------------------------------------
# the Y-adic spectral sequence


@dataclass(frozen=True)
class SpectralPageRanks:
    """``ranks[r]`` is the rank of ``d_r``; ``dims[r]`` is ``dim E_r``."""

    ranks: tuple[int, ...]
    dims: tuple[int, ...]

    def nonzero(self) -> dict[int, int]:
        return {r: k for r, k in enumerate(self.ranks) if k}

    @property
    def limit_dim(self) -> int:
        return self.dims[-1]

    def __eq__(self, other):
        if not isinstance(other, SpectralPageRanks):
            return NotImplemented
        return self.nonzero() == other.nonzero() and self.limit_dim == other.limit_dim

    def __hash__(self):
        return hash((tuple(sorted(self.nonzero().items())), self.limit_dim))


def _toeplitz_columns(M: AinfModuleX, r: int) -> list[int]:
    """Columns of the map ``(x_0..x_{r-1}) -> (sum_{j<=t} m_j x_{t-j})_{t<r}``."""
    n = M.dim
    op_cols = [M.op(j).columns() for j in range(r) if M._nonzero_at(j)]
    cols = []
    for s in range(r):
        for a in range(n):
            v = 0
            for j, oc in enumerate(op_cols):
                t = s + j
                if t >= r:
                    break
                v |= oc[a] << (t * n)
            cols.append(v)
    return cols


def default_max_page(M: AinfModuleX) -> int:
    """A page after which every differential vanishes.

    ``d_e`` counts invariant factors of ``D`` over F2[[Y]] with valuation
    ``e``; each such valuation is at most ``rank * deg D``.
    """
    N = M.series()[0]
    if N.is_zero():
        return 1
    deg = max((N[i, j].degree for i in range(M.dim) for j in range(M.dim) if N[i, j]),
              default=0)
    return max(1, unrolled_rank(M) * max(deg, 1)) + 1


def spectral_page_ranks(M: AinfModuleX, max_page: int | None = None,
                        stop_early: bool = True) -> SpectralPageRanks:
    """Ranks of ``d_0, d_1, ...`` by iterated linear algebra.

    ``E_r = Z_r / B_r`` where ``Z_r`` is the space of leading coefficients
    ``x_0`` of chains with ``D x = 0 mod Y^r`` and ``B_r`` collects the
    ``Y^k`` coefficients (``k < r``) of ``D z`` for ``D z = 0 mod Y^k``.
    """
    n = M.dim
    if max_page is None:
        max_page = default_max_page(M)
    limit = M.dim - 2 * unrolled_rank(M) if stop_early else None
    mask = (1 << n) - 1
    dims = [n]
    boundary: dict[int, int] = {}
    r = 0
    prev_ker: list[int] = []
    while r < max_page:
        # kernel of the truncated system with r+1 unknown coefficients
        r += 1
        cols = _toeplitz_columns(M, r)
        ker = kernel_vectors(cols, len(cols))
        z = rank_of(v & mask for v in ker)
        # boundaries contributed at stage k = r - 1
        k = r - 1
        if k == 0:
            new = M.op(0).columns()
        else:
            new = []
            for v in prev_ker:
                out = 0
                for j in range(1, k + 1):
                    if not M._nonzero_at(j):
                        break
                    block = (v >> ((k - j) * n)) & mask
                    if block:
                        out ^= M.op(j).apply(block)
                new.append(out)
            new.extend(M.op(0).columns())
        prev_ker = ker
        for v in new:
            while v:
                low = v & -v
                b = boundary.get(low)
                if b is None:
                    boundary[low] = v
                    break
                v ^= b
        dims.append(z - len(boundary))
        if limit is not None and dims[-1] == limit:
            break
    ranks = []
    for a, b in zip(dims, dims[1:]):
        if (a - b) % 2:
            raise UnrollError("page dimensions changed by an odd amount")
        ranks.append((a - b) // 2)
    return SpectralPageRanks(tuple(ranks), tuple(dims))


def _valuation_at_one(p: LaurentPoly) -> int:
    one_plus_t = LaurentPoly.from_exponents([0, 1])
    v = 0
    while p.at_one() == 0:
        p = p.exact_div(one_plus_t)
        v += 1
    return v


def spectral_page_ranks_snf(M: AinfModuleX) -> SpectralPageRanks:
    """Same invariants from the Smith form of ``D(1 + t)`` over F2[t, t^-1].

    Localizing at ``t = 1`` identifies F2[t, t^-1] with a subring of F2[[Y]],
    so ``d_e`` has rank equal to the number of invariant factors with
    (1+t)-adic valuation ``e``.
    """
    n = M.dim
    if M.series()[0].is_zero():
        return SpectralPageRanks((), (n,))
    y = LaurentPoly.from_exponents([0, 1])
    N = M.series()[0]
    top = max((N[i, j].degree for i in range(n) for j in range(n) if N[i, j]), default=0)
    D = PolyMatrix.zeros(n)
    for e in range(top + 1):
        D = D + PolyMatrix.from_f2(N.coefficient_matrix(e)).scale(y ** e)
    vals = [_valuation_at_one(p) for p in smith_normal_form(D).invariant_factors]
    top = max(vals, default=0)
    ranks = [sum(1 for v in vals if v == e) for e in range(top + 1)]
    dims = [n]
    for k in ranks:
        dims.append(dims[-1] - 2 * k)
    return SpectralPageRanks(tuple(ranks), tuple(dims))
