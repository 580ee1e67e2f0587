"""From complexes over F2[t, t^-1] to A-infinity modules over F2[X]/(X^2).

Setting ``t = 1`` and recording the Hasse derivatives of the differential
as higher operations gives the t=1 module.  Its quasi-isomorphism type is
pinned down by the Smith form of the differential, and it agrees with the
Koszul-dual Tor model; both statements are checked here numerically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .ainf import (AinfModuleX, AinfMorphismX, check_relations,
                   transfer_to_homology)
from .f2 import F2Matrix
from .homalg import LaurentComplex, decompose_two_step
from .poly import LaurentPoly, PolyMatrix, hasse_derivative, smith_normal_form
from .unroll import spectral_page_ranks, spectral_page_ranks_snf, unrolled_homology_dim

ONE_PLUS_T = LaurentPoly.from_exponents([0, 1])


def _require_polynomial(m: PolyMatrix, what: str):
    for i in range(m.nrows):
        for j in range(m.ncols):
            e = m[i, j]
            if e and e.valuation < 0:
                raise ValueError(
                    f"{what} has negative powers of t; its Hasse derivatives never "
                    "vanish at t=1, so rewrite it in a polynomial basis first")


def _max_degree(m: PolyMatrix) -> int:
    return max((m[i, j].degree for i in range(m.nrows) for j in range(m.ncols)
                if m[i, j]), default=0)


def _hasse_ops(m: PolyMatrix) -> list[F2Matrix]:
    return [m.hasse(n).at_one() for n in range(_max_degree(m) + 1)]


def t_one_module(C: LaurentComplex) -> AinfModuleX:
    """``ops_n = (D^n d)|_{t=1}`` for a differential with polynomial entries."""
    _require_polynomial(C.differential, "differential")
    M = AinfModuleX(C.rank, _hasse_ops(C.differential))
    bad = check_relations(M)
    if bad:
        raise ArithmeticError(f"t=1 module violates relations: {bad[0]}")
    return M


def t_one_morphism(f: PolyMatrix, C: LaurentComplex, E: LaurentComplex) -> AinfMorphismX:
    if f.shape != (E.rank, C.rank):
        raise ValueError("map has the wrong shape")
    if f @ C.differential != E.differential @ f:
        raise ValueError("not a chain map")
    _require_polynomial(f, "map")
    return AinfMorphismX(t_one_module(C), t_one_module(E), tuple(_hasse_ops(f)))


# ---------------------------------------------------------------------------
# canonical form


@dataclass(frozen=True)
class CanonicalForm:
    free_rank: int
    torsion_polys: tuple[LaurentPoly, ...]

    @property
    def vanishing_at_one(self) -> tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.torsion_polys) if p.at_one() == 0)

    @property
    def nonvanishing_at_one(self) -> tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.torsion_polys) if p.at_one() == 1)


def canonical_form(C: LaurentComplex) -> CanonicalForm:
    inv = smith_normal_form(C.differential).invariant_factors
    return CanonicalForm(C.rank - 2 * len(inv),
                         tuple(p for p in inv if not p.is_unit()))


def build_canonical_module(cf: CanonicalForm) -> AinfModuleX:
    """``F2^m`` plus a pair ``z_i, w_i`` for each ``p_i`` with ``p_i(1) = 0``.

    Basis order: the ``m`` free generators, then ``z_1, w_1, z_2, w_2, ...``.
    """
    polys = [cf.torsion_polys[i] for i in cf.vanishing_at_one]
    for p in polys:
        if p.valuation < 0:
            raise ValueError("torsion polynomial must be normalized")
    dim = cf.free_rank + 2 * len(polys)
    top = max((p.degree for p in polys), default=0)
    ops = []
    for n in range(top + 1):
        entries = []
        for k, p in enumerate(polys):
            if hasse_derivative(p, n).at_one():
                z = cf.free_rank + 2 * k
                entries.append((z + 1, z))
        ops.append(F2Matrix.from_entries(dim, dim, entries))
    return AinfModuleX(dim, ops)


@dataclass
class Report:
    ok: bool = True
    failures: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def fail(self, msg: str):
        self.ok = False
        self.failures.append(msg)

    def merge(self, other: "Report", prefix: str = ""):
        if not other.ok:
            self.ok = False
            self.failures.extend(prefix + f for f in other.failures)


def verify_twist_theorem(C: LaurentComplex, rng=None) -> Report:
    rep = Report()
    cf = canonical_form(C)
    M = t_one_module(C)
    M1, _ = transfer_to_homology(M, rng)
    M2 = build_canonical_module(cf)
    for name, X in (("transferred", M1), ("canonical", M2)):
        bad = check_relations(X)
        if bad:
            rep.fail(f"{name} module violates relation {bad[0].index}")
    if M1.dim != M2.dim:
        rep.fail(f"dimensions differ: {M1.dim} vs {M2.dim}")
    u = {"t_one": unrolled_homology_dim(M), "transferred": unrolled_homology_dim(M1),
         "canonical": unrolled_homology_dim(M2)}
    if set(u.values()) != {cf.free_rank}:
        rep.fail(f"unrolled dims {u} differ from free rank {cf.free_rank}")
    s1, s2 = spectral_page_ranks(M1), spectral_page_ranks(M2)
    if s1 != s2:
        rep.fail(f"page ranks differ: {s1.nonzero()} vs {s2.nonzero()}")
    s0 = spectral_page_ranks_snf(M)
    pages = {r: k for r, k in s0.nonzero().items() if r > 0}
    if pages != s1.nonzero():
        rep.fail(f"Smith-form pages {pages} differ from {s1.nonzero()}")
    rep.details.update(free_rank=cf.free_rank, dim=M1.dim, pages=s1.nonzero())
    return rep


# ---------------------------------------------------------------------------
# Koszul Tor model


@dataclass(frozen=True)
class KoszulMorphismData:
    p: LaurentPoly
    q: tuple[LaurentPoly, ...]   # q[0] is q_1; the terminating zero is omitted


def koszul_morphism(p: LaurentPoly) -> KoszulMorphismData:
    """``q_1 = p / (1 - t)``, ``q_{n+1} = (q_n(1) - q_n(t)) / (1 - t)``."""
    p = LaurentPoly.coerce(p)
    if p.at_one() != 0:
        raise ValueError("p(1) must vanish")
    if p.valuation < 0:
        raise ValueError("p must be a polynomial for the sequence to terminate")
    qs = []
    q = p.exact_div(ONE_PLUS_T)
    while q:
        qs.append(q)
        q = (q + LaurentPoly.coerce(q.at_one())).exact_div(ONE_PLUS_T)
    for n, qn in enumerate(qs, start=1):
        if qn.at_one() != hasse_derivative(p, n).at_one():
            raise ArithmeticError(f"q_{n}(1) differs from the Hasse derivative")
    if hasse_derivative(p, len(qs) + 1).at_one():
        raise ArithmeticError("Hasse derivative survives past the q sequence")
    return KoszulMorphismData(p, tuple(qs))


def koszul_total_complex(d: PolyMatrix) -> tuple[PolyMatrix, PolyMatrix]:
    """``E = C ⊗ F2[X]/(X^2)`` with ``d_E(y) = d y + (1 - t) X y``.

    Basis: ``y_0..y_{n-1}, X y_0..X y_{n-1}``.  Returns ``(d_E, X)``.
    """
    n = d.nrows
    zero = LaurentPoly.zero()
    rows = [[zero] * (2 * n) for _ in range(2 * n)]
    xrows = [[zero] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            rows[i][j] = d[i, j]
            rows[n + i][n + j] = d[i, j]
        rows[n + i][i] = ONE_PLUS_T
        xrows[n + i][i] = LaurentPoly.one()
    return PolyMatrix(rows, 2 * n, 2 * n), PolyMatrix(xrows, 2 * n, 2 * n)


class TorsionHomology:
    """Membership tests in ``H(E)`` for a differential over F2[t, t^-1]."""

    def __init__(self, d: PolyMatrix):
        self.d = d
        self.snf = smith_normal_form(d)
        self.factors = self.snf.invariant_factors
        self.free_rank = d.nrows - 2 * len(self.factors)

    @property
    def f2_dim(self) -> int | None:
        """Dimension over F2, or ``None`` when ``H`` has a free part."""
        if self.free_rank:
            return None
        return sum(p.span for p in self.factors)

    def is_boundary(self, v: list[LaurentPoly]) -> bool:
        U = self.snf.U
        n = self.d.nrows
        r = len(self.factors)
        for i in range(n):
            c = LaurentPoly.zero()
            for k in range(n):
                if v[k]:
                    c = c + U[i, k] * v[k]
            if i < r:
                if c and not self.factors[i].divides(c):
                    return False
            elif c:
                return False
        return True

    def is_cycle(self, v: list[LaurentPoly]) -> bool:
        n = self.d.nrows
        for i in range(n):
            c = LaurentPoly.zero()
            for k in range(n):
                if v[k] and self.d[i, k]:
                    c = c + self.d[i, k] * v[k]
            if c:
                return False
        return True


def _injective_on_homology(H: TorsionHomology, cols: list[list[LaurentPoly]]) -> bool:
    for mask in product((0, 1), repeat=len(cols)):
        if not any(mask):
            continue
        v = [LaurentPoly.zero()] * H.d.nrows
        for use, c in zip(mask, cols):
            if use:
                v = [a + b for a, b in zip(v, c)]
        if H.is_boundary(v):
            return False
    return True


def _summand_report(p: LaurentPoly | None) -> Report:
    """Check one two-step summand ``b -> p c`` (or a free generator if ``p`` is None)."""
    rep = Report()
    zero, one = LaurentPoly.zero(), LaurentPoly.one()
    if p is None:
        d = PolyMatrix([[zero]], 1, 1)
    else:
        d = PolyMatrix([[zero, zero], [p, zero]], 2, 2)
    dE, xE = koszul_total_complex(d)
    HE = TorsionHomology(dE)
    S = t_one_module(LaurentComplex(d))
    src_dim = S.dim - 2 * S.op(0).rank()
    if HE.f2_dim != src_dim:
        rep.fail(f"homology dims differ: t=1 side {src_dim}, Tor side {HE.f2_dim}")
        return rep
    if p is not None and p.at_one() == 1:
        return rep
    n = d.nrows
    if p is None:
        f = [PolyMatrix([[zero], [one]], 2, 1)]
    else:
        data = koszul_morphism(p)
        q = list(data.q)
        # columns b, c; rows b, c, Xb, Xc
        f = [PolyMatrix([[zero, zero], [q[0], zero], [one, zero], [zero, one]], 4, 2)]
        for k in range(1, len(q)):
            f.append(PolyMatrix([[zero, zero], [q[k], zero], [zero, zero], [zero, zero]], 4, 2))
    ops = [PolyMatrix.from_f2(m) for m in S.ops]
    top = len(f) + len(ops) + 1
    for k in range(top):
        acc = PolyMatrix.zeros(2 * n, n)
        if k < len(f):
            acc = acc + dE @ f[k]
        if 0 <= k - 1 < len(f):
            acc = acc + xE @ f[k - 1]
        for i in range(k + 1):
            if i < len(f) and k - i < len(ops):
                acc = acc + f[i] @ ops[k - i]
        if not acc.is_zero():
            rep.fail(f"morphism relation {k} fails for p = {p}")
    cols = [[f[0][i, j] for i in range(2 * n)] for j in range(n)]
    if not all(HE.is_cycle(c) for c in cols):
        rep.fail("f_1 does not land in cycles")
    elif not _injective_on_homology(HE, cols):
        rep.fail("f_1 is not injective on homology")
    return rep


def verify_koszul(C: LaurentComplex) -> Report:
    rep = Report()
    dec = decompose_two_step(C)
    for _, _, q in dec.pairs:
        rep.merge(_summand_report(q), prefix=f"[{q}] ")
    for _ in dec.free_indices:
        rep.merge(_summand_report(None), prefix="[free] ")
    # the whole complex at once
    d1 = C.differential.at_one()
    t_one_dim = C.rank - 2 * d1.rank()
    dE, _ = koszul_total_complex(C.differential)
    tor_dim = TorsionHomology(dE).f2_dim
    if tor_dim != t_one_dim:
        rep.fail(f"total homology dims differ: {t_one_dim} vs {tor_dim}")
    rep.details.update(t_one_dim=t_one_dim, tor_dim=tor_dim,
                       pairs=len(dec.pairs), free=len(dec.free_indices))
    return rep
