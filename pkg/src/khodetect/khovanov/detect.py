"""Homology as a module, split detection and basepoint moves."""

from __future__ import annotations

from dataclasses import dataclass

from ..ainf import AinfModuleX, AinfMorphismX, check_morphism, promote, transfer_to_homology
from ..f2 import F2Matrix
from ..homalg import (DGModuleX, F2Complex, HomologyModule, homology_module,
                      is_free_over_WX, is_free_over_X)
from ..unroll import is_unrolled_acyclic, unrolled_homology_dim
from .cube import (KhovanovComplex, backward_differential, build_complex, reduce_at,
                   reduced_indices, restrict)
from .pd import PDCode, PDError


class InconsistencyError(RuntimeError):
    """Two routes that must agree did not.  Always a bug."""


def _table(H: HomologyModule) -> dict[tuple[int, int], int]:
    out: dict[tuple[int, int], int] = {}
    for g in H.degrees:
        out[g] = out.get(g, 0) + 1
    return out


def mirror_table(table: dict) -> dict:
    return {(-h, -q): d for (h, q), d in table.items()}


@dataclass(frozen=True, eq=False)
class KhovanovHomology:
    """Reduced homology with its X action, unreduced homology with W and X."""

    complex: KhovanovComplex
    reduced_module: DGModuleX
    reduced: HomologyModule
    unreduced: HomologyModule
    w_on_unreduced: F2Matrix
    transferred: AinfModuleX | None = None
    inclusion: AinfMorphismX | None = None

    @property
    def reduced_table(self) -> dict[tuple[int, int], int]:
        return _table(self.reduced)

    @property
    def unreduced_table(self) -> dict[tuple[int, int], int]:
        return _table(self.unreduced)

    @property
    def x_on_H(self) -> F2Matrix:
        return self.reduced.x_on_H

    @property
    def x_on_unreduced(self) -> F2Matrix:
        return self.unreduced.x_on_H


def homology_with_module(pd: PDCode, p: int, q: int, transfer: bool = True,
                         rng=None) -> KhovanovHomology:
    C = build_complex(pd, p, q)
    red = reduce_at(C)
    H = homology_module(red)
    U = homology_module(C.dg_module("x"))
    r = U.retraction
    w_h = r.project @ (C.w_action @ r.include)
    Hm = incl = None
    if transfer:
        Hm, incl = transfer_to_homology(promote(red), rng)
    return KhovanovHomology(C, red, H, U, w_h, Hm, incl)


@dataclass(frozen=True)
class SplitVerdict:
    free_reduced: bool
    unrolled_acyclic: bool
    free_unreduced_WX: bool
    reduced_table: dict
    x_rank_on_homology: int

    @property
    def verdict(self) -> str:
        return "separated" if self.free_reduced else "not_separated"

    def to_json(self, mirror: bool = False) -> dict:
        table = mirror_table(self.reduced_table) if mirror else self.reduced_table
        return {
            "verdict": self.verdict,
            "free_reduced": self.free_reduced,
            "unrolled_acyclic": self.unrolled_acyclic,
            "free_unreduced_WX": self.free_unreduced_WX,
            "reduced_homology": [{"h": h, "q": qq, "dim": d}
                                 for (h, qq), d in sorted(table.items())],
            "x_rank_on_homology": self.x_rank_on_homology,
        }


def detect_split(pd: PDCode, p: int, q: int) -> SplitVerdict:
    """Decide whether the homology detects a sphere separating ``p`` from ``q``.

    Three independent computations must agree: freeness of reduced homology
    over F2[X]/(X^2), acyclicity of the unrolled reduced complex, and
    freeness of unreduced homology over F2[W, X]/(W^2, X^2).
    """
    kh = homology_with_module(pd, p, q, transfer=False)
    red = kh.reduced_module
    free = is_free_over_X(kh.reduced.dim, kh.x_on_H)
    acyclic = is_unrolled_acyclic(promote(red))
    free_wx = is_free_over_WX(kh.unreduced.dim, kh.w_on_unreduced, kh.x_on_unreduced)
    if not free == acyclic == free_wx:
        raise InconsistencyError(
            f"freeness {free}, unrolled acyclicity {acyclic} and W,X freeness "
            f"{free_wx} disagree")
    return SplitVerdict(free, acyclic, free_wx, kh.reduced_table, kh.x_on_H.rank())


def half_rank_check(pd: PDCode, q: int) -> bool:
    """The X action on unreduced homology has rank exactly half the dimension."""
    C = build_complex(pd, q, q)
    U = homology_module(C.dg_module("x"))
    return 2 * U.x_on_H.rank() == U.dim


def _strand_partners(pd: PDCode, c0: int, edge: int) -> set[int]:
    """Edges opposite ``edge`` at crossing ``c0`` (two of them at a kink)."""
    x = pd.crossings[c0]
    if edge not in x:
        raise PDError(f"edge {edge} does not meet crossing {c0}", "basepoints")
    return {x[(pos + 2) % 4] for pos in range(4) if x[pos] == edge}


def basepoint_move_map(pd: PDCode, c0: int, q_old: int, q_new: int,
                       p: int | None = None) -> AinfMorphismX:
    """The morphism moving the X basepoint across crossing ``c0``.

    Source and target are the reduced complexes at ``p`` with the X action
    at ``q_old`` and ``q_new``.  The components are ``f_0 = 1`` and ``f_1``,
    the saddles at ``c0`` run backwards.
    """
    if not 0 <= c0 < pd.n_crossings:
        raise PDError(f"no crossing {c0}", "crossing")
    if q_new not in _strand_partners(pd, c0, q_old):
        raise PDError(f"edges {q_old} and {q_new} are not opposite at crossing {c0}",
                      "basepoints")
    if p is None:
        p = q_old
    src = build_complex(pd, p, q_old)
    tgt = build_complex(pd, p, q_new)
    keep = reduced_indices(src)
    f1 = restrict(backward_differential(src, c0), keep)
    A = promote(reduce_at(src))
    B = promote(reduce_at(tgt))
    return AinfMorphismX(A, B, (F2Matrix.identity(A.dim), f1))


def move_preserves_invariants(f: AinfMorphismX) -> bool:
    """Morphism relations hold and the unrolled dimensions and X ranks agree."""
    if check_morphism(f):
        return False
    A, B = f.source, f.target
    if unrolled_homology_dim(A) != unrolled_homology_dim(B):
        return False
    ra = _x_rank_on_homology(A)
    return ra == _x_rank_on_homology(B)


def _x_rank_on_homology(M: AinfModuleX) -> int:
    dg = DGModuleX(F2Complex(M.op(0), M.grading), M.op(1))
    return homology_module(dg).x_on_H.rank()
