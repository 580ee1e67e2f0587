"""The cube of resolutions and the Khovanov complex over F2.

Vertices are bitmasks (bit ``c`` is the smoothing at crossing ``c``).  The
0-smoothing of ``(i, j, k, l)`` joins ``i`` with ``j`` and ``k`` with ``l``;
the 1-smoothing joins ``i`` with ``l`` and ``j`` with ``k``.  A generator at
a vertex is a labeling of its circles by ``1`` or ``X``, stored as a
bitmask whose bit ``s`` is set when circle ``s`` carries ``X``.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ..f2 import F2Matrix, iter_bits
from ..homalg import DGModuleX, F2Complex
from .pd import PDCode, PDError


@dataclass(frozen=True)
class Resolution:
    vertex: int
    circles: tuple[tuple[int, ...], ...]
    edge_to_circle: dict

    @property
    def n_circles(self) -> int:
        return len(self.circles)


def resolve(pd: PDCode, v: int) -> Resolution:
    """Circles of the complete resolution at vertex ``v``, ordered by minimal edge."""
    parent = {e: e for e in pd.edges}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for c, (i, j, k, l) in enumerate(pd.crossings):
        if (v >> c) & 1:
            union(i, l)
            union(j, k)
        else:
            union(i, j)
            union(k, l)
    groups: dict[int, list[int]] = {}
    for e in pd.edges:
        groups.setdefault(find(e), []).append(e)
    circles = tuple(sorted(tuple(g) for g in groups.values()))
    e2c = {e: s for s, g in enumerate(circles) for e in g}
    return Resolution(v, circles, e2c)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("KHODETECT_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True, eq=False)
class KhovanovComplex:
    """Unreduced complex with the basepoint actions ``W`` (at ``p``) and ``X`` (at ``q``)."""

    pd: PDCode
    p: int
    q: int
    resolutions: tuple[Resolution, ...]
    offsets: tuple[int, ...]
    generators: tuple[tuple[int, int], ...]   # (vertex, label mask)
    grading: tuple[tuple[int, int], ...]
    differential: F2Matrix
    w_action: F2Matrix
    x_action: F2Matrix

    @property
    def dim(self) -> int:
        return len(self.generators)

    def index(self, v: int, label: int) -> int:
        return self.offsets[v] + label

    def complex(self) -> F2Complex:
        return F2Complex(self.differential, self.grading)

    def dg_module(self, action: str = "x") -> DGModuleX:
        act = self.x_action if action == "x" else self.w_action
        return DGModuleX(self.complex(), act)


def _saddle(r0: Resolution, r1: Resolution, a_edge: int, b_edge: int,
            s1_edge: int, s2_edge: int):
    """Label map of a saddle from ``r0`` to ``r1``.

    The saddle touches the ``r0`` circles through ``a_edge`` and ``b_edge``;
    if these coincide it splits into the ``r1`` circles through ``s1_edge``
    and ``s2_edge``.
    """
    img = [r1.edge_to_circle[g[0]] for g in r0.circles]
    a, b = r0.edge_to_circle[a_edge], r0.edge_to_circle[b_edge]
    if a != b:
        # merge: circles a and b have the same image
        def f(label):
            if (label >> a) & 1 and (label >> b) & 1:
                return []
            out = 0
            for s in range(len(img)):
                if (label >> s) & 1:
                    out |= 1 << img[s]
            return [out]
        return f
    s1, s2 = r1.edge_to_circle[s1_edge], r1.edge_to_circle[s2_edge]

    def f(label):
        out = 0
        for s in range(len(img)):
            if s != a and (label >> s) & 1:
                out |= 1 << img[s]
        if (label >> a) & 1:
            return [out | (1 << s1) | (1 << s2)]
        return [out | (1 << s1), out | (1 << s2)]
    return f


def _edge_map(pd: PDCode, r0: Resolution, r1: Resolution, c: int):
    """Label map for the cube edge flipping crossing ``c`` from 0 to 1."""
    i, j, k, _ = pd.crossings[c]
    return _saddle(r0, r1, i, k, i, j)


def _backward_map(pd: PDCode, r1: Resolution, r0: Resolution, c: int):
    """The same saddle run from the 1-smoothing back to the 0-smoothing."""
    i, j, k, _ = pd.crossings[c]
    return _saddle(r1, r0, i, j, i, k)


def _act(res: Resolution, edge: int, label: int):
    s = res.edge_to_circle[edge]
    return None if (label >> s) & 1 else label | (1 << s)


def build_complex(pd: PDCode, p: int, q: int, check: bool = True) -> KhovanovComplex:
    for name, e in (("p", p), ("q", q)):
        if not 1 <= e <= pd.n_edges:
            raise PDError(f"{name}={e} is not an edge of the diagram", "basepoints")
    n = pd.n_crossings
    nv = 1 << n
    with ThreadPoolExecutor(_threads()) as ex:
        resolutions = tuple(ex.map(lambda v: resolve(pd, v), range(nv)))
    offsets, gens, grading = [], [], []
    n_plus, n_minus = pd.n_plus, pd.n_minus
    total = 0
    for v, res in enumerate(resolutions):
        offsets.append(total)
        nc = res.n_circles
        hv = v.bit_count()
        for label in range(1 << nc):
            x_count = label.bit_count()
            gens.append((v, label))
            grading.append((hv - n_minus, (nc - 2 * x_count) + hv + n_plus - 2 * n_minus))
        total += 1 << nc

    def column_block(v):
        res = resolutions[v]
        entries = []
        for c in range(n):
            if (v >> c) & 1:
                continue
            w = v | (1 << c)
            f = _edge_map(pd, res, resolutions[w], c)
            for label in range(1 << res.n_circles):
                src = offsets[v] + label
                for t in f(label):
                    entries.append((offsets[w] + t, src))
        return entries

    with ThreadPoolExecutor(_threads()) as ex:
        blocks = list(ex.map(column_block, range(nv)))
    entries = [e for b in blocks for e in b]
    d = F2Matrix.from_entries(total, total, entries)
    acts = []
    for edge in (p, q):
        ent = []
        for v, res in enumerate(resolutions):
            for label in range(1 << res.n_circles):
                t = _act(res, edge, label)
                if t is not None:
                    ent.append((offsets[v] + t, offsets[v] + label))
        acts.append(F2Matrix.from_entries(total, total, ent))
    C = KhovanovComplex(pd, p, q, resolutions, tuple(offsets), tuple(gens),
                        tuple(grading), d, acts[0], acts[1])
    if check:
        check_complex(C)
    return C


def check_complex(C: KhovanovComplex) -> None:
    """Raise ``ComplexError`` unless all structural invariants hold."""
    from ..homalg import ComplexError
    F2Complex(C.differential, C.grading)   # d^2 = 0 and degree +1
    w, x, d = C.w_action, C.x_action, C.differential
    for name, m in (("W", w), ("X", x)):
        if not (m @ m).is_zero():
            raise ComplexError(f"{name} does not square to zero")
        if m @ d != d @ m:
            raise ComplexError(f"{name} does not commute with the differential")
        for i, j in m.entries():
            hi, qi = C.grading[i]
            hj, qj = C.grading[j]
            if hi != hj or qi != qj - 2:
                raise ComplexError(f"{name} has the wrong bidegree")
    if w @ x != x @ w:
        raise ComplexError("W and X do not commute")


def restrict(m: F2Matrix, keep: list[int]) -> F2Matrix:
    pos = {s: k for k, s in enumerate(keep)}
    rows = []
    for s in keep:
        r = 0
        for t in iter_bits(m.rows[s]):
            k = pos.get(t)
            if k is not None:
                r |= 1 << k
        rows.append(r)
    return F2Matrix(len(keep), len(keep), rows)


def reduced_indices(C: KhovanovComplex) -> list[int]:
    """Generators whose ``p``-circle is labeled X."""
    return [s for s, (v, label) in enumerate(C.generators)
            if (label >> C.resolutions[v].edge_to_circle[C.p]) & 1]


def reduce_at(C: KhovanovComplex) -> DGModuleX:
    """Reduced complex: generators whose ``p``-circle is labeled X, q shifted up by 1."""
    keep = reduced_indices(C)
    grading = tuple((C.grading[s][0], C.grading[s][1] + 1) for s in keep)
    return DGModuleX(F2Complex(restrict(C.differential, keep), grading),
                     restrict(C.x_action, keep))


def reduce_by_w(C: KhovanovComplex) -> tuple[DGModuleX, list[int]]:
    """The quotient ``C / W C`` with q shifted down by 1.

    Returns the module and the generator indices (label 1 on the ``p``
    circle) that form its basis.
    """
    keep = [s for s, (v, label) in enumerate(C.generators)
            if not (label >> C.resolutions[v].edge_to_circle[C.p]) & 1]
    grading = tuple((C.grading[s][0], C.grading[s][1] - 1) for s in keep)
    # W C is spanned by generators, so the quotient is the block on the rest
    return DGModuleX(F2Complex(restrict(C.differential, keep), grading),
                     restrict(C.x_action, keep)), keep


def w_reduction_matches(C: KhovanovComplex) -> bool:
    """Relabeling the ``p``-circle from 1 to X identifies ``C / W C`` with ``reduce_at(C)``.

    Checks that this bijection of generators carries the differential, the
    X action and the bigrading across exactly.
    """
    red = reduce_at(C)
    quo, keep = reduce_by_w(C)
    target = {s: k for k, s in enumerate(reduced_indices(C))}
    perm = []
    for s in keep:
        v, label = C.generators[s]
        bit = 1 << C.resolutions[v].edge_to_circle[C.p]
        perm.append(target[C.offsets[v] + (label | bit)])
    if sorted(perm) != list(range(red.dim)):
        return False
    P = F2Matrix.from_entries(red.dim, quo.dim, [(perm[k], k) for k in range(quo.dim)])
    if P @ quo.differential != red.differential @ P:
        return False
    if P @ quo.x_action != red.x_action @ P:
        return False
    return all(red.complex.grading[perm[k]] == quo.complex.grading[k]
               for k in range(quo.dim))


def backward_differential(C: KhovanovComplex, c0: int) -> F2Matrix:
    """Sum of the reversed saddles over the cube edges at crossing ``c0``."""
    entries = []
    for v, res in enumerate(C.resolutions):
        if not (v >> c0) & 1:
            continue
        u = v & ~(1 << c0)
        f = _backward_map(C.pd, res, C.resolutions[u], c0)
        for label in range(1 << res.n_circles):
            for t in f(label):
                entries.append((C.offsets[u] + t, C.offsets[v] + label))
    return F2Matrix.from_entries(C.dim, C.dim, entries)
