"""Diagram generators: braid closures, disjoint unions, Reidemeister pairs,
and the bundled corpus of named links."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .pd import Diagram, PDCode, make_pd


@dataclass(frozen=True)
class BraidClosure:
    """Closure of a braid word; ``bottom[k]`` is the edge crossing the closure at strand ``k``."""

    pd: PDCode
    word: tuple[int, ...]
    strands: int
    bottom: tuple[int, ...]


def braid_closure(word, strands: int) -> BraidClosure:
    """Closure of a braid word; letter ``±i`` is ``σ_i^{±1}`` acting on strands ``i, i+1``.

    Strands that no letter touches close up into free loops.
    """
    word = tuple(int(a) for a in word)
    for a in word:
        if a == 0 or abs(a) >= strands:
            raise ValueError(f"letter {a} is out of range for {strands} strands")
    cur = list(range(strands))           # raw edge ids at each position
    fresh = strands
    raw = []
    nxt = {}                              # raw edge -> raw edge along the strand
    for a in word:
        i = abs(a) - 1
        x_in, y_in = cur[i], cur[i + 1]
        x_out, y_out = fresh, fresh + 1
        fresh += 2
        # the strand entering at i leaves at i + 1
        if a > 0:
            raw.append((y_in, x_out, y_out, x_in))
        else:
            raw.append((x_in, y_in, x_out, y_out))
        nxt[x_in], nxt[y_in] = x_out, y_out
        cur[i], cur[i + 1] = y_out, x_out
    # close up: the top edge at position k is the bottom edge at position k
    alias = {cur[k]: k for k in range(strands)}
    touched = {e for x in raw for e in x}

    def canon(e):
        return alias.get(e, e)

    raw = [tuple(canon(e) for e in x) for x in raw]
    nxt = {canon(a): canon(b) for a, b in nxt.items()}
    # relabel along components, starting from the lowest bottom edge
    label: dict[int, int] = {}
    count = 0
    for k in range(strands):
        if k in label or (k not in touched and cur[k] == k):
            continue
        e = k
        while e not in label:
            count += 1
            label[e] = count
            e = nxt[e]
    free = [k for k in range(strands) if k not in touched and cur[k] == k]
    crossings = [tuple(label[e] for e in x) for x in raw]
    n_edges = 2 * len(crossings)
    bottom = []
    f = 0
    for k in range(strands):
        if k in label:
            bottom.append(label[k])
        else:
            f += 1
            bottom.append(n_edges + f)
    return BraidClosure(make_pd(crossings, len(free)), word, strands, tuple(bottom))


def random_braid_diagram(rng, max_crossings: int = 7, max_strands: int = 4) -> Diagram:
    """A random braid closure with random basepoints."""
    strands = int(rng.integers(1, max_strands + 1))
    length = int(rng.integers(0, max_crossings + 1)) if strands > 1 else 0
    word = [int(rng.integers(1, strands)) * int(rng.choice([-1, 1])) for _ in range(length)]
    b = braid_closure(word, strands)
    edges = list(b.pd.edges)
    p, q = (int(e) for e in rng.choice(edges, size=2))
    return Diagram(b.pd, p, q, f"braid{tuple(word)}/{strands}")


def disjoint_union(a: PDCode, b: PDCode) -> tuple[PDCode, dict, dict]:
    """Split diagram ``a ⊔ b`` with the edge relabelings of each piece."""
    ca, cb = 2 * a.n_crossings, 2 * b.n_crossings
    total = ca + cb
    ma = {e: e for e in range(1, ca + 1)}
    mb = {e: e + ca for e in range(1, cb + 1)}
    for k, e in enumerate(a.free_loop_edges()):
        ma[e] = total + 1 + k
    for k, e in enumerate(b.free_loop_edges()):
        mb[e] = total + a.free_loops + 1 + k
    crossings = [tuple(ma[e] for e in x) for x in a.crossings]
    crossings += [tuple(mb[e] for e in x) for x in b.crossings]
    signs = list(a.signs) + list(b.signs)
    return make_pd(crossings, a.free_loops + b.free_loops, signs), ma, mb


def random_split_union(rng, max_crossings: int = 4) -> Diagram:
    """``L1 ⊔ L2`` with ``p`` on the first piece and ``q`` on the second."""
    d1 = random_braid_diagram(rng, max_crossings, 3)
    d2 = random_braid_diagram(rng, max_crossings, 3)
    pd, m1, m2 = disjoint_union(d1.pd, d2.pd)
    return Diagram(pd, m1[d1.p], m2[d2.q], f"{d1.name} + {d2.name}")


@dataclass(frozen=True)
class ReidemeisterPair:
    move: str
    before: Diagram
    after: Diagram


def reidemeister_pair(word, strands: int, move: str, i: int = 1, sign: int = 1,
                      p_strand: int = 0, q_strand: int = 0) -> ReidemeisterPair:
    """Two closures related by one Reidemeister move at the top of the braid.

    Basepoints sit on closure arcs, away from the move.
    """
    word = list(word)
    if move == "R1":
        w0, n0 = word, strands
        w1, n1 = word + [sign * strands], strands + 1
    elif move == "R2":
        w0, n0 = word, strands
        w1, n1 = word + [sign * i, -sign * i], strands
    elif move == "R3":
        w0, n0 = word + [sign * i, sign * (i + 1), sign * i], strands
        w1, n1 = word + [sign * (i + 1), sign * i, sign * (i + 1)], strands
    else:
        raise ValueError(f"unknown move {move!r}")
    b0, b1 = braid_closure(w0, n0), braid_closure(w1, n1)
    d0 = Diagram(b0.pd, b0.bottom[p_strand], b0.bottom[q_strand], f"{w0}/{n0}")
    d1 = Diagram(b1.pd, b1.bottom[p_strand], b1.bottom[q_strand], f"{w1}/{n1}")
    return ReidemeisterPair(move, d0, d1)


def random_reidemeister_pair(rng, max_crossings: int = 5) -> ReidemeisterPair:
    strands = int(rng.integers(2, 4))
    length = int(rng.integers(0, max_crossings + 1))
    word = [int(rng.integers(1, strands)) * int(rng.choice([-1, 1])) for _ in range(length)]
    move = str(rng.choice(["R1", "R2", "R3"]))
    if move == "R3" and strands < 3:
        strands = 3
    i = int(rng.integers(1, strands - (1 if move == "R3" else 0)))
    p, q = (int(k) for k in rng.integers(0, strands, size=2))
    return reidemeister_pair(word, strands, move, i, int(rng.choice([-1, 1])), p, q)


def load_corpus() -> dict[str, Diagram]:
    """Named diagrams bundled with the package."""
    text = resources.files("khodetect.data").joinpath("corpus.json").read_text()
    out = {}
    for name, entry in json.loads(text).items():
        bp = entry.get("basepoints", {"p": 1, "q": 1})
        pd = make_pd(entry["pd"], entry.get("free_loops", 0), entry.get("signs"))
        out[name] = Diagram(pd, bp["p"], bp["q"], name)
    return out


def corpus_table(name: str) -> dict | None:
    """Expected reduced homology table for a corpus entry, when recorded."""
    text = resources.files("khodetect.data").joinpath("corpus.json").read_text()
    entry = json.loads(text)[name]
    if "reduced_homology" not in entry:
        return None
    return {(r["h"], r["q"]): r["dim"] for r in entry["reduced_homology"]}


def rng_diagrams(seed, count: int, max_crossings: int = 7):
    rng = np.random.default_rng(seed)
    return [random_braid_diagram(rng, max_crossings) for _ in range(count)]
