"""A quick end-to-end property suite, runnable without pytest."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .ainf import check_relations, promote, transfer_to_homology
from .khovanov import (detect_split, half_rank_check, load_corpus, mirror_table,
                       random_braid_diagram, random_split_union, w_reduction_matches,
                       build_complex)
from .khovanov.diagrams import corpus_table, random_reidemeister_pair
from .khovanov.detect import homology_with_module
from .randgen import random_dg_module, random_laurent_complex
from .twist import verify_koszul, verify_twist_theorem
from .unroll import spectral_page_ranks, spectral_page_ranks_snf, unrolled_homology_dim

SPLIT_CORPUS = {"unlink2", "unlink2_r2"}


def _corpus(rng) -> str | None:
    for name, d in load_corpus().items():
        v = detect_split(d.pd, d.p, d.q)
        want = "separated" if name in SPLIT_CORPUS else "not_separated"
        if v.verdict != want:
            return f"{name}: verdict {v.verdict}"
        gold = corpus_table(name)
        if gold is not None and gold not in (v.reduced_table, mirror_table(v.reduced_table)):
            return f"{name}: homology table differs from the recorded one"
    return None


def _random_diagrams(rng) -> str | None:
    for _ in range(100):
        d = random_braid_diagram(rng, 6)
        detect_split(d.pd, d.p, d.q)
        if not half_rank_check(d.pd, d.q):
            return f"{d.name}: X rank is not half the dimension"
        if not w_reduction_matches(build_complex(d.pd, d.p, d.q)):
            return f"{d.name}: reduced complex differs from the W quotient"
    return None


def _split_unions(rng) -> str | None:
    for _ in range(10):
        d = random_split_union(rng)
        if detect_split(d.pd, d.p, d.q).verdict != "separated":
            return f"{d.name}: split union not separated"
    return None


def _reidemeister(rng) -> str | None:
    for _ in range(20):
        pair = random_reidemeister_pair(rng, 4)
        vals = []
        for d in (pair.before, pair.after):
            kh = homology_with_module(d.pd, d.p, d.q, transfer=False)
            vals.append((kh.reduced_table, kh.x_on_H.rank(),
                         unrolled_homology_dim(promote(kh.reduced_module))))
        if vals[0] != vals[1]:
            return f"{pair.move} changed the invariants of {pair.before.name}"
    return None


def _transfer(rng) -> str | None:
    for _ in range(50):
        M = promote(random_dg_module(rng))
        H, _ = transfer_to_homology(M, rng)
        if check_relations(H):
            return "transferred module violates the relations"
        if unrolled_homology_dim(H) != unrolled_homology_dim(M):
            return "transfer changed the unrolled homology"
        if spectral_page_ranks(H) != spectral_page_ranks_snf(H):
            return "spectral page routes disagree"
    return None


def _twist(rng) -> str | None:
    for _ in range(30):
        C = random_laurent_complex(rng, 6)
        for rep in (verify_twist_theorem(C, rng), verify_koszul(C)):
            if not rep.ok:
                return "; ".join(rep.failures)
    return None


CHECKS: list[tuple[str, Callable]] = [
    ("corpus verdicts and golden table", _corpus),
    ("random diagrams: equivalences, half rank, W quotient", _random_diagrams),
    ("split unions are separated", _split_unions),
    ("Reidemeister invariance", _reidemeister),
    ("transfer soundness and page routes", _transfer),
    ("twisted complexes at t = 1 and Koszul duality", _twist),
]


def run_selftest(seed: int = 0) -> list[tuple[str, str | None]]:
    """Run every check; returns ``(name, failure message or None)`` pairs."""
    out = []
    for name, fn in CHECKS:
        rng = np.random.default_rng(seed)
        try:
            msg = fn(rng)
        except Exception as exc:   # a crash is a failure, reported by name
            msg = f"{type(exc).__name__}: {exc}"
        out.append((name, msg))
    return out
