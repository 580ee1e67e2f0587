"""One check per acceptance criterion; each prints a PASS/FAIL line."""

import json
import time

import numpy as np
import pytest

from khodetect.ainf import AinfMorphismX, check_morphism, check_relations, compose, identity, promote, transfer_to_homology
from khodetect.cli import run
from khodetect.khovanov import (InconsistencyError, basepoint_move_map, detect_split,
                                half_rank_check, load_corpus, make_pd,
                                mirror_table, random_braid_diagram, random_split_union)
from khodetect.khovanov.detect import move_preserves_invariants
from khodetect.khovanov.diagrams import braid_closure, corpus_table
from khodetect.poly import LaurentPoly, PolyMatrix, binom_mod2, hasse_derivative, smith_normal_form
from khodetect.randgen import random_dg_module, random_invertible, random_laurent_complex, random_quasi_free
from khodetect.homalg import universal_coefficients_check
from khodetect.unroll import is_unrolled_acyclic, unroll_morphism, unrolled_homology_dim

GOLDEN = {(5, 9): 1, (4, 7): 1, (3, 5): 1, (1, 3): 1, (2, 3): 2, (0, 1): 2, (1, 1): 1,
          (-1, -1): 1, (0, -1): 2, (-2, -3): 2, (-1, -3): 1, (-3, -5): 1, (-4, -7): 1,
          (-5, -9): 1}


@pytest.fixture
def report(capsys):
    def _report(n, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance {n}] {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail
    return _report


@pytest.fixture(scope="module")
def random_diagrams():
    rng = np.random.default_rng(2024)
    return [random_braid_diagram(rng, 7) for _ in range(500)]


def test_1_l10n36_golden_table(report, tmp_path, capsys):
    start = time.perf_counter()
    d = load_corpus()["L10n36"]
    path = tmp_path / "l10n36.json"
    path.write_text(json.dumps(d.to_json()))
    assert run(["compute", str(path), "--format", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    table = {(r["h"], r["q"]): r["dim"] for r in out["reduced_homology"]}
    assert run(["detect-split", str(path), "--format", "json"]) == 0
    verdict = json.loads(capsys.readouterr().out)
    elapsed = time.perf_counter() - start
    ok = (GOLDEN in (table, mirror_table(table)) and sum(table.values()) == 18
          and corpus_table("L10n36") == GOLDEN
          and verdict["verdict"] == "not_separated" and out["unrolled_homology_dim"] > 0
          and elapsed < 60)
    report(1, ok, f"table matches={GOLDEN in (table, mirror_table(table))}, "
                  f"verdict={verdict['verdict']}, unrolled dim={out['unrolled_homology_dim']}, "
                  f"{elapsed:.1f}s")


def test_2_split_suite(report):
    rng = np.random.default_rng(77)
    cases = [("unlink, no crossings", make_pd([], 2), 1, 2)]
    b = braid_closure([1, -1], 2)
    cases.append(("unlink, R2 diagram", b.pd, b.bottom[0], b.bottom[1]))
    for k in range(20):
        d = random_split_union(rng, 4)
        cases.append((d.name, d.pd, d.p, d.q))
    bad = []
    for name, pd, p, q in cases:
        v = detect_split(pd, p, q)
        if not (v.verdict == "separated" and v.free_reduced and v.unrolled_acyclic
                and v.free_unreduced_WX):
            bad.append(name)
    report(2, not bad, f"{len(cases) - len(bad)}/{len(cases)} split diagrams separated")


def test_3_nonsplit_suite(report):
    corpus = load_corpus()
    cases = [corpus[n] for n in ("L2a1", "K3_1", "L5a1", "L10n36")]
    bad = []
    for d in cases:
        v = detect_split(d.pd, d.p, d.q)
        if v.verdict != "not_separated" or v.free_reduced or v.unrolled_acyclic or v.free_unreduced_WX:
            bad.append(d.name)
    report(3, not bad, f"Hopf, trefoil, Whitehead, L10n36 not separated; failures {bad}")


def test_4_internal_equivalence(report, random_diagrams):
    diagrams = list(load_corpus().values()) + random_diagrams
    mismatches = 0
    for d in diagrams:
        try:
            detect_split(d.pd, d.p, d.q)
        except InconsistencyError:
            mismatches += 1
    report(4, mismatches == 0, f"{len(diagrams)} diagrams, {mismatches} mismatches")


def test_5_half_rank(report, random_diagrams):
    diagrams = list(load_corpus().values()) + random_diagrams
    bad = [d.name for d in diagrams if not half_rank_check(d.pd, d.q)]
    report(5, not bad, f"{len(diagrams) - len(bad)}/{len(diagrams)} diagrams with X rank = dim/2")


def test_6_basepoint_moves(report):
    count, bad = 0, []
    for name, d in load_corpus().items():
        if d.pd.n_crossings > 8:
            continue
        for c0, x in enumerate(d.pd.crossings):
            for a in range(4):
                f = basepoint_move_map(d.pd, c0, x[a], x[(a + 2) % 4], p=d.p)
                count += 1
                if check_morphism(f) or not move_preserves_invariants(f):
                    bad.append((name, c0, a))
    report(6, not bad and count > 0, f"{count} moves checked, {len(bad)} failures")


def test_7_twist_theorems(report, capsys):
    start = time.perf_counter()
    code = run(["twist-verify", "--random", "200", "--max-rank", "8", "--seed", "7",
                "--format", "json"])
    out = json.loads(capsys.readouterr().out)
    elapsed = time.perf_counter() - start
    report(7, code == 0 and out["counterexamples"] == 0 and elapsed < 120,
           f"{out['complexes']} complexes, {out['counterexamples']} counterexamples, {elapsed:.1f}s")


def _algebra_failures():
    rng = np.random.default_rng(99)
    fails = []

    def rand_poly():
        exps = rng.choice(np.arange(-3, 6), size=int(rng.integers(0, 4)), replace=False)
        return LaurentPoly.from_exponents(int(e) for e in exps)

    def rand_matrix(r, c):
        return PolyMatrix([[rand_poly() for _ in range(c)] for _ in range(r)], r, c)

    for _ in range(100):
        p, q, n = rand_poly(), rand_poly(), int(rng.integers(0, 6))
        rhs = LaurentPoly.zero()
        for i in range(n + 1):
            rhs = rhs + hasse_derivative(p, i) * hasse_derivative(q, n - i)
        if hasse_derivative(p * q, n) != rhs:
            fails.append("Hasse Leibniz")
        A, B = rand_matrix(2, 3), rand_matrix(3, 2)
        rhs = PolyMatrix.zeros(2)
        for i in range(n + 1):
            rhs = rhs + A.hasse(i) @ B.hasse(n - i)
        if (A @ B).hasse(n) != rhs:
            fails.append("matrix Leibniz")
    for a in range(9):
        for b in range(9):
            series = [1] + [0] * 12
            for _ in range(a):
                series = [(series[k] + (series[k - 1] if k else 0)) % 2 for k in range(13)]
            for _ in range(b):
                series = list(np.cumsum(series) % 2)
            if [int(s) for s in series] != [binom_mod2(a - b, k) for k in range(13)]:
                fails.append("binomial generating function")
    for _ in range(60):
        M = rand_matrix(3, 3)
        U, D, V = smith_normal_form(M)
        if U @ M @ V != D or not D.is_diagonal() or not U.determinant().is_unit():
            fails.append("SNF soundness")
    for _ in range(40):
        M = promote(random_dg_module(rng, 6))
        H, incl = transfer_to_homology(M, rng)
        if check_relations(H) or check_morphism(incl):
            fails.append("transfer relations")
        if unrolled_homology_dim(H) != unrolled_homology_dim(M):
            fails.append("transfer unrolled dimension")
        P = random_invertible(rng, M.dim)
        N = type(M)(M.dim, [P @ m @ P.inverse() for m in M.ops])
        f = AinfMorphismX(M, N, [P])
        if unroll_morphism(identity(M)) != PolyMatrix.identity(M.dim):
            fails.append("unroll identity")
        if unroll_morphism(compose(identity(N), f)) != unroll_morphism(identity(N)) @ unroll_morphism(f):
            fails.append("unroll composition")
        if not is_unrolled_acyclic(promote(random_quasi_free(rng))):
            fails.append("quasi-free acyclicity")
        if not universal_coefficients_check(random_laurent_complex(rng, 8)):
            fails.append("universal coefficients")
    return sorted(set(fails))


def test_8_algebra_suites(report):
    fails = _algebra_failures()
    report(8, not fails, "all algebra property suites hold" if not fails else f"failing: {fails}")
