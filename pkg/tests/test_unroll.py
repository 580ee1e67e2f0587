import numpy as np

from khodetect.ainf import AinfModuleX, AinfMorphismX, compose, identity, promote, transfer_to_homology
from khodetect.f2 import F2Matrix
from khodetect.khovanov import build_complex, make_pd, reduce_at
from khodetect.poly import LaurentPoly, PolyMatrix
from khodetect.randgen import random_dg_module, random_invertible, random_quasi_free
from khodetect.twist import t_one_module
from khodetect.homalg import LaurentComplex
from khodetect.unroll import (is_unrolled_acyclic, spectral_page_ranks, spectral_page_ranks_snf,
                              unroll_module, unroll_morphism, unroll_morphism_series,
                              unrolled_homology_dim, unrolled_rank)

Y = LaurentPoly.monomial(1)
zero, one = LaurentPoly.zero(), LaurentPoly.one()


def canonical(k):
    return AinfModuleX(2, [F2Matrix.zeros(2)] * k + [F2Matrix.from_dense([[0, 0], [1, 0]])])


def test_unroll_examples():
    assert unroll_module(AinfModuleX.free(1)).matrix == PolyMatrix([[zero, zero], [Y, zero]], 2, 2)
    assert unroll_module(AinfModuleX.trivial(1)).matrix.is_zero()
    for k in range(1, 5):
        assert unroll_module(canonical(k)).matrix == PolyMatrix([[zero, zero], [Y ** k, zero]], 2, 2)


def test_unrolled_dims_examples():
    for r in range(1, 4):
        assert unrolled_homology_dim(AinfModuleX.free(r)) == 0
        assert unrolled_homology_dim(AinfModuleX.trivial(r)) == r
    assert unrolled_homology_dim(canonical(3)) == 0
    assert is_unrolled_acyclic(AinfModuleX.free(1))
    assert not is_unrolled_acyclic(AinfModuleX.trivial(1))


def test_unlink_reduced_complex_acyclic():
    pd = make_pd([], 2)
    assert is_unrolled_acyclic(promote(reduce_at(build_complex(pd, 1, 2))))


def test_quasi_free_block_model(rng):
    for _ in range(60):
        M = random_quasi_free(rng)
        r = M.dim // 2
        D = unroll_module(promote(M)).matrix
        d = M.differential
        A = PolyMatrix.from_f2(d.submatrix(range(r), range(r)))
        B = PolyMatrix.from_f2(d.submatrix(range(r, 2 * r), range(r)))
        assert D.submatrix(range(r), range(r, 2 * r)).is_zero()
        assert D.submatrix(range(r), range(r)) == A
        assert D.submatrix(range(r, 2 * r), range(r, 2 * r)) == A
        assert D.submatrix(range(r, 2 * r), range(r)) == B + PolyMatrix.identity(r).scale(Y)
        assert is_unrolled_acyclic(promote(M))


def test_rank_routes_agree(rng):
    pd = make_pd([[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]])
    M = promote(reduce_at(build_complex(pd, 1, 3)))
    assert unrolled_rank(M, "graded") == unrolled_rank(M, "rational")
    for _ in range(30):
        M = promote(random_dg_module(rng))
        assert unrolled_rank(M, "rational") == unrolled_rank(M)


def test_functoriality_identity(rng):
    M = promote(random_dg_module(rng, 6))
    assert unroll_morphism(identity(M)) == PolyMatrix.identity(M.dim)


def test_functoriality_composition(rng):
    for _ in range(30):
        M = promote(random_dg_module(rng, 6))
        H, incl = transfer_to_homology(M, rng)
        P = random_invertible(rng, M.dim)
        Pi = P.inverse()
        N = AinfModuleX(M.dim, [P @ m @ Pi for m in M.ops])
        f = AinfMorphismX(M, N, [P])
        F, dF = unroll_morphism_series(f)
        G, dG = unroll_morphism_series(incl)
        FG, dFG = unroll_morphism_series(compose(f, incl))
        assert (F @ G).scale(dFG) == FG.scale(dF * dG)


def test_page_examples():
    rho = AinfModuleX(4, [F2Matrix.zeros(4), F2Matrix.from_entries(4, 4, [(1, 0)])])
    assert spectral_page_ranks(rho).nonzero() == {1: 1}
    for k in range(1, 5):
        assert spectral_page_ranks(canonical(k)).nonzero() == {k: 1}
    C = LaurentComplex(PolyMatrix([[zero, zero], [one + Y ** 2, zero]], 2, 2))
    assert spectral_page_ranks(t_one_module(C)).nonzero() == {2: 1}


def test_page_routes_agree(rng):
    for _ in range(60):
        M = promote(random_dg_module(rng))
        assert spectral_page_ranks(M) == spectral_page_ranks_snf(M)
        H, _ = transfer_to_homology(M, rng)
        pages = spectral_page_ranks(H)
        assert pages == spectral_page_ranks_snf(H)
        assert pages.limit_dim == unrolled_homology_dim(M)


def test_finite_unroll_morphism_rejects_rational():
    M = promote(random_dg_module(np.random.default_rng(0)))
    f = identity(M)
    assert unroll_morphism(f).shape == (M.dim, M.dim)
