import numpy as np
import pytest

from khodetect.ainf import (AinfModuleX, AinfMorphismX, RetractionData, check_morphism,
                            check_relations, compose, identity, promote, retraction_onto_homology,
                            transfer, transfer_to_homology)
from khodetect.f2 import F2Matrix
from khodetect.homalg import DGModuleX, LaurentComplex, homology_dims
from khodetect.khovanov import build_complex, make_pd, reduce_at
from khodetect.poly import LaurentPoly, PolyMatrix
from khodetect.randgen import random_dg_module, random_invertible
from khodetect.twist import t_one_module
from khodetect.unroll import unrolled_homology_dim

E = F2Matrix.from_dense


def canonical(k):
    ops = [F2Matrix.zeros(2)] * k + [E([[0, 0], [1, 0]])]
    return AinfModuleX(2, ops)


def conjugate(M, P):
    Pi = P.inverse()
    return AinfModuleX(M.dim, [P @ m @ Pi for m in M.ops])


def test_relations_small():
    assert check_relations(promote(DGModuleX.from_matrices([[0, 0], [1, 0]], [[0, 0], [0, 0]]))) == []
    bad = check_relations(AinfModuleX(1, [E([[0]]), E([[1]])]))
    assert [v.index for v in bad] == [2]
    for k in range(1, 6):
        assert check_relations(canonical(k)) == []


def test_promote_zero_module():
    M = promote(DGModuleX.from_matrices(np.zeros((0, 0)), np.zeros((0, 0))))
    assert M.dim == 0 and check_relations(M) == []


def test_identity_and_zero_f0():
    M = AinfModuleX.free(2)
    assert check_morphism(identity(M)) == []
    # f0 = 0, f1 = 1 between free modules: the n = 2 relation reads f1 m1 + m1 f1 = 0
    f = AinfMorphismX(M, M, [F2Matrix.zeros(4), E(np.eye(4, dtype=int)[[1, 0, 3, 2]])])
    assert check_morphism(f) != []


def test_transfer_trivial_cases():
    M = AinfModuleX.free(1)
    r = RetractionData(F2Matrix.identity(2), F2Matrix.identity(2), F2Matrix.zeros(2))
    H, incl = transfer(M, r)
    assert H == M and incl.maps == (F2Matrix.identity(2),)
    acyclic = AinfModuleX(2, [E([[0, 0], [1, 0]])])
    r = RetractionData(F2Matrix.zeros(2, 0), F2Matrix.zeros(0, 2), E([[0, 1], [0, 0]]))
    H, _ = transfer(acyclic, r)
    assert H.dim == 0


def test_transfer_kinked_unknot():
    pd = make_pd([[1, 2, 2, 1]])
    M = promote(reduce_at(build_complex(pd, 1, 2)))
    H, incl = transfer_to_homology(M)
    assert H.dim == 1 and all(m.is_zero() for m in H.ops)
    assert check_morphism(incl) == []


def test_trefoil_promotes():
    pd = make_pd([[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]])
    assert check_relations(promote(build_complex(pd, 1, 3).dg_module())) == []


def test_transfer_soundness(rng):
    """Transferred structures satisfy the relations and keep unrolled homology."""
    finite = 0
    for _ in range(200):
        dg = random_dg_module(rng)
        M = promote(dg)
        H, incl = transfer_to_homology(M, rng)
        assert H.dim == homology_dims(dg.complex)
        assert check_relations(H) == []
        assert check_morphism(incl) == []
        assert unrolled_homology_dim(H) == unrolled_homology_dim(M)
        finite += H.is_finite
    assert finite > 150


def test_rational_inclusion_example():
    # the t = 1 module of d = [[0,0,0],[0,0,0],[1+t, 1+t+t^4, 0]] with the
    # deterministic retraction: the inclusion has infinitely many components
    z, a, b = LaurentPoly.zero(), LaurentPoly.from_exponents([0, 1]), LaurentPoly.from_exponents([0, 1, 4])
    M = t_one_module(LaurentComplex(PolyMatrix([[z, z, z], [z, z, z], [a, b, z]], 3, 3)))
    H, incl = transfer(M, retraction_onto_homology(M))
    assert H.is_finite and not incl.is_finite
    assert incl.denominator == b
    assert check_relations(H) == [] and check_morphism(incl) == []
    # the series agrees with its expansion, term by term
    assert incl.map(0) == retraction_onto_homology(M).include


def test_compose_random_morphisms(rng):
    for _ in range(30):
        M = promote(random_dg_module(rng, 6))
        H, incl = transfer_to_homology(M, rng)
        P = random_invertible(rng, M.dim)
        N = conjugate(M, P)
        f = AinfMorphismX(M, N, [P])
        assert check_morphism(f) == []
        g = compose(f, incl)
        assert check_morphism(g) == []
        assert check_morphism(compose(identity(N), f)) == []


def test_grading_validation():
    with pytest.raises(ValueError):
        AinfModuleX(2, [F2Matrix.zeros(2)], grading=[(0, 0)])
    x = E([[0, 0], [1, 0]])
    AinfModuleX(2, [F2Matrix.zeros(2), x], grading=[(0, 0), (0, -2)])
    with pytest.raises(ValueError):
        AinfModuleX(2, [F2Matrix.zeros(2), x], grading=[(0, 0), (0, 0)])
