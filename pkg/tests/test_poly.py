from math import prod

import pytest
from hypothesis import given, strategies as st

from khodetect.f2 import F2Matrix, kernel_vectors
from khodetect.poly import (LaurentPoly, PolyMatrix, RationalFn, binom_mod2, hasse_derivative,
                            rational_rank, smith_normal_form, solve_rational)

from conftest import laurent_polys, poly_matrices

t = LaurentPoly.monomial(1)
one = LaurentPoly.one()
zero = LaurentPoly.zero()


def falling_binomial_parity(m, n):
    # C(m, n) = m (m-1) ... (m-n+1) / n!, computed exactly over the integers
    return (prod(m - k for k in range(n)) // prod(range(1, n + 1))) % 2


def test_binom_examples():
    assert binom_mod2(3, 2) == 1
    assert binom_mod2(2, 1) == 0
    assert binom_mod2(-1, 5) == 1


@pytest.mark.parametrize("m", range(-20, 21))
def test_binom_matches_integer_binomials(m):
    for n in range(17):
        assert binom_mod2(m, n) == falling_binomial_parity(m, n)


def test_hasse_examples():
    assert hasse_derivative(t ** 3, 2) == t
    assert hasse_derivative(t ** 2, 1) == zero
    assert hasse_derivative(LaurentPoly.monomial(-1), 2) == LaurentPoly.monomial(-3)
    assert hasse_derivative(t + t ** 2, 1).at_one() == 1


@given(laurent_polys(), laurent_polys(), st.integers(0, 6))
def test_hasse_leibniz(p, q, n):
    rhs = zero
    for i in range(n + 1):
        rhs = rhs + hasse_derivative(p, i) * hasse_derivative(q, n - i)
    assert hasse_derivative(p * q, n) == rhs


@given(poly_matrices(2, 3), poly_matrices(3, 2), st.integers(0, 4))
def test_matrix_leibniz(A, B, n):
    rhs = PolyMatrix.zeros(2)
    for i in range(n + 1):
        rhs = rhs + A.hasse(i) @ B.hasse(n - i)
    assert (A @ B).hasse(n) == rhs


@given(laurent_polys(), st.integers(0, 5), st.integers(0, 5))
def test_hasse_composition(p, a, b):
    # D^a D^b = C(a+b, a) D^(a+b)
    lhs = hasse_derivative(hasse_derivative(p, b), a)
    rhs = hasse_derivative(p, a + b) if binom_mod2(a + b, a) else zero
    assert lhs == rhs


def series_coefficients(a, b, k_max):
    """Coefficients of (1+s)^a (1+s+s^2+...)^b mod 2, truncated past s^k_max."""
    coeffs = [1] + [0] * k_max
    for _ in range(a):
        coeffs = [(coeffs[k] + (coeffs[k - 1] if k else 0)) % 2 for k in range(k_max + 1)]
    for _ in range(b):
        run = 0
        out = []
        for c in coeffs:
            run = (run + c) % 2
            out.append(run)
        coeffs = out
    return coeffs


@pytest.mark.parametrize("a", range(9))
@pytest.mark.parametrize("b", range(9))
def test_binomial_generating_function(a, b):
    coeffs = series_coefficients(a, b, 12)
    assert coeffs == [binom_mod2(a - b, k) for k in range(13)]


def test_laurent_arithmetic():
    p = one + t
    assert p * p == one + t ** 2
    assert (t ** 3 + one).exact_div(p) == one + t + t ** 2
    assert p.at_one() == 0 and t.is_unit() and not p.is_unit()
    assert LaurentPoly.monomial(-2) * t ** 2 == one
    with pytest.raises(ArithmeticError):
        (one + t + t ** 2).exact_div(p)


def test_rational_field_ops():
    a = RationalFn(one, one + t)
    b = RationalFn(t, one + t)
    assert a + b == RationalFn(one)
    assert a * RationalFn(one + t) == RationalFn(one)
    assert (a.inverse() * a) == RationalFn(one)


def test_rational_rank_examples():
    assert rational_rank(PolyMatrix.zeros(3)) == 0
    assert rational_rank(PolyMatrix([[t, zero], [zero, one + t]], 2, 2)) == 2
    assert rational_rank(PolyMatrix([[one, t], [t, t ** 2]], 2, 2)) == 1


def test_snf_examples():
    I = PolyMatrix.identity(3)
    assert smith_normal_form(I).D == I
    assert smith_normal_form(PolyMatrix([[t]], 1, 1)).D == PolyMatrix([[one]], 1, 1)
    M = PolyMatrix([[one + t, one], [zero, one + t]], 2, 2)
    assert smith_normal_form(M).invariant_factors == [one, (one + t) ** 2]


def snf_is_sound(M):
    res = smith_normal_form(M)
    U, D, V = res
    nr, nc = M.shape
    if U @ M @ V != D or not D.is_diagonal():
        return False
    if U @ res.U_inv != PolyMatrix.identity(nr) or V @ res.V_inv != PolyMatrix.identity(nc):
        return False
    if not U.determinant().is_unit() or not V.determinant().is_unit():
        return False
    inv = res.invariant_factors
    return all(a.divides(b) for a, b in zip(inv, inv[1:]))


@given(poly_matrices(3, 3))
def test_snf_soundness_square(M):
    assert snf_is_sound(M)


@given(poly_matrices(2, 4))
def test_snf_soundness_wide(M):
    assert snf_is_sound(M)


@given(poly_matrices(3, 3))
def test_snf_rank_matches_rational_rank(M):
    # two independent routes to the rank over F2(t)
    assert len(smith_normal_form(M).invariant_factors) == rational_rank(M)


@given(poly_matrices(3, 3), poly_matrices(3, 2))
def test_solve_rational(A, B):
    I = PolyMatrix.identity(3)
    A = A.map(lambda x: x * (one + t)) + I      # invertible: det = 1 at t = 1
    N, den = solve_rational(A, B)
    assert A @ N == B.scale(den)


def test_at_one_and_coefficients():
    M = PolyMatrix([[one + t, t ** 2], [zero, one]], 2, 2)
    assert M.at_one() == F2Matrix.from_dense([[0, 1], [0, 1]])
    assert M.coefficient_matrix(2) == F2Matrix.from_dense([[0, 1], [0, 0]])


def test_f2_kernel_and_inverse(rng):
    for _ in range(20):
        n = int(rng.integers(1, 9))
        m = F2Matrix.from_dense(rng.integers(0, 2, size=(n, n)))
        ker = kernel_vectors(m.columns(), n)
        assert all(m.apply(v) == 0 for v in ker)
        assert len(ker) + m.rank() == n
        if m.rank() == n:
            assert m @ m.inverse() == F2Matrix.identity(n)
