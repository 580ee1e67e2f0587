"""Laurent polynomials over F2, Hasse derivatives and the Smith normal form."""

from khodetect.poly import LaurentPoly, PolyMatrix, binom_mod2, hasse_derivative, smith_normal_form

t = LaurentPoly.monomial(1)
one = LaurentPoly.one()

# (1 + t)^4 = 1 + t^4 in characteristic two
p = (one + t) ** 4
print("(1+t)^4 =", p)

# Hasse derivatives D_n t^m = binom(m, n) t^(m - n), even for negative m
for n in range(4):
    print(f"D_{n} t^-3 =", hasse_derivative(t ** -3, n), " binom(-3, n) mod 2 =", binom_mod2(-3, n))

# Smith form: U M V = D with U, V invertible over F2[t, t^-1]
M = PolyMatrix([[one + t, t ** 2], [t, one + t ** 3]], 2, 2)
U, D, V = smith_normal_form(M)
print("invariant factors:", [str(f) for f in D.diagonal()])
assert U @ M @ V == D
