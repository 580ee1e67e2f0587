"""Complexes over F2[t, t^-1] evaluated at t = 1 as modules over F2[X]/(X^2)."""

import numpy as np

from khodetect.homalg import LaurentComplex
from khodetect.poly import LaurentPoly, PolyMatrix
from khodetect.randgen import random_laurent_complex
from khodetect.twist import (build_canonical_module, canonical_form, t_one_module,
                             verify_koszul, verify_twist_theorem)
from khodetect.unroll import spectral_page_ranks, unrolled_homology_dim

t = LaurentPoly.monomial(1)
one = LaurentPoly.one()
zero = LaurentPoly.zero()

# F2[t^+-1] --(1+t)^3--> F2[t^+-1]: torsion vanishing to order three at t = 1
d = PolyMatrix([[zero, (one + t) ** 3], [zero, zero]], 2, 2)
C = LaurentComplex(d)
cf = canonical_form(C)
print("free rank:", cf.free_rank, " torsion:", [str(p) for p in cf.torsion_polys])
M = t_one_module(C)
print("operations at t = 1:", len(M.ops), " unrolled homology:", unrolled_homology_dim(M))
print("pages of the canonical model:", spectral_page_ranks(build_canonical_module(cf)).nonzero())

rng = np.random.default_rng(11)
bad = 0
for _ in range(25):
    C = random_laurent_complex(rng, 6)
    bad += not verify_twist_theorem(C, rng).ok or not verify_koszul(C).ok
print("random complexes checked: 25, counterexamples:", bad)
