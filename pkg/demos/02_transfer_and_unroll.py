"""Move a DG module over F2[X]/(X^2) onto its homology, then unroll it."""

import numpy as np

from khodetect.ainf import check_relations, promote, transfer_to_homology
from khodetect.khovanov import build_complex, make_pd, reduce_at
from khodetect.unroll import spectral_page_ranks, spectral_page_ranks_snf, unrolled_homology_dim

rng = np.random.default_rng(3)

# reduced complex of the Hopf link, X acting on the second component
hopf = make_pd([[1, 3, 2, 4], [3, 1, 4, 2]])
M = promote(reduce_at(build_complex(hopf, 1, 3)))
print("reduced complex dimension:", M.dim)

H, incl = transfer_to_homology(M, rng)
print("homology dimension:", H.dim, " finite operations:", H.is_finite)
print("relations hold:", not check_relations(H))

# unrolling and the spectral sequence of the Y filtration
print("unrolled homology:", unrolled_homology_dim(M), "=", unrolled_homology_dim(H))
pages = spectral_page_ranks(H)
print("page differential ranks:", pages.nonzero())
assert pages == spectral_page_ranks_snf(H)
