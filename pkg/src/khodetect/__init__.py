"""Module structures on Khovanov homology over F2 and split detection.

The algebra layers (F2 and F2[t, t^-1] linear algebra, A-infinity modules
over F2[X]/(X^2), unrolling, twisted complexes) are usable on their own;
``khodetect.khovanov`` builds Khovanov complexes from PD codes on top.
"""

from .ainf import (AinfModuleX, AinfMorphismX, check_morphism, check_relations, compose,
                   promote, transfer, transfer_to_homology)
from .f2 import F2Matrix
from .homalg import (DGModuleX, F2Complex, LaurentComplex, decompose_two_step,
                     homology_module, is_free_over_WX, is_free_over_X)
from .poly import LaurentPoly, PolyMatrix, RationalFn, hasse_derivative, smith_normal_form
from .twist import canonical_form, t_one_module, verify_koszul, verify_twist_theorem
from .unroll import (is_unrolled_acyclic, spectral_page_ranks, unroll_module,
                     unrolled_homology_dim)

__version__ = "0.1.0"

__all__ = [
    "AinfModuleX", "AinfMorphismX", "DGModuleX", "F2Complex", "F2Matrix", "LaurentComplex",
    "LaurentPoly", "PolyMatrix", "RationalFn", "canonical_form", "check_morphism",
    "check_relations", "compose", "decompose_two_step", "hasse_derivative", "homology_module",
    "is_free_over_WX", "is_free_over_X", "is_unrolled_acyclic", "promote", "smith_normal_form",
    "spectral_page_ranks", "t_one_module", "transfer", "transfer_to_homology", "unroll_module",
    "unrolled_homology_dim", "verify_koszul", "verify_twist_theorem",
]
