"""Khovanov complexes of link diagrams and split detection."""

from .cube import (KhovanovComplex, Resolution, build_complex, reduce_at, reduce_by_w,
                   resolve, w_reduction_matches)
from .detect import (InconsistencyError, KhovanovHomology, SplitVerdict, basepoint_move_map,
                     detect_split, half_rank_check, homology_with_module, mirror_table)
from .diagrams import (braid_closure, disjoint_union, load_corpus, random_braid_diagram,
                       random_split_union, reidemeister_pair)
from .pd import Diagram, PDCode, PDError, make_pd, parse_diagram, parse_pd

__all__ = [
    "Diagram", "InconsistencyError", "KhovanovComplex", "KhovanovHomology", "PDCode",
    "PDError", "Resolution", "SplitVerdict", "basepoint_move_map", "braid_closure",
    "build_complex", "detect_split", "disjoint_union", "half_rank_check",
    "homology_with_module", "load_corpus", "make_pd", "mirror_table", "parse_diagram",
    "parse_pd", "random_braid_diagram", "random_split_union", "reduce_at", "reduce_by_w",
    "reidemeister_pair", "resolve", "w_reduction_matches",
]
