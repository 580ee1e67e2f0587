"""Split detection on small links, split unions and a basepoint move."""

import numpy as np

from khodetect.ainf import check_morphism
from khodetect.khovanov import basepoint_move_map, detect_split, load_corpus, random_split_union

corpus = load_corpus()
for name in ("unlink2", "unlink2_r2", "L2a1", "L4a1", "L5a1", "L10n36"):
    d = corpus[name]
    v = detect_split(d.pd, d.p, d.q)
    print(f"{name:12s} {v.verdict:14s} free={v.free_reduced} acyclic={v.unrolled_acyclic} "
          f"WX-free={v.free_unreduced_WX}")

rng = np.random.default_rng(5)
for _ in range(3):
    d = random_split_union(rng, 3)
    print(f"{d.name:40s} {detect_split(d.pd, d.p, d.q).verdict}")

# moving the X basepoint through a crossing of the Whitehead link
w = corpus["L5a1"]
x = w.pd.crossings[0]
f = basepoint_move_map(w.pd, 0, x[0], x[2], p=w.p)
print("basepoint move is a morphism:", not check_morphism(f))
