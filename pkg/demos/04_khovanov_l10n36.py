"""Reduced Khovanov homology of L10n36 with the X action of its other component."""

from khodetect.cli import format_table
from khodetect.khovanov import homology_with_module, load_corpus

d = load_corpus()["L10n36"]
kh = homology_with_module(d.pd, d.p, d.q)
print(f"{d.pd.n_crossings} crossings, complex dimension {kh.complex.dim}")
print(format_table(kh.reduced_table))
print("total rank:", kh.reduced.dim, " X rank on homology:", kh.x_on_H.rank())
H = kh.transferred
print("nonzero operations after transfer:",
      [j for j in range(len(H.ops)) if not H.op(j).is_zero()] if H.is_finite else "infinite")
