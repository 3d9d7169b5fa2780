"""
Character tables by the Dixon method
====================================

Compute the table of PSL(2,7) and check its invariants.
"""

import numpy as np

from prodmix.chartable import dixon_char_table, min_nontrivial_degree, witten_zeta
from prodmix.io import load_group

G = load_group("psl27")
T = dixon_char_table(G)

np.set_printoptions(precision=3, suppress=True)
print(T.values.real)
print("degrees", T.degrees.tolist())

# sizes of the orthogonality residuals
for name, r in T.residuals().items():
    print(f"{name:24s} {r:.1e}")

print("k =", min_nontrivial_degree(T))
for x in (0.5, 1, 2):
    print("zeta", x, witten_zeta(T, x))
