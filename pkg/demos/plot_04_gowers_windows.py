"""
Dense sets mix
==============

Random dense subsets of SL(2,8) land inside the quasirandom window.
"""

import numpy as np

from prodmix.chartable import dixon_char_table
from prodmix.io import load_group
from prodmix.mixing import gowers_check, gowers_trick_check, random_subset

G = load_group("sl28")
T = dixon_char_table(G)
rng = np.random.default_rng(0)

for _ in range(5):
    A, B, C = (random_subset(G, 0.6, rng) for _ in range(3))
    r = gowers_check(A, B, C, G, T)
    print(r.sizes, f"prob {float(r.prob):.4f} target {float(r.target):.4f} eta {r.eta:.3f}", r.passed)

# the same with a fixed product g
r = gowers_trick_check(A, B, C, 17, G, T)
print("abc = g:", r.count, "window passed", r.passed)
