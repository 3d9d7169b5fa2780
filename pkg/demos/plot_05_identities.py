"""
Permuted triples and normal sets
================================

Exact count identities under inversion, swapping and rotation.
"""

import numpy as np

from prodmix.io import load_group
from prodmix.mixing import random_normal_subset, random_subset, verify_cyclic_identities, verify_triple_identities

G = load_group("s4")
rng = np.random.default_rng(7)

A, B, C = (random_subset(G, 0.5, rng) for _ in range(3))
v = verify_triple_identities(A, B, C, G)
print(v.counts, v.ok)

X = random_subset(G, 0.5, rng)
Y = random_normal_subset(G, 0.5, rng)
Z = random_normal_subset(G, 0.5, rng)
w = verify_cyclic_identities(X, Y, Z, 5, G, require_rotation=True)
print(w.counts, "swap", w.swap_ok, "rotate", w.rotate_ok)
