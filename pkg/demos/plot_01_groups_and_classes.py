"""
Cayley tables and conjugacy classes
===================================

Build A5 from two permutations and look at its classes.
"""

from prodmix.groups import build_group, inverse_set, normal_closure

# a 5-cycle and a 3-cycle generate A5
G = build_group([[1, 2, 3, 4, 0], [1, 2, 0, 3, 4]])
print("order", G.order, "exponent", G.exponent())

# classes come sorted by size, identity first
for K in G.classes:
    print(K.index, K.size, "rep order", G.element_orders()[K.representative])

# A5 is ambivalent: every class is its own inverse set
print(all(inverse_set(G.class_set(K.index), G) == G.class_set(K.index) for K in G.classes))

# the normal closure of a single 3-cycle is its whole class
X = G.subset([G.class_reps[3]])
print(normal_closure(X, G).size)
