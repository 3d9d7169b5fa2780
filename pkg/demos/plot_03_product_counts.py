"""
Counting products in classes
============================

The character sum and direct enumeration give the same class-triple counts.
"""

from prodmix.chartable import dixon_char_table
from prodmix.io import load_group
from prodmix.mixing import count_pairs, frobenius_count, frobenius_drift

G = load_group("a5")
T = dixon_char_table(G)
m = G.num_classes

worst = 0.0
for i in range(m):
    for j in range(m):
        for l in range(m):
            n = count_pairs(G.class_set(i), G.class_set(j), G.class_set(l), G)
            assert frobenius_count(i, j, l, G, T) == n
            worst = max(worst, frobenius_drift(i, j, l, T))
print(m**3, "triples agree, largest rounding drift", worst)

# products of two 5-cycles from the same class landing in the 3-cycles
print(count_pairs(G.class_set(1), G.class_set(1), G.class_set(4), G))
