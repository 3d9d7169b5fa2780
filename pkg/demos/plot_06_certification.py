"""
Certifying small mixers
=======================

Exhaustive search over class unions, and what a refutation looks like.
"""

from prodmix.certify import certify_mixer, normal_mix_bounds
from prodmix.io import load_group, parse_set_spec
from prodmix.mixing import prob

a5 = load_group("a5")
cert = certify_mixer(a5, 0.5, 0.9)
print(cert.outcome, cert.unions, "unions,", cert.trials, "triples")

# C2 fails: the nonidentity element never squares into itself
c2 = load_group("c2")
cert = certify_mixer(c2, 0.4, 0.1)
print(cert.outcome, cert.counterexample)
A = parse_set_spec(cert.counterexample["A"], c2)
print("prob", prob(A, A, A, c2))

# large and small classes bracket the count of normal triples
r = normal_mix_bounds(a5.full_set(), a5.union_of_classes([3, 4]), a5.full_set(), None, 0.3, a5, threshold=12)
print(r.count_large, "<=", r.count, "<=", r.bounds["chain_upper"], r.verdicts["chain"])
