from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from corpus import group, table
from oracles import brute_pairs, brute_triples
from prodmix.errors import EmptySet, NotNormal, RoundingDrift
from prodmix.mixing import (MixReport, count_pairs, count_triples_g, frobenius_count, frobenius_drift,
                            frobenius_error_bound, gowers_check, gowers_trick_check, implied_eta, prob,
                            random_normal_subset, random_subset, translated_count, verify_cyclic_identities,
                            verify_triple_identities)


def test_count_pairs_examples(s3):
    full = s3.full_set()
    assert count_pairs(full, full, full, s3) == 36
    e = s3.subset([0])
    assert count_pairs(e, e, e, s3) == 1
    # transpositions square to the identity
    T = s3.class_set(2)
    assert count_pairs(T, T, e, s3) == 3
    assert count_pairs(T, T, T, s3) == 0
    assert count_pairs(s3.empty_set(), full, full, s3) == 0


def test_prob_examples(s3, c2):
    full = s3.full_set()
    assert prob(full, full, s3.class_set(1), s3) == Fraction(1, 3)
    g = c2.subset([1])
    assert prob(g, g, g, c2) == 0
    with pytest.raises(EmptySet):
        prob(s3.empty_set(), full, full, s3)


def test_count_triples_examples(s3):
    full = s3.full_set()
    for g in range(6):
        assert count_triples_g(full, full, full, g, s3) == 36


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_counts_match_brute_force(data):
    name = data.draw(st.sampled_from(["s3", "a4", "s4"]))
    G = group(name)
    sub = st.sets(st.integers(0, G.order - 1))
    A, B, C = (G.subset(data.draw(sub)) for _ in range(3))
    g = data.draw(st.integers(0, G.order - 1))
    assert count_pairs(A, B, C, G) == brute_pairs(G, A.indices(), B.indices(), C.indices())
    assert count_triples_g(A, B, C, g, G) == brute_triples(G, A.indices(), B.indices(), C.indices(), g)
    assert translated_count(A, B, C, g, G) == count_triples_g(A, B, C, g, G)


def test_chunked_counting_agrees(monkeypatch):
    import prodmix.mixing as mixing
    G = group("a5")
    rng = np.random.default_rng(3)
    A, B, C = (random_subset(G, 0.5, rng) for _ in range(3))
    full = count_pairs(A, B, C, G), count_triples_g(A, B, C, 7, G)
    monkeypatch.setattr(mixing, "_BLOCK", 5)
    assert (count_pairs(A, B, C, G), count_triples_g(A, B, C, 7, G)) == full


def test_sets_from_other_group_rejected(s3, a5):
    with pytest.raises(ValueError):
        count_pairs(s3.full_set(), a5.full_set(), s3.full_set(), s3)


@pytest.mark.parametrize("name", ["trivial", "c2", "s3", "a4", "s4", "a5"])
def test_frobenius_matches_enumeration(name):
    G, T = group(name), table(name)
    m = G.num_classes
    for i in range(m):
        for j in range(m):
            for l in range(m):
                N = count_pairs(G.class_set(i), G.class_set(j), G.class_set(l), G)
                assert frobenius_count(i, j, l, G, T) == N
                assert frobenius_drift(i, j, l, T) < 1e-8


def test_frobenius_detects_bad_table(s3):
    from prodmix.chartable import CharTable
    T = table("s3")
    vals = T.values.copy()
    vals[2, 1] = -0.7
    bad = CharTable(6, vals, T.class_sizes, T.class_reps, 0)
    with pytest.raises(RoundingDrift):
        frobenius_count(1, 1, 1, s3, bad)


def test_frobenius_error_bound_on_a5():
    T = table("a5")
    eb = frobenius_error_bound(4, 4, 4, T)
    assert eb.deviation >= 0 and eb.bound > 0
    with pytest.raises(ValueError):
        frobenius_error_bound(1, 1, 1, T, exponent=0)


def test_implied_eta():
    G = group("a5")
    assert implied_eta(G, 3, 60, 60, 60) == pytest.approx(1 / np.sqrt(3))


def test_gowers_full_group(a5):
    T = table("a5")
    full = a5.full_set()
    r = gowers_check(full, full, full, a5, T)
    assert r.prob == 1 and r.target == 1 and r.passed and r.hypothesis_holds
    assert r.eta == pytest.approx(r.eta_implied)
    assert r.eta > r.eta_implied


def test_gowers_hypothesis_flag(a5):
    T = table("a5")
    K = a5.class_set(1)
    r = gowers_check(K, K, K, a5, T, eta=0.1)
    assert not r.hypothesis_holds
    with pytest.raises(EmptySet):
        gowers_check(a5.empty_set(), K, K, a5, T)
    with pytest.raises(ValueError):
        gowers_check(K, K, K, a5, T, eta=-1)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["s3", "a4", "s4", "a5", "psl27"]), st.integers(0, 2**32 - 1))
def test_gowers_windows_hold_under_hypothesis(name, seed):
    G, T = group(name), table(name)
    rng = np.random.default_rng(seed)
    A, B, C = (random_subset(G, 0.85, rng) for _ in range(3))
    g = int(rng.integers(G.order))
    r1 = gowers_check(A, B, C, G, T)
    r2 = gowers_trick_check(A, B, C, g, G, T)
    assert r1.hypothesis_holds and r2.hypothesis_holds
    assert r1.passed and r2.passed


def test_mix_report_round_trip(a5):
    T = table("a5")
    r = gowers_trick_check(a5.full_set(), a5.class_set(4), a5.full_set(), 5, a5, T)
    assert MixReport.from_dict(r.to_dict()) == r


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["c2", "s3", "a4", "s4", "a5"]), st.integers(0, 2**32 - 1), st.floats(0, 1))
def test_triple_identities(name, seed, density):
    G = group(name)
    rng = np.random.default_rng(seed)
    A, B, C = (random_subset(G, density, rng, nonempty=False) for _ in range(3))
    v = verify_triple_identities(A, B, C, G)
    assert v.ok, v


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["s3", "a4", "s4", "a5"]), st.integers(0, 2**32 - 1))
def test_cyclic_identities(name, seed):
    G = group(name)
    rng = np.random.default_rng(seed)
    X = random_subset(G, 0.5, rng)
    Y = random_subset(G, 0.5, rng)
    Yn = random_normal_subset(G, 0.5, rng)
    Z = random_normal_subset(G, 0.5, rng)
    g = int(rng.integers(G.order))
    v = verify_cyclic_identities(X, Y, Z, g, G)
    assert v.ok and v.rotate_ok in (None, True)
    w = verify_cyclic_identities(X, Yn, Z, g, G, require_rotation=True)
    assert w.ok and w.rotate_ok is True


def test_cyclic_identities_need_normal(s3):
    X = s3.subset([1])
    with pytest.raises(NotNormal):
        verify_cyclic_identities(X, X, X, 0, s3)
    with pytest.raises(NotNormal):
        verify_cyclic_identities(X, X, s3.class_set(1), 0, s3, require_rotation=True)


def test_swap_fails_without_normality():
    # the count identity itself needs Z normal; find a witness in S3
    G = group("s3")
    rng = np.random.default_rng(0)
    found = False
    for _ in range(200):
        X, Y, Z = (random_subset(G, 0.4, rng) for _ in range(3))
        g = int(rng.integers(6))
        if count_triples_g(X, Y, Z, g, G) != count_triples_g(X, Z, Y, g, G):
            found = True
            break
    assert found


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["s3", "s4", "a5"]), st.integers(0, 2**32 - 1))
def test_mass_conservation(name, seed):
    G = group(name)
    rng = np.random.default_rng(seed)
    A, B, C = (random_subset(G, 0.5, rng) for _ in range(3))
    assert sum(count_pairs(A, B, G.class_set(K.index), G) for K in G.classes) == A.size * B.size
    assert sum(count_triples_g(A, B, C, g, G) for g in range(G.order)) == A.size * B.size * C.size


def test_random_subsets_are_seeded(a5):
    a = random_subset(a5, 0.5, np.random.default_rng(11))
    b = random_subset(a5, 0.5, np.random.default_rng(11))
    assert a == b
    n = random_normal_subset(a5, 0.5, np.random.default_rng(11))
    assert n.is_normal and n.size > 0
