import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from corpus import group
from oracles import compose, invert, orbit_class_sizes, perm_elements
from prodmix.errors import InvalidPermutation, NotABijection, OrderExceeded
from prodmix.groups import (build_group, check_group_axioms, conjugacy_classes, derived_subgroup,
                            generated_subgroup, inverse_set, is_simple, left_translate, normal_closure)


def test_cyclic_two():
    G = build_group([[1, 0]])
    assert G.order == 2
    assert [K.size for K in G.classes] == [1, 1]


def test_s3_classes():
    G = build_group([[1, 0, 2], [1, 2, 0]])
    assert G.order == 6
    assert [K.size for K in G.classes] == [1, 2, 3]


def test_a5_classes():
    G = build_group([[1, 2, 3, 4, 0], [1, 2, 0, 3, 4]])
    assert G.order == 60
    assert [K.size for K in G.classes] == [1, 12, 12, 15, 20]


def test_trivial_group_one_class():
    G = group("trivial")
    classes = conjugacy_classes(G)
    assert len(classes) == 1 and classes[0].members.tolist() == [0]


def test_psl27_six_classes():
    assert group("psl27").num_classes == 6


@pytest.mark.parametrize("name", ["s3", "a4", "s4", "a5", "psl27", "sl28"])
def test_classes_match_orbit_oracle(name):
    G = group(name)
    assert sorted(K.size for K in G.classes) == orbit_class_sizes(G)


def test_element_zero_is_identity_and_bfs_is_deterministic():
    gens = [[1, 2, 3, 4, 0], [1, 2, 0, 3, 4]]
    G1, G2 = build_group(gens), build_group(gens)
    assert tuple(G1.elements[0]) == (0, 1, 2, 3, 4)
    assert np.array_equal(G1.mul, G2.mul)
    # first generator is element 1
    assert tuple(G1.elements[1]) == tuple(gens[0])


def test_mul_is_apply_left_then_right(s3):
    elems = perm_elements(s3)
    for a in range(6):
        for b in range(6):
            assert elems[s3.mul[a, b]] == compose(elems[a], elems[b])
            assert elems[s3.inv[a]] == invert(elems[a])


def test_order_exceeded():
    with pytest.raises(OrderExceeded):
        build_group([[1, 2, 3, 4, 0], [1, 2, 0, 3, 4]], max_order=59)


def test_invalid_permutation():
    with pytest.raises(NotABijection):
        build_group([[0, 0]])
    with pytest.raises(InvalidPermutation):
        build_group([[1, 0], [0, 1, 2]])
    with pytest.raises(InvalidPermutation):
        build_group([])


def test_axioms(corpus_name):
    assert check_group_axioms(group(corpus_name))


def test_axioms_sampled_above_cutoff():
    assert check_group_axioms(group("sl28"), exhaustive_up_to=100, samples=10_000)


def test_axioms_detect_broken_table():
    G = group("s3")
    broken = G.mul.copy()
    broken[1, 2], broken[1, 3] = broken[1, 3], broken[1, 2]
    from prodmix.groups import GroupTable
    assert not check_group_axioms(GroupTable(broken))


def test_class_equation(corpus_name):
    G = group(corpus_name)
    assert sum(K.size for K in G.classes) == G.order
    for K in G.classes:
        assert G.order % K.size == 0
        assert K.representative in K
        assert K.size * G.centralizer_order(K.representative) == G.order


def test_classes_closed_under_conjugation(corpus_name):
    G = group(corpus_name)
    for K in G.classes:
        conj = G.mul[G.mul[G.inv[:, None], K.members[None, :]], np.arange(G.order)[:, None]]
        assert set(np.unique(conj).tolist()) == set(K.members.tolist())


def test_class_ordering(corpus_name):
    keys = [(K.size, int(K.members[0])) for K in group(corpus_name).classes]
    assert keys == sorted(keys)


def test_inverse_set_examples(s3, a5):
    e = s3.subset([0])
    assert inverse_set(e, s3) == e
    for K in a5.classes:
        X = a5.class_set(K.index)
        assert inverse_set(X, a5) == X
    three_cycles = s3.class_set(1)
    inv = inverse_set(three_cycles, s3)
    assert inv == three_cycles
    a, b = three_cycles.indices()
    assert s3.inv[a] == b


def test_inverse_of_class_is_class(corpus_name):
    G = group(corpus_name)
    for K in G.classes:
        inv = inverse_set(G.class_set(K.index), G)
        assert inv.is_normal and len(inv.classes()) == 1


def test_normal_closure_examples(s3):
    t = s3.class_set(2).indices()[0]
    closed = normal_closure(s3.subset([t]), s3)
    assert closed == s3.class_set(2) and closed.is_normal
    assert normal_closure(s3.empty_set(), s3).size == 0
    N = s3.union_of_classes([0, 2])
    assert normal_closure(N, s3) == N


def test_left_translate_examples(s3):
    X = s3.subset([1, 4])
    assert left_translate(0, X, s3) == X
    assert left_translate(3, s3.full_set(), s3) == s3.full_set()
    t = s3.class_set(2).indices()[0]
    pair = s3.subset([0, t])
    assert left_translate(t, pair, s3) == pair


subsets_of_a5 = st.sets(st.integers(0, 59), max_size=60)


@settings(max_examples=60, deadline=None)
@given(subsets_of_a5, subsets_of_a5, st.integers(0, 59))
def test_set_algebra_properties(xs, ys, g):
    G = group("a5")
    X, Y = G.subset(xs), G.subset(xs | ys)
    cX, cY = normal_closure(X, G), normal_closure(Y, G)
    assert normal_closure(cX, G) == cX
    assert X <= cX and cX <= cY
    assert left_translate(g, X, G).size == X.size
    assert inverse_set(X, G).size == X.size
    assert inverse_set(X, G).is_normal == X.is_normal


def test_normality_flag(a5):
    assert a5.union_of_classes([1, 3]).is_normal
    assert not a5.subset([1]).is_normal
    assert a5.empty_set().is_normal and a5.full_set().is_normal


def test_simplicity_and_derived_subgroup():
    assert is_simple(group("a5")) and is_simple(group("psl27")) and is_simple(group("sl28"))
    assert is_simple(group("c2"))
    assert not is_simple(group("s4")) and not is_simple(group("a4")) and not is_simple(group("trivial"))
    assert derived_subgroup(group("s4")).size == 12
    assert derived_subgroup(group("a4")).size == 4
    assert generated_subgroup(group("s4").class_set(1), group("s4")).size == 4  # Klein four


def test_exponent_and_orders():
    assert group("a5").exponent() == 30
    assert group("sl28").exponent() == 126
    G = group("s4")
    for g in range(G.order):
        assert G.power(g, int(G.element_orders()[g])) == 0
