import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from klrpbw.rootsys import (CartanDatum, CartanError, ReducedWordError, convex_order, default_minimal_pair,
                            height, hmm_order, hmm_words, is_convex, kostant_partition, kp_vectors,
                            minimal_pairs, named_type, random_reduced_word, reduced_words_w0, root_of_word,
                            root_sum_split, sub)

ROOT_COUNTS = {"A1": 1, "A2": 3, "A3": 6, "A4": 10, "B2": 4, "B3": 9, "C3": 9, "D4": 12, "E6": 36,
               "F4": 24, "G2": 6}

# labels: B_r short node 0, C_r long node 0, G2 0 short, F4 0-1 short, D4 3 on node 1,
# E6 chain 0-2-3-4-5 with 1 on 3
HIGHEST = {"A3": (1, 1, 1), "B3": (2, 2, 1), "C3": (1, 2, 2), "D4": (1, 2, 1, 1), "E6": (1, 2, 2, 3, 2, 1),
           "F4": (2, 4, 3, 2), "G2": (3, 2), "B2": (2, 1)}


@pytest.mark.parametrize("name,count", sorted(ROOT_COUNTS.items()))
def test_root_counts(name, count):
    assert len(named_type(name).positive_roots) == count


@pytest.mark.parametrize("name,top", sorted(HIGHEST.items()))
def test_highest_root(name, top):
    C = named_type(name)
    assert max(C.positive_roots, key=height) == top


def test_norms_follow_labeling():
    assert [named_type("B3").norm(i) for i in range(3)] == [2, 4, 4]
    assert [named_type("C3").norm(i) for i in range(3)] == [4, 2, 2]
    assert [named_type("G2").norm(i) for i in range(2)] == [2, 6]
    F4 = named_type("F4")
    assert [F4.norm(i) for i in range(4)] == [2, 2, 4, 4] and F4.pairing[1][2] == -2


def test_invalid_cartan_data():
    with pytest.raises(CartanError):
        CartanDatum(((2, 1), (1, 2)))          # positive off-diagonal
    with pytest.raises(CartanError):
        CartanDatum(((2, -1), (-1, 3)))        # odd norm
    with pytest.raises(CartanError):
        CartanDatum(((2, -2), (-2, 2)))        # affine, not finite type
    with pytest.raises(CartanError):
        named_type("Q3")


def test_number_of_reduced_words():
    # classical counts: A2 2, A3 16, B2 2, G2 2, B3 42
    for name, n in (("A2", 2), ("A3", 16), ("B2", 2), ("G2", 2), ("B3", 42)):
        assert len(reduced_words_w0(named_type(name))) == n


def _reflection(C, i):
    r = C.rank
    S = np.eye(r, dtype=int)
    for j in range(r):
        S[i, j] -= C.cartan_integer(i, j)
    return S


def _inversions(C, word):
    """N(u) = {beta > 0 : u beta < 0} for u = s_{w_0} s_{w_1} ... computed with matrices."""
    M = np.eye(C.rank, dtype=int)
    for i in word:
        M = M @ _reflection(C, i)
    return {b for b in C.positive_roots if (M @ np.array(b) <= 0).all()}


@pytest.mark.parametrize("name", ["A3", "B3", "C3", "G2", "F4"])
def test_order_suffixes_are_inversion_sets(name):
    C = named_type(name)
    rng = random.Random(7)
    for _ in range(5):
        w = random_reduced_word(C, rng)
        order = convex_order(C, w)
        for k in range(len(w) + 1):
            assert set(order.roots[k:]) == _inversions(C, w[k:])


def test_non_reduced_words_rejected():
    C = named_type("A2")
    with pytest.raises(ReducedWordError):
        convex_order(C, (0, 0, 1))
    with pytest.raises(ReducedWordError):
        convex_order(C, (0, 1))
    with pytest.raises(ReducedWordError):
        convex_order(C, (0, 1, 2))


@pytest.mark.parametrize("name", ["A3", "B3", "C3", "D4", "F4"])
def test_random_orders_are_convex(name):
    C = named_type(name)
    rng = random.Random(3)
    for _ in range(10):
        assert is_convex(C, convex_order(C, random_reduced_word(C, rng)))


def test_non_convex_order_detected():
    C = named_type("A2")
    assert not is_convex(C, [(1, 0), (0, 1), (1, 1)])


def _kpf_series(C, nu):
    """Coefficient of x^nu in prod over roots of 1/(1 - x^beta), by truncated series multiplication."""
    series = {tuple(0 for _ in nu): 1}
    for b in C.positive_roots:
        out = {}
        for e, c in series.items():
            k = 0
            while True:
                f = tuple(x + k * y for x, y in zip(e, b))
                if any(x > n for x, n in zip(f, nu)):
                    break
                out[f] = out.get(f, 0) + c
                k += 1
        series = out
    return series.get(tuple(nu), 0)


@pytest.mark.parametrize("name", ["A2", "A3", "B2", "B3", "G2", "C3"])
def test_kostant_partition_against_series(name):
    C = named_type(name)
    order, _ = hmm_order(C)
    for nu in itertools.product(range(3), repeat=C.rank):
        if any(nu):
            n = kostant_partition(C, nu)
            assert n == _kpf_series(C, nu)
            assert len(kp_vectors(order, nu)) == n


def test_kostant_partition_small_values():
    assert kostant_partition(named_type("A2"), (1, 1)) == 2
    assert kostant_partition(named_type("A3"), (1, 1, 1)) == 4
    assert kostant_partition(named_type("G2"), (3, 2)) == _kpf_series(named_type("G2"), (3, 2))


def _minimal_pairs_bruteforce(order, alpha):
    pos = order.index
    pairs = [(b, sub(alpha, b)) for b in order.roots if order.cartan.is_root(sub(alpha, b))]
    pairs = [(b, g) for b, g in pairs if pos(b) < pos(alpha) < pos(g)]
    return {(b, g) for b, g in pairs
            if not any((b2, g2) != (b, g) and pos(b) <= pos(b2) and pos(g2) <= pos(g) for b2, g2 in pairs)}


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["A3", "B3", "C3", "G2", "F4"]), st.integers(0, 10**6))
def test_minimal_pairs_against_definition(name, seed):
    C = named_type(name)
    order = convex_order(C, random_reduced_word(C, random.Random(seed)))
    for a in order.roots:
        if height(a) > 1:
            got = minimal_pairs(order, a)
            assert set(got) == _minimal_pairs_bruteforce(order, a)
            b, g = default_minimal_pair(order, a)
            assert order.index(g) == min(order.index(x[1]) for x in got)


@pytest.mark.parametrize("name", ["A3", "B3", "C3", "D4", "F4", "G2"])
def test_hmm_words_concatenate_along_minimal_pairs(name):
    C = named_type(name)
    order, words = hmm_order(C)
    assert is_convex(C, order)
    for a, w in words.items():
        assert C.word_weight(w) == a and root_of_word(C, w) == a
        if height(a) > 1:
            assert any(words[g] + words[b] == w for b, g in minimal_pairs(order, a))


def test_hmm_words_type_a_are_intervals():
    words = hmm_words(named_type("A3"))
    assert words[(1, 1, 1)] == (0, 1, 2)
    assert words[(0, 1, 1)] == (1, 2)


def test_root_sum_split():
    C = named_type("B2")
    S = root_sum_split(C, (2, 1), [(1, 0), (1, 0), (0, 1)])
    part = tuple(map(sum, zip(*[[(1, 0), (1, 0), (0, 1)][s] for s in S])))
    assert C.is_root(part) and C.is_root(sub((2, 1), part))
    with pytest.raises(ValueError):
        root_sum_split(C, (2, 1), [(1, 0), (0, 1)])
