import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from klrpbw.pbw import (CuspidalTable, build_table, cache_key, check_cuspidal_restriction,
                        check_power_indivisible, check_restriction_lemma, costandard_character,
                        cuspidal_character, standard_character)
from klrpbw.qarith import ONE, LaurentPoly, RatFunc, q_power, qfact
from klrpbw.rootsys import convex_order, height, hmm_order, kp_unit, kp_vectors, minimal_pairs, named_type, \
    random_reduced_word
from klrpbw.shuffle import ShuffleElement, shuffle_product, transported_form

from conftest import hmm_table


def _runs(word):
    out, k = [], 1
    for a, b in zip(word, word[1:]):
        if a == b:
            k += 1
        else:
            out.append((a, k))
            k = 1
    out.append((word[-1], k))
    return out


@pytest.mark.parametrize("name", ["A3", "B2", "B3", "C3", "G2", "F4"])
def test_single_word_cuspidals_carry_the_nilhecke_dimension(name):
    # a simple module supported on one word ii is the tensor of nilHecke simples, so its
    # graded dimension is prod over runs (i^k) of [k]_i!
    C, order, words, table = hmm_table(name)
    for a in order.roots:
        x = table.get(a)
        if len(x) == 1:
            (w, c), = x.items()
            expected = ONE
            for i, k in _runs(w):
                expected = expected * qfact(k, C.norm(i))
            assert c == expected, (a, w)


def test_known_characters():
    C, order, words, table = hmm_table("A2")
    assert table.get((1, 1)) == ShuffleElement.word((0, 1), 1, 2)
    C, order, words, table = hmm_table("B2")
    assert table.get((2, 1)) == ShuffleElement.word((0, 0, 1), LaurentPoly({-1: 1, 1: 1}), 2)
    C, order, words, table = hmm_table("G2")
    x = table.get((3, 2))
    assert set(x.words()) == {(0, 0, 0, 1, 1), (0, 0, 1, 0, 1)}


def test_support_contains_good_word():
    for name in ("B3", "C3", "F4", "G2"):
        C, order, words, table = hmm_table(name)
        for a, w in words.items():
            x = table.get(a)
            assert x.coefficient(w)
            # the good word is the largest word of the support in the order defining the table
            key = lambda u: tuple(C.rank - 1 - i for i in reversed(u))
            assert max(x.words(), key=key) == w


@settings(max_examples=12, deadline=None)
@given(st.sampled_from(["A3", "B3", "C3"]), st.integers(0, 10**6))
def test_cuspidal_invariants_random_orders(name, seed):
    C = named_type(name)
    order = convex_order(C, random_reduced_word(C, random.Random(seed)))
    table = CuspidalTable(order).complete()
    for a in order.roots:
        x = table.get(a)
        assert x.is_bar_invariant() and x.content() == 1 and x.is_nonnegative()
        assert x.weight(C.rank) == a
        if height(a) > 1:
            for pair in minimal_pairs(order, a):
                assert cuspidal_character(order, a, table, pair) == x


def test_non_root_rejected():
    C, order, _, table = hmm_table("A2")
    with pytest.raises(ValueError):
        cuspidal_character(order, (2, 0), table)


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3"])
def test_cuspidal_restriction_and_powers(name):
    C, order, _, table = hmm_table(name)
    for a in order.roots:
        assert check_cuspidal_restriction(order, a, table).ok
        for n in ((1, 2) if height(a) <= 3 else (1,)):
            v = check_power_indivisible(order, a, n, table)
            assert v.ok, v.failures


def test_restriction_lemma_examples():
    C, order, _, table = hmm_table("A2")
    nu = (1, 1)
    ms = kp_vectors(order, nu)
    verdicts = {(m, n): check_restriction_lemma(order, m, n, table) for m in ms for n in ms}
    assert all(v.ok for v in verdicts.values())
    m = tuple(1 if r in [(1, 0), (0, 1)] else 0 for r in order.roots)
    assert verdicts[(m, m)].data["shift"] is not None
    with pytest.raises(ValueError):
        check_restriction_lemma(order, ms[0], kp_unit(order, (1, 0)), table)


def test_standard_and_costandard_are_ordered_products():
    C, order, _, table = hmm_table("A2")
    m = (1, 0, 1)
    first, last = table.get(order.roots[0]), table.get(order.roots[2])
    assert standard_character(order, m, table) == shuffle_product(C, first, last)
    assert costandard_character(order, m, table) == shuffle_product(C, last, first)


@pytest.mark.parametrize("name", ["B3", "C3"])
def test_form_value_rank_three(name):
    C, order, _, table = hmm_table(name)
    for a in order.roots:
        x = table.get(a)
        assert transported_form(C, x, x) == RatFunc(ONE - q_power(C.dot(a, a)))


def test_cache_cold_and_warm_agree(tmp_path, monkeypatch):
    monkeypatch.setenv("KLRPBW_CACHE", str(tmp_path))
    C = named_type("G2")
    order, _ = hmm_order(C)
    cold = build_table(order, use_cache=True, label="G2")
    files = list(tmp_path.iterdir())
    assert len(files) == 1 and files[0].name == f"{cache_key(order, 'G2')}.json"
    warm = build_table(order, use_cache=True, label="G2")
    assert cold.to_json() == warm.to_json()
    # a damaged cache file is recomputed, not trusted
    files[0].write_text("{not json")
    again = build_table(order, use_cache=True, label="G2")
    assert again.to_json() == cold.to_json()
    assert json.loads(files[0].read_text()) == cold.to_json()


def test_cache_key_depends_on_word():
    C = named_type("B2")
    a = convex_order(C, (0, 1, 0, 1))
    b = convex_order(C, (1, 0, 1, 0))
    assert cache_key(a) != cache_key(b)
