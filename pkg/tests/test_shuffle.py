import itertools

import pytest
from hypothesis import given, settings, strategies as st

from klrpbw.qarith import LaurentPoly, ONE, RatFunc, q_power
from klrpbw.rootsys import named_type
from klrpbw.shuffle import (ShuffleElement, deconcat, gram_matrix, monomial_form, restrict, shuffle_product,
                            shuffle_words, transported_form, words_of_weight)


def _shuffle_oracle(C, u, v):
    """Sum over position sets; each pair (a in u, b in v) with b placed before a gives q^{-a.b}."""
    n = len(u) + len(v)
    out = {}
    for pos in itertools.combinations(range(n), len(u)):
        w, iu, iv, exp = [None] * n, 0, 0, 0
        seen_v = []
        for k in range(n):
            if k in pos:
                a = u[iu]
                exp -= sum(C.pairing[a][b] for b in seen_v)
                w[k] = a
                iu += 1
            else:
                w[k] = v[iv]
                seen_v.append(v[iv])
                iv += 1
        out.setdefault(tuple(w), {}).setdefault(exp, 0)
        out[tuple(w)][exp] += 1
    return ShuffleElement({w: LaurentPoly(c) for w, c in out.items()}, C.rank)


words = st.lists(st.integers(0, 2), min_size=0, max_size=3).map(tuple)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(["A3", "B3", "C3"]), words, words)
def test_shuffle_words_against_bruteforce(name, u, v):
    C = named_type(name)
    assert shuffle_words(C, u, v) == _shuffle_oracle(C, u, v)


def test_shuffle_two_letters_a2():
    C = named_type("A2")
    x = shuffle_product(C, ShuffleElement.word((0,)), ShuffleElement.word((1,)))
    assert x == ShuffleElement({(0, 1): ONE, (1, 0): q_power(1)}, 2)
    y = shuffle_product(C, ShuffleElement.word((0,)), ShuffleElement.word((0,)))
    assert y == ShuffleElement({(0, 0): LaurentPoly({0: 1, -2: 1})}, 2)


@st.composite
def element(draw):
    """A homogeneous element of rank 2 with small coefficients."""
    nu = draw(st.sampled_from([(1, 0), (0, 1), (1, 1), (2, 0), (2, 1)]))
    ws = words_of_weight(nu)
    coeffs = draw(st.lists(st.dictionaries(st.integers(-2, 2), st.integers(-2, 2), max_size=2),
                           min_size=len(ws), max_size=len(ws)))
    return {w: LaurentPoly(c) for w, c in zip(ws, coeffs)}



@settings(max_examples=40, deadline=None)
@given(element(), element(), element())
def test_associativity_and_unit(a, b, c):
    C = named_type("G2")
    x, y, z = (ShuffleElement(t, 2) for t in (a, b, c))
    assert shuffle_product(C, shuffle_product(C, x, y), z) == shuffle_product(C, x, shuffle_product(C, y, z))
    one = ShuffleElement.one(2)
    assert shuffle_product(C, one, x) == x == shuffle_product(C, x, one)


@settings(max_examples=40, deadline=None)
@given(words, words)
def test_commutative_at_q1(u, v):
    C = named_type("B3")
    lhs = shuffle_words(C, u, v).specialize_q1()
    rhs = shuffle_words(C, v, u).specialize_q1()
    assert lhs == rhs


def test_restrict_and_deconcat_agree():
    C = named_type("A2")
    x = shuffle_words(C, (0, 1), (1, 0))
    d = deconcat(x, (1, 1), (1, 1))
    r = restrict(x, [(1, 1), (1, 1)])
    assert {(a, b): c for a, b, c in d} == r
    with pytest.raises(ValueError):
        deconcat(x, (1, 0), (0, 1))


def test_restriction_of_product_splits():
    # Res_{lam,mu}(E_0 o E_1) for the A2 letters: only word 01 survives for (a0, a1)
    C = named_type("A2")
    x = shuffle_words(C, (0,), (1,))
    assert restrict(x, [(1, 0), (0, 1)]) == {((0,), (1,)): ONE}
    assert restrict(x, [(0, 1), (1, 0)]) == {((1,), (0,)): q_power(1)}


def test_words_of_weight():
    assert words_of_weight((1, 1)) == [(0, 1), (1, 0)]
    assert len(words_of_weight((2, 1, 1))) == 12


def test_json_roundtrip():
    x = ShuffleElement({(0, 1): LaurentPoly({-1: 1, 1: 1}), (1, 0): ONE}, 2)
    data = x.to_json()
    assert set(data) == {"0,1", "1,0"}
    assert ShuffleElement.from_json(data, 2) == x


def _gram_oracle(C, ii, jj):
    """sum over bijections sigma with jj[sigma(k)] = ii[k] of q^{-sum over inverted pairs of ii_a . ii_b}."""
    total = {}
    for p in itertools.permutations(range(len(ii))):
        if all(jj[p[k]] == ii[k] for k in range(len(ii))):
            e = -sum(C.pairing[ii[a]][ii[b]] for a, b in itertools.combinations(range(len(ii)), 2) if p[a] > p[b])
            total[e] = total.get(e, 0) + 1
    return LaurentPoly(total)


@pytest.mark.parametrize("name,nu", [("A2", (1, 1)), ("A2", (2, 1)), ("B2", (2, 1)), ("G2", (2, 1)),
                                     ("A3", (1, 1, 1)), ("B3", (1, 2, 1)), ("G2", (1, 2))])
def test_gram_matrix_against_permutation_sum(name, nu):
    C = named_type(name)
    ws, P = gram_matrix(C, nu)
    for a, row in zip(ws, P):
        for b, c in zip(ws, row):
            # permutation sum counts each bijection once; equal letters are not distinguished
            assert c == _gram_oracle(C, a, b)
    assert all(P[i][j] == P[j][i] for i in range(len(ws)) for j in range(len(ws)))


def test_monomial_form_single_letter():
    C = named_type("G2")
    assert monomial_form(C, (1,), (1,)) == RatFunc(ONE, ONE - q_power(6))
    assert monomial_form(C, (0, 1), (1, 1)).is_zero()


def test_transported_form_on_words():
    # a character dual to E_01 pairs to 1 with E_01 transported back
    C = named_type("A2")
    e = ShuffleElement.word((0,), 1, 2)
    assert transported_form(C, e, e) == RatFunc(ONE - q_power(2))
