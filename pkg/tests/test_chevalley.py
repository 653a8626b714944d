import itertools
import random

import pytest
import sympy

from klrpbw.chevalley import (PAIRING_READS_LEFT_TO_RIGHT, UnsupportedType, chevalley_check, fold, fold_check,
                              is_nilpotent, is_simply_laced, nilpotent_algebra, root_vectors, z_pairing)
from klrpbw.rootsys import convex_order, height, hmm_order, named_type, random_reduced_word, type_A
from klrpbw.shuffle import words_of_weight

from conftest import hmm_table

ALL_TYPES = ["A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4", "E6"]


@pytest.mark.parametrize("name", ALL_TYPES)
def test_structure_constant_invariants(name):
    n = nilpotent_algebra(named_type(name))
    assert n.check_jacobi() == []
    assert n.check_antisymmetry()
    assert n.check_chevalley()


@pytest.mark.parametrize("name", ["A3", "B3", "G2"])
def test_adjoint_matrices_nilpotent(name):
    C = named_type(name)
    order, _ = hmm_order(C)
    for M in root_vectors(order).values():
        assert is_nilpotent(M)


@pytest.mark.parametrize("name", ["B2", "B3", "C3", "G2", "F4"])
def test_fold_orbit_pairing_is_dual_datum(name):
    C = named_type(name)
    F = fold(C)
    assert F.orbit_condition()
    A = F.lie_cartan_matrix()
    assert A == tuple(tuple(C.cartan_integer(i, j) for j in C.index_set) for i in C.index_set)
    # the orbit pairing is the symmetrized form of the transposed Cartan matrix
    P = F.orbit_pairing()
    for i, j in itertools.product(C.index_set, repeat=2):
        assert 2 * P[i][j] == A[j][i] * P[i][i]


def test_fold_unsupported_for_simply_laced():
    assert is_simply_laced(named_type("D4"))
    with pytest.raises(UnsupportedType):
        fold(named_type("A3"))


def _sl_oracle(order, ii):
    """Coefficient of t1...tn in Z_alpha(exp(t1 E_{i1}) ... exp(tn E_{in})) in SL_{r+1}.

    Root vectors are the elementary matrices E_{a,b+1} for alpha_a + ... + alpha_b; the
    group element is factored as prod over the convex order of (1 + x_beta X_beta).
    """
    C = order.cartan
    r = C.rank
    ts = sympy.symbols(f"t0:{len(ii)}")

    def E(a, b):
        M = sympy.zeros(r + 1)
        M[a, b] = 1
        return M

    def truncate(expr):
        p = sympy.Poly(sympy.expand(expr), *ts)
        return sum((c * sympy.prod(t**e for t, e in zip(ts, m)) for m, c in p.terms() if max(m) <= 1),
                   sympy.Integer(0))

    g = sympy.eye(r + 1)
    for t, i in zip(ts, ii):
        g = g * (sympy.eye(r + 1) + t * E(i, i + 1))
    g = g.applyfunc(truncate)

    def span(beta):
        idx = [k for k, c in enumerate(beta) if c]
        return idx[0], idx[-1] + 1

    x = {}
    for beta in sorted(order.roots, key=height):
        a, b = span(beta)
        prod = sympy.eye(r + 1)
        for gamma in order.roots:
            if gamma in x:
                prod = prod * (sympy.eye(r + 1) + x[gamma] * E(*span(gamma)))
        x[beta] = truncate(g[a, b] - prod[a, b])
    alpha = C.word_weight(ii)
    mono = sympy.prod(ts)
    return int(sympy.Poly(x[alpha], *ts).coeff_monomial(mono))


@pytest.mark.parametrize("rank,seed", [(2, 0), (2, 1), (3, 0), (3, 5), (3, 9)])
def test_z_pairing_against_matrix_group(rank, seed):
    C = type_A(rank)
    order = convex_order(C, random_reduced_word(C, random.Random(seed)))
    for alpha in order.roots:
        signs = set()
        for w in words_of_weight(alpha):
            z, o = z_pairing(order, w, alpha), _sl_oracle(order, w)
            assert abs(z) == abs(o), (alpha, w)
            if z:
                signs.add(z * o > 0)
        assert len(signs) <= 1, alpha


def test_pairing_convention_constant():
    assert PAIRING_READS_LEFT_TO_RIGHT is True


def test_z_pairing_a2_value_and_errors():
    C, order, _, table = hmm_table("A2")
    assert z_pairing(order, (0, 1), (1, 1)) == table.get((1, 1)).specialize_q1()[(0, 1)]
    with pytest.raises(ValueError):
        z_pairing(order, (0, 0), (1, 1))


@pytest.mark.parametrize("name", ["A2", "A3", "B2", "G2", "B3", "C3"])
def test_cross_route_hmm(name):
    C, order, _, table = hmm_table(name)
    rep = chevalley_check(order, table)
    assert rep.ok
    assert set(rep.signs.values()) <= {1, -1} and set(rep.signs) == set(order.roots)


@pytest.mark.parametrize("name", ["B2", "G2"])
def test_fold_check_all_words(name):
    C, order, _, _ = hmm_table(name)
    F = fold(C)
    for a in order.roots:
        for w in words_of_weight(a):
            v = fold_check(order, a, w, F)
            assert v.ok, (a, w, v.failures)
