import pytest

from klrpbw.klr.fixtures import (F4_IDENTITY_LABEL_ORDER, appendix_fixtures, table_B, table_C, table_G2,
                                 x_expression, x_trajectory)
from klrpbw.rootsys import hmm_words

from conftest import hmm_table


FIXTURES = appendix_fixtures(3)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_rows_are_good_words(name):
    C, rows = FIXTURES[name]["cartan"], FIXTURES[name]["rows"]
    good = hmm_words(C)
    by_word = {w: a for a, w in good.items()}
    assert rows
    for row in rows:
        assert row["alpha"] in by_word
        assert row["gamma"] in by_word and row["beta"] in by_word
        assert row["alpha"] == row["gamma"] + row["beta"]
        assert row["ext"] in ("beta", "gamma")


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_x_factors_through_jj(name):
    # x e(ii) is an endomorphism of the ii-weight space passing through e(jj)
    for row in FIXTURES[name]["rows"]:
        path = x_trajectory(row)
        if row["jj"] is None:
            assert row["x"] == []
            continue
        assert path[-1] == row["alpha"], x_expression(row)
        assert row["jj"] in path[1:-1], x_expression(row)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_jj_misses_cuspidal_support(name):
    # e(jj) S_alpha = 0 while e(ii_alpha) S_alpha is nonzero
    C, order, words, table = hmm_table(name)
    root_of = {w: a for a, w in words.items()}
    for row in FIXTURES[name]["rows"]:
        x = table.get(root_of[row["alpha"]])
        assert x.coefficient(row["alpha"])
        if row["jj"] is not None:
            assert not x.coefficient(row["jj"])


def test_row_counts():
    assert len(table_B(3)) == 6 and len(table_C(3)) == 6 and len(table_G2()) == 4
    assert len(FIXTURES["F4"]["rows"]) == 12
    # B and C families instantiate in other ranks too
    assert len(table_B(4)) > len(table_B(3)) and len(table_C(4)) > len(table_C(3))


def test_f4_label_order_is_a_permutation():
    assert sorted(F4_IDENTITY_LABEL_ORDER) == [0, 1, 2, 3]
    i = F4_IDENTITY_LABEL_ORDER.index
    assert i(0) < i(1) and i(2) < i(1)


def test_expression_text():
    row = table_G2()[0]
    assert x_expression(row) == "s1 s1 e(01)"
