"""Reference data: the minimal-pair tables for types B, C, F4, G2, the G2
five-dimensional module and the F4 element identity.

Rows are dicts with keys alpha, gamma, beta (words), ext ("beta" or "gamma": which
self-extension is used), x (list of phi indices, leftmost factor first) and jj.
"""

from __future__ import annotations

from fractions import Fraction

from ..rootsys import CartanDatum, hmm_words, type_B, type_C, type_F4, type_G2
from .modules import FiniteModule


def _w(text: str) -> tuple[int, ...]:
    return tuple(int(c) for c in text)


def _rng(a: int, b: int) -> tuple[int, ...]:
    """a, a+1, ..., b (empty when b < a)."""
    return tuple(range(a, b + 1))


def _down(a: int, b: int) -> tuple[int, ...]:
    """a, a-1, ..., b."""
    return tuple(range(a, b - 1, -1))


def _row(alpha, gamma, beta, ext, x, jj, family):
    return {"alpha": tuple(alpha), "gamma": tuple(gamma), "beta": tuple(beta), "ext": ext,
            "x": list(x), "jj": tuple(jj) if jj is not None else None, "family": family}


def _keep_roots(C: CartanDatum, rows: list[dict]) -> list[dict]:
    """Drop family instances whose alpha is not the good word of a root."""
    good = set(hmm_words(C).values())
    seen = set()
    out = []
    for r in rows:
        if r["alpha"] in good and r["alpha"] not in seen:
            seen.add(r["alpha"])
            out.append(r)
    return out


def table_B(r: int) -> list[dict]:
    rows = []
    for i in range(r):
        for j in range(i + 1, r):
            rows.append(_row(_rng(i, j), _rng(i, j - 1), (j,), "beta", [j - i, j - i],
                             _rng(i, j - 2) + (j, j - 1), "i..j"))
    for k in range(1, r):
        jj = (0, 1, 0) + _rng(2, k)
        rows.append(_row((0,) + _rng(0, k), (0,), _rng(0, k), "gamma", [1, 2, 2], jj, "00..k"))
    for k in range(2, r):
        for j in range(1, k):
            alpha = _down(j, 0) + _rng(0, k)
            beta = _down(j - 1, 0) + _rng(0, k)
            jj = (j - 1, j) + _down(j - 2, 0) + _rng(0, k)
            rows.append(_row(alpha, (j,), beta, "gamma", [1, 1], jj, "j..00..k"))
    return _keep_roots(type_B(r), rows)


def table_C(r: int) -> list[dict]:
    rows = [_row((0, 1), (0,), (1,), "gamma", [1, 1], (1, 0), "01")]
    for j in range(2, r):
        for i in range(j):
            rows.append(_row(_rng(i, j), _rng(i, j - 1), (j,), "beta", [j - i, j - i],
                             _rng(i, j - 2) + (j, j - 1), "i..j"))
    for k in range(2, r):
        rows.append(_row((1, 0) + _rng(1, k), (1,), _rng(0, k), "gamma", [1, 2, 1],
                         (0, 1, 1) + _rng(2, k), "101..k"))
    for j in range(2, r):
        for k in range(1, r):
            alpha = _down(j, 0) + _rng(1, k)
            beta = _down(j - 1, 0) + _rng(1, k)
            jj = (j - 1, j) + _down(j - 2, 0) + _rng(1, k)
            rows.append(_row(alpha, (j,), beta, "gamma", [1, 1], jj, "j..101..k"))
    for j in range(1, r):
        x = list(_down(j + 1, 2)) + [1, 1] + list(_rng(2, j + 1))
        jj = (1,) + _rng(0, j) + _rng(2, j)
        rows.append(_row(_rng(0, j) + _rng(1, j), _rng(0, j), _rng(1, j), "beta", x, jj, "0..j1..j"))
    return _keep_roots(type_C(r), rows)


def _lit(alpha, gamma, beta, ext, x, jj):
    return _row(_w(alpha), _w(gamma), _w(beta), ext, x, _w(jj) if jj else None, "literal")


def table_F4() -> list[dict]:
    return [
        _lit("0123", "0", "123", "gamma", [1, 1], "1023"),
        _lit("1012", "1", "012", "gamma", [1, 2, 3, 3, 2, 1], "0121"),
        _lit("01012", "01", "012", "gamma", [2, 3, 4, 4, 3, 2], "00121"),
        _lit("10123", "1", "0123", "gamma", [1, 2, 3, 3, 2, 1], "01213"),
        _lit("010123", "01", "0123", "gamma", [2, 3, 4, 4, 3, 2], "001213"),
        _lit("210123", "2", "10123", "gamma", [1, 1], "120123"),
        _lit("1210123", "1", "210123", "gamma", [1, 2, 3, 3, 2, 1], "2101123"),
        _lit("2010123", "2", "010123", "gamma", [1, 2, 2, 1], "0120123"),
        _lit("12010123", "12", "010123", "beta", [4, 3, 5, 4, 2, 3, 3, 2], "10120123"),
        _lit("112010123", "1", "12010123", "gamma", [1, 2, 2], "121010123"),
        _lit("2112010123", "2", "112010123", "gamma", [1, 1], "1212010123"),
        _lit("21012310123", "210123", "10123", "gamma",
             [6, 5, 4, 3, 2, 1, 1, 2, 3, 4, 5, 6], "12101230123"),
    ]


def table_G2() -> list[dict]:
    return [
        _lit("01", "0", "1", "beta", [1, 1], "10"),
        _lit("001", "0", "01", "gamma", [], None),
        _lit("0001", "0", "001", "gamma", [3, 3, 2, 1], "0010"),
        _lit("00101", "001", "01", "gamma", [2, 2, 1, 3, 4, 2, 3], "01001"),
    ]


def appendix_fixtures(rank_bc: int = 3) -> dict:
    """All four tables; the B and C families are instantiated in rank ``rank_bc``."""
    return {
        f"B{rank_bc}": {"cartan": type_B(rank_bc), "rows": table_B(rank_bc)},
        f"C{rank_bc}": {"cartan": type_C(rank_bc), "rows": table_C(rank_bc)},
        "F4": {"cartan": type_F4(), "rows": table_F4()},
        "G2": {"cartan": type_G2(), "rows": table_G2()},
    }


def x_trajectory(row: dict) -> list[tuple[int, ...]]:
    """Words visited by x e_{ii_alpha}, applying the rightmost factor first."""
    from .algebra import swap_word
    cur = row["alpha"]
    path = [cur]
    for k in reversed(row["x"]):
        cur = swap_word(cur, k)
        path.append(cur)
    return path


def x_expression(row: dict) -> str:
    word = "".join(map(str, row["alpha"]))
    return " ".join(f"s{k}" for k in row["x"]) + f" e({word})"


# -- the G2 five-dimensional module ----------------------------------------------------

def g2_five_dim_module() -> FiniteModule:
    """Basis v001[3], v001[1], v001[-1], v001[-3], v010[0] (indices 0..4)."""
    basis = [((0, 0, 1), 3), ((0, 0, 1), 1), ((0, 0, 1), -1), ((0, 0, 1), -3), ((0, 1, 0), 0)]
    deg = {d: i for i, (w, d) in enumerate(basis) if w == (0, 0, 1)}
    one = Fraction(1)
    ops: dict = {"phi_1": {0: {1: one}, 2: {3: one}}, "phi_2": {3: {4: one}, 4: {0: one}},
                 "y_1": {}, "y_2": {}}
    for d, i in deg.items():
        if d + 2 in deg:
            ops["y_1"][i] = {deg[d + 2]: -one}
            ops["y_2"][i] = {deg[d + 2]: one}
    return FiniteModule((2, 1), basis, ops)


# -- the F4 element identity -----------------------------------------------------------

F4_IDENTITY_LHS = "s1 s2 s3^2 s2 s1 e(1012)"
F4_IDENTITY_RHS = "(s1 s2^2 s1 y1^2 - s2 s1 y1 s2 - y1 - s1 s2 s1 y3) e(1012)"
# Q_ij depends on a total order of I; this identity holds with 2 ordered before 1.
F4_IDENTITY_LABEL_ORDER = (0, 2, 1, 3)
