"""Quantum shuffle algebra: characters as word -> Laurent polynomial maps.

The product is the one dual to the twisted coproduct r: a letter a of the left
factor sitting to the right of a letter b of the right factor costs q^{-a.b}.
"""

from __future__ import annotations

import itertools
import json
import threading
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .qarith import LaurentPoly, RatFunc, ZERO, ONE, q_power
from .rootsys import CartanDatum
from . import linalg

Word = tuple[int, ...]
EMPTY: Word = ()


def parse_word(text: str | Sequence[int]) -> Word:
    """Accept "0,1,2", "0 1 2", "012" (single-digit letters) or a sequence."""
    if not isinstance(text, str):
        return tuple(int(i) for i in text)
    s = text.strip()
    if s in ("", "()", "[]"):
        return ()
    s = s.strip("()[]")
    if "," in s or " " in s:
        return tuple(int(t) for t in s.replace(",", " ").split())
    return tuple(int(ch) for ch in s)


def format_word(w: Sequence[int]) -> str:
    if all(0 <= i < 10 for i in w):
        return "".join(map(str, w))
    return ",".join(map(str, w))


def weight_of(word: Sequence[int], rank: int) -> tuple[int, ...]:
    nu = [0] * rank
    for i in word:
        nu[i] += 1
    return tuple(nu)


def words_of_weight(nu: Sequence[int]) -> list[Word]:
    """All words with the given letter multiplicities, in lexicographic order."""
    out: list[Word] = []
    nu = list(nu)
    total = sum(nu)
    acc: list[int] = []

    def rec():
        if len(acc) == total:
            out.append(tuple(acc))
            return
        for i, c in enumerate(nu):
            if c:
                nu[i] -= 1
                acc.append(i)
                rec()
                acc.pop()
                nu[i] += 1

    rec()
    return out


class ShuffleElement:
    """Finitely supported map word -> LaurentPoly, homogeneous of one weight."""

    __slots__ = ("_t", "rank")

    def __init__(self, terms: Mapping[Sequence[int], LaurentPoly | int] | None = None, rank: int | None = None):
        t: dict[Word, LaurentPoly] = {}
        for w, c in (terms or {}).items():
            if isinstance(c, int):
                c = LaurentPoly(c)
            if c:
                w = tuple(w)
                t[w] = t[w] + c if w in t else c
                if not t[w]:
                    del t[w]
        self._t = t
        if rank is None and t:
            rank = max((max(w) + 1 for w in t if w), default=0)
        self.rank = rank
        if t:
            lens = {len(w) for w in t}
            if len(lens) != 1 or len({tuple(sorted(w)) for w in t}) != 1:
                raise ValueError("shuffle element is not homogeneous")

    @classmethod
    def word(cls, w: Sequence[int], coeff: LaurentPoly | int = 1, rank: int | None = None) -> "ShuffleElement":
        return cls({tuple(w): coeff}, rank)

    @classmethod
    def one(cls, rank: int | None = None) -> "ShuffleElement":
        return cls({(): 1}, rank)

    @property
    def terms(self) -> dict[Word, LaurentPoly]:
        return dict(self._t)

    def items(self):
        return sorted(self._t.items())

    def words(self) -> list[Word]:
        return sorted(self._t)

    def coefficient(self, w: Sequence[int]) -> LaurentPoly:
        return self._t.get(tuple(w), ZERO)

    def __getitem__(self, w):
        return self.coefficient(w)

    def __len__(self):
        return len(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def weight(self, rank: int | None = None) -> tuple[int, ...] | None:
        r = rank if rank is not None else self.rank
        if not self._t or r is None:
            return None if r is None else (0,) * r
        return weight_of(next(iter(self._t)), r)

    def height(self) -> int:
        return len(next(iter(self._t))) if self._t else 0

    def _rank_with(self, other):
        return self.rank if self.rank is not None else other.rank

    def __add__(self, other: "ShuffleElement") -> "ShuffleElement":
        t = dict(self._t)
        for w, c in other._t.items():
            t[w] = t[w] + c if w in t else c
        return ShuffleElement(t, self._rank_with(other))

    def __neg__(self):
        return ShuffleElement({w: -c for w, c in self._t.items()}, self.rank)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: LaurentPoly | int) -> "ShuffleElement":
        if isinstance(c, int):
            c = LaurentPoly(c)
        return ShuffleElement({w: v * c for w, v in self._t.items()}, self.rank)

    def __rmul__(self, c):
        if isinstance(c, (int, LaurentPoly)):
            return self.scale(c)
        return NotImplemented

    def shift(self, k: int) -> "ShuffleElement":
        return ShuffleElement({w: v.shift(k) for w, v in self._t.items()}, self.rank)

    def bar(self) -> "ShuffleElement":
        return ShuffleElement({w: v.bar() for w, v in self._t.items()}, self.rank)

    def specialize_q1(self) -> dict[Word, int]:
        return {w: v.at_one() for w, v in sorted(self._t.items()) if v.at_one()}

    def is_bar_invariant(self) -> bool:
        return all(v.is_bar_invariant() for v in self._t.values())

    def is_nonnegative(self) -> bool:
        return all(v.is_nonnegative() for v in self._t.values())

    def content(self) -> int:
        from math import gcd
        g = 0
        for v in self._t.values():
            g = gcd(g, v.content())
        return g

    def __eq__(self, other):
        if not isinstance(other, ShuffleElement):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for w, c in sorted(self._t.items()):
            tag = f"({format_word(w)})"
            parts.append(tag if c == ONE else f"[{c}]{tag}")
        return " + ".join(parts)

    def __repr__(self):
        return f"ShuffleElement({self})"

    def to_json(self) -> dict[str, list[list[int]]]:
        return {",".join(map(str, w)): c.to_json() for w, c in sorted(self._t.items())}

    @classmethod
    def from_json(cls, data: Mapping[str, list], rank: int | None = None) -> "ShuffleElement":
        return cls({parse_word(k) if k else (): LaurentPoly.from_json(v) for k, v in data.items()}, rank)


def bar_element(x: ShuffleElement) -> ShuffleElement:
    return x.bar()


def specialize_q1(x: ShuffleElement) -> dict[Word, int]:
    return x.specialize_q1()


def dumps(x: ShuffleElement) -> str:
    return json.dumps(x.to_json(), sort_keys=True)


# -- product ----------------------------------------------------------------------

@lru_cache(maxsize=200_000)
def _word_shuffle(pairing: tuple, u: Word, v: Word) -> tuple[tuple[Word, int], ...]:
    """All (w, e) with w a shuffle of u and v and e the twist exponent."""
    n, k = len(u) + len(v), len(u)
    # D[i][m] = u_i . (v_1 + ... + v_m)
    D = []
    for a in u:
        row = [0]
        for b in v:
            row.append(row[-1] + pairing[a][b])
        D.append(row)
    out = []
    for pos in itertools.combinations(range(n), k):
        w = [0] * n
        e = 0
        j = 0
        prev = -1
        for i, p in enumerate(pos):
            for t in range(prev + 1, p):
                w[t] = v[j]
                j += 1
            w[p] = u[i]
            e -= D[i][p - i]
            prev = p
        for t in range(prev + 1, n):
            w[t] = v[j]
            j += 1
        out.append((tuple(w), e))
    return tuple(out)


def shuffle_words(C: CartanDatum, u: Sequence[int], v: Sequence[int]) -> ShuffleElement:
    acc: dict[Word, dict[int, int]] = {}
    for w, e in _word_shuffle(C.pairing, tuple(u), tuple(v)):
        d = acc.setdefault(w, {})
        d[e] = d.get(e, 0) + 1
    return ShuffleElement({w: LaurentPoly(d) for w, d in acc.items()}, C.rank)


def shuffle_product(C: CartanDatum, x: ShuffleElement, y: ShuffleElement) -> ShuffleElement:
    """x o y: coefficient of w sums q^{e(A,B)} x_{w|A} y_{w|B} over position splittings."""
    acc: dict[Word, dict[int, int]] = {}
    for u, cu in x._t.items():
        for v, cv in y._t.items():
            c = cu * cv
            citems = c.items()
            for w, e in _word_shuffle(C.pairing, u, v):
                d = acc.get(w)
                if d is None:
                    d = acc[w] = {}
                for ex, co in citems:
                    k = ex + e
                    d[k] = d.get(k, 0) + co
    return ShuffleElement({w: LaurentPoly(d) for w, d in acc.items()}, C.rank)


def shuffle_many(C: CartanDatum, factors: Iterable[ShuffleElement]) -> ShuffleElement:
    out = ShuffleElement.one(C.rank)
    for f in factors:
        out = shuffle_product(C, out, f)
    return out


def deconcat(x: ShuffleElement, lam: Sequence[int], mu: Sequence[int]) -> list[tuple[Word, Word, LaurentPoly]]:
    """Splittings w = w1 w2 with weight(w1) = lam, weight(w2) = mu, carrying coeff_w(x)."""
    lam, mu = tuple(lam), tuple(mu)
    if len(lam) != len(mu):
        raise ValueError("weights of different rank")
    if x and x.weight(len(lam)) != tuple(a + b for a, b in zip(lam, mu)):
        raise ValueError("lam + mu differs from the weight of x")
    k = sum(lam)
    out = []
    for w, c in sorted(x._t.items()):
        if weight_of(w[:k], len(lam)) == lam:
            out.append((w[:k], w[k:], c))
    return out


def restrict(x: ShuffleElement, parts: Sequence[Sequence[int]]) -> dict[tuple[Word, ...], LaurentPoly]:
    """Iterated deconcatenation along the weights in ``parts`` (all of one rank)."""
    rank = len(parts[0]) if parts else 0
    cuts = [sum(p) for p in parts]
    out = {}
    for w, c in x._t.items():
        pieces, s, ok = [], 0, True
        for p, n in zip(parts, cuts):
            piece = w[s:s + n]
            if weight_of(piece, rank) != tuple(p):
                ok = False
                break
            pieces.append(piece)
            s += n
        if ok and s == len(w):
            out[tuple(pieces)] = c
    return out


# -- coproduct of monomials (second route for the product) -------------------------

def coproduct_monomial(C: CartanDatum, jj: Sequence[int]) -> dict[tuple[Word, Word], LaurentPoly]:
    """r(E_jj) in the monomial basis E_w1 (x) E_w2, by twisted multiplication of r(E_j)."""
    cur: dict[tuple[Word, Word], LaurentPoly] = {((), ()): ONE}
    rank = C.rank
    for j in jj:
        nxt: dict[tuple[Word, Word], LaurentPoly] = {}
        for (w1, w2), c in cur.items():
            # (w1 (x) w2)(E_j (x) 1) = q^{-|w2|.j} w1 j (x) w2
            e = -sum(C.pairing[b][j] for b in w2)
            key = (w1 + (j,), w2)
            nxt[key] = nxt.get(key, ZERO) + c.shift(e)
            # (w1 (x) w2)(1 (x) E_j) = w1 (x) w2 j
            key = (w1, w2 + (j,))
            nxt[key] = nxt.get(key, ZERO) + c
        cur = {k: v for k, v in nxt.items() if v}
    return cur


def pair_coproduct(C: CartanDatum, jj: Sequence[int], x: ShuffleElement, y: ShuffleElement) -> LaurentPoly:
    """(r(E_jj), x (x) y) under the coefficient pairing."""
    total = ZERO
    for (w1, w2), c in coproduct_monomial(C, jj).items():
        a, b = x.coefficient(w1), y.coefficient(w2)
        if a and b:
            total = total + c * a * b
    return total


# -- Lusztig's form -------------------------------------------------------------

class _GramCache:
    """Laurent part P of the monomial Gram matrix, per weight.

    (E_ii, E_jj) = P(ii, jj) * prod_i (1 - q_i^2)^{-nu_i}.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._store: dict[tuple, dict] = {}

    def table(self, C: CartanDatum) -> dict:
        with self._lock:
            return self._store.setdefault(C.pairing, {})


_GRAM = _GramCache()


def _gram_laurent(C: CartanDatum, ii: Word, jj: Word) -> LaurentPoly:
    memo = _GRAM.table(C)
    key = (ii, jj)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if not ii:
        val = ONE if not jj else ZERO
    else:
        i, rest = ii[0], ii[1:]
        val = ZERO
        pre = 0
        for p, j in enumerate(jj):
            if j == i:
                sub = _gram_laurent(C, rest, jj[:p] + jj[p + 1:])
                if sub:
                    val = val + sub.shift(-pre)
            pre += C.pairing[i][j]
    memo[key] = val
    return val


def form_scalar(C: CartanDatum, nu: Sequence[int]) -> RatFunc:
    """c(nu) = prod_i (1 - q_i^2)^{-nu_i}."""
    den = ONE
    for i, n in enumerate(nu):
        den = den * (ONE - q_power(C.pairing[i][i])) ** n
    return RatFunc(ONE, den)


def monomial_form(C: CartanDatum, ii: Sequence[int], jj: Sequence[int]) -> RatFunc:
    """(E_ii, E_jj) for Lusztig's form on f."""
    ii, jj = tuple(ii), tuple(jj)
    if sorted(ii) != sorted(jj):
        return RatFunc(ZERO)
    return RatFunc(_gram_laurent(C, ii, jj)) * form_scalar(C, weight_of(ii, C.rank))


def gram_matrix(C: CartanDatum, nu: Sequence[int]) -> tuple[list[Word], list[list[LaurentPoly]]]:
    """Words of weight nu and the Laurent part P of the Gram matrix."""
    words = words_of_weight(nu)
    return words, [[_gram_laurent(C, a, b) for b in words] for a in words]


def transported_form(C: CartanDatum, a: ShuffleElement, b: ShuffleElement) -> RatFunc:
    """Lusztig's form carried to characters: solve P u = b, return (a.u) / c(nu)."""
    if a.is_zero() or b.is_zero():
        return RatFunc(ZERO)
    if a.weight(C.rank) != b.weight(C.rank):
        return RatFunc(ZERO)
    return transported_gram(C, [a], [b])[0][0]


def transported_gram(C: CartanDatum, left: Sequence[ShuffleElement],
                     right: Sequence[ShuffleElement]) -> list[list[RatFunc]]:
    """Matrix of transported_form values; all elements must share one weight."""
    elems = [e for e in list(left) + list(right) if e]
    if not elems:
        return [[RatFunc(ZERO) for _ in right] for _ in left]
    nu = elems[0].weight(C.rank)
    if any(e.weight(C.rank) != nu for e in elems):
        raise ValueError("elements of different weights")
    words, P = gram_matrix(C, nu)
    sols = linalg.solve_laurent_multi(P, [[b.coefficient(w) for w in words] for b in right])
    den = ONE
    for i, n in enumerate(nu):
        den = den * (ONE - q_power(C.pairing[i][i])) ** n
    out = []
    for a in left:
        row = []
        for u in sols:
            num = RatFunc(ZERO)
            for w, uw in zip(words, u):
                cw = a.coefficient(w)
                if cw and uw:
                    num = num + uw * cw
            row.append(num * den)
        out.append(row)
    return out


# -- dual PBW expansion ----------------------------------------------------------

def expand_in_dual_pbw(C: CartanDatum, x: ShuffleElement, order, table) -> dict[tuple[int, ...], LaurentPoly]:
    """Coefficients c_m with x = sum_m c_m P_m, P_m the ordered cuspidal monomials."""
    from .pbw import standard_character
    from .rootsys import kp_vectors

    if x.is_zero():
        return {}
    nu = x.weight(C.rank)
    ms = kp_vectors(order, nu)
    cols = [standard_character(order, m, table) for m in ms]
    words = sorted(set(x.words()).union(*(set(c.words()) for c in cols)))
    A = [[c.coefficient(w) for c in cols] for w in words]
    rhs = [x.coefficient(w) for w in words]
    sol = linalg.solve_laurent(A, rhs)
    out = {}
    for m, s in zip(ms, sol):
        if s:
            if not s.is_laurent():
                raise ArithmeticError(f"coefficient {s} at {m} is not a Laurent polynomial")
            out[m] = s.as_laurent()
    return out
