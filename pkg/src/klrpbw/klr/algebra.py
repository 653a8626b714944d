"""KLR algebra R(nu): relations, a normal form, and the generator-expression parser.

Positions, y_j and phi_k are 1-based as in the usual presentation.  A normal-form
term is phi_R y^a e_ii where R is the lexicographically smallest reduced word of
a permutation w, all y's sit to the right of phi_R, and e_ii is the idempotent on
the right.  Terms are keys (R, a, ii) of a dict with integer coefficients.
"""

from __future__ import annotations

import random
import re
from functools import lru_cache
from typing import Iterable, Sequence

from ..rootsys import CartanDatum

Term = tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
Element = dict  # Term -> int

DEFAULT_MAX_LETTERS = 12


class BudgetExceeded(RuntimeError):
    pass


# -- permutations ---------------------------------------------------------------

def swap_word(ii: tuple[int, ...], k: int) -> tuple[int, ...]:
    """s_k ii: exchange the letters in positions k and k+1 (1-based)."""
    l = list(ii)
    l[k - 1], l[k] = l[k], l[k - 1]
    return tuple(l)


def apply_word(R: Sequence[int], ii: tuple[int, ...]) -> tuple[int, ...]:
    """Target idempotent of phi_R e_ii: apply s_{R_m} first, s_{R_1} last."""
    for k in reversed(R):
        ii = swap_word(ii, k)
    return ii


@lru_cache(maxsize=None)
def perm_of(R: tuple[int, ...], n: int) -> tuple[int, ...]:
    """One-line notation of s_{R_1} ... s_{R_m} acting on positions 0..n-1."""
    p = list(range(n))
    for k in reversed(R):
        # compose s_k on the left: swap the values k-1 and k
        p = [k if x == k - 1 else k - 1 if x == k else x for x in p]
    return tuple(p)


def perm_length(p: Sequence[int]) -> int:
    n = len(p)
    return sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])


def left_descents(p: Sequence[int]) -> list[int]:
    """k (1-based) with l(s_k w) < l(w): the value k+1 occurs before the value k."""
    pos = {v: i for i, v in enumerate(p)}
    return [k for k in range(1, len(p)) if pos[k] < pos[k - 1]]


def left_mul(k: int, p: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(k if x == k - 1 else k - 1 if x == k else x for x in p)


@lru_cache(maxsize=None)
def canonical_word(p: tuple[int, ...]) -> tuple[int, ...]:
    """Lexicographically smallest reduced word of the permutation p."""
    d = left_descents(p)
    if not d:
        return ()
    k = d[0]
    return (k,) + canonical_word(left_mul(k, p))


def is_reduced(R: Sequence[int], n: int) -> bool:
    return perm_length(perm_of(tuple(R), n)) == len(R)


# -- the algebra ----------------------------------------------------------------

class KLRAlgebra:
    """Relations of R(nu) for one Cartan datum and one total order on I.

    ``label_order`` lists I from smallest to largest; Q_ij(u, v) = u^{-a_ij} - v^{-a_ji}
    when i precedes j.
    """

    def __init__(self, cartan: CartanDatum, label_order: Sequence[int] | None = None,
                 max_letters: int = DEFAULT_MAX_LETTERS):
        self.cartan = cartan
        order = tuple(label_order) if label_order is not None else tuple(range(cartan.rank))
        if sorted(order) != list(range(cartan.rank)):
            raise ValueError("label order must be a permutation of I")
        self.label_order = order
        self._rank_of = {i: t for t, i in enumerate(order)}
        self.max_letters = max_letters
        self._phi_memo: dict = {}
        self._y_memo: dict = {}

    # -- data -------------------------------------------------------------
    def before(self, i: int, j: int) -> bool:
        return self._rank_of[i] < self._rank_of[j]

    def q_poly(self, i: int, j: int) -> list[tuple[int, int, int]]:
        """Q_ij(u, v) as a list of (coeff, exp_u, exp_v)."""
        if i == j:
            return []
        C = self.cartan
        if C.cartan_integer(i, j) == 0:
            # orthogonal labels: the difference formula degenerates to 0, the relation needs 1
            return [(1, 0, 0)]
        if self.before(i, j):
            return [(1, -C.cartan_integer(i, j), 0), (-1, 0, -C.cartan_integer(j, i))]
        return [(1, 0, -C.cartan_integer(j, i)), (-1, -C.cartan_integer(i, j), 0)]

    def braid_poly(self, ii: tuple[int, ...], k: int) -> list[tuple[int, int, int]]:
        """(phi_{k+1} phi_k phi_{k+1} - phi_k phi_{k+1} phi_k) e_ii as (coeff, exp y_k, exp y_{k+2})."""
        i, j = ii[k - 1], ii[k]
        if ii[k + 1] != i or i == j:
            return []
        p = -self.cartan.cartan_integer(i, j)
        sign = 1 if self.before(i, j) else -1
        return [(sign, t, p - 1 - t) for t in range(p)]

    def y_degree(self, ii: Sequence[int], j: int) -> int:
        i = ii[j - 1]
        return self.cartan.pairing[i][i]

    def phi_degree(self, ii: Sequence[int], k: int) -> int:
        return -self.cartan.pairing[ii[k - 1]][ii[k]]

    def term_degree(self, t: Term) -> int:
        R, a, ii = t
        deg = sum(e * self.y_degree(ii, j + 1) for j, e in enumerate(a))
        cur = ii
        for k in reversed(R):
            deg += self.phi_degree(cur, k)
            cur = swap_word(cur, k)
        return deg

    def target(self, t: Term) -> tuple[int, ...]:
        return apply_word(t[0], t[2])

    def _check_size(self, n: int):
        if n > self.max_letters:
            raise BudgetExceeded(f"{n} letters exceeds the normal-form bound {self.max_letters}")

    # -- left multiplication on single terms with a = 0 ---------------------
    def _y_on_phi(self, j: int, R: tuple[int, ...], ii: tuple[int, ...]) -> Element:
        """y_j phi_R e_ii in normal form."""
        key = (j, R, ii)
        hit = self._y_memo.get(key)
        if hit is not None:
            return hit
        n = len(ii)
        if not R:
            a = [0] * n
            a[j - 1] = 1
            out = {((), tuple(a), ii): 1}
        else:
            k, R2 = R[0], R[1:]
            mid = apply_word(R2, ii)
            jj = k + 1 if j == k else k if j == k + 1 else j
            out = self.left_phi(k, self._y_on_phi(jj, R2, ii))
            if mid[k - 1] == mid[k]:
                # y_j phi_k e = phi_k y_{s_k j} e - c e, c = -1 (s_k j = k), +1 (s_k j = k+1)
                c = -1 if jj == k else 1 if jj == k + 1 else 0
                if c:
                    out = dict(out)
                    _acc(out, (R2, (0,) * n, ii), -c)
        self._y_memo[key] = out
        return out

    def _phi_on_phi(self, k: int, R: tuple[int, ...], ii: tuple[int, ...]) -> Element:
        """phi_k phi_R e_ii in normal form (R canonical)."""
        key = (k, R, ii)
        hit = self._phi_memo.get(key)
        if hit is not None:
            return hit
        n = len(ii)
        zero = (0,) * n
        w = perm_of(R, n)
        v = left_mul(k, w)
        out: Element = {}
        if perm_length(v) > len(R):
            d = left_descents(v)[0]
            if d == k:
                out = {((k,) + R, zero, ii): 1}
            else:
                # d < k is also the first letter of R
                R2 = R[1:]
                if abs(d - k) > 1:
                    out = self.left_phi(d, self._phi_on_phi(k, R2, ii))
                else:
                    # k = d + 1; R2 is canonical for s_k v'' where v'' = s_k s_d s_k v
                    R3 = canonical_word(left_mul(k, perm_of(R2, n)))
                    lower = dict(self._phi_on_phi(k, R3, ii))
                    _acc(lower, (R2, zero, ii), -1)
                    # phi_R2 = phi_k phi_R3 - lower
                    main = self.left_phi(d, self.left_phi(k, self.left_phi(d, {(R3, zero, ii): 1})))
                    out = dict(main)
                    jj = apply_word(R3, ii)
                    corr = self.braid_poly(jj, d)
                    if corr:
                        base = {(R3, zero, ii): 1}
                        for c, e1, e2 in corr:
                            t = self.left_y_power(d, e1, self.left_y_power(d + 2, e2, base))
                            _add(out, t, c)
                    if lower:
                        _add(out, self.left_phi(k, self.left_phi(d, lower)), -1)
        else:
            # k is a left descent of w: phi_R = phi_k phi_R' - lower
            R1 = canonical_word(v)
            lower = dict(self._phi_on_phi(k, R1, ii))
            _acc(lower, (R, zero, ii), -1)
            jj = apply_word(R1, ii)
            base = {(R1, zero, ii): 1}
            for c, e1, e2 in self.q_poly(jj[k - 1], jj[k]):
                t = self.left_y_power(k, e1, self.left_y_power(k + 1, e2, base))
                _add(out, t, c)
            if lower:
                _add(out, self.left_phi(k, lower), -1)
        out = {t: c for t, c in out.items() if c}
        self._phi_memo[key] = out
        return out

    # -- left multiplication on elements -------------------------------------
    def left_phi(self, k: int, x: Element) -> Element:
        out: Element = {}
        for (R, a, ii), c in x.items():
            if not 1 <= k < len(ii):
                raise ValueError(f"phi_{k} undefined on {len(ii)} letters")
            _add(out, _times_y(self._phi_on_phi(k, R, ii), a), c)
        return out

    def left_y(self, j: int, x: Element) -> Element:
        out: Element = {}
        for (R, a, ii), c in x.items():
            if not 1 <= j <= len(ii):
                raise ValueError(f"y_{j} undefined on {len(ii)} letters")
            _add(out, _times_y(self._y_on_phi(j, R, ii), a), c)
        return out

    def left_y_power(self, j: int, e: int, x: Element) -> Element:
        for _ in range(e):
            x = self.left_y(j, x)
        return x

    def left_e(self, jj: tuple[int, ...], x: Element) -> Element:
        return {t: c for t, c in x.items() if apply_word(t[0], t[2]) == tuple(jj)}

    def left_gen(self, g: tuple, x: Element) -> Element:
        kind, arg = g
        if kind == "phi":
            return self.left_phi(arg, x)
        if kind == "y":
            return self.left_y(arg, x)
        if kind == "e":
            return self.left_e(arg, x)
        raise ValueError(f"unknown generator {g}")

    # -- normal form of products ------------------------------------------
    def idempotent(self, ii: Sequence[int]) -> Element:
        ii = tuple(ii)
        self._check_size(len(ii))
        return {((), (0,) * len(ii), ii): 1}

    def product(self, gens: Sequence[tuple], ii: Sequence[int]) -> Element:
        """Normal form of g_1 g_2 ... g_m e_ii."""
        x = self.idempotent(ii)
        for g in reversed(gens):
            x = self.left_gen(g, x)
        return x

    def multiply(self, x: Element, y: Element) -> Element:
        """x * y for normal-form elements."""
        out: Element = {}
        for (R, a, ii), c in x.items():
            # x term = phi_R y^a e_ii; multiply y's first, then phi's, onto e_ii y
            z = self.left_e(ii, y)
            for j, e in enumerate(a):
                z = self.left_y_power(j + 1, e, z)
            for k in reversed(R):
                z = self.left_phi(k, z)
            _add(out, z, c)
        return out


def _acc(x: Element, t: Term, c: int):
    v = x.get(t, 0) + c
    if v:
        x[t] = v
    else:
        x.pop(t, None)


def _add(x: Element, y: Element, c: int = 1):
    for t, v in y.items():
        _acc(x, t, c * v)


def _times_y(x: Element, a: tuple[int, ...]) -> Element:
    if not any(a):
        return x
    return {(R, tuple(p + q for p, q in zip(b, a)), ii): c for (R, b, ii), c in x.items()}


def is_normal(t: Term) -> bool:
    R, _, ii = t
    return canonical_word(perm_of(R, len(ii))) == R and len(R) == perm_length(perm_of(R, len(ii)))


# -- expression parser ----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(e)\(\s*([0-9,\s]*)\s*\)|(y|s|phi)(\d+)|(\d+)|(\^)|([()+\-*]))")


class ParseError(ValueError):
    pass


def _tokenize(text: str) -> list[tuple]:
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at {text[pos:pos + 10]!r}")
        pos = m.end()
        if m.group(1):
            body = m.group(2).strip()
            if "," in body or " " in body:
                word = tuple(int(t) for t in body.replace(",", " ").split())
            else:
                word = tuple(int(ch) for ch in body)
            out.append(("gen", ("e", word)))
        elif m.group(3):
            kind = "y" if m.group(3) == "y" else "phi"
            out.append(("gen", (kind, int(m.group(4)))))
        elif m.group(5):
            out.append(("int", int(m.group(5))))
        elif m.group(6):
            out.append(("^", None))
        else:
            out.append((m.group(7), None))
    return out


class _Parser:
    """expr := term (('+'|'-') term)* ; term := ['-'] factor+ ; factor := atom ['^' int]."""

    def __init__(self, alg: KLRAlgebra, tokens: list[tuple], n: int | None):
        self.alg = alg
        self.toks = tokens
        self.i = 0
        self.n = n

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self):
        items = self.expr()
        if self.peek()[0] is not None:
            raise ParseError(f"trailing token {self.peek()}")
        return items

    # an unevaluated expression is a list of (coeff, [generators]) monomials
    def expr(self):
        out = self.term()
        while self.peek()[0] in ("+", "-"):
            sign = 1 if self.take()[0] == "+" else -1
            out += [(sign * c, g) for c, g in self.term()]
        return out

    def term(self):
        sign = 1
        while self.peek()[0] in ("-", "+"):
            if self.take()[0] == "-":
                sign = -sign
        acc = [(sign, [])]
        got = False
        while self.peek()[0] in ("gen", "int", "("):
            f = self.factor()
            acc = [(c1 * c2, g1 + g2) for c1, g1 in acc for c2, g2 in f]
            got = True
            if self.peek()[0] == "*":
                self.take()
        if not got:
            raise ParseError("empty term")
        return acc

    def factor(self):
        kind, val = self.take()
        if kind == "gen":
            base = [(1, [val])]
        elif kind == "int":
            base = [(val, [])]
        elif kind == "(":
            base = self.expr()
            if self.take()[0] != ")":
                raise ParseError("missing ')'")
        else:
            raise ParseError(f"unexpected {kind}")
        if self.peek()[0] == "^":
            self.take()
            k, e = self.take()
            if k != "int":
                raise ParseError("exponent must be a non-negative integer")
            out = [(1, [])]
            for _ in range(e):
                out = [(c1 * c2, g1 + g2) for c1, g1 in out for c2, g2 in base]
            return out
        return base


def parse_expression(text: str) -> list[tuple[int, list[tuple]]]:
    """Parse into monomials (coeff, [generators]); generators ("e", word), ("y", j), ("phi", k)."""
    return _Parser(None, _tokenize(text), None).parse()


def normal_form(alg: KLRAlgebra, expr: str | list, ii: Sequence[int] | None = None) -> Element:
    """Normal form of a generator expression.

    Each monomial must end in an idempotent e(...) unless ``ii`` supplies the
    rightmost idempotent.
    """
    monos = parse_expression(expr) if isinstance(expr, str) else expr
    out: Element = {}
    for c, gens in monos:
        gens = list(gens)
        right = tuple(ii) if ii is not None else None
        if gens and gens[-1][0] == "e":
            if right is not None and right != gens[-1][1]:
                continue
            right = gens.pop()[1]
        if right is None:
            raise ParseError("monomial without a rightmost idempotent")
        _add(out, alg.product(gens, right), c)
    return out


def format_element(alg: KLRAlgebra, x: Element) -> str:
    if not x:
        return "0"
    parts = []
    for (R, a, ii), c in sorted(x.items(), key=lambda tc: (-len(tc[0][0]), tc[0])):
        gens = [f"s{k}" for k in R]
        for j, e in enumerate(a):
            if e:
                gens.append(f"y{j + 1}" + (f"^{e}" if e > 1 else ""))
        gens.append("e(" + "".join(map(str, ii)) + ")")
        body = " ".join(gens)
        if c == 1:
            parts.append(f"+ {body}")
        elif c == -1:
            parts.append(f"- {body}")
        else:
            parts.append(f"{'+' if c > 0 else '-'} {abs(c)} {body}")
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:] if s.startswith("- ") else s


def element_to_json(alg: KLRAlgebra, x: Element) -> list:
    return [
        {"phi": list(R), "y": list(a), "e": list(ii), "coeff": c, "degree": alg.term_degree((R, a, ii))}
        for (R, a, ii), c in sorted(x.items())
    ]


# -- enumerating normal forms -------------------------------------------------------

def _perms(n: int):
    import itertools
    return itertools.permutations(range(n))


def _monomials(n: int, total: int):
    """Exponent vectors of length n with sum exactly total."""
    if n == 0:
        if total == 0:
            yield ()
        return
    if n == 1:
        yield (total,)
        return
    for e in range(total, -1, -1):
        for rest in _monomials(n - 1, total - e):
            yield (e,) + rest


def normal_terms(alg: KLRAlgebra, ii: Sequence[int], jj: Sequence[int] | None, max_degree: int) -> list[Term]:
    """All normal-form terms phi_w y^a e_ii landing in e_jj with degree <= max_degree."""
    ii = tuple(ii)
    n = len(ii)
    norms = [alg.y_degree(ii, j + 1) for j in range(n)]
    out = []
    for p in _perms(n):
        R = canonical_word(tuple(p))
        if jj is not None and apply_word(R, ii) != tuple(jj):
            continue
        d0 = alg.term_degree((R, (0,) * n, ii))
        if d0 > max_degree:
            continue
        budget = max_degree - d0
        # enumerate y-monomials within the degree budget
        def rec(j, acc, left):
            if j == n:
                out.append((R, tuple(acc), ii))
                return
            e = 0
            while e * norms[j] <= left:
                acc.append(e)
                rec(j + 1, acc, left - e * norms[j])
                acc.pop()
                e += 1
                if norms[j] == 0:
                    break
        rec(0, [], budget)
    return out


def graded_dim_hom_space(alg: KLRAlgebra, ii: Sequence[int], jj: Sequence[int], degree_cap: int) -> dict[int, int]:
    """Graded dimension of e_jj R(nu) e_ii, truncated to degrees <= degree_cap."""
    counts: dict[int, int] = {}
    for t in normal_terms(alg, ii, jj, degree_cap):
        d = alg.term_degree(t)
        counts[d] = counts.get(d, 0) + 1
    return dict(sorted(counts.items()))


def random_generator_word(rng: random.Random, n: int, length: int, y_prob: float = 0.3) -> list[tuple]:
    gens = []
    for _ in range(length):
        if n > 1 and rng.random() > y_prob:
            gens.append(("phi", rng.randrange(1, n)))
        else:
            gens.append(("y", rng.randrange(1, n + 1)))
    return gens
