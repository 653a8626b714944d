"""Independent check of the normal form through the polynomial representation.

R(nu) acts faithfully on the direct sum over words ii of Q[x_1..x_n] 1_ii:
y_j multiplies by x_j; for equal neighbouring letters phi_k is the divided
difference (s_k f - f)/(x_k - x_{k+1}); otherwise phi_k(f 1_ii) = P s_k(f) 1_{s_k ii}
with P = Q_{ii_k ii_{k+1}}(x_{k+1}, x_k) when ii_k precedes ii_{k+1} and P = 1 otherwise.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

from .algebra import (KLRAlgebra, swap_word, Element, normal_terms, canonical_word, apply_word,
                      graded_dim_hom_space)
from .. import linalg

Poly = dict  # exponent tuple -> int


def _padd(f: Poly, g: Poly, c: int = 1) -> Poly:
    out = dict(f)
    for e, v in g.items():
        w = out.get(e, 0) + c * v
        if w:
            out[e] = w
        else:
            out.pop(e, None)
    return out


def _pmul_mono(f: Poly, e: Sequence[int], c: int = 1) -> Poly:
    return {tuple(a + b for a, b in zip(k, e)): c * v for k, v in f.items()}


def _swap(f: Poly, k: int) -> Poly:
    out = {}
    for e, v in f.items():
        e2 = list(e)
        e2[k - 1], e2[k] = e2[k], e2[k - 1]
        out[tuple(e2)] = v
    return out


def _divided_difference(f: Poly, k: int) -> Poly:
    """(s_k f - f) / (x_k - x_{k+1}), computed monomial by monomial."""
    out: Poly = {}
    for e, v in f.items():
        a, b = e[k - 1], e[k]
        if a == b:
            continue
        # (x_k^b x_{k+1}^a - x_k^a x_{k+1}^b)/(x_k - x_{k+1})
        sign = 1 if b > a else -1
        lo, hi = min(a, b), max(a, b)
        for t in range(hi - lo):
            e2 = list(e)
            e2[k - 1] = lo + t
            e2[k] = hi - 1 - t
            key = tuple(e2)
            w = out.get(key, 0) + sign * v
            if w:
                out[key] = w
            else:
                out.pop(key, None)
    return out


class PolynomialRep:
    """Action on vectors {word: Poly}."""

    def __init__(self, alg: KLRAlgebra):
        self.alg = alg

    def y(self, j: int, vec: dict) -> dict:
        out = {}
        for ii, f in vec.items():
            e = [0] * len(ii)
            e[j - 1] = 1
            out[ii] = _pmul_mono(f, e)
        return out

    def phi(self, k: int, vec: dict) -> dict:
        out: dict = {}
        for ii, f in vec.items():
            i, j = ii[k - 1], ii[k]
            if i == j:
                g = _divided_difference(f, k)
                target = ii
            else:
                g = _swap(f, k)
                target = swap_word(ii, k)
                if self.alg.before(i, j):
                    P = {}
                    for c, eu, ev in self.alg.q_poly(i, j):
                        # Q_ij(x_{k+1}, x_k)
                        e = [0] * len(ii)
                        e[k] += eu
                        e[k - 1] += ev
                        P[tuple(e)] = P.get(tuple(e), 0) + c
                    h: Poly = {}
                    for e, c in P.items():
                        if c:
                            h = _padd(h, _pmul_mono(g, e, c))
                    g = h
            if g:
                out[target] = _padd(out.get(target, {}), g)
                if not out[target]:
                    del out[target]
        return out

    def apply_gens(self, gens: Sequence[tuple], vec: dict) -> dict:
        for kind, arg in reversed(gens):
            if kind == "phi":
                vec = self.phi(arg, vec)
            elif kind == "y":
                vec = self.y(arg, vec)
            elif kind == "e":
                vec = {ii: f for ii, f in vec.items() if ii == tuple(arg)}
        return vec

    def apply_term(self, term, vec: dict) -> dict:
        R, a, ii = term
        gens = [("phi", k) for k in R]
        for j, e in enumerate(a):
            gens += [("y", j + 1)] * e
        gens.append(("e", ii))
        return self.apply_gens(gens, vec)

    def apply_element(self, x: Element, vec: dict) -> dict:
        out: dict = {}
        for t, c in x.items():
            for ii, f in self.apply_term(t, vec).items():
                out[ii] = _padd(out.get(ii, {}), f, c)
                if not out[ii]:
                    del out[ii]
        return out


def _test_vectors(ii: tuple[int, ...], max_deg: int) -> list[dict]:
    n = len(ii)
    vecs = []
    for d in range(max_deg + 1):
        for e in itertools.product(range(d + 1), repeat=n):
            if sum(e) == d:
                vecs.append({ii: {e: 1}})
    return vecs


def operator_signature(rep: PolynomialRep, op, ii: tuple[int, ...], probes: list[dict]) -> dict:
    """Flattened images of the probe vectors, as a sparse coordinate map."""
    sig = {}
    for p_idx, v in enumerate(probes):
        img = op(v)
        for jj, f in img.items():
            for e, c in f.items():
                sig[(p_idx, jj, e)] = c
    return sig


class _Echelon:
    """Incremental row echelon basis of sparse rational vectors."""

    def __init__(self):
        self.rows: dict = {}  # pivot key -> row (pivot coefficient 1)

    def reduce(self, v: dict) -> dict:
        v = {k: Fraction(c) for k, c in v.items() if c}
        while v:
            k = min(v, key=repr)
            row = self.rows.get(k)
            if row is None:
                return v
            c = v[k]
            for kk, x in row.items():
                y = v.get(kk, 0) - c * x
                if y:
                    v[kk] = y
                else:
                    v.pop(kk, None)
        return v

    def add(self, v: dict) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        k = min(v, key=repr)
        c = v[k]
        self.rows[k] = {kk: x / c for kk, x in v.items()}
        return True

    def __len__(self):
        return len(self.rows)


def _flatten(images: list[dict]) -> dict:
    return {(p, jj, e): c for p, img in enumerate(images) for jj, f in img.items() for e, c in f.items()}


def oracle_ranks(alg: KLRAlgebra, ii: Sequence[int], degree_cap: int,
                 max_len: int | None = None, probe_deg: int | None = None) -> dict[tuple, int]:
    """{(jj, d): rank} of the span of all generator words w with w e_ii landing in e_jj in degree d.

    Words of at most ``max_len`` letters are considered; their images are taken in the
    polynomial representation on probe vectors x^e 1_ii with |e| <= probe_deg.  Only the
    defining action is used, never the normal form.
    """
    ii = tuple(ii)
    n = len(ii)
    rep = PolynomialRep(alg)
    if max_len is None:
        max_len = n * (n - 1) // 2 + 5
    if probe_deg is None:
        probe_deg = n * (n - 1) // 2 + 1
    probes = _test_vectors(ii, probe_deg)
    slack = 2 * max((alg.cartan.pairing[i][i] for i in set(ii)), default=0)
    spans: dict[tuple, _Echelon] = {}
    ops: dict[tuple, list[list[dict]]] = {}
    start = (ii, 0)
    spans[start] = _Echelon()
    spans[start].add(_flatten(probes))
    ops[start] = [probes]
    frontier = {start: [probes]}
    gens = [("phi", k) for k in range(1, n)] + [("y", j) for j in range(1, n + 1)]
    for _ in range(max_len):
        nxt: dict[tuple, list] = {}
        for (cur, deg), images_list in frontier.items():
            for kind, arg in gens:
                if kind == "phi":
                    tgt = (swap_word(cur, arg), deg + alg.phi_degree(cur, arg))
                else:
                    tgt = (cur, deg + alg.y_degree(cur, arg))
                if tgt[1] > degree_cap + slack:
                    continue
                for images in images_list:
                    new = [rep.phi(arg, v) if kind == "phi" else rep.y(arg, v) for v in images]
                    ech = spans.setdefault(tgt, _Echelon())
                    if ech.add(_flatten(new)):
                        nxt.setdefault(tgt, []).append(new)
        if not nxt:
            break
        frontier = nxt
    return {k: len(v) for k, v in spans.items() if k[1] <= degree_cap and len(v)}


def check_normal_form_against_rep(alg: KLRAlgebra, gens: Sequence[tuple], ii: Sequence[int],
                                  x: Element, probe_deg: int = 4) -> bool:
    """The generator word and its normal form act identically on probe polynomials."""
    ii = tuple(ii)
    rep = PolynomialRep(alg)
    for v in _test_vectors(ii, probe_deg):
        a = rep.apply_gens(list(gens) + [("e", ii)], v)
        b = rep.apply_element(x, v)
        if a != b:
            return False
    return True


def normal_form_rank(alg: KLRAlgebra, ii: Sequence[int], jj: Sequence[int], degree: int) -> int:
    """Rank of the normal-form terms of one degree on the polynomial representation."""
    ii, jj = tuple(ii), tuple(jj)
    n = len(ii)
    rep = PolynomialRep(alg)
    probes = _test_vectors(ii, n * (n - 1) // 2 + 1)
    terms = [t for t in normal_terms(alg, ii, jj, degree) if alg.term_degree(t) == degree]
    sigs = [operator_signature(rep, lambda v, t=t: rep.apply_term(t, v), ii, probes) for t in terms]
    keys = sorted({k for s in sigs for k in s}, key=repr)
    index = {k: i for i, k in enumerate(keys)}
    M = [[Fraction(0)] * len(keys) for _ in sigs]
    for r, s in enumerate(sigs):
        for k, c in s.items():
            M[r][index[k]] = Fraction(c)
    return linalg.rank_q(M)


def y_degree_cap(alg: KLRAlgebra, ii: Sequence[int], jj: Sequence[int], y_cap: int = 3) -> int:
    """Largest degree d such that every normal form e_jj ... e_ii of degree <= d has |a| <= y_cap."""
    ii, jj = tuple(ii), tuple(jj)
    n = len(ii)
    lows = []
    for p in itertools.permutations(range(n)):
        R = canonical_word(p)
        if apply_word(R, ii) == jj:
            lows.append(alg.term_degree((R, (0,) * n, ii)))
    min_norm = min(alg.cartan.pairing[i][i] for i in ii)
    return min(lows) + y_cap * min_norm


def dimension_check(alg: KLRAlgebra, ii: Sequence[int], y_cap: int = 3) -> list[tuple]:
    """Compare normal-form counts with oracle ranks for all jj; returns the mismatches."""
    ii = tuple(ii)
    caps = {}
    for jj in set(itertools.permutations(ii)):
        caps[jj] = y_degree_cap(alg, ii, jj, y_cap)
    ranks = oracle_ranks(alg, ii, max(caps.values()))
    bad = []
    for jj, cap in sorted(caps.items()):
        counts = graded_dim_hom_space(alg, ii, jj, cap)
        for d in range(min(list(counts) + [cap]), cap + 1):
            c, r = counts.get(d, 0), ranks.get((jj, d), 0)
            if c != r:
                bad.append((jj, d, c, r))
    return bad
