"""Cuspidal characters for an arbitrary convex order, and standard characters.

E*_alpha is built by induction on height: for a minimal pair (beta, gamma) the
q-commutator E*_beta o E*_gamma - q^{beta.gamma} E*_gamma o E*_beta is a nonzero
multiple of E*_alpha, and E*_alpha is its indivisible, bar-invariant, positive
representative in the integral form.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .qarith import LaurentPoly, ONE, ZERO, laurent_gcd, q_power, qfact
from .rootsys import (
    ConvexOrder,
    Root,
    default_minimal_pair,
    height,
    kp_vectors,
    kp_weight,
    lex_less,
    minimal_pairs,
    oplex_less,
    sub,
)
from .shuffle import ShuffleElement, Word, restrict, shuffle_product, weight_of, format_word


class NormalizationError(ArithmeticError):
    pass


@dataclass
class Verdict:
    ok: bool
    name: str
    failures: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def run_divisor(C, w: Word) -> LaurentPoly:
    """prod over maximal runs of a letter i of length k of [k]_i!."""
    d = ONE
    k = 0
    for t, i in enumerate(w):
        k += 1
        if t + 1 == len(w) or w[t + 1] != i:
            if k > 1:
                d = d * qfact(k, C.pairing[i][i])
            k = 0
    return d


def lattice_content(C, x: ShuffleElement) -> LaurentPoly:
    """gcd over Z[q, q^-1] of x_w / D_w; x lies in the integral form iff all divisions are exact."""
    vals = []
    for w, c in x.items():
        D = run_divisor(C, w)
        try:
            vals.append(c.exact_div(D))
        except ArithmeticError:
            raise NormalizationError(f"coefficient {c} at {format_word(w)} is not divisible by {D}")
    return laurent_gcd(vals)


def normalize_character(C, x: ShuffleElement) -> ShuffleElement:
    """Indivisible, bar-invariant, positive representative of the line through x."""
    if x.is_zero():
        raise NormalizationError("cannot normalize zero")
    g = lattice_content(C, x)
    y = ShuffleElement({w: c.exact_div(g) for w, c in x.items()}, x.rank)
    # the q-power restoring bar invariance: read it off one coefficient, then check all
    c0 = y.items()[0][1]
    s = c0.min_exp() + c0.max_exp()
    if s % 2:
        raise NormalizationError("no q-shift makes the character bar-invariant")
    y = y.shift(-s // 2)
    if not y.is_bar_invariant():
        raise NormalizationError("normalized character is not bar-invariant")
    if not y.is_nonnegative() and (-y).is_nonnegative():
        y = -y
    if not y.is_nonnegative():
        raise NormalizationError("normalized character has negative coefficients")
    return y


class CuspidalTable:
    """alpha -> E*_alpha for one convex order."""

    def __init__(self, order: ConvexOrder, entries: dict | None = None):
        self.order = order
        self.cartan = order.cartan
        self.entries: dict[Root, ShuffleElement] = dict(entries or {})

    def __getitem__(self, alpha) -> ShuffleElement:
        return self.entries[tuple(alpha)]

    def __contains__(self, alpha) -> bool:
        return tuple(alpha) in self.entries

    def get(self, alpha) -> ShuffleElement:
        alpha = tuple(alpha)
        if alpha not in self.entries:
            self.entries[alpha] = cuspidal_character(self.order, alpha, self)
        return self.entries[alpha]

    def complete(self, max_height: int | None = None) -> "CuspidalTable":
        for alpha in sorted(self.order.roots, key=height):
            if max_height is None or height(alpha) <= max_height:
                self.get(alpha)
        return self

    def to_json(self) -> dict:
        return {
            "pairing": [list(r) for r in self.cartan.pairing],
            "order": [list(a) for a in self.order.roots],
            "word": list(self.order.word) if self.order.word is not None else None,
            "characters": [
                {"root": list(a), "character": self.entries[a].to_json()}
                for a in self.order.roots if a in self.entries
            ],
        }

    @classmethod
    def from_json(cls, order: ConvexOrder, data: dict) -> "CuspidalTable":
        if [list(a) for a in order.roots] != data["order"]:
            raise ValueError("cached table belongs to a different convex order")
        t = cls(order)
        for row in data["characters"]:
            t.entries[tuple(row["root"])] = ShuffleElement.from_json(row["character"], order.cartan.rank)
        return t


def q_commutator(order: ConvexOrder, beta: Root, gamma: Root, table: CuspidalTable) -> ShuffleElement:
    C = order.cartan
    eb, eg = table.get(beta), table.get(gamma)
    return shuffle_product(C, eb, eg) - shuffle_product(C, eg, eb).shift(C.dot(beta, gamma))


def cuspidal_character(order: ConvexOrder, alpha: Sequence[int], table: CuspidalTable | None = None,
                       pair: tuple[Root, Root] | None = None) -> ShuffleElement:
    """E*_alpha; for non-simple alpha via the given (or default) minimal pair."""
    C = order.cartan
    alpha = tuple(alpha)
    if alpha not in order.position:
        raise ValueError(f"{alpha} is not a positive root")
    if height(alpha) == 1:
        return ShuffleElement.word((alpha.index(1),), 1, C.rank)
    if table is None:
        table = CuspidalTable(order)
    beta, gamma = pair if pair is not None else default_minimal_pair(order, alpha)
    comm = q_commutator(order, beta, gamma, table)
    if comm.is_zero():
        raise NormalizationError(f"q-commutator vanishes for {alpha} with pair {beta}, {gamma}")
    return normalize_character(C, comm)


# -- disk cache ---------------------------------------------------------------------

def cache_dir() -> Path:
    return Path(os.environ.get("KLRPBW_CACHE", Path.home() / ".cache" / "klrpbw"))


def cache_key(order: ConvexOrder, label: str = "") -> str:
    payload = json.dumps({"pairing": order.cartan.pairing, "order": order.roots}, sort_keys=True)
    h = hashlib.sha256(payload.encode()).hexdigest()[:20]
    return f"{label or 'type'}-{h}"


def build_table(order: ConvexOrder, use_cache: bool = False, label: str = "",
                max_height: int | None = None) -> CuspidalTable:
    """Complete cuspidal table, optionally read from / written to the disk cache."""
    path = cache_dir() / f"{cache_key(order, label)}.json" if use_cache else None
    if path is not None and path.exists():
        try:
            table = CuspidalTable.from_json(order, json.loads(path.read_text()))
            if max_height is None and len(table.entries) == len(order):
                return table
        except (ValueError, KeyError, json.JSONDecodeError):
            table = CuspidalTable(order)
    else:
        table = CuspidalTable(order)
    table.complete(max_height)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(table.to_json(), sort_keys=True))
        tmp.replace(path)
    return table


# -- standard modules -----------------------------------------------------------

def _power(C, x: ShuffleElement, n: int) -> ShuffleElement:
    out = ShuffleElement.one(C.rank)
    for _ in range(n):
        out = shuffle_product(C, out, x)
    return out


def standard_character(order: ConvexOrder, m: Sequence[int], table: CuspidalTable) -> ShuffleElement:
    """ch Delta(m) = E*_1^{m_1} o ... o E*_N^{m_N} (no grading shift)."""
    C = order.cartan
    out = ShuffleElement.one(C.rank)
    for k, mk in enumerate(m):
        if mk:
            out = shuffle_product(C, out, _power(C, table.get(order.roots[k]), mk))
    return out


def costandard_character(order: ConvexOrder, m: Sequence[int], table: CuspidalTable) -> ShuffleElement:
    """ch nabla(m) = E*_N^{m_N} o ... o E*_1^{m_1}."""
    C = order.cartan
    out = ShuffleElement.one(C.rank)
    for k in reversed(range(len(m))):
        if m[k]:
            out = shuffle_product(C, out, _power(C, table.get(order.roots[k]), m[k]))
    return out


def _proportional(a: dict, b: dict) -> int | None:
    """k with a = q^k b, or None."""
    if a.keys() != b.keys():
        return None
    k = None
    for key, va in a.items():
        vb = b[key]
        d = va.min_exp() - vb.min_exp()
        if va != vb.shift(d):
            return None
        if k is None:
            k = d
        elif k != d:
            return None
    return k if k is not None else 0


def check_restriction_lemma(order: ConvexOrder, m: Sequence[int], n: Sequence[int],
                            table: CuspidalTable) -> Verdict:
    """Res_n Delta(m): zero when n > m or n >' m, the boxed cuspidal powers when n = m."""
    C = order.cartan
    m, n = tuple(m), tuple(n)
    if kp_weight(order, m) != kp_weight(order, n):
        raise ValueError("|m| != |n|")
    delta = standard_character(order, m, table)
    parts = [tuple(nk * a for a in order.roots[k]) for k, nk in enumerate(n)]
    res = restrict(delta, parts)
    zero = not res
    expect_zero = lex_less(m, n) or oplex_less(m, n)
    v = Verdict(True, "restriction", data={"m": list(m), "n": list(n), "zero": zero})
    if m == n:
        powers = [_power(C, table.get(order.roots[k]), nk) for k, nk in enumerate(n)]
        expected: dict = {(): ONE}
        for p in powers:
            expected = {key + (w,): c * cw for key, c in expected.items() for w, cw in p.items()}
        k = _proportional(res, expected)
        if k is None:
            v.ok = False
            v.failures.append("Res_m Delta(m) is not a q-shift of the boxed cuspidal powers")
        v.data["shift"] = k
    elif zero != expect_zero:
        v.ok = False
        v.failures.append(f"restriction is {'zero' if zero else 'nonzero'}; expected the opposite")
    return v


def _in_cone(C, nu: Sequence[int], roots: Sequence[Root]) -> bool:
    """Is nu an N-combination of the given roots?"""
    from functools import lru_cache
    roots = list(roots)

    @lru_cache(maxsize=None)
    def rec(v, k):
        if not any(v):
            return True
        if k == len(roots):
            return False
        w = v
        while all(x >= 0 for x in w):
            if rec(w, k + 1):
                return True
            w = sub(w, roots[k])
        return False

    return rec(tuple(nu), 0)


def check_cuspidal_restriction(order: ConvexOrder, alpha: Sequence[int], table: CuspidalTable) -> Verdict:
    """Prefixes of ch S_alpha have weights in the cone of roots >= alpha, suffixes <= alpha;
    for each minimal pair the (gamma, beta) component is a multiple of E*_gamma (x) E*_beta."""
    C = order.cartan
    alpha = tuple(alpha)
    x = table.get(alpha)
    pa = order.index(alpha)
    upper = order.roots[pa:]
    lower = order.roots[:pa + 1]
    v = Verdict(True, "cuspidal-restriction", data={"alpha": list(alpha)})
    seen = set()
    for w, _ in x.items():
        for k in range(1, len(w)):
            lam, mu = weight_of(w[:k], C.rank), weight_of(w[k:], C.rank)
            if (lam, mu) in seen:
                continue
            seen.add((lam, mu))
            if not _in_cone(C, lam, upper):
                v.ok = False
                v.failures.append(f"prefix weight {lam} is not a sum of roots >= alpha")
            if not _in_cone(C, mu, lower):
                v.ok = False
                v.failures.append(f"suffix weight {mu} is not a sum of roots <= alpha")
    if height(alpha) > 1:
        for beta, gamma in minimal_pairs(order, alpha):
            comp = restrict(x, [gamma, beta])
            eg, eb = table.get(gamma), table.get(beta)
            outer = {(u, w): cu * cw for u, cu in eg.items() for w, cw in eb.items()}
            ratio = _laurent_ratio(comp, outer)
            if ratio is None:
                v.ok = False
                v.failures.append(f"(gamma, beta) = ({gamma}, {beta}) component is not a multiple of E*_gamma (x) E*_beta")
            else:
                v.data.setdefault("pair_multiples", []).append([list(beta), list(gamma), str(ratio)])
    return v


def _laurent_ratio(a: dict, b: dict) -> LaurentPoly | None:
    """f with a = f b coefficientwise (f Laurent), or None."""
    if not b:
        return ZERO if not a else None
    if not set(a) <= set(b):
        return None
    key = next(iter(b))
    try:
        f = a.get(key, ZERO).exact_div(b[key]) if a.get(key, ZERO) else ZERO
    except ArithmeticError:
        return None
    for k2, vb in b.items():
        if a.get(k2, ZERO) != f * vb:
            return None
    return f


def check_power_indivisible(order: ConvexOrder, alpha: Sequence[int], n: int, table: CuspidalTable) -> Verdict:
    """(E*_alpha)^n expands as the single dual PBW monomial n.1_alpha, is indivisible in the
    integral form, and is bar-invariant up to a shift (as the character of a simple module is)."""
    from .shuffle import expand_in_dual_pbw
    C = order.cartan
    alpha = tuple(alpha)
    x = _power(C, table.get(alpha), n)
    v = Verdict(True, "power-indivisible", data={"alpha": list(alpha), "n": n})
    exp = expand_in_dual_pbw(C, x, order, table)
    target = tuple(n if r == alpha else 0 for r in order.roots)
    if exp != {target: ONE}:
        v.ok = False
        v.failures.append(f"expansion is {exp}")
    g = lattice_content(C, x)
    if not g.is_unit():
        v.ok = False
        v.failures.append(f"power is divisible by {g} in the integral form")
    c0 = x.items()[0][1]
    s = c0.min_exp() + c0.max_exp()
    if s % 2 or not x.shift(-s // 2).is_bar_invariant():
        v.ok = False
        v.failures.append("power is not bar-invariant up to shift")
    return v
