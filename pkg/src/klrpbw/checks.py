"""Check routines shared by the ``selftest`` command.

Each function takes a convex order (and the cuspidal table where needed) and
returns a :class:`Verdict`.  Height bounds keep the default run fast.
"""

from __future__ import annotations

import itertools
import random

from .pbw import (CuspidalTable, Verdict, check_restriction_lemma, costandard_character,
                  cuspidal_character, standard_character)
from .qarith import ONE, RatFunc, q_power
from .rootsys import (CartanDatum, ConvexOrder, height, is_convex, kostant_partition, kp_vectors,
                      lex_less, minimal_pairs, oplex_less, random_reduced_word, reduced_words_w0,
                      convex_order)
from .shuffle import expand_in_dual_pbw, transported_form, words_of_weight
from . import linalg


def weights_up_to(C: CartanDatum, max_height: int) -> list[tuple[int, ...]]:
    """All nonzero nu in N^I with height at most max_height."""
    out = []
    for nu in itertools.product(range(max_height + 1), repeat=C.rank):
        if 0 < sum(nu) <= max_height:
            out.append(nu)
    return sorted(out, key=lambda v: (sum(v), v))


def check_convexity(C: CartanDatum, samples: int = 50, seed: int = 0) -> Verdict:
    """Every reduced word (rank <= 2) or ``samples`` random ones gives a convex order."""
    v = Verdict(True, "convexity")
    if C.rank <= 2:
        words = reduced_words_w0(C)
    else:
        rng = random.Random(seed)
        words = [random_reduced_word(C, rng) for _ in range(samples)]
    for w in words:
        if not is_convex(C, convex_order(C, w)):
            v.ok = False
            v.failures.append(f"word {list(w)} gives a non-convex order")
    v.data["words"] = len(words)
    return v


def check_cuspidal_characters(order: ConvexOrder, table: CuspidalTable) -> Verdict:
    """Bar invariance, content 1, positivity and independence of the minimal pair."""
    v = Verdict(True, "cuspidal-characters")
    for a in order.roots:
        x = table.get(a)
        if not x.is_bar_invariant():
            v.failures.append(f"{a}: not bar-invariant")
        if x.content() != 1:
            v.failures.append(f"{a}: content {x.content()}")
        if not x.is_nonnegative():
            v.failures.append(f"{a}: negative coefficient")
        if height(a) > 1:
            for pair in minimal_pairs(order, a):
                if cuspidal_character(order, a, table, pair) != x:
                    v.failures.append(f"{a}: pair {pair} gives a different character")
    v.ok = not v.failures
    return v


def check_form_values(order: ConvexOrder, table: CuspidalTable, max_height: int = 5) -> Verdict:
    """(E*_a, E*_a) = 1 - q_a^2 and distinct dual PBW monomials are orthogonal."""
    C = order.cartan
    v = Verdict(True, "form-values")
    for a in order.roots:
        x = table.get(a)
        got = transported_form(C, x, x)
        want = RatFunc(ONE - q_power(C.dot(a, a)))
        if got != want:
            v.failures.append(f"{a}: (E*, E*) = {got}")
    for nu in weights_up_to(C, max_height):
        ms = kp_vectors(order, nu)
        chars = [standard_character(order, m, table) for m in ms]
        for (i, m), (j, n) in itertools.combinations(enumerate(ms), 2):
            if transported_form(C, chars[i], chars[j]):
                v.failures.append(f"monomials {m} and {n} are not orthogonal")
    v.ok = not v.failures
    return v


def check_restriction(order: ConvexOrder, table: CuspidalTable, max_height: int = 4) -> Verdict:
    v = Verdict(True, "restriction-lemma")
    count = 0
    for nu in weights_up_to(order.cartan, max_height):
        ms = kp_vectors(order, nu)
        for m in ms:
            for n in ms:
                r = check_restriction_lemma(order, m, n, table)
                count += 1
                if not r.ok:
                    v.failures += [f"m={list(m)} n={list(n)}: {f}" for f in r.failures]
    v.ok = not v.failures
    v.data["pairs"] = count
    return v


def check_unitriangular(order: ConvexOrder, table: CuspidalTable, max_height: int = 4) -> Verdict:
    """nabla(m) expands over m' <= m in both orders with a pure q-power at m.

    This is the direction forced by the restriction lemma: a constituent L(m')
    of nabla(m) has Res_{m'} nonzero, hence m' <= m and m' <=' m.
    """
    C = order.cartan
    v = Verdict(True, "unitriangularity")
    for nu in weights_up_to(C, max_height):
        for m in kp_vectors(order, nu):
            exp = expand_in_dual_pbw(C, costandard_character(order, m, table), order, table)
            lead = exp.get(m)
            if lead is None or not lead.is_monomial() or lead.content() != 1:
                v.failures.append(f"m={list(m)}: leading coefficient {lead}")
            for n in exp:
                if n != m and not (lex_less(n, m) and oplex_less(n, m)):
                    v.failures.append(f"m={list(m)}: term at {list(n)}")
    v.ok = not v.failures
    return v


def check_counting(order: ConvexOrder, table: CuspidalTable, max_height: int = 5) -> Verdict:
    """Number of dual PBW monomials is the Kostant partition count, and they are independent."""
    C = order.cartan
    v = Verdict(True, "counting")
    for nu in weights_up_to(C, max_height):
        ms = kp_vectors(order, nu)
        if len(ms) != kostant_partition(C, nu):
            v.failures.append(f"nu={list(nu)}: {len(ms)} monomials, kpf {kostant_partition(C, nu)}")
        words = words_of_weight(nu)
        chars = [standard_character(order, m, table) for m in ms]
        A = [[c.coefficient(w) for c in chars] for w in words]
        if linalg.rank_laurent(A) != len(ms):
            v.failures.append(f"nu={list(nu)}: dual PBW monomials are dependent")
    v.ok = not v.failures
    return v


def check_cuspidal_modules(order: ConvexOrder, table: CuspidalTable, max_height: int = 4,
                           max_dim: int = 400) -> Verdict:
    """Vector-level cuspidal modules have character q^k E*_alpha and satisfy the relations."""
    from .klr import KLRAlgebra, cuspidal_module, verify_module
    C = order.cartan
    alg = KLRAlgebra(C)
    memo: dict = {}
    v = Verdict(True, "cuspidal-modules")
    for a in order.roots:
        if not 1 < height(a) <= max_height:
            continue
        res = cuspidal_module(alg, order, a, max_dim=max_dim, _memo=memo)
        ch = res.module.character(C.rank)
        x = table.get(a)
        lo = ch.items()[0][1].min_exp() - x.coefficient(ch.items()[0][0]).min_exp() if ch else 0
        if ch != x.shift(lo):
            v.failures.append(f"{a}: module character {ch} is not a shift of {x}")
        if not verify_module(alg, res.module).ok:
            v.failures.append(f"{a}: module violates a relation")
    v.ok = not v.failures
    return v


def check_dimension_oracle(C: CartanDatum, max_height: int = 3) -> Verdict:
    from .klr import KLRAlgebra
    from .klr.oracle import dimension_check
    alg = KLRAlgebra(C)
    v = Verdict(True, "dimension-oracle")
    for nu in weights_up_to(C, max_height):
        ii = words_of_weight(nu)[0]
        for jj, d, c, r in dimension_check(alg, ii):
            v.failures.append(f"e({''.join(map(str, jj))}) R e({''.join(map(str, ii))}) degree {d}: "
                              f"{c} normal forms, rank {r}")
    v.ok = not v.failures
    return v


def check_chevalley(order: ConvexOrder, table: CuspidalTable) -> Verdict:
    from .chevalley import UnsupportedType, chevalley_check, fold, fold_check, is_simply_laced
    v = Verdict(True, "chevalley")
    rep = chevalley_check(order, table)
    if not rep.ok:
        v.failures += [f"{r['root']} {r['word']}: {r['character_q1']} vs {r['z_pairing']}"
                       for r in rep.rows if not r["match"]]
    v.data["signs"] = {",".join(map(str, a)): s for a, s in rep.signs.items()}
    C = order.cartan
    if not is_simply_laced(C):
        try:
            F = fold(C)
        except UnsupportedType as exc:
            v.data["fold"] = f"skipped: {exc}"
        else:
            n = 0
            for a in order.roots:
                for w in words_of_weight(a):
                    fv = fold_check(order, a, w, F)
                    n += 1
                    if not fv.ok:
                        v.failures += [f"fold {a} {list(w)}: {f}" for f in fv.failures]
            v.data["fold_checks"] = n
    v.ok = not v.failures
    return v


def check_g2_fixture() -> Verdict:
    from .klr import KLRAlgebra, g2_five_dim_module, verify_module
    from .rootsys import type_G2
    r = verify_module(KLRAlgebra(type_G2()), g2_five_dim_module())
    v = Verdict(r.ok, "g2-module")
    v.failures = [e["relation"] for e in r.relation_errors] + r.shape_errors
    return v


def run_selftest(order: ConvexOrder, table: CuspidalTable, quick: bool = False,
                 seed: int = 0) -> list[Verdict]:
    """Every check that makes sense for the type of ``order``."""
    C = order.cartan
    small = C.rank <= 2
    out = [check_convexity(C, samples=10 if quick else 50, seed=seed),
           check_cuspidal_characters(order, table)]
    h = 3 if (quick or not small) else 4
    out.append(check_restriction(order, table, h))
    out.append(check_unitriangular(order, table, h))
    out.append(check_counting(order, table, h if quick else h + 1 if small else 4))
    out.append(check_form_values(order, table, h))
    out.append(check_cuspidal_modules(order, table, 3 if quick else 4))
    if small:
        out.append(check_dimension_oracle(C, 2 if quick else 3))
    out.append(check_chevalley(order, table))
    if C.name == "G2":
        out.append(check_g2_fixture())
    return out
