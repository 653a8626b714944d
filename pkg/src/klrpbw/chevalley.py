"""The q = 1 side: the nilpotent Lie algebra n, root vectors, the pairing with
the coordinate functions Z_beta, and folding of non-simply-laced data.

Simply-laced n is built from a bimultiplicative sign cocycle eps on the root
lattice, [E_a, E_b] = eps(a, b) E_{a+b}.  A non-simply-laced n is realized inside
the n of its simply-laced cover as the subalgebra generated by the orbit sums
e_o = sum_{i in o} e_i.  Root vectors are X_b = [e_i, X_g] / (p + 1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .rootsys import (CartanDatum, ConvexOrder, Root, add, sub, height, type_A, type_D, type_E6,
                      type_B, type_C, type_F4, type_G2)

Vec = dict  # carrier root -> Fraction


class UnsupportedType(ValueError):
    pass


# -- folding ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FoldedDatum:
    ambient: CartanDatum
    sigma: tuple[int, ...]
    orbits: tuple[tuple[int, ...], ...]   # orbits[i] = ambient nodes over folded label i

    def orbit_pairing(self) -> tuple[tuple[int, ...], ...]:
        P = self.ambient.pairing
        return tuple(tuple(sum(P[a][b] for a in o for b in p) for p in self.orbits) for o in self.orbits)

    def lie_cartan_matrix(self) -> tuple[tuple[int, ...], ...]:
        """a_{o,o'} = sum_{i in o} a~_{i,j} (j in o'): the Cartan matrix of the fixed points."""
        A = self.ambient
        return tuple(tuple(sum(A.cartan_integer(i, p[0]) for i in o) for p in self.orbits)
                     for o in self.orbits)

    def orbit_condition(self) -> bool:
        """i . j = 0 for distinct i, j in one orbit."""
        P = self.ambient.pairing
        return all(P[a][b] == 0 for o in self.orbits for a in o for b in o if a != b)

    def lift_word(self, word: Sequence[int]) -> tuple[int, ...]:
        return tuple(a for i in word for a in self.orbits[i])

    def expand(self, ii: Sequence[int]) -> list[tuple[int, ...]]:
        return [tuple(w) for w in itertools.product(*(self.orbits[i] for i in ii))]

    def lift_root(self, alpha: Sequence[int]) -> tuple[int, ...]:
        """A root of the cover lying over alpha (sum of orbit coordinates equals alpha)."""
        return self._over(tuple(alpha))[0]

    def roots_over(self, alpha: Sequence[int]) -> list[tuple[int, ...]]:
        return self._over(tuple(alpha))

    def _over(self, alpha):
        out = []
        for b in self.ambient.positive_roots:
            if tuple(sum(b[a] for a in o) for o in self.orbits) == alpha:
                out.append(b)
        return out


def _perm_from_orbits(n: int, cycles: Sequence[Sequence[int]]) -> tuple[int, ...]:
    s = list(range(n))
    for c in cycles:
        for t, a in enumerate(c):
            s[a] = c[(t + 1) % len(c)]
    return tuple(s)


def fold(C: CartanDatum) -> FoldedDatum:
    """Simply-laced cover with diagram automorphism for types B, C, F4, G2.

    The orbits are chosen so that the fixed-point algebra generated by the orbit sums
    e_o has the Cartan integers of C: a_{o,o'} = sum_{i in o} a~_{i,j} for j in o'.
    The orbit pairing o . o' = sum a~_{ij} then reproduces the dual datum.
    """
    r = C.rank
    if C.pairing == type_G2().pairing:
        amb, orbits = type_D(4), ((0, 2, 3), (1,))
    elif C.pairing == type_F4().pairing:
        amb, orbits = type_E6(), ((0, 5), (2, 4), (3,), (1,))
    elif r >= 2 and C.pairing == type_B(r).pairing:
        # D_{r+1}: chain 0..r-1, node r on r-2; the fork pair becomes the short node
        amb = type_D(r + 1) if r >= 3 else type_A(3)
        if r >= 3:
            orbits = ((r - 1, r),) + tuple((r - 1 - t,) for t in range(1, r))
        else:
            orbits = ((0, 2), (1,))
    elif r >= 3 and C.pairing == type_C(r).pairing:
        m = r - 1
        amb = type_A(2 * r - 1)
        orbits = ((m,),) + tuple((m - t, m + t) for t in range(1, r))
    else:
        raise UnsupportedType("folding is implemented for types B, C, F4 and G2")
    F = FoldedDatum(amb, _perm_from_orbits(amb.rank, orbits), orbits)
    if not F.orbit_condition() or F.lie_cartan_matrix() != tuple(
            tuple(C.cartan_integer(i, j) for j in C.index_set) for i in C.index_set):
        raise AssertionError("folding data does not reproduce the Cartan datum")
    return F


def is_simply_laced(C: CartanDatum) -> bool:
    return all(C.pairing[i][i] == 2 for i in C.index_set)


# -- the nilpotent algebra ----------------------------------------------------------

def _eps_table(C: CartanDatum) -> list[list[int]]:
    r = C.rank
    t = [[1] * r for _ in range(r)]
    for i in range(r):
        t[i][i] = -1
        for j in range(i + 1, r):
            if C.pairing[i][j] % 2:
                t[i][j] = -1
    return t


def _eps(table, a: Sequence[int], b: Sequence[int]) -> int:
    s = 0
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y and table[i][j] == -1:
                s += x * y
    return -1 if s % 2 else 1


def _vadd(out: Vec, v: Vec, c=1):
    for k, x in v.items():
        y = out.get(k, 0) + c * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)


class NilpotentAlgebra:
    """n for a finite-type datum, with a Chevalley basis X_beta indexed by positive roots."""

    def __init__(self, C: CartanDatum):
        self.cartan = C
        if is_simply_laced(C):
            self.folded = None
            self.carrier = C
        else:
            self.folded = fold(C)
            self.carrier = self.folded.ambient
        self._eps = _eps_table(self.carrier)
        self._carrier_roots = frozenset(self.carrier.positive_roots)
        self.roots: tuple[Root, ...] = tuple(C.positive_roots)
        self.X: dict[Root, Vec] = {}
        self._build()
        self.N: dict[tuple[Root, Root], int] = {}
        self._structure_constants()

    # carrier bracket
    def bracket(self, x: Vec, y: Vec) -> Vec:
        out: Vec = {}
        for a, c in x.items():
            for b, d in y.items():
                s = add(a, b)
                if s in self._carrier_roots:
                    _vadd(out, {s: Fraction(_eps(self._eps, a, b))}, c * d)
        return out

    def _generator(self, i: int) -> Vec:
        if self.folded is None:
            return {self.carrier.simple_root(i): Fraction(1)}
        return {self.carrier.simple_root(a): Fraction(1) for a in self.folded.orbits[i]}

    def _build(self):
        C = self.cartan
        for beta in sorted(self.roots, key=height):
            if height(beta) == 1:
                self.X[beta] = self._generator(beta.index(1))
                continue
            for i in C.index_set:
                g = sub(beta, C.simple_root(i))
                if g in self.X:
                    break
            p = 0
            while C.is_root(sub(g, tuple(p + 1 if t == i else 0 for t in range(C.rank)))):
                p += 1
            v = self.bracket(self.X[C.simple_root(i)], self.X[g])
            v = {k: x / (p + 1) for k, x in v.items()}
            if not v or any(x.denominator != 1 for x in v.values()):
                raise AssertionError(f"root vector for {beta} is not integral")
            self.X[beta] = v

    def coordinate(self, beta: Root, v: Vec) -> Fraction:
        """c with v = c X_beta (v must lie in the beta root space)."""
        X = self.X[beta]
        k = next(iter(X))
        c = Fraction(v.get(k, 0)) / X[k]
        if any(v.get(kk, 0) != c * x for kk, x in X.items()) or set(v) - set(X):
            raise AssertionError(f"vector is not in the {beta} root space")
        return c

    def _structure_constants(self):
        rs = set(self.roots)
        for a in self.roots:
            for b in self.roots:
                s = add(a, b)
                v = self.bracket(self.X[a], self.X[b])
                if s in rs:
                    c = self.coordinate(s, v)
                    if c.denominator != 1:
                        raise AssertionError("non-integral structure constant")
                    if c:
                        self.N[(a, b)] = int(c)
                elif v:
                    raise AssertionError(f"[X_{a}, X_{b}] is nonzero outside the root system")

    def bracket_roots(self, a: Root, b: Root) -> tuple[int, Root | None]:
        c = self.N.get((a, b), 0)
        return (c, add(a, b)) if c else (0, None)

    def check_jacobi(self) -> list[tuple]:
        bad = []
        for a, b, c in itertools.combinations(self.roots, 3):
            tot: dict = {}
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                n1, s = self.bracket_roots(y, z)
                if n1:
                    n2, t = self.bracket_roots(x, s)
                    if n2:
                        tot[t] = tot.get(t, 0) + n1 * n2
            if any(tot.values()):
                bad.append((a, b, c))
        return bad

    def check_antisymmetry(self) -> bool:
        return all(self.N.get((b, a), 0) == -c for (a, b), c in self.N.items())

    def check_chevalley(self) -> bool:
        """|N_{a,b}| = p + 1, p the largest integer with b - p a a root."""
        C = self.cartan

        def is_root(v):
            return C.is_root(v) or C.is_root(tuple(-x for x in v))

        for (a, b), c in self.N.items():
            p = 0
            while is_root(sub(b, tuple((p + 1) * x for x in a))):
                p += 1
            if abs(c) != p + 1:
                return False
        return True

    def adjoint(self, beta: Root) -> list[list[int]]:
        """Matrix of ad X_beta on the basis (X_gamma) in root order."""
        idx = {r: t for t, r in enumerate(self.roots)}
        n = len(self.roots)
        M = [[0] * n for _ in range(n)]
        for g in self.roots:
            c, s = self.bracket_roots(beta, g)
            if c:
                M[idx[s]][idx[g]] = c
        return M


@lru_cache(maxsize=None)
def nilpotent_algebra(C: CartanDatum) -> NilpotentAlgebra:
    return NilpotentAlgebra(C)


def root_vectors(order: ConvexOrder) -> dict[Root, list[list[int]]]:
    """beta -> adjoint matrix of X_beta."""
    n = nilpotent_algebra(order.cartan)
    return {b: n.adjoint(b) for b in order.roots}


def is_nilpotent(M: list[list[int]]) -> bool:
    n = len(M)
    P = [row[:] for row in M]
    for _ in range(n):
        P = [[sum(P[i][k] * M[k][j] for k in range(n) if P[i][k]) for j in range(n)] for i in range(n)]
    return not any(any(row) for row in P)


# -- PBW straightening and the pairing -------------------------------------------------

# Derivatives act left to right: (e_{i1} ... e_{in} f)(1) = d/dt1 ... d/dtn f(exp(t1 e_{i1}) ... exp(tn e_{in})).
PAIRING_READS_LEFT_TO_RIGHT = True


def pbw_expand(order: ConvexOrder, ii: Sequence[int]) -> dict[tuple[int, ...], int]:
    """e_{i1} ... e_{in} in the ordered PBW basis: {sorted position tuple: coefficient}."""
    C = order.cartan
    n = nilpotent_algebra(C)
    word = ii if PAIRING_READS_LEFT_TO_RIGHT else tuple(reversed(ii))
    start = tuple(order.index(C.simple_root(i)) for i in word)
    todo = {start: 1}
    done: dict[tuple[int, ...], int] = {}
    while todo:
        mono, c = todo.popitem()
        k = next((t for t in range(len(mono) - 1) if mono[t] > mono[t + 1]), None)
        if k is None:
            done[mono] = done.get(mono, 0) + c
            continue
        a, b = order.roots[mono[k]], order.roots[mono[k + 1]]
        swapped = mono[:k] + (mono[k + 1], mono[k]) + mono[k + 2:]
        todo[swapped] = todo.get(swapped, 0) + c
        nc, s = n.bracket_roots(a, b)
        if nc:
            m2 = mono[:k] + (order.index(s),) + mono[k + 2:]
            todo[m2] = todo.get(m2, 0) + c * nc
        for key in [key for key, v in todo.items() if not v]:
            del todo[key]
    return {m: c for m, c in sorted(done.items()) if c}


def z_pairing(order: ConvexOrder, ii: Sequence[int], alpha: Sequence[int]) -> int:
    """(e_ii, Z_alpha): the coefficient of X_alpha in the ordered PBW expansion of e_ii."""
    C = order.cartan
    alpha = tuple(alpha)
    if C.word_weight(ii) != alpha:
        raise ValueError(f"word {list(ii)} does not have weight {list(alpha)}")
    return pbw_expand(order, ii).get((order.index(alpha),), 0)


# -- folding check ------------------------------------------------------------------

@dataclass
class FoldVerdict:
    ok: bool
    alpha: Root
    word: tuple[int, ...]
    value: int
    summands: dict[tuple[int, ...], int] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)


def lifted_order(order: ConvexOrder, F: FoldedDatum) -> ConvexOrder:
    from .rootsys import convex_order
    if order.word is None:
        raise ValueError("folding needs an order given by a reduced word")
    return convex_order(F.ambient, F.lift_word(order.word))


def fold_check(order: ConvexOrder, alpha: Sequence[int], ii: Sequence[int],
               F: FoldedDatum | None = None) -> FoldVerdict:
    """(e_ii, Z_alpha) against the sum over the expanded words of the cover, with signs."""
    C = order.cartan
    alpha = tuple(alpha)
    F = F or fold(C)
    big = lifted_order(order, F)
    lhs = z_pairing(order, ii, alpha)
    # X_alpha = sum of c_b X~_b over the roots b above alpha; pair against one of them
    nA = nilpotent_algebra(C)
    nB = nilpotent_algebra(F.ambient)
    Xa = nA.X[alpha]
    b0 = min(Xa, key=lambda b: big.index(b))
    scale = Xa[b0] / nB.X[b0][b0]
    summands = {}
    for jj in F.expand(ii):
        if F.ambient.word_weight(jj) != b0:
            continue
        summands[jj] = z_pairing(big, jj, b0)
    total = Fraction(sum(summands.values())) / scale
    failures = []
    if total != lhs:
        failures.append(f"sum over the cover {total} != {lhs}")
    signs = {1 if v > 0 else -1 for v in summands.values() if v}
    if len(signs) > 1:
        failures.append("summands of both signs")
    return FoldVerdict(not failures, alpha, tuple(ii), lhs, summands, failures)


# -- cross-route table ----------------------------------------------------------------

@dataclass
class CrossRouteReport:
    ok: bool
    rows: list[dict]
    signs: dict[Root, int]


def chevalley_check(order: ConvexOrder, table=None, max_height: int | None = None) -> CrossRouteReport:
    """Compare q = 1 cuspidal characters with z_pairing, one sign per root."""
    from .pbw import CuspidalTable
    from .shuffle import words_of_weight
    table = table or CuspidalTable(order)
    rows, signs, ok = [], {}, True
    for a in order.roots:
        if max_height is not None and height(a) > max_height:
            continue
        ch = table.get(a).specialize_q1()
        sign = None
        for w in words_of_weight(a):
            c, z = ch.get(w, 0), z_pairing(order, w, a)
            match = abs(c) == abs(z)
            if match and c:
                s = 1 if z * c > 0 else -1
                if sign is None:
                    sign = s
                elif s != sign:
                    match = False
            ok = ok and match
            rows.append({"root": list(a), "word": list(w), "character_q1": c, "z_pairing": z, "match": match})
        signs[a] = sign if sign is not None else 1
    return CrossRouteReport(ok, rows, signs)
