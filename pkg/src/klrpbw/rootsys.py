"""Cartan data, positive roots, reduced words for w0 and convex orders.

Roots are tuples of integers indexed by I = {0, ..., r-1}.  A convex order is
stored as the list of positive roots alpha_1 < ... < alpha_N.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

Root = tuple[int, ...]
Word = tuple[int, ...]


class CartanError(ValueError):
    pass


class ReducedWordError(ValueError):
    def __init__(self, msg, prefix=()):
        super().__init__(msg)
        self.prefix = tuple(prefix)


def _leading_minors_positive(m: Sequence[Sequence[int]]) -> bool:
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    for k in range(n):
        if a[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return True


@dataclass(frozen=True)
class CartanDatum:
    """Symmetric pairing i.j on I = {0..r-1} of finite type."""

    pairing: tuple[tuple[int, ...], ...]
    name: str = ""

    def __post_init__(self):
        p = tuple(tuple(int(x) for x in row) for row in self.pairing)
        object.__setattr__(self, "pairing", p)
        r = len(p)
        if any(len(row) != r for row in p):
            raise CartanError("pairing matrix must be square")
        for i in range(r):
            if p[i][i] <= 0 or p[i][i] % 2:
                raise CartanError(f"{i}.{i} = {p[i][i]} is not a positive even integer")
            for j in range(r):
                if p[i][j] != p[j][i]:
                    raise CartanError("pairing matrix must be symmetric")
                if i != j:
                    if p[i][j] > 0:
                        raise CartanError(f"{i}.{j} = {p[i][j]} must be non-positive")
                    if (2 * p[i][j]) % p[i][i]:
                        raise CartanError(f"a_{i}{j} = 2({i}.{j})/({i}.{i}) is not an integer")
        if not _leading_minors_positive(p):
            raise CartanError("pairing matrix is not positive definite (not finite type)")

    @property
    def rank(self) -> int:
        return len(self.pairing)

    @property
    def index_set(self) -> range:
        return range(self.rank)

    def dot(self, u: Sequence[int], v: Sequence[int]) -> int:
        p = self.pairing
        return sum(u[i] * p[i][j] * v[j] for i in range(len(u)) if u[i] for j in range(len(v)) if v[j])

    def norm(self, i: int) -> int:
        return self.pairing[i][i]

    def cartan_integer(self, i: int, j: int) -> int:
        """a_ij = 2 (i.j) / (i.i)."""
        return 2 * self.pairing[i][j] // self.pairing[i][i]

    def simple_root(self, i: int) -> Root:
        return tuple(1 if k == i else 0 for k in range(self.rank))

    def reflect(self, i: int, v: Sequence[int]) -> Root:
        c = 2 * self.dot(v, self.simple_root(i)) // self.pairing[i][i]
        return tuple(x - c if k == i else x for k, x in enumerate(v))

    def word_weight(self, word: Iterable[int]) -> Root:
        nu = [0] * self.rank
        for i in word:
            nu[i] += 1
        return tuple(nu)

    @cached_property
    def positive_roots(self) -> tuple[Root, ...]:
        return tuple(positive_roots(self))

    @cached_property
    def root_set(self) -> frozenset:
        return frozenset(self.positive_roots)

    def is_root(self, v: Sequence[int]) -> bool:
        return tuple(v) in self.root_set

    def __hash__(self):
        return hash(self.pairing)

    def __eq__(self, other):
        return isinstance(other, CartanDatum) and self.pairing == other.pairing


def height(v: Sequence[int]) -> int:
    return sum(v)


def add(u: Sequence[int], v: Sequence[int]) -> Root:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[int], v: Sequence[int]) -> Root:
    return tuple(a - b for a, b in zip(u, v))


def scale(k: int, v: Sequence[int]) -> Root:
    return tuple(k * a for a in v)


def positive_roots(C: CartanDatum) -> list[Root]:
    """Closure of the simple roots under simple reflections, keeping positive vectors.

    Each s_i permutes the positive roots other than alpha_i, so the closure is
    exactly Phi+.  Sorted by (height, coordinates) for reproducibility.
    """
    seen = {C.simple_root(i) for i in C.index_set}
    frontier = list(seen)
    limit = 10_000
    while frontier:
        nxt = []
        for v in frontier:
            for i in C.index_set:
                w = C.reflect(i, v)
                if all(x >= 0 for x in w) and w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
        if len(seen) > limit:
            raise CartanError("root closure does not terminate; not of finite type")
    return sorted(seen, key=lambda v: (height(v), tuple(-x for x in v)))


# -- named types ---------------------------------------------------------------

def _chain(norms: Sequence[int], bonds: dict[tuple[int, int], int]) -> tuple[tuple[int, ...], ...]:
    r = len(norms)
    m = [[0] * r for _ in range(r)]
    for i in range(r):
        m[i][i] = norms[i]
    for (i, j), v in bonds.items():
        m[i][j] = m[j][i] = v
    return tuple(tuple(row) for row in m)


def type_A(r: int) -> CartanDatum:
    return CartanDatum(_chain([2] * r, {(i, i + 1): -1 for i in range(r - 1)}), f"A{r}")


def type_B(r: int) -> CartanDatum:
    """B_r with vertex 0 short and 0 = 1 - 2 - ... - (r-1)."""
    norms = [2] + [4] * (r - 1)
    bonds = {(0, 1): -2}
    bonds.update({(i, i + 1): -2 for i in range(1, r - 1)})
    return CartanDatum(_chain(norms, bonds), f"B{r}")


def type_C(r: int) -> CartanDatum:
    """C_r with vertex 0 long and 0 = 1 - 2 - ... - (r-1)."""
    norms = [4] + [2] * (r - 1)
    bonds = {(0, 1): -2}
    bonds.update({(i, i + 1): -1 for i in range(1, r - 1)})
    return CartanDatum(_chain(norms, bonds), f"C{r}")


def type_D(r: int) -> CartanDatum:
    """D_r: chain 0 - 1 - ... - (r-2) with r-1 attached to r-3."""
    bonds = {(i, i + 1): -1 for i in range(r - 2)}
    bonds[(r - 3, r - 1)] = -1
    return CartanDatum(_chain([2] * r, bonds), f"D{r}")


def type_E6() -> CartanDatum:
    """E6 in Bourbaki numbering shifted to 0..5: chain 0-2-3-4-5, 1 on 3."""
    bonds = {(0, 2): -1, (2, 3): -1, (3, 4): -1, (4, 5): -1, (1, 3): -1}
    return CartanDatum(_chain([2] * 6, bonds), "E6")


def type_F4() -> CartanDatum:
    """F4 with 0 - 1 short, 2 - 3 long, double bond between 1 and 2."""
    return CartanDatum(_chain([2, 2, 4, 4], {(0, 1): -1, (1, 2): -2, (2, 3): -2}), "F4")


def type_G2() -> CartanDatum:
    """G2 with 0 short and 1 long."""
    return CartanDatum(_chain([2, 6], {(0, 1): -3}), "G2")


def named_type(name: str) -> CartanDatum:
    name = name.strip().upper()
    kind, rest = name[0], name[1:]
    if not rest.isdigit():
        raise CartanError(f"unknown Cartan type {name!r}")
    r = int(rest)
    if kind == "A" and r >= 1:
        return type_A(r)
    if kind == "B" and r >= 2:
        return type_B(r)
    if kind == "C" and r >= 2:
        return type_C(r)
    if kind == "D" and r >= 4:
        return type_D(r)
    if name == "E6":
        return type_E6()
    if name == "F4":
        return type_F4()
    if name == "G2":
        return type_G2()
    raise CartanError(f"unknown Cartan type {name!r}")


# -- Weyl group words and convex orders ----------------------------------------

def inversion_roots(C: CartanDatum, word: Sequence[int]) -> list[Root]:
    """beta_k = s_{i_1} ... s_{i_{k-1}} alpha_{i_k}; the word is reduced iff all are positive."""
    out = []
    for k, i in enumerate(word):
        v = C.simple_root(i)
        for j in reversed(word[:k]):
            v = C.reflect(j, v)
        out.append(v)
    return out


def validate_reduced_word(C: CartanDatum, word: Sequence[int]) -> None:
    word = tuple(word)
    N = len(C.positive_roots)
    for i in word:
        if not 0 <= i < C.rank:
            raise ReducedWordError(f"letter {i} not in the index set")
    for k, beta in enumerate(inversion_roots(C, word)):
        if any(x < 0 for x in beta):
            raise ReducedWordError(f"word is not reduced; failing prefix {word[:k + 1]}", word[:k + 1])
    if len(word) != N:
        raise ReducedWordError(f"reduced word has length {len(word)}, longest element needs {N}", word)


@dataclass(frozen=True)
class ConvexOrder:
    """alpha_1 < ... < alpha_N, optionally remembering the reduced word it came from."""

    cartan: CartanDatum
    roots: tuple[Root, ...]
    word: tuple[int, ...] | None = None
    position: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(tuple(r) for r in self.roots))
        object.__setattr__(self, "position", {r: k for k, r in enumerate(self.roots)})
        if sorted(self.roots) != sorted(self.cartan.positive_roots):
            raise ValueError("order is not a permutation of the positive roots")

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def index(self, root: Sequence[int]) -> int:
        return self.position[tuple(root)]

    def less(self, a, b) -> bool:
        return self.position[tuple(a)] < self.position[tuple(b)]

    def key(self) -> str:
        if self.word is not None:
            return ",".join(map(str, self.word))
        return ";".join(".".join(map(str, r)) for r in self.roots)


def convex_order(C: CartanDatum, word: Sequence[int]) -> ConvexOrder:
    """alpha_j = s_{i_N} ... s_{i_{j+1}} alpha_{i_j}."""
    word = tuple(word)
    validate_reduced_word(C, word)
    N = len(word)
    roots = []
    for j in range(N):
        v = C.simple_root(word[j])
        for i in word[j + 1:]:
            v = C.reflect(i, v)
        roots.append(v)
    return ConvexOrder(C, tuple(roots), word)


def is_convex(C: CartanDatum, order: Sequence[Root] | ConvexOrder) -> bool:
    """Pairwise criterion: beta + gamma = alpha forces alpha strictly between beta and gamma."""
    roots = tuple(order.roots if isinstance(order, ConvexOrder) else (tuple(r) for r in order))
    if sorted(roots) != sorted(C.positive_roots):
        raise ValueError("order is not a permutation of the positive roots")
    pos = {r: k for k, r in enumerate(roots)}
    for a, b in itertools.combinations(roots, 2):
        s = add(a, b)
        if s in pos:
            lo, hi = sorted((pos[a], pos[b]))
            if not lo < pos[s] < hi:
                return False
    return True


def _weyl_step(C: CartanDatum, images: tuple[Root, ...], i: int) -> tuple[Root, ...]:
    """Images of the simple roots under w s_i, given those under w."""
    wi = images[i]
    out = []
    for j in C.index_set:
        c = 2 * C.pairing[j][i] // C.pairing[i][i]
        out.append(tuple(a - c * b for a, b in zip(images[j], wi)))
    return tuple(out)


def reduced_words_w0(C: CartanDatum, limit: int | None = None) -> list[Word]:
    """All reduced words for the longest element (optionally the first ``limit``)."""
    start = tuple(C.simple_root(i) for i in C.index_set)
    N = len(C.positive_roots)
    out: list[Word] = []

    @lru_cache(maxsize=None)
    def completions(images):
        # number of ways is not needed; we enumerate via DFS with memoized extensions
        return tuple(i for i in C.index_set if all(x >= 0 for x in images[i]) and any(images[i]))

    def dfs(images, prefix):
        if limit is not None and len(out) >= limit:
            return
        if len(prefix) == N:
            out.append(tuple(prefix))
            return
        for i in completions(images):
            prefix.append(i)
            dfs(_weyl_step(C, images, i), prefix)
            prefix.pop()

    dfs(start, [])
    return out


def random_reduced_word(C: CartanDatum, rng: random.Random) -> Word:
    """Random walk up the weak order; every reduced word has positive probability."""
    images = tuple(C.simple_root(i) for i in C.index_set)
    word = []
    for _ in range(len(C.positive_roots)):
        choices = [i for i in C.index_set if all(x >= 0 for x in images[i])]
        i = rng.choice(choices)
        word.append(i)
        images = _weyl_step(C, images, i)
    return tuple(word)


def minimal_pairs(order: ConvexOrder, alpha: Sequence[int]) -> list[tuple[Root, Root]]:
    """All minimal pairs (beta, gamma) for a non-simple root alpha, beta < alpha < gamma."""
    alpha = tuple(alpha)
    C = order.cartan
    if alpha not in order.position:
        raise ValueError(f"{alpha} is not a positive root")
    if height(alpha) == 1:
        raise ValueError(f"{alpha} is simple; it has no minimal pair")
    pa = order.index(alpha)
    pairs = []
    for b in order.roots[:pa]:
        g = sub(alpha, b)
        if g in order.position and order.index(g) > pa:
            pairs.append((b, g))
    minimal = []
    for b, g in pairs:
        pb, pg = order.index(b), order.index(g)
        if not any(pb < order.index(b2) < pa < order.index(g2) < pg for b2, g2 in pairs):
            minimal.append((b, g))
    if not minimal:
        raise AssertionError(f"no minimal pair found for {alpha}; order is not convex")
    return minimal


def default_minimal_pair(order: ConvexOrder, alpha: Sequence[int]) -> tuple[Root, Root]:
    """The minimal pair whose gamma comes first in the order."""
    return min(minimal_pairs(order, alpha), key=lambda bg: order.index(bg[1]))


def kostant_partition(C: CartanDatum, nu: Sequence[int]) -> int:
    """Number of multisets of positive roots summing to nu."""
    roots = C.positive_roots

    @lru_cache(maxsize=None)
    def count(v, k):
        if not any(v):
            return 1
        if k == len(roots):
            return 0
        total = 0
        r = roots[k]
        w = v
        while all(x >= 0 for x in w):
            total += count(w, k + 1)
            w = sub(w, r)
        return total

    nu = tuple(nu)
    if any(x < 0 for x in nu):
        return 0
    return count(nu, 0)


def kp_vectors(order: ConvexOrder, nu: Sequence[int]) -> list[tuple[int, ...]]:
    """All m in N^{Phi+} (tuples aligned with the order) with |m| = nu."""
    roots = order.roots
    nu = tuple(nu)
    out = []

    def rec(k, rest, acc):
        if k == len(roots):
            if not any(rest):
                out.append(tuple(acc))
            return
        r = roots[k]
        n = 0
        w = rest
        while all(x >= 0 for x in w):
            acc.append(n)
            rec(k + 1, w, acc)
            acc.pop()
            n += 1
            w = sub(w, r)

    rec(0, nu, [])
    return sorted(out)


def kp_weight(order: ConvexOrder, m: Sequence[int]) -> Root:
    nu = [0] * order.cartan.rank
    for k, c in enumerate(m):
        for i, x in enumerate(order.roots[k]):
            nu[i] += c * x
    return tuple(nu)


def kp_unit(order: ConvexOrder, alpha: Sequence[int], n: int = 1) -> tuple[int, ...]:
    m = [0] * len(order)
    m[order.index(alpha)] = n
    return tuple(m)


def lex_less(m: Sequence[int], n: Sequence[int]) -> bool:
    """m < n: compare at the largest index where they differ."""
    for a, b in zip(reversed(m), reversed(n)):
        if a != b:
            return a < b
    return False


def oplex_less(m: Sequence[int], n: Sequence[int]) -> bool:
    """m <' n: compare at the smallest index where they differ."""
    for a, b in zip(m, n):
        if a != b:
            return a < b
    return False


def root_sum_split(C: CartanDatum, alpha: Sequence[int], deltas: Sequence[Sequence[int]]) -> frozenset[int]:
    """A nonempty proper subset S (0-based indices) with both partial sums roots."""
    deltas = [tuple(d) for d in deltas]
    n = len(deltas)
    if n < 2:
        raise ValueError("need at least two summands")
    if tuple(alpha) != tuple(map(sum, zip(*deltas))):
        raise ValueError("summands do not add up to alpha")
    for size in range(1, n):
        for S in itertools.combinations(range(n), size):
            a = [0] * C.rank
            for s in S:
                a = add(a, deltas[s])
            if C.is_root(a) and C.is_root(sub(alpha, a)):
                return frozenset(S)
    raise AssertionError("no splitting subset exists; root system data is inconsistent")


def reduced_word_of_order(C: CartanDatum, roots: Sequence[Root]) -> Word:
    """Recover the reduced word whose convex order is ``roots``.

    The last root is simple, alpha_{i_N}; reflecting the rest by s_{i_N} gives
    the order for the shorter word.  Raises ValueError if the order does not
    come from a reduced word.
    """
    rest = [tuple(r) for r in roots]
    word = []
    while rest:
        last = rest.pop()
        if height(last) != 1:
            raise ValueError("order does not come from a reduced word")
        i = last.index(1)
        word.append(i)
        rest = [C.reflect(i, r) for r in rest]
        if any(x < 0 for r in rest for x in r):
            raise ValueError("order does not come from a reduced word")
    return tuple(reversed(word))


def _hmm_key(rank: int, word: Sequence[int]) -> tuple[int, ...]:
    # read the word backwards over the alphabet r-1 < ... < 1 < 0
    return tuple(rank - 1 - i for i in reversed(word))


def hmm_words(C: CartanDatum) -> dict[Root, Word]:
    """Good words ii_alpha for the lexicographic order used in the tables.

    Words are compared after reversing them and reversing the alphabet; in
    that picture ii_alpha is the largest concatenation ii_beta ii_gamma with
    ii_beta < ii_gamma over all splittings alpha = beta + gamma.
    """
    r = C.rank
    key: dict[Root, tuple[int, ...]] = {}
    for alpha in sorted(C.positive_roots, key=height):
        if height(alpha) == 1:
            key[alpha] = (r - 1 - alpha.index(1),)
            continue
        best = None
        for beta in key:
            gamma = sub(alpha, beta)
            if gamma in key and key[beta] < key[gamma]:
                cand = key[beta] + key[gamma]
                if best is None or cand > best:
                    best = cand
        if best is None:
            raise AssertionError(f"no good word for {alpha}")
        key[alpha] = best
    return {a: _hmm_key(r, k) for a, k in key.items()}


def hmm_order(C: CartanDatum) -> tuple[ConvexOrder, dict[Root, Word]]:
    """Convex order induced by the good words, and the map alpha -> ii_alpha."""
    words = hmm_words(C)
    roots = sorted(words, key=lambda a: _hmm_key(C.rank, words[a]))
    w = reduced_word_of_order(C, roots)
    order = ConvexOrder(C, tuple(roots), w)
    return order, words


def root_of_word(C: CartanDatum, word: Sequence[int]) -> Root:
    return C.word_weight(word)
