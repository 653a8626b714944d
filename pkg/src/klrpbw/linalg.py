"""Exact linear algebra helpers.

Two flavours are needed: systems with Laurent-polynomial coefficients (solved
over Q(q) by fraction-free elimination on a pivot block found modulo a prime),
and plain rational matrices for module computations.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .qarith import LaurentPoly, RatFunc, ZERO, ONE

_PRIME = 2_147_483_647


class InconsistentSystem(ArithmeticError):
    pass


# -- modular rank profile --------------------------------------------------------

def _mod_rows(A: Sequence[Sequence[LaurentPoly]], x: int, p: int) -> list[list[int]]:
    return [[e.evaluate(x, p) if e else 0 for e in row] for row in A]


def pivot_profile_mod(M: list[list[int]], p: int) -> tuple[list[int], list[int]]:
    """Row and column indices of a maximal nonsingular block, computed over GF(p)."""
    rows = [list(r) for r in M]
    m = len(rows)
    n = len(rows[0]) if m else 0
    piv_rows, piv_cols = [], []
    # eliminate column by column, remembering original row indices
    order = list(range(m))
    r = 0
    for c in range(n):
        sel = None
        for k in range(r, m):
            if rows[k][c] % p:
                sel = k
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        order[r], order[sel] = order[sel], order[r]
        inv = pow(rows[r][c], p - 2, p)
        for k in range(r + 1, m):
            f = rows[k][c] * inv % p
            if f:
                rk, rr = rows[k], rows[r]
                for j in range(c, n):
                    rk[j] = (rk[j] - f * rr[j]) % p
        piv_rows.append(order[r])
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    return piv_rows, piv_cols


def rank_laurent(A: Sequence[Sequence[LaurentPoly]], rng: random.Random | None = None, trials: int = 2) -> int:
    """Rank over Q(q); evaluation at random points can only under-count, so take the max."""
    if not A or not A[0]:
        return 0
    rng = rng or random.Random(0x5EED)
    best = 0
    for _ in range(trials):
        x = rng.randrange(2, _PRIME - 1)
        best = max(best, len(pivot_profile_mod(_mod_rows(A, x, _PRIME), _PRIME)[0]))
    return best


# -- fraction-free solve over Z[q, q^-1] ------------------------------------------

def bareiss_solve(S: list[list[LaurentPoly]], b: list[LaurentPoly]) -> tuple[list[LaurentPoly], LaurentPoly]:
    """Solve the square nonsingular system S x = b; returns (numerators, det) with x = num/det."""
    nums, det = bareiss_solve_multi(S, [b])
    return nums[0], det


def bareiss_solve_multi(S: list[list[LaurentPoly]], rhs: list[list[LaurentPoly]]
                        ) -> tuple[list[list[LaurentPoly]], LaurentPoly]:
    """Fraction-free elimination with several right-hand sides (each a column vector)."""
    n = len(S)
    k = len(rhs)
    M = [list(S[i]) + [b[i] for b in rhs] for i in range(n)]
    width = n + k
    prev = ONE
    for c in range(n):
        if not M[c][c]:
            sel = next((i for i in range(c + 1, n) if M[i][c]), None)
            if sel is None:
                raise ZeroDivisionError("singular block")
            M[c], M[sel] = M[sel], M[c]
        pk = M[c][c]
        row_c = M[c]
        for i in range(c + 1, n):
            mi = M[i]
            mic = mi[c]
            for j in range(c + 1, width):
                v = pk * mi[j]
                if mic and row_c[j]:
                    v = v - mic * row_c[j]
                mi[j] = v.exact_div(prev) if prev != ONE and v else v
            mi[c] = ZERO
        prev = pk
    det = M[n - 1][n - 1] if n else ONE
    sols = []
    for t in range(k):
        num = [ZERO] * n
        for i in range(n - 1, -1, -1):
            acc = M[i][n + t] * det
            for j in range(i + 1, n):
                if M[i][j] and num[j]:
                    acc = acc - M[i][j] * num[j]
            num[i] = acc.exact_div(M[i][i])
        sols.append(num)
    return sols, det


def solve_laurent(A: Sequence[Sequence[LaurentPoly]], b: Sequence[LaurentPoly],
                  rng: random.Random | None = None, attempts: int = 4) -> list[RatFunc]:
    """Some solution of A x = b over Q(q), verified exactly; free variables set to 0.

    Raises InconsistentSystem when no solution exists.
    """
    return solve_laurent_multi(A, [list(b)], rng, attempts)[0]


def solve_laurent_multi(A: Sequence[Sequence[LaurentPoly]], rhs: Sequence[Sequence[LaurentPoly]],
                        rng: random.Random | None = None, attempts: int = 4) -> list[list[RatFunc]]:
    """solve_laurent for several right-hand sides sharing one elimination."""
    m = len(A)
    n = len(A[0]) if m else 0
    if n == 0:
        if any(any(b) for b in rhs):
            raise InconsistentSystem("empty system with nonzero right-hand side")
        return [[] for _ in rhs]
    rng = rng or random.Random(0xC0FFEE)
    for _ in range(attempts):
        x0 = rng.randrange(2, _PRIME - 1)
        rows_a, cols_a = pivot_profile_mod(_mod_rows(A, x0, _PRIME), _PRIME)
        S = [[A[i][j] for j in cols_a] for i in rows_a]
        try:
            nums, det = bareiss_solve_multi(S, [[b[i] for i in rows_a] for b in rhs])
        except ZeroDivisionError:
            continue
        out = []
        ok = True
        for b, num in zip(rhs, nums):
            full = [ZERO] * n
            for c, v in zip(cols_a, num):
                full[c] = v
            for i in range(m):
                acc = ZERO
                for j in cols_a:
                    if A[i][j] and full[j]:
                        acc = acc + A[i][j] * full[j]
                if acc != b[i] * det:
                    ok = False
                    break
            if not ok:
                break
            out.append([RatFunc(v, det) for v in full])
        if ok:
            return out
    raise InconsistentSystem("linear system has no solution over Q(q)")


# -- rational matrices ----------------------------------------------------------

def rref(M: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    A = [[Fraction(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        sel = next((i for i in range(r, m) if A[i][c]), None)
        if sel is None:
            continue
        A[r], A[sel] = A[sel], A[r]
        pv = A[r][c]
        if pv != 1:
            A[r] = [x / pv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A[:r], pivots


def rank_q(M: list[list[Fraction]]) -> int:
    if not M or not M[0]:
        return 0
    return len(rref(M)[1])


def nullspace(M: list[list[Fraction]], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : M x = 0}."""
    n = ncols if ncols is not None else (len(M[0]) if M else 0)
    if not M:
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    R, piv = rref(M)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(R, piv):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def matmul(A: list[list[Fraction]], B: list[list[Fraction]]) -> list[list[Fraction]]:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        r = [Fraction(0)] * cols
        for k in range(inner):
            a = row[k]
            if a:
                bk = B[k]
                for j in range(cols):
                    if bk[j]:
                        r[j] += a * bk[j]
        out.append(r)
    return out


def matvec(A: list[list[Fraction]], v: Sequence[Fraction]) -> list[Fraction]:
    return [sum((a * x for a, x in zip(row, v) if a and x), Fraction(0)) for row in A]


def solve_q(A: list[list[Fraction]], b: Sequence[Fraction]) -> list[Fraction] | None:
    """One solution of A x = b over Q, or None."""
    n = len(A[0]) if A else 0
    aug = [list(row) + [Fraction(bi)] for row, bi in zip(A, b)]
    R, piv = rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(R, piv):
        x[pc] = row[n]
    return x
