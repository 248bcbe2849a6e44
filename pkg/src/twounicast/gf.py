"""Small finite fields and exact linear algebra over them.

Elements of GF(q) are the integers 0..q-1. For prime q that is ordinary
arithmetic mod q; for q = 4 and q = 8 an element is a polynomial over GF(2)
in bit representation, reduced by x^2+x+1 and x^3+x+1 respectively.
"""

from __future__ import annotations

from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

_MODULI = {4: (2, 0b111), 8: (3, 0b1011)}

Vector = Tuple[int, ...]


class FieldError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


class GF:
    def __init__(self, q: int):
        if _is_prime(q):
            add = [[(a + b) % q for b in range(q)] for a in range(q)]
            mul = [[(a * b) % q for b in range(q)] for a in range(q)]
        elif q in _MODULI:
            deg, poly = _MODULI[q]
            add = [[a ^ b for b in range(q)] for a in range(q)]
            mul = [[_polymul(a, b, deg, poly) for b in range(q)] for a in range(q)]
        else:
            raise FieldError(f"unsupported field size {q}")
        self.q = q
        self.prime = _is_prime(q)
        self.add = add
        self.mul = mul
        self.neg = [next(b for b in range(q) if add[a][b] == 0) for a in range(q)]
        self.inv = [0] + [next(b for b in range(q) if mul[a][b] == 1) for a in range(1, q)]
        self.sub = [[add[a][self.neg[b]] for b in range(q)] for a in range(q)]

    def __repr__(self) -> str:
        return f"GF({self.q})"

    # vectors and matrices are tuples / lists of ints

    def dot(self, u: Sequence[int], v: Sequence[int]) -> int:
        add, mul = self.add, self.mul
        s = 0
        for a, b in zip(u, v):
            if a and b:
                s = add[s][mul[a][b]]
        return s

    def axpy(self, c: int, x: Sequence[int], y: Sequence[int]) -> List[int]:
        """y + c*x"""
        if not c:
            return list(y)
        add, mr = self.add, self.mul[c]
        return [add[b][mr[a]] for a, b in zip(x, y)]

    def scale(self, c: int, x: Sequence[int]) -> List[int]:
        mr = self.mul[c]
        return [mr[a] for a in x]

    def matmul(self, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], inner: Optional[int] = None) -> List[List[int]]:
        """A (r x n) times B (n x c). ``inner`` gives c when B has no rows."""
        if not A:
            return []
        cols = len(B[0]) if B else (inner or 0)
        out = []
        for row in A:
            acc = [0] * cols
            for a, brow in zip(row, B):
                if a:
                    acc = self.axpy(a, brow, acc)
            out.append(acc)
        return out

    def rref(self, rows: Sequence[Sequence[int]]) -> Tuple[List[List[int]], List[int]]:
        """Reduced row echelon form (nonzero rows only) and pivot columns."""
        M = [list(r) for r in rows]
        if not M:
            return [], []
        ncols = len(M[0])
        pivots = []
        r = 0
        for c in range(ncols):
            p = next((i for i in range(r, len(M)) if M[i][c]), None)
            if p is None:
                continue
            M[r], M[p] = M[p], M[r]
            M[r] = self.scale(self.inv[M[r][c]], M[r])
            for i in range(len(M)):
                if i != r and M[i][c]:
                    M[i] = self.axpy(self.neg[M[i][c]], M[r], M[i])
            pivots.append(c)
            r += 1
            if r == len(M):
                break
        return M[:r], pivots

    def rank(self, rows: Sequence[Sequence[int]]) -> int:
        return len(self.rref(rows)[0])

    def independent_rows(self, rows: Sequence[Sequence[int]]) -> List[int]:
        """Indices of the first maximal independent subset of ``rows``, greedily."""
        basis: List[List[int]] = []
        pivots: List[int] = []
        chosen = []
        for idx, row in enumerate(rows):
            v = list(row)
            for b, p in zip(basis, pivots):
                if v[p]:
                    v = self.axpy(self.neg[v[p]], b, v)
            p = next((c for c, a in enumerate(v) if a), None)
            if p is None:
                continue
            v = self.scale(self.inv[v[p]], v)
            for i, b in enumerate(basis):
                if b[p]:
                    basis[i] = self.axpy(self.neg[b[p]], v, b)
            basis.append(v)
            pivots.append(p)
            chosen.append(idx)
        return chosen

    def solve_left(self, T: Sequence[Sequence[int]], E: Sequence[Sequence[int]]) -> Optional[List[List[int]]]:
        """D with D*T = E (free variables set to 0), or None if no solution.

        T is r x M, E is s x M; D is s x r.
        """
        r = len(T)
        if not E:
            return []
        M = len(E[0])
        # columns of T^T: solve T^T d = e for each row e of E, jointly
        aug = [[T[j][c] for j in range(r)] + [E[i][c] for i in range(len(E))] for c in range(M)]
        red, piv = self.rref(aug)
        if any(p >= r for p in piv):
            return None
        D = [[0] * r for _ in E]
        for row, p in zip(red, piv):
            for i in range(len(E)):
                D[i][p] = row[r + i]
        return D

    def in_span(self, rows: Sequence[Sequence[int]], vecs: Sequence[Sequence[int]]) -> bool:
        return self.rank(list(rows) + list(vecs)) == self.rank(rows)


def _polymul(a: int, b: int, deg: int, poly: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> deg & 1:
            a ^= poly
    return r


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)


def subspaces(F: GF, d: int, c: int):
    """All c-dimensional subspaces of F^d as RREF bases, in lexicographic order.

    Order: pivot column tuples lexicographically, then the free entries
    read row by row as base-q digits.
    """
    from itertools import combinations, product

    if c == 0:
        yield []
        return
    for piv in combinations(range(d), c):
        free = [(i, j) for i, p in enumerate(piv) for j in range(p + 1, d) if j not in piv]
        for vals in product(range(F.q), repeat=len(free)):
            rows = [[0] * d for _ in range(c)]
            for i, p in enumerate(piv):
                rows[i][p] = 1
            for (i, j), v in zip(free, vals):
                rows[i][j] = v
            yield rows


def count_subspaces(q: int, d: int, c: int) -> int:
    """Gaussian binomial coefficient [d choose c]_q."""
    if c < 0 or c > d:
        return 0
    num = den = 1
    for i in range(c):
        num *= q ** (d - i) - 1
        den *= q ** (i + 1) - 1
    return num // den
