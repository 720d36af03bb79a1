"""Exact matrix arithmetic over prime fields and the rationals.

Prime-field matrices are numpy int64 arrays reduced mod p; rational
matrices are numpy object arrays of fractions.  Everything is exact:
equality is entry-wise equality, invertibility is decided by exact
Gaussian elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..fincat.core import StructureError


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class ExactField:
    """F_p for a prime p, or exact rationals when p == 0."""

    p: int = 7

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise StructureError(f"{self.p} is not prime")

    @property
    def is_prime_field(self) -> bool:
        return self.p != 0

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        if self.is_prime_field:
            return np.zeros((rows, cols), dtype=np.int64)
        m = np.empty((rows, cols), dtype=object)
        m[:] = Fraction(0)
        return m

    def eye(self, n: int) -> np.ndarray:
        m = self.zeros(n, n)
        for i in range(n):
            m[i, i] = 1 if self.is_prime_field else Fraction(1)
        return m

    def normalize(self, m: np.ndarray) -> np.ndarray:
        if self.is_prime_field:
            return np.asarray(m, dtype=np.int64) % self.p
        out = np.empty(m.shape, dtype=object)
        for i in range(m.shape[0]):
            for j in range(m.shape[1]):
                out[i, j] = Fraction(m[i, j])
        return out

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.is_prime_field:
            return (a @ b) % self.p
        return a @ b

    def kron(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.size == 0 or b.size == 0:
            return self.zeros(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])
        if self.is_prime_field:
            return np.kron(a, b) % self.p
        return np.kron(a, b)

    def direct_sum(self, blocks) -> np.ndarray:
        blocks = list(blocks)
        rows = sum(b.shape[0] for b in blocks)
        cols = sum(b.shape[1] for b in blocks)
        out = self.zeros(rows, cols)
        r = c = 0
        for b in blocks:
            out[r:r + b.shape[0], c:c + b.shape[1]] = b
            r += b.shape[0]
            c += b.shape[1]
        return out

    def equal(self, a: np.ndarray, b: np.ndarray) -> bool:
        return a.shape == b.shape and bool(np.all(a == b))

    def rank(self, m: np.ndarray) -> int:
        return len(self._echelon(m)[1])

    def is_invertible(self, m: np.ndarray) -> bool:
        return m.shape[0] == m.shape[1] and self.rank(m) == m.shape[0]

    def inverse(self, m: np.ndarray) -> np.ndarray:
        n = m.shape[0]
        if m.shape[1] != n:
            raise StructureError("only square matrices invert")
        aug = self.zeros(n, 2 * n)
        aug[:, :n] = m
        aug[:, n:] = self.eye(n)
        red, pivots = self._echelon(aug, reduce=True, pivot_cols=n)
        if len(pivots) != n:
            raise StructureError("matrix is singular")
        return red[:, n:]

    def solve_right(self, a: np.ndarray, b: np.ndarray):
        """Some x with a @ x == b, or None (exact)."""
        n, m = a.shape
        k = b.shape[1]
        aug = self.zeros(n, m + k)
        aug[:, :m] = a
        aug[:, m:] = b
        red, pivots = self._echelon(aug, reduce=True, pivot_cols=m)
        x = self.zeros(m, k)
        for r in range(len(pivots), n):
            if np.any(red[r, m:] != (0 if self.is_prime_field else Fraction(0))):
                return None
        for r, c in enumerate(pivots):
            x[c, :] = red[r, m:]
        return x

    def _echelon(self, m: np.ndarray, reduce: bool = False,
                 pivot_cols: int | None = None):
        a = m.copy()
        rows, cols = a.shape
        span = cols if pivot_cols is None else pivot_cols
        pivots = []
        r = 0
        for c in range(span):
            pivot = None
            for rr in range(r, rows):
                if a[rr, c] != (0 if self.is_prime_field else Fraction(0)):
                    pivot = rr
                    break
            if pivot is None:
                continue
            if pivot != r:
                a[[r, pivot]] = a[[pivot, r]]
            inv = pow(int(a[r, c]), -1, self.p) if self.is_prime_field \
                else Fraction(1) / a[r, c]
            a[r] = (a[r] * inv) % self.p if self.is_prime_field else a[r] * inv
            lo = 0 if reduce else r + 1
            for rr in range(lo, rows):
                if rr != r and a[rr, c] != (0 if self.is_prime_field else Fraction(0)):
                    factor = a[rr, c]
                    if self.is_prime_field:
                        a[rr] = (a[rr] - factor * a[r]) % self.p
                    else:
                        a[rr] = a[rr] - factor * a[r]
            pivots.append(c)
            r += 1
            if r == rows:
                break
        return a, pivots

    def entries(self, m: np.ndarray):
        """Nested lists with serializable entries."""
        if self.is_prime_field:
            return [[int(x) for x in row] for row in m]
        return [[str(Fraction(x)) for x in row] for row in m]

    def from_entries(self, rows_, cols_, data) -> np.ndarray:
        out = self.zeros(rows_, cols_)
        for i in range(rows_):
            for j in range(cols_):
                out[i, j] = (int(data[i][j]) % self.p) if self.is_prime_field \
                    else Fraction(data[i][j])
        return out

    def rand(self, rng, rows: int, cols: int) -> np.ndarray:
        if self.is_prime_field:
            return np.array([[rng.randrange(self.p) for _ in range(cols)]
                             for _ in range(rows)], dtype=np.int64).reshape(rows, cols)
        return self.normalize(np.array(
            [[Fraction(rng.randrange(-3, 4)) for _ in range(cols)]
             for _ in range(rows)], dtype=object).reshape(rows, cols))


F2 = ExactField(2)
F7 = ExactField(7)
QQ = ExactField(0)
