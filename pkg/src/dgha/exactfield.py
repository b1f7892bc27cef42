"""Exact scalars and dense linear algebra over Q and prime fields.

Matrices are numpy arrays: object dtype holding ``flint.fmpq`` for Q,
int64 reduced mod p for GF(p).  Row reduction and products are delegated
to python-flint, everything else (slicing, stacking) stays in numpy.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import flint
import numpy as np


class NoSolution(ArithmeticError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    p: int = 0  # 0 means Q

    def __post_init__(self):
        if self.p and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p >= 1 << 20:
            raise ValueError("prime too large for int64 products")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p)

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    @property
    def characteristic(self) -> int:
        return self.p

    def __str__(self):
        return "Q" if self.p == 0 else f"GF({self.p})"

    def to_json(self) -> dict:
        return {"kind": "Q"} if self.p == 0 else {"kind": "GF", "p": self.p}

    # scalars -----------------------------------------------------------
    def scalar(self, x):
        if self.p:
            if isinstance(x, (Fraction, flint.fmpq)):
                num, den = int(x.numerator if isinstance(x, Fraction) else x.p), int(
                    x.denominator if isinstance(x, Fraction) else x.q)
                if den % self.p == 0:
                    raise ZeroDivisionError(f"denominator {den} vanishes mod {self.p}")
                return num * pow(den, -1, self.p) % self.p
            if isinstance(x, str):
                return self.scalar(Fraction(x))
            return int(x) % self.p
        if isinstance(x, flint.fmpq):
            return x
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            return flint.fmpq(x.numerator, x.denominator)
        return flint.fmpq(int(x))

    def scalar_to_json(self, x):
        if self.p:
            return int(x)
        x = flint.fmpq(x)
        return int(x.p) if x.q == 1 else f"{x.p}/{x.q}"

    def inv(self, x):
        if self.p:
            return pow(int(x), -1, self.p)
        return 1 / flint.fmpq(x)

    # arrays -------------------------------------------------------------
    @property
    def dtype(self):
        return np.int64 if self.p else object

    def zeros(self, shape) -> np.ndarray:
        if self.p:
            return np.zeros(shape, dtype=np.int64)
        a = np.empty(shape, dtype=object)
        a.fill(flint.fmpq(0))
        return a

    def eye(self, n: int) -> np.ndarray:
        a = self.zeros((n, n))
        for i in range(n):
            a[i, i] = self.one
        return a

    @property
    def one(self):
        return 1 if self.p else flint.fmpq(1)

    @property
    def zero(self):
        return 0 if self.p else flint.fmpq(0)

    def array(self, data) -> np.ndarray:
        a = np.array(data, dtype=object)
        out = self.zeros(a.shape)
        for idx, v in np.ndenumerate(a):
            out[idx] = self.scalar(v)
        return out

    def normalize(self, a: np.ndarray) -> np.ndarray:
        if self.p:
            return np.asarray(a, dtype=np.int64) % self.p
        return a

    def scale(self, a: np.ndarray, c) -> np.ndarray:
        if self.p:
            return (a * (int(c) % self.p)) % self.p
        return a * self.scalar(c)

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b

    def neg(self, a):
        return (-a) % self.p if self.p else -a

    def is_zero(self, a: np.ndarray) -> bool:
        if a.size == 0:
            return True
        return not np.any(a != 0)

    def equal(self, a: np.ndarray, b: np.ndarray) -> bool:
        return a.shape == b.shape and self.is_zero(self.sub(a, b))

    # flint bridge --------------------------------------------------------
    def _to_flint(self, a: np.ndarray):
        r, c = a.shape
        if self.p:
            return flint.nmod_mat(r, c, [int(v) for v in a.ravel()], self.p)
        rows, cols = np.nonzero(a)
        if 4 * len(rows) > a.size:
            return flint.fmpq_mat(r, c, list(a.ravel()))
        # mostly zero: fill only the nonzero entries
        m = flint.fmpq_mat(r, c)
        for i, j in zip(rows.tolist(), cols.tolist()):
            m[i, j] = a[i, j]
        return m

    def _from_flint(self, m, shape) -> np.ndarray:
        if self.p:
            return np.array([int(v) for v in m.entries()], dtype=np.int64).reshape(shape)
        out = np.empty(shape, dtype=object)
        if out.size:
            out.ravel()[:] = m.entries()
        return out

    def dot(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] != b.shape[0]:
            raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
        shape = (a.shape[0], b.shape[1])
        if a.shape[1] == 0 or 0 in shape:
            return self.zeros(shape)
        if self.p:
            if a.shape[1] * (self.p - 1) ** 2 < (1 << 62):
                return (a @ b) % self.p
            return self._from_flint(self._to_flint(a) * self._to_flint(b), shape)
        if a.size * b.shape[1] < 64:
            return a @ b
        return self._from_flint(self._to_flint(a) * self._to_flint(b), shape)

    def mdot(self, *ms: np.ndarray) -> np.ndarray:
        out = ms[0]
        for m in ms[1:]:
            out = self.dot(out, m)
        return out

    # elimination ----------------------------------------------------------
    def rref(self, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
        r, c = a.shape
        if r == 0 or c == 0:
            return self.zeros((r, c)), []
        red, rank = self._to_flint(a).rref()
        out = self._from_flint(red, (r, c))
        pivots = []
        for i in range(rank):
            row = out[i]
            j = next(j for j in range(c) if row[j] != 0)
            pivots.append(j)
        return out, pivots

    def rank(self, a: np.ndarray) -> int:
        if 0 in a.shape:
            return 0
        return self._to_flint(a).rank()

    def kernel(self, a: np.ndarray) -> np.ndarray:
        """Columns spanning {v : a v = 0}, one per free column of the rref."""
        r, c = a.shape
        red, piv = self.rref(a)
        free = [j for j in range(c) if j not in set(piv)]
        k = self.zeros((c, len(free)))
        for t, j in enumerate(free):
            k[j, t] = self.one
            for i, pj in enumerate(piv):
                k[pj, t] = self.neg(red[i, j])
        return k

    def try_solve(self, a: np.ndarray, b: np.ndarray):
        """x with a x = b (free variables zero) or None.  b may be a matrix."""
        vec = b.ndim == 1
        bb = b.reshape(-1, 1) if vec else b
        if bb.shape[0] != a.shape[0]:
            raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
        n = a.shape[1]
        aug = np.concatenate([a, bb], axis=1) if a.shape[0] else self.zeros((0, n + bb.shape[1]))
        red, piv = self.rref(aug)
        if any(p >= n for p in piv):
            return None
        x = self.zeros((n, bb.shape[1]))
        for i, pj in enumerate(piv):
            x[pj] = red[i, n:]
        return x[:, 0] if vec else x

    def column_basis(self, a: np.ndarray) -> np.ndarray:
        """Independent columns of a (pivot columns), spanning its image."""
        _, piv = self.rref(a)
        return a[:, piv]

    def extend(self, sub: np.ndarray, n: int) -> np.ndarray:
        """Standard basis vectors completing the columns of sub to a basis of K^n.

        sub is assumed to have independent columns.
        """
        if sub.shape[1] == 0:
            return self.eye(n)
        _, piv = self.rref(np.concatenate([sub, self.eye(n)], axis=1))
        k = sub.shape[1]
        return self.eye(n)[:, [p - k for p in piv if p >= k]]

    def complement(self, sub: np.ndarray, ambient: np.ndarray) -> np.ndarray:
        """Columns of ambient that, together with sub, span span(ambient).

        Chosen in echelon order; sub must lie in the span of ambient.
        """
        k = sub.shape[1]
        if ambient.shape[1] == 0:
            return ambient
        _, piv = self.rref(np.concatenate([sub, ambient], axis=1))
        return ambient[:, [p - k for p in piv if p >= k]]

    def inverse(self, a: np.ndarray) -> np.ndarray:
        n = a.shape[0]
        if a.shape != (n, n):
            raise ValueError("not square")
        if n == 0:
            return self.zeros((0, 0))
        x = self.try_solve(a, self.eye(n))
        if x is None:
            raise ZeroDivisionError("singular matrix")
        return x

    def left_inverse(self, a: np.ndarray) -> np.ndarray:
        """L with L a = I, for a with independent columns."""
        n, k = a.shape
        if k == 0:
            return self.zeros((0, n))
        _, rows = self.rref(a.T.copy())
        if len(rows) != k:
            raise ValueError("columns are dependent")
        sq_inv = self.inverse(a[rows, :])
        out = self.zeros((k, n))
        out[:, rows] = sq_inv
        return out

    def random_matrix(self, rng, shape, lo=-3, hi=3) -> np.ndarray:
        vals = rng.integers(lo, hi + 1, size=shape)
        return self.array(vals) if not self.p else vals.astype(np.int64) % self.p


QQ = FieldSpec(0)


@dataclass(frozen=True, eq=False)
class ExactMatrix:
    field: FieldSpec
    entries: np.ndarray

    @classmethod
    def from_rows(cls, field: FieldSpec, rows) -> "ExactMatrix":
        return cls(field, field.array(rows))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return ExactMatrix(self.field, self.field.dot(self.entries, other.entries))

    def __eq__(self, other):
        return (isinstance(other, ExactMatrix) and self.field == other.field
                and self.field.equal(self.entries, other.entries))

    def rank(self) -> int:
        return self.field.rank(self.entries)

    def tolist(self):
        return [[self.field.scalar_to_json(v) for v in row] for row in self.entries]

    def __repr__(self):
        return f"ExactMatrix({self.field}, {self.tolist()})"


def rref(m: ExactMatrix) -> tuple[ExactMatrix, list[int]]:
    red, piv = m.field.rref(m.entries)
    return ExactMatrix(m.field, red), piv


def kernel_basis(m: ExactMatrix) -> ExactMatrix:
    return ExactMatrix(m.field, m.field.kernel(m.entries))


def solve(m: ExactMatrix, b) -> np.ndarray:
    F = m.field
    b = np.asarray(b)
    if b.dtype != F.dtype:
        b = F.array(b)
    x = F.try_solve(m.entries, b)
    if x is None:
        raise NoSolution("right-hand side is outside the image")
    return x
