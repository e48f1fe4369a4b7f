"""Dense exact matrices over a :class:`~grassdim.fields.FieldSpec`.

Prime-field matrices are int64 arrays of residues (moduli stay below 2**31,
so a product of two residues fits).  Rational matrices are object arrays of
``int``/``Fraction``.  Elimination pivots on the first nonzero entry of the
column; over QQ determinants and ranks use fraction-free (Bareiss)
elimination.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

import numpy as np

from .combinat import MultiIndex
from .fields import FieldSpec


class LinalgError(ValueError):
    pass


class NotSquare(LinalgError):
    pass


class SizeMismatch(LinalgError):
    pass


class IndexOutOfRange(LinalgError, IndexError):
    pass


class ExactMatrix:
    """Immutable matrix with canonical entries in ``field``."""

    __slots__ = ("data", "field")

    def __init__(self, data, field: FieldSpec):
        if field.is_prime:
            arr = np.asarray(data, dtype=object)
            arr = np.vectorize(field, otypes=[object])(arr) if arr.size else arr
            arr = arr.astype(np.int64)
        else:
            arr = np.array(data, dtype=object)
            if arr.size:
                arr = np.vectorize(field, otypes=[object])(arr)
        if arr.ndim != 2:
            arr = arr.reshape(len(arr), -1) if arr.size else arr.reshape(len(arr), 0)
        arr.flags.writeable = False
        self.data = arr
        self.field = field

    @classmethod
    def wrap(cls, arr: np.ndarray, field: FieldSpec) -> "ExactMatrix":
        """Adopt an array already holding canonical entries (no copy, no checks)."""
        m = object.__new__(cls)
        arr.flags.writeable = False
        m.data = arr
        m.field = field
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int, field: FieldSpec) -> "ExactMatrix":
        dtype = np.int64 if field.is_prime else object
        return cls.wrap(np.zeros((rows, cols), dtype=dtype), field)

    @classmethod
    def identity(cls, n: int, field: FieldSpec) -> "ExactMatrix":
        dtype = np.int64 if field.is_prime else object
        arr = np.zeros((n, n), dtype=dtype)
        for i in range(n):
            arr[i, i] = 1
        return cls.wrap(arr, field)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix.wrap(self.data.T.copy(), self.field)

    def __getitem__(self, idx):
        out = self.data[idx]
        if isinstance(out, np.ndarray):
            return out
        return int(out) if self.field.is_prime else out

    def tolist(self) -> list[list]:
        if self.field.is_prime:
            return [[int(x) for x in row] for row in self.data]
        return [list(row) for row in self.data]

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and bool(np.all(self.data == other.data)))

    def __hash__(self):
        return hash((self.field, self.shape, tuple(map(tuple, self.tolist()))))

    def __repr__(self):
        return f"ExactMatrix({self.tolist()!r}, {self.field})"

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        _same_field(self, other)
        if self.shape != other.shape:
            raise SizeMismatch(f"{self.shape} vs {other.shape}")
        if self.field.is_prime:
            return ExactMatrix.wrap((self.data + other.data) % self.field.modulus, self.field)
        return ExactMatrix(self.data + other.data, self.field)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        _same_field(self, other)
        if self.cols != other.rows:
            raise SizeMismatch(f"{self.shape} @ {other.shape}")
        if self.field.is_prime:
            return ExactMatrix.wrap(matmul_mod(self.data, other.data, self.field.modulus), self.field)
        return ExactMatrix(self.data.dot(other.data), self.field)

    def scale(self, c) -> "ExactMatrix":
        c = self.field(c)
        if self.field.is_prime:
            return ExactMatrix.wrap(self.data * c % self.field.modulus, self.field)
        return ExactMatrix(self.data * c, self.field)

    def submatrix(self, rows, cols) -> "ExactMatrix":
        rows, cols = list(rows), list(cols)
        for i in rows:
            if not 0 <= i < self.rows:
                raise IndexOutOfRange(f"row {i}")
        for j in cols:
            if not 0 <= j < self.cols:
                raise IndexOutOfRange(f"column {j}")
        return ExactMatrix.wrap(self.data[np.ix_(rows, cols)].copy(), self.field)

    def vstack(self, *others: "ExactMatrix") -> "ExactMatrix":
        for o in others:
            _same_field(self, o)
        return ExactMatrix.wrap(np.vstack([self.data] + [o.data for o in others]), self.field)


def _same_field(a: ExactMatrix, b: ExactMatrix):
    if a.field.kind != b.field.kind or a.field.modulus != b.field.modulus:
        raise LinalgError(f"field mismatch: {a.field} vs {b.field}")


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # chunk the inner dimension so partial sums stay inside int64
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    step = 2
    for s in range(0, a.shape[1], step):
        out = (out + a[:, s:s + step] @ b[s:s + step, :]) % p
    return out


# ---------------------------------------------------------------------------
# prime field kernels


def inv_mod_array(a: np.ndarray, p: int) -> np.ndarray:
    """Elementwise inverse mod p by Fermat exponentiation (zeros map to 0)."""
    result = np.ones_like(a)
    base = a % p
    e = p - 2
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def rref_mod(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p and the pivot columns."""
    a = np.array(a, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.flatnonzero(col)
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r]) % p) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank_mod(a: np.ndarray, p: int) -> int:
    a = np.array(a, dtype=np.int64) % p
    rows, cols = a.shape
    # eliminate along the shorter side
    if cols < rows:
        a = a.T.copy()
        rows, cols = cols, rows
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = a[r:, c] != 0
        piv = int(col.argmax())
        if not col[piv]:
            continue
        piv += r
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        if r + 1 < rows:
            f = a[r + 1:, c] * pow(int(a[r, c]), -1, p) % p
            # f * a[r] < 2**62, so one reduction suffices
            a[r + 1:, c:] = (a[r + 1:, c:] - f[:, None] * a[r, c:]) % p
        r += 1
    return r


def det_mod(a: np.ndarray, p: int) -> int:
    a = np.array(a, dtype=np.int64) % p
    n = a.shape[0]
    d = 1
    for c in range(n):
        nz = np.flatnonzero(a[c:, c])
        if nz.size == 0:
            return 0
        piv = c + nz[0]
        if piv != c:
            a[[c, piv]] = a[[piv, c]]
            d = -d
        pv = int(a[c, c])
        d = d * pv % p
        if c + 1 < n:
            f = a[c + 1:, c] * pow(pv, -1, p) % p
            a[c + 1:, c:] = (a[c + 1:, c:] - np.outer(f, a[c, c:]) % p) % p
    return d % p


def det_batch_mod(a: np.ndarray, p: int) -> np.ndarray:
    """Determinants of a stack of square matrices, shape (B, m, m), mod p."""
    a = np.array(a, dtype=np.int64) % p
    B, m, _ = a.shape
    det = np.ones(B, dtype=np.int64)
    if m == 0:
        return det
    live = np.arange(B)
    for c in range(m):
        sub = a[:, c:, c]
        nonzero = sub != 0
        has = nonzero.any(axis=1)
        det[~has] = 0
        piv = c + np.argmax(nonzero, axis=1)
        swap = has & (piv != c)
        if swap.any():
            idx = live[swap]
            rows_c = a[idx, c, :].copy()
            a[idx, c, :] = a[idx, piv[swap], :]
            a[idx, piv[swap], :] = rows_c
            det[idx] = -det[idx] % p
        pv = a[:, c, c]
        det = det * pv % p
        if c + 1 < m:
            f = a[:, c + 1:, c] * inv_mod_array(pv, p)[:, None] % p
            a[:, c + 1:, c:] = (a[:, c + 1:, c:] - f[:, :, None] * a[:, c:c + 1, c:] % p) % p
    return det


# ---------------------------------------------------------------------------
# rational kernels


def _integer_rows(a: np.ndarray) -> tuple[list[list[int]], Fraction]:
    """Clear denominators row by row; returns rows and the det scale factor."""
    rows = []
    scale = Fraction(1)
    for row in a:
        den = lcm(*(Fraction(x).denominator for x in row)) if len(row) else 1
        rows.append([int(Fraction(x) * den) for x in row])
        scale /= den
    return rows, scale


def bareiss_det(rows: list[list[int]]) -> int:
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for c in range(n - 1):
        if m[c][c] == 0:
            for r in range(c + 1, n):
                if m[r][c] != 0:
                    m[c], m[r] = m[r], m[c]
                    sign = -sign
                    break
            else:
                return 0
        pc = m[c][c]
        for r in range(c + 1, n):
            mr = m[r]
            mrc = mr[c]
            mc = m[c]
            for j in range(c + 1, n):
                mr[j] = (mr[j] * pc - mrc * mc[j]) // prev
            mr[c] = 0
        prev = pc
    return sign * m[n - 1][n - 1]


def bareiss_rank(rows: list[list[int]]) -> int:
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pc = m[r][c]
        mc = m[r]
        for i in range(r + 1, nrows):
            mi = m[i]
            mic = mi[c]
            for j in range(c + 1, ncols):
                mi[j] = (mi[j] * pc - mic * mc[j]) // prev
            mi[c] = 0
        prev = pc
        r += 1
    return r


def rref_rational(a: np.ndarray) -> tuple[list[list[Fraction]], list[int]]:
    m = [[Fraction(x) for x in row] for row in a]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


# ---------------------------------------------------------------------------
# public operations


def det(M: ExactMatrix):
    if M.rows != M.cols:
        raise NotSquare(f"shape {M.shape}")
    if M.field.is_prime:
        return det_mod(M.data, M.field.modulus)
    rows, scale = _integer_rows(M.data)
    return M.field(bareiss_det(rows) * scale)


def rank(M: ExactMatrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    if M.field.is_prime:
        return rank_mod(M.data, M.field.modulus)
    rows, _ = _integer_rows(M.data if M.rows <= M.cols else M.data.T)
    return bareiss_rank(rows)


def rref(M: ExactMatrix) -> tuple[ExactMatrix, list[int]]:
    if M.field.is_prime:
        a, piv = rref_mod(M.data, M.field.modulus)
        return ExactMatrix.wrap(a, M.field), piv
    a, piv = rref_rational(M.data)
    return ExactMatrix(a, M.field) if a else ExactMatrix.zeros(0, M.cols, M.field), piv


def kernel(M: ExactMatrix) -> list[list]:
    """Basis of the right null space, one list per basis vector."""
    R, pivots = rref(M)
    free = [c for c in range(M.cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [0] * M.cols
        v[f] = 1
        for r, pc in enumerate(pivots):
            v[pc] = M.field.neg(R[r, f])
        basis.append([M.field(x) for x in v])
    return basis


def minor_det(M: ExactMatrix, rows: MultiIndex, cols: MultiIndex):
    if len(rows) != len(cols):
        raise SizeMismatch(f"{len(rows)} rows vs {len(cols)} columns")
    return det(M.submatrix(rows, cols))


def compound(M: ExactMatrix, k: int) -> ExactMatrix:
    """k-th compound matrix: all k×k minors, rows and columns in lex order."""
    from .combinat import subsets_lex

    rs = subsets_lex(M.rows, k)
    cs = subsets_lex(M.cols, k)
    if M.field.is_prime:
        p = M.field.modulus
        blocks = np.array([[M.data[np.ix_(I, J)] for J in cs] for I in rs], dtype=np.int64)
        blocks = blocks.reshape(len(rs) * len(cs), k, k)
        d = det_batch_mod(blocks, p).reshape(len(rs), len(cs))
        return ExactMatrix.wrap(d, M.field)
    return ExactMatrix([[minor_det(M, I, J) for J in cs] for I in rs], M.field)
