"""Plücker coordinates, the Hodge star, 1-flattenings and the fiber maps.

A :class:`PlueckerVector` is a k-form on an n-dimensional space written in
the basis ``e_I`` for ``I`` in ``subsets_lex(n, k)``.  The Hodge star sends
``e_I`` to ``sign(I, I*) e_{I*}``; its output is stored as an ordinary
coordinate vector of degree n - k (the dual basis is implicit).

The overlap/fiber maps realise the birational isomorphism between the
restricted secant variety and the bundle over Gr(r, n) whose fibre at E is
sigma_s(Gr(k - r, V/E)):

* :func:`recover_overlap` finds E as the kernel of the 1-flattening of the
  Hodge dual of w;
* :func:`fiber_coordinates` rewrites w in a basis adapted to E and strips
  off the factor ``e_1 ^ ... ^ e_r``;
* :func:`embed_fiber` goes back.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .combinat import complement, complement_sign, index_map, permutation_sign, subsets_lex
from .fields import FieldSpec
from .linalg import ExactMatrix, LinalgError, bareiss_det, det_batch_mod, kernel, rank, rref


class ExteriorError(ValueError):
    pass


class TooManyRows(ExteriorError):
    pass


class UnexpectedKernelDim(ExteriorError):
    def __init__(self, observed: int, expected: int):
        super().__init__(f"1-flattening kernel has dimension {observed}, expected {expected}")
        self.observed = observed
        self.expected = expected


class NotDivisible(ExteriorError):
    pass


class RankDeficient(ExteriorError):
    pass


@dataclass(frozen=True, eq=False)
class PlueckerVector:
    n: int
    k: int
    coords: np.ndarray
    field: FieldSpec

    def __post_init__(self):
        if len(self.coords) != comb(self.n, self.k):
            raise ExteriorError(f"need C({self.n},{self.k}) coordinates, got {len(self.coords)}")

    @classmethod
    def from_list(cls, n: int, k: int, values, field: FieldSpec) -> "PlueckerVector":
        return cls(n, k, _canonical(values, field), field)

    @classmethod
    def basis(cls, n: int, I, field: FieldSpec, coeff=1) -> "PlueckerVector":
        """The monomial ``coeff * e_I``."""
        I = tuple(sorted(I))
        v = zeros(n, len(I), field)
        v[index_map(n, len(I))[I]] = field(coeff)
        return cls(n, len(I), v, field)

    def __getitem__(self, I):
        return self.coords[index_map(self.n, self.k)[tuple(I)]]

    def tolist(self) -> list:
        return [int(x) for x in self.coords] if self.field.is_prime else list(self.coords)

    def terms(self) -> dict[tuple[int, ...], object]:
        """Nonzero coordinates keyed by multi-index."""
        return {I: c for I, c in zip(subsets_lex(self.n, self.k), self.tolist()) if c != 0}

    def is_zero(self) -> bool:
        return not np.any(self.coords != 0)

    def __add__(self, other: "PlueckerVector") -> "PlueckerVector":
        _compatible(self, other)
        return PlueckerVector(self.n, self.k, _reduce(self.coords + other.coords, self.field), self.field)

    def __sub__(self, other: "PlueckerVector") -> "PlueckerVector":
        _compatible(self, other)
        return PlueckerVector(self.n, self.k, _reduce(self.coords - other.coords, self.field), self.field)

    def scale(self, c) -> "PlueckerVector":
        return PlueckerVector(self.n, self.k, _reduce(self.coords * self.field(c), self.field), self.field)

    def __eq__(self, other):
        if not isinstance(other, PlueckerVector):
            return NotImplemented
        return (self.n, self.k, self.field) == (other.n, other.k, other.field) and bool(
            np.all(self.coords == other.coords))

    def __repr__(self):
        return f"PlueckerVector(n={self.n}, k={self.k}, {self.terms()!r})"


def zeros(n: int, k: int, field: FieldSpec) -> np.ndarray:
    return np.zeros(comb(n, k), dtype=np.int64 if field.is_prime else object)


def _canonical(values, field: FieldSpec) -> np.ndarray:
    out = np.array([field(x) for x in values], dtype=object)
    return out.astype(np.int64) if field.is_prime else out


def _reduce(arr: np.ndarray, field: FieldSpec) -> np.ndarray:
    if field.is_prime:
        return arr % field.modulus
    return np.array([field(x) for x in arr], dtype=object)


def _compatible(u: PlueckerVector, v: PlueckerVector):
    if (u.n, u.k) != (v.n, v.k) or u.field != v.field:
        raise ExteriorError("forms live in different spaces")


def proportionality(u: PlueckerVector, v: PlueckerVector):
    """Scalar c with ``u = c * v``, or None if u is not a multiple of v."""
    _compatible(u, v)
    f = u.field
    nz = np.flatnonzero(v.coords != 0)
    if nz.size == 0:
        return 1 if u.is_zero() else None
    a = nz[0]
    c = f.div(u.coords[a], v.coords[a])
    return c if u == v.scale(c) else None


# ---------------------------------------------------------------------------
# Plücker embedding


def maximal_minors(data: np.ndarray, field: FieldSpec) -> np.ndarray:
    """All maximal minors of a k×n array, columns in lex order."""
    k, n = data.shape
    cols = subsets_lex(n, k)
    if field.is_prime:
        if k == 0:
            return np.ones(1, dtype=np.int64)
        idx = np.array(cols, dtype=np.intp)
        blocks = np.transpose(data[:, idx], (1, 0, 2))
        return det_batch_mod(blocks, field.modulus)
    if all(isinstance(x, int) for x in data.flat):
        rows = [list(r) for r in data]
        return np.array([bareiss_det([[r[j] for j in J] for r in rows]) for J in cols], dtype=object)
    from .linalg import det

    M = ExactMatrix.wrap(data, field)
    return np.array([det(M.submatrix(range(k), J)) for J in cols], dtype=object)


def pluecker(M: ExactMatrix) -> PlueckerVector:
    k, n = M.shape
    if k > n:
        raise TooManyRows(f"{k} rows in a {n}-dimensional space")
    return PlueckerVector(n, k, maximal_minors(M.data, M.field), M.field)


def pluecker_relations(v: PlueckerVector) -> list:
    """Values of all quadratic Plücker relations at v (all zero iff decomposable)."""
    n, k, f = v.n, v.k, v.field
    if k <= 1 or k >= n - 1:
        return []
    idx = index_map(n, k)

    def p(seq):
        if len(set(seq)) < len(seq):
            return 0
        s = tuple(sorted(seq))
        c = v.coords[idx[s]]
        return c if permutation_sign(seq) > 0 else f.neg(c)

    out = []
    for I in subsets_lex(n, k - 1):
        for J in subsets_lex(n, k + 1):
            acc = 0
            for l, j in enumerate(J):
                term = f.mul(p(I + (j,)), p(J[:l] + J[l + 1:]))
                acc = f.add(acc, term) if l % 2 == 0 else f.sub(acc, term)
            out.append(acc)
    return out


def is_decomposable(v: PlueckerVector) -> bool:
    return all(x == 0 for x in pluecker_relations(v))


def wedge(u: PlueckerVector, v: PlueckerVector) -> PlueckerVector:
    if u.n != v.n or u.field != v.field:
        raise ExteriorError("forms live in different spaces")
    f = u.field
    n, k = u.n, u.k + v.k
    if k > n:
        raise ExteriorError(f"degree {k} exceeds dimension {n}")
    out = [0] * comb(n, k)
    idx = index_map(n, k)
    for I, a in u.terms().items():
        for J, b in v.terms().items():
            if set(I) & set(J):
                continue
            s = permutation_sign(I + J)
            t = f.mul(a, b)
            pos = idx[tuple(sorted(I + J))]
            out[pos] = f.add(out[pos], t if s > 0 else f.neg(t))
    return PlueckerVector.from_list(n, k, out, f)


def extend(v: PlueckerVector, n: int, offset: int = 0) -> PlueckerVector:
    """Push v into a bigger space along coordinates offset..offset+v.n-1."""
    out = zeros(n, v.k, v.field)
    idx = index_map(n, v.k)
    for a, I in enumerate(subsets_lex(v.n, v.k)):
        out[idx[tuple(x + offset for x in I)]] = v.coords[a]
    return PlueckerVector(n, v.k, out, v.field)


# ---------------------------------------------------------------------------
# Hodge star and flattenings


@lru_cache(maxsize=None)
def _hodge_tables(n: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    target = index_map(n, n - k)
    dest = np.array([target[complement(I, n)] for I in subsets_lex(n, k)], dtype=np.intp)
    sign = np.array([complement_sign(I, n) for I in subsets_lex(n, k)], dtype=np.int64)
    return dest, sign


def hodge(v: PlueckerVector) -> PlueckerVector:
    dest, sign = _hodge_tables(v.n, v.k)
    out = zeros(v.n, v.n - v.k, v.field)
    out[dest] = v.coords * sign
    return PlueckerVector(v.n, v.n - v.k, _reduce(out, v.field), v.field)


@lru_cache(maxsize=None)
def _flatten_tables(n: int, m: int):
    """(row v, column J, source index, sign) for every nonzero slot."""
    src = index_map(n, m)
    rows, cols, idx, sign = [], [], [], []
    for b, J in enumerate(subsets_lex(n, m - 1)):
        for v in range(n):
            if v in J:
                continue
            full = tuple(sorted(J + (v,)))
            rows.append(v)
            cols.append(b)
            idx.append(src[full])
            sign.append(-1 if full.index(v) % 2 else 1)
    as_arr = lambda x, t=np.intp: np.array(x, dtype=t)
    return as_arr(rows), as_arr(cols), as_arr(idx), as_arr(sign, np.int64)


def flatten1(T: PlueckerVector) -> ExactMatrix:
    """Matrix of v -> contraction of T by v; row v holds the contraction by e_v."""
    n, m = T.n, T.k
    if m < 1:
        raise ExteriorError("need a form of degree at least 1")
    rows, cols, idx, sign = _flatten_tables(n, m)
    dtype = np.int64 if T.field.is_prime else object
    F = np.zeros((n, comb(n, m - 1)), dtype=dtype)
    F[rows, cols] = T.coords[idx] * sign
    if T.field.is_prime:
        F %= T.field.modulus
    return ExactMatrix.wrap(F, T.field)


def flattening_kernel(T: PlueckerVector) -> ExactMatrix:
    """Vectors of V whose contraction with T vanishes, as rows."""
    if T.k == 0:
        # contracting a scalar gives nothing: every vector is in the kernel
        return ExactMatrix.identity(T.n, T.field)
    basis = kernel(flatten1(T).T)
    return _rows(basis, T.n, T.field)


def _rows(vectors, n: int, field: FieldSpec) -> ExactMatrix:
    if not vectors:
        return ExactMatrix.zeros(0, n, field)
    return ExactMatrix(vectors, field)


def recover_overlap(w: PlueckerVector, r: int) -> ExactMatrix:
    """r×n basis of the common subspace E of a general point w of sigma_s^r."""
    E = flattening_kernel(hodge(w))
    if E.rows != r:
        raise UnexpectedKernelDim(E.rows, r)
    return E


# ---------------------------------------------------------------------------
# fiber maps


def adapted_basis(E: ExactMatrix) -> ExactMatrix:
    """E's rows followed by the standard vectors that first keep full rank."""
    n = E.cols
    if rank(E) < E.rows:
        raise RankDeficient(f"rows of E are dependent (rank {rank(E)} < {E.rows})")
    B = E
    I = ExactMatrix.identity(n, E.field)
    for j in range(n):
        if B.rows == n:
            break
        trial = B.vstack(I.submatrix([j], range(n)))
        if rank(trial) == trial.rows:
            B = trial
    return B


def inverse(M: ExactMatrix) -> ExactMatrix:
    n = M.rows
    aug = ExactMatrix.wrap(np.hstack([M.data, ExactMatrix.identity(n, M.field).data]), M.field)
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise LinalgError("matrix is singular")
    return R.submatrix(range(n), range(n, 2 * n))


def _minors_table(data: np.ndarray, rowsets, colsets, field: FieldSpec) -> np.ndarray:
    """Array of det(data[I, J]) for I in rowsets, J in colsets."""
    rowsets, colsets = list(rowsets), list(colsets)
    k = len(rowsets[0]) if rowsets else 0
    if field.is_prime:
        if not rowsets or not colsets:
            return np.zeros((len(rowsets), len(colsets)), dtype=np.int64)
        ri = np.array(rowsets, dtype=np.intp).reshape(len(rowsets), k)
        ci = np.array(colsets, dtype=np.intp).reshape(len(colsets), k)
        blocks = data[ri[:, None, :, None], ci[None, :, None, :]]
        d = det_batch_mod(blocks.reshape(-1, k, k), field.modulus)
        return d.reshape(len(rowsets), len(colsets))
    from .linalg import det

    M = ExactMatrix.wrap(data, field)
    return np.array([[det(M.submatrix(I, J)) for J in colsets] for I in rowsets],
                    dtype=object).reshape(len(rowsets), len(colsets))


def _combine(weights: np.ndarray, table: np.ndarray, field: FieldSpec) -> np.ndarray:
    """weights @ table in the field."""
    if field.is_prime:
        p = field.modulus
        acc = np.zeros(table.shape[1], dtype=np.int64)
        for wgt, row in zip(weights, table):
            acc = (acc + int(wgt) * row % p) % p
        return acc
    return np.array([field(x) for x in weights.dot(table)], dtype=object) if len(weights) else (
        np.zeros(table.shape[1], dtype=object))


def fiber_coordinates(w: PlueckerVector, E: ExactMatrix) -> PlueckerVector:
    """The (k - r)-form t on V/E with w = e_1 ^ ... ^ e_r ^ t in the adapted basis."""
    n, k, r, f = w.n, w.k, E.rows, w.field
    if r > k:
        raise NotDivisible(f"overlap of dimension {r} exceeds degree {k}")
    C = inverse(adapted_basis(E)).data
    head = tuple(range(r))
    nz = np.flatnonzero(w.coords != 0)
    support = [subsets_lex(n, k)[a] for a in nz]
    coeffs = _combine(w.coords[nz], _minors_table(C, support, subsets_lex(n, k), f), f)
    for J, c in zip(subsets_lex(n, k), coeffs):
        if J[:r] != head and c != 0:
            raise NotDivisible(f"w has a term b_{J} outside the ideal of E")
    idx = index_map(n, k)
    t = [coeffs[idx[head + tuple(x + r for x in Jq)]] for Jq in subsets_lex(n - r, k - r)]
    return PlueckerVector.from_list(n - r, k - r, t, f)


def embed_fiber(E: ExactMatrix, t: PlueckerVector) -> PlueckerVector:
    """Plücker vector of e_1 ^ ... ^ e_r ^ (lift of t through the adapted basis)."""
    r, n, f = E.rows, E.cols, E.field
    if t.n != n - r:
        raise ExteriorError(f"t lives on a {t.n}-dimensional quotient, expected {n - r}")
    B = adapted_basis(E).data
    k = r + t.k
    head = tuple(range(r))
    nz = np.flatnonzero(t.coords != 0)
    lifted = [head + tuple(x + r for x in subsets_lex(t.n, t.k)[a]) for a in nz]
    out = _combine(t.coords[nz], _minors_table(B, lifted, subsets_lex(n, k), f), f)
    return PlueckerVector(n, k, out, f)
