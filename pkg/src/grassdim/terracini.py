"""Dimension of sigma_s^r(Gr(k, n)) as the rank of a Jacobian at a random point.

A point of the source is an r×n block of shared rows plus s blocks of
(k - r)×n tail rows; stack m is ``[shared; tails[m]]``.  The parametrisation
sends the point to the sum of the Plücker vectors of the stacks, and the
rank of its Jacobian at a general point is the dimension of the affine cone.

Jacobian columns are ordered shared variables first, then tail variables by
(matrix, row, column).  The derivative of the maximal minor on columns I of a
stack with respect to entry (i, j) is the signed cofactor

    (-1)**(pos_I(j) + i) * minor(rows - {i}, I - {j})

so the whole Jacobian is assembled from the (k-1)-minors of each stack with
row i deleted, computed once per (stack, row).  :class:`SymbolicJacobian`
is the slow route: expand every coordinate polynomial, differentiate, then
substitute.
"""

from __future__ import annotations

import logging
import time
from dataclasses import asdict, dataclass, field as dc_field
from functools import lru_cache
from math import comb

import numpy as np
import sympy

from . import formulas
from .combinat import index_map, subsets_lex
from .exterior import PlueckerVector, maximal_minors
from .fields import FieldSpec, default_oracle_fields
from .linalg import ExactMatrix, bareiss_rank, det_batch_mod, rank, rank_mod

log = logging.getLogger(__name__)

MAX_RETRIES = 32
SYMBOLIC_MAX_ROWS = 40
SYMBOLIC_MAX_VARS = 40


class TerraciniError(ValueError):
    pass


class InvalidParams(TerraciniError):
    pass


class DegenerateAfterRetries(TerraciniError):
    pass


class TooLarge(TerraciniError):
    pass


@dataclass(frozen=True, order=True)
class SecantParams:
    n: int
    k: int
    s: int
    r: int = 0

    def __post_init__(self):
        if not (0 <= self.r <= self.k <= self.n) or self.s < 1:
            raise InvalidParams(
                f"need 0 <= r <= k <= n and s >= 1, got n={self.n} k={self.k} s={self.s} r={self.r}")

    @property
    def num_rows(self) -> int:
        return comb(self.n, self.k)

    @property
    def num_vars(self) -> int:
        return self.r * self.n + self.s * (self.k - self.r) * self.n

    @property
    def cone_bound(self) -> int:
        return min(self.num_rows, self.num_vars)

    def __str__(self):
        return f"sigma_{self.s}^{self.r}(Gr({self.k},{self.n}))"


@dataclass(frozen=True, eq=False)
class SamplePoint:
    params: SecantParams
    field: FieldSpec
    shared: np.ndarray
    tails: tuple[np.ndarray, ...]

    def stacks(self) -> list[np.ndarray]:
        return [np.vstack([self.shared, t]) for t in self.tails]

    def variables(self) -> np.ndarray:
        """Values of all source variables in Jacobian column order."""
        parts = [self.shared.reshape(-1)] + [t.reshape(-1) for t in self.tails]
        return np.concatenate(parts)


def _rank(data: np.ndarray, field: FieldSpec) -> int:
    if data.shape[0] == 0 or data.shape[1] == 0:
        return 0
    if field.is_prime:
        return rank_mod(data, field.modulus)
    return bareiss_rank([[int(x) for x in row] for row in data])


def sample_point(params: SecantParams, field: FieldSpec, rng: np.random.Generator) -> SamplePoint:
    """Random source point whose stacks are full rank and jointly in general position."""
    n, k, s, r = params.n, params.k, params.s, params.r
    joint = min(n, r + s * (k - r))
    for _ in range(MAX_RETRIES):
        shared = field.random_array(rng, (r, n))
        tails = tuple(field.random_array(rng, (k - r, n)) for _ in range(s))
        pt = SamplePoint(params, field, shared, tails)
        if all(_rank(st, field) == k for st in pt.stacks()) and \
                _rank(np.vstack([shared, *tails]), field) == joint:
            return pt
    raise DegenerateAfterRetries(f"no general point of {params} over {field} in {MAX_RETRIES} draws")


def pluecker_sum(pt: SamplePoint) -> PlueckerVector:
    f = pt.field
    total = None
    for st in pt.stacks():
        v = maximal_minors(st, f)
        total = v if total is None else total + v
    if f.is_prime:
        total %= f.modulus
    return PlueckerVector(pt.params.n, pt.params.k, total, f)


# ---------------------------------------------------------------------------
# cofactor Jacobian


@lru_cache(maxsize=None)
def _cofactor_layout(n: int, k: int):
    """For every (I, j in I): row of I, column j, index of I - {j}, position of j."""
    sub = index_map(n, k - 1)
    rows, cols, src, pos = [], [], [], []
    for a, I in enumerate(subsets_lex(n, k)):
        for q, j in enumerate(I):
            rows.append(a)
            cols.append(j)
            src.append(sub[I[:q] + I[q + 1:]])
            pos.append(q)
    arr = lambda x: np.array(x, dtype=np.intp)
    return arr(rows), arr(cols), arr(src), np.where(np.array(pos) % 2 == 0, 1, -1)


def cofactor_minors(stacks: np.ndarray, field: FieldSpec) -> np.ndarray:
    """Minors with one row deleted, for every stack at once.

    ``stacks`` has shape (s, k, n); the result has shape (s, k, C(n, k-1)) and
    entry [m, i, b] is the minor of stack m without row i on the b-th
    (k-1)-subset of columns.
    """
    s, k, n = stacks.shape
    keep = np.array([[x for x in range(k) if x != i] for i in range(k)], dtype=np.intp)
    reduced = stacks[:, keep, :]  # (s, k, k-1, n)
    if k == 1:
        dtype = np.int64 if field.is_prime else object
        return np.ones((s, 1, 1), dtype=dtype)
    cols = np.array(subsets_lex(n, k - 1), dtype=np.intp)  # (B, k-1)
    blocks = reduced[:, :, :, cols]  # (s, k, k-1, B, k-1)
    blocks = np.moveaxis(blocks, 3, 2)  # (s, k, B, k-1, k-1)
    if field.is_prime:
        d = det_batch_mod(blocks.reshape(-1, k - 1, k - 1), field.modulus)
        return d.reshape(s, k, len(cols))
    out = np.empty((s, k, len(cols)), dtype=object)
    for m in range(s):
        for i in range(k):
            out[m, i] = maximal_minors(reduced[m, i], field)
    return out


def stack_jacobian(stack: np.ndarray, field: FieldSpec) -> list[np.ndarray]:
    """Per stack row i, the C(n,k)×n block of derivatives by entries of row i."""
    k, n = stack.shape
    rows, cols, src, psign = _cofactor_layout(n, k)
    minors = cofactor_minors(stack[None], field)[0]
    blocks = []
    dtype = np.int64 if field.is_prime else object
    for i in range(k):
        block = np.zeros((comb(n, k), n), dtype=dtype)
        sign = psign if i % 2 == 0 else -psign
        block[rows, cols] = minors[i][src] * sign
        if field.is_prime:
            block %= field.modulus
        blocks.append(block)
    return blocks


@lru_cache(maxsize=None)
def _variable_layout(n: int, k: int, s: int, r: int):
    """Jacobian column of entry (stack m, row i, column j), shape (s, k, n)."""
    col = np.empty((s, k, n), dtype=np.intp)
    for m in range(s):
        for i in range(k):
            for j in range(n):
                if i < r:
                    col[m, i, j] = i * n + j
                else:
                    col[m, i, j] = r * n + m * (k - r) * n + (i - r) * n + j
    return col


def jacobian(pt: SamplePoint) -> ExactMatrix:
    """C(n,k) × (rn + s(k-r)n) Jacobian of the restricted parametrisation at pt."""
    p = pt.params
    f = pt.field
    n, k, s, r = p.n, p.k, p.s, p.r
    rows, cols, src, psign = _cofactor_layout(n, k)
    minors = cofactor_minors(np.stack(pt.stacks()), f)  # (s, k, C(n, k-1))
    varcol = _variable_layout(n, k, s, r)
    rowsign = np.where(np.arange(k) % 2 == 0, 1, -1)
    # entries for every (stack, row i, slot), slots = pairs (I, j in I)
    vals = minors[:, :, src] * (rowsign[:, None] * psign[None, :])[None]
    target_cols = varcol[:, :, cols]  # (s, k, slots)
    target_rows = np.broadcast_to(rows, target_cols.shape)
    dtype = np.int64 if f.is_prime else object
    J = np.zeros((p.num_rows, p.num_vars), dtype=dtype)
    # shared columns receive one contribution per stack: accumulate
    np.add.at(J, (target_rows.reshape(-1), target_cols.reshape(-1)), vals.reshape(-1))
    if f.is_prime:
        J %= f.modulus
    return ExactMatrix.wrap(J, f)


# ---------------------------------------------------------------------------
# naive symbolic route

def variable_names(params: SecantParams) -> list[str]:
    """a_(i,j) for the first matrix (shared rows first), b_, c_, ... for later tails."""
    n, k, s, r = params.n, params.k, params.s, params.r
    names = [f"a_({i},{j})" for i in range(r) for j in range(n)]
    for m in range(s):
        letter = "abcdefghijklmnopqrstuvwxyz"[m]
        offset = r if m == 0 else 0
        names += [f"{letter}_({i + offset},{j})" for i in range(k - r) for j in range(n)]
    return names


def _stack_variables(params: SecantParams) -> list[list[list[int]]]:
    n, k, s, r = params.n, params.k, params.s, params.r
    shared = [[i * n + j for j in range(n)] for i in range(r)]
    out = []
    for m in range(s):
        base = r * n + m * (k - r) * n
        tail = [[base + i * n + j for j in range(n)] for i in range(k - r)]
        out.append(shared + tail)
    return out


class SymbolicJacobian:
    """Jacobian with expanded polynomial entries, built with sympy.

    Coordinates are expanded sums of symbolic minors; every entry is the
    expanded partial derivative.  Evaluation substitutes integer values, so
    results are exact.
    """

    def __init__(self, params: SecantParams):
        if params.num_rows > SYMBOLIC_MAX_ROWS or params.num_vars > SYMBOLIC_MAX_VARS:
            raise TooLarge(
                f"{params}: {params.num_rows} coordinates, {params.num_vars} variables "
                f"(limits {SYMBOLIC_MAX_ROWS}, {SYMBOLIC_MAX_VARS})")
        self.params = params
        self.names = variable_names(params)
        self.symbols = [sympy.Symbol(x) for x in self.names]
        mats = [sympy.Matrix([[self.symbols[v] for v in row] for row in st])
                for st in _stack_variables(params)]
        self.coordinates = [
            sympy.expand(sum((m[:, list(I)].det() for m in mats), sympy.Integer(0)))
            for I in subsets_lex(params.n, params.k)]
        self.entries = [[sympy.expand(sympy.diff(c, x)) for x in self.symbols]
                        for c in self.coordinates]
        self._fn = None

    @property
    def num_terms(self) -> int:
        return sum(len(sympy.Add.make_args(e)) for row in self.entries for e in row if e != 0)

    def entry(self, row: int, col: int) -> sympy.Expr:
        return self.entries[row][col]

    def evaluate_at(self, pt: SamplePoint) -> ExactMatrix:
        if pt.params != self.params:
            raise TerraciniError(f"point of {pt.params} for a Jacobian of {self.params}")
        if self._fn is None:
            # integer coefficients only, so the generated code stays in exact ints
            self._fn = sympy.lambdify(self.symbols, self.entries, modules=[{}])
        x = [int(v) for v in pt.variables()]
        return ExactMatrix(self._fn(*x), pt.field)


def symbolic_jacobian(params: SecantParams) -> SymbolicJacobian:
    return SymbolicJacobian(params)


# ---------------------------------------------------------------------------
# oracle


@dataclass
class DimensionReport:
    params: SecantParams
    cone_dim: int
    proj_dim: int
    trials: int
    ranks: list[int]
    primes_used: list[int | None]
    agreed: bool
    virtual_dim: int
    expected_dim: int
    fiber_dim: int
    dimfam_value: int | None
    assumes_bddg: bool
    defect: int
    matches_fiber: bool

    @property
    def predicted(self) -> tuple[int, int, int]:
        return self.virtual_dim, self.expected_dim, self.fiber_dim

    def to_dict(self) -> dict:
        d = asdict(self)
        d["params"] = asdict(self.params)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "DimensionReport":
        d = dict(d)
        d["params"] = SecantParams(**d["params"])
        return cls(**d)


def jacobian_rank(params: SecantParams, field: FieldSpec, rng: np.random.Generator) -> int:
    return rank(jacobian(sample_point(params, field, rng)))


def dimension(params: SecantParams, fields: FieldSpec | list[FieldSpec] | None = None,
              trials: int = 2, seed: int = 0) -> DimensionReport:
    """Cone dimension = max Jacobian rank over ``trials`` points per field.

    With no field given, two random 31-bit primes derived from ``seed`` are used.
    """
    if trials < 1:
        raise TerraciniError("need at least one trial")
    if fields is None:
        fields = default_oracle_fields(seed)
    elif isinstance(fields, FieldSpec):
        fields = [fields]
    ranks, primes = [], []
    for fi, f in enumerate(fields):
        for t in range(trials):
            ranks.append(jacobian_rank(params, f, f.rng(fi * 1000 + t)))
            primes.append(f.modulus)
    cone = max(ranks)
    if len(set(ranks)) > 1:
        log.warning("%s: ranks disagree across trials: %s", params, ranks)
    proj = cone - 1
    pred = formulas.predict(params.n, params.k, params.s, params.r)
    return DimensionReport(
        params=params,
        cone_dim=cone,
        proj_dim=proj,
        trials=len(ranks),
        ranks=ranks,
        primes_used=sorted(set(primes), key=primes.index),
        agreed=len(set(ranks)) == 1,
        virtual_dim=pred.virtual_dim,
        expected_dim=pred.expected_dim,
        fiber_dim=pred.fiber_dim,
        dimfam_value=pred.dimfam_value,
        assumes_bddg=pred.assumes_bddg,
        defect=pred.expected_dim - proj,
        matches_fiber=proj == pred.fiber_dim,
    )


# ---------------------------------------------------------------------------
# benchmark


@dataclass
class BenchRecord:
    params: SecantParams
    field: str
    cofactor_time: float
    cofactor_rank: int
    naive_time: float | None = None
    naive_rank: int | None = None
    naive_skipped: str | None = None
    speedup: float | None = dc_field(default=None)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["params"] = asdict(self.params)
        return d


def benchmark(params: SecantParams, field: FieldSpec, seed: int = 0) -> BenchRecord:
    """Time rank computation at one point by the cofactor and the symbolic routes."""
    rng = np.random.default_rng(seed)
    pt = sample_point(params, field, rng)

    t0 = time.perf_counter()
    cof_rank = rank(jacobian(pt))
    cof_time = time.perf_counter() - t0
    rec = BenchRecord(params, str(field), cof_time, cof_rank)

    try:
        t0 = time.perf_counter()
        naive_rank = rank(symbolic_jacobian(params).evaluate_at(pt))
        rec.naive_time = time.perf_counter() - t0
        rec.naive_rank = naive_rank
        rec.speedup = rec.naive_time / cof_time if cof_time > 0 else float("inf")
    except TooLarge as exc:
        rec.naive_skipped = f"skipped: too large ({exc})"
    return rec
