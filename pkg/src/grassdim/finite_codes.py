"""Grassmann codes over F_q and the SL_6(F_2) orbits on trivectors.

Points of Gr(k, F_q^n) are enumerated through their reduced row echelon
forms.  The generator matrix of the Grassmann code has the normalized
Plücker vectors of all points as columns.

Trivectors in Λ³F₂⁶ are stored as 20-bit masks, bit i standing for
``subsets_lex(6, 3)[i]``.  Orbits are computed by breadth-first closure
under the 30 elementary transvections I + E_ab.  Each transvection acts on
masks through two 1024-entry lookup tables (low and high 10 bits), so one
BFS step over a whole frontier is a handful of numpy gathers.
"""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import comb, prod

import numpy as np
import sympy

from .combinat import InvalidParams, subsets_lex
from .fields import prime_field
from .linalg import ExactMatrix, compound, det_batch_mod, rank_mod


class TooLarge(ValueError):
    pass


class ParamMismatch(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


ENUMERATION_LIMIT = 10**6

# sizes and names of the orbits on Λ³F₂⁶ \ 0
ORBIT_LABELS = {
    1395: "Gr",
    54684: "sigma_2^1",
    468720: "tau",
    357120: "sigma_2",
    166656: "Xi",
}

# normal forms, as seed-form strings
XI_FORM = "124+034+025+035+135"
SEED_FORMS = {
    "Gr": "012",
    "sigma_2^1": "012+034",
    "sigma_2": "012+345",
    "Xi": XI_FORM,
}

# cited from the literature, not computed here
GRASSMANN_DISCRIMINANT_AT_XI = 15


# ---------------------------------------------------------------------------
# counting and enumeration


def count_points(n: int, k: int, q: int) -> int:
    """Number of k-planes in F_q^n (Gaussian binomial)."""
    if q < 2 or not 0 <= k <= n:
        raise InvalidParams(f"need q >= 2 and 0 <= k <= n, got n={n} k={k} q={q}")
    num = prod(q ** (n - i) - 1 for i in range(k))
    den = prod(q ** (i + 1) - 1 for i in range(k))
    return num // den


@dataclass(frozen=True)
class FqGrassmannPoint:
    n: int
    k: int
    q: int
    rref: tuple[tuple[int, ...], ...]
    pluecker: tuple[int, ...]

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.rref, dtype=np.int64).reshape(self.k, self.n)


def _check_enumerable(n: int, k: int, q: int) -> int:
    if not sympy.isprime(q):
        raise InvalidParams(f"enumeration needs a prime q, got {q}")
    P = count_points(n, k, q)
    if P > ENUMERATION_LIMIT:
        raise TooLarge(f"Gr({k},{n}) over F_{q} has {P} points (limit {ENUMERATION_LIMIT})")
    return P


def _rref_stack(n: int, k: int, q: int) -> np.ndarray:
    """All k×n RREF matrices over F_q, shape (P, k, n), in lex order of entries."""
    blocks = []
    for pivots in subsets_lex(n, k):
        free = [(i, j) for i in range(k) for j in range(pivots[i] + 1, n) if j not in pivots]
        combos = list(itertools.product(range(q), repeat=len(free)))
        vals = np.array(combos, dtype=np.int64).reshape(len(combos), len(free))
        block = np.zeros((len(vals), k, n), dtype=np.int64)
        block[:, range(k), list(pivots)] = 1
        for c, (i, j) in enumerate(free):
            block[:, i, j] = vals[:, c]
        blocks.append(block)
    stack = np.concatenate(blocks) if blocks else np.zeros((0, k, n), dtype=np.int64)
    if k == 0:
        return stack
    flat = stack.reshape(len(stack), -1)
    return stack[np.lexsort(flat.T[::-1])]


def _pluecker_stack(stack: np.ndarray, q: int) -> np.ndarray:
    P, k, n = stack.shape
    if k == 0:
        return np.ones((P, 1), dtype=np.int64)
    out = np.empty((P, comb(n, k)), dtype=np.int64)
    for a, I in enumerate(subsets_lex(n, k)):
        out[:, a] = det_batch_mod(stack[:, :, list(I)], q)
    # first nonzero coordinate to 1
    first = out[np.arange(P), (out != 0).argmax(axis=1)]
    inv = np.array([pow(int(x), -1, q) for x in first], dtype=np.int64)
    return out * inv[:, None] % q


def enumerate_points(n: int, k: int, q: int) -> list[FqGrassmannPoint]:
    _check_enumerable(n, k, q)
    stack = _rref_stack(n, k, q)
    pl = _pluecker_stack(stack, q)
    return [FqGrassmannPoint(n, k, q, tuple(map(tuple, m.tolist())), tuple(v))
            for m, v in zip(stack, pl.tolist())]


def generator_matrix(n: int, k: int, q: int) -> ExactMatrix:
    """C(n,k) × P matrix whose columns are the normalized Plücker vectors."""
    _check_enumerable(n, k, q)
    pl = _pluecker_stack(_rref_stack(n, k, q), q)
    return ExactMatrix.wrap(pl.T.copy(), prime_field(q))


def grassmann_distance(A: FqGrassmannPoint, B: FqGrassmannPoint) -> int:
    """k - dim(A ∩ B)."""
    if (A.n, A.k, A.q) != (B.n, B.k, B.q):
        raise ParamMismatch(f"points of Gr({A.k},{A.n})/F_{A.q} and Gr({B.k},{B.n})/F_{B.q}")
    rk = rank_mod(np.vstack([A.matrix, B.matrix]), A.q)
    return rk - A.k


@dataclass(frozen=True)
class CodewordStats:
    hamming: int
    weight: int


def hamming(u, v) -> int:
    u, v = np.asarray(u), np.asarray(v)
    if u.shape != v.shape:
        raise LengthMismatch(f"lengths {u.shape} and {v.shape}")
    return int(np.count_nonzero(u != v))


def weight(u) -> int:
    return int(np.count_nonzero(np.asarray(u)))


def codeword_ops(u, v) -> CodewordStats:
    """d(u, v) and w(u)."""
    return CodewordStats(hamming(u, v), weight(u))


# ---------------------------------------------------------------------------
# trivectors over F_2

N6, K3 = 6, 3
NBITS = comb(N6, K3)
FULL = 1 << NBITS
F2 = prime_field(2)


def mask_of(terms) -> int:
    """Mask of a sum of basis trivectors, each given as three indices."""
    pos = {I: i for i, I in enumerate(subsets_lex(N6, K3))}
    m = 0
    for t in terms:
        I = tuple(sorted(t))
        if len(set(I)) != K3 or I not in pos:
            raise InvalidParams(f"bad basis trivector {t!r}")
        m ^= 1 << pos[I]
    return m


def parse_seed_form(expr: str) -> int:
    """``"012+034"`` -> mask.  Repeated terms cancel, as they should over F_2."""
    terms = [t.strip() for t in expr.split("+")]
    if not expr.strip() or any(len(t) != K3 or not t.isdigit() for t in terms):
        raise InvalidParams(f"seed form must be '+'-separated digit triples, got {expr!r}")
    m = mask_of([tuple(int(c) for c in t) for t in terms])
    if m == 0:
        raise InvalidParams(f"seed form {expr!r} is zero")
    return m


def format_seed_form(mask: int) -> str:
    S = subsets_lex(N6, K3)
    return "+".join("".join(map(str, S[i])) for i in range(NBITS) if mask >> i & 1)


def induced_action(g: np.ndarray) -> np.ndarray:
    """20×20 matrix of Λ³g over F_2 (the third compound)."""
    return compound(ExactMatrix.wrap(np.asarray(g, dtype=np.int64) % 2, F2), K3).data


def transvection(a: int, b: int) -> np.ndarray:
    g = np.eye(N6, dtype=np.int64)
    g[a, b] = 1
    return g


def _tables(action: np.ndarray) -> np.ndarray:
    """(2, 1024) lookup tables: images of the low and high 10 bits."""
    cols = (action.astype(np.int64) << np.arange(NBITS)[:, None]).sum(axis=0)
    half = NBITS // 2
    out = np.zeros((2, 1 << half), dtype=np.int64)
    for h in range(2):
        c = cols[h * half:(h + 1) * half]
        for bit in range(half):
            step = 1 << bit
            out[h, step:2 * step] = out[h, :step] ^ c[bit]
    return out


@lru_cache(maxsize=1)
def generator_tables() -> np.ndarray:
    """Lookup tables for the 30 transvections I + E_ab, shape (30, 2, 1024)."""
    gens = [transvection(a, b) for a in range(N6) for b in range(N6) if a != b]
    return np.stack([_tables(induced_action(g)) for g in gens])


def apply_tables(tab: np.ndarray, masks: np.ndarray) -> np.ndarray:
    return tab[0][masks & 1023] ^ tab[1][masks >> 10]


def apply(g: np.ndarray, masks) -> np.ndarray:
    """Act by g ∈ GL_6(F_2) on an array of masks."""
    return apply_tables(_tables(induced_action(g)), np.asarray(masks, dtype=np.int64))


def orbit_closure(seed: int, method: str = "bfs", rng: np.random.Generator | None = None,
                  patience: int = 5) -> np.ndarray:
    """Orbit of ``seed`` under SL_6(F_2), as a sorted int64 array of masks.

    ``method="bfs"`` is exact.  ``method="random"`` applies random invertible
    matrices until the set stops growing for ``patience`` rounds, which only
    probabilistically certifies closure.
    """
    if not 0 < seed < FULL:
        raise InvalidParams(f"seed must be a nonzero 20-bit mask, got {seed}")
    if method == "bfs":
        return _bfs(seed)
    if method == "random":
        return _saturate(seed, rng or np.random.default_rng(0), patience)
    raise InvalidParams(f"unknown method {method!r}")


def _bfs(seed: int) -> np.ndarray:
    tabs = generator_tables()
    seen = np.zeros(FULL, dtype=bool)
    seen[seed] = True
    frontier = np.array([seed], dtype=np.int64)
    while len(frontier):
        imgs = np.concatenate([apply_tables(t, frontier) for t in tabs])
        imgs = np.unique(imgs[~seen[imgs]])
        seen[imgs] = True
        frontier = imgs
    return np.flatnonzero(seen)


def random_invertible(rng: np.random.Generator) -> np.ndarray:
    while True:
        g = rng.integers(0, 2, size=(N6, N6), dtype=np.int64)
        if rank_mod(g, 2) == N6:
            return g


def _saturate(seed: int, rng: np.random.Generator, patience: int) -> np.ndarray:
    known = np.array([seed], dtype=np.int64)
    quiet = 0
    while quiet < patience:
        grown = np.union1d(known, apply(random_invertible(rng), known))
        quiet = quiet + 1 if len(grown) == len(known) else 0
        known = grown
    return known


def is_closed(orbit: np.ndarray) -> bool:
    members = np.zeros(FULL, dtype=bool)
    members[orbit] = True
    return all(members[apply_tables(t, orbit)].all() for t in generator_tables())


def sl6_f2_order() -> int:
    return prod(2**6 - 2**i for i in range(6))


@dataclass
class Orbit:
    seed: int
    size: int
    label: str
    members: np.ndarray | None = dc_field(default=None, repr=False, compare=False)


@dataclass
class OrbitTable:
    orbits: list[Orbit]

    @property
    def sizes(self) -> list[int]:
        return [o.size for o in self.orbits]

    @property
    def total(self) -> int:
        return sum(self.sizes)

    @property
    def is_complete(self) -> bool:
        return self.total == FULL - 1

    def by_label(self, label: str) -> Orbit:
        for o in self.orbits:
            if o.label == label:
                return o
        raise KeyError(label)

    def to_rows(self) -> list[dict]:
        return [{"label": o.label, "size": o.size, "seed": o.seed,
                 "seed_form": format_seed_form(o.seed)} for o in self.orbits]

    def write_csv(self, path):
        with open(path, "w", newline="") as f:
            w = csv.DictWriter(f, fieldnames=["label", "size", "seed", "seed_form"])
            w.writeheader()
            w.writerows(self.to_rows())


def classify_all(keep_members: bool = False) -> OrbitTable:
    """Partition the nonzero masks into orbits, smallest unclassified mask first."""
    left = np.ones(FULL, dtype=bool)
    left[0] = False
    orbits = []
    while left.any():
        seed = int(np.argmax(left))
        orb = _bfs(seed)
        left[orb] = False
        # tau has no normal form over F_2 here; it is the orbit left by size
        label = ORBIT_LABELS.get(len(orb), f"orbit_{len(orbits)}")
        orbits.append(Orbit(seed, len(orb), label, orb if keep_members else None))
    return OrbitTable(orbits)


@dataclass(frozen=True)
class FiberCount:
    nonzero_bivectors: int
    decomposable: int
    lhs: int
    rhs: int
    equal: bool


def fiber_count_check() -> FiberCount:
    """|σ₂¹°| = |F₂⁶ \\ 0| · |P∧²F₂⁵ \\ Gr(2,5)|, against the BFS orbit size.

    Over F_2 projective points are the nonzero vectors, so P∧²F₂⁵ has
    2^10 - 1 points, of which count_points(5, 2, 2) = 155 are decomposable.
    """
    nonzero = 2 ** comb(5, 2) - 1
    dec = count_points(5, 2, 2)
    lhs = (2**6 - 1) * (nonzero - dec)
    rhs = len(orbit_closure(parse_seed_form(SEED_FORMS["sigma_2^1"])))
    return FiberCount(nonzero, dec, lhs, rhs, lhs == rhs)


# ---------------------------------------------------------------------------
# export


def write_generator_csv(M: ExactMatrix, path):
    with open(path, "w", newline="") as f:
        csv.writer(f).writerows(M.tolist())


def write_orbit_binary(masks, path):
    """4 bytes per mask, little-endian uint32, sorted ascending."""
    np.sort(np.asarray(masks, dtype=np.int64)).astype("<u4").tofile(path)


def read_orbit_binary(path) -> np.ndarray:
    return np.fromfile(path, dtype="<u4").astype(np.int64)
