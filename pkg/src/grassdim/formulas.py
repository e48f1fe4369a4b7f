"""Closed-form dimension predictions for (restricted) secants of Grassmannians.

All dimensions here are projective.  ``secant_dim_conjectural`` is the
expected dimension corrected by the known list of defective secants of
Grassmannians (complete only conjecturally, hence ``assumes_bddg``).
``fiber_predicted_dim`` combines it with the fibration of
sigma_s^r(Gr(k, n)) over Gr(r, n) with fibre sigma_s(Gr(k - r, n - r)).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import comb


class FormulaError(ValueError):
    pass


class BelowStability(FormulaError):
    pass


def _check(n, k, s=1, r=0):
    if not (0 <= r <= k <= n) or s < 1:
        raise FormulaError(f"need 0 <= r <= k <= n and s >= 1, got n={n} k={k} s={s} r={r}")


def grassmannian_dim(n: int, k: int) -> int:
    return k * (n - k)


def ambient_dim(n: int, k: int) -> int:
    return comb(n, k) - 1


def stability_step(k: int, s: int, r: int) -> int:
    if not 0 <= r <= k or s < 1:
        raise FormulaError(f"need 0 <= r <= k and s >= 1, got k={k} s={s} r={r}")
    return r + s * (k - r)


def dimfam_formula(n: int, k: int, s: int, r: int) -> int:
    """The orbit-stability count r(p-r) + s(k-r)(p-k) + s - 1 + p(n-p).

    A virtual count: it ignores defects of the fibre and disagrees with the
    Jacobian oracle whenever that fibre is defective.
    """
    p = stability_step(k, s, r)
    if n < p:
        raise BelowStability(f"n={n} is below the stability step p={p}")
    return r * (p - r) + s * (k - r) * (p - k) + s - 1 + p * (n - p)


def secant_virtual_dim(n: int, k: int, s: int) -> int:
    return s * grassmannian_dim(n, k) + s - 1


def secant_expected_dim(n: int, k: int, s: int) -> int:
    _check(n, k, s)
    return min(ambient_dim(n, k), secant_virtual_dim(n, k, s))


class Source(enum.Enum):
    EXPECTED = "expected"
    LINES = "gr2-family"
    SPORADIC = "sporadic"
    TRIVIAL = "trivial"


# (n, k, s) -> actual codimension, with k <= n - k
SPORADIC_CODIM = {
    (7, 3, 3): 1,
    (8, 4, 3): 20,
    (8, 4, 4): 6,
    (9, 3, 4): 10,
}


@dataclass(frozen=True)
class SecantDim:
    dim: int
    defect: int
    source: Source


def secant_dim_conjectural(n: int, k: int, s: int) -> SecantDim:
    """dim sigma_s(Gr(k, n)) assuming the known defective list is complete."""
    _check(n, k, s)
    k = min(k, n - k)
    N = ambient_dim(n, k)
    expected = secant_expected_dim(n, k, s)
    if k == 0:
        return SecantDim(0, 0, Source.TRIVIAL)
    if k == 1:
        return SecantDim(expected, 0, Source.EXPECTED)
    if k == 2:
        # skew matrices of rank <= 2s; everything once 2s >= n - 1
        dim = skew_rank_locus_dim(n, s) if n - 2 * s >= 2 else N
        return SecantDim(dim, expected - dim, Source.LINES if dim < expected else Source.EXPECTED)
    if (n, k, s) in SPORADIC_CODIM:
        dim = N - SPORADIC_CODIM[n, k, s]
        return SecantDim(dim, expected - dim, Source.SPORADIC)
    return SecantDim(expected, 0, Source.EXPECTED)


def skew_rank_locus_dim(n: int, s: int) -> int:
    """Projective dimension of n×n skew matrices of rank <= 2s."""
    return comb(n, 2) - 1 - comb(max(n - 2 * s, 0), 2)


def forced_overlap(n: int, k: int, r: int, s: int = 2) -> tuple[int, bool]:
    """Overlap forced by Grassmann's formula, and whether forcing was applied.

    Only two planes are forced (dim(A ∩ B) >= 2k - n); for s > 2 pairwise
    intersections need not have a common part, so r is returned unchanged.
    """
    if s != 2:
        return r, False
    return min(k, max(r, 2 * k - n, 0)), True


def generic_common_overlap(n: int, k: int, s: int) -> int:
    """Dimension of the intersection of s general k-planes in n-space."""
    return max(0, n - s * (n - k))


def restricted_virtual_dim(n: int, k: int, s: int, r: int) -> int:
    """Dimension of the incidence variety: choose E, then s planes mod E, then a point."""
    return r * (n - r) + s * (k - r) * (n - k) + s - 1


def restricted_expected_dim(n: int, k: int, s: int, r: int) -> int:
    """min(ambient, incidence count) after forcing the overlap."""
    _check(n, k, s, r)
    if s == 2:
        r, _ = forced_overlap(n, k, r, 2)
    else:
        r = max(r, generic_common_overlap(n, k, s))
    if s == 1 or r >= k - 1:
        return grassmannian_dim(n, k)
    return min(ambient_dim(n, k), restricted_virtual_dim(n, k, s, r))


@dataclass(frozen=True)
class FiberDim:
    dim: int
    assumes_bddg: bool
    overlap: int


def _fibre_fills_divisible(n: int, k: int, s: int) -> bool:
    """Is a general point of sigma_s(Gr(k, n)) divisible by a vector?

    Only happens (beyond a common intersection of the planes) when the
    secant fills Λ^{n-2} of an odd-dimensional space: a general 2-form in
    odd dimension has a kernel.
    """
    return (k == n - 2 and n % 2 == 1
            and secant_dim_conjectural(n, k, s).dim == ambient_dim(n, k))


def fiber_predicted_dim(n: int, k: int, s: int, r: int) -> FiberDim:
    """r(n-r) + dim sigma_s(Gr(k-r, n-r)), after forcing the overlap.

    The overlap is raised to the generic common intersection of s planes,
    and again whenever a general fibre point is itself divisible, since then
    the general point of the variety lies over a larger overlap.
    """
    _check(n, k, s, r)
    r_eff = max(r, generic_common_overlap(n, k, s))
    while s > 1 and r_eff < k - 1 and _fibre_fills_divisible(n - r_eff, k - r_eff, s):
        r_eff += 1
    if s == 1 or r_eff >= k - 1:
        return FiberDim(grassmannian_dim(n, k), False, min(r_eff, k))
    fibre = secant_dim_conjectural(n - r_eff, k - r_eff, s)
    dim = min(ambient_dim(n, k), r_eff * (n - r_eff) + fibre.dim)
    return FiberDim(dim, True, r_eff)


@dataclass(frozen=True)
class Prediction:
    n: int
    k: int
    s: int
    r: int
    stability_step: int
    dimfam_value: int | None
    virtual_dim: int
    expected_dim: int
    fiber_dim: int
    assumes_bddg: bool


def predict(n: int, k: int, s: int, r: int) -> Prediction:
    _check(n, k, s, r)
    p = stability_step(k, s, r)
    fib = fiber_predicted_dim(n, k, s, r)
    return Prediction(
        n, k, s, r,
        stability_step=p,
        dimfam_value=dimfam_formula(n, k, s, r) if n >= p else None,
        virtual_dim=restricted_virtual_dim(n, k, s, r),
        expected_dim=restricted_expected_dim(n, k, s, r),
        fiber_dim=fib.dim,
        assumes_bddg=fib.assumes_bddg,
    )


@dataclass(frozen=True)
class DefectReport:
    expected: int
    fiber: int
    actual: int
    defect: int
    is_defective: bool
    matches_fiber: bool


def defect_report(n: int, k: int, s: int, r: int, actual: int) -> DefectReport:
    """Compare an observed projective dimension with the predictions."""
    pred = predict(n, k, s, r)
    defect = pred.expected_dim - actual
    return DefectReport(pred.expected_dim, pred.fiber_dim, actual, defect, defect > 0,
                        actual == pred.fiber_dim)
