"""The eleven acceptance criteria, one test each.

Every test records its outcome; the session summary prints one PASS/FAIL
line per criterion (see conftest.py).
"""

import time
from contextlib import contextmanager
from fractions import Fraction
from math import comb

import numpy as np

from conftest import ACCEPTANCE
from grassdim import finite_codes as fc
from grassdim.cli import main
from grassdim.combinat import subsets_lex
from grassdim.exterior import (
    PlueckerVector,
    embed_fiber,
    extend,
    fiber_coordinates,
    hodge,
    pluecker,
    pluecker_relations,
    proportionality,
    recover_overlap,
    wedge,
)
from grassdim.fields import prime_field, rationals
from grassdim.formulas import (
    dimfam_formula,
    fiber_predicted_dim,
    forced_overlap,
    restricted_expected_dim,
    secant_dim_conjectural,
)
from grassdim.linalg import ExactMatrix, kernel, rank
from grassdim.terracini import (
    SecantParams,
    benchmark,
    dimension,
    jacobian,
    pluecker_sum,
    sample_point,
    symbolic_jacobian,
)

P = 2147483629
FP = prime_field(P)


@contextmanager
def criterion(num, desc, limit=None):
    ACCEPTANCE[num] = (desc, False)
    t0 = time.perf_counter()
    try:
        yield
        took = time.perf_counter() - t0
        if limit is not None:
            assert took < limit, f"took {took:.1f}s, limit {limit}s"
        ACCEPTANCE[num] = (f"{desc} [{took:.2f}s]", True)
    finally:
        print(f"criterion {num}: {'PASS' if ACCEPTANCE[num][1] else 'FAIL'}  {desc}")


def proj(n, k, s, r=0):
    return dimension(SecantParams(n, k, s, r)).proj_dim


def test_criterion_01_known_ranks(capsys):
    with criterion(1, "dim 7 3 2 0 -> cone 26, dim 7 3 2 1 -> cone 20"):
        for argv, cone in [(["7", "3", "2", "0"], 26), (["7", "3", "2", "1"], 20)]:
            t0 = time.perf_counter()
            assert main(["dim", *argv, "--format", "csv"]) == 0
            assert time.perf_counter() - t0 < 1
            out = capsys.readouterr().out.splitlines()
            assert int(out[1].split(",")[4]) == cone


def test_criterion_02_three_case():
    with criterion(2, "sigma_2^1(Gr(3,n)) = 5n-16, codim n-1 in sigma_2, n = 6..8", limit=10):
        for n in (6, 7, 8):
            d = proj(n, 3, 2, 1)
            assert d == 5 * n - 16
            assert proj(n, 3, 2, 0) - d == n - 1


def test_criterion_03_family_formulas():
    with criterion(3, "sigma_2^1(Gr(4,n)) = 7n-24, sigma_2^1(Gr(5,n)) = 9n-40", limit=120):
        for n in (7, 8, 9):
            assert fiber_predicted_dim(n, 4, 2, 1).dim == 7 * n - 24
            assert proj(n, 4, 2, 1) == 7 * n - 24
        for n in (9, 10):
            assert fiber_predicted_dim(n, 5, 2, 1).dim == 9 * n - 40
            assert proj(n, 5, 2, 1) == 9 * n - 40


def test_criterion_04_defective_secants():
    desc = "defective secants: sigma_3(Gr(3,7)) codim 1 (proj 33), Gr(2,n) family, Gr(4,8) cases"
    with criterion(4, desc, limit=300):
        d = proj(7, 3, 3)
        assert comb(7, 3) - 1 - d == 1
        assert d == 33 == secant_dim_conjectural(7, 3, 3).dim
        for s, n in [(2, 6), (2, 7), (3, 8)]:
            virtual = s * 2 * (n - 2) + s - 1
            assert virtual - proj(n, 2, s) == 2 * s * (s - 1)
        assert proj(8, 4, 3) == 49
        assert proj(8, 4, 4) == 63


def test_criterion_05_gr48_restricted():
    with criterion(5, "sigma_3^1(Gr(4,8)): oracle 40 vs expected 45", limit=120):
        rep = dimension(SecantParams(8, 4, 3, 1))
        assert rep.proj_dim == 40
        assert rep.expected_dim == 45


def test_criterion_06_forced_overlap():
    with criterion(6, "sigma_2^r(Gr(6,8)), r = 1..4: proj 21, overlap 4, expected 25", limit=60):
        for r in range(1, 5):
            assert forced_overlap(8, 6, r, 2)[0] == 4
            assert restricted_expected_dim(8, 6, 2, r) == 25
            assert proj(8, 6, 2, r) == 21


def test_criterion_07_fiber_consistency():
    desc = "oracle = fiber prediction on 2<=k<=5, k<n<=8, s<=3, r<=k"
    with criterion(7, desc, limit=900):
        mismatches, count = [], 0
        for k in range(2, 6):
            for n in range(k + 1, 9):
                for s in range(1, 4):
                    for r in range(k + 1):
                        got = proj(n, k, s, r)
                        want = fiber_predicted_dim(n, k, s, r).dim
                        count += 1
                        if got != want:
                            mismatches.append((n, k, s, r, got, want))
        for m in mismatches:
            print("finding: (n,k,s,r)=%s oracle %d fiber %d" % (m[:4], m[4], m[5]))
        # 7n-18 would give 31 here; the oracle agrees with the fiber count instead
        assert proj(7, 3, 3, 1) == fiber_predicted_dim(7, 3, 3, 1).dim == 20
        assert dimfam_formula(7, 3, 3, 1) == 32
        assert count == 228
        assert not mismatches


def test_criterion_08_oracle_equivalence():
    with criterion(8, "symbolic Jacobian = cofactor Jacobian at 20 points"):
        rng = np.random.default_rng(8)
        for params in [(4, 2, 1, 0), (5, 2, 2, 1), (6, 3, 2, 1)]:
            S = symbolic_jacobian(SecantParams(*params))
            for i in range(20):
                f = FP if i % 2 else rationals()
                pt = sample_point(S.params, f, rng)
                assert S.evaluate_at(pt) == jacobian(pt)


def test_criterion_09_performance():
    desc = "bench 10 8 2 1 cofactor < 1s; naive skipped or > 10x slower at (6,3,2,1)"
    with criterion(9, desc):
        rec = benchmark(SecantParams(10, 8, 2, 1), FP)
        assert rec.cofactor_time < 1
        rec = benchmark(SecantParams(6, 3, 2, 1), FP)
        assert rec.naive_skipped or rec.speedup > 10
        print(f"(6,3,2,1) speedup {rec.speedup:.0f}x")


def test_criterion_10_coding_theory():
    desc = "1395 points, 20x1395 generator, five orbits sum 2^20-1, fiber count 54684"
    with criterion(10, desc, limit=300):
        assert fc.count_points(6, 3, 2) == 1395
        assert fc.generator_matrix(6, 3, 2).shape == (20, 1395)
        table = fc.classify_all()
        assert sorted(table.sizes) == [1395, 54684, 166656, 357120, 468720]
        assert table.total == 2**20 - 1
        check = fc.fiber_count_check()
        assert check.lhs == 54684 == 63 * 868 and check.equal


def _hodge_block_sign_ok(limit=8):
    for a in range(limit + 1):
        for b in range(limit + 1 - a):
            n = a + b
            for i in range(a + 1):
                for j in range(b + 1):
                    for I in subsets_lex(a, i):
                        for J in subsets_lex(b, j):
                            one = PlueckerVector.basis(n, (), FP)
                            al = extend(PlueckerVector.basis(a, I, FP), n, 0) if a else one
                            be = extend(PlueckerVector.basis(b, J, FP), n, a) if b else one
                            ha = extend(hodge(PlueckerVector.basis(a, I, FP)), n, 0) if a else one
                            hb = extend(hodge(PlueckerVector.basis(b, J, FP)), n, a) if b else one
                            c = proportionality(wedge(ha, hb), hodge(wedge(al, be)))
                            if c != FP((-1) ** (j * (a - i))):
                                return False
    return True


def test_criterion_11_property_suites():
    desc = "Pluecker relations, Hodge involution, block factorization, Phi.Psi, fields, rank"
    with criterion(11, desc):
        rng = np.random.default_rng(11)
        # Pluecker relations on random planes
        for n, k in [(5, 2), (6, 3), (7, 3)]:
            v = pluecker(ExactMatrix.wrap(FP.random_array(rng, (k, n)), FP))
            assert all(q == 0 for q in pluecker_relations(v))
        # Hodge involution, exhaustive n <= 8
        for n in range(1, 9):
            for k in range(n + 1):
                for I in subsets_lex(n, k):
                    v = PlueckerVector.basis(n, I, FP)
                    assert hodge(hodge(v)) == v.scale((-1) ** (k * (n - k)))
        # block factorization, exhaustive a + b <= 8
        assert _hodge_block_sign_ok(8)
        # Phi o Psi on 100 restricted points
        shapes = [(5, 3, 2, 1), (6, 3, 2, 1), (7, 3, 2, 1), (7, 4, 2, 2), (8, 4, 2, 1)]
        for t in range(100):
            params = SecantParams(*shapes[t % len(shapes)])
            w = pluecker_sum(sample_point(params, FP, rng))
            E = recover_overlap(w, params.r)
            assert proportionality(embed_fiber(E, fiber_coordinates(w, E)), w) is not None
        # field axioms on random elements
        for f in (FP, rationals()):
            for _ in range(200):
                a, b, c = (f(Fraction(int(x), int(y) or 1)) for x, y in rng.integers(-99, 99, (3, 2)))
                assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
                assert f.add(a, f.neg(a)) == 0
                if a != 0:
                    assert f.mul(a, f.inv(a)) == 1
        # rank + nullity = columns
        for f in (FP, rationals(), prime_field(3)):
            for _ in range(30):
                r, c = rng.integers(1, 7, 2)
                M = ExactMatrix.wrap(f.random_array(rng, (r, c)) % (3 if f.modulus == 3 else 7), f)
                assert rank(M) + len(kernel(M)) == c
