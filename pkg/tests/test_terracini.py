import json

import numpy as np
import pytest

from grassdim import terracini
from grassdim.fields import prime_field, rationals
from grassdim.combinat import subsets_lex
from grassdim.linalg import det_mod
from grassdim.terracini import (
    DegenerateAfterRetries,
    DimensionReport,
    InvalidParams,
    SecantParams,
    TooLarge,
    benchmark,
    cofactor_minors,
    dimension,
    jacobian,
    pluecker_sum,
    sample_point,
    symbolic_jacobian,
    variable_names,
)

P = 2147483629
FP = prime_field(P)


def test_params():
    p = SecantParams(7, 3, 2, 1)
    assert (p.num_rows, p.num_vars, p.cone_bound) == (35, 35, 35)
    with pytest.raises(InvalidParams):
        SecantParams(3, 4, 1)
    with pytest.raises(InvalidParams):
        SecantParams(5, 2, 0)


def test_sample_point_shapes():
    pt = sample_point(SecantParams(7, 3, 2, 1), FP, np.random.default_rng(0))
    assert pt.shared.shape == (1, 7)
    assert [t.shape for t in pt.tails] == [(2, 7), (2, 7)]
    assert all(np.array_equal(st[0], pt.shared[0]) for st in pt.stacks())


def test_degenerate_after_retries(monkeypatch):
    monkeypatch.setattr(terracini, "MAX_RETRIES", 1)
    F2 = prime_field(2)
    params = SecantParams(4, 4, 1)
    fails = 0
    for seed in range(40):
        try:
            sample_point(params, F2, np.random.default_rng(seed))
        except DegenerateAfterRetries:
            fails += 1
    assert 0 < fails < 40


def test_cofactor_minors_match_direct_determinants():
    rng = np.random.default_rng(4)
    stacks = FP.random_array(rng, (2, 3, 6))
    table = cofactor_minors(stacks, FP)
    assert table.shape == (2, 3, 15)
    for m in range(2):
        for i in range(3):
            rest = np.delete(stacks[m], i, axis=0)
            for b, J in enumerate(subsets_lex(6, 2)):
                assert table[m, i, b] == det_mod(rest[:, list(J)], P)


@pytest.mark.parametrize("params", [(4, 2, 1, 0), (5, 2, 2, 1), (6, 3, 2, 1), (5, 3, 3, 2),
                                    (7, 1, 2, 0), (6, 3, 3, 3)])
def test_symbolic_matches_cofactor(params):
    P_ = SecantParams(*params)
    S = symbolic_jacobian(P_)
    rng = np.random.default_rng(sum(params))
    for f in (FP, rationals()):
        for _ in range(3):
            pt = sample_point(P_, f, rng)
            assert S.evaluate_at(pt) == jacobian(pt)


def test_symbolic_entries():
    S = symbolic_jacobian(SecantParams(4, 2, 1, 0))
    assert str(S.entry(0, 0)) == "a_(1,1)"
    assert variable_names(SecantParams(4, 2, 2, 1))[:5] == ["a_(0,0)", "a_(0,1)", "a_(0,2)",
                                                            "a_(0,3)", "a_(1,0)"]
    assert "b_(0,3)" in variable_names(SecantParams(4, 2, 2, 1))
    with pytest.raises(TooLarge):
        symbolic_jacobian(SecantParams(10, 8, 2, 1))


def unpack(params, vals):
    n, k, s, r = params.n, params.k, params.s, params.r
    shared = vals[: r * n].reshape(r, n)
    size = (k - r) * n
    tails = tuple(vals[r * n + m * size: r * n + (m + 1) * size].reshape(k - r, n) for m in range(s))
    return terracini.SamplePoint(params, FP, shared, tails)


@pytest.mark.parametrize("params", [(6, 3, 2, 1), (7, 3, 3, 0), (5, 4, 2, 2)])
def test_jacobian_columns_are_exact_differences(params):
    # each variable is one matrix entry, so every minor is affine in it
    P_ = SecantParams(*params)
    rng = np.random.default_rng(7)
    pt = sample_point(P_, FP, rng)
    J = jacobian(pt).data
    x = pt.variables()
    w0 = pluecker_sum(pt).coords
    for v in rng.choice(len(x), 8, replace=False):
        t = int(rng.integers(1, P))
        y = x.copy()
        y[v] = (y[v] + t) % P
        w1 = pluecker_sum(unpack(P_, y)).coords
        assert np.array_equal((w1 - w0) % P, J[:, v] * t % P)


@pytest.mark.parametrize("params,cone", [((7, 3, 2, 0), 26), ((7, 3, 2, 1), 20), ((5, 3, 1, 0), 7),
                                         ((8, 6, 2, 1), 22), ((7, 3, 3, 0), 34)])
def test_known_ranks(params, cone):
    assert dimension(SecantParams(*params)).cone_dim == cone


def test_rational_mode_agrees():
    rep = dimension(SecantParams(7, 3, 2, 1), rationals(), trials=2)
    assert rep.cone_dim == 20
    assert rep.primes_used == [None]


def test_report_fields_and_roundtrip():
    rep = dimension(SecantParams(7, 3, 2, 1), seed=5)
    assert rep.agreed and rep.trials == 4 and len(rep.primes_used) == 2
    assert rep.predicted == (23, 23, 19)
    assert rep.defect == 4 and rep.matches_fiber
    d = json.loads(json.dumps(rep.to_dict()))
    assert DimensionReport.from_dict(d) == rep


def test_seed_determinism():
    a = dimension(SecantParams(6, 3, 2, 0), seed=11).to_dict()
    b = dimension(SecantParams(6, 3, 2, 0), seed=11).to_dict()
    assert a == b


def test_cone_bound():
    for params in [(6, 3, 3, 0), (5, 2, 3, 1), (8, 2, 3, 0)]:
        P_ = SecantParams(*params)
        assert dimension(P_).cone_dim <= P_.cone_bound


def test_benchmark_records():
    rec = benchmark(SecantParams(5, 2, 2, 1), FP)
    assert rec.naive_rank == rec.cofactor_rank == 7
    assert rec.speedup > 1
    rec = benchmark(SecantParams(10, 8, 2, 1), FP)
    assert rec.naive_skipped and rec.cofactor_rank == 30
