import math

import numpy as np
import pytest

from lsid.errors import AllSampledSingularError, InvalidRangeError, RankDeficientError
from lsid.identity import det_weighted_solution
from lsid.instances import random_full_rank
from lsid.montecarlo import McConfig, SplitMix64, mc_solution, sample_subset
from lsid.subsets import combinations


def test_splitmix64_reference_values():
    # reference outputs of SplitMix64 seeded with 0
    rng = SplitMix64(0)
    assert [rng.next_u64() for _ in range(3)] == [
        0xE220A8397B1DCDAF,
        0x6E789E6AA1B965F4,
        0x06C45D188009454F,
    ]


def test_below_is_in_range():
    rng = SplitMix64(1)
    assert all(0 <= rng.below(7) < 7 for _ in range(1000))
    with pytest.raises(InvalidRangeError):
        rng.below(0)


def test_sample_subset_examples():
    rng = SplitMix64(5)
    assert all(sample_subset(4, 4, rng).indices == (1, 2, 3, 4) for _ in range(10))
    r1, r2 = SplitMix64(9), SplitMix64(9)
    seq1 = [sample_subset(3, 2, r1).indices for _ in range(20)]
    seq2 = [sample_subset(3, 2, r2).indices for _ in range(20)]
    assert seq1 == seq2
    with pytest.raises(InvalidRangeError):
        sample_subset(2, 3, r1)


def test_sample_subset_is_uniform():
    m, n, draws = 10, 3, 30_000
    cells = [p.indices for p in combinations(m, n)]
    assert len(cells) == 120
    counts = dict.fromkeys(cells, 0)
    rng = SplitMix64(2026)
    for _ in range(draws):
        counts[sample_subset(m, n, rng).indices] += 1
    p = 1 / 120
    mean, sigma = draws * p, math.sqrt(draws * p * (1 - p))
    assert all(abs(c - mean) <= 3 * sigma for c in counts.values())
    chi2 = sum((c - mean) ** 2 / mean for c in counts.values())
    # 119 dof: mean 119, sd ~15.4; 3 sd above the mean
    assert chi2 < 119 + 3 * math.sqrt(2 * 119)


def test_config_validation():
    with pytest.raises(InvalidRangeError):
        McConfig(samples=0)
    with pytest.raises(InvalidRangeError):
        McConfig(samples=1, seed=-1)


def test_worked_instance_collapses(worked):
    a, b = worked
    for seed in (0, 1, 42):
        for samples in (1, 5, 100):
            r = mc_solution(a, b, McConfig(samples=samples, seed=seed))
            np.testing.assert_array_equal(r.solution, [1.0, 2.0])


def test_fixed_seed_is_bitwise_reproducible(rng):
    a = random_full_rank(rng, 8, 2)
    b = rng.uniform(-1, 1, 8)
    cfg = McConfig(samples=2000, seed=123)
    r1, r2 = mc_solution(a, b, cfg), mc_solution(a, b, cfg)
    assert r1.solution.tobytes() == r2.solution.tobytes()
    sharded = McConfig(samples=2000, seed=123, shards=3)
    assert mc_solution(a, b, sharded).solution.tobytes() == mc_solution(a, b, sharded).solution.tobytes()


def ratio_estimator_sd(a, b, samples):
    """Delta-method standard deviation of the uniform-sampling ratio estimate, by enumeration."""
    m, n = a.shape
    ws, xs = [], []
    for p in combinations(m, n):
        ap = a[p.rows]
        d = np.linalg.det(ap)
        ws.append(d * d)
        xs.append(np.linalg.solve(ap, b[p.rows]) if abs(d) > 1e-14 else np.zeros(n))
    ws, xs = np.array(ws), np.array(xs)
    target = ws @ xs / ws.sum()
    var = np.mean((ws[:, None] * (xs - target)) ** 2, axis=0) / np.mean(ws) ** 2
    return target, np.sqrt(var / samples)


def test_error_within_standard_error(rng):
    for trial in range(5):
        a = random_full_rank(rng, 8, 2)
        b = rng.uniform(-1, 1, 8)
        target, sd = ratio_estimator_sd(a, b, 10_000)
        np.testing.assert_allclose(target, det_weighted_solution(a, b).solution, rtol=1e-10, atol=1e-12)
        r = mc_solution(a, b, McConfig(samples=10_000, seed=trial))
        assert np.all(np.abs(r.solution - target) <= 4 * sd)


def test_no_bias_across_seeds(rng):
    a = random_full_rank(rng, 6, 2)
    b = rng.uniform(-1, 1, 6)
    target, sd = ratio_estimator_sd(a, b, 500)
    est = np.array([mc_solution(a, b, McConfig(samples=500, seed=s)).solution for s in range(200)])
    # the ratio bias is O(1/N); the mean of 200 runs should sit within 4 standard errors
    assert np.all(np.abs(est.mean(axis=0) - target) <= 4 * sd / np.sqrt(200))


def test_singular_draws_count_zero():
    a = np.array([[1.0], [0.0], [0.0], [0.0]])
    b = np.array([3.0, 1.0, 1.0, 1.0])
    r = mc_solution(a, b, McConfig(samples=400, seed=3))
    assert r.subsets_singular > 0
    np.testing.assert_array_equal(r.solution, [3.0])
    # one draw from a mostly-zero column can miss the live row
    with pytest.raises(AllSampledSingularError):
        for seed in range(50):
            mc_solution(a, b, McConfig(samples=1, seed=seed))


def test_rank_deficient_rejected():
    a = np.array([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]])
    with pytest.raises(RankDeficientError):
        mc_solution(a, [1.0, 2.0, 3.0], McConfig(samples=10))
