"""Pattern generation order, completeness, and reliability ranking.

The brute-force oracles here enumerate subsets of {1..n} directly and are
independent of the successor algorithm they check.
"""

import itertools

import numpy as np

from padfec.channel import SoftVector
from padfec.orbgrand import (ErrorPattern, PatternGenerator, apply_pattern,
                             next_pattern, rank_by_reliability)


def brute_force_patterns(n):
    """All subsets of {1..n} keyed by logistic weight."""
    by_weight = {}
    for r in range(n + 1):
        for combo in itertools.combinations(range(1, n + 1), r):
            by_weight.setdefault(sum(combo), set()).add(tuple(sorted(combo)))
    return by_weight


def test_rank_by_reliability_ascending():
    order = rank_by_reliability(np.array([0.9, 0.1, 0.5]))
    # rank 1 = least reliable
    assert list(order.permutation) == [1, 2, 0]
    assert np.all(np.diff(order.reliabilities[order.permutation]) >= 0)


def test_rank_ties_break_by_position():
    order = rank_by_reliability(np.array([0.5, 0.5, 0.5, 0.5]))
    assert list(order.permutation) == [0, 1, 2, 3]


def test_rank_accepts_soft_vector_and_sorts():
    rng = np.random.default_rng(17)
    for _ in range(50):
        soft = SoftVector(observations=rng.normal(size=64), noise_sigma=1.0)
        order = rank_by_reliability(soft)
        sorted_rel = order.reliabilities[order.permutation]
        assert np.all(np.diff(sorted_rel) >= 0)
        assert sorted(order.permutation) == list(range(64))


def test_first_pattern_is_empty():
    gen = PatternGenerator(128)
    first = next(gen)
    assert first.flip_ranks == ()
    assert first.logistic_weight == 0


def test_weight_three_tier():
    gen = PatternGenerator(16, max_queries=10**6)
    pats = [p.flip_ranks for p in gen if p.logistic_weight == 3]
    assert pats == [(3,), (1, 2)]


def test_exhaustive_n8_matches_brute_force():
    gen = PatternGenerator(8, max_queries=10**9)
    emitted = [p.flip_ranks for p in gen]
    assert len(emitted) == 256
    assert len(set(emitted)) == 256
    weights = [sum(p) for p in emitted]
    assert all(a <= b for a, b in zip(weights, weights[1:]))
    assert weights[-1] == 36
    oracle = brute_force_patterns(8)
    for weight, group in itertools.groupby(emitted, key=sum):
        assert set(group) == oracle[weight]


def test_per_weight_counts_up_to_n12():
    oracle = brute_force_patterns(12)
    gen = PatternGenerator(12, max_queries=10**9)
    counts = {}
    for p in gen:
        w = p.logistic_weight
        if w > 40:
            break
        counts[w] = counts.get(w, 0) + 1
    for weight in range(41):
        assert counts.get(weight, 0) == len(oracle.get(weight, ()))


def test_generators_are_deterministic():
    a = PatternGenerator(64)
    b = PatternGenerator(64)
    for _ in range(500):
        assert next(a).flip_ranks == next(b).flip_ranks


def test_budget_exhaustion():
    gen = PatternGenerator(128, max_queries=10)
    assert len(list(gen)) == 10
    assert next_pattern(gen) is None
    gen0 = PatternGenerator(128, max_queries=0)
    assert next_pattern(gen0) is None


def test_full_space_exhaustion_small_n():
    gen = PatternGenerator(3, max_queries=10**6)
    assert len(list(gen)) == 8
    assert next_pattern(gen) is None


def test_hamming_mode_exhaustive_n8():
    gen = PatternGenerator(8, max_queries=10**9, order="hamming")
    emitted = [p.flip_ranks for p in gen]
    assert len(emitted) == 256 and len(set(emitted)) == 256
    sizes = [len(p) for p in emitted]
    assert all(a <= b for a, b in zip(sizes, sizes[1:]))
    # within a size tier: lexicographic combinations
    expected = [()]
    for r in range(1, 9):
        expected.extend(itertools.combinations(range(1, 9), r))
    assert emitted == [tuple(c) for c in expected]


def test_apply_pattern_identity_and_involution():
    rng = np.random.default_rng(23)
    hard = rng.integers(0, 2, size=32, dtype=np.uint8)
    order = rank_by_reliability(rng.normal(size=32))
    empty = ErrorPattern(flip_ranks=())
    assert np.array_equal(apply_pattern(hard, empty, order), hard)
    pat = ErrorPattern(flip_ranks=(1, 5, 9))
    once = apply_pattern(hard, pat, order)
    assert np.array_equal(apply_pattern(once, pat, order), hard)


def test_apply_pattern_maps_rank_through_permutation():
    obs = np.zeros(8)
    obs[5] = 0.01  # position 5 least reliable
    obs[[0, 1, 2, 3, 4, 6, 7]] = np.arange(7) + 1.0
    order = rank_by_reliability(obs)
    hard = np.zeros(8, dtype=np.uint8)
    flipped = apply_pattern(hard, ErrorPattern(flip_ranks=(1,)), order)
    assert flipped[5] == 1 and flipped.sum() == 1
