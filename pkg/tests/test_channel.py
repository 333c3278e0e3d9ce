"""BPSK/AWGN scaling against the closed-form Q-function oracle."""

import math

import numpy as np
import pytest

from padfec.channel import (ChannelConfig, SoftVector, add_noise,
                            bpsk_bit_error_rate, hard_decision, modulate,
                            noise_sigma, q_function)


def test_modulate_levels():
    assert np.array_equal(modulate(np.zeros(8, dtype=np.uint8)), np.ones(8))
    assert np.array_equal(modulate(np.ones(8, dtype=np.uint8)), -np.ones(8))


def test_noiseless_round_trip():
    rng = np.random.default_rng(1)
    bits = rng.integers(0, 2, size=128, dtype=np.uint8)
    soft = SoftVector(observations=modulate(bits), noise_sigma=0.0)
    assert np.array_equal(hard_decision(soft), bits)


def test_sigma_formula_value():
    # 1 / (2 * (116/128) * 10^0.55)
    assert noise_sigma(5.5, 116 / 128) ** 2 == pytest.approx(0.155497, rel=1e-5)


def test_sigma_shrinks_with_ebn0():
    assert noise_sigma(40.0, 1.0) < 1e-2
    assert noise_sigma(10.0, 0.5) > noise_sigma(10.0, 1.0)


def test_hard_decision_examples():
    soft = SoftVector(observations=np.array([0.3, -0.1]), noise_sigma=1.0)
    assert list(hard_decision(soft)) == [0, 1]
    tie = SoftVector(observations=np.array([0.0]), noise_sigma=1.0)
    assert hard_decision(tie)[0] == 0


def test_noise_reproducible_from_seed():
    cfg = ChannelConfig(ebn0_db=3.0, code_rate=0.5, seed=77)
    symbols = modulate(np.zeros(256, dtype=np.uint8))
    a = add_noise(symbols, cfg)
    b = add_noise(symbols, cfg)
    assert np.array_equal(a.observations, b.observations)
    c = add_noise(symbols, ChannelConfig(ebn0_db=3.0, code_rate=0.5, seed=78))
    assert not np.array_equal(a.observations, c.observations)


@pytest.mark.parametrize("ebn0_db,rate", [
    (0.0, 1.0),
    (3.0, 120 / 128),
    (5.0, 116 / 128),
])
def test_flip_rate_matches_q_function(ebn0_db, rate):
    cfg = ChannelConfig(ebn0_db=ebn0_db, code_rate=rate, seed=5150)
    n = 1_000_000
    bits = np.zeros(n, dtype=np.uint8)
    soft = add_noise(modulate(bits), cfg)
    flips = int(hard_decision(soft).sum())
    p = bpsk_bit_error_rate(ebn0_db, rate)
    sd = math.sqrt(n * p * (1 - p))
    assert abs(flips - n * p) < 3 * sd


def test_q_function_reference_point():
    assert q_function(math.sqrt(2.0)) == pytest.approx(0.0786496, rel=1e-5)


def test_reliability_sanity():
    # correct bits carry larger |observation| than flipped bits on average
    cfg = ChannelConfig(ebn0_db=2.0, code_rate=1.0, seed=9)
    bits = np.zeros(200_000, dtype=np.uint8)
    soft = add_noise(modulate(bits), cfg)
    flipped = hard_decision(soft) == 1
    assert np.abs(soft.observations[~flipped]).mean() > np.abs(soft.observations[flipped]).mean()


def test_config_validation():
    with pytest.raises(ValueError):
        ChannelConfig(ebn0_db=math.inf, code_rate=1.0)
    with pytest.raises(ValueError):
        ChannelConfig(ebn0_db=3.0, code_rate=0.0)
    with pytest.raises(ValueError):
        ChannelConfig(ebn0_db=3.0, code_rate=1.5)
