"""Padded-block construction and the membership predicate."""

import numpy as np
import pytest

from padfec import kernels
from padfec.aes import derive_schedule
from padfec.padding import PaddingSpec, check_padding, extract_payload, pad_payload


def test_pad_construction_trailing_zeros():
    spec = PaddingSpec(payload_bits=120)
    block = pad_payload(np.ones(120, dtype=np.uint8), spec)
    assert np.all(block[:120] == 1)
    assert np.all(block[120:] == 0)


def test_all_zero_payload_gives_all_zero_block():
    spec = PaddingSpec(payload_bits=116)
    block = pad_payload(np.zeros(116, dtype=np.uint8), spec)
    assert not np.any(block)


def test_round_trip_random_payloads():
    rng = np.random.default_rng(42)
    for k in (1, 31, 116, 120, 127):
        spec = PaddingSpec(payload_bits=k)
        for _ in range(100):
            payload = rng.integers(0, 2, size=k, dtype=np.uint8)
            block = pad_payload(payload, spec)
            assert check_padding(block, spec)
            assert np.array_equal(extract_payload(block, spec), payload)


def test_payload_length_mismatch_rejected():
    spec = PaddingSpec(payload_bits=116)
    with pytest.raises(ValueError):
        pad_payload(np.zeros(117, dtype=np.uint8), spec)


def test_single_pad_bit_flip_fails_check():
    spec = PaddingSpec(payload_bits=116)
    rng = np.random.default_rng(3)
    payload = rng.integers(0, 2, size=116, dtype=np.uint8)
    for pos in range(116, 128):
        block = pad_payload(payload, spec)
        block[pos] ^= 1
        assert not check_padding(block, spec)


def test_extract_ignores_corrupted_pad():
    spec = PaddingSpec(payload_bits=116)
    rng = np.random.default_rng(4)
    payload = rng.integers(0, 2, size=116, dtype=np.uint8)
    block = pad_payload(payload, spec)
    block[120] ^= 1
    assert np.array_equal(extract_payload(block, spec), payload)


def test_byte_pad_rule():
    spec = PaddingSpec(payload_bits=116, pad_rule="byte:a5")
    # 0xA5 = 10100101, truncated to 12 bits
    expected = np.array([1, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0], dtype=np.uint8)
    assert np.array_equal(spec.pad_bits(), expected)
    payload = np.zeros(116, dtype=np.uint8)
    block = pad_payload(payload, spec)
    assert check_padding(block, spec)
    assert not check_padding(np.zeros(128, dtype=np.uint8), spec)


def test_bad_specs_rejected():
    with pytest.raises(ValueError):
        PaddingSpec(payload_bits=0)
    with pytest.raises(ValueError):
        PaddingSpec(payload_bits=128)
    with pytest.raises(ValueError):
        PaddingSpec(payload_bits=116, pad_rule="byte:xyz")
    with pytest.raises(ValueError):
        PaddingSpec(payload_bits=116, pad_rule="pkcs7")


def test_false_accept_rate_matches_membership_size():
    # uniform random blocks pass at rate 2^-(128-k)
    spec = PaddingSpec(payload_bits=120)
    mask, expect = spec.pad_check_bytes()
    rng = np.random.default_rng(99)
    n = 1_000_000
    blocks = rng.integers(0, 256, size=(n, 16), dtype=np.uint8)
    hits = int(np.all((blocks & mask) == expect, axis=1).sum())
    p = 2.0 ** -(128 - 120)
    sd = np.sqrt(n * p * (1 - p))
    assert abs(hits - n * p) < 3 * sd


def test_pad_check_bytes_agree_with_bit_predicate():
    rng = np.random.default_rng(8)
    for k in (5, 116, 120):
        spec = PaddingSpec(payload_bits=k, pad_rule="byte:37")
        mask, expect = spec.pad_check_bytes()
        for _ in range(200):
            bits = rng.integers(0, 2, size=128, dtype=np.uint8)
            data = np.packbits(bits)
            assert kernels.masked_eq(data, mask, expect) == check_padding(bits, spec)


def test_codebook_size_exhaustive_reduced_k():
    # with k=12 the codebook {encrypt(pad(p)) : p} has exactly 2^12 members
    spec = PaddingSpec(payload_bits=12)
    key = derive_schedule("000102030405060708090a0b0c0d0e0f")
    payloads = np.array([[int(b) for b in format(v, "012b")] for v in range(4096)],
                        dtype=np.uint8)
    blocks = np.zeros((4096, 128), dtype=np.uint8)
    blocks[:, :12] = payloads
    ciphers = kernels.encrypt_blocks(np.packbits(blocks, axis=1), key.schedule)
    assert len({c.tobytes() for c in ciphers}) == 4096
