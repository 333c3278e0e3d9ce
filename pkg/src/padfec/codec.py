"""End-to-end pipelines: baseline, separate RLC+ORBGRAND, proposed joint.

These are the readable single-trial reference paths built from the public
module operations; the Monte-Carlo harness runs the same logic through the
batch kernels and is cross-checked against these in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .aes import AesKey, bits_to_bytes, bytes_to_bits, decrypt_block, encrypt_block
from .channel import ChannelConfig, SoftVector, add_noise, hard_decision, modulate
from .orbgrand import (DEFAULT_QUERY_BUDGET, PatternGenerator, apply_pattern,
                       rank_by_reliability)
from .padding import PaddingSpec, check_padding, extract_payload, pad_payload

EQUAL_RATE = "equal_rate"
APPENDED_REDUNDANCY = "appended_redundancy"


@dataclass(frozen=True)
class GeneratorConfig:
    max_queries: int = DEFAULT_QUERY_BUDGET
    pattern_order: str = "logistic"


@dataclass(frozen=True)
class LinearCode:
    """Systematic binary code: G = [I | P], H = [P^T | I], G H^T = 0."""

    n: int
    k: int
    generator: np.ndarray     # (k, n) uint8
    parity_check: np.ndarray  # (n-k, n) uint8
    seed: int

    def encode(self, message: np.ndarray) -> np.ndarray:
        message = np.asarray(message, dtype=np.uint8)
        if message.shape != (self.k,):
            raise ValueError(f"message must have {self.k} bits")
        return (message @ self.generator) % 2

    def syndrome(self, word: np.ndarray) -> np.ndarray:
        word = np.asarray(word, dtype=np.uint8)
        if word.shape != (self.n,):
            raise ValueError(f"word must have {self.n} bits")
        return (self.parity_check @ word) % 2

    def h_column_masks(self) -> np.ndarray:
        """Parity-check columns packed into int64 bitmasks for the kernels."""
        weights = 1 << np.arange(self.n - self.k, dtype=np.int64)
        return (self.parity_check.astype(np.int64).T @ weights).astype(np.int64)


def generate_rlc(n: int, k: int, seed: int) -> LinearCode:
    """Random systematic linear code: parity block i.i.d. uniform from seed."""
    if not 0 < k < n <= 256:
        raise ValueError("need 0 < k < n <= 256")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    parity = rng.integers(0, 2, size=(k, n - k), dtype=np.uint8)
    generator = np.concatenate([np.eye(k, dtype=np.uint8), parity], axis=1)
    parity_check = np.concatenate([parity.T, np.eye(n - k, dtype=np.uint8)], axis=1)
    return LinearCode(n=n, k=k, generator=generator, parity_check=parity_check, seed=seed)


@dataclass
class DecodeOutcome:
    """Result of one trial with full decode accounting.

    decided is the channel-domain word the receiver settled on (the accepted
    candidate, or the hard decision after abandonment); payload is the
    extracted k-bit word, best-effort on abandonment.
    """

    payload: np.ndarray
    queries_used: int
    abandoned: bool
    undetected_error: bool
    decided: np.ndarray = field(default=None, repr=False)


# ---------------------------------------------------------------------------
# Decoders (receiver side)

def decode_joint(soft: SoftVector, key: AesKey, spec: PaddingSpec,
                 gen_cfg: GeneratorConfig = GeneratorConfig()) -> DecodeOutcome:
    """Guess loop with membership(y) := check_padding(decrypt(y))."""
    hard = hard_decision(soft)
    order = rank_by_reliability(soft)
    gen = PatternGenerator(len(hard), gen_cfg.max_queries, gen_cfg.pattern_order)
    queries = 0
    for pattern in gen:
        candidate = apply_pattern(hard, pattern, order)
        plain = decrypt_block(candidate, key)
        queries += 1
        if check_padding(plain, spec):
            return DecodeOutcome(payload=extract_payload(plain, spec),
                                 queries_used=queries, abandoned=False,
                                 undetected_error=False, decided=candidate)
    plain = decrypt_block(hard, key)
    return DecodeOutcome(payload=extract_payload(plain, spec),
                         queries_used=queries, abandoned=True,
                         undetected_error=False, decided=hard)


def decode_syndrome(soft: SoftVector, code: LinearCode,
                    gen_cfg: GeneratorConfig = GeneratorConfig()) -> DecodeOutcome:
    """Guess loop with membership(y) := (H y = 0); payload is the message part."""
    hard = hard_decision(soft)
    order = rank_by_reliability(soft)
    gen = PatternGenerator(code.n, gen_cfg.max_queries, gen_cfg.pattern_order)
    queries = 0
    for pattern in gen:
        candidate = apply_pattern(hard, pattern, order)
        queries += 1
        if not code.syndrome(candidate).any():
            return DecodeOutcome(payload=candidate[: code.k].copy(),
                                 queries_used=queries, abandoned=False,
                                 undetected_error=False, decided=candidate)
    return DecodeOutcome(payload=hard[: code.k].copy(), queries_used=queries,
                         abandoned=True, undetected_error=False, decided=hard)


# ---------------------------------------------------------------------------
# Transmit-side helper

def _transmit(bits: np.ndarray, chan: ChannelConfig,
              rng: np.random.Generator | None) -> SoftVector:
    return add_noise(modulate(bits), chan, rng)


# ---------------------------------------------------------------------------
# Pipelines

def pipeline_baseline(payload: np.ndarray, key: AesKey, spec: PaddingSpec,
                      chan: ChannelConfig,
                      rng: np.random.Generator | None = None) -> DecodeOutcome:
    """Encrypt-only link: hard decision straight into the decryptor.

    One membership query, never abandons; any channel bit flip is an
    (undetected) block error since nothing on the receive side can tell.
    """
    plain = pad_payload(payload, spec)
    cipher = encrypt_block(plain, key)
    soft = _transmit(cipher, chan, rng)
    hard = hard_decision(soft)
    decoded = extract_payload(decrypt_block(hard, key), spec)
    flipped = bool(np.any(hard != cipher))
    return DecodeOutcome(payload=decoded, queries_used=1, abandoned=False,
                         undetected_error=flipped, decided=hard)


def pipeline_proposed(payload: np.ndarray, key: AesKey, spec: PaddingSpec,
                      chan: ChannelConfig,
                      gen_cfg: GeneratorConfig = GeneratorConfig(),
                      rng: np.random.Generator | None = None) -> DecodeOutcome:
    """Same transmitter as baseline; joint decode-and-decrypt receiver."""
    plain = pad_payload(payload, spec)
    cipher = encrypt_block(plain, key)
    soft = _transmit(cipher, chan, rng)
    out = decode_joint(soft, key, spec, gen_cfg)
    if not out.abandoned:
        out.undetected_error = bool(np.any(out.payload != payload))
    return out


def pipeline_separate(payload: np.ndarray, key: AesKey, spec: PaddingSpec,
                      code: LinearCode, chan: ChannelConfig,
                      gen_cfg: GeneratorConfig = GeneratorConfig(),
                      rng: np.random.Generator | None = None,
                      framing: str = EQUAL_RATE) -> DecodeOutcome:
    """Separate ORBGRAND decoding, then decryption.

    equal_rate: a (128, k) code carries the payload directly at the same
    transmitted length and rate as the other pipelines; encryption is a
    bit-transparent bijection outside the channel. appended_redundancy: the
    128-bit ciphertext is encoded with (128 + pad) bits on the wire and
    decrypted after decoding.
    """
    if framing == EQUAL_RATE:
        if code.k != spec.payload_bits:
            raise ValueError("equal_rate framing needs code.k == payload_bits")
        codeword = code.encode(payload)
        soft = _transmit(codeword, chan, rng)
        out = decode_syndrome(soft, code, gen_cfg)
    elif framing == APPENDED_REDUNDANCY:
        if code.k != 128:
            raise ValueError("appended_redundancy framing needs code.k == 128")
        plain = pad_payload(payload, spec)
        cipher = encrypt_block(plain, key)
        codeword = code.encode(cipher)
        soft = _transmit(codeword, chan, rng)
        out = decode_syndrome(soft, code, gen_cfg)
        out.payload = extract_payload(decrypt_block(out.payload, key), spec)
    else:
        raise ValueError(f"unknown separate framing {framing!r}")
    if not out.abandoned:
        out.undetected_error = bool(np.any(out.payload != payload))
    return out
