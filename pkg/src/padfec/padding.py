"""Padded-plaintext format and the codebook-membership predicate.

A k-bit payload occupies the leading bits of the 128-bit block; the trailing
128-k bits carry a fixed pad sequence the receiver can recompute on its own.
Checking that sequence after decryption is the joint decoder's membership
function.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .aes import BLOCK_BITS, bits_to_bytes, require_block


@dataclass(frozen=True)
class PaddingSpec:
    """Payload length and the deterministic pad content.

    pad_rule is ``zeros`` or ``byte:<hex>`` (a repeating byte pattern,
    truncated to the pad length).
    """

    payload_bits: int
    pad_rule: str = "zeros"

    def __post_init__(self):
        if not 1 <= self.payload_bits < BLOCK_BITS:
            raise ValueError(f"payload_bits must be in [1, {BLOCK_BITS}), got {self.payload_bits}")
        if self.pad_rule != "zeros":
            if not self.pad_rule.startswith("byte:"):
                raise ValueError(f"unknown pad_rule {self.pad_rule!r}")
            value = self.pad_rule[5:]
            if len(value) != 2 or any(c not in "0123456789abcdefABCDEF" for c in value):
                raise ValueError(f"pad_rule byte must be 2 hex chars, got {value!r}")

    @property
    def pad_len(self) -> int:
        return BLOCK_BITS - self.payload_bits

    def pad_bits(self) -> np.ndarray:
        """The (128-k,) pad sequence, derived from payload_bits and pad_rule alone."""
        if self.pad_rule == "zeros":
            return np.zeros(self.pad_len, dtype=np.uint8)
        byte = int(self.pad_rule[5:], 16)
        one = np.unpackbits(np.array([byte], dtype=np.uint8))
        reps = (self.pad_len + 7) // 8
        return np.tile(one, reps)[: self.pad_len]

    def pad_check_bytes(self) -> tuple[np.ndarray, np.ndarray]:
        """(mask, expected) byte pair for kernel-side pad checking."""
        mask_bits = np.zeros(BLOCK_BITS, dtype=np.uint8)
        mask_bits[self.payload_bits:] = 1
        expect_bits = np.zeros(BLOCK_BITS, dtype=np.uint8)
        expect_bits[self.payload_bits:] = self.pad_bits()
        return bits_to_bytes(mask_bits), bits_to_bytes(expect_bits)

    def payload_mask_bytes(self) -> np.ndarray:
        mask_bits = np.zeros(BLOCK_BITS, dtype=np.uint8)
        mask_bits[: self.payload_bits] = 1
        return bits_to_bytes(mask_bits)


def pad_payload(payload: np.ndarray, spec: PaddingSpec) -> np.ndarray:
    """Place a k-bit payload in front of the pad sequence."""
    payload = np.asarray(payload, dtype=np.uint8)
    if payload.shape != (spec.payload_bits,):
        raise ValueError(
            f"payload must have {spec.payload_bits} bits, got shape {payload.shape}")
    return np.concatenate([payload, spec.pad_bits()])


def check_padding(block: np.ndarray, spec: PaddingSpec) -> bool:
    """True iff the trailing 128-k bits equal the pad sequence exactly."""
    block = require_block(block)
    return bool(np.array_equal(block[spec.payload_bits:], spec.pad_bits()))


def extract_payload(block: np.ndarray, spec: PaddingSpec) -> np.ndarray:
    """First k bits of the block; ignores whatever the pad region holds."""
    block = require_block(block)
    return block[: spec.payload_bits].copy()
