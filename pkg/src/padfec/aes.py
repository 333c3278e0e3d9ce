"""AES-128 block encryption and decryption over 128-bit words.

The cipher is both the confidentiality layer and the nonlinear codebook of
the joint decoder, so encrypt/decrypt are exposed as pure functions over
immutable inputs. Blocks travel as length-128 uint8 bit arrays (bit 0 is
the most significant bit of the first byte); the round loops themselves
live in :mod:`padfec.kernels`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels

BLOCK_BITS = 128
BLOCK_BYTES = 16

RCON = (0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1B, 0x36)


# ---------------------------------------------------------------------------
# BitBlock helpers

def require_block(bits: np.ndarray) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.shape != (BLOCK_BITS,):
        raise ValueError(f"block must have exactly {BLOCK_BITS} bits, got shape {bits.shape}")
    if np.any(bits > 1):
        raise ValueError("block bits must be 0 or 1")
    return bits


def bits_to_bytes(bits: np.ndarray) -> np.ndarray:
    return np.packbits(np.asarray(bits, dtype=np.uint8))


def bytes_to_bits(data: np.ndarray) -> np.ndarray:
    return np.unpackbits(np.asarray(data, dtype=np.uint8))


def block_from_hex(hex32: str) -> np.ndarray:
    data = bytes.fromhex(hex32)
    if len(data) != BLOCK_BYTES:
        raise ValueError("expected 32 hex characters (16 bytes)")
    return bytes_to_bits(np.frombuffer(data, dtype=np.uint8))


def block_to_hex(bits: np.ndarray) -> str:
    return bits_to_bytes(require_block(bits)).tobytes().hex()


def random_block(rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, 2, size=BLOCK_BITS, dtype=np.uint8)


# ---------------------------------------------------------------------------
# Key schedule

def expand_key(key_bytes: np.ndarray) -> np.ndarray:
    """AES-128 key expansion: 16 key bytes to the (11, 16) round-key array."""
    key_bytes = np.asarray(key_bytes, dtype=np.uint8)
    if key_bytes.shape != (16,):
        raise ValueError("AES-128 key must be 16 bytes")
    w = np.zeros((44, 4), dtype=np.uint8)
    w[:4] = key_bytes.reshape(4, 4)
    for i in range(4, 44):
        t = w[i - 1].copy()
        if i % 4 == 0:
            t = np.roll(t, -1)
            t = kernels.AES_SBOX[t]
            t[0] ^= RCON[i // 4 - 1]
        w[i] = w[i - 4] ^ t
    return w.reshape(11, 16)


@dataclass(frozen=True)
class AesKey:
    """A 128-bit key together with its expanded round-key schedule."""

    key: np.ndarray       # (16,) uint8
    schedule: np.ndarray  # (11, 16) uint8

    @classmethod
    def from_hex(cls, hex32: str) -> "AesKey":
        data = bytes.fromhex(hex32)
        if len(data) != 16:
            raise ValueError("AES-128 key must be 32 hex characters")
        key = np.frombuffer(data, dtype=np.uint8).copy()
        return cls(key=key, schedule=expand_key(key))


def derive_schedule(key) -> AesKey:
    """Build an AesKey from 32 hex chars, 16 key bytes, or 128 key bits."""
    if isinstance(key, str):
        return AesKey.from_hex(key)
    key = np.asarray(key, dtype=np.uint8)
    if key.shape == (BLOCK_BITS,):
        key = bits_to_bytes(key)
    if key.shape != (16,):
        raise ValueError("key must be 16 bytes or 128 bits")
    key = key.copy()
    return AesKey(key=key, schedule=expand_key(key))


# ---------------------------------------------------------------------------
# Block operations

def encrypt_block(plain: np.ndarray, key: AesKey) -> np.ndarray:
    """Encrypt one 128-bit block; bijective in plain for a fixed key."""
    data = bits_to_bytes(require_block(plain))
    out = kernels.encrypt_blocks(data[None, :], key.schedule)[0]
    return bytes_to_bits(out)


def decrypt_block(cipher: np.ndarray, key: AesKey) -> np.ndarray:
    """Exact inverse of :func:`encrypt_block`."""
    data = bits_to_bytes(require_block(cipher))
    out = kernels.decrypt_blocks(data[None, :], key.schedule)[0]
    return bytes_to_bits(out)
