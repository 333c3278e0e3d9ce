"""BPSK over AWGN with Eb/N0 scaling normalized per information bit."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SoftVector:
    """Received symbol amplitudes; reliability of bit i is |observations[i]|."""

    observations: np.ndarray
    noise_sigma: float

    @property
    def reliabilities(self) -> np.ndarray:
        return np.abs(self.observations)


@dataclass(frozen=True)
class ChannelConfig:
    ebn0_db: float
    code_rate: float
    seed: int = 0

    def __post_init__(self):
        if not math.isfinite(self.ebn0_db):
            raise ValueError("ebn0_db must be finite")
        if not 0.0 < self.code_rate <= 1.0:
            raise ValueError("code_rate must be in (0, 1]")


def noise_sigma(ebn0_db: float, code_rate: float) -> float:
    """Noise std dev for unit-energy BPSK: sigma^2 = 1/(2 * rate * Eb/N0)."""
    ebn0 = 10.0 ** (ebn0_db / 10.0)
    return math.sqrt(1.0 / (2.0 * code_rate * ebn0))


def q_function(x: float) -> float:
    """Gaussian tail probability Q(x)."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def bpsk_bit_error_rate(ebn0_db: float, code_rate: float) -> float:
    """Per-bit hard-decision flip probability Q(sqrt(2 * rate * Eb/N0))."""
    return q_function(math.sqrt(2.0 * code_rate * 10.0 ** (ebn0_db / 10.0)))


def modulate(bits: np.ndarray) -> np.ndarray:
    """Bit 0 -> +1.0, bit 1 -> -1.0 (unit symbol energy)."""
    return 1.0 - 2.0 * np.asarray(bits, dtype=np.float64)


def add_noise(symbols: np.ndarray, cfg: ChannelConfig,
              rng: np.random.Generator | None = None) -> SoftVector:
    """Add i.i.d. zero-mean Gaussian noise; deterministic given the stream."""
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    sigma = noise_sigma(cfg.ebn0_db, cfg.code_rate)
    obs = symbols + sigma * rng.standard_normal(symbols.shape)
    return SoftVector(observations=obs, noise_sigma=sigma)


def hard_decision(soft: SoftVector) -> np.ndarray:
    """Bit i = 0 if observation >= 0 else 1 (exact zero decides 0)."""
    return (soft.observations < 0).astype(np.uint8)
