"""Candidate noise-effect patterns in nondecreasing logistic-weight order.

Reliability ranks run 1..n from least to most reliable bit. A pattern is the
set of ranks to flip; its logistic weight is the rank sum, so enumerating
patterns weight by weight means enumerating partitions of the weight into
distinct parts (see kernels.pattern_advance). A Hamming-order mode (flip
count, then lexicographic) covers hard-detection GRAND for the baselines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels

DEFAULT_QUERY_BUDGET = 1 << 16

_ORDER_MODES = {"logistic": kernels.ORDER_LOGISTIC, "hamming": kernels.ORDER_HAMMING}


@dataclass(frozen=True)
class ReliabilityOrder:
    """permutation[r-1] is the bit position holding reliability rank r."""

    permutation: np.ndarray
    reliabilities: np.ndarray


def rank_by_reliability(soft) -> ReliabilityOrder:
    """Sort positions by ascending |observation|, ties by ascending position."""
    obs = np.asarray(getattr(soft, "observations", soft), dtype=np.float64)
    rel = np.abs(obs)
    perm = np.argsort(rel, kind="stable").astype(np.int64)
    return ReliabilityOrder(permutation=perm, reliabilities=rel)


@dataclass(frozen=True)
class ErrorPattern:
    """Ranks to flip, strictly increasing; empty tuple is the zero guess."""

    flip_ranks: tuple[int, ...]

    @property
    def logistic_weight(self) -> int:
        return sum(self.flip_ranks)

    @property
    def hamming_weight(self) -> int:
        return len(self.flip_ranks)


class PatternGenerator:
    """Resumable pattern cursor; emits each subset of {1..n} exactly once.

    Successive patterns have nondecreasing weight (logistic or Hamming per
    ``order``). Iteration stops after ``max_queries`` emissions or once the
    whole pattern space is exhausted.
    """

    def __init__(self, n: int, max_queries: int = DEFAULT_QUERY_BUDGET,
                 order: str = "logistic"):
        if n < 1:
            raise ValueError("n must be positive")
        if order not in _ORDER_MODES:
            raise ValueError(f"unknown pattern order {order!r}")
        self.n = n
        self.max_queries = max_queries
        self.order = order
        self._mode = _ORDER_MODES[order]
        self._parts = np.zeros(n, dtype=np.int64)
        self._count = 0
        self._weight = 0
        self._emitted = 0
        self._started = False

    def __iter__(self):
        return self

    def __next__(self) -> ErrorPattern:
        if self._emitted >= self.max_queries:
            raise StopIteration
        if self._started:
            count, weight = kernels.pattern_advance(
                self._parts, self._count, self._weight, self.n, self._mode)
            if count < 0:
                raise StopIteration
            self._count, self._weight = count, weight
        else:
            self._started = True
        self._emitted += 1
        ranks = tuple(sorted(int(r) for r in self._parts[: self._count]))
        return ErrorPattern(flip_ranks=ranks)


def next_pattern(gen: PatternGenerator) -> ErrorPattern | None:
    """Next pattern, or None once the generator is exhausted."""
    try:
        return next(gen)
    except StopIteration:
        return None


def apply_pattern(hard: np.ndarray, pattern: ErrorPattern,
                  order: ReliabilityOrder) -> np.ndarray:
    """XOR the pattern into a hard-decision word via the rank permutation."""
    out = np.asarray(hard, dtype=np.uint8).copy()
    for r in pattern.flip_ranks:
        out[order.permutation[r - 1]] ^= 1
    return out
