"""Monte-Carlo sweep engine, statistics, and CSV output.

Trials are processed in fixed-size batches. Batch b of a sweep point draws
its payloads and noise from a Philox stream keyed by (master seed, system,
point index, b), and batches are committed in index order, so every number
in the output is a function of the configuration alone, at any worker
count. Workers are threads: the decode kernels release the GIL under the
numba backend.

BER accounting: the ``ber`` column counts bit errors of the decided channel
word against the transmitted word (the convention behind the reference
curves); ``payload_ber`` additionally counts post-decryption payload bit
errors, where a scrambled block contributes about k/2.
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .aes import BLOCK_BITS, derive_schedule
from .channel import noise_sigma
from .codec import APPENDED_REDUNDANCY, EQUAL_RATE, generate_rlc
from .orbgrand import DEFAULT_QUERY_BUDGET

SYSTEMS = ("baseline", "separate", "proposed")

DEFAULT_KEY_HEX = "000102030405060708090a0b0c0d0e0f"


class ConfigError(ValueError):
    """Invalid sweep configuration; rejected before any trial runs."""


@dataclass(frozen=True)
class SweepConfig:
    systems: tuple[str, ...] = ("proposed",)
    payload_bits: int = 116
    ebn0_db_list: tuple[float, ...] = (5.5,)
    min_block_errors: int = 100
    max_trials: int = 10_000_000
    max_queries: int = DEFAULT_QUERY_BUDGET
    seed: int = 1
    workers: int = 1
    batch_size: int = 4096
    pattern_order: str = "logistic"
    pad_rule: str = "zeros"
    aes_key: str = DEFAULT_KEY_HEX
    rlc_seed: int = 1
    separate_framing: str = EQUAL_RATE
    noiseless: bool = False
    out: str | None = None

    def validate(self) -> "SweepConfig":
        if not self.systems:
            raise ConfigError("no systems selected")
        for s in self.systems:
            if s not in SYSTEMS:
                raise ConfigError(f"unknown system {s!r}; choose from {SYSTEMS}")
        if not 1 <= self.payload_bits < BLOCK_BITS:
            raise ConfigError("payload_bits must be in [1, 128)")
        if not self.ebn0_db_list:
            raise ConfigError("empty ebn0_db_list")
        if any(not math.isfinite(e) for e in self.ebn0_db_list):
            raise ConfigError("ebn0_db values must be finite")
        if self.min_block_errors < 1:
            raise ConfigError("min_block_errors must be >= 1")
        if self.max_trials < self.min_block_errors:
            raise ConfigError("max_trials must be >= min_block_errors")
        if self.max_queries < 0:
            raise ConfigError("max_queries must be >= 0")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.batch_size < 1:
            raise ConfigError("batch_size must be >= 1")
        if self.pattern_order not in ("logistic", "hamming"):
            raise ConfigError("pattern_order must be logistic or hamming")
        if self.separate_framing not in (EQUAL_RATE, APPENDED_REDUNDANCY):
            raise ConfigError("separate_framing must be equal_rate or appended_redundancy")
        try:
            derive_schedule(self.aes_key)
        except ValueError as exc:
            raise ConfigError(f"bad aes_key: {exc}") from None
        return self


@dataclass
class TrialLedger:
    """Accumulated counts for one (system, k, Eb/N0) sweep point."""

    system: str
    n_transmitted: int
    payload_bits: int
    ebn0_db: float
    seed: int
    trials: int = 0
    block_errors: int = 0
    bit_errors: int = 0
    payload_bit_errors: int = 0
    abandoned: int = 0
    undetected: int = 0
    total_queries: int = 0
    stop_reason: str = ""

    @property
    def total_bits(self) -> int:
        return self.trials * self.n_transmitted

    @property
    def total_payload_bits(self) -> int:
        return self.trials * self.payload_bits

    @property
    def ber(self) -> float:
        return self.bit_errors / self.total_bits if self.trials else 0.0

    @property
    def bler(self) -> float:
        return self.block_errors / self.trials if self.trials else 0.0

    @property
    def payload_ber(self) -> float:
        return self.payload_bit_errors / self.total_payload_bits if self.trials else 0.0

    @property
    def avg_queries(self) -> float:
        return self.total_queries / self.trials if self.trials else 0.0

    def ber_interval(self) -> tuple[float, float]:
        return wilson_interval(self.bit_errors, self.total_bits)

    def bler_interval(self) -> tuple[float, float]:
        return wilson_interval(self.block_errors, self.trials)


def wilson_interval(successes: int, trials: int, z: float = 1.959964) -> tuple[float, float]:
    """Wilson score 95% interval for a binomial proportion."""
    if trials == 0:
        return 0.0, 1.0
    p = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def retransmission_rate(ledger: TrialLedger) -> float:
    """Rate of blocks triggering a retransmission request: the BLER."""
    return ledger.bler


def goodput_model(ledger: TrialLedger, framing: str = EQUAL_RATE) -> float:
    """Delivered payload bits per channel use: k (1 - BLER) / n_transmitted."""
    k = ledger.payload_bits
    if framing == EQUAL_RATE:
        n_tx = BLOCK_BITS
    elif framing == APPENDED_REDUNDANCY:
        n_tx = BLOCK_BITS + (BLOCK_BITS - k)
    else:
        raise ValueError(f"unknown framing {framing!r}")
    return k * (1.0 - ledger.bler) / n_tx


# ---------------------------------------------------------------------------
# Per-point simulation context

class _PointContext:
    """Precomputed constants shared by every batch of one sweep point."""

    def __init__(self, system: str, cfg: SweepConfig, ebn0_db: float, point_idx: int):
        from .padding import PaddingSpec

        self.system = system
        self.cfg = cfg
        self.ebn0_db = ebn0_db
        self.point_idx = point_idx
        self.k = cfg.payload_bits
        self.spec = PaddingSpec(payload_bits=self.k, pad_rule=cfg.pad_rule)
        self.key = derive_schedule(cfg.aes_key)
        self.pad_mask, self.pad_expect = self.spec.pad_check_bytes()
        self.payload_mask = self.spec.payload_mask_bytes()
        self.pad_bits = self.spec.pad_bits()
        self.mode = kernels.ORDER_LOGISTIC if cfg.pattern_order == "logistic" \
            else kernels.ORDER_HAMMING

        if system == "separate":
            if cfg.separate_framing == EQUAL_RATE:
                self.code = generate_rlc(BLOCK_BITS, self.k, cfg.rlc_seed)
            else:
                self.code = generate_rlc(2 * BLOCK_BITS - self.k, BLOCK_BITS, cfg.rlc_seed)
            self.n_tx = self.code.n
            self.hcols = self.code.h_column_masks()
            self.parity = self.code.generator[:, self.code.k:]
        else:
            self.code = None
            self.n_tx = BLOCK_BITS

        self.rate = self.k / self.n_tx
        self.sigma = 0.0 if cfg.noiseless else noise_sigma(ebn0_db, self.rate)

    def rng_for_batch(self, batch_idx: int) -> np.random.Generator:
        # keyed per (point, batch) but not per system: the systems are
        # compared on common channel realizations, which sharpens curve
        # comparisons without touching the marginal statistics
        seq = np.random.SeedSequence(
            entropy=self.cfg.seed,
            spawn_key=(self.point_idx, batch_idx))
        return np.random.Generator(np.random.Philox(seq))

    def run_batch(self, batch_idx: int, size: int) -> dict:
        rng = self.rng_for_batch(batch_idx)
        k = self.k
        payloads = rng.integers(0, 2, size=(size, k), dtype=np.uint8)

        if self.system == "separate":
            msg = payloads if self.code.k == k else None
            if msg is None:
                # appended_redundancy: encode the ciphertext
                plain_bits = np.concatenate(
                    [payloads, np.broadcast_to(self.pad_bits, (size, len(self.pad_bits)))],
                    axis=1)
                plain_bytes = np.packbits(plain_bits, axis=1)
                cipher_bytes = kernels.encrypt_blocks(plain_bytes, self.key.schedule)
                msg = np.unpackbits(cipher_bytes, axis=1)
            parity_bits = (msg.astype(np.int64) @ self.parity.astype(np.int64)) % 2
            tx_bits = np.concatenate([msg, parity_bits.astype(np.uint8)], axis=1)
        else:
            plain_bits = np.concatenate(
                [payloads, np.broadcast_to(self.pad_bits, (size, len(self.pad_bits)))],
                axis=1)
            plain_bytes = np.packbits(plain_bits, axis=1)
            tx_bytes = kernels.encrypt_blocks(plain_bytes, self.key.schedule)
            tx_bits = np.unpackbits(tx_bytes, axis=1)

        symbols = 1.0 - 2.0 * tx_bits.astype(np.float64)
        if self.sigma > 0.0:
            obs = symbols + self.sigma * rng.standard_normal(symbols.shape)
        else:
            obs = symbols
        hard_bits = (obs < 0).astype(np.uint8)

        out = {"trials": size}
        if self.system == "baseline":
            diff = hard_bits != tx_bits
            errs = diff.any(axis=1)
            out["block_errors"] = int(errs.sum())
            out["bit_errors"] = int(diff.sum())
            out["undetected"] = out["block_errors"]
            out["abandoned"] = 0
            out["total_queries"] = size
            pay_err = 0
            if out["block_errors"]:
                hard_bytes = np.packbits(hard_bits[errs], axis=1)
                plains = kernels.decrypt_blocks(hard_bytes, self.key.schedule)
                plain_hat = np.unpackbits(plains, axis=1)[:, :k]
                pay_err = int((plain_hat != payloads[errs]).sum())
            out["payload_bit_errors"] = pay_err
            return out

        perms = np.argsort(np.abs(obs), axis=1, kind="stable").astype(np.int64)
        if self.system == "proposed":
            hard_bytes = np.packbits(hard_bits, axis=1)
            res = kernels.joint_decode_batch(
                hard_bytes, perms, self.key.schedule, self.pad_mask,
                self.pad_expect, self.payload_mask, plain_bytes, tx_bytes,
                self.cfg.max_queries, self.mode)
            queries, block_err, undet, aband, chan_err, pay_err = res
            out["payload_bit_errors"] = int(pay_err.sum())
        else:  # separate
            res = kernels.syndrome_decode_batch(
                hard_bits, perms, self.hcols, tx_bits, self.code.k,
                self.cfg.max_queries, self.mode)
            queries, block_err, undet, aband, chan_err, decided_msg = res
            if self.code.k == k:
                pay = int((decided_msg != payloads).sum())
            else:
                msg_bytes = np.packbits(decided_msg, axis=1)
                plains = kernels.decrypt_blocks(msg_bytes, self.key.schedule)
                plain_hat = np.unpackbits(plains, axis=1)[:, :k]
                pay = int((plain_hat != payloads).sum())
            out["payload_bit_errors"] = pay
        out["block_errors"] = int(block_err.sum())
        out["bit_errors"] = int(chan_err.sum())
        out["undetected"] = int(undet.sum())
        out["abandoned"] = int(aband.sum())
        out["total_queries"] = int(queries.sum())
        return out


def _run_point(ctx: _PointContext, pool: ThreadPoolExecutor | None) -> TrialLedger:
    cfg = ctx.cfg
    ledger = TrialLedger(system=ctx.system, n_transmitted=ctx.n_tx,
                         payload_bits=ctx.k, ebn0_db=ctx.ebn0_db, seed=cfg.seed)

    def batch_sizes():
        done = 0
        idx = 0
        while done < cfg.max_trials:
            size = min(cfg.batch_size, cfg.max_trials - done)
            yield idx, size
            done += size
            idx += 1

    def commit(res: dict) -> bool:
        ledger.trials += res["trials"]
        ledger.block_errors += res["block_errors"]
        ledger.bit_errors += res["bit_errors"]
        ledger.payload_bit_errors += res["payload_bit_errors"]
        ledger.abandoned += res["abandoned"]
        ledger.undetected += res["undetected"]
        ledger.total_queries += res["total_queries"]
        return ledger.block_errors >= cfg.min_block_errors

    stopped = False
    if pool is None:
        for idx, size in batch_sizes():
            if commit(ctx.run_batch(idx, size)):
                stopped = True
                break
    else:
        # Submit speculatively, commit strictly in index order; results from
        # batches past the stop point are discarded, so the committed prefix
        # is identical at any worker count.
        window = cfg.workers + 2
        pending: deque = deque()
        gen = batch_sizes()
        exhausted = False
        while True:
            while not exhausted and len(pending) < window:
                try:
                    idx, size = next(gen)
                except StopIteration:
                    exhausted = True
                    break
                pending.append(pool.submit(ctx.run_batch, idx, size))
            if not pending:
                break
            res = pending.popleft().result()
            if commit(res):
                stopped = True
                break
        for fut in pending:
            fut.cancel()

    ledger.stop_reason = "block_errors" if stopped else "max_trials"
    return ledger


def run_sweep(cfg: SweepConfig) -> list[TrialLedger]:
    """Run every (system, Eb/N0) point of the sweep; deterministic in cfg."""
    cfg = cfg.validate()
    ledgers: list[TrialLedger] = []
    pool = ThreadPoolExecutor(max_workers=cfg.workers) if cfg.workers > 1 else None
    try:
        for system in cfg.systems:
            for point_idx, ebn0 in enumerate(cfg.ebn0_db_list):
                ctx = _PointContext(system, cfg, ebn0, point_idx)
                ledgers.append(_run_point(ctx, pool))
    finally:
        if pool is not None:
            pool.shutdown(wait=False)
    return ledgers


# ---------------------------------------------------------------------------
# Output

CSV_COLUMNS = (
    "system", "n", "k", "ebn0_db", "trials", "block_errors", "bit_errors",
    "ber", "bler", "avg_queries", "abandoned", "undetected", "seed",
    "ber_lo", "ber_hi", "bler_lo", "bler_hi",
    "payload_bit_errors", "payload_ber", "stop_reason",
)


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".8g")
    return str(x)


def format_results(ledgers: list[TrialLedger]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for led in ledgers:
        ber_lo, ber_hi = led.ber_interval()
        bler_lo, bler_hi = led.bler_interval()
        row = (led.system, led.n_transmitted, led.payload_bits, led.ebn0_db,
               led.trials, led.block_errors, led.bit_errors, led.ber, led.bler,
               led.avg_queries, led.abandoned, led.undetected, led.seed,
               ber_lo, ber_hi, bler_lo, bler_hi,
               led.payload_bit_errors, led.payload_ber, led.stop_reason)
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def write_results(ledgers: list[TrialLedger], path: str) -> None:
    """CSV, one row per sweep point, byte-identical for identical configs."""
    text = format_results(ledgers)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def write_gnuplot_script(csv_path: str, script_path: str) -> None:
    """Companion gnuplot script plotting BER and BLER against Eb/N0."""
    lines = [
        "set datafile separator ','",
        "set logscale y",
        "set xlabel 'Eb/N0 (dB)'",
        "set key outside",
        "set terminal pngcairo size 1200,500",
        f"set output '{csv_path}.png'",
        "set multiplot layout 1,2",
        "set ylabel 'BER'",
        "plot for [s in 'baseline separate proposed'] "
        f"'{csv_path}' using 4:($1 eq s ? $8 : NaN) with linespoints title s",
        "set ylabel 'BLER'",
        "plot for [s in 'baseline separate proposed'] "
        f"'{csv_path}' using 4:($1 eq s ? $9 : NaN) with linespoints title s",
        "unset multiplot",
    ]
    with open(script_path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Canned paper-reproduction configs

REPRO_CONFIGS = {
    # 12 padding bits: BER/BLER curves for all three systems
    "fig5": SweepConfig(
        systems=("baseline", "separate", "proposed"),
        payload_bits=116,
        ebn0_db_list=tuple(x / 2.0 for x in range(6, 20)),  # 3.0 .. 9.5
        min_block_errors=100,
        max_trials=2_000_000,
        seed=20260811,
    ),
    # 8 padding bits
    "fig6": SweepConfig(
        systems=("baseline", "separate", "proposed"),
        payload_bits=120,
        ebn0_db_list=tuple(x / 2.0 for x in range(6, 19)),  # 3.0 .. 9.0
        min_block_errors=100,
        max_trials=2_000_000,
        seed=20260811,
    ),
    # retransmission-rate point at 7.5 dB with 12 padding bits
    "discussion": SweepConfig(
        systems=("baseline", "proposed"),
        payload_bits=116,
        ebn0_db_list=(7.5,),
        min_block_errors=50,
        max_trials=5_000_000,
        seed=20260811,
    ),
}
