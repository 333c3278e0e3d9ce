"""Command line interface.

    padfec sweep --config run.cfg [--system proposed] [--k 116]
                 [--ebn0 3,4,5] [--max-queries 65536] [--seed 7] [--out out.csv]
    padfec repro fig5|fig6|discussion [--out out.csv] [overrides]

Config files are flat key=value text; CLI flags win over file values.
Exit codes: 0 success, 2 configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields, replace

from .harness import (ConfigError, REPRO_CONFIGS, SweepConfig, format_results,
                      retransmission_rate, run_sweep, write_gnuplot_script,
                      write_results)

_BOOL_KEYS = {"noiseless"}
_INT_KEYS = {"payload_bits", "min_block_errors", "max_trials", "max_queries",
             "seed", "workers", "batch_size", "rlc_seed"}
_STR_KEYS = {"pattern_order", "pad_rule", "aes_key", "separate_framing", "out"}


def _parse_ebn0_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip() != "")
    except ValueError as exc:
        raise ConfigError(f"bad ebn0 list {text!r}: {exc}") from None


def _parse_bool(text: str) -> bool:
    if text.lower() in ("1", "true", "yes", "on"):
        return True
    if text.lower() in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"bad boolean value {text!r}")


def load_config_file(path: str) -> dict:
    """Parse a flat key=value config file ('#' starts a comment)."""
    values: dict = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in ("system", "systems"):
            values["systems"] = tuple(s.strip() for s in value.split(",") if s.strip())
        elif key in ("ebn0", "ebn0_db_list"):
            values["ebn0_db_list"] = _parse_ebn0_list(value)
        elif key in _BOOL_KEYS:
            values[key] = _parse_bool(value)
        elif key in _INT_KEYS:
            try:
                values[key] = int(value)
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: {key} must be an integer") from None
        elif key in _STR_KEYS:
            values[key] = value
        else:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
    return values


def _apply_overrides(cfg: SweepConfig, args: argparse.Namespace) -> SweepConfig:
    updates: dict = {}
    if args.system is not None:
        updates["systems"] = tuple(s.strip() for s in args.system.split(",") if s.strip())
    if args.k is not None:
        updates["payload_bits"] = args.k
    if args.ebn0 is not None:
        updates["ebn0_db_list"] = _parse_ebn0_list(args.ebn0)
    for name in ("max_queries", "seed", "workers", "min_block_errors",
                 "max_trials", "batch_size", "rlc_seed", "pattern_order",
                 "pad_rule", "aes_key", "separate_framing", "out"):
        value = getattr(args, name, None)
        if value is not None:
            updates[name] = value
    if getattr(args, "noiseless", False):
        updates["noiseless"] = True
    return replace(cfg, **updates)


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--system", help="comma-separated: baseline,separate,proposed")
    p.add_argument("--k", type=int, help="payload bits (1..127)")
    p.add_argument("--ebn0", help="comma-separated Eb/N0 list in dB")
    p.add_argument("--max-queries", dest="max_queries", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output CSV path")
    p.add_argument("--workers", type=int)
    p.add_argument("--min-block-errors", dest="min_block_errors", type=int)
    p.add_argument("--max-trials", dest="max_trials", type=int)
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--pattern-order", dest="pattern_order",
                   choices=("logistic", "hamming"))
    p.add_argument("--pad-rule", dest="pad_rule")
    p.add_argument("--aes-key", dest="aes_key", help="32 hex characters")
    p.add_argument("--rlc-seed", dest="rlc_seed", type=int)
    p.add_argument("--separate-framing", dest="separate_framing",
                   choices=("equal_rate", "appended_redundancy"))
    p.add_argument("--noiseless", action="store_true", default=False)
    p.add_argument("--gnuplot", action="store_true", default=False,
                   help="also write a gnuplot companion script")
    p.add_argument("--quiet", action="store_true", default=False)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="padfec", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run a configured Monte-Carlo sweep")
    p_sweep.add_argument("--config", help="flat key=value config file")
    _add_common_flags(p_sweep)

    p_repro = sub.add_parser("repro", help="run a canned reproduction config")
    p_repro.add_argument("name", choices=sorted(REPRO_CONFIGS))
    _add_common_flags(p_repro)

    return parser


def _emit(cfg: SweepConfig, args: argparse.Namespace) -> int:
    ledgers = run_sweep(cfg)
    text = format_results(ledgers)
    if cfg.out:
        try:
            write_results(ledgers, cfg.out)
            if args.gnuplot:
                write_gnuplot_script(cfg.out, cfg.out + ".gp")
        except OSError as exc:
            print(f"padfec: I/O error: {exc}", file=sys.stderr)
            return 3
        if not args.quiet:
            print(f"wrote {len(ledgers)} sweep points to {cfg.out}")
    else:
        sys.stdout.write(text)
    if not args.quiet and args.command == "repro" and args.name == "discussion":
        for led in ledgers:
            print(f"retransmission rate {led.system} k={led.payload_bits} "
                  f"@ {led.ebn0_db} dB: {retransmission_rate(led):.3e}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "sweep":
            base = SweepConfig()
            if args.config:
                base = replace(base, **load_config_file(args.config))
            cfg = _apply_overrides(base, args).validate()
        else:
            cfg = _apply_overrides(REPRO_CONFIGS[args.name], args)
            if cfg.out is None:
                cfg = replace(cfg, out=f"{args.name}.csv")
            cfg = cfg.validate()
    except ConfigError as exc:
        print(f"padfec: config error: {exc}", file=sys.stderr)
        return 2
    return _emit(cfg, args)


if __name__ == "__main__":
    sys.exit(main())
