#!/usr/bin/env python3
"""
DM-OFDM-IM simulator command line.

Subcommands:
    ber      Monte Carlo BER sweep for one scheme, written as CSV
    analyze  Distance/energy report of the shipped constellation pairs
    verify   Constant, detector-equivalence, round-trip and toy-example checks
    tables   Constellation and index codebook tables
    toy      Forced pattern error example under both bit mappings

Usage:
    python src/scripts/sim.py ber --scheme dm-qpsk-prop-const-prop-map --ebn0 0:5:30
    python src/scripts/sim.py ber --config config/default_plan.env
    python src/scripts/sim.py verify
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

# Add parent path to sys.path
sys.path.append(str(Path(__file__).parent.parent.parent))

from rich.console import Console
from rich.table import Table

from src.config.config import Config
from src.config.logging_config import setup_logging
from src.utils.analysis import (
    cross_demap_statistics,
    detector_complexity,
    ofdm_im_reference_report,
    shipped_pair_reports,
)
from src.utils.ber_engine import BerRecord, SimulationPlan, run_sweep
from src.utils.constellation import build_conventional_pair, build_proposed_pair, qam16_base, qpsk_base
from src.utils.index_codebook import combinadic_codebook, paper_codebook
from src.utils.modem import BitMapping
from src.utils.results_io import (
    format_pair_reports,
    load_config,
    make_plan,
    parse_ebn0_grid,
    write_config,
    write_csv,
    write_pair_reports,
)
from src.utils.schemes import SCHEME_IDS, dm_config, get_scheme, spectral_efficiency
from src.utils.verification import run_all, toy_example

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sim",
        description="Dual-mode OFDM with index modulation: BER simulation and constellation analysis"
    )
    parser.add_argument(
        "--log-level",
        type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        default=Config.LOG_LEVEL.upper(),
        help=f"Console log level (default: {Config.LOG_LEVEL})"
    )
    parser.add_argument(
        "--log-dir",
        default=Config.LOG_DIR,
        help=f"Directory for app.log, error.log and simulation.log (default: {Config.LOG_DIR})"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ber = sub.add_parser("ber", help="Run a BER sweep")
    ber.add_argument("--scheme", choices=SCHEME_IDS, help="Scheme id")
    ber.add_argument("--ebn0", help="Eb/N0 grid in dB, start:step:stop or a comma list")
    ber.add_argument(
        "--max-groups", type=int,
        help=f"Maximum groups per point (default: {Config.MAX_GROUPS})"
    )
    ber.add_argument(
        "--target-errors", type=int,
        help=f"Stop a point after this many bit errors (default: {Config.TARGET_ERRORS})"
    )
    ber.add_argument("--seed", type=int, help=f"Master seed (default: {Config.SEED})")
    ber.add_argument("--workers", type=int, help=f"Worker processes (default: {Config.WORKERS})")
    ber.add_argument(
        "--block-groups", type=int,
        help=f"Groups per trial block (default: {Config.BLOCK_GROUPS})"
    )
    ber.add_argument("--noiseless", action="store_true", default=None, help="Skip AWGN")
    ber.add_argument("--timing", action="store_true", default=None, help="Record elapsed seconds")
    ber.add_argument(
        "--breakdown", action="store_true", default=None,
        help="Add index_bit_errors and pattern_errors columns"
    )
    ber.add_argument(
        "--out", "-o",
        help=f"Output CSV path (default: {Config.RESULTS_DIR}/<scheme>.csv)"
    )
    ber.add_argument("--config", "-c", help="Plan file (key=value); its keys override flags")
    ber.add_argument("--write-config", help="Also write the effective plan to this path")

    analyze = sub.add_parser("analyze", help="Print the pair report table")
    analyze.add_argument("--out", "-o", help="CSV output path (default: print CSV to stdout)")

    verify = sub.add_parser("verify", help="Run the self-check suites")
    verify.add_argument(
        "--trials", type=int, default=Config.VERIFY_TRIALS,
        help=f"Equivalence trials per QPSK pair and Eb/N0 (default: {Config.VERIFY_TRIALS})"
    )
    verify.add_argument(
        "--trials-16qam", type=int, default=Config.VERIFY_TRIALS_16QAM,
        help=f"Equivalence trials per 16QAM pair and Eb/N0 (default: {Config.VERIFY_TRIALS_16QAM})"
    )
    verify.add_argument("--seed", type=int, default=Config.SEED, help=f"Seed (default: {Config.SEED})")

    sub.add_parser("tables", help="Print constellation and codebook tables")
    sub.add_parser("toy", help="Print the forced pattern error example")
    return parser


def plan_from_args(args: argparse.Namespace) -> SimulationPlan:
    """CLI flags over Config defaults, plan file keys over both."""
    values: Dict[str, Any] = {}
    flag_fields = {
        "scheme": "scheme",
        "max_groups": "max_groups",
        "target_errors": "target_errors",
        "seed": "seed",
        "workers": "workers",
        "block_groups": "block_groups",
        "noiseless": "noiseless",
        "timing": "timing",
        "breakdown": "breakdown",
        "out": "out",
    }
    for attr, field in flag_fields.items():
        value = getattr(args, attr)
        if value is not None:
            values[field] = value
    if args.ebn0 is not None:
        values["ebn0_db"] = parse_ebn0_grid(args.ebn0)

    if args.config:
        return load_config(args.config, base=values)
    return make_plan(values)


def print_summary(records: List[BerRecord], console: Console) -> None:
    """Print a summary of the sweep."""
    console.print("\n" + "=" * 50)
    console.print("BER SWEEP SUMMARY")
    console.print("=" * 50)

    table = Table(show_header=True)
    for column in ("Eb/N0 [dB]", "groups", "bits", "errors", "BER", "std err", ""):
        table.add_column(column, justify="right")
    for r in records:
        table.add_row(
            f"{r.ebn0_db:g}", str(r.groups), str(r.bits), str(r.errors),
            f"{r.ber:.4e}", f"{r.standard_error:.2e}", "censored" if r.censored else "",
        )
    console.print(table)


def cmd_ber(args: argparse.Namespace, console: Console) -> int:
    plan = plan_from_args(args)
    out = Path(plan.out or Path(Config.RESULTS_DIR) / f"{plan.scheme}.csv")
    logger.info(f"Configuration: {Config.to_dict()}")
    logger.info(
        f"Scheme {plan.scheme}: Eb = {get_scheme(plan.scheme).eb:.6g}, "
        f"{spectral_efficiency(plan.scheme)} bits/s/Hz"
    )

    if args.write_config:
        write_config(plan, args.write_config)
        logger.info(f"Plan saved to: {args.write_config}")

    records = run_sweep(plan)
    write_csv(records, out, breakdown=plan.breakdown)
    logger.info(f"Results saved to: {out}")
    print_summary(records, console)
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace, console: Console) -> int:
    rows = shipped_pair_reports()
    rows.append(("ofdm-im-qpsk", ofdm_im_reference_report(qpsk_base())))
    rows.append(("ofdm-im-16qam", ofdm_im_reference_report(qam16_base())))

    table = Table(title="Constellation pair report", show_header=True)
    for column in ("pair", "delta1", "delta2", "Eb", "d1/sqrt(Eb)", "d2/sqrt(Eb)", "d1/Eb", "d2/Eb"):
        table.add_column(column, justify="right")
    for name, r in rows:
        table.add_row(
            name, f"{r.delta1_factor:.6g}", f"{r.delta2_factor:.6g}", f"{r.eb:.6g}",
            f"{r.normalized_d1:.6g}", f"{r.normalized_d2:.6g}",
            f"{r.cpep_metric_d1:.6g}", f"{r.cpep_metric_d2:.6g}",
        )
    console.print(table)

    extra = Table(title="Cross decision damage and detector cost", show_header=True)
    for column in ("pair", "A->B bits", "B->A bits", "A->B nbr", "B->A nbr", "exhaustive", "low-complexity"):
        extra.add_column(column, justify="right")
    for build in (build_conventional_pair, build_proposed_pair):
        for order in (4, 16):
            pair = build(order)
            stats = cross_demap_statistics(pair)
            exhaustive, low = detector_complexity(
                dm_config(order, pair.name.split("-")[0], BitMapping.CONVENTIONAL)
            )
            extra.add_row(
                pair.name, f"{stats.a_to_b:.4g}", f"{stats.b_to_a:.4g}",
                f"{stats.neighbor_a_to_b:.4g}", f"{stats.neighbor_b_to_a:.4g}",
                str(exhaustive), str(low),
            )
    console.print(extra)

    if args.out:
        write_pair_reports(rows, args.out)
        logger.info(f"Report saved to: {args.out}")
    else:
        console.print(format_pair_reports(rows), end="", markup=False, highlight=False, soft_wrap=True)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, console: Console) -> int:
    results = run_all(trials=args.trials, trials_16qam=args.trials_16qam, seed=args.seed)

    table = Table(title="Verification", show_header=True)
    for column in ("suite", "check", "result", "detail"):
        table.add_column(column)
    for r in results:
        table.add_row(r.suite, r.name, "PASS" if r.passed else "FAIL", r.detail)
    console.print(table)

    failed = sum(not r.passed for r in results)
    console.print(f"{len(results) - failed} passed, {failed} failed")
    return EXIT_FAILED if failed else EXIT_OK


def cmd_tables(args: argparse.Namespace, console: Console) -> int:
    for build in (build_conventional_pair, build_proposed_pair):
        for order in (4, 16):
            pair = build(order)
            console.print(f"## {pair.name}", markup=False)
            console.print(pair.to_table(), markup=False, highlight=False, soft_wrap=True)
            console.print()
    for codebook in (paper_codebook(), combinadic_codebook(4, 2)):
        console.print(codebook.to_table(), markup=False, highlight=False, soft_wrap=True)
        console.print()
    return EXIT_OK


def cmd_toy(args: argparse.Namespace, console: Console) -> int:
    toy = toy_example()
    rows = [
        ("input bits", toy.bits),
        ("X conventional", " ".join(f"{z:.6g}" for z in toy.x_conv)),
        ("X proposed", " ".join(f"{z:.6g}" for z in toy.x_prop)),
        ("b2 hat conventional", toy.b2_conv_hat),
        ("b2 hat proposed", toy.b2_prop_hat),
        ("bit errors conventional", str(toy.errors_conv)),
        ("bit errors proposed", str(toy.errors_prop)),
    ]
    table = Table(title="I_A = {1,3} detected as {1,2}, no noise", show_header=False)
    table.add_column("")
    table.add_column("")
    for name, value in rows:
        table.add_row(name, value)
    console.print(table)
    return EXIT_OK


COMMANDS = {
    "ber": cmd_ber,
    "analyze": cmd_analyze,
    "verify": cmd_verify,
    "tables": cmd_tables,
    "toy": cmd_toy,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main function."""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level, args.log_dir)
    console = Console()

    try:
        Config.validate()
        return COMMANDS[args.command](args, console)
    except ValueError as e:
        # ConfigError, ModemError and the other input errors all derive from ValueError
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
