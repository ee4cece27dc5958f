"""
Self-checks run by `sim verify`.

Each suite returns CheckResult rows; the CLI prints them and exits non-zero if
any row failed.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from ..config.config import Config
from .analysis import (
    cpep_paper,
    design_criterion_check,
    q_function,
    worst_case_report,
)
from .channel import apply_channel, sample_awgn, sample_cfr, n0_from_ebn0
from .constellation import (
    build_conventional_pair,
    build_proposed_pair,
    cross_demap,
    energy_per_bit,
    hamming,
    map_bits,
)
from .ber_engine import simulate_block
from .index_codebook import pattern
from .modem import (
    BitMapping,
    GroupBits,
    SchemeConfig,
    demap,
    detect_exhaustive_ml,
    detect_given_pattern,
    detect_low_complexity_ml,
    modulate,
)
from .schemes import SCHEME_IDS, dm_config, get_scheme, spectral_efficiency

logger = logging.getLogger(__name__)

EQUIVALENCE_EBN0_DB = (0.0, 10.0, 20.0, 30.0)

# Energy per bit quoted for the four shipped pairs (n=4, k=2)
QUOTED_EB = {
    "conv-qpsk": 1.8928,
    "conv-16qam": 4.444,
    "prop-qpsk": 1.0,
    "prop-16qam": 2.3333,
}

# Equal minimum intra distance in M_A and M_B; the conventional QPSK M_B is sparser
DESIGN_CRITERION = {
    "conv-qpsk": False,
    "conv-16qam": True,
    "prop-qpsk": True,
    "prop-16qam": True,
}

QUOTED_SPECTRAL_EFFICIENCY = {
    "dm-qpsk": 2.5,
    "dm-16qam": 4.5,
    "ofdm-im-16qam": 2.5,
    "ofdm-16qam": 4.0,
}


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True, eq=False)
class ToyExample:
    """Forced pattern error {1,3} -> {1,2} under zero noise, both bit mappings."""
    bits: str
    x_conv: np.ndarray
    x_prop: np.ndarray
    expected_x_conv: np.ndarray
    expected_x_prop: np.ndarray
    b2_conv_hat: str
    b2_prop_hat: str
    expected_b2_conv_hat: str
    expected_b2_prop_hat: str
    errors_conv: int
    errors_prop: int


def toy_example() -> ToyExample:
    """
    I_A = {1,3}, b1 = 10, b2 = 1011 0000 1111 0111 on the proposed 16QAM pair,
    received through a unit channel and decided under the wrong pattern {1,2}.
    """
    cfg_conv = dm_config(16, "prop", BitMapping.CONVENTIONAL)
    cfg_prop = dm_config(16, "prop", BitMapping.PROPOSED)
    a, b = cfg_conv.pair.a, cfg_conv.pair.b
    bits = GroupBits("10" + "1011" + "0000" + "1111" + "0111")

    h = np.ones(cfg_conv.n, dtype=complex)
    w = np.zeros(cfg_conv.n, dtype=complex)
    forced = pattern(1, 2)

    sent_conv = modulate(bits, cfg_conv)
    sent_prop = modulate(bits, cfg_prop)
    hat_conv = demap(detect_given_pattern(apply_channel(sent_conv.x, h, w), h, cfg_conv, forced), cfg_conv)
    hat_prop = demap(detect_given_pattern(apply_channel(sent_prop.x, h, w), h, cfg_prop, forced), cfg_prop)

    return ToyExample(
        bits=bits.bits,
        x_conv=sent_conv.x,
        x_prop=sent_prop.x,
        expected_x_conv=np.array(
            [map_bits(a, "1011"), map_bits(b, "1111"), map_bits(a, "0000"), map_bits(b, "0111")]
        ),
        expected_x_prop=np.array(
            [map_bits(a, "1011"), map_bits(b, "0000"), map_bits(a, "1111"), map_bits(b, "0111")]
        ),
        b2_conv_hat=hat_conv.b2(cfg_conv),
        b2_prop_hat=hat_prop.b2(cfg_prop),
        expected_b2_conv_hat="1011" + cross_demap(b, a, "1111") + cross_demap(a, b, "0000") + "0111",
        expected_b2_prop_hat="1011" + cross_demap(b, a, "0000") + cross_demap(a, b, "1111") + "0111",
        errors_conv=hamming(bits.bits, hat_conv.bits),
        errors_prop=hamming(bits.bits, hat_prop.bits),
    )


def check_reference_constants() -> List[CheckResult]:
    suite = "constants"
    results = []
    for build in (build_conventional_pair, build_proposed_pair):
        for order in (4, 16):
            pair = build(order)
            p = 2 + 4 * pair.a.bits_per_symbol
            eb = energy_per_bit(pair, 4, 2, p)
            quoted = QUOTED_EB[pair.name]
            results.append(CheckResult(
                suite, f"Eb {pair.name}", abs(eb - quoted) <= 1e-3, f"{eb:.6f} vs {quoted}"
            ))

            report = worst_case_report(pair, 4, 2, p)
            expected_d2 = 2.0 if pair.name.startswith("conv") else float(np.sqrt(2.0))
            ok = abs(report.delta1_factor - 2.0) <= 1e-9 and abs(report.delta2_factor - expected_d2) <= 1e-9
            results.append(CheckResult(
                suite, f"delta factors {pair.name}", ok,
                f"({report.delta1_factor:.12g}, {report.delta2_factor:.12g})",
            ))
            holds = design_criterion_check(pair)
            results.append(CheckResult(
                suite, f"design criterion {pair.name}", holds == DESIGN_CRITERION[pair.name], str(holds)
            ))

    for scheme_id in SCHEME_IDS:
        family = scheme_id if scheme_id.startswith("ofdm") else "-".join(scheme_id.split("-")[:2])
        se = spectral_efficiency(scheme_id)
        expected = QUOTED_SPECTRAL_EFFICIENCY[family]
        results.append(CheckResult(
            suite, f"spectral efficiency {scheme_id}", se == expected, f"{se} vs {expected}"
        ))

    for scheme_id, expected in (("ofdm-im-16qam", 2.0), ("ofdm-16qam", 2.5)):
        eb = get_scheme(scheme_id).eb
        results.append(CheckResult(suite, f"Eb {scheme_id}", abs(eb - expected) <= 1e-12, f"{eb}"))

    q0 = float(q_function(0.0))
    results.append(CheckResult(suite, "Q(0) = 0.5", abs(q0 - 0.5) <= 1e-12, f"{q0!r}"))

    grid = np.linspace(0.0, 5.0, 100)
    cpep = [cpep_paper(d, 10.0, 1.0) for d in grid]
    results.append(CheckResult(
        suite, "CPEP non-increasing in delta", all(b <= a for a, b in zip(cpep, cpep[1:]))
    ))
    return results


def _equivalence_configs() -> List[SchemeConfig]:
    return [dm_config(order, c, BitMapping.CONVENTIONAL) for order in (4, 16) for c in ("conv", "prop")]


def check_detector_equivalence(
    trials: Optional[int] = None,
    trials_16qam: Optional[int] = None,
    seed: Optional[int] = None,
    ebn0_grid: Sequence[float] = EQUIVALENCE_EBN0_DB,
) -> List[CheckResult]:
    """
    Low-complexity and exhaustive ML must return the same pattern and symbols.

    Args:
        trials: Random trials per (pair, Eb/N0) for QPSK pairs
        trials_16qam: Random trials per (pair, Eb/N0) for 16QAM pairs
        seed: Master seed
        ebn0_grid: Eb/N0 points in dB
    """
    trials = Config.VERIFY_TRIALS if trials is None else trials
    trials_16qam = Config.VERIFY_TRIALS_16QAM if trials_16qam is None else trials_16qam
    rng = np.random.default_rng(Config.SEED if seed is None else seed)

    results = []
    for cfg in _equivalence_configs():
        count = trials if cfg.pair.a.order == 4 else trials_16qam
        eb = energy_per_bit(cfg.pair, cfg.n, cfg.k, cfg.p)
        mismatches = 0
        for ebn0_db in ebn0_grid:
            noise = n0_from_ebn0(eb, ebn0_db)
            for _ in range(count):
                bits = GroupBits.from_array(rng.integers(0, 2, size=cfg.p))
                h = sample_cfr(cfg.n, rng).h
                y = apply_channel(modulate(bits, cfg).x, h, sample_awgn(cfg.n, noise, rng))
                fast, fast_pattern = detect_low_complexity_ml(y, h, cfg)
                slow, slow_pattern = detect_exhaustive_ml(y, h, cfg)
                if fast_pattern != slow_pattern or not np.array_equal(fast.x, slow.x):
                    mismatches += 1
        total = count * len(ebn0_grid)
        logger.info(f"Detector equivalence {cfg.pair.name}: {mismatches} mismatches in {total} trials")
        results.append(CheckResult(
            "equivalence", f"low-complexity = exhaustive ML, {cfg.pair.name}",
            mismatches == 0, f"{mismatches}/{total} mismatches",
        ))
    return results


def check_noiseless_round_trips(groups: int = 1000, seed: Optional[int] = None) -> List[CheckResult]:
    """Zero noise through a random channel must reproduce every bit."""
    seed = Config.SEED if seed is None else seed
    results = []
    for point_index, scheme_id in enumerate(SCHEME_IDS):
        counts = simulate_block(scheme_id, 0.0, seed, point_index, 0, groups, noiseless=True)
        results.append(CheckResult(
            "round-trip", f"noiseless {scheme_id}", counts.errors == 0,
            f"{counts.errors} errors in {counts.bits} bits",
        ))

    # Reference single-group path, both bit mappings
    rng = np.random.default_rng(seed)
    for order in (4, 16):
        for c, mapping in (("conv", BitMapping.CONVENTIONAL), ("prop", BitMapping.CONVENTIONAL),
                           ("prop", BitMapping.PROPOSED)):
            cfg = dm_config(order, c, mapping)
            errors = 0
            for _ in range(groups // 10):
                bits = GroupBits.from_array(rng.integers(0, 2, size=cfg.p))
                h = sample_cfr(cfg.n, rng).h
                y = apply_channel(modulate(bits, cfg).x, h, np.zeros(cfg.n, dtype=complex))
                x_hat, _ = detect_low_complexity_ml(y, h, cfg)
                errors += hamming(bits.bits, demap(x_hat, cfg).bits)
            results.append(CheckResult(
                "round-trip", f"reference path {cfg.pair.name} {mapping.value}", errors == 0,
                f"{errors} bit errors",
            ))
    return results


def check_toy_example() -> List[CheckResult]:
    toy = toy_example()
    return [
        CheckResult("toy", "X conventional", bool(np.allclose(toy.x_conv, toy.expected_x_conv, atol=1e-12))),
        CheckResult("toy", "X proposed", bool(np.allclose(toy.x_prop, toy.expected_x_prop, atol=1e-12))),
        CheckResult("toy", "b2 conventional", toy.b2_conv_hat == toy.expected_b2_conv_hat, toy.b2_conv_hat),
        CheckResult("toy", "b2 proposed", toy.b2_prop_hat == toy.expected_b2_prop_hat, toy.b2_prop_hat),
        CheckResult(
            "toy", "proposed errors <= conventional errors", toy.errors_prop <= toy.errors_conv,
            f"{toy.errors_prop} vs {toy.errors_conv}",
        ),
    ]


def run_all(
    trials: Optional[int] = None,
    trials_16qam: Optional[int] = None,
    seed: Optional[int] = None,
) -> List[CheckResult]:
    results = check_reference_constants()
    results += check_detector_equivalence(trials, trials_16qam, seed)
    results += check_noiseless_round_trips(seed=seed)
    results += check_toy_example()
    failed = [r for r in results if not r.passed]
    if failed:
        logger.error(f"{len(failed)} of {len(results)} checks failed: {[r.name for r in failed]}")
    else:
        logger.info(f"All {len(results)} checks passed")
    return results
