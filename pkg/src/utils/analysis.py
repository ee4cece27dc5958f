"""
Theory-side metrics for constellation pairs.

The conditional pairwise error probability is evaluated exactly as
Q(delta * SNR / Eb). That argument is not the textbook Q(delta / sqrt(2 N0))
form; see docs/README.md. The BER engine never uses it.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Dict, List, Tuple

import numpy as np
from scipy.special import erfc

from .constellation import (
    Constellation,
    ConstellationPair,
    build_conventional_pair,
    build_proposed_pair,
    cross_demap,
    energy_per_bit,
    hamming,
    min_inter_distance,
    min_intra_distance,
)
from .index_codebook import index_bits_for
from .modem import SchemeConfig, search_space_size

logger = logging.getLogger(__name__)

DESIGN_TOLERANCE = 1e-9


class AnalysisError(ValueError):
    """Raised for invalid metric inputs."""
    pass


@dataclass(frozen=True)
class PairReport:
    """Channel-free distance factors and energy of one pair."""
    delta1_factor: float
    delta2_factor: float
    eb: float
    normalized_d1: float
    normalized_d2: float
    cpep_metric_d1: float
    cpep_metric_d2: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class CrossDemapStats:
    """
    Label damage when a symbol is decided in the wrong constellation.

    a_to_b and b_to_a use the deterministic hard decision of cross_demap (ties
    to the lowest index). The neighbor_* fields average the Hamming distance over
    every nearest point of the other constellation, which is what a noisy
    decision sees on average.
    """
    a_to_b: float
    b_to_a: float
    neighbor_a_to_b: float
    neighbor_b_to_a: float


def q_function(x):
    """Gaussian tail probability, Q(x) = erfc(x / sqrt(2)) / 2."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / np.sqrt(2.0))


def cpep_paper(delta: float, snr_linear: float, eb: float) -> float:
    """
    Q(delta * SNR / Eb).

    Raises:
        AnalysisError: If eb <= 0, or delta / snr_linear are negative
    """
    if not eb > 0:
        raise AnalysisError(f"Energy per bit must be positive, got {eb}")
    if delta < 0 or snr_linear < 0:
        raise AnalysisError(f"delta and SNR must be non-negative, got {delta}, {snr_linear}")
    return float(q_function(delta * snr_linear / eb))


def _report(delta1: float, delta2: float, eb: float) -> PairReport:
    if not eb > 0:
        raise AnalysisError(f"Energy per bit must be positive, got {eb}")
    root = np.sqrt(eb)
    return PairReport(
        delta1_factor=delta1,
        delta2_factor=delta2,
        eb=eb,
        normalized_d1=delta1 / root,
        normalized_d2=delta2 / root,
        cpep_metric_d1=delta1 / eb,
        cpep_metric_d2=delta2 / eb,
    )


def worst_case_report(pair: ConstellationPair, n: int, k: int, p: int) -> PairReport:
    """
    Worst-case symbol-error (delta1) and index-error (delta2) distance factors.

    Args:
        pair: Constellation pair
        n: Group length
        k: Mode-A subcarriers per group
        p: Bits per group
    """
    delta1 = min(min_intra_distance(pair.a), min_intra_distance(pair.b))
    delta2 = min_inter_distance(pair)
    return _report(delta1, delta2, energy_per_bit(pair, n, k, p))


def ofdm_im_reference_report(base: Constellation, n: int = 4, k: int = 2) -> PairReport:
    """OFDM-IM with `base` on the k active subcarriers and 0 elsewhere."""
    p = index_bits_for(n, k) + k * base.bits_per_symbol
    eb = k * float(np.mean(np.abs(base.array) ** 2)) / p
    return _report(min_intra_distance(base), float(np.min(np.abs(base.array))), eb)


def design_criterion_check(pair: ConstellationPair) -> bool:
    """True iff M_A and M_B share the same minimum intra distance."""
    return abs(min_intra_distance(pair.a) - min_intra_distance(pair.b)) <= DESIGN_TOLERANCE


def cross_demap_statistics(pair: ConstellationPair) -> CrossDemapStats:
    if pair.a.order != pair.b.order:
        raise AnalysisError("Cross demapping statistics need M_A = M_B")

    def mean_distance(c_from: Constellation, c_to: Constellation) -> float:
        return float(np.mean([hamming(x, cross_demap(c_from, c_to, x)) for x in c_from.labels]))

    def neighbor_distance(c_from: Constellation, c_to: Constellation) -> float:
        per_point = []
        for label, point in zip(c_from.labels, c_from.array):
            dist = np.abs(c_to.array - point)
            nearest = np.flatnonzero(dist <= dist.min() + 1e-9)
            per_point.append(np.mean([hamming(label, c_to.labels[j]) for j in nearest]))
        return float(np.mean(per_point))

    return CrossDemapStats(
        a_to_b=mean_distance(pair.a, pair.b),
        b_to_a=mean_distance(pair.b, pair.a),
        neighbor_a_to_b=neighbor_distance(pair.a, pair.b),
        neighbor_b_to_a=neighbor_distance(pair.b, pair.a),
    )


def detector_complexity(cfg: SchemeConfig) -> Tuple[int, int]:
    """Complex multiplications per group: (exhaustive ML, low-complexity ML)."""
    return search_space_size(cfg), cfg.n * (cfg.pair.a.order + cfg.pair.b.order)


def shipped_pair_reports(n: int = 4, k: int = 2) -> List[Tuple[str, PairReport]]:
    """Reports for the conventional and proposed QPSK and 16QAM pairs."""
    rows = []
    for order in (4, 16):
        for build in (build_conventional_pair, build_proposed_pair):
            pair = build(order)
            p = index_bits_for(n, k) + k * pair.a.bits_per_symbol + (n - k) * pair.b.bits_per_symbol
            rows.append((pair.name, worst_case_report(pair, n, k, p)))
    return rows
