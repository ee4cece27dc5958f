"""
Monte Carlo BER engine.

A grid point is simulated in trial blocks of `block_groups` groups. Block b of
point i draws its bits, CFR and noise from streams derived from
(seed, i, b), and blocks are aggregated in index order until the target error
count is reached or max_groups is exhausted. Which worker ran a block never
changes the result.
"""

import logging
import math
import time
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..config.config import Config

from .channel import (
    NoiseSpec,
    apply_channel,
    block_streams,
    n0_from_ebn0,
    sample_awgn_batch,
    sample_cfr_batch,
)
from .schemes import SCHEME_IDS, get_scheme

logger = logging.getLogger(__name__)
simulation_logger = logging.getLogger('simulation')


class SimulationPlan(BaseModel):
    """Everything that determines a sweep's output."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    scheme: str
    ebn0_db: Tuple[float, ...]
    max_groups: int = Field(default=Config.MAX_GROUPS, ge=1)
    target_errors: int = Field(default=Config.TARGET_ERRORS, ge=1)
    seed: int = Field(default=Config.SEED, ge=0)
    workers: int = Field(default=Config.WORKERS, ge=1)
    block_groups: int = Field(default=Config.BLOCK_GROUPS, ge=1)
    noiseless: bool = False
    timing: bool = False
    breakdown: bool = False
    out: Optional[str] = None

    @field_validator("scheme")
    @classmethod
    def _known_scheme(cls, value: str) -> str:
        if value not in SCHEME_IDS:
            raise ValueError(f"unknown scheme '{value}', expected one of {', '.join(SCHEME_IDS)}")
        return value

    @field_validator("ebn0_db")
    @classmethod
    def _ascending_grid(cls, value: Tuple[float, ...]) -> Tuple[float, ...]:
        if not value:
            raise ValueError("Eb/N0 grid is empty")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError(f"Eb/N0 grid must be strictly ascending, got {list(value)}")
        return value


@dataclass(frozen=True)
class BerRecord:
    """One (scheme, Eb/N0) measurement row."""
    scheme: str
    ebn0_db: float
    bits: int
    errors: int
    ber: float
    groups: int
    seed: int
    elapsed_s: float = 0.0
    index_bit_errors: int = 0
    pattern_errors: int = 0

    def __post_init__(self):
        if not 0 <= self.errors <= self.bits:
            raise ValueError(f"{self.errors} errors out of {self.bits} bits")
        if not 0.0 <= self.ber <= 1.0:
            raise ValueError(f"BER {self.ber} outside [0, 1]")

    @property
    def censored(self) -> bool:
        """No errors observed; ber = 0 is a censored value, not a measurement."""
        return self.errors == 0

    @property
    def standard_error(self) -> float:
        if self.bits == 0:
            return 0.0
        return math.sqrt(self.ber * (1.0 - self.ber) / self.bits)


@dataclass(frozen=True)
class BlockCounts:
    groups: int = 0
    bits: int = 0
    errors: int = 0
    index_bit_errors: int = 0
    pattern_errors: int = 0

    def __add__(self, other: "BlockCounts") -> "BlockCounts":
        return BlockCounts(
            groups=self.groups + other.groups,
            bits=self.bits + other.bits,
            errors=self.errors + other.errors,
            index_bit_errors=self.index_bit_errors + other.index_bit_errors,
            pattern_errors=self.pattern_errors + other.pattern_errors,
        )


@dataclass(frozen=True)
class MonotoneViolation:
    scheme: str
    ebn0_low: float
    ebn0_high: float
    ber_low: float
    ber_high: float
    sigmas: float


def simulate_block(
    scheme_id: str,
    ebn0_db: float,
    seed: int,
    point_index: int,
    block_index: int,
    groups: int,
    noiseless: bool = False,
) -> BlockCounts:
    """Simulate one trial block of `groups` groups and count bit errors."""
    scheme = get_scheme(scheme_id)
    modem = scheme.modem()
    bits_rng, cfr_rng, noise_rng = block_streams(seed, point_index, block_index)

    bits = bits_rng.integers(0, 2, size=(groups, modem.bits_per_group), dtype=np.uint8)
    x = modem.modulate_batch(bits)
    h = sample_cfr_batch(groups, modem.n, cfr_rng)
    if noiseless:
        w = np.zeros_like(x)
    else:
        noise: NoiseSpec = n0_from_ebn0(scheme.eb, ebn0_db)
        w = sample_awgn_batch(groups, modem.n, noise, noise_rng)

    bits_hat = modem.receive_batch(apply_channel(x, h, w), h)
    wrong = bits != bits_hat
    index_wrong = wrong[:, :modem.index_bits]
    return BlockCounts(
        groups=groups,
        bits=int(bits.size),
        errors=int(wrong.sum()),
        index_bit_errors=int(index_wrong.sum()),
        pattern_errors=int(index_wrong.any(axis=1).sum()),
    )


def _block_sizes(plan: SimulationPlan) -> List[int]:
    full, rest = divmod(plan.max_groups, plan.block_groups)
    return [plan.block_groups] * full + ([rest] if rest else [])


def _point_index(plan: SimulationPlan, ebn0_db: float) -> int:
    try:
        return plan.ebn0_db.index(ebn0_db)
    except ValueError:
        raise ValueError(
            f"{ebn0_db} dB is not on the plan's Eb/N0 grid {list(plan.ebn0_db)}; pass point_index explicitly"
        ) from None


def run_point(
    plan: SimulationPlan,
    ebn0_db: float,
    point_index: Optional[int] = None,
    executor: Optional[Executor] = None,
) -> BerRecord:
    """
    Simulate one Eb/N0 point of the plan.

    Args:
        plan: Validated simulation plan
        ebn0_db: Eb/N0 in dB
        point_index: Stream index of this point; defaults to its position in plan.ebn0_db
        executor: Pool for trial blocks; None runs them in-process (or opens a
            pool of plan.workers processes when workers > 1)

    Returns:
        BerRecord; a zero-error point has ber = 0 and censored = True

    Raises:
        ValueError: If point_index is omitted and ebn0_db is not in plan.ebn0_db
    """
    if point_index is None:
        point_index = _point_index(plan, ebn0_db)

    if executor is None and plan.workers > 1:
        with ProcessPoolExecutor(max_workers=plan.workers) as pool:
            return run_point(plan, ebn0_db, point_index, pool)

    start = time.perf_counter()
    sizes = _block_sizes(plan)
    totals = BlockCounts()
    stopped_early = False

    for wave_start in range(0, len(sizes), plan.workers):
        wave = list(range(wave_start, min(wave_start + plan.workers, len(sizes))))
        args = [
            (plan.scheme, ebn0_db, plan.seed, point_index, b, sizes[b], plan.noiseless)
            for b in wave
        ]
        if executor is None:
            results: Iterable[BlockCounts] = [simulate_block(*a) for a in args]
        else:
            results = executor.map(simulate_block, *zip(*args))

        # Aggregate in block order; later blocks of the wave are discarded once the target is hit
        for b, counts in zip(wave, results):
            totals = totals + counts
            simulation_logger.debug(
                f"{plan.scheme} {ebn0_db} dB block {b}: {counts.errors} errors in {counts.groups} groups "
                f"(cumulative {totals.errors}/{totals.bits})"
            )
            if totals.errors >= plan.target_errors:
                stopped_early = True
                break
        if stopped_early:
            break

    elapsed = time.perf_counter() - start if plan.timing else 0.0
    record = BerRecord(
        scheme=plan.scheme,
        ebn0_db=float(ebn0_db),
        bits=totals.bits,
        errors=totals.errors,
        ber=totals.errors / totals.bits if totals.bits else 0.0,
        groups=totals.groups,
        seed=plan.seed,
        elapsed_s=elapsed,
        index_bit_errors=totals.index_bit_errors,
        pattern_errors=totals.pattern_errors,
    )

    logger.info(
        f"{record.scheme} @ {record.ebn0_db:g} dB: {record.groups} groups, "
        f"{record.errors} errors, BER {record.ber:.3e}"
    )
    if record.censored:
        logger.warning(
            f"{record.scheme} @ {record.ebn0_db:g} dB: no errors in {record.groups} groups, "
            f"BER reported as 0 (censored)"
        )
    return record


def run_sweep(plan: SimulationPlan) -> List[BerRecord]:
    """One record per grid point, in grid order."""
    logger.info(
        f"Sweep {plan.scheme}: {len(plan.ebn0_db)} points, max {plan.max_groups} groups, "
        f"target {plan.target_errors} errors, seed {plan.seed}, {plan.workers} worker(s)"
    )
    if plan.workers > 1:
        with ProcessPoolExecutor(max_workers=plan.workers) as pool:
            records = [run_point(plan, e, i, pool) for i, e in enumerate(plan.ebn0_db)]
    else:
        records = [run_point(plan, e, i) for i, e in enumerate(plan.ebn0_db)]

    for violation in check_monotone(records):
        logger.warning(
            f"{violation.scheme}: BER rises from {violation.ber_low:.3e} at {violation.ebn0_low:g} dB "
            f"to {violation.ber_high:.3e} at {violation.ebn0_high:g} dB ({violation.sigmas:.1f} sigma)"
        )
    return records


def check_monotone(records: List[BerRecord], tolerance: float = 2.0) -> List[MonotoneViolation]:
    """
    Soft check that BER does not increase with Eb/N0.

    An increase counts as a violation only when it exceeds `tolerance`
    combined binomial standard errors.
    """
    violations = []
    for scheme in dict.fromkeys(r.scheme for r in records):
        rows = sorted((r for r in records if r.scheme == scheme), key=lambda r: r.ebn0_db)
        for low, high in zip(rows, rows[1:]):
            rise = high.ber - low.ber
            if rise <= 0:
                continue
            sigma = math.hypot(low.standard_error, high.standard_error)
            if sigma == 0 or rise > tolerance * sigma:
                violations.append(MonotoneViolation(
                    scheme=scheme,
                    ebn0_low=low.ebn0_db,
                    ebn0_high=high.ebn0_db,
                    ber_low=low.ber,
                    ber_high=high.ber,
                    sigmas=rise / sigma if sigma else math.inf,
                ))
    return violations
