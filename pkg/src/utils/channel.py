"""
Frequency-domain Rayleigh fading and AWGN for one group of n subcarriers.

Every sampler takes an explicit numpy Generator. Streams for a Monte Carlo
trial block are derived from (master seed, point index, block index) so that
results do not depend on which worker ran the block.
"""

import logging
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)


class ChannelError(ValueError):
    """Raised for invalid noise levels or mismatched vector lengths."""
    pass


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """CFR samples H(1..n), i.i.d. CN(0, 1)."""
    h: np.ndarray

    def __post_init__(self):
        if not np.all(np.isfinite(self.h)):
            raise ChannelError("Channel realization contains non-finite gains")


@dataclass(frozen=True)
class NoiseSpec:
    """Total variance N0 of each complex noise sample."""
    n0: float

    def __post_init__(self):
        if not self.n0 > 0:
            raise ChannelError(f"Noise power must be positive, got {self.n0}")


def _complex_gaussian(shape, variance: float, rng: np.random.Generator) -> np.ndarray:
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def sample_cfr(n: int, rng: np.random.Generator) -> ChannelRealization:
    return ChannelRealization(h=_complex_gaussian(n, 1.0, rng))


def sample_cfr_batch(groups: int, n: int, rng: np.random.Generator) -> np.ndarray:
    return _complex_gaussian((groups, n), 1.0, rng)


def sample_awgn(n: int, spec: NoiseSpec, rng: np.random.Generator) -> np.ndarray:
    return _complex_gaussian(n, spec.n0, rng)


def sample_awgn_batch(groups: int, n: int, spec: NoiseSpec, rng: np.random.Generator) -> np.ndarray:
    return _complex_gaussian((groups, n), spec.n0, rng)


def apply_channel(x: np.ndarray, h: Union[np.ndarray, ChannelRealization], w: np.ndarray) -> np.ndarray:
    """
    Y = X H + W, element-wise per subcarrier.

    Accepts either arrays or ChannelRealization for h.
    """
    if isinstance(h, ChannelRealization):
        h = h.h
    x, h, w = np.asarray(x), np.asarray(h), np.asarray(w)
    if not (x.shape == h.shape == w.shape):
        raise ChannelError(f"Shapes differ: x {x.shape}, h {h.shape}, w {w.shape}")
    return x * h + w


def n0_from_ebn0(eb: float, ebn0_db: float) -> NoiseSpec:
    """N0 = Eb / 10^(Eb/N0 [dB] / 10)."""
    if not eb > 0:
        raise ChannelError(f"Energy per bit must be positive, got {eb}")
    return NoiseSpec(n0=eb / 10.0 ** (ebn0_db / 10.0))


def block_streams(
    seed: int, point_index: int, block_index: int
) -> Tuple[np.random.Generator, np.random.Generator, np.random.Generator]:
    """Independent (bits, cfr, noise) generators for one trial block."""
    root = np.random.SeedSequence(entropy=seed, spawn_key=(point_index, block_index))
    bits_ss, cfr_ss, noise_ss = root.spawn(3)
    return (
        np.random.Generator(np.random.PCG64(bits_ss)),
        np.random.Generator(np.random.PCG64(cfr_ss)),
        np.random.Generator(np.random.PCG64(noise_ss)),
    )
