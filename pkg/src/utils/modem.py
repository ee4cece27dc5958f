"""
DM-OFDM-IM modulation, ML detection and demapping.

Two layers live here:

- Single-group reference operations (split_bits, modulate_*, detect_*, demap_*)
  that work on GroupBits / GroupSymbols and read like the scheme description.
- Vectorized engines (DualModeModem, OfdmModem) that process a (groups x p)
  bit matrix at once. The Monte Carlo harness uses these; tests pin them to
  the reference operations.

Subcarrier positions are 1-based in IndexPattern and 0-based in arrays.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import List, Protocol, Tuple

import numpy as np

from .constellation import (
    Constellation,
    ConstellationPair,
    demap_exact,
    map_bits,
    qam16_base,
    zero_constellation,
)
from .index_codebook import (
    IndexCodebook,
    IndexPattern,
    complement,
    decode_index_pattern,
    encode_index_bits,
    paper_codebook,
)

logger = logging.getLogger(__name__)


class ModemError(ValueError):
    """Raised for malformed bit groups, symbols or scheme configurations."""
    pass


class BitMapping(str, Enum):
    CONVENTIONAL = "conventional"
    PROPOSED = "proposed"


@dataclass(frozen=True)
class SchemeConfig:
    """Full description of one DM-OFDM-IM scheme."""
    n: int
    k: int
    pair: ConstellationPair
    codebook: IndexCodebook
    bitmap_mode: BitMapping = BitMapping.CONVENTIONAL

    def __post_init__(self):
        object.__setattr__(self, "bitmap_mode", BitMapping(self.bitmap_mode))
        if (self.codebook.n, self.codebook.k) != (self.n, self.k):
            raise ModemError(
                f"Codebook is for n={self.codebook.n}, k={self.codebook.k}; scheme has n={self.n}, k={self.k}"
            )
        if self.bitmap_mode is BitMapping.PROPOSED and self.pair.a.order != self.pair.b.order:
            raise ModemError(
                f"Proposed bit mapping needs M_A = M_B, got {self.pair.a.order} and {self.pair.b.order}"
            )

    @property
    def bits_a(self) -> int:
        return self.pair.a.bits_per_symbol

    @property
    def bits_b(self) -> int:
        return self.pair.b.bits_per_symbol

    @property
    def p1(self) -> int:
        return self.codebook.p1

    @property
    def p2a(self) -> int:
        return self.k * self.bits_a

    @property
    def p2b(self) -> int:
        return (self.n - self.k) * self.bits_b

    @property
    def p2(self) -> int:
        return self.p2a + self.p2b

    @property
    def p(self) -> int:
        return self.p1 + self.p2


@dataclass(frozen=True)
class GroupBits:
    """The p source bits of one group, b1 followed by b2."""
    bits: str

    def __post_init__(self):
        if any(b not in "01" for b in self.bits):
            raise ModemError(f"Not a bit string: '{self.bits}'")

    def validate(self, cfg: SchemeConfig) -> "GroupBits":
        if len(self.bits) != cfg.p:
            raise ModemError(f"Group needs {cfg.p} bits, got {len(self.bits)}")
        return self

    def b1(self, cfg: SchemeConfig) -> str:
        return self.bits[:cfg.p1]

    def b2(self, cfg: SchemeConfig) -> str:
        return self.bits[cfg.p1:]

    def as_array(self) -> np.ndarray:
        return np.fromiter((int(b) for b in self.bits), dtype=np.uint8, count=len(self.bits))

    @classmethod
    def from_array(cls, bits: np.ndarray) -> "GroupBits":
        return cls("".join(str(int(b)) for b in bits))


@dataclass(frozen=True, eq=False)
class GroupSymbols:
    """Frequency-domain symbols of one group and the I_A pattern they follow."""
    x: np.ndarray
    pattern: IndexPattern

    def __post_init__(self):
        x = np.asarray(self.x, dtype=complex)
        if x.ndim != 1:
            raise ModemError(f"Group symbols must be a vector, got shape {x.shape}")
        if self.pattern.indices and self.pattern.indices[-1] > len(x):
            raise ModemError(f"Pattern {self.pattern} does not fit {len(x)} subcarriers")
        object.__setattr__(self, "x", x)

    def validate(self, cfg: SchemeConfig) -> "GroupSymbols":
        """
        Check length n, a k-subset pattern and mode membership of every symbol.

        Raises:
            ModemError: If len(x) != n
            CodebookError: If the pattern is not a k-subset of 1..n
            ConstellationError: If X(alpha) is not a point of its mode
        """
        if len(self.x) != cfg.n:
            raise ModemError(f"Group needs {cfg.n} symbols, got {len(self.x)}")
        self.pattern.validate(cfg.n, cfg.k)
        for alpha, symbol in enumerate(self.x, start=1):
            (cfg.pair.a if alpha in self.pattern else cfg.pair.b).index_of(symbol)
        return self


@dataclass(frozen=True, eq=False)
class FrameSymbols:
    groups: Tuple[GroupSymbols, ...]

    @property
    def x(self) -> np.ndarray:
        return np.concatenate([g.x for g in self.groups])

    @property
    def N(self) -> int:
        return sum(len(g.x) for g in self.groups)


def _chunks(bits: str, width: int, count: int) -> List[str]:
    return [bits[i * width:(i + 1) * width] for i in range(count)]


def split_bits(stream: str, cfg: SchemeConfig, G: int) -> List[GroupBits]:
    """
    Bit splitter: group g receives bits [(g-1)p, gp) of the stream.

    Raises:
        ModemError: If len(stream) != G * p
    """
    if G < 1 or len(stream) != G * cfg.p:
        raise ModemError(
            f"Stream of {len(stream)} bits cannot be split into {G} groups of {cfg.p}"
        )
    return [GroupBits(stream[g * cfg.p:(g + 1) * cfg.p]) for g in range(G)]


def modulate_conventional(b: GroupBits, cfg: SchemeConfig) -> GroupSymbols:
    """b1 picks I_A; b2A fills I_A in increasing order, b2B fills I_B."""
    if cfg.bitmap_mode is not BitMapping.CONVENTIONAL:
        raise ModemError("modulate_conventional called on a proposed-mapping scheme")
    b.validate(cfg)

    i_a = encode_index_bits(cfg.codebook, b.b1(cfg))
    i_b = complement(i_a, cfg.n)
    payload = b.b2(cfg)
    words_a = _chunks(payload[:cfg.p2a], cfg.bits_a, cfg.k)
    words_b = _chunks(payload[cfg.p2a:], cfg.bits_b, cfg.n - cfg.k)

    x = np.zeros(cfg.n, dtype=complex)
    for alpha, word in zip(i_a.indices, words_a):
        x[alpha - 1] = map_bits(cfg.pair.a, word)
    for alpha, word in zip(i_b.indices, words_b):
        x[alpha - 1] = map_bits(cfg.pair.b, word)
    return GroupSymbols(x=x, pattern=i_a)


def modulate_proposed(b: GroupBits, cfg: SchemeConfig) -> GroupSymbols:
    """Substream alpha of b2 maps through M_A if alpha is in I_A, else through M_B."""
    if cfg.bitmap_mode is not BitMapping.PROPOSED:
        raise ModemError("modulate_proposed called on a conventional-mapping scheme")
    b.validate(cfg)

    i_a = encode_index_bits(cfg.codebook, b.b1(cfg))
    words = _chunks(b.b2(cfg), cfg.bits_a, cfg.n)
    x = np.array(
        [
            map_bits(cfg.pair.a if alpha in i_a else cfg.pair.b, word)
            for alpha, word in enumerate(words, start=1)
        ],
        dtype=complex,
    )
    return GroupSymbols(x=x, pattern=i_a)


def modulate(b: GroupBits, cfg: SchemeConfig) -> GroupSymbols:
    if cfg.bitmap_mode is BitMapping.PROPOSED:
        return modulate_proposed(b, cfg)
    return modulate_conventional(b, cfg)


def modulate_frame(stream: str, cfg: SchemeConfig, G: int) -> FrameSymbols:
    return FrameSymbols(groups=tuple(modulate(b, cfg) for b in split_bits(stream, cfg, G)))


# -- detection ---------------------------------------------------------------

def _residual_table(y: np.ndarray, h: np.ndarray, points: np.ndarray) -> np.ndarray:
    """|y(a) - s h(a)|^2 for every subcarrier a and point s; shape y.shape + (M,)."""
    diff = y[..., None] - points * h[..., None]
    return diff.real ** 2 + diff.imag ** 2


def _accumulate(terms: np.ndarray) -> np.ndarray:
    # Fixed left-to-right order over subcarriers keeps both detectors bit-identical
    total = terms[..., 0].copy()
    for alpha in range(1, terms.shape[-1]):
        total = total + terms[..., alpha]
    return total


def _check_observation(y: np.ndarray, h: np.ndarray, n: int) -> Tuple[np.ndarray, np.ndarray]:
    y = np.asarray(y, dtype=complex)
    h = np.asarray(h, dtype=complex)
    if y.shape[-1] != n or h.shape != y.shape:
        raise ModemError(f"y and h must both have length {n}, got {y.shape} and {h.shape}")
    return y, h


def _low_complexity(y: np.ndarray, h: np.ndarray, cfg: SchemeConfig) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Per-subcarrier dual metrics plus a pattern cost sum.

    Returns:
        (pattern word per group, symbol index per subcarrier, cost per pattern)
    """
    table_a = _residual_table(y, h, cfg.pair.a.array)
    table_b = _residual_table(y, h, cfg.pair.b.array)
    arg_a = table_a.argmin(axis=-1)
    arg_b = table_b.argmin(axis=-1)
    min_a = np.take_along_axis(table_a, arg_a[..., None], axis=-1)[..., 0]
    min_b = np.take_along_axis(table_b, arg_b[..., None], axis=-1)[..., 0]

    masks = cfg.codebook.masks
    costs = _accumulate(np.where(masks, min_a[..., None, :], min_b[..., None, :]))
    word = costs.argmin(axis=-1)
    symbols = np.where(masks[word], arg_a, arg_b)
    return word, symbols, costs


def _symbols_from_indices(cfg: SchemeConfig, mask: np.ndarray, symbols: np.ndarray) -> np.ndarray:
    return np.where(mask, cfg.pair.a.array[symbols.clip(max=cfg.pair.a.order - 1)],
                    cfg.pair.b.array[symbols.clip(max=cfg.pair.b.order - 1)])


def pattern_costs(y: np.ndarray, h: np.ndarray, cfg: SchemeConfig) -> np.ndarray:
    """cost(I) for every codebook pattern, in codebook order."""
    y, h = _check_observation(y, h, cfg.n)
    return _low_complexity(y, h, cfg)[2]


def detect_low_complexity_ml(
    y: np.ndarray, h: np.ndarray, cfg: SchemeConfig
) -> Tuple[GroupSymbols, IndexPattern]:
    """
    ML detection in O(n (M_A + M_B)) metric evaluations.

    For each subcarrier the best M_A and M_B decisions are found independently;
    each codebook pattern is then scored by summing the matching per-subcarrier
    minima. Ties go to the first pattern in codebook order and the lowest point index.
    """
    y, h = _check_observation(y, h, cfg.n)
    word, symbols, _ = _low_complexity(y, h, cfg)
    word = int(word)
    detected = cfg.codebook.patterns[word]
    x_hat = _symbols_from_indices(cfg, cfg.codebook.masks[word], symbols)
    return GroupSymbols(x=x_hat, pattern=detected), detected


def search_space_size(cfg: SchemeConfig) -> int:
    """2^p1 M_A^k M_B^(n-k)."""
    return cfg.codebook.size * cfg.pair.a.order ** cfg.k * cfg.pair.b.order ** (cfg.n - cfg.k)


def _realization_metrics(table_a: np.ndarray, table_b: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """
    Metric of every realization under one pattern as an outer sum.

    Axis alpha indexes the M_A point (mask[alpha]) or the M_B point of subcarrier
    alpha; terms are added left to right over subcarriers like _accumulate.
    """
    terms = [table_a[alpha] if active else table_b[alpha] for alpha, active in enumerate(mask)]
    total = terms[0]
    for term in terms[1:]:
        total = total[..., None] + term
    return total


def detect_exhaustive_ml(
    y: np.ndarray, h: np.ndarray, cfg: SchemeConfig
) -> Tuple[GroupSymbols, IndexPattern]:
    """
    Brute-force argmin of sum_a |y(a) - X(a) h(a)|^2 over every realization X.

    Realizations are enumerated in codebook order, then label order with the
    first subcarrier varying slowest; the first minimum wins.
    """
    y, h = _check_observation(y, h, cfg.n)
    table_a = _residual_table(y, h, cfg.pair.a.array)
    table_b = _residual_table(y, h, cfg.pair.b.array)

    best_metric, best_word, best_symbols = np.inf, 0, None
    for word, mask in enumerate(cfg.codebook.masks):
        metrics = _realization_metrics(table_a, table_b, mask)
        flat = int(np.argmin(metrics))
        if best_symbols is None or metrics.flat[flat] < best_metric:
            best_metric = metrics.flat[flat]
            best_word = word
            best_symbols = np.asarray(np.unravel_index(flat, metrics.shape))

    mask = cfg.codebook.masks[best_word]
    detected = cfg.codebook.patterns[best_word]
    return GroupSymbols(x=_symbols_from_indices(cfg, mask, best_symbols), pattern=detected), detected


def detect_given_pattern(
    y: np.ndarray, h: np.ndarray, cfg: SchemeConfig, forced: IndexPattern
) -> GroupSymbols:
    """Per-subcarrier ML symbol decisions under a fixed, possibly wrong, I_A."""
    y, h = _check_observation(y, h, cfg.n)
    forced.validate(cfg.n, cfg.k)
    mask = np.zeros(cfg.n, dtype=bool)
    mask[[a - 1 for a in forced.indices]] = True
    arg_a = _residual_table(y, h, cfg.pair.a.array).argmin(axis=-1)
    arg_b = _residual_table(y, h, cfg.pair.b.array).argmin(axis=-1)
    return GroupSymbols(
        x=_symbols_from_indices(cfg, mask, np.where(mask, arg_a, arg_b)), pattern=forced
    )


# -- demapping ---------------------------------------------------------------

def demap_conventional(x_hat: GroupSymbols, cfg: SchemeConfig) -> GroupBits:
    """b1 from the pattern; I_A symbols through M_A^-1, then I_B symbols through M_B^-1."""
    parts = [decode_index_pattern(cfg.codebook, x_hat.pattern)]
    i_a = x_hat.validate(cfg).pattern
    i_b = complement(i_a, cfg.n)
    parts += [demap_exact(cfg.pair.a, x_hat.x[alpha - 1]) for alpha in i_a.indices]
    parts += [demap_exact(cfg.pair.b, x_hat.x[alpha - 1]) for alpha in i_b.indices]
    return GroupBits("".join(parts))


def demap_proposed(x_hat: GroupSymbols, cfg: SchemeConfig) -> GroupBits:
    """b2,alpha = M_A^-1 or M_B^-1 of X(alpha), concatenated by position."""
    if cfg.pair.a.order != cfg.pair.b.order:
        raise ModemError("Proposed demapping needs M_A = M_B")
    parts = [decode_index_pattern(cfg.codebook, x_hat.pattern)]
    i_a = x_hat.validate(cfg).pattern
    for alpha in range(1, cfg.n + 1):
        mode = cfg.pair.a if alpha in i_a else cfg.pair.b
        parts.append(demap_exact(mode, x_hat.x[alpha - 1]))
    return GroupBits("".join(parts))


def demap(x_hat: GroupSymbols, cfg: SchemeConfig) -> GroupBits:
    if cfg.bitmap_mode is BitMapping.PROPOSED:
        return demap_proposed(x_hat, cfg)
    return demap_conventional(x_hat, cfg)


def demap_frame(frame: FrameSymbols, cfg: SchemeConfig) -> str:
    return "".join(demap(g, cfg).bits for g in frame.groups)


# -- vectorized engines --------------------------------------------------------

def _bits_to_int(bits: np.ndarray) -> np.ndarray:
    width = bits.shape[-1]
    weights = 1 << np.arange(width - 1, -1, -1, dtype=np.int64)
    return bits.astype(np.int64) @ weights


class GroupModem(Protocol):
    """What the Monte Carlo harness needs from a scheme."""
    n: int
    bits_per_group: int
    index_bits: int

    def modulate_batch(self, bits: np.ndarray) -> np.ndarray: ...

    def receive_batch(self, y: np.ndarray, h: np.ndarray) -> np.ndarray: ...


class DualModeModem:
    """
    Batch DM-OFDM-IM transmitter/receiver for one SchemeConfig.

    Detection always uses the low-complexity ML detector.
    """

    def __init__(self, cfg: SchemeConfig):
        self.cfg = cfg
        self.n = cfg.n
        self.bits_per_group = cfg.p
        self.index_bits = cfg.p1

    @cached_property
    def _positions(self) -> Tuple[np.ndarray, np.ndarray]:
        cb, n = self.cfg.codebook, self.n
        pos_a = np.array([[a - 1 for a in p.indices] for p in cb.patterns], dtype=np.intp)
        pos_b = np.array(
            [[a - 1 for a in complement(p, n).indices] for p in cb.patterns], dtype=np.intp
        ).reshape(cb.size, n - self.cfg.k)
        return pos_a.reshape(cb.size, self.cfg.k), pos_b

    def modulate_batch(self, bits: np.ndarray) -> np.ndarray:
        """(groups, p) bits -> (groups, n) symbols."""
        cfg = self.cfg
        a, b = cfg.pair.a, cfg.pair.b
        groups = bits.shape[0]
        if bits.shape[1] != cfg.p:
            raise ModemError(f"Expected {cfg.p} bits per group, got {bits.shape[1]}")

        word = _bits_to_int(bits[:, :cfg.p1])
        if cfg.bitmap_mode is BitMapping.PROPOSED:
            values = _bits_to_int(bits[:, cfg.p1:].reshape(groups, cfg.n, cfg.bits_a))
            return np.where(
                cfg.codebook.masks[word],
                a.array[a.index_by_value[values]],
                b.array[b.index_by_value[values]],
            )

        pos_a, pos_b = self._positions
        values_a = _bits_to_int(bits[:, cfg.p1:cfg.p1 + cfg.p2a].reshape(groups, cfg.k, cfg.bits_a))
        values_b = _bits_to_int(
            bits[:, cfg.p1 + cfg.p2a:].reshape(groups, cfg.n - cfg.k, cfg.bits_b)
        )
        rows = np.arange(groups)[:, None]
        x = np.empty((groups, cfg.n), dtype=complex)
        x[rows, pos_a[word]] = a.array[a.index_by_value[values_a]]
        x[rows, pos_b[word]] = b.array[b.index_by_value[values_b]]
        return x

    def detect_batch(self, y: np.ndarray, h: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        word, symbols, _ = _low_complexity(y, h, self.cfg)
        return word, symbols

    def demap_batch(self, word: np.ndarray, symbols: np.ndarray) -> np.ndarray:
        cfg = self.cfg
        a, b = cfg.pair.a, cfg.pair.b
        groups = word.shape[0]
        index_bits = cfg.codebook.word_bits[word]

        if cfg.bitmap_mode is BitMapping.PROPOSED:
            mask = cfg.codebook.masks[word][..., None]
            payload = np.where(mask, a.label_bits[symbols], b.label_bits[symbols])
            return np.concatenate([index_bits, payload.reshape(groups, cfg.p2)], axis=1)

        pos_a, pos_b = self._positions
        rows = np.arange(groups)[:, None]
        bits_a = a.label_bits[symbols[rows, pos_a[word]]].reshape(groups, cfg.p2a)
        bits_b = b.label_bits[symbols[rows, pos_b[word]]].reshape(groups, cfg.p2b)
        return np.concatenate([index_bits, bits_a, bits_b], axis=1)

    def receive_batch(self, y: np.ndarray, h: np.ndarray) -> np.ndarray:
        return self.demap_batch(*self.detect_batch(y, h))


class OfdmModem:
    """Plain OFDM: every subcarrier carries one symbol, detected independently."""

    def __init__(self, constellation: Constellation, n: int = 4):
        self.constellation = constellation
        self.n = n
        self.bits_per_group = n * constellation.bits_per_symbol
        self.index_bits = 0

    def modulate_batch(self, bits: np.ndarray) -> np.ndarray:
        c = self.constellation
        values = _bits_to_int(bits.reshape(bits.shape[0], self.n, c.bits_per_symbol))
        return c.array[c.index_by_value[values]]

    def detect_batch(self, y: np.ndarray, h: np.ndarray) -> np.ndarray:
        return _residual_table(y, h, self.constellation.array).argmin(axis=-1)

    def receive_batch(self, y: np.ndarray, h: np.ndarray) -> np.ndarray:
        symbols = self.detect_batch(y, h)
        return self.constellation.label_bits[symbols].reshape(symbols.shape[0], -1)


def ofdm_im_config(n: int = 4, k: int = 2) -> SchemeConfig:
    """
    OFDM-IM as a dual-mode scheme whose mode-B set is {0}.

    Active subcarriers carry unnormalized 16QAM, inactive ones carry exactly 0.
    """
    base = qam16_base()
    active = Constellation(points=base.points, labels=base.labels, name="16QAM active")
    return SchemeConfig(
        n=n,
        k=k,
        pair=ConstellationPair(a=active, b=zero_constellation(), name="ofdm-im-16qam"),
        codebook=paper_codebook(),
        bitmap_mode=BitMapping.CONVENTIONAL,
    )


def ofdm_im_modem() -> DualModeModem:
    return DualModeModem(ofdm_im_config())


def ofdm_modem(n: int = 4) -> OfdmModem:
    return OfdmModem(qam16_base(), n=n)
