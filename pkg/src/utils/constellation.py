"""
Labelled constellation pairs for dual-mode OFDM-IM.

Builds the conventional and proposed (M_A, M_B) pairs for QPSK and 16QAM,
arbitrary offset-constructed pairs, and the distance/energy measurements the
analysis module relies on.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

# Coordinate equality tolerance for membership and disjointness checks
TOLERANCE = 1e-12

SQRT3 = float(np.sqrt(3.0))

# Gray-coded 4-PAM levels, shared by the real and imaginary axes of 16QAM
PAM4_GRAY = {-3: "00", -1: "01", 1: "11", 3: "10"}

# QPSK base in listed order {1+j, 1-j, -1+j, -1-j}
QPSK_GRAY = {1 + 1j: "00", 1 - 1j: "10", -1 + 1j: "01", -1 - 1j: "11"}


class ConstellationError(ValueError):
    """Raised when a constellation or pair violates its invariants."""
    pass


def _check_bits(bits: str, length: int) -> str:
    if len(bits) != length or any(b not in "01" for b in bits):
        raise ConstellationError(
            f"Expected a bit string of length {length}, got '{bits}'"
        )
    return bits


@dataclass(frozen=True)
class Constellation:
    """A labelled signal set: points[i] carries labels[i]."""
    points: Tuple[complex, ...]
    labels: Tuple[str, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(complex(p) for p in self.points))
        object.__setattr__(self, "labels", tuple(self.labels))

        order = len(self.points)
        if order == 0 or order & (order - 1):
            raise ConstellationError(f"Constellation order must be a power of two, got {order}")
        if len(self.labels) != order:
            raise ConstellationError(
                f"{len(self.labels)} labels supplied for {order} points"
            )

        width = order.bit_length() - 1
        for label in self.labels:
            _check_bits(label, width)
        if len(set(self.labels)) != order:
            raise ConstellationError(f"Labels of '{self.name}' are not a bijection")

        arr = np.asarray(self.points, dtype=complex)
        gaps = np.abs(arr[:, None] - arr[None, :])
        np.fill_diagonal(gaps, np.inf)
        if order > 1 and gaps.min() <= TOLERANCE:
            raise ConstellationError(f"Points of '{self.name}' are not pairwise distinct")

    @property
    def order(self) -> int:
        return len(self.points)

    @property
    def bits_per_symbol(self) -> int:
        return self.order.bit_length() - 1

    @cached_property
    def array(self) -> np.ndarray:
        """Points as a read-only complex vector."""
        arr = np.asarray(self.points, dtype=complex)
        arr.setflags(write=False)
        return arr

    @cached_property
    def label_bits(self) -> np.ndarray:
        """(M, log2 M) uint8 matrix, row i holds the bits of labels[i]."""
        width = self.bits_per_symbol
        table = np.zeros((self.order, width), dtype=np.uint8)
        for i, label in enumerate(self.labels):
            table[i] = [int(b) for b in label]
        table.setflags(write=False)
        return table

    @cached_property
    def index_by_value(self) -> np.ndarray:
        """Maps a label read as an unsigned integer (MSB first) to its point index."""
        lookup = np.empty(self.order, dtype=np.intp)
        for i, label in enumerate(self.labels):
            lookup[int(label, 2) if label else 0] = i
        lookup.setflags(write=False)
        return lookup

    @cached_property
    def _label_index(self) -> Dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def index_of(self, point: complex) -> int:
        """
        Exact membership lookup.

        Raises:
            ConstellationError: If no point lies within TOLERANCE of `point`
        """
        gaps = np.abs(self.array - complex(point))
        idx = int(np.argmin(gaps))
        if gaps[idx] > TOLERANCE:
            raise ConstellationError(f"{point} is not a point of '{self.name}'")
        return idx

    def contains(self, point: complex) -> bool:
        return bool(np.min(np.abs(self.array - complex(point))) <= TOLERANCE)

    def nearest_index(self, z: complex) -> int:
        """Index of the point closest to z; ties go to the lowest index."""
        dist = np.abs(self.array - complex(z))
        return int(np.flatnonzero(dist <= dist.min() + TOLERANCE)[0])

    def shifted(self, offset: complex, name: str = "") -> "Constellation":
        return Constellation(
            points=tuple(p + offset for p in self.points),
            labels=self.labels,
            name=name or self.name,
        )

    def scaled(self, factor: float) -> "Constellation":
        return Constellation(
            points=tuple(p * factor for p in self.points),
            labels=self.labels,
            name=self.name,
        )

    def to_table(self) -> str:
        """Plain-text (label, re, im) table with 12 significant digits."""
        rows = [f"# {self.name}", "label\tre\tim"]
        for label, point in zip(self.labels, self.points):
            rows.append(f"{label or '-'}\t{point.real:.12g}\t{point.imag:.12g}")
        return "\n".join(rows)


@dataclass(frozen=True)
class ConstellationPair:
    """Mode-A and mode-B constellations with disjoint point sets."""
    a: Constellation
    b: Constellation
    name: str = ""

    def __post_init__(self):
        gaps = np.abs(self.a.array[:, None] - self.b.array[None, :])
        if gaps.min() <= TOLERANCE:
            shared = [complex(p) for p in self.a.array if self.b.contains(p)]
            raise ConstellationError(
                f"Pair '{self.name}' violates M_A and M_B disjointness, shared points: {shared}"
            )

    def to_table(self) -> str:
        return "\n\n".join([self.a.to_table(), self.b.to_table()])


def qpsk_base() -> Constellation:
    points = [1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]
    return Constellation(
        points=tuple(points),
        labels=tuple(QPSK_GRAY[p] for p in points),
        name="QPSK",
    )


def _qam16_listed_points() -> List[complex]:
    # Listed order: +-1+-j, +-1+-3j, +-3+-j, +-3+-3j
    points = []
    for re_mag, im_mag in [(1, 1), (1, 3), (3, 1), (3, 3)]:
        for sr, si in itertools.product((1, -1), (1, -1)):
            points.append(complex(sr * re_mag, si * im_mag))
    return points


def qam16_base() -> Constellation:
    points = _qam16_listed_points()
    return Constellation(
        points=tuple(points),
        labels=tuple(PAM4_GRAY[int(p.real)] + PAM4_GRAY[int(p.imag)] for p in points),
        name="16QAM",
    )


def zero_constellation() -> Constellation:
    """The single point {0}; models an inactive subcarrier."""
    return Constellation(points=(0j,), labels=("",), name="zero")


def _base_for(order: int) -> Constellation:
    if order == 4:
        return qpsk_base()
    if order == 16:
        return qam16_base()
    raise ConstellationError(f"Unsupported constellation order {order}, expected 4 or 16")


def build_conventional_pair(order: int) -> ConstellationPair:
    """
    Conventional pair: classical QPSK/16QAM for M_A, an outer set for M_B.

    M_B points follow the listed order of the literature and take M_A's label
    sequence position by position.

    Args:
        order: 4 or 16

    Returns:
        ConstellationPair

    Raises:
        ConstellationError: If order is unsupported
    """
    base = _base_for(order)
    if order == 4:
        r = 1 + SQRT3
        b_points = [-r, -r * 1j, r, r * 1j]
        tag = "QPSK"
    else:
        b_points = []
        for re in (-3, -1, 1, 3):
            b_points += [complex(re, 5), complex(re, -5)]
        for im in (-3, -1, 1, 3):
            b_points += [complex(5, im), complex(-5, im)]
        tag = "16QAM"

    a = Constellation(points=base.points, labels=base.labels, name=f"M_A conv {tag}")
    b = Constellation(points=tuple(b_points), labels=base.labels, name=f"M_B conv {tag}")
    return ConstellationPair(a=a, b=b, name=f"conv-{tag.lower()}")


def offset_pair(base: Constellation, offset: complex, name: str = "") -> ConstellationPair:
    """
    Pair built as (base + offset, base - offset), labels copied from base.

    Raises:
        ConstellationError: If the two shifted sets share a point
    """
    offset = complex(offset)
    a = base.shifted(offset, name=f"M_A {base.name} + ({offset})")
    b = base.shifted(-offset, name=f"M_B {base.name} - ({offset})")
    return ConstellationPair(a=a, b=b, name=name or f"offset-{base.name.lower()}")


def build_proposed_pair(order: int) -> ConstellationPair:
    """Proposed pair: conventional M_A shifted by +-(0.5+0.5j)."""
    base = _base_for(order)
    return offset_pair(base, 0.5 + 0.5j, name=f"prop-{base.name.lower()}")


def map_bits(c: Constellation, bits: str) -> complex:
    """Point whose label equals `bits`."""
    _check_bits(bits, c.bits_per_symbol)
    return c.points[c._label_index[bits]]


def demap_exact(c: Constellation, point: complex) -> str:
    """Label of `point`; the point must belong to `c`."""
    return c.labels[c.index_of(point)]


def cross_demap(c_from: Constellation, c_to: Constellation, bits: str) -> str:
    """
    Map `bits` through c_from, hard-decide to the nearest point of c_to.

    Returns:
        Label of the nearest c_to point (lowest index on ties)
    """
    if c_from.bits_per_symbol != c_to.bits_per_symbol:
        raise ConstellationError(
            f"Label lengths differ: {c_from.bits_per_symbol} vs {c_to.bits_per_symbol}"
        )
    return c_to.labels[c_to.nearest_index(map_bits(c_from, bits))]


def average_energy(c: Constellation) -> float:
    return float(np.mean(np.abs(c.array) ** 2))


def _pairwise(points: np.ndarray, others: np.ndarray) -> np.ndarray:
    return np.abs(points[:, None] - others[None, :])


def min_intra_distance(c: Constellation) -> float:
    if c.order < 2:
        raise ConstellationError(f"'{c.name}' has fewer than two points")
    gaps = _pairwise(c.array, c.array)
    np.fill_diagonal(gaps, np.inf)
    return float(gaps.min())


def min_inter_distance(pair: ConstellationPair) -> float:
    return float(_pairwise(pair.a.array, pair.b.array).min())


def energy_per_bit(pair: ConstellationPair, n: int, k: int, p: int) -> float:
    """
    Average transmitted energy per information bit of one group.

    Args:
        pair: Constellation pair
        n: Group length
        k: Number of mode-A subcarriers
        p: Bits per group, index bits included

    Raises:
        ConstellationError: If p <= 0
    """
    if p <= 0:
        raise ConstellationError(f"Bits per group must be positive, got {p}")
    return (k * average_energy(pair.a) + (n - k) * average_energy(pair.b)) / p


def inter_neighbors(pair: ConstellationPair, point: complex, mode: str = "a") -> List[complex]:
    """
    Points of the other constellation at the pair's minimum inter distance from `point`.

    Args:
        pair: Constellation pair
        point: A point of pair.a (mode "a") or pair.b (mode "b")
        mode: Which constellation `point` belongs to
    """
    own, other = (pair.a, pair.b) if mode == "a" else (pair.b, pair.a)
    own.index_of(point)
    d_min = min_inter_distance(pair)
    dist = np.abs(other.array - complex(point))
    return [complex(q) for q in other.array[np.abs(dist - d_min) <= 1e-9]]


def is_gray(c: Constellation) -> bool:
    """True iff every pair of points at minimum distance differs in one label bit."""
    d_min = min_intra_distance(c)
    for i, j in itertools.combinations(range(c.order), 2):
        if abs(abs(c.points[i] - c.points[j]) - d_min) <= 1e-9:
            if hamming(c.labels[i], c.labels[j]) != 1:
                return False
    return True


def hamming(x: Sequence, y: Sequence) -> int:
    return sum(u != v for u, v in zip(x, y))
