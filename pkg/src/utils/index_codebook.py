"""
Index selector codebooks: bijections between p1-bit words and the k-subsets
I_A of {1..n} that carry mode-A symbols.

Bit words are read as unsigned integers with the first bit most significant.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Tuple

import numpy as np
from scipy.special import comb

logger = logging.getLogger(__name__)


class CodebookError(ValueError):
    """Raised for invalid patterns, codebooks or index words."""
    pass


@dataclass(frozen=True, order=True)
class IndexPattern:
    """Sorted 1-based subcarrier positions of one mode."""
    indices: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        if any(i < 1 for i in self.indices):
            raise CodebookError(f"Pattern positions are 1-based, got {self.indices}")
        if any(a >= b for a, b in zip(self.indices, self.indices[1:])):
            raise CodebookError(f"Pattern must be strictly increasing, got {self.indices}")

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, alpha: int) -> bool:
        return alpha in self.indices

    def validate(self, n: int, k: int) -> "IndexPattern":
        if len(self.indices) != k or (self.indices and self.indices[-1] > n):
            raise CodebookError(f"{self} is not a {k}-subset of 1..{n}")
        return self

    def __str__(self) -> str:
        return "{" + ",".join(str(i) for i in self.indices) + "}"


def pattern(*indices: int) -> IndexPattern:
    return IndexPattern(tuple(sorted(indices)))


def index_bits_for(n: int, k: int) -> int:
    """p1 = floor(log2 C(n, k))."""
    count = int(comb(n, k, exact=True))
    if count < 1:
        raise CodebookError(f"C({n}, {k}) is zero")
    return count.bit_length() - 1


@dataclass(frozen=True)
class IndexCodebook:
    """Word i (as an unsigned integer) selects patterns[i]."""
    n: int
    k: int
    patterns: Tuple[IndexPattern, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "patterns", tuple(self.patterns))
        if len(self.patterns) != 2 ** self.p1:
            raise CodebookError(
                f"Codebook needs exactly {2 ** self.p1} patterns, got {len(self.patterns)}"
            )
        if len(set(self.patterns)) != len(self.patterns):
            raise CodebookError("Codebook patterns are not distinct")
        for p in self.patterns:
            p.validate(self.n, self.k)

    @property
    def p1(self) -> int:
        return index_bits_for(self.n, self.k)

    @property
    def size(self) -> int:
        return len(self.patterns)

    @cached_property
    def _word_of(self) -> Dict[IndexPattern, int]:
        return {p: i for i, p in enumerate(self.patterns)}

    @cached_property
    def masks(self) -> np.ndarray:
        """(2^p1, n) bool matrix; masks[i, a-1] is True iff a is in patterns[i]."""
        table = np.zeros((self.size, self.n), dtype=bool)
        for i, p in enumerate(self.patterns):
            table[i, [a - 1 for a in p.indices]] = True
        table.setflags(write=False)
        return table

    @cached_property
    def word_bits(self) -> np.ndarray:
        """(2^p1, p1) uint8 matrix of the bit word selecting each pattern."""
        table = np.array(
            [[(i >> (self.p1 - 1 - j)) & 1 for j in range(self.p1)] for i in range(self.size)],
            dtype=np.uint8,
        ).reshape(self.size, self.p1)
        table.setflags(write=False)
        return table

    def word_of(self, p: IndexPattern) -> int:
        try:
            return self._word_of[p]
        except KeyError:
            raise CodebookError(f"Pattern {p} is not in codebook '{self.name}'") from None

    def to_table(self) -> str:
        rows = [f"# {self.name} (n={self.n}, k={self.k}, p1={self.p1})", "bits\tpattern"]
        for i, p in enumerate(self.patterns):
            rows.append(f"{format(i, f'0{self.p1}b') if self.p1 else '-'}\t{p}")
        return "\n".join(rows)


def _from_bits(patterns_by_bits: Dict[str, Iterable[int]], n: int, k: int, name: str) -> IndexCodebook:
    ordered = sorted(patterns_by_bits.items(), key=lambda item: int(item[0], 2))
    return IndexCodebook(
        n=n, k=k, patterns=tuple(pattern(*idx) for _, idx in ordered), name=name
    )


def paper_codebook() -> IndexCodebook:
    """The n=4, k=2 table: 00->{1,2}, 11->{3,4}, 10->{1,3}, 01->{2,4}."""
    return _from_bits(
        {"00": (1, 2), "11": (3, 4), "10": (1, 3), "01": (2, 4)},
        n=4, k=2, name="n4k2-table",
    )


def combinadic_codebook(n: int, k: int) -> IndexCodebook:
    """
    First 2^p1 k-subsets of {1..n} in lexicographic order; word i maps to subset i.

    Raises:
        CodebookError: If k is outside [1, n-1]
    """
    if not 1 <= k <= n - 1:
        raise CodebookError(f"k must lie in [1, {n - 1}], got {k}")
    p1 = index_bits_for(n, k)
    subsets = itertools.islice(itertools.combinations(range(1, n + 1), k), 2 ** p1)
    return IndexCodebook(
        n=n, k=k, patterns=tuple(IndexPattern(s) for s in subsets), name=f"combinadic-n{n}k{k}"
    )


def complement(p: IndexPattern, n: int) -> IndexPattern:
    """The I_B positions left over by I_A = p."""
    if p.indices and p.indices[-1] > n:
        raise CodebookError(f"{p} does not fit in 1..{n}")
    return IndexPattern(tuple(a for a in range(1, n + 1) if a not in p.indices))


def encode_index_bits(cb: IndexCodebook, bits: str) -> IndexPattern:
    if len(bits) != cb.p1 or any(b not in "01" for b in bits):
        raise CodebookError(f"Expected {cb.p1} index bits, got '{bits}'")
    return cb.patterns[int(bits, 2) if bits else 0]


def decode_index_pattern(cb: IndexCodebook, p: IndexPattern) -> str:
    word = cb.word_of(p)
    return format(word, f"0{cb.p1}b") if cb.p1 else ""
