"""Dense subsets of an indexed finite universe, packed into a Python int."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


@dataclass(frozen=True)
class StateSet:
    """Subset of {0, ..., size-1}; bit w of `bits` is set iff w is a member."""

    size: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.size < 0:
            raise ValueError(f"universe size must be >= 0, got {self.size}")
        if self.bits < 0 or self.bits >> self.size:
            raise ValueError(
                f"bit pattern {self.bits:#x} has members outside universe of size {self.size}"
            )

    @classmethod
    def empty(cls, size: int) -> "StateSet":
        return cls(size, 0)

    @classmethod
    def full(cls, size: int) -> "StateSet":
        return cls(size, (1 << size) - 1)

    @classmethod
    def from_indices(cls, size: int, indices: Iterable[int]) -> "StateSet":
        """Build a set from member indices, validating each against the universe."""
        bits = 0
        for i in indices:
            if not 0 <= i < size:
                raise ValueError(f"index {i} out of range for universe of size {size}")
            bits |= 1 << i
        return cls(size, bits)

    def __contains__(self, index: int) -> bool:
        return 0 <= index < self.size and (self.bits >> index) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __repr__(self) -> str:
        return f"StateSet(size={self.size}, members={self.indices()})"

    def indices(self) -> tuple[int, ...]:
        return tuple(self)

    def _check_same_universe(self, other: "StateSet") -> None:
        if self.size != other.size:
            raise ValueError(
                f"universe size mismatch: {self.size} vs {other.size}"
            )

    def __or__(self, other: "StateSet") -> "StateSet":
        self._check_same_universe(other)
        return StateSet(self.size, self.bits | other.bits)

    def __and__(self, other: "StateSet") -> "StateSet":
        self._check_same_universe(other)
        return StateSet(self.size, self.bits & other.bits)

    def __sub__(self, other: "StateSet") -> "StateSet":
        self._check_same_universe(other)
        return StateSet(self.size, self.bits & ~other.bits)

    def is_subset_of(self, other: "StateSet") -> bool:
        self._check_same_universe(other)
        return self.bits & ~other.bits == 0

    def __le__(self, other: "StateSet") -> bool:
        return self.is_subset_of(other)
