"""
Partition model: Jordan types labelling the nilpotent orbits of sl_n
"""

from typing import Iterator, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from algebra.errors import InvalidPartitionError, ZeroOrbitError


class Partition(BaseModel):
    """Weakly decreasing positive parts p_1 >= ... >= p_s with n = sum p_i >= 2"""

    model_config = ConfigDict(frozen=True)

    parts: Tuple[int, ...] = Field(..., description="Parts in weakly decreasing order")

    @field_validator("parts")
    @classmethod
    def _check_parts(cls, parts: Tuple[int, ...]) -> Tuple[int, ...]:
        if not parts:
            raise ValueError("partition has no parts")
        if any(p < 1 for p in parts):
            raise ValueError("parts must be positive")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError("parts must be weakly decreasing")
        if sum(parts) < 2:
            raise ValueError("partitions of n < 2 do not label an sl_n orbit")
        return parts

    @classmethod
    def of(cls, parts, n: Optional[int] = None) -> "Partition":
        """
        Validated partition

        Raises:
            InvalidPartitionError: malformed parts or sum different from n
        """
        try:
            partition = cls(parts=tuple(int(p) for p in parts))
        except (ValidationError, TypeError, ValueError) as exc:
            raise InvalidPartitionError(f"invalid partition {tuple(parts)}: {exc}") from exc
        if n is not None and partition.n != n:
            raise InvalidPartitionError(f"partition {partition} sums to {partition.n}, not {n}")
        return partition

    @classmethod
    def parse(cls, text: str, n: Optional[int] = None) -> "Partition":
        """Parse the command line form "3,1" """
        try:
            parts = [int(x) for x in text.replace(" ", "").split(",") if x]
        except ValueError as exc:
            raise InvalidPartitionError(f"cannot parse partition {text!r}") from exc
        return cls.of(parts, n)

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def is_zero_orbit(self) -> bool:
        return all(p == 1 for p in self.parts)

    @property
    def largest(self) -> int:
        return self.parts[0]

    @property
    def smallest(self) -> int:
        return self.parts[-1]

    def multiplicity(self, part: int) -> int:
        return sum(1 for p in self.parts if p == part)

    def require_nonzero(self) -> "Partition":
        if self.is_zero_orbit:
            raise ZeroOrbitError(f"partition {self} labels the zero orbit")
        return self

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.parts)


def partitions_of(n: int, include_zero: bool = False) -> Iterator[Partition]:
    """All partitions of n in reverse lexicographic order"""

    def _gen(remaining: int, cap: int) -> Iterator[List[int]]:
        if remaining == 0:
            yield []
            return
        for first in range(min(remaining, cap), 0, -1):
            for rest in _gen(remaining - first, first):
                yield [first] + rest

    for parts in _gen(n, n):
        partition = Partition.of(parts)
        if include_zero or not partition.is_zero_orbit:
            yield partition


def centralizer_dimension(partition: Partition) -> int:
    """sum (2i - 1) p_i - 1"""
    return sum((2 * i - 1) * p for i, p in enumerate(partition.parts, start=1)) - 1
