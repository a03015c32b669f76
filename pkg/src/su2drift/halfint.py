"""Half-integer angular momentum values stored as twice-j integers."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class HalfInteger:
    """An angular momentum j (or projection m) stored exactly as 2j."""

    twice: int

    @classmethod
    def of(cls, value) -> "HalfInteger":
        """Coerce a number (integer or half-odd-integer) or HalfInteger."""
        if isinstance(value, HalfInteger):
            return value
        twice = 2 * value
        rounded = round(twice)
        if abs(twice - rounded) > 1e-9:
            raise ValueError(f"{value!r} is not a multiple of 1/2")
        return cls(int(rounded))

    @property
    def value(self) -> float:
        return self.twice / 2

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __add__(self, other):
        return HalfInteger(self.twice + HalfInteger.of(other).twice)

    def __sub__(self, other):
        return HalfInteger(self.twice - HalfInteger.of(other).twice)

    def __neg__(self):
        return HalfInteger(-self.twice)

    def __abs__(self):
        return HalfInteger(abs(self.twice))

    def __float__(self):
        return self.twice / 2

    def __repr__(self):
        if self.twice % 2 == 0:
            return f"HalfInteger({self.twice // 2})"
        return f"HalfInteger({self.twice}/2)"


def twice(j) -> int:
    """Twice-j integer of a HalfInteger or numeric angular momentum."""
    if isinstance(j, HalfInteger):
        return j.twice
    t = 2 * j
    rounded = round(t)
    if abs(t - rounded) > 1e-9:
        raise ValueError(f"{j!r} is not a multiple of 1/2")
    return int(rounded)


def projection_valid(tj: int, tm: int) -> bool:
    """|m| <= j with m and j of the same integer/half-integer kind."""
    return abs(tm) <= tj and (tj - tm) % 2 == 0
