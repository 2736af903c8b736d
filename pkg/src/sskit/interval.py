from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` at confidence/credibility ``level``.

    An empty interval (two random intervals that failed to intersect) has
    ``empty=True`` and NaN endpoints; it contains nothing and has length 0.
    """

    lo: float
    hi: float
    level: float
    empty: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if not 0 < self.level < 1:
            raise DomainError(f"level must lie in (0, 1), got {self.level!r}")
        if not self.empty and not self.lo <= self.hi:
            raise DomainError(f"interval endpoints out of order: {self.lo!r} > {self.hi!r}")

    @classmethod
    def make_empty(cls, level: float) -> "Interval":
        return cls(math.nan, math.nan, level, empty=True)

    @property
    def length(self) -> float:
        return 0.0 if self.empty else self.hi - self.lo

    def contains(self, value: float) -> bool:
        return (not self.empty) and self.lo <= value <= self.hi

    def clamp(self, lo: float = 0.0, hi: float = 1.0) -> "Interval":
        if self.empty:
            return self
        a = min(max(self.lo, lo), hi)
        b = min(max(self.hi, lo), hi)
        return Interval(a, b, self.level)

    def to_dict(self) -> dict:
        if self.empty:
            return {"lo": None, "hi": None, "level": self.level, "empty": True}
        return {"lo": self.lo, "hi": self.hi, "level": self.level, "empty": False}
