from __future__ import annotations

from dataclasses import dataclass
from math import gcd

__all__ = ["ModuliQuery", "InvalidQuery"]


class InvalidQuery(ValueError):
    pass


@dataclass(frozen=True, order=True)
class ModuliQuery:
    """Dimension parameter ``n`` (dimension 2n), degree ``2d`` and divisibility ``t``."""

    n: int
    d: int
    t: int

    def __post_init__(self):
        for name in ("n", "d", "t"):
            if not isinstance(getattr(self, name), int):
                raise InvalidQuery(f"{name} must be an integer")
        if self.n < 2:
            raise InvalidQuery(f"n must be at least 2, got {self.n}")
        if self.d < 1:
            raise InvalidQuery(f"d must be positive, got {self.d}")
        if self.t < 1:
            raise InvalidQuery(f"t must be positive, got {self.t}")
        if self.common % self.t:
            raise InvalidQuery(
                f"t={self.t} does not divide gcd(2d, 2n-2) = {self.common}"
            )

    @property
    def m1(self) -> int:
        """Order of the discriminant group of the degree lattice, ``2d``."""
        return 2 * self.d

    @property
    def m2(self) -> int:
        """Order of the discriminant group of the complement, ``2n - 2``."""
        return 2 * self.n - 2

    @property
    def common(self) -> int:
        return gcd(self.m1, self.m2)

    @property
    def discriminant(self) -> int:
        return 4 * self.d * (self.n - 1) // (self.t * self.t)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n, self.d, self.t)

    @classmethod
    def is_valid(cls, n: int, d: int, t: int) -> bool:
        return n >= 2 and d >= 1 and t >= 1 and gcd(2 * d, 2 * n - 2) % t == 0
