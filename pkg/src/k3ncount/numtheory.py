"""Elementary number theory used by the component counters.

Everything here works on Python ints and is exact. Inputs stay well below
10**9, so trial division is all the factoring we need.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, prod

__all__ = [
    "Factorization",
    "factorize",
    "euler_phi",
    "num_prime_divisors",
    "is_quadratic_residue",
    "mod_inverse",
    "split_w",
]


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if prod(p**e for p, e in self.factors) != self.value:
            raise ValueError(f"factors {self.factors} do not multiply to {self.value}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def factorize(m: int) -> Factorization:
    """Prime factorization of ``m >= 1`` by trial division.

    >>> factorize(12).factors
    ((2, 2), (3, 1))
    """
    if m < 1:
        raise ValueError(f"factorize needs a positive integer, got {m}")
    factors = []
    rest = m
    p = 2
    while p * p <= rest:
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            factors.append((p, e))
        p += 1 if p == 2 else 2
    if rest > 1:
        factors.append((rest, 1))
    return Factorization(m, tuple(factors))


def euler_phi(m: int) -> int:
    result = m
    for p, _ in factorize(m).factors:
        result -= result // p
    return result


def num_prime_divisors(m: int) -> int:
    """Number of distinct primes dividing ``m``; zero for ``m = 1``."""
    return len(factorize(m).factors)


def is_quadratic_residue(a: int, m: int) -> bool:
    """True iff ``x**2 == a (mod m)`` has a solution.

    Plain scan over all residues, so composite and even moduli are handled
    without any symbol calculus. Zero counts as a residue.
    """
    if m < 1:
        raise ValueError(f"modulus must be positive, got {m}")
    a %= m
    return any(x * x % m == a for x in range(m))


def mod_inverse(a: int, m: int) -> int:
    if m < 1:
        raise ValueError(f"modulus must be positive, got {m}")
    if gcd(a, m) != 1:
        raise ValueError(f"{a} is not invertible modulo {m}")
    if m == 1:
        return 0
    return pow(a, -1, m)


def split_w(w: int, l1: int) -> tuple[int, int]:
    """Split ``w`` into the part supported on primes of ``gcd(w, l1)`` and the rest.

    Returns ``(w_plus, w_minus)`` with ``w_plus * w_minus == w`` and
    ``gcd(w_minus, l1) == 1``.
    """
    if w < 1 or l1 < 1:
        raise ValueError("split_w needs positive arguments")
    shared = set(factorize(gcd(w, l1)).primes)
    w_plus = prod(p**e for p, e in factorize(w).factors if p in shared)
    return w_plus, w // w_plus
