"""Exact integer primitives shared by every other module.

Everything here is plain Python integer arithmetic: Legendre symbols via
Euler's criterion, modular inverses, primitive roots of odd prime powers,
and p-adic valuations.  Exact rationals are `fractions.Fraction` throughout
the package; moduli stay small enough (q <= ~10^6) that trial division is a
perfectly good primality test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = [
    "is_odd_prime",
    "legendre",
    "mod_inverse",
    "PrimePower",
    "primitive_root",
    "padic_valuation",
    "prime_factors",
    "odd_primes_upto",
]


def is_odd_prime(p: int) -> bool:
    """Deterministic trial-division primality test, restricted to odd p >= 3."""
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def odd_primes_upto(n: int) -> list[int]:
    """All odd primes p with 3 <= p <= n, ascending."""
    return [p for p in range(3, n + 1, 2) if is_odd_prime(p)]


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n >= 1, ascending."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p.

    Returns 0 if p | a, +1 if a is a nonzero square mod p, -1 otherwise.
    Computed by Euler's criterion a^((p-1)/2) mod p.
    """
    if not is_odd_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def mod_inverse(a: int, n: int) -> int:
    """Inverse of a mod n, in [1, n).  Raises ValueError when gcd(a, n) > 1."""
    if n < 2:
        raise ValueError(f"modulus must be >= 2, got {n}")
    try:
        return pow(a, -1, n)
    except ValueError:
        raise ValueError(f"{a} is not invertible mod {n} (gcd = {math.gcd(a, n)})") from None


@dataclass(frozen=True)
class PrimePower:
    """An odd prime-power modulus q = p^m with phi(q) = p^(m-1)(p-1) cached."""

    p: int
    m: int
    q: int = field(init=False)
    phi: int = field(init=False)

    def __post_init__(self):
        if not is_odd_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        object.__setattr__(self, "q", self.p ** self.m)
        object.__setattr__(self, "phi", self.q // self.p * (self.p - 1))

    def __str__(self):
        return f"{self.p}^{self.m}" if self.m > 1 else str(self.p)


def primitive_root(pp: PrimePower) -> int:
    """Smallest g >= 2 of multiplicative order exactly phi(q) mod q = p^m.

    (Z/p^m Z)^* is cyclic for odd p, so a root exists; g generates the whole
    group iff g^(phi/ell) != 1 for every prime ell | phi.
    """
    factors = prime_factors(pp.phi)
    for g in range(2, pp.q):
        if g % pp.p == 0:
            continue
        if all(pow(g, pp.phi // ell, pp.q) != 1 for ell in factors):
            return g
    raise ArithmeticError(f"no primitive root found mod {pp.q}")  # unreachable for valid pp


def padic_valuation(n: int, p: int) -> int | float:
    """Largest v with p^v | n; math.inf for n = 0 (|0|_p = 0 convention)."""
    if n == 0:
        return math.inf
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v
