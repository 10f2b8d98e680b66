"""The action of q on Z/2dZ: multiplicative orders, Z_2d, orbits, strata, I_q(D)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import sympy


@lru_cache(maxsize=4096)
def mult_order(q: int, n: int) -> int:
    """Order of q modulo n (o_q(1) = 1)."""
    if n < 1:
        raise ValueError("modulus must be positive")
    if gcd(q, n) != 1:
        raise ValueError(f"not coprime: gcd({q}, {n}) != 1")
    if n == 1:
        return 1
    order = int(sympy.totient(n))
    for r in sympy.primefactors(order):
        while order % r == 0 and pow(q, order // r, n) == 1:
            order //= r
    return order


def totient(n: int) -> int:
    """Euler's phi with the convention phi(1) = 0."""
    return 0 if n == 1 else int(sympy.totient(n))


def orbit_length(q: int, D: int, n: int) -> int:
    """|n| = o_q(D / gcd(D, n))."""
    return mult_order(q, D // gcd(D, n % D))


def z2d_members(d: int) -> list[int]:
    """Z_2d: Z/2dZ minus {0, d/2, d, 3d/2} (d even) or {0, d} (d odd)."""
    D = 2 * d
    if d % 2 == 0:
        excluded = {0, d // 2, d, 3 * d // 2}
    else:
        excluded = {0, d}
    return [n for n in range(D) if n not in excluded]


@dataclass(frozen=True)
class Orbit:
    representative: int
    members: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class OrbitSet:
    q: int
    d: int
    members: tuple[int, ...]
    orbits: tuple[Orbit, ...]

    def __len__(self) -> int:
        return len(self.orbits)

    def __iter__(self):
        return iter(self.orbits)

    @property
    def lengths(self) -> list[int]:
        return [o.length for o in self.orbits]

    def stratum_of(self, n: int) -> int:
        """The e with n in Y_e, i.e. gcd(n, 2d) = 2d/e."""
        D = 2 * self.d
        return D // gcd(D, n)


@lru_cache(maxsize=1024)
def build_z2d(q: int, d: int) -> OrbitSet:
    if d < 1:
        raise ValueError("d must be >= 1")
    if gcd(2 * d, q) != 1:
        raise ValueError(f"gcd(2d, q) != 1 for d={d}, q={q}: strip p-part first")
    D = 2 * d
    members = z2d_members(d)
    seen: set[int] = set()
    orbits = []
    for n in members:
        if n in seen:
            continue
        orbit = [n]
        m = (n * q) % D
        while m != n:
            orbit.append(m)
            m = (m * q) % D
        seen.update(orbit)
        orbits.append(Orbit(n, tuple(sorted(orbit))))
    return OrbitSet(q, d, tuple(members), tuple(orbits))


def stratify(q: int, d: int) -> dict[int, int]:
    """Orbit counts per stratum Y_e (e | 2d, e > 2) of Z_2d.

    For even d the stratum e = 4 is {d/2, 3d/2}, which Z_2d excludes, so it
    does not appear.
    """
    orbit_set = build_z2d(q, d)
    D = 2 * d
    counts: dict[int, int] = {}
    for e in sympy.divisors(D):
        if e <= 2 or (e == 4 and d % 2 == 0):
            continue
        share = Fraction(totient(e), mult_order(q, e))
        if share.denominator != 1:  # pragma: no cover
            raise AssertionError(f"o_q({e}) does not divide phi({e})")
        counts[e] = int(share)
    observed: dict[int, int] = {}
    for orbit in orbit_set:
        e = orbit_set.stratum_of(orbit.representative)
        observed[e] = observed.get(e, 0) + 1
    if observed != {e: c for e, c in counts.items() if c}:  # pragma: no cover
        raise AssertionError("stratum counts disagree with orbit enumeration")
    return counts


def i_q(q: int, D: int) -> Fraction:
    """I_q(D) = sum over e | D of phi(e)/o_q(e), with phi(1) = 0."""
    if gcd(q, D) != 1:
        raise ValueError(f"not coprime: gcd({q}, {D}) != 1")
    return sum((Fraction(totient(e), mult_order(q, e)) for e in sympy.divisors(D)), Fraction(0))


def supersingular_witness(q: int, D: int) -> int | None:
    """Least a >= 1 with D | q^a + 1, or None when D is not supersingular."""
    if gcd(q, D) != 1:
        raise ValueError(f"not coprime: gcd({q}, {D}) != 1")
    x = 1
    for a in range(1, mult_order(q, D) + 1):
        x = (x * q) % D
        if x == (-1) % D:
            return a
    return None


def is_supersingular(q: int, D: int) -> bool:
    return supersingular_witness(q, D) is not None
