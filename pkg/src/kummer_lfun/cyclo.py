"""Exact arithmetic in Z[zeta_N], stored in the group ring Z[X]/(X^N - 1).

Values accumulate by exponent (cheap for character sums); reduction modulo
the cyclotomic polynomial only happens when an equality is decided.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

import sympy


def _poly_divmod(num: Sequence[int], den: Sequence[int]) -> tuple[list[int], list[int]]:
    """Exact division of integer polynomials (low degree first) by a monic divisor."""
    num = list(num)
    dd = len(den) - 1
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    if len(num) <= dd:
        return [0], num
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            quot[i - dd] = c
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    return quot, num[:dd]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(N: int) -> tuple[int, ...]:
    """Coefficients of Phi_N, low degree first."""
    if N < 1:
        raise ValueError("N must be positive")
    poly = [-1] + [0] * (N - 1) + [1]
    for e in sympy.divisors(N)[:-1]:
        poly, rem = _poly_divmod(poly, cyclotomic_polynomial(e))
        if any(rem):  # pragma: no cover
            raise AssertionError("inexact cyclotomic division")
    return tuple(poly)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class CycloElt:
    """sum(coeffs[i] * zeta_N**i) with unbounded integer coefficients.

    ``==`` tests equality of algebraic numbers (after lifting to a common
    order and reducing mod Phi_N), so instances are unhashable.
    """

    __slots__ = ("N", "coeffs")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, N: int, coeffs: Iterable[int]):
        coeffs = [int(c) for c in coeffs]
        if N < 1 or len(coeffs) != N:
            raise ValueError(f"need exactly {N} coefficients, got {len(coeffs)}")
        self.N = N
        self.coeffs = tuple(coeffs)

    # -- constructors ----------------------------------------------------
    @classmethod
    def integer(cls, c: int, N: int = 1) -> CycloElt:
        return cls(N, [c] + [0] * (N - 1))

    @classmethod
    def zero(cls, N: int = 1) -> CycloElt:
        return cls.integer(0, N)

    @classmethod
    def root(cls, N: int, i: int) -> CycloElt:
        coeffs = [0] * N
        coeffs[i % N] = 1
        return cls(N, coeffs)

    # -- structure --------------------------------------------------------
    def lift(self, M: int) -> CycloElt:
        """Re-express in Z[zeta_M] for a multiple M of N (zeta_N = zeta_M^(M/N))."""
        if M % self.N:
            raise ValueError(f"{M} is not a multiple of {self.N}")
        if M == self.N:
            return self
        step = M // self.N
        coeffs = [0] * M
        for i, c in enumerate(self.coeffs):
            coeffs[i * step] = c
        return CycloElt(M, coeffs)

    def _common(self, other) -> tuple[CycloElt, CycloElt]:
        if isinstance(other, int):
            other = CycloElt.integer(other, self.N)
        if not isinstance(other, CycloElt):
            return NotImplemented, NotImplemented
        M = _lcm(self.N, other.N)
        return self.lift(M), other.lift(M)

    def reduce(self) -> tuple[int, ...]:
        """Canonical residue mod Phi_N: phi(N) coefficients, low degree first."""
        _, rem = _poly_divmod(self.coeffs, cyclotomic_polynomial(self.N))
        return tuple(rem)

    def is_zero(self) -> bool:
        return not any(self.reduce())

    def equals_integer(self, c: int) -> bool:
        return (self - c).is_zero()

    def to_int(self) -> int:
        """The rational integer this element equals; ValueError if it is not rational."""
        red = self.reduce()
        if any(red[1:]):
            raise ValueError("element is not a rational integer")
        return red[0]

    def conj(self) -> CycloElt:
        N = self.N
        return CycloElt(N, [self.coeffs[(-i) % N] for i in range(N)])

    def abs_square(self) -> CycloElt:
        return self * self.conj()

    def galois(self, a: int) -> CycloElt:
        """Image under zeta_N -> zeta_N^a (a coprime to N)."""
        if gcd(a, self.N) != 1:
            raise ValueError("Galois exponent must be coprime to N")
        coeffs = [0] * self.N
        for i, c in enumerate(self.coeffs):
            coeffs[(a * i) % self.N] += c
        return CycloElt(self.N, coeffs)

    # -- ring operations ----------------------------------------------------
    def __add__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        return CycloElt(a.N, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> CycloElt:
        return CycloElt(self.N, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CycloElt(self.N, [c * other for c in self.coeffs])
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        N = a.N
        out = [0] * N
        bnz = [(j, y) for j, y in enumerate(b.coeffs) if y]
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in bnz:
                    out[(i + j) % N] += x * y
        return CycloElt(N, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> CycloElt:
        if n < 0:
            raise ValueError("negative powers are not ring elements")
        result = CycloElt.integer(1, self.N)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, (int, CycloElt)):
            return NotImplemented
        return (self - other).is_zero()

    def __repr__(self) -> str:
        terms = [f"{c}*z^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c]
        return f"CycloElt(N={self.N}: {' + '.join(terms) or '0'})"


def reduce(z: CycloElt) -> tuple[int, ...]:
    return z.reduce()


def equals_integer(z: CycloElt, c: int) -> bool:
    return z.equals_integer(c)


def abs_square(z: CycloElt) -> CycloElt:
    return z.abs_square()
