"""Multiplicative characters of finite fields and the character sums built on them.

A character on F_Q is stored as an exponent step s: chi(g^e) = zeta_{Q-1}^(s*e),
where g is the field's fixed generator. Nontrivial characters vanish at 0,
the trivial one takes the value 1 there.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .cyclo import CycloElt, _lcm
from .errors import BudgetExceeded
from .gfq import FieldTable, build_field, default_budget, norm_log_factor, prime_power
from .orbits import orbit_length

NAIVE_B_BUDGET = 2**10


@dataclass(frozen=True, eq=False)
class Character:
    field: FieldTable
    step: int

    def __post_init__(self):
        object.__setattr__(self, "step", self.step % self.field.order)

    @property
    def order(self) -> int:
        n = self.field.order
        return n // gcd(n, self.step)

    @property
    def is_trivial(self) -> bool:
        return self.step == 0

    @property
    def zero_value(self) -> int:
        return 1 if self.is_trivial else 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Character)
            and other.field is self.field
            and other.step == self.step
        )

    def __hash__(self) -> int:
        return hash((id(self.field), self.step))

    def __repr__(self) -> str:
        return f"Character(Q={self.field.Q}, step={self.step}, order={self.order})"

    def __mul__(self, other: Character) -> Character:
        if other.field is not self.field:
            raise ValueError("characters live on different fields")
        return Character(self.field, self.step + other.step)

    def __pow__(self, n: int) -> Character:
        return Character(self.field, self.step * n)

    def inverse(self) -> Character:
        return Character(self.field, -self.step)

    conj = inverse

    def exponents(self, xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Exponents of chi(x) in Z/order(chi), plus a mask of where chi(x) != 0."""
        xs = np.asarray(xs, dtype=np.int64)
        M = self.order
        unit = self.step // (self.field.order // M)
        logs = self.field.log_table[xs]
        exps = np.where(xs == 0, 0, (logs % M) * unit % M)
        mask = (xs != 0) | self.is_trivial
        return exps, mask

    def __call__(self, x: int) -> CycloElt:
        exps, mask = self.exponents(np.asarray([x]))
        if not mask[0]:
            return CycloElt.zero(self.order)
        return CycloElt.root(self.order, int(exps[0]))


def trivial(F: FieldTable) -> Character:
    return Character(F, 0)


def quadratic(F: FieldTable) -> Character:
    """The unique character of order 2 (lambda)."""
    return Character(F, F.order // 2)


def tau(F: FieldTable) -> Character:
    """The Teichmueller-style generator of the character group: g -> zeta_{Q-1}."""
    return Character(F, 1)


def all_characters(F: FieldTable) -> list[Character]:
    return [Character(F, s) for s in range(F.order)]


def char_eval(chi: Character, x: int) -> CycloElt:
    return chi(x)


def _accumulate(N: int, exps: np.ndarray, weights: np.ndarray | None = None) -> CycloElt:
    counts = np.bincount(exps % N, weights=weights, minlength=N)
    return CycloElt(N, [int(round(c)) for c in counts])


def jacobi(F: FieldTable, chi1: Character, chi2: Character) -> CycloElt:
    """j_F(chi1, chi2) = -sum_{x1 + x2 = 1} chi1(x1) chi2(x2)."""
    if chi1.field is not F or chi2.field is not F:
        raise ValueError("characters must live on F")
    M1, M2 = chi1.order, chi2.order
    N = _lcm(M1, M2)
    x1 = F.elements
    x2 = F.sub(1, x1)
    e1, m1 = chi1.exponents(x1)
    e2, m2 = chi2.exponents(x2)
    keep = m1 & m2
    exps = e1[keep] * (N // M1) + e2[keep] * (N // M2)
    return -_accumulate(N, exps)


def _lambda_values(F: FieldTable, vals: np.ndarray) -> np.ndarray:
    """lambda(v) in {0, 1, -1} for an array of field elements."""
    logs = F.log_table[vals]
    return np.where(vals == 0, 0, 1 - 2 * (logs % 2))


def b_sum(F: FieldTable, chi: Character, budget: int = NAIVE_B_BUDGET) -> CycloElt:
    """Naive double sum B(F, chi) = sum_x sum_{z != 0} chi(z) lambda(x^3 + x^2 z - 4 x z)."""
    if chi.field is not F:
        raise ValueError("character must live on F")
    if F.Q > budget:
        raise BudgetExceeded(f"naive B-sum over F_{F.Q} exceeds budget; use closed form")
    M = chi.order
    z = F.nonzero
    ez, _ = chi.exponents(z)
    total = np.zeros(M, dtype=np.int64)
    four = F.from_int(4)
    for x in range(F.Q):
        x2 = F.mul(x, x)
        x3 = F.mul(x2, x)
        slope = F.sub(x2, F.mul(four, x))
        vals = F.add(x3, F.mul(z, slope))
        lam = _lambda_values(F, vals)
        total += np.bincount(ez, weights=lam, minlength=M).astype(np.int64)
    return CycloElt(M, total.tolist())


def b_closed_form(F: FieldTable, chi: Character) -> CycloElt:
    """B(F, chi) through Jacobi sums, dispatched on the order of chi."""
    order = chi.order
    if order == 1:
        return CycloElt.integer(F.Q)
    if order == 2:
        return CycloElt.integer(1)
    jj = jacobi(F, chi, chi)
    if order == 4:
        return jj
    lam = quadratic(F)
    return (chi**2)(F.from_int(4)) * jj * jacobi(F, lam * chi**2, chi.inverse())


def quartic_sum(F: FieldTable) -> int:
    """sum_x lambda(x (x^2 - 4)) by direct enumeration."""
    x = F.elements
    vals = F.mul(x, F.sub(F.mul(x, x), F.from_int(4)))
    return int(_lambda_values(F, vals).sum())


def quartic_identity_check(F: FieldTable) -> bool:
    rhs = CycloElt.zero(4)
    if F.order % 4 == 0:
        for s in (F.order // 4, 3 * F.order // 4):
            chi = Character(F, s)
            rhs = rhs - jacobi(F, chi, chi)
    return rhs.equals_integer(quartic_sum(F))


def lift_by_norm(chi: Character, s: int, big: FieldTable | None = None) -> Character:
    """chi composed with the norm from the degree-s extension of chi's field."""
    F = chi.field
    if s < 1:
        raise ValueError("extension degree must be positive")
    if s == 1 and big is None:
        return chi
    if big is None:
        big = build_field(F.p, F.k * s, F.variant, max(default_budget(), F.Q))
    if big.k != F.k * s:
        raise ValueError("target field has the wrong degree")
    t = norm_log_factor(big, F)
    return Character(big, chi.step * t * (big.order // F.order))


def tau_n(q: int, d: int, n: int, variant: str = "primary", budget: int | None = None) -> Character:
    """tau_n = tau^((q^|n| - 1) n / 2d) on F_{q^|n|}."""
    D = 2 * d
    if gcd(D, q) != 1:
        raise ValueError("gcd(2d, q) must be 1")
    n %= D
    if n == 0:
        raise ValueError("n must be nonzero mod 2d")
    p, k = prime_power(q)
    length = orbit_length(q, D, n)
    budget = default_budget() if budget is None else budget
    if q**length > budget:
        raise BudgetExceeded(
            f"orbit too long for exact computation: n={n} mod {D} needs F_{q}^{length}"
        )
    F = build_field(p, k * length, variant, budget)
    return Character(F, F.order * n // D)


def beta(q: int, d: int, n: int, variant: str = "primary", budget: int | None = None) -> CycloElt:
    """beta(n) = tau_n^2(4) j(tau_n, tau_n) j(lambda tau_n^2, tau_n^-1), in Z[zeta_2d]."""
    chi = tau_n(q, d, n, variant, budget)
    F = chi.field
    lam = quadratic(F)
    val = (chi**2)(F.from_int(4)) * jacobi(F, chi, chi) * jacobi(F, lam * chi**2, chi.inverse())
    return val.lift(2 * d) if (2 * d) % val.N == 0 else val
