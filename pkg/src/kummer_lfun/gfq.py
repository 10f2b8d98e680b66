"""Finite fields F_{p^k} of odd characteristic backed by full discrete-log tables.

An element of F_{p^k} = F_p[x]/(f) is identified with the integer
``sum(c_i * p**i)`` built from its coefficients ``c_0 .. c_{k-1}``
(low degree first), so ids run over ``0 .. Q-1`` with 0 the zero element
and 1 the unit. All arithmetic helpers accept either Python ints or numpy
integer arrays of ids.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import sympy
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p, gf_mul, gf_pow_mod, gf_rem

from .errors import BudgetExceeded

DEFAULT_BUDGET = 2**24
BUDGET_ENV = "KUMMER_LFUN_BUDGET"

GENERATOR_VARIANTS = ("primary", "alternate")


def default_budget() -> int:
    value = os.environ.get(BUDGET_ENV)
    return int(value) if value else DEFAULT_BUDGET


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, k)`` with ``q == p**k``; raise for anything else."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    factors = sympy.factorint(q)
    if len(factors) != 1:
        raise ValueError(f"{q} is not a prime power")
    ((p, k),) = factors.items()
    return int(p), int(k)


# --- polynomials over F_p in sympy's high-degree-first convention ----------

def _id_to_poly(x: int, p: int, k: int) -> list[int]:
    digits = [(x // p**i) % p for i in range(k)]
    while len(digits) > 1 and digits[-1] == 0:
        digits.pop()
    return digits[::-1] if any(digits) else []


def _poly_to_id(poly, p: int) -> int:
    out = 0
    for c in poly:
        out = out * p + int(c) % p
    return out


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree k (low degree first)."""
    for low in itertools.product(range(p), repeat=k):
        if k > 1 and low[0] == 0:
            continue
        coeffs = list(low) + [1]
        if gf_irreducible_p(coeffs[::-1], p, ZZ):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def _primitive_ids(p: int, k: int, modulus: tuple[int, ...], count: int) -> list[int]:
    Q = p**k
    f = list(modulus[::-1])
    cofactors = [(Q - 1) // r for r in sympy.primefactors(Q - 1)]
    found = []
    for x in range(1, Q):
        g = _id_to_poly(x, p, k)
        if all(gf_pow_mod(g, e, f, p, ZZ) != [1] for e in cofactors):
            found.append(x)
            if len(found) == count:
                break
    return found


def _mult_matrix(p: int, k: int, modulus: tuple[int, ...], g: int) -> np.ndarray:
    """Matrix of x -> g*x acting on coefficient vectors (columns = images of x^j)."""
    f = list(modulus[::-1])
    gp = _id_to_poly(g, p, k)
    M = np.zeros((k, k), dtype=np.int64)
    for j in range(k):
        img = _poly_to_id(gf_rem(gf_mul(gp, [1] + [0] * j, p, ZZ), f, p, ZZ), p)
        for i in range(k):
            M[i, j] = (img // p**i) % p
    return M


def _mat_pow(M: np.ndarray, e: int, p: int) -> np.ndarray:
    R = np.eye(M.shape[0], dtype=np.int64)
    B = M.copy()
    while e:
        if e & 1:
            R = (R @ B) % p
        B = (B @ B) % p
        e >>= 1
    return R


def _exp_table(p: int, k: int, M: np.ndarray) -> np.ndarray:
    Q = p**k
    n = Q - 1
    weights = p ** np.arange(k, dtype=np.int64)
    block = max(1, int(np.ceil(np.sqrt(n))))
    V = np.zeros((block, k), dtype=np.int64)
    v = np.zeros(k, dtype=np.int64)
    v[0] = 1
    for i in range(block):
        V[i] = v
        v = (M @ v) % p
    step = _mat_pow(M, block, p).T
    out = np.empty(n, dtype=np.int64)
    W = V
    for start in range(0, n, block):
        stop = min(n, start + block)
        out[start:stop] = W[: stop - start] @ weights
        W = (W @ step) % p
    return out


@dataclass(eq=False, repr=False)
class FieldTable:
    """F_Q with Q = p^k, a fixed primitive element and its full dlog table."""

    p: int
    k: int
    modulus: tuple[int, ...]
    generator: int
    variant: str
    exp_table: np.ndarray = field(repr=False)
    log_table: np.ndarray = field(repr=False)

    @property
    def Q(self) -> int:
        return self.p**self.k

    @property
    def order(self) -> int:
        return self.Q - 1

    def __repr__(self) -> str:
        return f"FieldTable(p={self.p}, k={self.k}, generator={self.generator}, variant={self.variant!r})"

    def __reduce__(self):
        return (_tabulate, (self.p, self.k, self.variant))

    @property
    def elements(self) -> np.ndarray:
        return np.arange(self.Q, dtype=np.int64)

    @property
    def nonzero(self) -> np.ndarray:
        return np.arange(1, self.Q, dtype=np.int64)

    # -- representation ------------------------------------------------------
    def digits(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        weights = self.p ** np.arange(self.k, dtype=np.int64)
        return (a[..., None] // weights) % self.p

    def from_digits(self, D) -> np.ndarray:
        weights = self.p ** np.arange(self.k, dtype=np.int64)
        return (np.asarray(D, dtype=np.int64) % self.p) @ weights

    def from_int(self, n: int) -> int:
        """Image of the rational integer n in the prime field."""
        return n % self.p

    # -- arithmetic ----------------------------------------------------------
    def add(self, a, b):
        if self.k == 1:
            return _wrap((np.asarray(a) + np.asarray(b)) % self.p, a, b)
        return _wrap(self.from_digits(self.digits(a) + self.digits(b)), a, b)

    def neg(self, a):
        if self.k == 1:
            return _wrap((-np.asarray(a)) % self.p, a)
        return _wrap(self.from_digits(-self.digits(a)), a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a_ = np.asarray(a, dtype=np.int64)
        b_ = np.asarray(b, dtype=np.int64)
        la, lb = self.log_table[a_], self.log_table[b_]
        out = self.exp_table[(la + lb) % self.order]
        out = np.where((a_ == 0) | (b_ == 0), 0, out)
        return _wrap(out, a, b)

    def pow(self, a, n: int):
        a_ = np.asarray(a, dtype=np.int64)
        if n == 0:
            return _wrap(np.ones_like(a_), a)
        if n < 0 and np.any(a_ == 0):
            raise ZeroDivisionError("negative power of zero")
        out = self.exp_table[(self.log_table[a_] * n) % self.order]
        return _wrap(np.where(a_ == 0, 0, out), a)

    def inv(self, a):
        return self.pow(a, -1)

    def dlog(self, x):
        """Discrete log base the fixed generator, in [0, Q-2]."""
        x_ = np.asarray(x, dtype=np.int64)
        if np.any(x_ == 0):
            raise ValueError("dlog of zero")
        return _wrap(self.log_table[x_], x)

    def exp(self, e):
        return _wrap(self.exp_table[np.asarray(e, dtype=np.int64) % self.order], e)

    def frobenius(self, a):
        return self.pow(a, self.p)


def _wrap(out, *inputs):
    if all(np.ndim(x) == 0 for x in inputs):
        return int(out)
    return out


def build_field(p: int, k: int = 1, variant: str = "primary", budget: int | None = None) -> FieldTable:
    """Build F_{p^k} with the deterministic modulus and generator.

    ``variant="alternate"`` selects the second smallest primitive element.
    """
    if p == 2:
        raise ValueError("odd characteristic required")
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError("extension degree must be >= 1")
    if variant not in GENERATOR_VARIANTS:
        raise ValueError(f"unknown generator variant {variant!r}")
    budget = default_budget() if budget is None else budget
    Q = p**k
    if Q > budget:
        raise BudgetExceeded(f"field too large: {p}^{k} = {Q} exceeds budget {budget}")
    return _tabulate(p, k, variant)


@lru_cache(maxsize=64)
def _tabulate(p: int, k: int, variant: str) -> FieldTable:
    Q = p**k
    modulus = smallest_irreducible(p, k)
    idx = GENERATOR_VARIANTS.index(variant)
    primitive = _primitive_ids(p, k, modulus, idx + 1)
    if len(primitive) <= idx:
        raise ValueError(f"F_{Q} has no {variant} generator")
    g = primitive[idx]
    exp_table = _exp_table(p, k, _mult_matrix(p, k, modulus, g))
    log_table = np.full(Q, -1, dtype=np.int64)
    log_table[exp_table] = np.arange(Q - 1, dtype=np.int64)
    if np.any(log_table[1:] < 0):
        raise AssertionError("generator is not primitive")  # pragma: no cover
    exp_table.setflags(write=False)
    log_table.setflags(write=False)
    return FieldTable(p, k, modulus, g, variant, exp_table, log_table)


def field_for(q: int, m: int = 1, variant: str = "primary", budget: int | None = None) -> FieldTable:
    """F_{q^m} for a prime power q."""
    p, k = prime_power(q)
    return build_field(p, k * m, variant, budget)


# --- subfields ---------------------------------------------------------------

@lru_cache(maxsize=64)
def embedding_log(big: FieldTable, small: FieldTable) -> int:
    """dlog in ``big`` of the image of ``small.generator`` under the fixed embedding.

    The embedding sends the class of x in F_p[x]/(f_small) to the smallest
    root (by id) of f_small in ``big``; its image is the set of solutions
    of y^(p^k_small) = y.
    """
    if small.p != big.p or big.k % small.k:
        raise ValueError("not a subfield")
    ys = big.elements
    acc = np.zeros_like(ys)
    for c in reversed(small.modulus):
        acc = big.add(big.mul(acc, ys), c)
    roots = ys[acc == 0]
    if roots.size == 0:  # pragma: no cover
        raise AssertionError("modulus of subfield has no root")
    y = int(roots[0])
    image = 0
    ypow = 1
    for c in small.digits(small.generator).tolist():
        image = big.add(image, big.mul(c, ypow))
        ypow = big.mul(ypow, y)
    return int(big.dlog(image))


def embed(big: FieldTable, small: FieldTable, x):
    """Image in ``big`` of element(s) of ``small``."""
    L = embedding_log(big, small)
    x_ = np.asarray(x, dtype=np.int64)
    e = small.log_table[x_]
    out = big.exp_table[(e * L) % big.order]
    return _wrap(np.where(x_ == 0, 0, out), x)


def norm_log_factor(big: FieldTable, small: FieldTable) -> int:
    """t with dlog_small(N(x)) == t * dlog_big(x) (mod |small^x|)."""
    L = embedding_log(big, small)
    c = big.order // small.order
    # L = c*u with u a unit mod small.order, and N(g_big) = g_big^c = embed(g_small^(1/u))
    u = (L // c) % small.order
    return pow(u, -1, small.order) if small.order > 1 else 0


def relative_norm(big: FieldTable, small: FieldTable, x):
    """N_{big/small}(x) = x^((Q_big-1)/(Q_small-1)), returned as element(s) of ``small``."""
    t = norm_log_factor(big, small)
    x_ = np.asarray(x, dtype=np.int64)
    e = big.log_table[x_]
    out = small.exp_table[(e * t) % small.order] if small.order > 1 else np.ones_like(x_)
    return _wrap(np.where(x_ == 0, 0, out), x)
