"""The curves E_d : y^2 = x (x^2 + t^(2d) x - 4 t^(2d)) over F_q(t).

Every fiber is handled through a model y^2 = x^3 + a2 x^2 + a4 x that is
minimal at the place in question:

* tau not in {0, inf}: the global model, a2 = tau^(2d), a4 = -4 tau^(2d);
* tau = 0, d even: y^2 = x (x^2 + t^d x - 4), reducing to x (x^2 - 4);
* tau = 0, d odd:  y^2 = x (x^2 + t^(d+1) x - 4 t^2), reducing to x^3;
* tau = inf: with s = 1/t, Y^2 = X (X^2 + X - 4 s^(2d)), reducing to X^2 (X + 1).

Traces and point counts are obtained by enumerating x and summing the
quadratic character, never from closed formulas.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from math import comb, gcd

import numpy as np
import sympy

from .errors import BadReductionError
from .gfq import FieldTable, field_for, prime_power


def normalize(q: int, d: int) -> tuple[int, int]:
    """Write d = d' p^e with gcd(d', p) = 1."""
    if d < 1:
        raise ValueError("d must be >= 1")
    p, _ = prime_power(q)
    e = 0
    while d % p == 0:
        d //= p
        e += 1
    return d, e


def conductor_degrees(d_prime: int) -> tuple[int, int]:
    """(deg N_d, deg N_d^f) as functions of the prime-to-p part d'."""
    total = 2 * d_prime + 1 if d_prime % 2 == 0 else 2 * d_prime + 3
    return total, 2 * d_prime


def _poly_t(terms: dict[int, int]) -> dict[int, int]:
    return {deg: c for deg, c in sorted(terms.items()) if c}


@dataclass(frozen=True)
class CurveDescriptor:
    q: int
    d: int
    d_prime: int
    p_exponent: int
    a2: dict[int, int]              # polynomials in t as {degree: coefficient}
    a4: dict[int, int]
    discriminant: dict[int, int]
    j_numerator: dict[int, int]
    j_denominator: dict[int, int]
    conductor_degree: int
    conductor_degree_finite: int

    @property
    def l_degree(self) -> int:
        return self.conductor_degree - 4


def invariants(q: int, d: int) -> CurveDescriptor:
    d_prime, e = normalize(q, d)
    n_deg, nf_deg = conductor_degrees(d_prime)
    # Delta = 2^8 t^(6d) (t^(2d) + 16); j = 2^4 (t^(2d) + 12)^3 / (t^(2d) + 16)
    disc = _poly_t({8 * d: 256, 6 * d: 256 * 16})
    j_num = _poly_t({2 * d * i: 16 * comb(3, i) * 12 ** (3 - i) for i in range(4)})
    j_den = _poly_t({2 * d: 1, 0: 16})
    return CurveDescriptor(
        q=q, d=d, d_prime=d_prime, p_exponent=e,
        a2={2 * d: 1}, a4={2 * d: -4},
        discriminant=disc, j_numerator=j_num, j_denominator=j_den,
        conductor_degree=n_deg, conductor_degree_finite=nf_deg,
    )


@dataclass(frozen=True)
class PlacePoint:
    """A degree-1 point of P^1 over F_{q^m}; tau=None is the point at infinity."""

    m: int
    tau: int | None


INFINITY = None


def fiber_model(F: FieldTable, d: int, tau: int | None) -> tuple[int, int]:
    """(a2, a4) of the reduced minimal model at tau, as elements of F."""
    if tau is None:
        return 1, 0
    if tau == 0:
        return (0, F.from_int(-4)) if d % 2 == 0 else (0, 0)
    z = F.pow(tau, 2 * d)
    return z, F.mul(F.from_int(-4), z)


def _lambda(F: FieldTable, vals) -> np.ndarray:
    vals = np.asarray(vals, dtype=np.int64)
    return np.where(vals == 0, 0, 1 - 2 * (F.log_table[vals] % 2))


def _cubic_lambda_sums(F: FieldTable, a2, a4) -> np.ndarray:
    """sum_x lambda(x^3 + a2 x^2 + a4 x) for each (a2, a4) pair in the input arrays."""
    a2 = np.atleast_1d(np.asarray(a2, dtype=np.int64))
    a4 = np.atleast_1d(np.asarray(a4, dtype=np.int64))
    x = F.elements
    x2 = F.mul(x, x)
    x3 = F.mul(x2, x)
    out = np.empty(a2.shape[0], dtype=np.int64)
    chunk = max(1, 2**20 // F.Q)
    for start in range(0, a2.shape[0], chunk):
        b2 = a2[start:start + chunk, None]
        b4 = a4[start:start + chunk, None]
        vals = F.add(F.add(x3, F.mul(b2, x2)), F.mul(b4, x))
        out[start:start + chunk] = _lambda(F, vals).sum(axis=1)
    return out


def _fiber_disc_zero(F: FieldTable, a2: int, a4: int) -> bool:
    # x (x^2 + a2 x + a4) is singular iff a4 == 0 or a2^2 - 4 a4 == 0
    return a4 == 0 or F.sub(F.mul(a2, a2), F.mul(F.from_int(4), a4)) == 0


def is_bad_place(q: int, d: int, place: PlacePoint) -> bool:
    F = field_for(q, place.m)
    a2, a4 = fiber_model(F, d, place.tau)
    return _fiber_disc_zero(F, a2, a4)


def count_points(q: int, d: int, m: int, tau: int | None, require_good: bool = True) -> int:
    """Number of F_{q^m}-points on the reduced minimal model at tau (with the point at infinity)."""
    F = field_for(q, m)
    a2, a4 = fiber_model(F, d, tau)
    if require_good and _fiber_disc_zero(F, a2, a4):
        raise BadReductionError(f"bad reduction at tau={tau} over F_{q}^{m}")
    lam_sum = int(_cubic_lambda_sums(F, a2, a4)[0])
    return F.Q + lam_sum + 1


def a_trace(q: int, d: int, m: int, tau: int | None) -> int:
    """A_d(tau, q^m) = q^m + 1 - #fiber(F_{q^m}); at bad tau: +1 split, -1 nonsplit, 0 additive."""
    F = field_for(q, m)
    return F.Q + 1 - count_points(q, d, m, tau, require_good=False)


def log_l_coefficient(q: int, d: int, m: int) -> int:
    """c_m = sum of A_d(tau, q^m) over tau in P^1(F_{q^m})."""
    F = field_for(q, m)
    taus = F.nonzero
    z = F.pow(taus, 2 * d)
    zs, mult = np.unique(z, return_counts=True)
    a4 = F.mul(F.from_int(-4), zs)
    traces = -_cubic_lambda_sums(F, zs, a4)
    total = int((traces * mult).sum())
    total += a_trace(q, d, m, 0) + a_trace(q, d, m, INFINITY)
    return total


@dataclass(frozen=True)
class CensusEntry:
    tau: int | None
    kind: str            # good | split | nonsplit | additive
    trace: int
    predicted: str       # classification asserted for E_d at this place
    hasse_ok: bool

    @property
    def matches(self) -> bool:
        return self.kind == self.predicted


def _predicted_kind(F: FieldTable, d: int, tau: int | None) -> str:
    if tau is None:
        return "split"
    if tau == 0:
        return "good" if d % 2 == 0 else "additive"
    if F.pow(tau, 2 * d) == F.from_int(-16):
        return "split"
    return "good"


def reduction_census(q: int, d: int, m: int) -> list[CensusEntry]:
    """Classify every tau in P^1(F_{q^m}) by reduction type, read off the fiber itself."""
    F = field_for(q, m)
    taus: list[int | None] = [None] + list(range(F.Q))
    out = []
    bound = 4 * F.Q
    for tau in taus:
        a2, a4 = fiber_model(F, d, tau)
        trace = a_trace(q, d, m, tau)
        if not _fiber_disc_zero(F, a2, a4):
            kind = "good"
        elif a2 == 0 and a4 == 0:
            kind = "additive"
        else:
            kind = {1: "split", -1: "nonsplit"}[trace]
        hasse_ok = kind != "good" or trace * trace <= bound
        out.append(CensusEntry(tau, kind, trace, _predicted_kind(F, d, tau), hasse_ok))
    return out


def m_d_roots(q: int, d: int, m: int) -> list[int]:
    """Roots of t^(2d) + 16 in F_{q^m}."""
    F = field_for(q, m)
    taus = F.nonzero
    return taus[F.pow(taus, 2 * d) == F.from_int(-16)].tolist()


# --- torsion and rational points -----------------------------------------

@dataclass
class TorsionReport:
    q: int
    d: int
    group_orders: dict[tuple[int, int | None], int] = field(default_factory=dict)
    gcd_bound: int = 0
    prime_to_p_bound: int = 0
    p0_on_curve: bool = False
    p0_two_torsion: bool = False
    pd_on_curve: bool = False
    pd_distinct: bool = False

    @property
    def certified(self) -> bool:
        """Torsion is Z/2Z and P_d has infinite order."""
        return (
            self.prime_to_p_bound == 2
            and self.p0_on_curve and self.p0_two_torsion
            and self.pd_on_curve and self.pd_distinct
        )


def default_places(q: int, d: int, m_max: int = 2) -> list[PlacePoint]:
    places = []
    for m in range(1, m_max + 1):
        F = field_for(q, m)
        for tau in [None] + list(range(F.Q)):
            place = PlacePoint(m, tau)
            if not is_bad_place(q, d, place):
                places.append(place)
    return places


def _symbolic_checks(d: int) -> tuple[bool, bool, bool, bool]:
    t, x, y = sympy.symbols("t x y")
    rhs = x * (x**2 + t ** (2 * d) * x - 4 * t ** (2 * d))
    on_curve = lambda px, py: sympy.expand(py**2 - rhs.subs(x, px)) == 0  # noqa: E731
    p0 = on_curve(0, 0)
    p0_two_torsion = True  # y-coordinate of P_0 is 0, so P_0 = -P_0
    pd_x, pd_y = 2 * t**d, 2 * t ** (2 * d)
    pd = on_curve(pd_x, pd_y)
    pd_distinct = sympy.expand(pd_x) != 0   # P_d is affine and differs from (0, 0)
    return p0, p0_two_torsion, pd, pd_distinct


def torsion_and_point_check(q: int, d: int, places: list[PlacePoint] | None = None) -> TorsionReport:
    if places is None:
        places = default_places(q, d)
    if len(places) < 2:
        raise ValueError("need at least two good places")
    p, _ = prime_power(q)
    report = TorsionReport(q, d)
    for place in places:
        if is_bad_place(q, d, place):
            raise BadReductionError(f"bad place supplied: {place}")
        report.group_orders[(place.m, place.tau)] = count_points(q, d, place.m, place.tau)
    report.gcd_bound = reduce(gcd, report.group_orders.values())
    g = report.gcd_bound
    while g % p == 0:
        g //= p
    report.prime_to_p_bound = g
    (report.p0_on_curve, report.p0_two_torsion,
     report.pd_on_curve, report.pd_distinct) = _symbolic_checks(d)
    return report


# --- division polynomials on y^2 = x (x^2 + s x - 4), s = t^d, d even ------
# Monomials {(power of x, power of s): coefficient}. psi_4 is stored as
# psi_4 / (4y).
DIVISION_POLYS: dict[int, dict[tuple[int, int], int]] = {
    3: {(4, 0): 3, (3, 1): 4, (2, 0): -24, (0, 0): -16},
    4: {(6, 0): 1, (5, 1): 2, (4, 0): -20, (2, 0): -80, (1, 1): -32, (0, 0): 64},
    5: {
        (12, 0): 5, (11, 1): 20, (10, 2): 16, (10, 0): -248, (9, 1): -320,
        (8, 0): -1680, (7, 1): -5760, (6, 2): -3840, (6, 0): 19200,
        (5, 3): -1024, (5, 1): 23552, (4, 2): 10240, (4, 0): -32000,
        (3, 1): -35840, (2, 0): 51200, (0, 0): 4096,
    },
}


def _pmul(F: FieldTable, a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = F.add(out[i + j], F.mul(ai, bj))
    return out


def _padd(F: FieldTable, a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return [F.add(u, v) for u, v in zip(a, b)]


def _trim(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a = a[:-1]
    return a


def division_poly_eval(q: int, d: int, n: int, x: list[int], y: list[int] | None = None) -> list[int]:
    """psi_n evaluated at x in F_q[t] (coefficient ids, low degree first).

    For n = 4 the bracketed factor psi_4 / (4y) is returned unless y is given.
    """
    if d % 2:
        raise ValueError("formulas stated for even d")
    if n not in DIVISION_POLYS:
        raise ValueError("n must be 3, 4 or 5")
    F = field_for(q)
    s = [0] * d + [1]
    xpow = [[1]]
    for _ in range(12):
        xpow.append(_pmul(F, xpow[-1], list(x)))
    spow = [[1]]
    for _ in range(3):
        spow.append(_pmul(F, spow[-1], s))
    total = [0]
    for (i, j), c in DIVISION_POLYS[n].items():
        term = _pmul(F, xpow[i], spow[j])
        total = _padd(F, total, _pmul(F, [F.from_int(c)], term))
    if n == 4 and y is not None:
        total = _pmul(F, _pmul(F, [F.from_int(4)], list(y)), total)
    return _trim(total)


def poly_sqrt(F: FieldTable, a: list[int]) -> list[int] | None:
    """b with b^2 = a in F[t], or None (odd characteristic, top-down long square root)."""
    a = _trim(list(a))
    if a == [0]:
        return [0]
    n = len(a) - 1
    if n % 2 or F.log_table[a[-1]] % 2:
        return None
    h = n // 2
    b = [0] * (h + 1)
    b[h] = F.exp(F.log_table[a[-1]] // 2)
    inv2b = F.inv(F.mul(2, b[h]))
    for k in range(h - 1, -1, -1):
        # coefficient of t^(h+k) in b^2 fixes b[k]
        acc = a[h + k]
        for i in range(k + 1, h):
            j = h + k - i
            if k < j <= h:
                acc = F.sub(acc, F.mul(b[i], b[j]))
        b[k] = F.mul(acc, inv2b)
    return b if _trim(_pmul(F, b, b)) == a else None


def torsion_root_search(q: int, d: int, n: int, max_degree: int = 0,
                        require_point: bool = False) -> list[list[int]]:
    """All x in F_q[t] of degree <= max_degree with psi_n(x) = 0 (bracket for n = 4).

    With require_point, x must also carry a K-rational y: x(x^2 + t^d x - 4)
    has to be a nonzero square in F_q[t].
    """
    F = field_for(q)
    s = [0] * d + [1]
    found = []
    for digits in np.ndindex(*([F.Q] * (max_degree + 1))):
        x = _trim(list(digits))
        if _trim(division_poly_eval(q, d, n, x)) != [0]:
            continue
        if require_point:
            quad = _padd(F, _padd(F, _pmul(F, x, x), _pmul(F, s, x)), [F.from_int(-4)])
            rhs = _trim(_pmul(F, x, quad))
            if rhs == [0] or poly_sqrt(F, rhs) is None:
                continue
        found.append(x)
    return found
