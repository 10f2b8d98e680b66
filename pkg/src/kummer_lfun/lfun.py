"""Assembly of L(E_d/K, T), ranks, the supersingular shortcut, and rank tables."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import mpmath
import sympy

from .chars import beta
from .cyclo import CycloElt
from .curve import conductor_degrees, normalize
from .errors import BudgetExceeded, InconsistencyError
from .gfq import default_budget
from .orbits import build_z2d, i_q, is_supersingular, mult_order, supersingular_witness

log = logging.getLogger(__name__)

REVIEW_SLACK = mpmath.mpf("1e-6")


# --- integer polynomial helpers (low degree first) ------------------------

def poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _cyclo_poly_mul(a: list[CycloElt], b: list[CycloElt]) -> list[CycloElt]:
    out = [CycloElt.zero(a[0].N) for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if any(y.coeffs):
                out[i + j] = out[i + j] + x * y
    return out


def order_of_vanishing(coeffs: list[int], q: int) -> int:
    """Multiplicity of T = 1/q as a root, by exact repeated division by (1 - qT)."""
    a = list(coeffs)
    count = 0
    while len(a) > 1:
        # a = (1 - qT) s  <=>  s_0 = a_0, s_i = a_i + q s_{i-1}, and a_n + q s_{n-1} = 0
        s = [a[0]]
        for c in a[1:-1]:
            s.append(c + q * s[-1])
        if a[-1] + q * s[-1] != 0:
            break
        a = s
        count += 1
    return count


def log_coefficients(coeffs: list[int], m_max: int) -> list[int]:
    """c_1..c_m_max with log L = sum c_m T^m / m (constant term of L must be 1)."""
    if coeffs[0] != 1:
        raise ValueError("constant term must be 1")
    a = list(coeffs) + [0] * max(0, m_max + 1 - len(coeffs))
    c: list[int] = []
    for m in range(1, m_max + 1):
        c.append(m * a[m] - sum(c[i - 1] * a[m - i] for i in range(1, m)))
    return c


def render(coeffs: list[int], var: str = "T") -> str:
    """Human-readable form such as '1 - 3T + 9T^2'."""
    parts = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        mag = abs(c)
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        body = str(mag) if (mag != 1 or i == 0) else ""
        term = body + mono
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(f"{'+' if c > 0 else '-'} {term}")
    return " ".join(parts) or "0"


# --- L-polynomial -----------------------------------------------------------

@dataclass
class OrbitFactor:
    representative: int
    length: int
    stratum: int
    beta: list[int]                 # residue of beta(n) modulo Phi_2d
    beta_integer: int | None        # beta(n) when it is a rational integer

    @property
    def supersingular(self) -> bool:
        return self.beta_integer is not None


@dataclass
class LPolynomial:
    q: int
    d: int
    d_prime: int
    coefficients: list[int]
    factors: list[OrbitFactor] = field(default_factory=list)
    order_of_vanishing_at_1_over_q: int = 0
    generator: str = "primary"

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def rank(self) -> int:
        return self.order_of_vanishing_at_1_over_q

    def __str__(self) -> str:
        return render(self.coefficients)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["degree"] = self.degree
        return out

    @classmethod
    def from_dict(cls, data: dict) -> LPolynomial:
        data = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        data["factors"] = [OrbitFactor(**f) for f in data.get("factors", [])]
        return cls(**data)


def expected_degree(q: int, d: int) -> int:
    d_prime, _ = normalize(q, d)
    return conductor_degrees(d_prime)[0] - 4


def _check_budget(q: int, d: int, budget: int) -> None:
    for orbit in build_z2d(q, d):
        if q**orbit.length > budget:
            raise BudgetExceeded(
                f"orbit of n={orbit.representative} mod {2 * d} has length {orbit.length}: "
                f"F_{q}^{orbit.length} exceeds budget {budget}"
            )


def _beta_job(args):
    q, d, n, variant, budget = args
    return beta(q, d, n, variant, budget)


def orbit_betas(q: int, d: int, variant: str = "primary", budget: int | None = None,
                jobs: int = 1) -> list[CycloElt]:
    """beta at each orbit representative of Z_2d, in orbit order (d coprime to q)."""
    budget = default_budget() if budget is None else budget
    _check_budget(q, d, budget)
    args = [(q, d, o.representative, variant, budget) for o in build_z2d(q, d)]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_beta_job, args))
    return [_beta_job(a) for a in args]


def l_polynomial(q: int, d: int, variant: str = "primary", budget: int | None = None,
                 certify: str = "stratum", jobs: int = 1) -> LPolynomial:
    """(1 - qT) * prod over orbits of (1 - beta(n) T^|n|), as an integer polynomial.

    A single orbit factor need not have integer coefficients; the product over
    a stratum Y_e is Galois-stable and must. With certify="stratum" each
    stratum product is checked as soon as it is formed; "final" checks once.
    """
    if certify not in ("stratum", "final"):
        raise ValueError("certify must be 'stratum' or 'final'")
    d_prime, _ = normalize(q, d)
    orbit_set = build_z2d(q, d_prime)
    betas = orbit_betas(q, d_prime, variant, budget, jobs)
    N = 2 * d_prime

    factors = []
    by_stratum: dict[int, list[tuple[int, CycloElt]]] = {}
    for orbit, b in zip(orbit_set, betas):
        e = orbit_set.stratum_of(orbit.representative)
        by_stratum.setdefault(e, []).append((orbit.length, b))
        try:
            b_int: int | None = b.to_int()
        except ValueError:
            b_int = None
        factors.append(OrbitFactor(orbit.representative, orbit.length, e,
                                   list(b.lift(N).reduce()) if N % b.N == 0 else list(b.reduce()),
                                   b_int))

    def certified(poly: list[CycloElt], where: str) -> list[int]:
        try:
            return [c.to_int() for c in poly]
        except ValueError as exc:
            raise InconsistencyError(f"non-integral coefficient after {where} (q={q}, d={d_prime})") from exc

    coeffs = [1, -q]
    pending = [CycloElt.integer(1, N)]
    for e in sorted(by_stratum):
        prod = [CycloElt.integer(1, N)]
        for length, b in by_stratum[e]:
            prod = _cyclo_poly_mul(prod, [CycloElt.integer(1, N)] + [CycloElt.zero(N)] * (length - 1) + [-b])
        if certify == "stratum":
            coeffs = poly_mul(coeffs, certified(prod, f"stratum e={e}"))
        else:
            pending = _cyclo_poly_mul(pending, prod)
    if certify == "final":
        coeffs = poly_mul(coeffs, certified(pending, "final product"))

    lp = LPolynomial(q, d, d_prime, coeffs, factors, order_of_vanishing(coeffs, q), variant)
    if lp.degree != expected_degree(q, d):
        raise InconsistencyError(f"degree {lp.degree} != deg N - 4 = {expected_degree(q, d)}")
    return lp


def analytic_rank(q: int, d: int, variant: str = "primary", budget: int | None = None,
                  jobs: int = 1) -> int:
    """1 + #{orbits with beta(n) = q^|n|}, cross-checked against the order of vanishing."""
    lp = l_polynomial(q, d, variant, budget, jobs=jobs)
    count = 1 + sum(1 for f in lp.factors if f.beta_integer == q**f.length)
    if count != lp.order_of_vanishing_at_1_over_q:
        raise InconsistencyError(
            f"orbit count {count} != order of vanishing {lp.order_of_vanishing_at_1_over_q}"
        )
    return count


def mw_rank(q: int, d: int, variant: str = "primary", budget: int | None = None,
            jobs: int = 1) -> int:
    d_prime, _ = normalize(q, d)
    return analytic_rank(q, d_prime, variant, budget, jobs)


# --- supersingular shortcut -----------------------------------------------

@dataclass
class Discrepancy:
    q: int
    d: int
    kind: str
    formula_value: str
    orbit_value: int
    note: str


@dataclass
class SupersingularReport:
    q: int
    d: int
    witness: int
    orbit_rank: int                 # 1 + |O_q(Z_2d)|
    i_q_2d: Fraction
    discrepancy: Discrepancy | None

    @property
    def rank(self) -> int:
        return self.orbit_rank


def supersingular_report(q: int, d: int) -> SupersingularReport:
    """Rank of a supersingular case with no character sums, plus the I_q(2d) comparison."""
    d_prime, _ = normalize(q, d)
    a = supersingular_witness(q, 2 * d_prime)
    if a is None:
        raise ValueError(f"2d not supersingular: 2*{d_prime} does not divide any {q}^a + 1")
    orbit_rank = 1 + len(build_z2d(q, d_prime))
    formula = i_q(q, 2 * d_prime)
    disc = None
    if formula != orbit_rank:
        disc = Discrepancy(
            q, d_prime, "I_q(2d) vs orbit count", str(formula), orbit_rank,
            "Z_2d drops the stratum e=4 for even d, which I_q(2d) still counts",
        )
        log.warning("discrepancy q=%d d=%d: I_q(2d)=%s but 1+|orbits|=%d",
                    q, d_prime, formula, orbit_rank)
    return SupersingularReport(q, d_prime, a, orbit_rank, formula, disc)


def supersingular_rank(q: int, d: int) -> int:
    """I_q(2d) for supersingular 2d (the closed formula, no character sums)."""
    d_prime, _ = normalize(q, d)
    if not is_supersingular(q, 2 * d_prime):
        raise ValueError("2d not supersingular")
    value = i_q(q, 2 * d_prime)
    if value.denominator != 1:  # pragma: no cover
        raise InconsistencyError(f"I_q(2d) = {value} is not an integer")
    return int(value)


# --- sequences and bounds -------------------------------------------------

def bound_check(value: Fraction | int, q: int, D: int) -> str:
    """Compare value with log(sqrt q) * D / log D; 'pass', 'fail' or 'review'."""
    iv = mpmath.iv
    b = iv.log(iv.mpf(q)) / 2 * D / iv.log(iv.mpf(D))
    v = mpmath.mpf(Fraction(value).numerator) / Fraction(value).denominator
    if v >= b.b:
        return "pass"
    if v < b.a - REVIEW_SLACK:
        return "fail"
    return "review"


def lower_bound(q: int, D: int) -> float:
    return float(mpmath.log(q) / 2 * D / mpmath.log(D))


@dataclass
class SequenceRow:
    n: int
    d_even: int
    d_odd: int
    even_witness: int | None
    odd_witness: int | None
    i_q_even: str
    i_q_odd: str
    bound_even: float
    bound_odd: float
    check_even: str
    check_odd: str
    order_check: bool               # o_q(q^n + 1) == 2n
    rho_half_even: int | None       # 1 + |O_q(Z_{d_even})| when d_even/2 is an integer
    chain_holds: bool | None        # rho(d_even/2) == I_q(d_even)


def rank_sequences(q: int, n_max: int) -> tuple[list[SequenceRow], list[Discrepancy]]:
    rows, discrepancies = [], []
    for n in range(1, n_max + 1):
        de = q**n + 1
        do = sum((-q) ** i for i in range(2 * n + 1))
        ie, io = i_q(q, de), i_q(q, 2 * do)
        rho_half = chain = None
        if de % 2 == 0:
            rho_half = 1 + len(build_z2d(q, de // 2))
            chain = rho_half == ie
            if not chain:
                discrepancies.append(Discrepancy(
                    q, de // 2, "rho(d^e_n/2) vs I_q(d^e_n)", str(ie), rho_half,
                    "d^e_n/2 is even, so the e=4 stratum is excluded from Z_2d",
                ))
        rows.append(SequenceRow(
            n=n, d_even=de, d_odd=do,
            even_witness=supersingular_witness(q, de),
            odd_witness=supersingular_witness(q, 2 * do),
            i_q_even=str(ie), i_q_odd=str(io),
            bound_even=lower_bound(q, de), bound_odd=lower_bound(q, do),
            check_even=bound_check(ie, q, de), check_odd=bound_check(io, q, do),
            order_check=mult_order(q, de) == 2 * n,
            rho_half_even=rho_half, chain_holds=chain,
        ))
    return rows, discrepancies


# --- exact ranks from primes ell with p generating (Z/ell^2)^x ----------

def find_ell(p: int, bound: int) -> list[int]:
    if p == 2 or not sympy.isprime(p):
        raise ValueError("p must be an odd prime")
    return [
        ell for ell in sympy.primerange(3, bound + 1)
        if ell != p and mult_order(p, ell * ell) == ell * (ell - 1)
    ]


@dataclass
class Construction:
    p: int
    R: int
    ell: int | None
    r: int
    d: int
    supersingular: bool
    i_q_2d: int
    supersingular_rank: int
    analytic_rank: int | None           # None when some orbit is over budget
    orbits_confirmed: list[int]         # representatives with beta = p^|n| checked
    orbits_skipped: list[int]           # representatives over budget

    @property
    def certified(self) -> bool:
        ok = self.supersingular and self.i_q_2d == self.R == self.supersingular_rank
        return ok and (self.analytic_rank is None or self.analytic_rank == self.R)


def exact_rank_construction(p: int, R: int, ell_bound: int = 1000,
                            budget: int | None = None) -> Construction:
    """d with rank R over F_p(t): d = ell^((R-1)/2), or d = 1 when R = 1."""
    if R < 1 or R % 2 == 0:
        raise ValueError("R must be odd and positive")
    budget = default_budget() if budget is None else budget
    r = (R - 1) // 2
    ell = None
    if r:
        ells = find_ell(p, ell_bound)
        if not ells:
            raise ValueError(f"no ell <= {ell_bound} with {p} generating (Z/ell^2)^x")
        ell = ells[0]
    d = ell**r if ell else 1
    ss = is_supersingular(p, 2 * d)
    iq = i_q(p, 2 * d)
    confirmed, skipped = [], []
    for orbit in build_z2d(p, d):
        if p**orbit.length > budget:
            skipped.append(orbit.representative)
            continue
        if beta(p, d, orbit.representative, budget=budget).equals_integer(p**orbit.length):
            confirmed.append(orbit.representative)
        else:
            raise InconsistencyError(f"beta({orbit.representative}) != p^|n| for d={d}")
    rank = None if skipped else analytic_rank(p, d, budget=budget)
    return Construction(p, R, ell, r, d, ss, int(iq), supersingular_rank(p, d),
                        rank, confirmed, skipped)


# --- average-rank scan --------------------------------------------------

@dataclass
class ScanRow:
    d: int
    d_prime: int
    method: str                     # ss-formula | beta | unknown
    rank: int | None
    degL: int
    supersingular: int
    unknown_reason: str = ""
    beta_rank: int | None = None    # full-beta value, when also computed
    i_q_d: str = ""                 # I_q(d), recorded when 2d' is supersingular
    discrepancy: dict | None = None


CSV_FIELDS = ("d", "d_prime", "method", "rank", "degL", "supersingular", "unknown_reason")


def _scan_one(args) -> ScanRow:
    q, d, budget, cross_check = args
    d_prime, _ = normalize(q, d)
    deg = expected_degree(q, d)
    ss = is_supersingular(q, 2 * d_prime)
    row = ScanRow(d, d_prime, "unknown", None, deg, int(ss))
    beta_rank, reason = None, ""
    if not ss or cross_check:
        try:
            beta_rank = analytic_rank(q, d_prime, budget=budget)
        except BudgetExceeded as exc:
            reason = f"budget: {exc}"
    if ss:
        rep = supersingular_report(q, d_prime)
        row.method, row.rank = "ss-formula", rep.orbit_rank
        row.beta_rank = beta_rank
        row.i_q_d = str(i_q(q, d_prime))
        row.discrepancy = asdict(rep.discrepancy) if rep.discrepancy else None
    elif beta_rank is not None:
        row.method, row.rank = "beta", beta_rank
    else:
        row.unknown_reason = reason
    return row


@dataclass
class ScanResult:
    q: int
    x_max: int
    rows: list[ScanRow]

    @property
    def known(self) -> list[int]:
        return [r.rank for r in self.rows if r.rank is not None]

    @property
    def unknown_count(self) -> int:
        return sum(r.rank is None for r in self.rows)

    @property
    def average(self) -> float | None:
        k = self.known
        return sum(k) / len(k) if k else None

    @property
    def running_averages(self) -> list[float | None]:
        out, total, count = [], 0, 0
        for r in self.rows:
            if r.rank is not None:
                total += r.rank
                count += 1
            out.append(total / count if count else None)
        return out

    @property
    def disagreements(self) -> list[int]:
        """d where the supersingular path and full beta both ran and differ."""
        return [r.d for r in self.rows
                if r.method == "ss-formula" and r.beta_rank is not None and r.beta_rank != r.rank]

    @property
    def discrepancies(self) -> list[dict]:
        return [r.discrepancy for r in self.rows if r.discrepancy]

    def to_dict(self) -> dict:
        return {
            "q": self.q, "x_max": self.x_max,
            "rows": [asdict(r) for r in self.rows],
            "average": self.average, "unknown": self.unknown_count,
        }

    @classmethod
    def from_dict(cls, data: dict) -> ScanResult:
        return cls(data["q"], data["x_max"], [ScanRow(**r) for r in data["rows"]])


def average_rank_scan(q: int, x_max: int, budget: int | None = None, jobs: int = 1,
                      cross_check: bool = True) -> ScanResult:
    budget = default_budget() if budget is None else budget
    args = [(q, d, budget, cross_check) for d in range(1, x_max + 1)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_scan_one, args))
    else:
        rows = [_scan_one(a) for a in args]
    for row in rows:
        if row.method == "ss-formula" and row.beta_rank is not None and row.beta_rank != row.rank:
            log.error("supersingular path and beta path disagree at d=%d", row.d)
    return ScanResult(q, x_max, rows)
