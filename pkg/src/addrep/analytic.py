"""Explicit lower bound for R(n)/n and the sufficiency inequalities.

The lower bound has five pieces: the Artin constant floor, a 1/log n
loss from the theta-estimate constants over square moduli, a 1/log^3 n
loss from the unconditional theta(x) estimate, a Brun-Titchmarsh loss
with the characteristic (1+2A)/(1-2A) factor, and a power-of-n tail from
the trivial estimate on large square moduli.  Each inequality check
returns a signed margin rather than a bare boolean so regressions stay
visible in test output.

Two printed variants of the tail disagree in the signs of the n^(A-1)
and n^(-1/2) terms; both are implemented (``tail_mode`` "lemma" and
"finalcheck"), plus an all-positive "strict" mode that is a valid upper
bound for the tail magnitude whichever variant was intended.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import mpmath
import numpy as np

from .errors import DomainError, TableValidationError
from .sieve import Range, base_primes, coprime_mask, euler_phi, prime_segments, sieve_mobius
from .thetadata import Q3_MODULI, ThetaTable, sum_c_theta_squares, theta_lower, theta_upper

ARTIN_LOWER = 0.37395           # Artin's constant rounded down to 5 places
C_THETA_SUM_CAP = 0.95          # cap on the c sum over square moduli
PHI_TAIL_CAP = 0.0096           # cap on the square-free 1/phi(a^2) tail past 316
PHI_SERIES_CAP = 1.95           # upper bound for the full square-free 1/phi(a^2) series
LOG3_COEFF = 0.375              # |theta(x) - x| <= 0.375 x / log^3 x ...
LOG3_THRESHOLD = math.exp(20)   # ... valid for x > e^20
Q3_MAIN = Fraction(19, 120)     # eight-modulus phi combination
Q3_ERR = 0.00592                # matching c aggregate cap
LEMMA_MIN_N = 4_810_000_000     # where all ingredients are simultaneously valid

TAIL_MODES = ("lemma", "finalcheck", "strict")


@dataclass(frozen=True)
class Constants:
    artin_lower: float = ARTIN_LOWER
    c_theta_sum_cap: float = C_THETA_SUM_CAP
    tail_cap: float = PHI_TAIL_CAP
    infinite_sum_cap: float = PHI_SERIES_CAP
    broadbent_coeff: float = LOG3_COEFF
    broadbent_threshold: float = LOG3_THRESHOLD
    q3_main: Fraction = Q3_MAIN
    q3_err: float = Q3_ERR


CONSTANTS = Constants()


@dataclass(frozen=True)
class BoundParams:
    """Point (n, A) at which to evaluate the lower bound; A in (0, 1/2)."""

    n: int
    A: float

    def __post_init__(self):
        if not (0.0 < self.A < 0.5):
            raise ValueError(f"A must lie strictly inside (0, 1/2), got {self.A}")
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")


@dataclass(frozen=True)
class BoundBreakdown:
    """Term-by-term evaluation; total = artin - (the four losses)."""

    n: int
    A: float
    tail_mode: str
    artin: float
    log_term: float
    log3_term: float
    bt_term: float
    tail_term: float
    total: float

    def recomposed(self) -> float:
        return self.artin - self.log_term - self.log3_term - self.bt_term - self.tail_term


@dataclass(frozen=True)
class CheckResult:
    """Outcome of an inequality check, with its signed margin."""

    ok: bool
    margin: float
    lhs: float
    rhs: float

    def __bool__(self) -> bool:
        return self.ok


def artin_constant(prime_limit: int) -> float:
    """Truncated Euler product prod_{p <= limit} (1 - 1/(p(p-1))).

    Strictly decreasing in the limit; every truncation stays above the
    rounded-down constant 0.37395.
    """
    if prime_limit < 2:
        raise ValueError(f"prime_limit must be >= 2, got {prime_limit}")
    log_sum = np.zeros((), dtype=np.longdouble)
    for seg in prime_segments(2, prime_limit + 1):
        p = seg.astype(np.float64)
        log_sum += np.log1p(-1.0 / (p * (p - 1.0))).sum(dtype=np.longdouble)
    return float(np.exp(log_sum))


def coprime_mu_phi_sum(n: int, a_limit: int) -> float:
    """Partial sum of mu(a)/phi(a^2) over a <= a_limit coprime to n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if a_limit < 1:
        raise ValueError(f"a_limit must be >= 1, got {a_limit}")
    mu = sieve_mobius(Range(1, a_limit + 1)).values
    a = np.arange(1, a_limit + 1, dtype=np.int64)
    keep = (mu != 0) & coprime_mask(a, n)
    if not keep.any():
        return 0.0
    terms = [int(mu[i]) / (int(a[i]) * euler_phi(int(a[i]))) for i in np.flatnonzero(keep)]
    return math.fsum(terms)


def squarefree_phi_tail(a_from: int) -> float:
    """Upper bound for sum_{a >= a_from} mu2(a)/phi(a^2).

    Computed as the 1.95 series cap minus the exact finite part below
    a_from (rational arithmetic up to a_from = 2000), clamped at 0.
    """
    if a_from < 1:
        raise ValueError(f"a_from must be >= 1, got {a_from}")
    if a_from == 1:
        return PHI_SERIES_CAP
    mu = sieve_mobius(Range(1, a_from)).values
    if a_from <= 2000:
        finite = Fraction(0)
        for a in range(1, a_from):
            if mu[a - 1] != 0:
                finite += Fraction(1, a * euler_phi(a))
        tail = Fraction(39, 20) - finite
        return float(tail) if tail > 0 else 0.0
    finite = math.fsum(1.0 / (a * euler_phi(a)) for a in range(1, a_from) if mu[a - 1] != 0)
    return max(PHI_SERIES_CAP - finite, 0.0)


def _tail_signs(tail_mode: str) -> tuple[int, int]:
    if tail_mode == "lemma":
        return (-1, +1)   # ... - n^(A-1) + n^(-1/2)
    if tail_mode == "finalcheck":
        return (+1, -1)   # ... + n^(A-1) - n^(-1/2)
    if tail_mode == "strict":
        return (+1, +1)
    raise ValueError(f"tail_mode must be one of {TAIL_MODES}, got {tail_mode!r}")


def lower_bound(
    params: BoundParams,
    *,
    tail_mode: str = "lemma",
    advisory: bool = False,
) -> BoundBreakdown:
    """Evaluate the explicit lower bound for R(n)/n at (n, A).

    Valid for n >= 4.81e9; pass ``advisory=True`` to evaluate below that
    (the result then carries no guarantee).  Terms are computed with
    mpmath working precision so the power terms survive n up to 1e18,
    then frozen to floats; the total is composed from the float fields
    so it recomposes exactly.
    """
    if params.n < LEMMA_MIN_N and not advisory:
        raise DomainError(
            f"lower bound is only proved for n >= {LEMMA_MIN_N}; "
            f"got n = {params.n} (pass advisory=True to evaluate anyway)"
        )
    sign_am1, sign_half = _tail_signs(tail_mode)
    with mpmath.workdps(40):
        n = mpmath.mpf(params.n)
        A = mpmath.mpf(params.A)
        ln = mpmath.log(n)
        artin = float(mpmath.mpf("0.37395"))
        log_term = float(mpmath.mpf("0.95") / ln)
        log3_term = float(mpmath.mpf("0.375") / ln**3)
        bt_term = float(mpmath.mpf("0.0096") * (1 + 2 * A) / (1 - 2 * A))
        tail = n ** (-2 * A) + n ** (-A) + sign_am1 * n ** (A - 1) + sign_half / mpmath.sqrt(n)
        tail_term = float(ln * tail)
    total = artin - log_term - log3_term - bt_term - tail_term
    return BoundBreakdown(
        n=params.n,
        A=params.A,
        tail_mode=tail_mode,
        artin=artin,
        log_term=log_term,
        log3_term=log3_term,
        bt_term=bt_term,
        tail_term=tail_term,
        total=total,
    )


def _require_proof_table(table: ThetaTable) -> None:
    total = sum_c_theta_squares(table)
    if not total < C_THETA_SUM_CAP:
        raise TableValidationError(
            f"table {table.provenance} fails the c-sum gate: "
            f"{total} >= {C_THETA_SUM_CAP}"
        )


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    for p in base_primes(math.isqrt(q)):
        if q % int(p) == 0:
            return q == int(p)
    return True


def sufficiency_check(
    table: ThetaTable,
    q: int,
    n: int,
    A: float,
    *,
    tail_mode: str = "lemma",
) -> CheckResult:
    """Does the lower bound beat the theta-estimate for residue class q?

    True iff lower_bound(n, A).total > 1/phi(q) + c(q)/log n, for prime
    3 < q <= 1e5 present in the table and n inside both validity ranges.
    """
    if not (3 < q <= 100_000) or not _is_prime(q):
        raise ValueError(f"q must be a prime in (3, 1e5], got {q}")
    _require_proof_table(table)
    entry = table.entry(q)
    if n < max(LEMMA_MIN_N, entry.x_theta):
        raise DomainError(
            f"check needs n >= max({LEMMA_MIN_N}, x_theta({q}) = {entry.x_theta}), got {n}"
        )
    lhs = lower_bound(BoundParams(n, A), tail_mode=tail_mode).total
    rhs = 1.0 / (q - 1) + entry.c_theta / math.log(n)
    return CheckResult(lhs > rhs, lhs - rhs, lhs, rhs)


def q3_phi_combination() -> Fraction:
    """Exact Euler-phi combination over the eight q=3 moduli."""
    signs = {3: +1, 9: -1, 12: -1, 75: -1, 36: +1, 225: +1, 300: +1, 900: -1}
    return sum((Fraction(s, euler_phi(q)) for q, s in signs.items()), Fraction(0))


def q3_upper_bound(table: ThetaTable, n: int) -> float:
    """Adversarial estimate of the eight-theta combination at n.

    Positive-signed terms take the upper estimate and negative-signed
    ones the lower, so the result bounds the combination from above.
    With honest constants it stays below (19/120) n + 0.00592 n / log n.
    """
    signs = {3: +1, 9: -1, 12: -1, 75: -1, 36: +1, 225: +1, 300: +1, 900: -1}
    x_needed = max(table.entry(q).x_theta for q in Q3_MODULI)
    if n < x_needed:
        raise DomainError(f"estimate needs n >= {x_needed}, got {n}")
    total = 0.0
    for q, s in signs.items():
        est = theta_upper(table, q, n) if s > 0 else theta_lower(table, q, n)
        total += s * est
    return total


def q3_check(
    table: ThetaTable,
    n: int,
    A: float,
    *,
    tail_mode: str = "lemma",
) -> CheckResult:
    """Does the lower bound beat the q=3 inclusion-exclusion estimate?

    True iff lower_bound(n, A).total > 19/120 + 0.00592/log n, with n at
    or past every x_theta among the eight moduli.
    """
    _require_proof_table(table)
    x_needed = max(table.entry(q).x_theta for q in Q3_MODULI)
    if n < max(LEMMA_MIN_N, x_needed):
        raise DomainError(f"check needs n >= max({LEMMA_MIN_N}, {x_needed}), got {n}")
    lhs = lower_bound(BoundParams(n, A), tail_mode=tail_mode).total
    rhs = float(Q3_MAIN) + Q3_ERR / math.log(n)
    return CheckResult(lhs > rhs, lhs - rhs, lhs, rhs)


def two_prime_check(n: int, A: float, *, tail_mode: str = "lemma") -> CheckResult:
    """Positivity of the exclusion-robust count T(n) > R(n) - 3 log n.

    True iff the lower bound minus the extra 3 log(n)/n term is positive.
    """
    lb = lower_bound(BoundParams(n, A), tail_mode=tail_mode)
    extra = 3.0 * math.log(n) / n
    margin = lb.total - extra
    return CheckResult(margin > 0.0, margin, lb.total, extra)


def threshold_find(
    A: float,
    rhs: Callable[[int], float],
    n_min: int,
    n_max: int,
    *,
    tail_mode: str = "lemma",
) -> int | None:
    """Least n in [n_min, n_max] with lower_bound(n, A).total > rhs(n).

    Assumes a single sign change of the difference on the interval
    (verified at the endpoints); returns None when the inequality never
    holds in range.  Evaluation below the proved threshold is advisory.
    """
    if n_min > n_max:
        raise ValueError(f"empty search range [{n_min}, {n_max}]")

    def holds(n: int) -> bool:
        total = lower_bound(BoundParams(n, A), tail_mode=tail_mode, advisory=True).total
        return total > rhs(n)

    if holds(n_min):
        return n_min
    if not holds(n_max):
        return None
    lo, hi = n_min, n_max  # holds(lo) is False, holds(hi) is True
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if holds(mid):
            hi = mid
        else:
            lo = mid
    return hi
