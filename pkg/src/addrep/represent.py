"""Exact representation counts for n = p + eta with eta square-free.

The weighted count sums log p over admissible primes; the coprime variant
additionally requires gcd(eta, q) = 1, which for prime q is the same as
p != n (mod q).  An exception set collects every n up to a limit that has
no admissible representation at all.

Counting conventions: eta = 0 never counts (mu2(0) = 0) and eta = 1 always
counts (mu2(1) = 1).  Composite moduli are handled through gcd(eta, q) = 1
directly, so arbitrarily large square-free products work as moduli.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError
from .sieve import (
    MAX_TABLE_SPAN,
    Range,
    coprime_mask,
    sieve_mobius,
    sieve_primes,
    sieve_squarefree,
)

# Bulk scans resolve almost every n within this many descending probes;
# survivors fall back to an exhaustive per-n scan, so this is purely a
# performance knob, never a correctness one.
_PROBE_ROUNDS = 96
_CHUNK = 1 << 16


@dataclass(frozen=True)
class RepCount:
    """Weighted (sum of log p) and plain counts of representations of n."""

    n: int
    weighted: float
    count: int


@dataclass(frozen=True)
class RepresentationWitness:
    """One representation n = p + eta with eta square-free."""

    n: int
    p: int
    eta: int


@dataclass(frozen=True)
class ExceptionReport:
    """All n <= limit with no representation coprime to ``modulus``."""

    modulus: int
    limit: int
    exceptions: tuple[int, ...]
    elapsed_ms: int

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "limit": self.limit,
            "exceptions": list(self.exceptions),
            "elapsed_ms": self.elapsed_ms,
        }

    def to_json_str(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _prime_table(n: int, primes: np.ndarray | None) -> np.ndarray:
    """Primes < n, either the supplied shared table or a fresh sieve."""
    if primes is not None:
        idx = int(np.searchsorted(primes, n, side="left"))
        return primes[:idx]
    if n <= 2:
        return np.array([], dtype=np.int64)
    return sieve_primes(Range(2, n)).primes


def _squarefree_table(n: int, flags: np.ndarray | None) -> np.ndarray:
    """Square-free flags for indices [0, n), shared or freshly sieved."""
    if flags is not None:
        if flags.size < n:
            raise ValueError("supplied square-free table too short")
        return flags
    return sieve_squarefree(Range(0, n)).flags


def _weighted(primes_sel: np.ndarray) -> float:
    if primes_sel.size == 0:
        return 0.0
    return float(np.log(primes_sel.astype(np.float64)).sum(dtype=np.longdouble))


def rep_count(n: int, *, primes: np.ndarray | None = None, flags: np.ndarray | None = None) -> RepCount:
    """Count representations n = p + eta, eta square-free (eta >= 1).

    Returns both the log-p weighted sum and the plain count.  Optional
    ``primes`` (ascending, covering [2, n)) and ``flags`` (indices [0, n))
    let callers amortize sieving over many n.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n < 3:
        return RepCount(n, 0.0, 0)
    ps = _prime_table(n, primes)
    fl = _squarefree_table(n, flags)
    ok = fl[n - ps]
    cnt = int(np.count_nonzero(ok))
    return RepCount(n, _weighted(ps[ok]), cnt)


def rep_count_via_theta(
    n: int,
    *,
    primes: np.ndarray | None = None,
    mobius: np.ndarray | None = None,
) -> float:
    """Evaluate the Mobius-weighted theta identity for the weighted count.

    R(n) = sum over a <= sqrt(n) of mu(a) * (sum of log p over primes
    p < n with p = n mod a^2).  Restricting to p < n is what makes the
    identity agree with the mu2(0) = 0 convention when n itself is prime.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n < 3:
        return 0.0
    r = math.isqrt(n)
    ps = _prime_table(n, primes)
    logs = np.log(ps.astype(np.float64))
    if mobius is None:
        mu = sieve_mobius(Range(1, r + 1)).values
    else:
        if mobius.size < r:
            raise ValueError("supplied mobius table too short")
        mu = mobius[:r]
    total = np.zeros((), dtype=np.longdouble)
    for a in range(1, r + 1):
        m = mu[a - 1]
        if m == 0:
            continue
        a2 = a * a
        sel = (ps % a2) == (n % a2)
        if sel.any():
            total += int(m) * logs[sel].sum(dtype=np.longdouble)
    return float(total)


def rep_count_mod(
    n: int,
    q: int,
    *,
    primes: np.ndarray | None = None,
    flags: np.ndarray | None = None,
) -> RepCount:
    """Like :func:`rep_count` but requiring gcd(eta, q) = 1.

    q may be composite; for prime q this coincides with dropping the
    primes p = n (mod q).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if q < 2:
        raise ValueError(f"modulus q must be >= 2, got {q}")
    if n < 3:
        return RepCount(n, 0.0, 0)
    ps = _prime_table(n, primes)
    fl = _squarefree_table(n, flags)
    eta = n - ps
    ok = fl[eta] & coprime_mask(eta, q, prime_pool=ps)
    cnt = int(np.count_nonzero(ok))
    return RepCount(n, _weighted(ps[ok]), cnt)


def find_witness(
    n: int,
    q: int,
    exclusions: frozenset[int] | set[int] = frozenset(),
    *,
    segment_width: int = 1 << 16,
) -> RepresentationWitness | None:
    """Largest-p representation n = p + eta with gcd(eta, q) = 1.

    Scans primes descending from n - 1 (q = 1 means no coprimality
    constraint); eta values in ``exclusions`` are skipped.  Returns None
    when no admissible representation exists.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if q < 1:
        raise ValueError(f"modulus q must be >= 1, got {q}")
    if n < 3:
        return None
    excl = np.array(sorted(exclusions), dtype=np.int64) if exclusions else None
    hi = n  # primes in [seg_lo, hi) give eta in (n - hi, n - seg_lo]
    while hi > 2:
        seg_lo = max(2, hi - segment_width)
        ps = sieve_primes(Range(seg_lo, hi)).primes
        if ps.size:
            eta = n - ps
            fl = sieve_squarefree(Range(int(eta.min()), int(eta.max()) + 1))
            ok = fl.flags[eta - fl.range.lo]
            ok &= coprime_mask(eta, q, prime_pool=ps)
            if excl is not None:
                ok &= ~np.isin(eta, excl)
            if ok.any():
                i = int(np.flatnonzero(ok)[-1])  # largest admissible prime
                return RepresentationWitness(n, int(ps[i]), int(eta[i]))
        hi = seg_lo
    return None


def _admissible_flags(limit: int, q: int, exclusions, primes: np.ndarray) -> np.ndarray:
    """flags[m] = 1 iff m is square-free, coprime to q, not excluded."""
    ok = sieve_squarefree(Range(0, limit + 1)).flags.copy()
    if q > 1:
        # Strike multiples of every prime dividing q; q itself is never
        # factored, so primorial-sized moduli cost only divisibility probes.
        for p in primes:
            p = int(p)
            if p > limit:
                break
            if q % p == 0:
                ok[p::p] = False
    for e in exclusions:
        if 0 <= e <= limit:
            ok[e] = False
    return ok


def find_unrepresentable(
    limit: int,
    *,
    q: int = 1,
    parity: str = "both",
    exclusions: frozenset[int] | set[int] = frozenset(),
    start: int = 1,
) -> list[int]:
    """All n in [start, limit] with no representation n = p + eta.

    Admissible eta are square-free, coprime to q, and outside
    ``exclusions``.  Works by descending-prime probes in bulk with an
    exhaustive per-n fallback, so listed n are certain, not heuristic.
    """
    if limit < 3:
        raise ValueError(f"limit must be >= 3, got {limit}")
    if limit > MAX_TABLE_SPAN:
        raise ResourceLimitError(f"limit {limit} exceeds compute budget {MAX_TABLE_SPAN}")
    if parity not in ("both", "odd", "even"):
        raise ValueError(f"parity must be both/odd/even, got {parity}")
    primes = sieve_primes(Range(2, limit + 1)).primes
    ok = _admissible_flags(limit, q, exclusions, primes)

    def wanted(ns: np.ndarray) -> np.ndarray:
        if parity == "odd":
            return ns[ns % 2 == 1]
        if parity == "even":
            return ns[ns % 2 == 0]
        return ns

    def exhaustive_unrepresentable(n: int) -> bool:
        ps = primes[: int(np.searchsorted(primes, n))]
        if ps.size == 0:
            return True
        return not bool(ok[n - ps].any())

    out = []
    small_cut = min(limit + 1, 4096)
    for n in wanted(np.arange(max(1, start), small_cut, dtype=np.int64)):
        if exhaustive_unrepresentable(int(n)):
            out.append(int(n))

    for c0 in range(small_cut, limit + 1, _CHUNK):
        c1 = min(c0 + _CHUNK, limit + 1)
        alive = wanted(np.arange(max(c0, start), c1, dtype=np.int64))
        if alive.size == 0:
            continue
        pidx = int(np.searchsorted(primes, c0))
        rounds = min(_PROBE_ROUNDS, pidx)
        for k in range(1, rounds + 1):
            p = int(primes[pidx - k])
            hit = ok[alive - p]
            alive = alive[~hit]
            if alive.size == 0:
                break
        for n in alive:
            if exhaustive_unrepresentable(int(n)):
                out.append(int(n))
    return out


def exception_set(
    q: int,
    limit: int,
    *,
    parity: str = "both",
    start: int = 1,
) -> ExceptionReport:
    """Exception set S_q up to ``limit``: n with no coprime representation.

    n = 1 and n = 2 are always exceptional (no prime plus positive eta
    fits).  Every listed n has been confirmed by an exhaustive scan over
    all primes below it.
    """
    if q < 2:
        raise ValueError(f"modulus q must be >= 2, got {q}")
    t0 = time.perf_counter()
    exc = find_unrepresentable(limit, q=q, parity=parity, start=start)
    elapsed = int((time.perf_counter() - t0) * 1000)
    return ExceptionReport(q, limit, tuple(exc), elapsed)


def two_prime_count(
    n: int,
    q: int,
    *,
    primes: np.ndarray | None = None,
    flags: np.ndarray | None = None,
) -> RepCount:
    """Count representations n = p1 + p2 + eta with (eta, q) = 1.

    Pairs are unordered (p1 <= p2) so nothing is double-counted; each
    representation is weighted by log of the larger prime, which keeps
    the weight of any single representation below log n.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if q < 2:
        raise ValueError(f"modulus q must be >= 2, got {q}")
    if n < 5:
        return RepCount(n, 0.0, 0)
    ps = _prime_table(n, primes)
    fl = _squarefree_table(n, flags)
    count = 0
    weighted = np.zeros((), dtype=np.longdouble)
    half = (n - 1) // 2
    for p1 in ps[ps <= half]:
        p1 = int(p1)
        lo = int(np.searchsorted(ps, p1, side="left"))
        hi = int(np.searchsorted(ps, n - p1 - 1, side="right"))
        p2s = ps[lo:hi]
        if p2s.size == 0:
            continue
        eta = n - p1 - p2s
        okm = fl[eta] & coprime_mask(eta, q, prime_pool=ps)
        c = int(np.count_nonzero(okm))
        if c:
            count += c
            weighted += np.log(p2s[okm].astype(np.float64)).sum(dtype=np.longdouble)
    return RepCount(n, float(weighted), count)
