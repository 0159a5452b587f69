"""Segmented arithmetic sieves: primes, Mobius values, square-free flags,
and Chebyshev theta partial sums.

Everything here is the substrate for representation counting and interval
verification.  Tables are plain immutable dataclasses around numpy arrays;
construction is segmented so memory stays bounded even when a sum runs
over ranges far wider than any single table.  All logarithms are natural.

Conventions fixed here and relied on elsewhere:

* ``mu2(0) = 0``   (0 is divisible by every square),
* ``mu2(1) = 1``,
* theta sums are accumulated in extended precision (80-bit long double),
  which keeps the absolute error orders of magnitude below the ~1e-2
  margins the analytic checks care about.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .errors import ResourceLimitError

# Internal sieving proceeds in segments of this many integers.
SEGMENT_WIDTH = 1 << 20

# Widest half-open range a single materialized table may cover.
MAX_TABLE_SPAN = 1 << 28


@dataclass(frozen=True)
class Range:
    """Half-open integer range [lo, hi)."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo < 0:
            raise ValueError(f"range lo must be >= 0, got {self.lo}")
        if self.lo >= self.hi:
            raise ValueError(f"empty or inverted range [{self.lo}, {self.hi})")
        if self.hi - self.lo > MAX_TABLE_SPAN:
            raise ResourceLimitError(
                f"range [{self.lo}, {self.hi}) spans {self.hi - self.lo} integers, "
                f"more than the table budget of {MAX_TABLE_SPAN}"
            )

    def __len__(self) -> int:
        return self.hi - self.lo

    def __contains__(self, n) -> bool:
        return self.lo <= n < self.hi


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """Ascending primes in ``range``; safe to share read-only."""

    range: Range
    primes: np.ndarray  # int64, ascending

    def __len__(self) -> int:
        return int(self.primes.size)


@dataclass(frozen=True, eq=False)
class MobiusTable:
    """mu(n) for every n in ``range`` (values in {-1, 0, +1})."""

    range: Range
    values: np.ndarray  # int8

    def value(self, n: int) -> int:
        if n not in self.range:
            raise IndexError(f"{n} outside {self.range}")
        return int(self.values[n - self.range.lo])


@dataclass(frozen=True, eq=False)
class SquarefreeFlags:
    """mu2(n) indicator for every n in ``range``."""

    range: Range
    flags: np.ndarray  # bool

    def flag(self, n: int) -> bool:
        if n not in self.range:
            raise IndexError(f"{n} outside {self.range}")
        return bool(self.flags[n - self.range.lo])


@lru_cache(maxsize=6)
def _simple_sieve(limit: int) -> np.ndarray:
    """All primes <= limit by a plain Eratosthenes sieve (cached)."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    return np.flatnonzero(is_p).astype(np.int64)


def base_primes(limit: int) -> np.ndarray:
    """Primes <= limit, served from a cached sieve rounded up in size."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    size = 1 << max(10, limit.bit_length())
    primes = _simple_sieve(size)
    return primes[: int(np.searchsorted(primes, limit, side="right"))]


def prime_segments(lo: int, hi: int, width: int = SEGMENT_WIDTH) -> Iterator[np.ndarray]:
    """Yield the primes in [lo, hi) as ascending int64 chunks."""
    lo = max(lo, 0)
    if hi <= 2 or lo >= hi:
        return
    base = base_primes(math.isqrt(hi - 1))
    for start in range(lo, hi, width):
        stop = min(start + width, hi)
        mask = np.ones(stop - start, dtype=bool)
        if start < 2:
            mask[: min(2 - start, stop - start)] = False
        for p in base:
            p = int(p)
            if p * p >= stop:
                break
            first = max(p * p, ((start + p - 1) // p) * p)
            if first < stop:
                mask[first - start :: p] = False
        if mask.any():
            yield start + np.flatnonzero(mask).astype(np.int64)


def sieve_primes(rng: Range) -> PrimeTable:
    """Exactly the primes in ``rng``, ascending."""
    chunks = list(prime_segments(rng.lo, rng.hi))
    if chunks:
        primes = np.concatenate(chunks)
    else:
        primes = np.array([], dtype=np.int64)
    return PrimeTable(rng, primes)


def sieve_mobius(rng: Range) -> MobiusTable:
    """Exact Mobius values over ``rng`` (requires rng.lo >= 1)."""
    if rng.lo < 1:
        raise ValueError("mobius range must start at 1 or above")
    out = np.empty(len(rng), dtype=np.int8)
    base = base_primes(math.isqrt(rng.hi - 1))
    for start in range(rng.lo, rng.hi, SEGMENT_WIDTH):
        stop = min(start + SEGMENT_WIDTH, rng.hi)
        mu = np.ones(stop - start, dtype=np.int8)
        leftover = np.arange(start, stop, dtype=np.int64)
        for p in base:
            p = int(p)
            first = ((start + p - 1) // p) * p
            if first < stop:
                sl = slice(first - start, None, p)
                mu[sl] = -mu[sl]
                leftover[sl] //= p
            p2 = p * p
            first2 = ((start + p2 - 1) // p2) * p2
            if first2 < stop:
                mu[first2 - start :: p2] = 0
        # A cofactor > 1 is a single prime above sqrt(hi): one more factor.
        big = leftover > 1
        mu[big] = -mu[big]
        out[start - rng.lo : stop - rng.lo] = mu
    return MobiusTable(rng, out)


def sieve_squarefree(rng: Range) -> SquarefreeFlags:
    """mu2 indicator over ``rng``: strike every multiple of p^2."""
    out = np.empty(len(rng), dtype=bool)
    base = base_primes(math.isqrt(rng.hi - 1))
    for start in range(rng.lo, rng.hi, SEGMENT_WIDTH):
        stop = min(start + SEGMENT_WIDTH, rng.hi)
        flags = np.ones(stop - start, dtype=bool)
        for p in base:
            p2 = int(p) * int(p)
            if p2 >= stop:
                break
            first2 = ((start + p2 - 1) // p2) * p2
            if first2 < stop:
                flags[first2 - start :: p2] = False
        if start == 0:
            flags[0] = False  # 0 is divisible by every square
        out[start - rng.lo : stop - rng.lo] = flags
    return SquarefreeFlags(rng, out)


def theta(x: int, *, segment_width: int = 1 << 22) -> float:
    """Chebyshev theta: sum of log p over primes p <= x."""
    if x < 2:
        return 0.0
    total = np.zeros((), dtype=np.longdouble)
    for seg in prime_segments(2, int(x) + 1, segment_width):
        total += np.log(seg.astype(np.float64)).sum(dtype=np.longdouble)
    return float(total)


def theta_mod(x: int, q: int, a: int, *, segment_width: int = 1 << 22) -> float:
    """Sum of log p over primes p <= x with p = a (mod q).

    ``a`` is reduced mod q; q must be positive (q = 1 recovers theta).
    """
    if q == 0:
        raise ValueError("modulus q must be nonzero")
    if q < 0:
        raise ValueError(f"modulus q must be positive, got {q}")
    a %= q
    if x < 2:
        return 0.0
    total = np.zeros((), dtype=np.longdouble)
    for seg in prime_segments(2, int(x) + 1, segment_width):
        sel = seg[seg % q == a]
        if sel.size:
            total += np.log(sel.astype(np.float64)).sum(dtype=np.longdouble)
    return float(total)


def euler_phi(n: int) -> int:
    """Euler totient by trial division against sieved base primes."""
    if n < 1:
        raise ValueError(f"phi needs n >= 1, got {n}")
    result = n
    m = n
    for p in base_primes(math.isqrt(n)):
        p = int(p)
        if p * p > m:
            break
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
    if m > 1:
        result -= result // m
    return result


def coprime_mask(values: np.ndarray, q: int, *, prime_pool: np.ndarray | None = None) -> np.ndarray:
    """Boolean mask of entries coprime to q.

    For q beyond int64 the gcd is decided by the primes of q up to
    max(values); those are found by divisibility probes against
    ``prime_pool`` (or a freshly sieved pool), never by factoring q.
    """
    if q < 1:
        raise ValueError(f"modulus must be >= 1, got {q}")
    if q == 1:
        return np.ones(values.shape, dtype=bool)
    if q < (1 << 62):
        return np.gcd(values, np.int64(q)) == 1
    hi = int(values.max(initial=0))
    pool = prime_pool if prime_pool is not None else base_primes(hi)
    mask = np.ones(values.shape, dtype=bool)
    for p in pool:
        p = int(p)
        if p > hi:
            break
        if q % p == 0:
            mask &= values % p != 0
    return mask
