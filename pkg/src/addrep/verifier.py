"""Interval verification: probe n = p + eta with descending prime lists.

The workhorse splits [a*W, (a+1)*W) intervals off the number line and, for
each n of the requested parity, probes eta = n - p over the largest primes
just below the interval.  Every admissible eta (square-free, not excluded)
folds into a running gcd; once that gcd reaches 2 or below, every odd
prime modulus simultaneously has a coprime representation of n, and the
scan moves on.  Corollary-style runs (nonempty exclusion set) need only
one admissible eta, since any eta > 2 with eta != 11 already feeds the
coprime theorems for every modulus at once.

Interval index 0 denotes the bootstrap segment [W/10, W) probed with the
largest primes below W/10; index -1 (inside reports) is the exhaustive
initial block below W/10, where failures are certified by scanning all
primes, not just a probe list.

Reports are deterministic for a fixed config regardless of thread count:
wall-clock timings are carried separately and omitted from the canonical
serialization.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field

import numpy as np

from .errors import CheckpointError
from .represent import RepresentationWitness, find_witness
from .sieve import PrimeTable, Range, SquarefreeFlags, base_primes, sieve_primes, sieve_squarefree

_EXHAUSTIVE_INDEX = -1


@dataclass(frozen=True)
class VerifyConfig:
    """Parameters of a verification run.

    ``interval_range`` is inclusive on both ends; ``success`` "auto"
    resolves to "first-hit" when exclusions are set (Corollary mode) and
    to the gcd criterion otherwise.
    """

    interval_range: tuple[int, int]
    interval_width: int = 10_000_000
    primes_per_interval: int = 100
    squarefree_limit: int | None = None
    q_max: int = 100_000
    exclusions: frozenset[int] = frozenset()
    parity: str = "odd"
    escalation_primes: int = 1000
    success: str = "auto"
    soundness_samples: int = 1000
    seed: int = 0
    threads: int | None = None
    checkpoint_path: str | None = None

    def __post_init__(self):
        a_min, a_max = self.interval_range
        if a_min < 0 or a_min > a_max:
            raise ValueError(f"bad interval range [{a_min}, {a_max}]")
        if self.interval_width < 1000:
            raise ValueError(f"interval width must be >= 1000, got {self.interval_width}")
        if self.primes_per_interval < 1:
            raise ValueError("primes_per_interval must be >= 1")
        if self.escalation_primes < 0:
            raise ValueError("escalation_primes must be >= 0")
        object.__setattr__(self, "exclusions", frozenset(int(e) for e in self.exclusions))
        if self.squarefree_limit is None:
            object.__setattr__(self, "squarefree_limit", 2 * self.interval_width)
        if self.squarefree_limit < self.interval_width:
            raise ValueError("squarefree_limit must be at least the interval width")
        if self.parity not in ("odd", "even", "both"):
            raise ValueError(f"parity must be odd/even/both, got {self.parity!r}")
        if self.parity != "odd" and not self.exclusions:
            raise ValueError(
                "even-parity verification needs an exclusion set (Corollary mode); "
                "plain even n are handled by the two-prime shortcut"
            )
        if self.success not in ("auto", "gcd", "first-hit"):
            raise ValueError(f"success must be auto/gcd/first-hit, got {self.success!r}")
        if self.q_max < 3:
            raise ValueError("q_max must be >= 3")

    @property
    def resolved_success(self) -> str:
        if self.success != "auto":
            return self.success
        return "first-hit" if self.exclusions else "gcd"

    @classmethod
    def corollary(cls, interval_range: tuple[int, int], **kwargs) -> "VerifyConfig":
        """Preset for the two-primes-plus-square-free check on even n."""
        kwargs.setdefault("parity", "even")
        kwargs.setdefault("exclusions", frozenset({1, 2, 11}))
        return cls(interval_range=interval_range, **kwargs)

    def semantic_dict(self) -> dict:
        """Fields that define what is being verified (not how fast)."""
        return {
            "interval_width": self.interval_width,
            "primes_per_interval": self.primes_per_interval,
            "squarefree_limit": self.squarefree_limit,
            "q_max": self.q_max,
            "exclusions": sorted(self.exclusions),
            "parity": self.parity,
            "escalation_primes": self.escalation_primes,
            "success": self.resolved_success,
            "seed": self.seed,
            "soundness_samples": self.soundness_samples,
        }

    def fingerprint(self) -> str:
        payload = json.dumps(self.semantic_dict(), sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()[:16]


@dataclass(frozen=True)
class IntervalReport:
    """Outcome for one interval (or the exhaustive initial block)."""

    a: int
    n_lo: int
    n_hi: int
    checked: int
    max_probes_used: int
    escalations: int
    failures: tuple[dict, ...]
    certified: bool
    elapsed_ms: int

    def to_json(self) -> dict:
        d = self.canonical()
        d["elapsed_ms"] = self.elapsed_ms
        return d

    def canonical(self) -> dict:
        return {
            "a": self.a,
            "n_lo": self.n_lo,
            "n_hi": self.n_hi,
            "checked": self.checked,
            "max_probes_used": self.max_probes_used,
            "escalations": self.escalations,
            "failures": [dict(f) for f in self.failures],
            "certified": self.certified,
        }


@dataclass(frozen=True)
class VerifyReport:
    """Merged outcome of a run; canonical form excludes all timings."""

    config: dict
    interval_range: tuple[int, int]
    intervals: tuple[IntervalReport, ...]
    witnesses_sampled: tuple[dict, ...]
    elapsed_ms: int

    @property
    def intervals_done(self) -> int:
        return len(self.intervals)

    @property
    def checked(self) -> int:
        return sum(r.checked for r in self.intervals)

    @property
    def failures(self) -> tuple[dict, ...]:
        out = [f for r in self.intervals for f in r.failures]
        return tuple(sorted(out, key=lambda f: f["n"]))

    @property
    def max_probes_used(self) -> int:
        return max((r.max_probes_used for r in self.intervals), default=0)

    @property
    def escalations(self) -> int:
        return sum(r.escalations for r in self.intervals)

    def canonical(self) -> dict:
        return {
            "kind": "verify-report",
            "config": self.config,
            "interval_range": list(self.interval_range),
            "intervals_done": self.intervals_done,
            "checked": self.checked,
            "failures": [dict(f) for f in self.failures],
            "max_probes_used": self.max_probes_used,
            "escalations": self.escalations,
            "witnesses_sampled": [dict(w) for w in self.witnesses_sampled],
            "intervals": [r.canonical() for r in self.intervals],
        }

    def canonical_json(self) -> str:
        return json.dumps(self.canonical(), sort_keys=True, separators=(",", ":")) + "\n"

    def to_json(self) -> dict:
        d = self.canonical()
        d["elapsed_ms"] = self.elapsed_ms
        d["intervals"] = [r.to_json() for r in self.intervals]
        return d


def _interval_bounds(a: int, width: int) -> tuple[int, int, int, int]:
    """(n_lo, n_hi, prev_lo, prev_hi) for interval index a."""
    if a == 0:
        return width // 10, width, 0, width // 10
    return a * width, (a + 1) * width, (a - 1) * width, a * width


def _parity_values(lo: int, hi: int, parity: str) -> np.ndarray:
    if parity == "both":
        return np.arange(lo, hi, dtype=np.int64)
    start = lo + ((lo % 2) != (1 if parity == "odd" else 0))
    return np.arange(start, hi, 2, dtype=np.int64)


def _admissible_array(flags: SquarefreeFlags, exclusions: frozenset[int]) -> np.ndarray:
    if flags.range.lo != 0:
        raise ValueError("square-free table must start at 0")
    if not exclusions:
        return flags.flags
    arr = flags.flags.copy()
    for e in exclusions:
        if 0 <= e < arr.size:
            arr[e] = False
    return arr


def _probe_rounds(
    ns: np.ndarray,
    probes_desc: np.ndarray,
    ok: np.ndarray,
    first_hit: bool,
    escalation_mark: int,
) -> tuple[np.ndarray, np.ndarray, int, int]:
    """Run the probe loop; returns (alive_n, alive_g, max_round, escalations)."""
    alive_n = ns
    alive_g = np.zeros(ns.size, dtype=np.int64)
    max_round = 0
    escalations = 0
    for k in range(probes_desc.size):
        if alive_n.size == 0:
            break
        if k == escalation_mark:
            escalations = int(alive_n.size)
        p = int(probes_desc[k])
        eta = alive_n - p
        hit = ok[eta]
        if not hit.any():
            continue
        if first_hit:
            done = hit
        else:
            alive_g[hit] = np.gcd(alive_g[hit], eta[hit])
            done = np.zeros(alive_n.size, dtype=bool)
            done[hit] = alive_g[hit] <= 2
        if done.any():
            max_round = k + 1
            keep = ~done
            alive_n = alive_n[keep]
            alive_g = alive_g[keep]
    if escalation_mark >= probes_desc.size and alive_n.size:
        escalations = int(alive_n.size)
    return alive_n, alive_g, max_round, escalations


def _odd_prime_factors(g: int, q_max: int) -> list[int]:
    out = []
    m = g
    while m % 2 == 0:
        m //= 2
    for p in base_primes(math.isqrt(m) if m > 1 else 2):
        p = int(p)
        if p == 2:
            continue
        if m % p == 0:
            if p <= q_max:
                out.append(p)
            while m % p == 0:
                m //= p
    if m > 1 and m <= q_max:
        out.append(m)
    return out


def _failure_record(n: int, g: int, q_max: int, certified: bool) -> dict:
    return {
        "n": int(n),
        "final_gcd": int(g),
        "affected_moduli": _odd_prime_factors(int(g), q_max) if g > 2 else [],
        "certified": certified,
    }


def verify_interval(
    a: int,
    config: VerifyConfig,
    flags: SquarefreeFlags,
    probe_primes: PrimeTable,
) -> IntervalReport:
    """Probe every n of the configured parity in interval ``a``.

    ``probe_primes`` must cover a tail of the previous interval ending
    exactly at its upper boundary; the largest ``primes_per_interval``
    entries form the probe list and the next ``escalation_primes`` are
    the fallback for n that exhaust it.  Failures here are probe
    exhaustions, not certified exceptions.
    """
    t0 = time.perf_counter()
    n_lo, n_hi, prev_lo, prev_hi = _interval_bounds(a, config.interval_width)
    if probe_primes.range.hi != prev_hi or probe_primes.range.lo < prev_lo:
        raise ValueError(
            f"probe primes {probe_primes.range} are not a tail of "
            f"[{prev_lo}, {prev_hi}) for interval {a}"
        )
    ps = probe_primes.primes
    if ps.size == 0:
        raise ValueError(f"probe table for interval {a} contains no primes")
    k_total = min(config.primes_per_interval + config.escalation_primes, int(ps.size))
    probes = ps[::-1][:k_total]

    ok = _admissible_array(flags, config.exclusions)
    eta_max = n_hi - 1 - int(probes[-1])  # largest eta any probe can produce
    if eta_max >= ok.size:
        raise ValueError(
            f"square-free table covers [0, {ok.size}) but probes reach eta = {eta_max}"
        )
    ns = _parity_values(n_lo, n_hi, config.parity)
    first_hit = config.resolved_success == "first-hit"

    alive_n, alive_g, max_round, escalations = _probe_rounds(
        ns, probes, ok, first_hit, config.primes_per_interval
    )
    failures = tuple(
        _failure_record(n, g, config.q_max, certified=False)
        for n, g in zip(alive_n.tolist(), alive_g.tolist())
    )
    return IntervalReport(
        a=a,
        n_lo=n_lo,
        n_hi=n_hi,
        checked=int(ns.size),
        max_probes_used=max_round,
        escalations=escalations,
        failures=failures,
        certified=False,
        elapsed_ms=int((time.perf_counter() - t0) * 1000),
    )


def _exhaustive_block(config: VerifyConfig, ok: np.ndarray, limit: int) -> IntervalReport:
    """Certified scan of [3, limit) (or [6, limit) for even parity)."""
    t0 = time.perf_counter()
    primes = sieve_primes(Range(2, max(limit, 3))).primes
    first_hit = config.resolved_success == "first-hit"
    start = 3 if config.parity != "even" else 6
    ns = _parity_values(start, limit, config.parity)
    checked = int(ns.size)

    failures = []
    if ns.size:
        # Bulk pass with shared descending probes per chunk, then a full
        # per-n scan for the stragglers so every failure is certain.
        chunk = 1 << 14
        survivors = []
        for c0 in range(int(ns[0]), limit, chunk):
            c1 = min(c0 + chunk, limit)
            part = ns[(ns >= c0) & (ns < c1)]
            if part.size == 0:
                continue
            pidx = int(np.searchsorted(primes, c0))
            probes = primes[:pidx][::-1][:96]
            alive_n, _, _, _ = _probe_rounds(part, probes, ok, first_hit, 1 << 30)
            survivors.extend(alive_n.tolist())
        for n in survivors:
            idx = int(np.searchsorted(primes, n))
            ps = primes[:idx]
            eta = n - ps
            etas = eta[ok[eta]]
            if first_hit:
                if etas.size == 0:
                    failures.append(_failure_record(n, 0, config.q_max, certified=True))
                continue
            g = int(np.gcd.reduce(etas)) if etas.size else 0
            if not (1 <= g <= 2):
                failures.append(_failure_record(n, g, config.q_max, certified=True))

    return IntervalReport(
        a=_EXHAUSTIVE_INDEX,
        n_lo=start,
        n_hi=limit,
        checked=checked,
        max_probes_used=0,
        escalations=0,
        failures=tuple(sorted(failures, key=lambda f: f["n"])),
        certified=True,
        elapsed_ms=int((time.perf_counter() - t0) * 1000),
    )


def _probe_table(a: int, config: VerifyConfig) -> PrimeTable:
    """Sieve a tail of the previous interval with enough probe primes."""
    _, _, prev_lo, prev_hi = _interval_bounds(a, config.interval_width)
    need = config.primes_per_interval + config.escalation_primes
    width = 1 << 17
    while True:
        lo = max(prev_lo, prev_hi - width)
        pt = sieve_primes(Range(lo, prev_hi))
        if pt.primes.size >= need or lo == prev_lo:
            return pt
        width *= 4


def verify_initial_segment(config: VerifyConfig) -> VerifyReport:
    """The bootstrap check below one interval width.

    Below width/10 every n is scanned against all primes (failures are
    certified); [width/10, width) is probed with the largest primes
    below width/10.  Odd parity with no exclusions reproduces the known
    picture: the single certified failure is n = 11, stuck at gcd 6, an
    exception only for modulus 3.
    """
    t0 = time.perf_counter()
    width = config.interval_width
    flags = sieve_squarefree(Range(0, 2 * width))
    ok = _admissible_array(flags, config.exclusions)

    exhaustive = _exhaustive_block(config, ok, width // 10)
    probe = verify_interval(0, config, flags, _probe_table(0, config))
    intervals = (exhaustive, probe)
    rng = random.Random(config.seed)
    witnesses = _sample_witnesses(config, intervals, rng)
    return VerifyReport(
        config=config.semantic_dict(),
        interval_range=(0, 0),
        intervals=intervals,
        witnesses_sampled=witnesses,
        elapsed_ms=int((time.perf_counter() - t0) * 1000),
    )


@dataclass(frozen=True)
class GoldbachResult:
    """Two-prime decomposition of an even n, with a coprime fallback."""

    n: int
    ok: bool
    pair: tuple[int, int] | None
    alternative: RepresentationWitness | None
    note: str = ""


def goldbach_shortcut(n: int, q_max: int = 100_000) -> GoldbachResult:
    """Decompose even n as p1 + p2 and certify the n = q + q edge case.

    When n/2 is itself a prime q in [3, q_max], the decomposition q + q
    says nothing about representations coprime to q, so an alternative
    n = p + eta with gcd(eta, q) = 1 is produced as well.
    """
    if n < 4 or n % 2:
        raise ValueError(f"n must be even and >= 4, got {n}")
    primes = sieve_primes(Range(2, n)).primes

    pair = None
    for p1 in primes[primes <= n // 2]:
        p1 = int(p1)
        p2 = n - p1
        i = int(np.searchsorted(primes, p2))
        if i < primes.size and primes[i] == p2:
            pair = (p1, p2)
            break
    if pair is None:
        return GoldbachResult(n, False, None, None, "no two-prime decomposition found")

    half = n // 2
    i = int(np.searchsorted(primes, half))
    half_prime = i < primes.size and int(primes[i]) == half
    if half_prime and 3 <= half <= q_max:
        alt = find_witness(n, half)
        if alt is None:
            return GoldbachResult(n, False, pair, None, f"no representation coprime to {half}")
        return GoldbachResult(n, True, pair, alt, f"n = {half} + {half}; alternative certified")
    return GoldbachResult(n, True, pair, None, "")


class _Checkpoint:
    """Append-only JSONL of completed intervals, guarded by a config hash."""

    def __init__(self, path: str, fingerprint: str):
        self.path = path
        self.fingerprint = fingerprint
        self._lock = threading.Lock()

    def load(self) -> dict[int, IntervalReport]:
        if not os.path.exists(self.path):
            with open(self.path, "w", encoding="utf-8") as fh:
                fh.write(json.dumps({"kind": "verify-checkpoint", "fingerprint": self.fingerprint}) + "\n")
            return {}
        done: dict[int, IntervalReport] = {}
        with open(self.path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        if not lines:
            raise CheckpointError(f"checkpoint {self.path} is empty")
        try:
            header = json.loads(lines[0])
        except json.JSONDecodeError as exc:
            raise CheckpointError(f"checkpoint {self.path} header unreadable: {exc}") from None
        if header.get("kind") != "verify-checkpoint":
            raise CheckpointError(f"{self.path} is not a verification checkpoint")
        if header.get("fingerprint") != self.fingerprint:
            raise CheckpointError(
                f"checkpoint {self.path} was written for a different configuration "
                f"({header.get('fingerprint')} != {self.fingerprint})"
            )
        for i, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            try:
                d = json.loads(line)
                rep = IntervalReport(
                    a=d["a"],
                    n_lo=d["n_lo"],
                    n_hi=d["n_hi"],
                    checked=d["checked"],
                    max_probes_used=d["max_probes_used"],
                    escalations=d["escalations"],
                    failures=tuple(d["failures"]),
                    certified=d["certified"],
                    elapsed_ms=d.get("elapsed_ms", 0),
                )
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise CheckpointError(f"{self.path}:{i}: corrupt checkpoint line ({exc})") from None
            done[rep.a] = rep
        return done

    def append(self, rep: IntervalReport) -> None:
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(rep.to_json(), sort_keys=True) + "\n")
                fh.flush()


def _sample_witnesses(
    config: VerifyConfig,
    intervals: tuple[IntervalReport, ...],
    rng: random.Random,
) -> tuple[dict, ...]:
    """Re-verify a random sample of probe successes via find_witness."""
    if config.soundness_samples <= 0:
        return ()
    failed = {f["n"] for r in intervals for f in r.failures}
    spans = [(r.n_lo, r.n_hi) for r in intervals if r.checked > 0]
    if not spans:
        return ()
    q_pool = [int(p) for p in base_primes(min(config.q_max, 10_000)) if p > 2]
    first_hit = config.resolved_success == "first-hit"
    out = []
    attempts = 0
    while len(out) < config.soundness_samples and attempts < config.soundness_samples * 4:
        attempts += 1
        lo, hi = spans[rng.randrange(len(spans))]
        n = rng.randrange(lo, hi)
        if config.parity == "odd":
            n |= 1
        elif config.parity == "even":
            n -= n % 2
        if n < max(3, lo) or n >= hi or n in failed:
            continue
        q = 1 if first_hit else q_pool[rng.randrange(len(q_pool))]
        w = find_witness(n, q, config.exclusions)
        if w is None:
            raise RuntimeError(
                f"soundness breach: probe scan accepted n={n} but no witness "
                f"exists for q={q} with exclusions {sorted(config.exclusions)}"
            )
        out.append({"n": n, "q": q, "p": w.p, "eta": w.eta})
    return tuple(out)


def run_verification(config: VerifyConfig) -> VerifyReport:
    """Run the configured intervals, in parallel, with optional resume.

    Interval jobs share one immutable square-free table; results merge
    in index order, so the canonical report is identical for any thread
    count.  A checkpoint file, when configured, records each finished
    interval and lets an interrupted run resume without recomputing.
    """
    t0 = time.perf_counter()
    a_min, a_max = config.interval_range
    flags = sieve_squarefree(Range(0, config.squarefree_limit + config.interval_width))

    ckpt = _Checkpoint(config.checkpoint_path, config.fingerprint()) if config.checkpoint_path else None
    done: dict[int, IntervalReport] = {}
    if ckpt:
        done = {a: r for a, r in ckpt.load().items() if a_min <= a <= a_max}

    todo = [a for a in range(a_min, a_max + 1) if a not in done]

    def job(a: int) -> IntervalReport:
        return verify_interval(a, config, flags, _probe_table(a, config))

    workers = config.threads or os.cpu_count() or 1
    if workers == 1 or len(todo) <= 1:
        for a in todo:
            rep = job(a)
            done[a] = rep
            if ckpt:
                ckpt.append(rep)
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            futures = {ex.submit(job, a): a for a in todo}
            for fut in as_completed(futures):
                rep = fut.result()
                done[rep.a] = rep
                if ckpt:
                    ckpt.append(rep)

    intervals = tuple(done[a] for a in range(a_min, a_max + 1))
    rng = random.Random(config.seed)
    witnesses = _sample_witnesses(config, intervals, rng)
    return VerifyReport(
        config=config.semantic_dict(),
        interval_range=config.interval_range,
        intervals=intervals,
        witnesses_sampled=witnesses,
        elapsed_ms=int((time.perf_counter() - t0) * 1000),
    )
