import json
import math
import random

import numpy as np
import pytest

import oracles
from addrep.errors import CheckpointError
from addrep.represent import find_witness
from addrep.sieve import Range, sieve_primes, sieve_squarefree
from addrep.verifier import (
    GoldbachResult,
    VerifyConfig,
    goldbach_shortcut,
    run_verification,
    verify_initial_segment,
    verify_interval,
)

# Small geometry for fast tests: intervals of 10^5, square-free table 2x.
SMALL = dict(interval_width=100_000, soundness_samples=25)


def small_config(a_range, **kw):
    merged = {**SMALL, **kw}
    return VerifyConfig(interval_range=a_range, **merged)


def test_config_validation():
    with pytest.raises(ValueError):
        VerifyConfig(interval_range=(3, 1))
    with pytest.raises(ValueError):
        VerifyConfig(interval_range=(0, 1), interval_width=10)
    with pytest.raises(ValueError):
        VerifyConfig(interval_range=(0, 1), parity="even")  # needs exclusions
    with pytest.raises(ValueError):
        VerifyConfig(interval_range=(0, 1), squarefree_limit=10_000, interval_width=100_000)
    with pytest.raises(ValueError):
        VerifyConfig(interval_range=(0, 1), success="sometimes")


def test_config_success_resolution():
    assert VerifyConfig(interval_range=(1, 1)).resolved_success == "gcd"
    assert VerifyConfig.corollary((1, 1)).resolved_success == "first-hit"
    forced = VerifyConfig(interval_range=(1, 1), exclusions=frozenset({11}), success="gcd")
    assert forced.resolved_success == "gcd"


def test_config_fingerprint_ignores_schedule_knobs():
    a = small_config((1, 3))
    b = small_config((1, 9), threads=8, checkpoint_path="/tmp/x.jsonl")
    assert a.fingerprint() == b.fingerprint()
    c = small_config((1, 3), q_max=50_000)
    assert a.fingerprint() != c.fingerprint()


def test_interval_report_gcd_success_certifies_odd_moduli():
    cfg = small_config((1, 1))
    flags = sieve_squarefree(Range(0, 2 * cfg.interval_width))
    probes = sieve_primes(Range(0, cfg.interval_width))
    rep = verify_interval(1, cfg, flags, probes)
    assert rep.checked == cfg.interval_width // 2
    assert rep.failures == ()
    assert 0 < rep.max_probes_used <= cfg.primes_per_interval
    # spot-check: a sample of probed n really has coprime witnesses per q
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randrange(cfg.interval_width, 2 * cfg.interval_width) | 1
        for q in (3, 5, 97):
            assert find_witness(n, q) is not None, (n, q)


def test_interval_misalignment_rejected():
    cfg = small_config((2, 2))
    flags = sieve_squarefree(Range(0, 2 * cfg.interval_width))
    wrong = sieve_primes(Range(0, cfg.interval_width))  # tail of I_0, not I_1
    with pytest.raises(ValueError, match="tail"):
        verify_interval(2, cfg, flags, wrong)


def test_gcd_folding_matches_hand_example():
    # successful etas 15 then 77 fold to gcd 1, which terminates
    assert math.gcd(15, 77) == 1
    g = 0
    for eta in (15, 77):
        g = math.gcd(g, eta)
    assert g <= 2


def test_crippled_probe_list_exposes_failures():
    cfg = small_config((1, 1), primes_per_interval=1, escalation_primes=0, soundness_samples=0)
    flags = sieve_squarefree(Range(0, 2 * cfg.interval_width))
    probes = sieve_primes(Range(0, cfg.interval_width))
    rep = verify_interval(1, cfg, flags, probes)
    assert len(rep.failures) > 0
    assert all(not f["certified"] for f in rep.failures)
    assert rep.escalations >= len(rep.failures)


def test_escalation_rescues_survivors():
    few = small_config((1, 1), primes_per_interval=2, escalation_primes=0, soundness_samples=0)
    more = small_config((1, 1), primes_per_interval=2, escalation_primes=1000, soundness_samples=0)
    flags = sieve_squarefree(Range(0, 2 * few.interval_width))
    probes = sieve_primes(Range(0, few.interval_width))
    bare = verify_interval(1, few, flags, probes)
    rescued = verify_interval(1, more, flags, probes)
    assert len(rescued.failures) < len(bare.failures)
    assert rescued.escalations == bare.escalations  # same survivors at the mark


def test_initial_segment_flags_eleven_only():
    cfg = small_config((0, 0))
    rep = verify_initial_segment(cfg)
    assert [f["n"] for f in rep.failures] == [11]
    f = rep.failures[0]
    assert f["final_gcd"] == 6
    assert f["affected_moduli"] == [3]
    assert f["certified"]
    assert rep.checked == (cfg.interval_width // 2) - 1  # odd n in [3, width)


def test_initial_segment_corollary_mode_clean():
    cfg = VerifyConfig.corollary((0, 0), **SMALL)
    rep = verify_initial_segment(cfg)
    assert rep.failures == ()
    # every sampled witness avoids the excluded etas
    for w in rep.witnesses_sampled:
        assert w["eta"] not in (1, 2, 11)
        assert oracles.is_squarefree(w["eta"])


def test_initial_segment_small_n_edge():
    # n = 3 succeeds through eta = 1, which is coprime to everything
    cfg = small_config((0, 0))
    rep = verify_initial_segment(cfg)
    assert all(f["n"] != 3 for f in rep.failures)


def test_exclusion_set_respected_in_scan():
    cfg = VerifyConfig.corollary((0, 0), **SMALL)
    rep = verify_initial_segment(cfg)
    for w in rep.witnesses_sampled:
        n, eta = w["n"], w["eta"]
        assert n - w["p"] == eta
        assert eta >= 3


def test_run_verification_merges_in_order():
    cfg = small_config((1, 4), soundness_samples=10)
    rep = run_verification(cfg)
    assert [r.a for r in rep.intervals] == [1, 2, 3, 4]
    assert rep.intervals_done == 4
    assert rep.checked == 4 * cfg.interval_width // 2
    assert rep.failures == ()


def test_run_verification_interval_zero_bootstrap():
    cfg = small_config((0, 1), soundness_samples=0)
    rep = run_verification(cfg)
    w = cfg.interval_width
    assert rep.intervals[0].n_lo == w // 10 and rep.intervals[0].n_hi == w
    assert rep.intervals[1].n_lo == w and rep.intervals[1].n_hi == 2 * w
    assert rep.failures == ()


def test_determinism_across_thread_counts():
    r1 = run_verification(small_config((1, 6), threads=1, soundness_samples=15))
    r8 = run_verification(small_config((1, 6), threads=8, soundness_samples=15))
    assert r1.canonical_json() == r8.canonical_json()


def test_repeated_runs_byte_identical():
    cfg = small_config((1, 2), soundness_samples=15)
    assert run_verification(cfg).canonical_json() == run_verification(cfg).canonical_json()


def test_seed_changes_witness_sample():
    r0 = run_verification(small_config((1, 1), seed=0, soundness_samples=10))
    r1 = run_verification(small_config((1, 1), seed=1, soundness_samples=10))
    assert r0.witnesses_sampled != r1.witnesses_sampled


def test_witnesses_reverify(primes_1e6, flags_1e6):
    rep = run_verification(small_config((1, 2), soundness_samples=30))
    for w in rep.witnesses_sampled:
        assert w["p"] + w["eta"] == w["n"]
        assert oracles.is_squarefree(w["eta"])
        assert math.gcd(w["eta"], w["q"]) == 1


def test_checkpoint_resume_identical(tmp_path):
    ck = str(tmp_path / "resume.jsonl")
    full = run_verification(small_config((1, 5), soundness_samples=8))
    # interrupted run: only the first three intervals complete
    run_verification(small_config((1, 3), soundness_samples=8, checkpoint_path=ck))
    resumed = run_verification(small_config((1, 5), soundness_samples=8, checkpoint_path=ck))
    assert resumed.canonical_json() == full.canonical_json()
    # the checkpoint now carries all five intervals
    lines = open(ck).read().splitlines()
    assert len(lines) == 1 + 5


def test_checkpoint_corruption_refused(tmp_path):
    ck = tmp_path / "corrupt.jsonl"
    run_verification(small_config((1, 1), soundness_samples=0, checkpoint_path=str(ck)))
    with open(ck, "a") as fh:
        fh.write("{truncated\n")
    with pytest.raises(CheckpointError, match="corrupt"):
        run_verification(small_config((1, 2), soundness_samples=0, checkpoint_path=str(ck)))


def test_checkpoint_config_mismatch_refused(tmp_path):
    ck = str(tmp_path / "mismatch.jsonl")
    run_verification(small_config((1, 1), soundness_samples=0, checkpoint_path=ck))
    other = small_config((1, 1), soundness_samples=0, checkpoint_path=ck, q_max=50_000)
    with pytest.raises(CheckpointError, match="different configuration"):
        run_verification(other)


def test_canonical_json_omits_timings():
    rep = run_verification(small_config((1, 1), soundness_samples=0))
    doc = json.loads(rep.canonical_json())
    assert "elapsed_ms" not in doc
    assert all("elapsed_ms" not in iv for iv in doc["intervals"])
    full = rep.to_json()
    assert "elapsed_ms" in full and "elapsed_ms" in full["intervals"][0]


def test_goldbach_examples():
    r = goldbach_shortcut(10)
    assert r.ok and r.pair == (3, 7)
    assert r.alternative is not None and math.gcd(r.alternative.eta, 5) == 1
    r = goldbach_shortcut(4)
    assert r.ok and r.pair == (2, 2) and r.alternative is None
    r = goldbach_shortcut(6)
    assert r.ok and r.pair == (3, 3)
    assert (r.alternative.p, r.alternative.eta) == (5, 1)
    with pytest.raises(ValueError):
        goldbach_shortcut(7)
    with pytest.raises(ValueError):
        goldbach_shortcut(2)


def test_goldbach_sweep():
    for n in range(4, 2000, 2):
        r = goldbach_shortcut(n, q_max=10**5)
        assert r.ok, n
        p1, p2 = r.pair
        assert p1 + p2 == n and oracles.is_prime(p1) and oracles.is_prime(p2)
        if r.alternative:
            assert math.gcd(r.alternative.eta, n // 2) == 1
