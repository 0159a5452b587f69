import math
import random

import numpy as np
import pytest

import oracles
from addrep.errors import ResourceLimitError
from addrep.sieve import (
    MAX_TABLE_SPAN,
    Range,
    coprime_mask,
    euler_phi,
    sieve_mobius,
    sieve_primes,
    sieve_squarefree,
    theta,
    theta_mod,
)


def test_range_rejects_bad_bounds():
    with pytest.raises(ValueError):
        Range(5, 5)
    with pytest.raises(ValueError):
        Range(7, 3)
    with pytest.raises(ValueError):
        Range(-1, 4)


def test_range_rejects_oversized_span():
    with pytest.raises(ResourceLimitError):
        Range(0, MAX_TABLE_SPAN + 1)


def test_primes_small_ranges():
    assert sieve_primes(Range(1, 20)).primes.tolist() == [2, 3, 5, 7, 11, 13, 17, 19]
    assert sieve_primes(Range(0, 2)).primes.tolist() == []
    assert sieve_primes(Range(90, 100)).primes.tolist() == [97]


def test_primes_match_trial_division_on_random_ranges():
    rng = random.Random(171)
    for _ in range(25):
        lo = rng.randrange(0, 10**6 - 2000)
        hi = lo + rng.randrange(50, 2000)
        got = sieve_primes(Range(lo, hi)).primes.tolist()
        assert got == oracles.primes_between(lo, hi), (lo, hi)


def test_prime_segmentation_is_seamless():
    # spans crossing several internal segments agree with one big sieve
    rng = Range(2**20 - 500, 2**20 + 500)
    got = sieve_primes(rng).primes.tolist()
    assert got == oracles.primes_between(rng.lo, rng.hi)


def test_mobius_known_values():
    mt = sieve_mobius(Range(1, 31))
    assert mt.value(1) == 1
    assert mt.value(2) == -1
    assert mt.value(4) == 0
    assert mt.value(6) == 1
    assert mt.value(30) == -1


def test_mobius_requires_positive_start():
    with pytest.raises(ValueError):
        sieve_mobius(Range(0, 10))


def test_mobius_vanishes_on_prime_squares():
    mt = sieve_mobius(Range(1, 1000))
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        assert mt.value(p * p) == 0


def test_mobius_matches_factorization_oracle():
    mt = sieve_mobius(Range(1, 3000))
    for n in range(1, 3000):
        assert mt.value(n) == oracles.mobius(n), n


def test_mobius_on_shifted_range():
    mt = sieve_mobius(Range(10**5, 10**5 + 300))
    for n in range(10**5, 10**5 + 300):
        assert mt.value(n) == oracles.mobius(n), n


def test_mobius_multiplicativity_spot_checks():
    mt = sieve_mobius(Range(1, 10**4))
    rng = random.Random(5)
    done = 0
    while done < 200:
        a = rng.randrange(2, 300)
        b = rng.randrange(2, 30)
        if math.gcd(a, b) != 1:
            continue
        assert mt.value(a * b) == mt.value(a) * mt.value(b)
        done += 1


def test_mertens_identity():
    # sum over a <= N of mu(a) * floor(N/a) telescopes to 1
    for N in (10**3, 10**4, 10**5):
        mu = sieve_mobius(Range(1, N + 1)).values.astype(np.int64)
        a = np.arange(1, N + 1, dtype=np.int64)
        assert int(np.sum(mu * (N // a))) == 1


def test_squarefree_small_window():
    sf = sieve_squarefree(Range(0, 13))
    assert [n for n in range(13) if sf.flag(n)] == [1, 2, 3, 5, 6, 7, 10, 11]
    assert not sf.flag(0)
    assert sf.flag(1)


def test_squarefree_matches_mobius_support():
    sf = sieve_squarefree(Range(1, 20000))
    mt = sieve_mobius(Range(1, 20000))
    assert np.array_equal(sf.flags, mt.values != 0)


def test_squarefree_density_near_six_over_pi_squared(flags_1e6):
    density = flags_1e6[1:].mean()
    assert abs(density - 6 / math.pi**2) < 1e-3


def test_theta_known_values():
    assert theta(1) == 0.0
    assert theta(10) == pytest.approx(math.log(2) + math.log(3) + math.log(5) + math.log(7), abs=1e-12)
    assert theta(100) == pytest.approx(oracles.theta(100), abs=1e-9)


def test_theta_asymptotic_sanity():
    t = theta(10**6)
    assert 0.99 < t / 10**6 < 1.01


def test_theta_step_increments():
    # theta(x) - theta(x-1) = log x exactly when x is prime
    for x in range(2, 200):
        diff = theta(x) - theta(x - 1)
        if oracles.is_prime(x):
            assert diff == pytest.approx(math.log(x), abs=1e-9)
        else:
            assert diff == 0.0


def test_theta_mod_examples():
    assert theta_mod(10, 4, 1) == pytest.approx(math.log(5), abs=1e-12)
    assert theta_mod(1000, 1, 0) == theta(1000)
    with pytest.raises(ValueError):
        theta_mod(10, 0, 1)


def test_theta_mod_reduces_residue():
    assert theta_mod(100, 7, 9) == theta_mod(100, 7, 2)


def test_theta_mod_residues_partition_theta():
    for q in (2, 3, 5, 12):
        parts = [theta_mod(2000, q, a) for a in range(q)]
        assert math.fsum(parts) == pytest.approx(theta(2000), abs=1e-9)


def test_theta_mod_shared_factor_classes_are_tiny():
    # gcd(a, q) > 1 admits at most the single prime dividing the class
    for q, a in ((10, 5), (9, 6), (12, 8)):
        assert theta_mod(10**4, q, a) <= math.log(q) + 1e-12


def test_theta_mod_matches_oracle():
    rng = random.Random(99)
    for _ in range(10):
        x = rng.randrange(50, 2000)
        q = rng.randrange(2, 30)
        a = rng.randrange(0, q)
        assert theta_mod(x, q, a) == pytest.approx(oracles.theta_mod(x, q, a), abs=1e-9)


def test_euler_phi_matches_oracle():
    for n in list(range(1, 200)) + [900, 2**10, 99991]:
        assert euler_phi(n) == oracles.euler_phi(n), n


def test_coprime_mask_small_and_primorial():
    vals = np.arange(1, 200, dtype=np.int64)
    got = coprime_mask(vals, 15)
    want = np.array([math.gcd(int(v), 15) == 1 for v in vals])
    assert np.array_equal(got, want)

    big = 1
    for p in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        big *= p**3  # far beyond int64
    got = coprime_mask(vals, big)
    want = np.array([math.gcd(int(v), big) == 1 for v in vals])
    assert np.array_equal(got, want)
