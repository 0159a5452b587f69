"""Toolkit for additive representations n = p + eta with eta square-free.

Exact counting at desk scale, interval verification with descending prime
probes, explicit analytic lower bounds with signed margins, and exception
set search under coprimality constraints on eta.
"""

from .analytic import (
    BoundBreakdown,
    BoundParams,
    CheckResult,
    Constants,
    CONSTANTS,
    artin_constant,
    coprime_mu_phi_sum,
    lower_bound,
    q3_check,
    q3_phi_combination,
    q3_upper_bound,
    squarefree_phi_tail,
    sufficiency_check,
    threshold_find,
    two_prime_check,
)
from .errors import (
    CheckpointError,
    DomainError,
    ResourceLimitError,
    TableError,
    TableParseError,
    TableValidationError,
)
from .represent import (
    ExceptionReport,
    RepCount,
    RepresentationWitness,
    exception_set,
    find_unrepresentable,
    find_witness,
    rep_count,
    rep_count_mod,
    rep_count_via_theta,
    two_prime_count,
)
from .sieve import (
    MobiusTable,
    PrimeTable,
    Range,
    SquarefreeFlags,
    euler_phi,
    sieve_mobius,
    sieve_primes,
    sieve_squarefree,
    theta,
    theta_mod,
)
from .thetadata import (
    EmpiricalCTheta,
    ThetaEntry,
    ThetaTable,
    empirical_c_theta,
    load_table,
    serialize,
    sum_c_theta_squares,
    theta_lower,
    theta_upper,
)
from .verifier import (
    GoldbachResult,
    IntervalReport,
    VerifyConfig,
    VerifyReport,
    goldbach_shortcut,
    run_verification,
    verify_initial_segment,
    verify_interval,
)

__version__ = "0.1.0"
