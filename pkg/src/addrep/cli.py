"""Command-line surface: every capability behind one subcommand each.

Exit codes: 0 success, 1 usage, 2 data/validation, 3 a verification
check failed or found failures, 4 resource limits.  ``--json`` switches
any subcommand to a single machine-readable document whose schema ships
with the package (``addrep.schemas``).

Numeric flags accept underscores and scientific notation (``8e9``,
``10_000_000``).  The theta-constant table defaults to the bundled
non-rigorous placeholder; commands that feed proofs refuse it unless
``--allow-unverified`` is passed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from importlib import resources

from . import analytic, represent, thetadata, verifier
from .errors import CheckpointError, DomainError, ResourceLimitError, TableError

TABLE_ENV = "ADDREP_THETA_TABLE"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_FAILURES = 3
EXIT_RESOURCE = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        raise _UsageError(message)


def parse_int(text: str) -> int:
    """Integer with underscores or scientific notation allowed."""
    t = text.replace("_", "")
    try:
        return int(t)
    except ValueError:
        pass
    try:
        f = float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not f.is_integer() or abs(f) >= 2**62:
        raise argparse.ArgumentTypeError(f"not an exactly representable integer: {text!r}")
    return int(f)


def parse_float(text: str) -> float:
    try:
        return float(text.replace("_", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def parse_int_set(text: str) -> frozenset[int]:
    if not text.strip():
        return frozenset()
    return frozenset(parse_int(part) for part in text.split(","))


def bundled_table_path() -> str:
    return str(resources.files("addrep") / "data" / "theta_placeholder.tsv")


def _require(args, **dest_to_flag) -> None:
    missing = [flag for dest, flag in dest_to_flag.items() if getattr(args, dest, None) is None]
    if missing:
        raise _UsageError(f"missing required flag(s): {', '.join(missing)}")


def _load_table(args, *, proof_mode: bool) -> thetadata.ThetaTable:
    path = args.table or os.environ.get(TABLE_ENV) or bundled_table_path()
    table = thetadata.load_table(path)
    if proof_mode and not table.rigorous and not args.allow_unverified:
        raise TableError(
            f"table {path} is marked non-rigorous; pass --allow-unverified to use it "
            "for proof-style checks (see README for fetching the published constants)"
        )
    return table


def _emit(args, doc: dict, human: str) -> None:
    if args.json:
        print(json.dumps(doc, sort_keys=True))
    else:
        print(human)


# ---------------------------------------------------------------- verify

def _cmd_verify(args) -> int:
    if args.initial:
        args.from_ = 0 if args.from_ is None else args.from_
        args.to = 0 if args.to is None else args.to
    _require(args, from_="--from", to="--to")
    if args.corollary:
        parity = "even"
        exclusions = frozenset({1, 2, 11})
    else:
        parity = args.parity
        exclusions = args.exclusions
    config = verifier.VerifyConfig(
        interval_range=(args.from_, args.to),
        interval_width=args.width,
        primes_per_interval=args.primes,
        squarefree_limit=args.sqfree_limit,
        q_max=args.q_max,
        exclusions=exclusions,
        parity=parity,
        escalation_primes=args.escalation,
        soundness_samples=args.samples,
        seed=args.seed,
        threads=args.threads,
        checkpoint_path=args.checkpoint,
    )
    if args.initial:
        report = verifier.verify_initial_segment(config)
    else:
        report = verifier.run_verification(config)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report.canonical_json())
    if args.json:
        print(json.dumps(report.to_json(), sort_keys=True))
    else:
        print(f"seed: {config.seed}")
        print(f"intervals: {report.intervals_done}   checked: {report.checked}")
        print(f"max probes used: {report.max_probes_used}   escalations: {report.escalations}")
        print(f"witnesses re-verified: {len(report.witnesses_sampled)}")
        if report.failures:
            print(f"failures ({len(report.failures)}):")
            for f in report.failures:
                status = "certified" if f["certified"] else "probe exhausted"
                print(f"  n={f['n']}  gcd={f['final_gcd']}  moduli={f['affected_moduli']}  [{status}]")
        else:
            print("failures: none")
        print(f"elapsed: {report.elapsed_ms} ms")
    return EXIT_FAILURES if report.failures else EXIT_OK


# ------------------------------------------------------------- exceptions

def _cmd_exceptions(args) -> int:
    _require(args, q="--q", limit="--limit")
    report = represent.exception_set(args.q, args.limit, parity=args.parity, start=args.start)
    doc = {"kind": "exceptions", "parity": args.parity, "start": args.start, **report.to_json()}
    lines = [
        f"modulus: {report.modulus}",
        f"limit:   {report.limit}",
        f"exceptions ({len(report.exceptions)}): {list(report.exceptions)}",
        f"max: {max(report.exceptions) if report.exceptions else '-'}",
        f"elapsed: {report.elapsed_ms} ms",
    ]
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


# ------------------------------------------------------------------ count

def _cmd_count(args) -> int:
    _require(args, n="--n")
    n, q = args.n, args.q
    via = None
    witness = None
    if args.two_prime:
        if q is None:
            raise _UsageError("--two-prime needs --q")
        rc = represent.two_prime_count(n, q)
    elif q is not None:
        rc = represent.rep_count_mod(n, q)
        w = represent.find_witness(n, q)
        witness = {"p": w.p, "eta": w.eta} if w else None
    else:
        rc = represent.rep_count(n)
        if args.via_theta:
            via = represent.rep_count_via_theta(n)
    doc = {
        "kind": "rep-count",
        "n": n,
        "q": q,
        "two_prime": bool(args.two_prime),
        "count": rc.count,
        "weighted": rc.weighted,
        "via_theta": via,
        "witness": witness,
    }
    lines = [f"n: {n}" + (f"   q: {q}" if q else ""), f"count: {rc.count}", f"weighted: {rc.weighted:.12g}"]
    if via is not None:
        lines.append(f"via theta identity: {via:.12g}")
    if witness:
        lines.append(f"witness: {n} = {witness['p']} + {witness['eta']}")
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


# ------------------------------------------------------------------ bound

def _cmd_bound(args) -> int:
    _require(args, n="--n", A="--A")
    bb = analytic.lower_bound(
        analytic.BoundParams(args.n, args.A), tail_mode=args.tail_mode, advisory=args.advisory
    )
    doc = {
        "kind": "bound-breakdown",
        "n": bb.n,
        "A": bb.A,
        "tail_mode": bb.tail_mode,
        "artin": bb.artin,
        "log_term": bb.log_term,
        "log3_term": bb.log3_term,
        "bt_term": bb.bt_term,
        "tail_term": bb.tail_term,
        "total": bb.total,
        "advisory": bool(args.advisory),
    }
    human = "\n".join(
        [
            f"n = {bb.n}   A = {bb.A}   tail mode: {bb.tail_mode}",
            f"  artin constant floor   +{bb.artin:.6f}",
            f"  theta-constant loss    -{bb.log_term:.6f}",
            f"  log^3 loss             -{bb.log3_term:.6f}",
            f"  Brun-Titchmarsh loss   -{bb.bt_term:.6f}",
            f"  power tail             -{bb.tail_term:.6f}",
            f"  total                   {bb.total:.6f}",
        ]
    )
    _emit(args, doc, human)
    return EXIT_OK


# ------------------------------------------------------------------ check

def _cmd_check(args) -> int:
    _require(args, mode="--mode", n="--n", A="--A")
    if args.mode == "two-prime":
        result = analytic.two_prime_check(args.n, args.A, tail_mode=args.tail_mode)
        table_name = None
    else:
        table = _load_table(args, proof_mode=True)
        table_name = table.provenance
        if args.mode == "sufficiency":
            if args.q is None:
                raise _UsageError("--mode sufficiency needs --q")
            result = analytic.sufficiency_check(table, args.q, args.n, args.A, tail_mode=args.tail_mode)
        else:
            result = analytic.q3_check(table, args.n, args.A, tail_mode=args.tail_mode)
    doc = {
        "kind": "check-result",
        "mode": args.mode,
        "n": args.n,
        "A": args.A,
        "q": args.q,
        "tail_mode": args.tail_mode,
        "ok": result.ok,
        "margin": result.margin,
        "lhs": result.lhs,
        "rhs": result.rhs,
        "table": table_name,
    }
    human = (
        f"{args.mode} check at n={args.n}, A={args.A}"
        + (f", q={args.q}" if args.q is not None else "")
        + f"\n  lower bound {result.lhs:.6f} vs target {result.rhs:.6f}"
        + f"\n  {'HOLDS' if result.ok else 'FAILS'} with margin {result.margin:+.6f}"
    )
    _emit(args, doc, human)
    return EXIT_OK if result.ok else EXIT_FAILURES


# -------------------------------------------------------------- threshold

def _cmd_threshold(args) -> int:
    _require(args, A="--A", n_min="--n-min", n_max="--n-max")
    if args.rhs == "zero":
        rhs = lambda n: 0.0
    elif args.rhs == "q3":
        rhs = lambda n: float(analytic.Q3_MAIN) + analytic.Q3_ERR / math.log(n)
    else:
        const = parse_float(args.rhs)
        rhs = lambda n: const
    n = analytic.threshold_find(args.A, rhs, args.n_min, args.n_max, tail_mode=args.tail_mode)
    doc = {
        "kind": "threshold",
        "A": args.A,
        "rhs": args.rhs,
        "n_min": args.n_min,
        "n_max": args.n_max,
        "tail_mode": args.tail_mode,
        "found": n is not None,
        "n": n,
    }
    human = (
        f"least n in [{args.n_min}, {args.n_max}] with bound(A={args.A}) > rhs({args.rhs}): "
        + (str(n) if n is not None else "none (inequality never holds in range)")
    )
    _emit(args, doc, human)
    return EXIT_OK


# ------------------------------------------------------------------ artin

def _cmd_artin(args) -> int:
    _require(args, prime_limit="--prime-limit")
    value = analytic.artin_constant(args.prime_limit)
    doc = {"kind": "artin", "prime_limit": args.prime_limit, "value": value}
    _emit(args, doc, f"artin product truncated at {args.prime_limit}: {value:.10f}")
    return EXIT_OK


# ------------------------------------------------------------------- sums

def _cmd_sums(args) -> int:
    doc = {"kind": "sums", "mu_phi": None, "tail": None, "c_theta_squares": None}
    lines = []
    if args.n is not None:
        a_limit = args.a_limit or 1000
        value = analytic.coprime_mu_phi_sum(args.n, a_limit)
        doc["mu_phi"] = {"n": args.n, "a_limit": a_limit, "value": value}
        lines.append(f"sum of mu(a)/phi(a^2), a <= {a_limit} coprime to {args.n}: {value:.10f}")
    if args.tail_from is not None:
        value = analytic.squarefree_phi_tail(args.tail_from)
        doc["tail"] = {"a_from": args.tail_from, "value": value}
        lines.append(f"tail bound for mu2(a)/phi(a^2), a >= {args.tail_from}: {value:.10f}")
    if args.ctheta:
        table = _load_table(args, proof_mode=False)
        value = thetadata.sum_c_theta_squares(table)
        doc["c_theta_squares"] = {
            "table": table.provenance,
            "value": value,
            "gate_ok": value < analytic.C_THETA_SUM_CAP,
        }
        lines.append(f"sum of c over square moduli [{table.provenance}]: {value:.7f}")
    if not lines:
        raise _UsageError("nothing to compute: pass --n, --tail-from and/or --ctheta")
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


# --------------------------------------------------------- table-validate

def _cmd_table_validate(args) -> int:
    table = _load_table(args, proof_mode=False)
    total = thetadata.sum_c_theta_squares(table)
    q3_sum = math.fsum(table.entry(q).c_theta for q in thetadata.Q3_MODULI)
    doc = {
        "kind": "table-summary",
        "provenance": table.provenance,
        "entries": len(table.entries),
        "rigorous": table.rigorous,
        "sum_c_theta_squares": total,
        "gate_ok": total < analytic.C_THETA_SUM_CAP,
        "q3_c_sum": q3_sum,
        "q3_c_gate_ok": q3_sum < analytic.Q3_ERR,
    }
    human = "\n".join(
        [
            f"table: {table.provenance}",
            f"entries: {len(table.entries)}   rigorous: {table.rigorous}",
            f"sum c over squares: {total:.7f}   gate (< 0.95): {'ok' if doc['gate_ok'] else 'FAIL'}",
            f"sum c over q3 moduli: {q3_sum:.7f}   gate (< 0.00592): {'ok' if doc['q3_c_gate_ok'] else 'FAIL'}",
        ]
    )
    _emit(args, doc, human)
    return EXIT_OK


def build_parser() -> _Parser:
    p = _Parser(
        prog="addrep",
        description=(
            "Verification toolkit for writing integers as a prime plus a "
            "square-free number, with divisibility constraints on the "
            "square-free part."
        ),
    )
    p.add_argument("--json", action="store_true", help="emit one machine-readable JSON document")
    p.add_argument("--seed", type=parse_int, default=0, help="seed for all randomized sampling")
    p.add_argument("--threads", type=parse_int, default=None, help="interval-job parallelism (default: cores)")
    p.add_argument("--table", default=None, help=f"theta-constant TSV (default: ${TABLE_ENV} or bundled placeholder)")
    p.add_argument("--allow-unverified", action="store_true", help="accept non-rigorous tables for proof-style checks")
    p.add_argument("--config", default=None, help="JSON file of flag defaults (same names, dashes as underscores)")
    sub = p.add_subparsers(dest="command", metavar="SUBCOMMAND")

    v = sub.add_parser(
        "verify",
        help="probe intervals for representations with a shared square-free table",
        description=(
            "Interval verification: for each n of the chosen parity, probe "
            "n - p over the largest primes below the interval and fold the "
            "gcd of the admissible differences; gcd <= 2 certifies coprime "
            "representations for every odd prime modulus at once. Interval "
            "index 0 is the bootstrap segment [width/10, width)."
        ),
    )
    v.add_argument("--from", dest="from_", type=parse_int, help="first interval index")
    v.add_argument("--to", type=parse_int, help="last interval index (inclusive)")
    v.add_argument("--initial", action="store_true", help="run the exhaustive initial segment instead")
    v.add_argument("--parity", choices=["odd", "even", "both"], default="odd")
    v.add_argument("--width", type=parse_int, default=10_000_000, help="interval width")
    v.add_argument("--primes", type=parse_int, default=100, help="probe primes per interval")
    v.add_argument("--sqfree-limit", type=parse_int, default=None, help="square-free table size (default 2x width)")
    v.add_argument("--q-max", type=parse_int, default=100_000, help="largest modulus the certificate targets")
    v.add_argument("--exclusions", type=parse_int_set, default=frozenset(), help="comma-separated eta values to skip")
    v.add_argument("--corollary", action="store_true", help="preset: even parity with exclusions 1,2,11")
    v.add_argument("--escalation", type=parse_int, default=1000, help="extra probes before declaring failure")
    v.add_argument("--samples", type=parse_int, default=1000, help="soundness spot-checks per run")
    v.add_argument("--checkpoint", default=None, help="JSONL checkpoint path (resumable)")
    v.add_argument("--out", default=None, help="write the canonical report to this file")
    v.set_defaults(handler=_cmd_verify)

    e = sub.add_parser(
        "exceptions",
        help="exact exception set: n with no representation coprime to q",
        description=(
            "Search [1, limit] for every n with no representation "
            "n = p + eta, eta square-free and coprime to q. Listed n are "
            "re-confirmed by an exhaustive scan; 1 and 2 are always listed."
        ),
    )
    e.add_argument("--q", type=parse_int, help="modulus (composite and primorial-sized allowed)")
    e.add_argument("--limit", type=parse_int)
    e.add_argument("--parity", choices=["both", "odd", "even"], default="both")
    e.add_argument("--start", type=parse_int, default=1)
    e.set_defaults(handler=_cmd_exceptions)

    c = sub.add_parser(
        "count",
        help="representation counts for one n (optionally coprime to q)",
        description=(
            "Exact counts of n = p + eta (or n = p1 + p2 + eta with "
            "--two-prime), weighted by log p; --via-theta cross-checks the "
            "Mobius-weighted theta identity."
        ),
    )
    c.add_argument("--n", type=parse_int)
    c.add_argument("--q", type=parse_int, default=None)
    c.add_argument("--two-prime", action="store_true")
    c.add_argument("--via-theta", action="store_true")
    c.set_defaults(handler=_cmd_count)

    b = sub.add_parser(
        "bound",
        help="term-by-term lower bound for R(n)/n",
        description=(
            "Evaluate the explicit lower bound for the weighted "
            "representation count density at (n, A): Artin floor minus the "
            "theta-constant, log^3, Brun-Titchmarsh and power-tail losses."
        ),
    )
    b.add_argument("--n", type=parse_int)
    b.add_argument("--A", type=parse_float)
    b.add_argument("--tail-mode", choices=list(analytic.TAIL_MODES), default="lemma")
    b.add_argument("--advisory", action="store_true", help="evaluate below the proved n threshold")
    b.set_defaults(handler=_cmd_bound)

    k = sub.add_parser(
        "check",
        help="sufficiency inequalities (sufficiency / q3 / two-prime)",
        description=(
            "Signed-margin inequality checks: 'sufficiency' compares the "
            "lower bound against the theta estimate for one prime modulus, "
            "'q3' against the eight-modulus inclusion-exclusion target "
            "19/120 + 0.00592/log n, 'two-prime' subtracts the 3 log(n)/n "
            "exclusion allowance."
        ),
    )
    k.add_argument("--mode", choices=["sufficiency", "q3", "two-prime"])
    k.add_argument("--n", type=parse_int)
    k.add_argument("--A", type=parse_float)
    k.add_argument("--q", type=parse_int, default=None)
    k.add_argument("--tail-mode", choices=list(analytic.TAIL_MODES), default="lemma")
    k.set_defaults(handler=_cmd_check)

    t = sub.add_parser(
        "threshold",
        help="least n where the lower bound beats a target",
        description=(
            "Bisect for the least n in [n-min, n-max] where the lower bound "
            "at A exceeds the target: 'zero', 'q3', or a numeric constant."
        ),
    )
    t.add_argument("--A", type=parse_float)
    t.add_argument("--rhs", default="zero", help="zero | q3 | a numeric constant")
    t.add_argument("--n-min", type=parse_int)
    t.add_argument("--n-max", type=parse_int)
    t.add_argument("--tail-mode", choices=list(analytic.TAIL_MODES), default="lemma")
    t.set_defaults(handler=_cmd_threshold)

    a = sub.add_parser(
        "artin",
        help="truncated Artin-constant Euler product",
        description="Product of 1 - 1/(p(p-1)) over primes up to the limit.",
    )
    a.add_argument("--prime-limit", type=parse_int)
    a.set_defaults(handler=_cmd_artin)

    s = sub.add_parser(
        "sums",
        help="Mobius/phi partial sums and tail bounds",
        description=(
            "Partial sum of mu(a)/phi(a^2) over a coprime to n, the tail "
            "bound 1.95 minus the finite square-free part, and the table's "
            "c-sum over square moduli."
        ),
    )
    s.add_argument("--n", type=parse_int, default=None, help="compute the coprime mu/phi sum for this n")
    s.add_argument("--a-limit", type=parse_int, default=None)
    s.add_argument("--tail-from", type=parse_int, default=None)
    s.add_argument("--ctheta", action="store_true", help="sum c over square moduli of the table")
    s.set_defaults(handler=_cmd_sums)

    tv = sub.add_parser(
        "table-validate",
        help="load a theta-constant table and report its gates",
        description=(
            "Parse and validate a constants table: completeness, caps, the "
            "c-sum gate over squares (< 0.95) and over the q3 moduli "
            "(< 0.00592), and whether it is marked rigorous."
        ),
    )
    tv.set_defaults(handler=_cmd_table_validate)

    return p


def _apply_config_file(args, parser: _Parser, argv: list[str]) -> None:
    if not args.config:
        return
    try:
        with open(args.config, encoding="utf-8") as fh:
            conf = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise TableError(f"config file {args.config}: {exc}") from None
    if not isinstance(conf, dict):
        raise TableError(f"config file {args.config} must hold a JSON object")
    for key, value in conf.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            raise _UsageError(f"config key {key!r} matches no flag of this subcommand")
        flag = "--" + dest.replace("_", "-")
        if flag in argv or (dest == "from_" and "--from" in argv):
            continue  # explicit flags beat config values
        if dest == "exclusions" and isinstance(value, (list, str)):
            value = frozenset(parse_int(str(x)) for x in (value.split(",") if isinstance(value, str) else value))
        setattr(args, dest, value)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            parser.print_usage(sys.stderr)
            return EXIT_USAGE
        _apply_config_file(args, parser, argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.handler(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (TableError, DomainError, CheckpointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"invalid argument: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
