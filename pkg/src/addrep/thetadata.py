"""Explicit theta(x; q, a) estimate constants: loading and evaluation.

Each table row carries a modulus q, a constant c(q) and a validity
threshold x(q) such that

    | theta(x; q, a) - x / phi(q) |  <  c(q) * x / log x     for x >= x(q)

uniformly over residues a coprime to q.  Rigorous constants of this shape
for all 3 <= q <= 10^5 are published by Bennett, Martin, O'Bryant and
Rechnitzer alongside "Explicit bounds for primes in arithmetic
progressions" (tables at https://www.nt.math.ubc.ca/BeMaObRe/); this
package ships only a clearly marked non-rigorous placeholder, and every
loader keeps track of which kind it is handling.

File format: UTF-8 TSV, one ``q<TAB>c<TAB>x`` row per entry, ``#``
comments allowed.  A comment line containing the token ``non-rigorous``
marks the whole table as placeholder data.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, TableParseError, TableValidationError
from .sieve import Range, euler_phi, sieve_primes

# Square moduli a^2 for 2 <= a <= 316 back the main lower-bound lemma; the
# eight moduli below feed the inclusion-exclusion estimate at q = 3.
SQUARE_ROOT_RANGE = range(2, 317)
SQUARE_MODULI = tuple(a * a for a in SQUARE_ROOT_RANGE)
Q3_MODULI = (3, 9, 12, 36, 75, 225, 300, 900)
REQUIRED_MODULI = tuple(sorted(set(SQUARE_MODULI) | set(Q3_MODULI)))

SQUARE_X_CAP = 4_810_000_000   # cap for square moduli
GENERAL_X_CAP = 8_000_000_000  # cap for everything else

NON_RIGOROUS_MARKER = "non-rigorous"

_SQUARE_SET = frozenset(SQUARE_MODULI)


@dataclass(frozen=True)
class ThetaEntry:
    modulus: int
    c_theta: float
    x_theta: int


@dataclass(eq=False)
class ThetaTable:
    """Immutable-by-convention map modulus -> entry, plus provenance."""

    entries: dict[int, ThetaEntry]
    provenance: str = "<constructed>"
    rigorous: bool = True

    def __contains__(self, q: int) -> bool:
        return q in self.entries

    def entry(self, q: int) -> ThetaEntry:
        try:
            return self.entries[q]
        except KeyError:
            raise TableValidationError(f"modulus {q} missing from table {self.provenance}") from None


def _validate_entry(q: int, c: float, x: int, *, source: str, line: int) -> ThetaEntry:
    if q < 3:
        raise TableParseError(f"modulus must be >= 3, got {q}", source=source, line=line)
    if not (0.0 < c < 1.0):
        raise TableParseError(f"c_theta must lie in (0, 1), got {c}", source=source, line=line)
    if x < 2:
        raise TableParseError(f"x_theta must be >= 2, got {x}", source=source, line=line)
    cap = SQUARE_X_CAP if q in _SQUARE_SET else GENERAL_X_CAP
    if x > cap:
        raise TableParseError(
            f"x_theta {x} for modulus {q} exceeds its cap {cap}", source=source, line=line
        )
    return ThetaEntry(q, c, x)


def load_table(source, *, name: str | None = None, require_complete: bool = True) -> ThetaTable:
    """Parse and validate a TSV constants table.

    ``source`` may be a path, a bytes/str payload, or a binary/text
    stream.  Parse errors carry the source name and line number; with
    ``require_complete`` every required modulus must be present.
    """
    if isinstance(source, Path) or (
        isinstance(source, str) and source and "\t" not in source and "\n" not in source
    ):
        name = name or str(source)
        text = Path(source).read_text(encoding="utf-8")
    elif isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    elif isinstance(source, io.IOBase) or hasattr(source, "read"):
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    else:
        raise TypeError(f"cannot read table from {type(source)!r}")
    name = name or "<stream>"

    entries: dict[int, ThetaEntry] = {}
    rigorous = True
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        stripped = raw_line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            if NON_RIGOROUS_MARKER in stripped:
                rigorous = False
            continue
        parts = raw_line.split("\t")
        if len(parts) != 3:
            raise TableParseError(
                f"expected 3 tab-separated fields, got {len(parts)}", source=name, line=lineno
            )
        try:
            q = int(parts[0].strip())
            c = float(parts[1].strip())
            x = int(parts[2].strip())
        except ValueError as exc:
            raise TableParseError(f"unparseable row: {exc}", source=name, line=lineno) from None
        if q in entries:
            raise TableParseError(f"duplicate modulus {q}", source=name, line=lineno)
        entries[q] = _validate_entry(q, c, x, source=name, line=lineno)

    if require_complete:
        for q in REQUIRED_MODULI:
            if q not in entries:
                raise TableValidationError(f"required modulus {q} absent from table {name}")
    return ThetaTable(entries, provenance=name, rigorous=rigorous)


def serialize(table: ThetaTable) -> str:
    """Canonical TSV: optional rigor marker, then rows by ascending modulus."""
    lines = []
    if not table.rigorous:
        lines.append(f"# {NON_RIGOROUS_MARKER}: placeholder constants, not the published values")
    for q in sorted(table.entries):
        e = table.entries[q]
        lines.append(f"{e.modulus}\t{e.c_theta!r}\t{e.x_theta}")
    return "\n".join(lines) + "\n"


def theta_upper(table: ThetaTable, q: int, x: float) -> float:
    """Upper estimate x/phi(q) + c(q) x / log x, valid for x >= x_theta(q)."""
    e = table.entry(q)
    if x < e.x_theta:
        raise DomainError(f"estimate for modulus {q} needs x >= {e.x_theta}, got {x}")
    return x / euler_phi(q) + e.c_theta * x / math.log(x)


def theta_lower(table: ThetaTable, q: int, x: float) -> float:
    """Companion lower estimate x/phi(q) - c(q) x / log x."""
    e = table.entry(q)
    if x < e.x_theta:
        raise DomainError(f"estimate for modulus {q} needs x >= {e.x_theta}, got {x}")
    return x / euler_phi(q) - e.c_theta * x / math.log(x)


def sum_c_theta_squares(table: ThetaTable) -> float:
    """Sum of c over the square moduli a^2, 2 <= a <= 316."""
    terms = []
    for q in SQUARE_MODULI:
        if q not in table.entries:
            raise TableValidationError(f"square modulus {q} absent from table {table.provenance}")
        terms.append(table.entries[q].c_theta)
    return math.fsum(terms)


@dataclass(frozen=True)
class EmpiricalCTheta:
    """Observed max of |theta(x;q,a) - x/phi(q)| * log x / x. Advisory only."""

    q: int
    x_max: int
    value: float
    degenerate: bool = False


def empirical_c_theta(q: int, x_max: int, *, samples: int = 48) -> EmpiricalCTheta:
    """Empirical stand-in for c(q), measured on sampled x up to x_max.

    This is a diagnostic, not a bound: it reports the worst normalized
    deviation actually observed, with no rigor attached.  x_max < q is
    degenerate and reports 0 with the flag set.
    """
    if q < 3:
        raise ValueError(f"modulus must be >= 3, got {q}")
    if x_max < q:
        return EmpiricalCTheta(q, x_max, 0.0, degenerate=True)
    primes = sieve_primes(Range(2, x_max + 1)).primes
    logs = np.log(primes.astype(np.float64))
    residues = (primes % q).astype(np.int64)
    coprime = np.array([a for a in range(q) if math.gcd(a, q) == 1], dtype=np.int64)
    phi_q = coprime.size

    # Sample near the top of the range; small x would dominate the max with
    # noise that says nothing about the regime the constants describe.
    lo = max(2 * q, 100, x_max // 30)
    if lo >= x_max:
        xs = [x_max]
    else:
        grid = np.geomspace(lo, x_max, num=samples)
        xs = sorted({int(round(v)) for v in grid} | {x_max})
    worst = 0.0
    for x in xs:
        idx = int(np.searchsorted(primes, x, side="right"))
        sums = np.bincount(residues[:idx], weights=logs[:idx], minlength=q)
        dev = np.abs(sums[coprime] - x / phi_q).max()
        worst = max(worst, float(dev * math.log(x) / x))
    return EmpiricalCTheta(q, x_max, worst, degenerate=False)
