"""Digit sequences of prime reciprocals: periods, digits, counts, classification.

A d-sequence is the repeating digit string of 1/p in radix b. Its period
equals the multiplicative order of b mod p. Two digit conventions are
supported:

* ``DIVISION`` -- the true radix-b digits of 1/p from long division:
  digit(i) = floor(b * r_{i-1} / p) with r_0 = 1, r_i = b * r_{i-1} mod p.
* ``KAK`` -- digit(i) = (b^i mod p) mod b, the residue reduced mod b.

In base 2 the two rules produce identical digits for every odd prime.
In base 3 they coincide for p = 2 (mod 3) and differ by a 1<->2 digit
relabeling for p = 1 (mod 3); the 0 digits agree either way.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import BaseDividesPrimeError, UnsupportedCountsError
from .primes import is_prime

SUPPORTED_BASES = (2, 3)


class DigitRule(str, Enum):
    DIVISION = "division"
    KAK = "kak"


class Classification(str, Enum):
    ZEROS_EXCEED = "zeros_exceed"
    ONES_EXCEED = "ones_exceed"
    EQUAL = "equal"


def _check_base(base: int) -> None:
    if base not in SUPPORTED_BASES:
        raise ValueError(f"base must be one of {SUPPORTED_BASES}, got {base}")


def _check_pair(base: int, p: int) -> None:
    _check_base(base)
    if p < 2:
        raise ValueError(f"p must be a prime >= 2, got {p}")
    if base % p == 0:
        raise BaseDividesPrimeError(
            f"1/{p} terminates in base {base}; no repeating period exists"
        )


@dataclass(frozen=True)
class DigitCounts:
    """Digit tallies over exactly one full period of a d-sequence."""

    base: int
    counts: tuple[int, ...]
    period: int

    def __post_init__(self):
        if len(self.counts) != self.base:
            raise ValueError(f"expected {self.base} tallies, got {len(self.counts)}")
        if any(c < 0 for c in self.counts):
            raise ValueError(f"negative tally in {self.counts}")
        if sum(self.counts) != self.period:
            raise ValueError(f"tallies {self.counts} do not sum to period {self.period}")
        if self.counts[0] >= self.period:
            raise ValueError("a reciprocal's period is never all zeros")

    @property
    def n0(self) -> int:
        return self.counts[0]

    @property
    def n1(self) -> int:
        return self.counts[1]

    @property
    def n2(self) -> int:
        if self.base < 3:
            raise UnsupportedCountsError("n2 is only defined for base-3 counts")
        return self.counts[2]


@dataclass(frozen=True)
class DSeqRecord:
    """Full per-prime analysis of one d-sequence."""

    p: int
    base: int
    rule: DigitRule
    period: int
    counts: DigitCounts
    classification: Classification | None  # binary only
    max_length: bool  # period == p - 1
    pct_diff: float | None  # binary only: 100 * (n0 - n1) / period


def multiplicative_order(base: int, p: int) -> int:
    """Smallest T >= 1 with base^T = 1 (mod p), for prime p not dividing base.

    Factors p - 1 by trial division and strips prime factors from the
    exponent, so the cost is O(sqrt p) divisions plus a few modular powers.
    """
    _check_pair(base, p)
    t = p - 1
    for q in _distinct_prime_factors(p - 1):
        while t % q == 0 and pow(base, t // q, p) == 1:
            t //= q
    return t


def _distinct_prime_factors(m: int) -> list[int]:
    out = []
    if m % 2 == 0:
        out.append(2)
        while m % 2 == 0:
            m //= 2
    q = 3
    while q * q <= m:
        if m % q == 0:
            out.append(q)
            while m % q == 0:
                m //= q
        q += 2
    if m > 1:
        out.append(m)
    return out


def digit(i: int, base: int, p: int, rule: DigitRule = DigitRule.DIVISION) -> int:
    """The i-th digit (i >= 1) of the d-sequence of 1/p in the given base."""
    _check_pair(base, p)
    if i < 1:
        raise ValueError(f"digit index starts at 1, got {i}")
    if rule == DigitRule.DIVISION:
        r = pow(base, i - 1, p)
        return base * r // p
    return pow(base, i, p) % base


def digits(base: int, p: int, count: int, rule: DigitRule = DigitRule.DIVISION) -> list[int]:
    """First ``count`` digits, generated by one residue walk."""
    _check_pair(base, p)
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    out = []
    r = 1
    for _ in range(count):
        t = base * r
        r = t % p
        out.append(t // p if rule == DigitRule.DIVISION else r % base)
    return out


def digit_counts(base: int, p: int, rule: DigitRule = DigitRule.DIVISION) -> DigitCounts:
    """Tallies of digits 1..T over exactly one period, by a single residue walk."""
    _check_pair(base, p)
    division = rule == DigitRule.DIVISION
    tallies = [0] * base
    r = 1
    period = 0
    while True:
        t = base * r
        r = t % p
        tallies[t // p if division else r % base] += 1
        period += 1
        if r == 1:
            break
    return DigitCounts(base=base, counts=tuple(tallies), period=period)


def classify(counts: DigitCounts) -> Classification:
    """Compare 0s to 1s for a binary counts object."""
    if counts.base != 2:
        raise UnsupportedCountsError("classification is defined for binary counts only")
    if counts.n0 > counts.n1:
        return Classification.ZEROS_EXCEED
    if counts.n1 > counts.n0:
        return Classification.ONES_EXCEED
    return Classification.EQUAL


def is_max_length(base: int, p: int) -> bool:
    """True iff the d-sequence attains the maximum period p - 1."""
    return multiplicative_order(base, p) == p - 1


def pct_difference(counts: DigitCounts) -> float:
    """Signed percentage 100 * (n0 - n1) / period for binary counts."""
    if counts.base != 2:
        raise UnsupportedCountsError("percentage difference is defined for binary counts only")
    return 100.0 * (counts.n0 - counts.n1) / counts.period


def ternary_ratios(counts: DigitCounts) -> tuple[float | None, float | None]:
    """(n0/n1, n0/n2) for ternary counts; None where the divisor is zero."""
    if counts.base != 3:
        raise UnsupportedCountsError("digit ratios are defined for ternary counts only")
    r01 = counts.n0 / counts.n1 if counts.n1 > 0 else None
    r02 = counts.n0 / counts.n2 if counts.n2 > 0 else None
    return r01, r02


def analyze(p: int, base: int, rule: DigitRule = DigitRule.DIVISION) -> DSeqRecord:
    """Full analysis of 1/p in the given base: one walk plus derived fields."""
    _check_pair(base, p)
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    counts = digit_counts(base, p, rule)
    if base == 2:
        classification = classify(counts)
        pct = pct_difference(counts)
    else:
        classification = None
        pct = None
    return DSeqRecord(
        p=p,
        base=base,
        rule=rule,
        period=counts.period,
        counts=counts,
        classification=classification,
        max_length=counts.period == p - 1,
        pct_diff=pct,
    )
