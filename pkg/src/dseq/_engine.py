"""Vectorized kernels for bulk d-sequence scans.

The scalar walk in ``core`` is exact but far too slow for scanning every
prime below one million, so this module batches the residue walks across
primes with numpy. Lanes are sorted by walk length and retired in order,
so the total element work is exactly the sum of the walk lengths.

Two number-theoretic facts keep the binary scan cheap; both are exercised
against the scalar path by the test suite:

* F_p^* is cyclic, so the subgroup generated by the base contains -1
  exactly when its order T is even.
* Negating a residue flips the parity of the emitted binary digit, and in
  base 3 maps digit d to 2 - d. Hence even T forces n0 = n1 in base 2
  (only odd-order primes need an actual walk), and in base 3 the second
  half-period digits are determined by the first half.
"""
from __future__ import annotations

import numpy as np


def spf_array(n: int) -> np.ndarray:
    """Smallest prime factor for every integer in [0, n] (spf[0] = spf[1] = self)."""
    spf = np.zeros(n + 1, dtype=np.int64)
    for i in range(2, int(n**0.5) + 1):
        if spf[i] == 0:
            sl = spf[i * i :: i]
            sl[sl == 0] = i
    rest = spf == 0
    spf[rest] = np.arange(n + 1, dtype=np.int64)[rest]
    return spf


def factor_distinct(m: int, spf: np.ndarray) -> list[int]:
    out = []
    while m > 1:
        q = int(spf[m])
        out.append(q)
        while m % q == 0:
            m //= q
    return out


def orders_for(primes: np.ndarray, base: int, spf: np.ndarray) -> np.ndarray:
    """Multiplicative order of ``base`` modulo each prime (none may divide base)."""
    out = np.empty(len(primes), dtype=np.int64)
    for k, p_ in enumerate(primes):
        p = int(p_)
        t = p - 1
        for q in factor_distinct(p - 1, spf):
            while t % q == 0 and pow(base, t // q, p) == 1:
                t //= q
        out[k] = t
    return out


def _walk_dtype(max_prime: int, base: int) -> type:
    # the walk forms base * r with r < p, so base * max_prime must fit
    return np.int32 if base * max_prime < 2**31 else np.int64


def binary_one_counts(primes: np.ndarray, lengths: np.ndarray) -> np.ndarray:
    """Count of 1 digits over ``lengths[k]`` walk steps of 1/primes[k] in base 2.

    With lengths = the full period this is n1; the digit stream is the same
    under either rule. A doubled residue is reduced mod p exactly when the
    result is odd, so the reduction mask doubles as the digit.
    """
    if len(primes) == 0:
        return np.zeros(0, dtype=np.int64)
    order = np.argsort(lengths, kind="stable")
    dtype = _walk_dtype(int(primes.max()), 2)
    p = primes[order].astype(dtype)
    steps = lengths[order]
    acc = np.zeros(len(p), dtype=np.int64)
    r = np.ones(len(p), dtype=dtype)
    mask = np.empty(len(p), dtype=bool)
    done = 0
    start = 0
    result = np.zeros(len(primes), dtype=np.int64)
    for bound in np.unique(steps):
        rr, pp, aa, mm = r[start:], p[start:], acc[start:], mask[start:]
        for _ in range(int(bound) - done):
            np.add(rr, rr, out=rr)
            np.greater_equal(rr, pp, out=mm)
            np.subtract(rr, pp, out=rr, where=mm)
            np.add(aa, mm, out=aa, casting="unsafe")
        done = int(bound)
        stop = int(np.searchsorted(steps, bound, side="right"))
        result[order[start:stop]] = acc[start:stop]
        start = stop
    return result


def ternary_digit_counts(primes: np.ndarray, lengths: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Division-rule digit tallies (c0, c1, c2) over ``lengths[k]`` walk steps in base 3."""
    if len(primes) == 0:
        z = np.zeros(0, dtype=np.int64)
        return z, z.copy(), z.copy()
    order = np.argsort(lengths, kind="stable")
    dtype = _walk_dtype(int(primes.max()), 3)
    p = primes[order].astype(dtype)
    p2 = (p * 2).astype(dtype)
    steps = lengths[order]
    # acc1 counts digit >= 1, acc2 counts digit == 2
    acc1 = np.zeros(len(p), dtype=np.int64)
    acc2 = np.zeros(len(p), dtype=np.int64)
    r = np.ones(len(p), dtype=dtype)
    t = np.empty(len(p), dtype=dtype)
    m1 = np.empty(len(p), dtype=bool)
    m2 = np.empty(len(p), dtype=bool)
    done = 0
    start = 0
    out1 = np.zeros(len(primes), dtype=np.int64)
    out2 = np.zeros(len(primes), dtype=np.int64)
    for bound in np.unique(steps):
        rr, pp, pp2 = r[start:], p[start:], p2[start:]
        aa1, aa2 = acc1[start:], acc2[start:]
        tt, mm1, mm2 = t[start:], m1[start:], m2[start:]
        for _ in range(int(bound) - done):
            np.multiply(rr, 3, out=tt)
            np.greater_equal(tt, pp, out=mm1)
            np.greater_equal(tt, pp2, out=mm2)
            np.subtract(tt, pp, out=tt, where=mm1)
            np.subtract(tt, pp, out=tt, where=mm2)
            rr[:] = tt
            np.add(aa1, mm1, out=aa1, casting="unsafe")
            np.add(aa2, mm2, out=aa2, casting="unsafe")
        done = int(bound)
        stop = int(np.searchsorted(steps, bound, side="right"))
        out1[order[start:stop]] = acc1[start:stop]
        out2[order[start:stop]] = acc2[start:stop]
        start = stop
    c2 = out2
    c1 = out1 - out2
    c0 = lengths - out1
    return c0, c1, c2


def binary_scan_counts(primes: np.ndarray, orders: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(n0, n1) per prime over one full period, base 2, either rule.

    Even-order primes are balanced by the negation symmetry and skip the
    walk; odd-order primes are walked for their full period.
    """
    n1 = np.where(orders % 2 == 0, orders // 2, 0).astype(np.int64)
    odd = (orders % 2) == 1
    if odd.any():
        n1[odd] = binary_one_counts(primes[odd], orders[odd])
    return orders - n1, n1


def ternary_scan_counts(primes: np.ndarray, orders: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(n0, n1, n2) per prime over one full period, base 3, Division rule.

    For even orders only T/2 steps are walked; the second half contributes
    the digit-complement tallies (n0 picks up c2 and vice versa).
    """
    even = (orders % 2) == 0
    steps = np.where(even, orders // 2, orders)
    c0, c1, c2 = ternary_digit_counts(primes, steps)
    n0 = np.where(even, c0 + c2, c0)
    n1 = np.where(even, 2 * c1, c1)
    n2 = np.where(even, c2 + c0, c2)
    return n0, n1, n2
