"""Prime supply: bounded sieve, deterministic primality test, range iteration."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SieveCapacityError

# Bit-array sieving is supported up to this bound; beyond it use is_prime.
SIEVE_LIMIT = 2**32 - 1

# Strong-pseudoprime witnesses proven sufficient for every n < 2^64
# (in fact for n < 3.3e24), so the test below is fully deterministic there.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@dataclass(frozen=True)
class PrimeRange:
    """Inclusive range [lo, hi] of candidate prime values, lo >= 2."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo < 2:
            raise ValueError(f"range lower bound must be >= 2, got {self.lo}")
        if self.lo > self.hi:
            raise ValueError(f"empty range: lo={self.lo} > hi={self.hi}")


def sieve_array(n: int) -> np.ndarray:
    """All primes <= n as an int64 array (sieve of Eratosthenes)."""
    if n < 2:
        raise ValueError(f"sieve bound must be >= 2, got {n}")
    if n > SIEVE_LIMIT:
        raise SieveCapacityError(f"sieve bound {n} exceeds limit {SIEVE_LIMIT}")
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for i in range(2, int(n**0.5) + 1):
        if mask[i]:
            mask[i * i :: i] = False
    return np.flatnonzero(mask).astype(np.int64)


def sieve_upto(n: int) -> list[int]:
    """All primes <= n, strictly increasing."""
    return sieve_array(n).tolist()


def primes_in(rng: PrimeRange) -> list[int]:
    """Primes p with rng.lo <= p <= rng.hi, strictly increasing."""
    return primes_in_array(rng).tolist()


def primes_in_array(rng: PrimeRange) -> np.ndarray:
    arr = sieve_array(rng.hi)
    return arr[np.searchsorted(arr, rng.lo) :]


def is_prime(n: int) -> bool:
    """Deterministic primality test (Miller-Rabin with a proven witness set)."""
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n == w:
            return True
        if n % w == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True
