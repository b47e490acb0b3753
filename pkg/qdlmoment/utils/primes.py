"""Prime sieves and deterministic primality for 64-bit integers."""

import functools

import numpy as np

# Deterministic Miller-Rabin witnesses for every n < 2**64.
MILLER_RABIN_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in MILLER_RABIN_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in MILLER_RABIN_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@functools.lru_cache(maxsize=32)
def prime_sieve(limit: int) -> np.ndarray:
    """All primes `p <= limit`, ascending. Read-only."""
    if limit < 2:
        out = np.zeros(0, dtype=np.int64)
    else:
        sieve = np.ones(limit + 1, dtype=bool)
        sieve[:2] = False
        sieve[4::2] = False
        for p in range(3, int(limit**0.5) + 1, 2):
            if sieve[p]:
                sieve[p * p :: 2 * p] = False
        out = np.flatnonzero(sieve).astype(np.int64)
    out.setflags(write=False)
    return out


@functools.lru_cache(maxsize=8)
def _smallest_prime_factors_pow2(exponent: int) -> np.ndarray:
    limit = 1 << exponent
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in prime_sieve(int(limit**0.5) + 1):
        view = spf[p * p :: p]
        view[view == 0] = p
    unset = np.flatnonzero(spf == 0)
    spf[unset] = unset
    spf.setflags(write=False)
    return spf


def smallest_prime_factors(limit: int) -> np.ndarray:
    """Table `spf` with `spf[k]` the least prime factor of k (`spf[1] == 1`).

    Tables are built for the next power of two so repeated calls share them.
    """
    return _smallest_prime_factors_pow2(max(4, int(limit).bit_length()))


def odd_primes_up_to(limit: int) -> list[int]:
    return [int(p) for p in prime_sieve(limit) if p != 2]
