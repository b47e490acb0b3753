"""Integer arithmetic: Kronecker symbols, factorization, quadratic characters."""

import functools
import logging
import math

import numpy as np

from qdlmoment.errors import (
    DomainError,
    EvenModulusError,
    LimitError,
    QdlError,
    UndefinedSymbolError,
)
from qdlmoment.types.factorization import Factorization
from qdlmoment.types.quadratic_character import QuadraticCharacter
from qdlmoment.types.squarefree_decomposition import SquarefreeDecomposition
from qdlmoment.utils.primes import is_prime, prime_sieve, smallest_prime_factors

logger = logging.getLogger(__name__)

MAX_INT64 = 2**63 - 1
TRIAL_DIVISION_BOUND = 10**6


def kronecker(a: int, b: int) -> int:
    """The Kronecker symbol (a/b) for all integers a, b, not both zero."""
    if a == 0 and b == 0:
        raise UndefinedSymbolError("The Kronecker symbol (0/0) is undefined")
    if b == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if b < 0:
        b = -b
        if a < 0:
            result = -result
    twos = (b & -b).bit_length() - 1
    b >>= twos
    if twos:
        if a % 2 == 0:
            return 0
        if twos % 2 and a % 8 in (3, 5):
            result = -result
    a %= b
    while a:
        while a % 2 == 0:
            a //= 2
            if b % 8 in (3, 5):
                result = -result
        a, b = b, a
        if a % 4 == 3 and b % 4 == 3:
            result = -result
        a %= b
    return result if b == 1 else 0


def _jacobi_kernel(x: np.ndarray, n: np.ndarray, sign: np.ndarray) -> np.ndarray:
    # Binary Jacobi algorithm run on whole arrays; n odd positive, 0 <= x < n.
    x = x.copy()
    n = n.copy()
    sign = sign.copy()
    while True:
        active = x != 0
        if not active.any():
            break
        while True:
            even = active & (x % 2 == 0)
            if not even.any():
                break
            x[even] //= 2
            flip = even & ((n % 8 == 3) | (n % 8 == 5))
            sign[flip] = -sign[flip]
        flip = active & (x % 4 == 3) & (n % 4 == 3)
        sign[flip] = -sign[flip]
        x, n = np.where(active, n, x), np.where(active, x, n)
        x[active] %= n[active]
    return np.where(n == 1, sign, 0)


def kronecker_array(a: int, b: np.ndarray) -> np.ndarray:
    """(a/b) for a fixed top and an array of bottoms b >= 0."""
    b = np.asarray(b, dtype=np.int64)
    if np.any(b < 0):
        raise DomainError("kronecker_array takes non-negative bottoms only")
    out = np.zeros(b.shape, dtype=np.int64)
    zero = b == 0
    out[zero] = 1 if abs(a) == 1 else 0
    pos = ~zero
    bp = b[pos]
    low = bp & (-bp)
    twos = np.round(np.log2(low)).astype(np.int64)
    odd = bp // low
    sign = np.ones(bp.shape, dtype=np.int64)
    if a % 2 == 0:
        sign[twos > 0] = 0
    elif a % 8 in (3, 5):
        sign[twos % 2 == 1] *= -1
    out[pos] = _jacobi_kernel(np.mod(a, odd), odd, sign)
    return out


def jacobi_array(a: np.ndarray, n: int) -> np.ndarray:
    """(a/n) for an array of tops and a fixed odd positive n."""
    if n < 1 or n % 2 == 0:
        raise EvenModulusError(f"Jacobi symbol needs an odd positive bottom, got {n}")
    a = np.asarray(a, dtype=np.int64)
    return _jacobi_kernel(
        np.mod(a, n), np.full(a.shape, n, dtype=np.int64), np.ones(a.shape, np.int64)
    )


def _powmod_array(base: np.ndarray, exp: np.ndarray, mod: np.ndarray) -> np.ndarray:
    result = np.ones_like(mod)
    base = base % mod
    exp = exp.copy()
    while np.any(exp > 0):
        odd = (exp & 1) == 1
        result = np.where(odd, (result * base) % mod, result)
        base = (base * base) % mod
        exp >>= 1
    return result


@functools.lru_cache(maxsize=256)
def kronecker_table(d: int, length: int) -> np.ndarray:
    """(d/k) for k = 1 .. length, built multiplicatively from the primes.

    Read-only; shared between callers with the same arguments.
    """
    if length > 3_000_000_000:
        raise LimitError(f"Character table length {length} overflows int64 powmod")
    spf = smallest_prime_factors(length)
    primes = prime_sieve(length)
    at_prime = np.zeros(length + 1, dtype=np.int64)
    if primes.size:
        odd = primes[primes > 2]
        legendre = _powmod_array(np.mod(d, odd), (odd - 1) // 2, odd)
        legendre = np.where(legendre == odd - 1, -1, legendre)
        at_prime[odd] = legendre
        at_prime[2] = kronecker(d, 2)
    values = np.zeros(length + 1, dtype=np.int64)
    values[1] = 1 if length >= 1 else 0
    lo = 2
    while lo <= length:
        hi = min(2 * lo, length + 1)
        k = np.arange(lo, hi)
        p = spf[k]
        values[k] = at_prime[p] * values[k // p]
        lo = hi
    out = values[1:]
    out.setflags(write=False)
    return out


@functools.lru_cache(maxsize=1)
def _trial_primes() -> list[int]:
    return [int(p) for p in prime_sieve(TRIAL_DIVISION_BOUND)]


def _pollard_brent(n: int) -> int:
    """A non-trivial factor of the odd composite n."""
    for c in range(1, 200):
        y, r, q, g = 2, 1, 1, 1
        m = 128
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        logger.debug(f"Pollard-Brent with c={c} failed on {n}; retrying")
    raise QdlError(f"Pollard-Brent found no factor of {n}")


def _split(n: int) -> list[int]:
    if is_prime(n):
        return [n]
    d = _pollard_brent(n)
    return _split(d) + _split(n // d)


@functools.lru_cache(maxsize=65536)
def factorize(n: int) -> Factorization:
    """Complete factorization: trial division to 10^6, then Pollard-Brent."""
    if n < 1:
        raise DomainError(f"factorize needs n >= 1, got {n}")
    if n > MAX_INT64:
        raise LimitError(f"{n} exceeds the 64-bit range")
    factors: dict[int, int] = {}
    rest = n
    for p in _trial_primes():
        if p * p > rest:
            break
        if rest % p == 0:
            count = 0
            while rest % p == 0:
                rest //= p
                count += 1
            factors[p] = count
    if rest > 1:
        for q in _split(rest) if rest >= TRIAL_DIVISION_BOUND**2 else [rest]:
            factors[q] = factors.get(q, 0) + 1
    return Factorization(value=n, factors=tuple(sorted(factors.items())))


def valuation(n: int, p: int) -> int:
    """v_p(n) for n != 0."""
    if n == 0:
        raise DomainError("v_p(0) is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def euler_phi(f: Factorization) -> int:
    return math.prod(p ** (e - 1) * (p - 1) for p, e in f.factors)


def omega(f: Factorization) -> int:
    return len(f.factors)


def squarefree_decompose(n: int) -> SquarefreeDecomposition:
    f = factorize(n)
    n0 = math.prod(p for p, e in f.factors if e % 2)
    m = math.prod(p ** (e // 2) for p, e in f.factors)
    return SquarefreeDecomposition(n0=n0, m=m)


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n).factors)


def fundamental_discriminant(D: int) -> tuple[int, int]:
    """(d0, f) with D = d0 * f**2 and d0 a fundamental discriminant (1 for squares)."""
    if D == 0 or D % 4 not in (0, 1):
        raise DomainError(f"{D} is not a discriminant (0 or 1 mod 4, non-zero)")
    sd = squarefree_decompose(abs(D))
    core = sd.n0 if D > 0 else -sd.n0
    if core % 4 == 1:
        return core, sd.m
    return 4 * core, sd.m // 2


def is_fundamental_discriminant(d: int) -> bool:
    if d == 0 or d % 4 not in (0, 1):
        return False
    return fundamental_discriminant(d) == (d, 1)


@functools.lru_cache(maxsize=16)
def fundamental_discriminants(limit: int) -> tuple[int, ...]:
    """Every fundamental discriminant with |d| <= limit, ordered by |d| then sign."""
    out = [1] if limit >= 1 else []
    for k in range(2, limit + 1):
        for d in (k, -k):
            if d % 4 in (0, 1) and is_fundamental_discriminant(d):
                out.append(d)
    return tuple(out)


def kronecker_character(d: int) -> QuadraticCharacter:
    """The character (d/.) for a discriminant d."""
    d0, _ = fundamental_discriminant(d)
    return QuadraticCharacter(
        kind="kronecker_top",
        top=d,
        conductor=abs(d0),
        parity="even" if d > 0 else "odd",
    )


def jacobi_character(n: int) -> QuadraticCharacter:
    """The character chi_n = (./n) for odd positive n."""
    if n < 1 or n % 2 == 0:
        raise EvenModulusError(f"chi_n needs odd positive n, got {n}")
    return QuadraticCharacter(
        kind="jacobi_bottom",
        bottom=n,
        conductor=squarefree_decompose(n).n0,
        parity="even" if n % 4 == 1 else "odd",
    )


def inducing_character(n: int) -> QuadraticCharacter:
    """The primitive character inducing chi_n, as a Kronecker symbol (d0/.).

    With n = n0 * m**2: (n0/.) for n0 = 1 mod 4 and (-n0/.) for n0 = 3 mod 4,
    both of conductor n0.
    """
    if n < 1 or n % 2 == 0:
        raise EvenModulusError(f"chi_n needs odd positive n, got {n}")
    n0 = squarefree_decompose(n).n0
    top = n0 if n0 % 4 == 1 else -n0
    return QuadraticCharacter(
        kind="kronecker_top",
        top=top,
        conductor=n0,
        parity="even" if top > 0 else "odd",
    )


def character_value(chi: QuadraticCharacter, k: int) -> int:
    if chi.kind == "kronecker_top":
        return kronecker(chi.top, k)  # type: ignore[arg-type]
    return kronecker(k, chi.bottom)  # type: ignore[arg-type]


def character_array(chi: QuadraticCharacter, ks: np.ndarray) -> np.ndarray:
    """chi(k) for an array of k >= 0."""
    if chi.kind == "kronecker_top":
        return kronecker_array(chi.top, ks)  # type: ignore[arg-type]
    return jacobi_array(ks, chi.bottom)  # type: ignore[arg-type]
