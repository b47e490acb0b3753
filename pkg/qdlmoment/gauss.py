"""Gauss sums of quadratic characters.

`tau(chi, q) = sum_{j mod n} chi(j) e(jq/n)` by direct summation, and the
normalized `G(chi_n, q)`, multiplicative in n, from its prime-power table:

    k <= a, k even      phi(p^k)
    k <= a, k odd       0
    k = a + 1, k even   -p^a
    k = a + 1, k odd    (q p^-a / p) p^a sqrt(p)
    k >= a + 2          0

where a = v_p(q) (a = oo for q = 0).
"""

import functools
import logging
import math
import typing

import numpy as np

from qdlmoment.arith import (
    character_array,
    factorize,
    jacobi_array,
    jacobi_character,
    kronecker,
    kronecker_character,
)
from qdlmoment.errors import DomainError, EvenModulusError, LimitError
from qdlmoment.types.complex_value import ComplexValue
from qdlmoment.types.gauss_sum_value import GaussSumValue
from qdlmoment.types.quadratic_character import QuadraticCharacter
from qdlmoment.utils.summation import pairwise_sum

logger = logging.getLogger(__name__)

TAU_MAX_MODULUS = 10**5


def e_phase(num: np.ndarray, den: int) -> np.ndarray:
    """e(num/den) = exp(2 pi i num/den), reducing num mod den first."""
    r = np.mod(np.asarray(num, dtype=np.int64), den)
    return np.exp(2j * np.pi * (r / den))


@functools.lru_cache(maxsize=1024)
def _table(chi: QuadraticCharacter) -> np.ndarray:
    table = character_array(chi, np.arange(chi.modulus, dtype=np.int64))
    table.setflags(write=False)
    return table


def _gauss_value(value: complex, modulus: int, q: int) -> GaussSumValue:
    return GaussSumValue(
        value=ComplexValue.from_complex(value), modulus=modulus, shift=q
    )


def tau_bruteforce(
    chi: QuadraticCharacter | typing.Sequence[int], q: int
) -> GaussSumValue:
    """tau(chi, q) by direct summation over j mod n.

    `chi` is a character or an explicit table of its values at j = 0 .. n-1.
    """
    if isinstance(chi, QuadraticCharacter):
        n = chi.modulus
        if n > TAU_MAX_MODULUS:
            raise LimitError(f"Modulus {n} exceeds {TAU_MAX_MODULUS}")
        table = _table(chi)
    else:
        table = np.asarray(chi, dtype=np.int64)
        n = table.size
        if n > TAU_MAX_MODULUS:
            raise LimitError(f"Modulus {n} exceeds {TAU_MAX_MODULUS}")
    j = np.arange(n, dtype=np.int64)
    value = pairwise_sum(table * e_phase(j * (q % n), n))
    return _gauss_value(value, n, q)


def tau_table(chi: QuadraticCharacter) -> np.ndarray:
    """tau(chi, q) for q = 0 .. n-1 at once, by an inverse FFT of the value table."""
    n = chi.modulus
    if n > TAU_MAX_MODULUS:
        raise LimitError(f"Modulus {n} exceeds {TAU_MAX_MODULUS}")
    return np.fft.ifft(_table(chi).astype(complex)) * n


def g_prime_power(p: int, k: int, q: int) -> float:
    """G(chi_{p^k}, q) for an odd prime p, from the prime-power table."""
    if k == 0:
        return 1.0
    a = math.inf if q == 0 else _valuation(q, p)
    return _g_row(p, k, a, q)


def _valuation(q: int, p: int) -> int:
    v = 0
    while q % p == 0:
        q //= p
        v += 1
    return v


def _g_row(p: int, k: int, a: float, q: int) -> float:
    if k <= a:
        return float(p**k - p ** (k - 1)) if k % 2 == 0 else 0.0
    if k == a + 1:
        a = int(a)
        if k % 2 == 0:
            return -float(p**a)
        return kronecker(q // p**a, p) * float(p**a) * math.sqrt(p)
    return 0.0


def g_sum(n: int, q: int) -> GaussSumValue:
    """G(chi_n, q) by joint multiplicativity over the prime powers of n."""
    if n < 1 or n % 2 == 0:
        raise EvenModulusError(f"G(chi_n, q) needs odd positive n, got {n}")
    value = 1.0
    for p, k in factorize(n).factors:
        value *= g_prime_power(p, k, q)
        if value == 0.0:
            break
    return _gauss_value(value, n, q)


def _valuation_array(q: np.ndarray, p: int) -> np.ndarray:
    v = np.zeros(q.shape, dtype=np.int64)
    rest = q.copy()
    while True:
        hit = rest % p == 0
        if not hit.any():
            return v
        rest[hit] //= p
        v[hit] += 1


def g_prime_power_array(p: int, k: int, q: np.ndarray) -> np.ndarray:
    """G(chi_{p^k}, q) for an array of q >= 1."""
    q = np.asarray(q, dtype=np.int64)
    if k == 0:
        return np.ones(q.shape)
    a = _valuation_array(q, p)
    out = np.zeros(q.shape)
    if k % 2 == 0:
        out[k <= a] = float(p**k - p ** (k - 1))
        out[a == k - 1] = -float(p ** (k - 1))
    else:
        row = a == k - 1
        unit = jacobi_array(q[row] // p ** (k - 1), p)
        out[row] = unit * float(p ** (k - 1)) * math.sqrt(p)
    return out


def g_sum_array(n: int, q: np.ndarray) -> np.ndarray:
    """G(chi_n, q) for one odd n and an array of q >= 1."""
    if n < 1 or n % 2 == 0:
        raise EvenModulusError(f"G(chi_n, q) needs odd positive n, got {n}")
    q = np.asarray(q, dtype=np.int64)
    out = np.ones(q.shape)
    for p, k in factorize(n).factors:
        out *= g_prime_power_array(p, k, q)
    return out


def _g_over_tau(n: int) -> complex:
    # G = ((1 - i)/2 + (-1/n)(1 + i)/2) tau: 1 for n = 1 mod 4, -i for n = 3 mod 4.
    return (1 - 1j) / 2 + kronecker(-1, n) * (1 + 1j) / 2


def g_from_tau(n: int, q: int) -> GaussSumValue:
    """G(chi_n, q) from a brute-force tau(chi_n, q)."""
    tau = tau_bruteforce(jacobi_character(n), q)
    return _gauss_value(_g_over_tau(n) * tau.z, n, q)


def tau_from_g(n: int, q: int) -> GaussSumValue:
    """tau(chi_n, q) recovered from the fast G(chi_n, q)."""
    return _gauss_value(g_sum(n, q).z / _g_over_tau(n), n, q)


def _conversion_factor(l: int, q: int) -> complex:
    # tau(chi^(4l), q) = factor * tau(chi_l, q).
    if l % 4 == 1:
        if q % 2 == 1:
            return 0j
        return -2 + 0j if q % 4 == 2 else 2 + 0j
    if q % 2 == 0:
        return 0j
    return -2j if q % 4 == 1 else 2j


def tau_4l(l: int, q: int) -> GaussSumValue:
    """tau(chi^(4l), q) from tau(chi_l, q) by the residue of q mod 4."""
    if l < 1 or l % 2 == 0:
        raise EvenModulusError(f"tau_4l needs odd positive l, got {l}")
    factor = _conversion_factor(l, q)
    value = 0j if factor == 0 else factor * tau_from_g(l, q).z
    return _gauss_value(value, 4 * l, q)


def tau_4l_array(l: int, q: np.ndarray) -> np.ndarray:
    """tau(chi^(4l), q) for one odd l and an array of q >= 1."""
    if l < 1 or l % 2 == 0:
        raise EvenModulusError(f"tau_4l needs odd positive l, got {l}")
    q = np.asarray(q, dtype=np.int64)
    tau_l = g_sum_array(l, q) / _g_over_tau(l)
    r = q % 4
    if l % 4 == 1:
        factor = np.select([r == 2, r == 0], [-2.0, 2.0], 0.0)
    else:
        factor = np.select([r == 1, r == 3], [-2j, 2j], 0j)
    return factor * tau_l


def tau_4l_bruteforce(l: int, q: int) -> GaussSumValue:
    """tau(chi^(4l), q) by direct summation over j mod 4l."""
    if l < 1:
        raise DomainError(f"tau_4l needs positive l, got {l}")
    return tau_bruteforce(kronecker_character(4 * l), q)
