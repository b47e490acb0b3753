import math

import numpy as np
import pytest

from qdlmoment.arith import (
    character_array,
    character_value,
    euler_phi,
    factorize,
    fundamental_discriminant,
    fundamental_discriminants,
    inducing_character,
    is_fundamental_discriminant,
    is_squarefree,
    jacobi_array,
    jacobi_character,
    kronecker,
    kronecker_array,
    kronecker_character,
    kronecker_table,
    omega,
    squarefree_decompose,
    valuation,
)
from qdlmoment.errors import DomainError, EvenModulusError, UndefinedSymbolError
from qdlmoment.types.factorization import Factorization
from qdlmoment.utils.primes import is_prime, prime_sieve, smallest_prime_factors


def test_kronecker_examples():
    assert kronecker(2, 15) == 1
    assert all(kronecker(1, n) == 1 for n in range(-50, 51) if n != 0)
    assert kronecker(-1, 7) == -1
    assert kronecker(5, 0) == 0
    assert kronecker(-1, 0) == 1
    assert kronecker(3, -1) == 1
    assert kronecker(-3, -1) == -1
    assert kronecker(5, 2) == -1
    assert kronecker(1, 2) == 1
    assert kronecker(4, 2) == 0
    with pytest.raises(UndefinedSymbolError):
        kronecker(0, 0)


def test_kronecker_multiplicativity():
    rng = np.random.default_rng(4)
    for _ in range(10_000):
        a, b, c = (int(x) for x in rng.integers(-300, 300, size=3))
        if 0 in (a, b, c):
            continue
        assert kronecker(a, b * c) == kronecker(a, b) * kronecker(a, c)
        assert kronecker(a * b, c) == kronecker(a, c) * kronecker(b, c)


def test_quadratic_reciprocity():
    for a in range(1, 201, 2):
        for b in range(1, 201, 2):
            if math.gcd(a, b) != 1:
                continue
            sign = (-1) ** ((a - 1) * (b - 1) // 4)
            assert kronecker(a, b) * kronecker(b, a) == sign


def test_kronecker_periodic_in_top():
    for b in range(1, 100, 2):
        for a in range(501):
            assert kronecker(a, b) == kronecker(a % b, b)


def test_kronecker_array_matches_scalar():
    b = np.arange(0, 400)
    for a in (-8, -4, -3, 1, 5, 12, 21, -1):
        assert kronecker_array(a, b).tolist() == [kronecker(a, int(k)) for k in b]
    with pytest.raises(DomainError):
        kronecker_array(5, np.array([-1]))


def test_jacobi_array_matches_scalar():
    a = np.arange(-100, 100)
    for n in (1, 3, 15, 45, 97):
        assert jacobi_array(a, n).tolist() == [kronecker(int(k), n) for k in a]
    with pytest.raises(EvenModulusError):
        jacobi_array(a, 4)


def test_kronecker_table():
    for d in (1, 5, -4, -3, 8, -15, 12, 21):
        table = kronecker_table(d, 1000)
        assert table.tolist() == [kronecker(d, k) for k in range(1, 1001)]
        assert not table.flags.writeable


def test_factorize():
    assert factorize(1).factors == ()
    assert factorize(360).factors == ((2, 3), (3, 2), (5, 1))
    assert factorize(10**6 + 3).factors == ((1000003, 1),)
    big = 1000003 * 1000033
    assert factorize(big).factors == ((1000003, 1), (1000033, 1))
    n = 2**61 - 1
    assert factorize(n).factors == ((n, 1),)
    semiprime = 1000003 * 4294967291
    assert factorize(semiprime).factors == ((1000003, 1), (4294967291, 1))
    with pytest.raises(DomainError):
        factorize(0)


def test_factorization_validation():
    with pytest.raises(ValueError):
        Factorization(value=12, factors=((3, 1), (2, 2)))
    with pytest.raises(ValueError):
        Factorization(value=8, factors=((4, 1), (2, 1)))
    with pytest.raises(ValueError):
        Factorization(value=7, factors=((2, 1),))


def test_primes():
    assert prime_sieve(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert all(is_prime(int(p)) for p in prime_sieve(5000))
    assert sum(is_prime(k) for k in range(5001)) == prime_sieve(5000).size
    spf = smallest_prime_factors(100)
    assert spf[97] == 97 and spf[91] == 7 and spf[64] == 2
    assert is_prime(18446744073709551557)
    assert not is_prime(3215031751)


def test_squarefree_decompose():
    assert squarefree_decompose(1).model_dump() == {"n0": 1, "m": 1}
    assert squarefree_decompose(45).model_dump() == {"n0": 5, "m": 3}
    assert squarefree_decompose(9).model_dump() == {"n0": 1, "m": 3}
    for n in range(1, 2000):
        sd = squarefree_decompose(n)
        assert sd.value == n
        assert is_squarefree(sd.n0)


def test_euler_phi_and_omega():
    assert euler_phi(factorize(9)) == 6
    assert euler_phi(factorize(1)) == 1
    assert omega(factorize(360)) == 3
    for n in range(1, 300):
        coprime = sum(math.gcd(k, n) == 1 for k in range(1, n + 1))
        assert euler_phi(factorize(n)) == coprime


def test_valuation():
    assert valuation(360, 2) == 3
    assert valuation(360, 7) == 0
    with pytest.raises(DomainError):
        valuation(0, 3)


def test_fundamental_discriminants():
    assert fundamental_discriminants(12) == (1, -3, -4, 5, -7, 8, -8, -11, 12)
    assert fundamental_discriminant(-12 * 9) == (-3, 6)
    assert fundamental_discriminant(4 * 25) == (1, 10)
    assert fundamental_discriminant(20) == (5, 2)
    assert is_fundamental_discriminant(-4)
    assert not is_fundamental_discriminant(-12)
    assert not is_fundamental_discriminant(16)
    with pytest.raises(DomainError):
        fundamental_discriminant(3)


def test_inducing_character_examples():
    chi = inducing_character(5)
    fields = (chi.kind, chi.top, chi.conductor, chi.parity)
    assert fields == ("kronecker_top", 5, 5, "even")

    chi = inducing_character(3)
    assert (chi.top, chi.conductor, chi.parity) == (-3, 3, "odd")
    for p in prime_sieve(100):
        p = int(p)
        if p not in (2, 3):
            assert kronecker(p, 3) == kronecker(-3, p) == kronecker(-12, p)

    chi = inducing_character(9)
    assert (chi.top, chi.conductor) == (1, 1)

    with pytest.raises(EvenModulusError):
        inducing_character(4)


def test_inducing_character_agrees_with_chi_n0():
    for n in range(1, 501, 2):
        chi = inducing_character(n)
        n0 = squarefree_decompose(n).n0
        for k in range(1, 1001):
            if math.gcd(k, 2 * n0) == 1:
                assert character_value(chi, k) == kronecker(k, n0)


def test_characters():
    chi = jacobi_character(15)
    assert (chi.conductor, chi.parity, chi.modulus) == (15, "odd", 15)
    ks = np.arange(0, 60)
    expected = [character_value(chi, int(k)) for k in ks]
    assert character_array(chi, ks).tolist() == expected

    chi = kronecker_character(-20)
    assert (chi.conductor, chi.parity, chi.modulus) == (20, "odd", 20)
    assert character_array(chi, ks).tolist() == [kronecker(-20, int(k)) for k in ks]

    assert kronecker_character(12).conductor == 12
    assert kronecker_character(36).conductor == 1
    with pytest.raises(EvenModulusError):
        jacobi_character(6)
