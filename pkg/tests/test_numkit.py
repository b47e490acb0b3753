import cmath
import math

import mpmath
import numpy as np
import pytest

from qdlmoment import numkit
from qdlmoment.errors import DomainError, LimitError, PoleError
from qdlmoment.numkit import (
    gamma,
    hurwitz_zeta,
    hurwitz_zeta_array,
    log_gamma,
    lower_incomplete_gamma,
    upper_incomplete_gamma,
    upper_incomplete_gamma_array,
    zeta,
)

mpmath.mp.dps = 30


def _close(a: complex, b: complex, tol: float) -> bool:
    return abs(a - b) <= tol * (1 + abs(b))


def test_zeta_classical_values():
    assert _close(zeta(2).z, math.pi**2 / 6, 1e-13)
    assert _close(zeta(0).z, -0.5, 1e-13)
    assert _close(zeta(0.5).z, -1.4603545088095868, 1e-12)
    assert _close(zeta(-1).z, -1 / 12, 1e-12)


def test_zeta_error_bound_is_honest():
    for s in (0.5 + 14.134725j, 2 + 100j, 0.3 - 7j, 1.5, 3 + 0.1j):
        result = zeta(s)
        oracle = complex(mpmath.zeta(s))
        assert abs(result.z - oracle) <= result.abs_error_bound + 1e-14
        assert result.abs_error_bound <= 1e-12 * (1 + abs(oracle))


@pytest.mark.parametrize("s", [0.5 + 1e4j, 0.5 + 1e5j, 2 + 1e5j, 0.5 - 3e4j])
def test_zeta_error_bound_is_honest_high_on_the_line(s: complex):
    result = zeta(s)
    oracle = complex(mpmath.zeta(s))
    assert abs(result.z - oracle) <= result.abs_error_bound
    assert result.abs_error_bound <= 1e-6


def test_hurwitz_error_bound_is_honest_high_on_the_line():
    s = 0.5 + 1e4j
    result = hurwitz_zeta(s, 1 / 3)
    oracle = complex(mpmath.zeta(s, mpmath.mpf(1) / 3))
    assert abs(result.z - oracle) <= result.abs_error_bound
    assert result.abs_error_bound <= 1e-7


def test_zeta_large_imaginary_negative_real():
    s = -1.5 + 500j
    assert _close(zeta(s).z, complex(mpmath.zeta(s)), 1e-9)


def test_zeta_functional_equation():
    rng = np.random.default_rng(1)
    for _ in range(50):
        s = complex(rng.uniform(-2, 3), rng.uniform(-20, 20))
        if abs(s - 1) < 1e-3 or abs(s) < 1e-3:
            continue
        rhs = (
            2**s
            * cmath.pi ** (s - 1)
            * cmath.sin(math.pi * s / 2)
            * gamma(1 - s).z
            * zeta(1 - s).z
        )
        lhs = zeta(s).z
        assert abs(lhs - rhs) <= 1e-9 * (1 + abs(lhs))


def test_zeta_pole():
    with pytest.raises(PoleError):
        zeta(1)
    with pytest.raises(LimitError):
        zeta(0.5 + 2e6j)


def test_hurwitz_values():
    assert _close(hurwitz_zeta(2, 1).z, math.pi**2 / 6, 1e-13)
    assert _close(hurwitz_zeta(2, 0.5).z, math.pi**2 / 2, 1e-13)
    s = 0.5 + 0.3j
    oracle = complex(mpmath.zeta(s, mpmath.mpf(1) / 3))
    assert _close(hurwitz_zeta(s, 1 / 3).z, oracle, 1e-12)


def test_hurwitz_sums_to_zeta():
    rng = np.random.default_rng(2)
    for q in (2, 3, 5):
        for _ in range(5):
            s = complex(rng.uniform(-1, 3), rng.uniform(-10, 10))
            values, _ = hurwitz_zeta_array(s, np.arange(1, q + 1) / q)
            total = q ** (-s) * values.sum()
            assert _close(total, zeta(s).z, 1e-9)


def test_hurwitz_domain():
    with pytest.raises(DomainError):
        hurwitz_zeta(2, 0.0)
    with pytest.raises(DomainError):
        hurwitz_zeta(2, 1.5)
    with pytest.raises(PoleError):
        hurwitz_zeta(1, 0.5)


def test_log_gamma_principal_branch():
    assert abs(log_gamma(1).z) < 1e-15
    assert _close(log_gamma(0.5).z, math.log(math.sqrt(math.pi)), 1e-14)
    value = log_gamma(-0.5).z
    assert _close(value, complex(math.log(2 * math.sqrt(math.pi)), math.pi), 1e-13)
    with pytest.raises(PoleError):
        log_gamma(-3)


def test_gamma_recurrence():
    rng = np.random.default_rng(3)
    for _ in range(100):
        s = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
        assert _close(gamma(s + 1).z, s * gamma(s).z, 1e-10)


def test_log_gamma_against_mpmath():
    for s in (3 + 4j, -2.5 + 0.1j, 0.1 - 30j, 50.5):
        value = log_gamma(s).z
        oracle = complex(mpmath.loggamma(s))
        assert -math.pi < value.imag <= math.pi
        assert abs(value.real - oracle.real) <= 1e-12 * (1 + abs(oracle.real))
        turns = (oracle.imag - value.imag) / (2 * math.pi)
        assert abs(turns - round(turns)) < 1e-12


def test_upper_incomplete_gamma_values():
    assert _close(upper_incomplete_gamma(1, 2).z, math.exp(-2), 1e-14)
    assert _close(
        upper_incomplete_gamma(0.5, 1).z, math.sqrt(math.pi) * math.erfc(1), 1e-13
    )
    x = 0.5
    assert _close(
        upper_incomplete_gamma(3, x).z, math.exp(-x) * (x * x + 2 * x + 2), 1e-13
    )


@pytest.mark.parametrize(
    "a, x",
    [
        (0.3 + 2j, 0.7),
        (0.3 + 2j, 9.0),
        (-1.5, 0.4),
        (-2, 3.0),
        (0, 0.2),
        (-0.25 + 5j, 40.0),
    ],
)
def test_upper_incomplete_gamma_against_mpmath(a: complex, x: float):
    result = upper_incomplete_gamma(a, x)
    oracle = complex(mpmath.gammainc(a, x, mpmath.inf))
    assert abs(result.z - oracle) <= 1e-12 * (1 + abs(oracle))
    assert abs(result.z - oracle) <= result.abs_error_bound + 1e-15 * abs(oracle)


def test_incomplete_gamma_pieces_sum_to_gamma():
    for a in (0.5 + 1j, 2.25, 1.5 - 3j):
        for x in (0.5, 1.5, 3.0):
            upper = upper_incomplete_gamma(a, x).z
            lower = lower_incomplete_gamma(a, x).z
            assert _close(upper + lower, gamma(a).z, 1e-10)


def test_upper_incomplete_gamma_array_matches_scalar():
    x = np.array([0.1, 1.0, 5.0, 30.0])
    for a in (0.75, 0.25 + 3j, -1):
        values = upper_incomplete_gamma_array(a, x)
        for xi, v in zip(x, values):
            assert _close(v, upper_incomplete_gamma(a, float(xi)).z, 1e-12)


def test_incomplete_gamma_domain():
    with pytest.raises(DomainError):
        upper_incomplete_gamma(1, 0.0)
    with pytest.raises(DomainError):
        lower_incomplete_gamma(1, -1.0)


@pytest.mark.parametrize("a", [0.5 + 30j, -2.5 + 40j, 1.25 - 25j])
@pytest.mark.parametrize("offset", [-0.5, -1e-6, 0.0, 0.5])
def test_upper_incomplete_gamma_at_branch_boundary(a: complex, offset: float):
    x = abs(a) + 1.0 + offset
    result = upper_incomplete_gamma(a, x)
    oracle = complex(mpmath.gammainc(a, x, mpmath.inf))
    assert abs(result.z - oracle) <= result.abs_error_bound + 1e-15 * abs(oracle)
    assert result.abs_error_bound <= 1e-9 * abs(oracle)


def test_upper_incomplete_gamma_unconverged_fraction_widens_bound(monkeypatch):
    a, x = 0.3 + 2j, 20.0
    converged = upper_incomplete_gamma(a, x)
    monkeypatch.setattr(numkit, "CF_MAX_ITER", 3)
    truncated = upper_incomplete_gamma(a, x)
    oracle = complex(mpmath.gammainc(a, x, mpmath.inf))
    assert converged.abs_error_bound <= 1e-13 * abs(oracle)
    assert truncated.abs_error_bound > 100 * converged.abs_error_bound
    assert abs(truncated.z - oracle) <= truncated.abs_error_bound
