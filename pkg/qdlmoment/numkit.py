"""Complex special functions: Riemann and Hurwitz zeta, log-gamma, incomplete gamma.

The zeta functions use Euler-Maclaurin summation: `M` direct terms, then the
integral, the half term and `EM_DEPTH` Bernoulli corrections at `x + M`. The
remainder after the last correction is bounded by the first omitted term times
`|s + 2p + 1| / (Re s + 2p + 1)`.
"""

import cmath
import functools
import logging
import math

import numpy as np
import scipy.special

from qdlmoment.errors import DomainError, LimitError, PoleError
from qdlmoment.types.complex_value import Number
from qdlmoment.types.eval_result import EvalResult

logger = logging.getLogger(__name__)

EPS = float(np.finfo(float).eps)

EM_SHIFT = 20
EM_DEPTH = 15
MAX_IMAG = 1.0e6
POLE_TOL = 1.0e-12

CF_MAX_ITER = 5000
SERIES_MAX_ITER = 5000

# Columns per block when the direct part of Euler-Maclaurin is vectorized.
_BLOCK_ELEMENTS = 1 << 22


@functools.lru_cache(maxsize=1)
def _bernoulli_coefficients() -> np.ndarray:
    """B_{2j} / (2j)! for j = 1 .. EM_DEPTH + 1."""
    b = scipy.special.bernoulli(2 * (EM_DEPTH + 1))
    return np.array(
        [b[2 * j] / math.factorial(2 * j) for j in range(1, EM_DEPTH + 2)]
    )


def _em_shift(s: complex) -> int:
    return EM_SHIFT + math.ceil(abs(s))


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == round(z.real)


def hurwitz_zeta_array(
    s: Number, x: np.ndarray, shift: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """zeta(s, x) for every x in (0, 1], with per-element error bounds."""
    s = complex(s)
    if abs(s - 1) < POLE_TOL:
        raise PoleError(f"zeta(s, x) has a pole at s = 1, got s = {s}")
    if abs(s.imag) > MAX_IMAG:
        raise LimitError(f"|Im s| = {abs(s.imag)} exceeds {MAX_IMAG}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x <= 0) or np.any(x > 1):
        raise DomainError("Hurwitz shifts must lie in (0, 1]")
    m = _em_shift(s) if shift is None else shift

    head = np.zeros(x.shape, dtype=complex)
    head_error = np.zeros(x.shape, dtype=float)
    block = max(1, _BLOCK_ELEMENTS // x.size)
    for start in range(0, m, block):
        k = np.arange(start, min(m, start + block), dtype=float)
        log_k = np.log(x[:, None] + k[None, :])
        terms = np.exp(-s * log_k)
        head += terms.sum(axis=1)
        head_error += (np.abs(terms) * _phase_error(s, log_k)).sum(axis=1)

    big_n = x + m
    log_n = np.log(big_n)
    n_pow = np.exp(-s * log_n)  # N^-s
    tail = big_n * n_pow / (s - 1) + n_pow / 2
    rising = s
    power = n_pow / big_n
    coeffs = _bernoulli_coefficients()
    for j in range(1, EM_DEPTH + 1):
        tail += coeffs[j - 1] * rising * power
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        power = power / (big_n * big_n)
    omitted = np.abs(coeffs[EM_DEPTH] * rising * power)
    denom = s.real + 2 * EM_DEPTH + 1
    remainder = omitted * abs(s + 2 * EM_DEPTH + 1) / denom if denom > 0 else np.inf

    values = head + tail
    tail_scale = np.abs(n_pow) * (big_n / abs(s - 1) + 1)
    tail_error = tail_scale * (_phase_error(s, log_n) + 2 * EM_DEPTH)
    errors = remainder + EPS * (head_error + tail_error)
    return values, errors


def _phase_error(s: complex, log_n: np.ndarray) -> np.ndarray:
    # Relative rounding error of exp(-s log n) in units of EPS; the error in
    # s log n lands in the phase.
    return 2 * abs(s) * np.abs(log_n) + 4


def hurwitz_zeta(s: Number, x: float) -> EvalResult:
    """zeta(s, x) = sum_{k >= 0} (k + x)^-s, continued analytically."""
    if not 0.0 < x <= 1.0:
        raise DomainError(f"Hurwitz shift must lie in (0, 1], got {x}")
    values, errors = hurwitz_zeta_array(s, np.array([x]))
    return EvalResult.of(values[0], errors[0])


def zeta_array(s: Number) -> tuple[complex, float]:
    """Riemann zeta on Re s >= 0 as a bare (value, error) pair."""
    values, errors = hurwitz_zeta_array(s, np.array([1.0]))
    return complex(values[0]), float(errors[0])


def zeta(s: Number) -> EvalResult:
    """Riemann zeta. Re s < 0 goes through the functional equation."""
    s = complex(s)
    if abs(s - 1) < POLE_TOL:
        raise PoleError(f"zeta has a pole at s = 1, got s = {s}")
    if abs(s.imag) > MAX_IMAG:
        raise LimitError(f"|Im s| = {abs(s.imag)} exceeds {MAX_IMAG}")
    if s.real >= 0:
        value, error = zeta_array(s)
        return EvalResult.of(value, error)

    rest, rest_error = zeta_array(1 - s)
    log_factor = s * math.log(2) + (s - 1) * math.log(math.pi) + _log_gamma_raw(1 - s)
    half = math.pi * s / 2
    if abs(half.imag) < 300:
        factor = cmath.exp(log_factor) * cmath.sin(half)
    else:
        factor = cmath.exp(log_factor + _log_sin(half))
    value = factor * rest
    factor_rel = 8 * EPS * (1 + abs(log_factor) + abs(s))
    error = abs(factor) * rest_error + factor_rel * abs(value)
    return EvalResult.of(value, error)


def _log_sin(z: complex) -> complex:
    # log sin z for |Im z| large, where sin z overflows.
    if z.imag > 0:
        rest = -1j * z + cmath.log(-1 + cmath.exp(2j * z))
    else:
        rest = 1j * z + cmath.log(1 - cmath.exp(-2j * z))
    return rest - math.log(2) - 1j * math.pi / 2


def _log_gamma_raw(s: complex) -> complex:
    return complex(scipy.special.loggamma(complex(s)))


def log_gamma(s: Number) -> EvalResult:
    """Principal branch of log Gamma: imaginary part in (-pi, pi]."""
    s = complex(s)
    if _is_nonpositive_integer(s):
        raise PoleError(f"Gamma has a pole at {s.real:g}")
    raw = _log_gamma_raw(s)
    im = math.remainder(raw.imag, 2 * math.pi)
    if im <= -math.pi + 1e-12:
        im += 2 * math.pi
    value = complex(raw.real, im)
    return EvalResult.of(value, 16 * EPS * max(1.0, abs(raw)))


def gamma(s: Number) -> EvalResult:
    s = complex(s)
    lg = log_gamma(s)
    value = cmath.exp(lg.z)
    return EvalResult.of(value, abs(value) * (lg.abs_error_bound + 4 * EPS))


def _prefactor(a: complex, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """x^a e^-x and its relative rounding error."""
    log_x = np.log(x)
    value = np.exp(-x + a * log_x)
    return value, 2 * EPS * (x + abs(a) * np.abs(log_x) + 2)


def _gamma_continued_fraction(
    a: complex, x: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Gamma(a, x) by the modified Lentz continued fraction, with error bounds."""
    tiny = 1e-300
    b = x + 1.0 - a
    c = np.full(x.shape, 1.0 / tiny, dtype=complex)
    d = 1.0 / b
    h = d.copy()
    deviation = np.full(x.shape, np.inf)
    converged = False
    steps = 0
    for i in range(1, CF_MAX_ITER + 1):
        an = -i * (i - a)
        b = b + 2.0
        d = an * d + b
        d = np.where(np.abs(d) < tiny, tiny, d)
        c = b + an / c
        c = np.where(np.abs(c) < tiny, tiny, c)
        d = 1.0 / d
        delta = d * c
        h = h * delta
        deviation = np.abs(delta - 1.0)
        steps = i
        if np.all(deviation < EPS):
            converged = True
            break
    rel = 4 * EPS * (steps + 1)
    if not converged:
        logger.warning(f"Continued fraction for Gamma({a}, x) hit {CF_MAX_ITER} terms")
        # Remaining factors are taken to move h by at most the last deviation each.
        rel = rel + deviation * CF_MAX_ITER
    prefactor, prefactor_rel = _prefactor(a, x)
    value = prefactor * h
    return value, np.abs(value) * (rel + prefactor_rel)


def _gamma_series_lower(a: complex, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """gamma(a, x) = x^a e^-x sum_k x^k / (a (a+1) ... (a+k)), with error bounds."""
    if _is_nonpositive_integer(a):
        raise PoleError(f"Lower incomplete gamma series undefined at a = {a.real:g}")
    term = np.full(x.shape, 1.0 / a, dtype=complex)
    total = term.copy()
    # Term k carries about 3k roundings from the running product.
    weighted = np.abs(term)
    for k in range(1, SERIES_MAX_ITER):
        term = term * x / (a + k)
        total += term
        weighted += (3 * k + 2) * np.abs(term)
        if np.all(np.abs(term) <= EPS * np.abs(total)):
            break
    else:
        logger.warning(f"Series for gamma({a}, x) hit {SERIES_MAX_ITER} terms")
        weighted += np.abs(term) / EPS
    prefactor, prefactor_rel = _prefactor(a, x)
    value = prefactor * total
    error = np.abs(prefactor) * (2 * EPS * weighted) + np.abs(value) * prefactor_rel
    return value, error


def _upper_gamma_nonpositive_integer(
    n: int, x: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    # Gamma(-n, x) from E1(x) = Gamma(0, x) by the upward recurrence.
    value = scipy.special.exp1(x).astype(complex)
    error = 8 * EPS * np.abs(value)
    for k in range(1, n + 1):
        power = np.exp(-x - k * np.log(x))
        value = (power - value) / k
        error = (error + 4 * EPS * (np.abs(power) * (x + k) + np.abs(value))) / k
    return value, error


def upper_incomplete_gamma_array(a: Number, x: np.ndarray) -> np.ndarray:
    """Gamma(a, x) for one a and many x > 0.

    Real positive a and a = 0 go to scipy; every other a uses the continued
    fraction for x >= |a| + 1 and Gamma(a) - gamma(a, x) below that.
    """
    a = complex(a)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("Incomplete gamma needs x > 0")
    if a.imag == 0.0 and a.real > 0:
        upper = scipy.special.gammaincc(a.real, x) * scipy.special.gamma(a.real)
        return upper.astype(complex)
    values, _ = _upper_gamma_generic(a, x)
    return values


def _upper_gamma_generic(a: complex, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if _is_nonpositive_integer(a):
        return _upper_gamma_nonpositive_integer(int(-a.real), x)
    out = np.empty(x.shape, dtype=complex)
    errors = np.empty(x.shape, dtype=float)
    cf = x >= abs(a) + 1.0
    if cf.any():
        out[cf], errors[cf] = _gamma_continued_fraction(a, x[cf])
    if (~cf).any():
        log_full = _log_gamma_raw(a)
        full = cmath.exp(log_full)
        full_error = abs(full) * 4 * EPS * (1 + abs(log_full))
        lower, lower_error = _gamma_series_lower(a, x[~cf])
        out[~cf] = full - lower
        errors[~cf] = full_error + lower_error + EPS * np.abs(out[~cf])
    return out, errors


def upper_incomplete_gamma(a: Number, x: float) -> EvalResult:
    """Gamma(a, x) = int_x^oo t^(a-1) e^-t dt for x > 0."""
    a = complex(a)
    if x <= 0:
        raise DomainError(f"Incomplete gamma needs x > 0, got {x}")
    values, errors = _upper_gamma_generic(a, np.array([float(x)]))
    return EvalResult.of(complex(values[0]), float(errors[0]))


def lower_incomplete_gamma(a: Number, x: float) -> EvalResult:
    """gamma(a, x) = int_0^x t^(a-1) e^-t dt by its power series."""
    a = complex(a)
    if x <= 0:
        raise DomainError(f"Incomplete gamma needs x > 0, got {x}")
    values, errors = _gamma_series_lower(a, np.array([float(x)]))
    return EvalResult.of(complex(values[0]), float(errors[0]))
