"""Quadratic Dirichlet L-functions.

The primitive L(s, chi^(d)) is computed from the completed function

    Lambda(s) = (|d|/pi)^((s+a)/2) Gamma((s+a)/2) L(s, chi^(d))

split at the symmetric point into two incomplete-gamma sums (the root number of
a real primitive character is 1):

    Lambda(s) = sum_k chi(k) k^a [g(s, k) + g(1 - s, k)],
    g(u, k) = (|d|/(pi k^2))^((u+a)/2) Gamma((u+a)/2, pi k^2/|d|),

plus 1/(s(s-1)) for d = 1. The Hurwitz-zeta formula is the independent oracle.
"""

import cmath
import logging
import math
import typing

import numpy as np
import scipy.special

from qdlmoment.arith import (
    factorize,
    fundamental_discriminant,
    inducing_character,
    kronecker,
    kronecker_array,
    kronecker_character,
    kronecker_table,
    squarefree_decompose,
)
from qdlmoment.errors import (
    DomainError,
    EvenModulusError,
    LimitError,
    PoleError,
    SquareModulusError,
)
from qdlmoment.gauss import tau_table
from qdlmoment.numkit import (
    EPS,
    hurwitz_zeta_array,
    log_gamma,
    upper_incomplete_gamma_array,
    zeta,
)
from qdlmoment.types.complex_value import ComplexValue, Number
from qdlmoment.types.eval_result import EvalResult
from qdlmoment.types.l_value import ImprimitiveQuadChar, LValue
from qdlmoment.types.primitive_quad_char import PrimitiveQuadChar
from qdlmoment.utils.summation import pairwise_sum

logger = logging.getLogger(__name__)

Method = typing.Literal["afe", "hurwitz"]

AFE_CUTOFF = 40.0
AFE_MIN_RE = -2.0
AFE_MAX_RE = 4.0
MAX_IMAG_S = 1.0e3
HURWITZ_MAX_MODULUS = 2**15
K_SERIES_MAX_M = 200

# Points where the AFE and Hurwitz evaluations must agree.
AGREEMENT_POINTS = (0.5, 0.6, 0.5 + 0.1j, 0.5 + 1j, 0.3)


def _check_s(s: complex) -> None:
    if abs(s.imag) > MAX_IMAG_S:
        raise LimitError(f"|Im s| = {abs(s.imag)} exceeds {MAX_IMAG_S}")


def afe_length(q: int, s: complex) -> int:
    """Terms kept in each incomplete-gamma sum for conductor q."""
    return max(1, math.ceil(math.sqrt(q * (AFE_CUTOFF + abs(s)) / math.pi)))


def _afe_lambda(d: int, s: complex) -> tuple[complex, float]:
    q = abs(d)
    a = 0 if d > 0 else 1
    if d == 1 and (abs(s) < 1e-12 or abs(s - 1) < 1e-12):
        raise PoleError(f"The completed zeta function has a pole at s = {s}")
    n_terms = afe_length(q, s)
    chi = kronecker_table(d, n_terms)
    k = np.flatnonzero(chi) + 1.0
    sign = chi[chi != 0]
    x = math.pi * k * k / q
    log_x = np.log(x)
    u1 = (s + a) / 2
    u2 = (1 - s + a) / 2
    g1 = np.exp(-u1 * log_x) * upper_incomplete_gamma_array(u1, x)
    g2 = np.exp(-u2 * log_x) * upper_incomplete_gamma_array(u2, x)
    terms = sign * k**a * (g1 + g2)
    value = pairwise_sum(terms)
    if d == 1:
        value += 1 / (s * (s - 1))
    x_tail = math.pi * (n_terms + 1) ** 2 / q
    tail = 4 * (n_terms + 1) ** a * math.exp(-x_tail) * max(1.0, x_tail) ** (
        abs(s.real) + 2
    )
    depth = max(1.0, math.log2(terms.size + 1))
    rounding = 16 * EPS * float(np.abs(terms).sum()) * depth
    return value, tail + rounding


def _normalizer(d: int, s: complex) -> complex:
    # (|d|/pi)^(-(s+a)/2) / Gamma((s+a)/2), entire in s.
    a = 0 if d > 0 else 1
    u1 = (s + a) / 2
    return cmath.exp(-u1 * math.log(abs(d) / math.pi)) * complex(
        scipy.special.rgamma(u1)
    )


def _primitive(d: int) -> PrimitiveQuadChar:
    try:
        return PrimitiveQuadChar(d=d)
    except ValueError as exc:
        raise DomainError(f"{d} is not a fundamental discriminant") from exc


def _afe_value(d: int, s: complex) -> tuple[complex, float]:
    if not AFE_MIN_RE <= s.real <= AFE_MAX_RE:
        raise DomainError(f"AFE supports Re s in [{AFE_MIN_RE}, {AFE_MAX_RE}], got {s}")
    if d == 1 and abs(s) < 1e-12:
        z = zeta(s)
        return z.z, z.abs_error_bound
    lam, lam_error = _afe_lambda(d, s)
    norm = _normalizer(d, s)
    value = lam * norm
    return value, abs(norm) * lam_error + 8 * EPS * abs(value)


def _hurwitz_value(d: int, s: complex) -> tuple[complex, float]:
    q = abs(d)
    if q > HURWITZ_MAX_MODULUS:
        raise LimitError(f"Hurwitz path supports |d| <= {HURWITZ_MAX_MODULUS}, got {d}")
    if d == 1:
        z = zeta(s)
        return z.z, z.abs_error_bound
    r = np.arange(1, q + 1, dtype=np.int64)
    chi = kronecker_array(d, r)
    keep = chi != 0
    values, errors = hurwitz_zeta_array(s, r[keep] / q)
    total = pairwise_sum(chi[keep] * values)
    scale = abs(cmath.exp(-s * math.log(q)))
    value = cmath.exp(-s * math.log(q)) * total
    error = scale * (float(errors.sum()) + 16 * EPS * float(np.abs(values).sum()))
    return value, error


def _primitive_value(d: int, s: complex, method: Method) -> tuple[complex, float]:
    if method == "afe":
        return _afe_value(d, s)
    if method == "hurwitz":
        return _hurwitz_value(d, s)
    raise DomainError(f"Unknown L-value method {method!r}")


def l_primitive_hurwitz(d: int, s: Number) -> LValue:
    """L(s, chi^(d)) = |d|^-s sum_{r=1}^{|d|} chi^(d)(r) zeta(s, r/|d|)."""
    s = complex(s)
    _check_s(s)
    chi = _primitive(d)
    value, error = _hurwitz_value(d, s)
    return LValue(
        character=chi,
        s=ComplexValue.from_complex(s),
        value=ComplexValue.from_complex(value),
        method="hurwitz",
        abs_error_bound=error,
    )


def l_primitive_afe(d: int, s: Number) -> LValue:
    """L(s, chi^(d)) by the incomplete-gamma approximate functional equation.

    Where (s + a)/2 is a pole of Gamma (s = 0 or -2 for d > 0, s = -1 for
    d < 0) the normalizer 1/Gamma vanishes and the result is the trivial zero,
    exactly 0 with a zero error bound. The one exception is zeta(0) = -1/2.
    """
    s = complex(s)
    _check_s(s)
    chi = _primitive(d)
    value, error = _afe_value(d, s)
    logger.debug(f"L({s}, chi^({d})) = {value} (afe, N={afe_length(abs(d), s)})")
    return LValue(
        character=chi,
        s=ComplexValue.from_complex(s),
        value=ComplexValue.from_complex(value),
        method="afe",
        abs_error_bound=error,
    )


def completed_lambda(d: int, s: Number) -> EvalResult:
    """Lambda(s, chi^(d)); satisfies Lambda(s) = Lambda(1 - s)."""
    s = complex(s)
    _check_s(s)
    _primitive(d)
    value, error = _afe_lambda(d, s)
    return EvalResult.of(value, error)


def _euler_factor(d0: int, p: int, s: complex) -> complex:
    return 1 - kronecker(d0, p) * cmath.exp(-s * math.log(p))


def l_kronecker(D: int, s: Number, method: Method = "afe") -> LValue:
    """L(s, chi^(D)) for any discriminant D = d0 f^2 by removing the primes of f."""
    s = complex(s)
    _check_s(s)
    d0, f = fundamental_discriminant(D)
    if d0 == 1 and abs(s - 1) < 1e-12:
        raise PoleError(f"L(s, chi^({D})) has a pole at s = 1")
    value, error = _primitive_value(d0, s, method)
    factor = 1 + 0j
    for p in factorize(f).primes:
        factor *= _euler_factor(d0, p, s)
    return LValue(
        character=ImprimitiveQuadChar(variant="kronecker", n=D),
        s=ComplexValue.from_complex(s),
        value=ComplexValue.from_complex(value * factor),
        method="decomposition",
        inner_method=method,
        abs_error_bound=abs(factor) * error + 8 * EPS * abs(value * factor),
    )


def _l2_value(n: int, s: complex, method: Method) -> tuple[complex, float]:
    if n < 1 or n % 2 == 0:
        raise EvenModulusError(f"L^(2)(s, chi_n) needs odd positive n, got {n}")
    d0 = typing.cast(int, inducing_character(n).top)
    if d0 == 1 and abs(s - 1) < 1e-12:
        raise PoleError(f"L^(2)(s, chi_{n}) has a pole at s = 1 (n is a square)")
    value, error = _primitive_value(d0, s, method)
    factor = _euler_factor(d0, 2, s)
    m = squarefree_decompose(n).m
    for p in factorize(m).primes:
        if d0 % p:
            factor *= _euler_factor(d0, p, s)
    return value * factor, abs(factor) * error + 8 * EPS * abs(value * factor)


def l2_chi_n(n: int, s: Number, method: Method = "afe") -> LValue:
    """L^(2)(s, chi_n) by the decomposition

        L(s, chi~) (1 - chi~(2) 2^-s) prod_{p | m, p odd, p !| n0} (1 - chi~(p) p^-s)

    where chi~ is the primitive character inducing chi_n and n = n0 m^2.
    """
    s = complex(s)
    _check_s(s)
    value, error = _l2_value(n, s, method)
    return LValue(
        character=ImprimitiveQuadChar(variant="l2_chi_n", n=n),
        s=ComplexValue.from_complex(s),
        value=ComplexValue.from_complex(value),
        method="decomposition",
        inner_method=method,
        abs_error_bound=error,
    )


def l_values_l2(
    ns: typing.Iterable[int], s: Number, method: Method = "afe"
) -> tuple[np.ndarray, np.ndarray]:
    """L^(2)(s, chi_n) and error bounds for a batch of odd n."""
    s = complex(s)
    _check_s(s)
    pairs = [_l2_value(int(n), s, method) for n in ns]
    values = np.array([v for v, _ in pairs], dtype=complex)
    errors = np.array([e for _, e in pairs], dtype=float)
    return values, errors


def gauss_fe_factor(s: complex, modulus: int) -> complex:
    """pi^(s-1/2) n^-s Gamma((1-s)/2) / Gamma(s/2)."""
    return cmath.exp(
        (s - 0.5) * math.log(math.pi)
        - s * math.log(modulus)
        + log_gamma((1 - s) / 2).z
        - log_gamma(s / 2).z
    )


def k_series(m: int, u: complex, qmax: int) -> complex:
    """K(u, chi^(4m)) = sum_{q <= qmax} tau(chi^(4m), q) q^-u."""
    taus = tau_table(kronecker_character(4 * m))
    q = np.arange(1, qmax + 1, dtype=np.int64)
    terms = taus[q % (4 * m)] * np.exp(-u * np.log(q.astype(float)))
    return pairwise_sum(terms)


def k_series_check(m: int, s: Number, qmax: int) -> float:
    """Relative residual of

        L(s, chi^(4m)) = pi^(s-1/2) (4m)^-s G((1-s)/2) / G(s/2) K(1-s)
    """
    s = complex(s)
    if m < 1 or m % 2 == 0:
        raise EvenModulusError(f"k_series_check needs odd positive m, got {m}")
    if m > K_SERIES_MAX_M:
        raise LimitError(f"m = {m} exceeds {K_SERIES_MAX_M}")
    if math.isqrt(m) ** 2 == m:
        raise SquareModulusError(f"m = {m} is a perfect square")
    if (1 - s).real <= 1.5:
        raise DomainError(f"K(1 - s) needs Re(1 - s) > 3/2, got s = {s}")
    lhs = l_kronecker(4 * m, s).z
    rhs = gauss_fe_factor(s, 4 * m) * k_series(m, 1 - s, qmax)
    residual = abs(lhs - rhs) / abs(lhs)
    logger.debug(f"K-series m={m} s={s}: lhs={lhs} rhs={rhs} residual={residual:.3e}")
    return residual
