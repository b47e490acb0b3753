"""Double Dirichlet series A(s, w) = sum_{n odd} L^(2)(w, chi_n) n^-s and its duals.

Everything here is evaluated inside a region of absolute convergence, where each
quantity is a convergent sum; identities between representations are checked
there and nowhere else.
"""

import cmath
import functools
import logging
import math

import numpy as np
import scipy.special

from qdlmoment.arith import (
    factorize,
    is_squarefree,
    kronecker,
    kronecker_array,
    valuation,
)
from qdlmoment.errors import ConsistencyError, DomainError, RegionError
from qdlmoment.gauss import g_prime_power, g_sum_array, tau_4l_array
from qdlmoment.lfunc import l_kronecker, l_values_l2
from qdlmoment.numkit import EPS, gamma, zeta
from qdlmoment.types.complex_value import ComplexValue, Number
from qdlmoment.types.eval_result import EvalResult
from qdlmoment.types.region_point import RegionPoint, regions_of
from qdlmoment.types.residue_forms import ResidueForms
from qdlmoment.types.twist_label import PSI_INDEX, PsiName, TwistLabel
from qdlmoment.utils.primes import is_prime, odd_primes_up_to
from qdlmoment.utils.summation import CompensatedSum, pairwise_sum

logger = logging.getLogger(__name__)

REGION_MARGIN = 0.1
RESIDUE_TOL = 1e-10
RESIDUE_PRODUCT_TOL = 1e-6
RESIDUE_PRIME_BOUND = 10**4
EULER_TARGET = 1e-17
EULER_MAX_K = 200


def _power(base: float, z: complex) -> complex:
    return cmath.exp(-z * math.log(base))  # base^-z


def region_point(s: Number, w: Number) -> RegionPoint:
    s, w = complex(s), complex(w)
    tags = regions_of(s, w)
    return RegionPoint(
        s=ComplexValue.from_complex(s),
        w=ComplexValue.from_complex(w),
        region_tag=tags[0] if tags else "other",
    )


def twist_value(name: PsiName, k: int) -> int:
    """psi_j(k) = (4j/k); psi0 is 1 everywhere."""
    j = PSI_INDEX[name]
    return 1 if j == 0 else kronecker(4 * j, k)


def twist_array(name: PsiName, k: np.ndarray) -> np.ndarray:
    j = PSI_INDEX[name]
    k = np.asarray(k, dtype=np.int64)
    return np.ones(k.shape, dtype=np.int64) if j == 0 else kronecker_array(4 * j, k)


# A(s, w) in its two absolutely convergent representations.


def a_series_nsum(s: Number, w: Number, N: int) -> EvalResult:
    """sum_{odd n <= N} L^(2)(w, chi_n) n^-s; needs (s, w) inside S0."""
    s, w = complex(s), complex(w)
    if "S0" not in regions_of(s, w, REGION_MARGIN):
        raise RegionError(f"({s}, {w}) is not inside S0 with margin {REGION_MARGIN}")
    ns = np.arange(1, N + 1, 2, dtype=np.int64)
    values, errors = l_values_l2(ns, w)
    terms = values * np.exp(-s * np.log(ns.astype(float)))
    total = pairwise_sum(terms)
    block = ns > N // 2
    mean_abs = float(np.abs(values[block]).mean()) if block.any() else 0.0
    tail = mean_abs * N ** (1 - s.real) / (2 * (s.real - 1))
    error = tail + float((errors * ns ** (-s.real)).sum())
    return EvalResult.of(total, error)


def a_series_msum(s: Number, w: Number, M: int) -> EvalResult:
    """sum_{odd m <= M} L(s, chi^(4m)) m^-w; needs S1 or Re s > 1, Re w > 1."""
    s, w = complex(s), complex(w)
    inside_s1 = "S1" in regions_of(s, w, REGION_MARGIN)
    if not (inside_s1 or (s.real > 1 and w.real > 1)):
        raise RegionError(f"({s}, {w}) is outside S1 and Re s, Re w > 1")
    acc = CompensatedSum()
    block: list[float] = []
    error = 0.0
    for m in range(1, M + 1, 2):
        lv = l_kronecker(4 * m, s)
        acc.add(lv.z * _power(m, w))
        error += lv.abs_error_bound * m ** (-w.real)
        if m > M // 2:
            block.append(abs(lv.z))
    tail_sum = M ** (1 - w.real) / (2 * (w.real - 1))
    if s.real > 1:
        sup = zeta(s.real).z.real
    else:
        sup = float(np.mean(block)) if block else 0.0
    return EvalResult.of(acc.value, error + sup * tail_sum)


# The square part A1(s, w) = sum over odd square m.


def p_euler(s: Number, w: Number) -> EvalResult:
    """P(s, w) = (1 - 2^-s)(1 - 2^-2w) / (zeta(s + 2w)(1 - 2^-(s+2w)))."""
    s, w = complex(s), complex(w)
    z = s + 2 * w
    if z.real <= 1:
        raise RegionError(f"P(s, w) needs Re(s + 2w) > 1, got {z}")
    zeta_z = zeta(z)
    numerator = (1 - _power(2, s)) * (1 - _power(2, 2 * w))
    value = numerator / (zeta_z.z * (1 - _power(2, z)))
    rel = zeta_z.abs_error_bound / abs(zeta_z.z) + 8 * EPS
    return EvalResult.of(value, abs(value) * rel)


def a1_closed_form(s: Number, w: Number) -> EvalResult:
    """A1(s, w) = zeta(s) zeta(2w) P(s, w)."""
    s, w = complex(s), complex(w)
    if (s + 2 * w).real <= 1 or w.real <= 0.5:
        raise RegionError(f"A1 needs Re(s + 2w) > 1 and Re w > 1/2, got ({s}, {w})")
    zs, z2w, p = zeta(s), zeta(2 * w), p_euler(s, w)
    value = zs.z * z2w.z * p.z
    rel = (
        zs.abs_error_bound / abs(zs.z)
        + z2w.abs_error_bound / abs(z2w.z)
        + p.abs_error_bound / abs(p.z)
    )
    return EvalResult.of(value, abs(value) * rel)


def a1_truncated(s: Number, w: Number, L: int) -> EvalResult:
    """sum_{odd l <= L} zeta(s) prod_{p | 2l} (1 - p^-s) l^-2w."""
    s, w = complex(s), complex(w)
    if w.real <= 0.5:
        raise RegionError(f"The square-part sum needs Re w > 1/2, got {w}")
    zs = zeta(s).z * (1 - _power(2, s))
    acc = CompensatedSum()
    block: list[float] = []
    for l in range(1, L + 1, 2):
        local = 1 + 0j
        for p in factorize(l).primes:
            local *= 1 - _power(p, s)
        acc.add(local * _power(l, 2 * w))
        if l > L // 2:
            block.append(abs(local))
    mean_abs = float(np.mean(block)) if block else 1.0
    tail = abs(zs) * mean_abs * L ** (1 - 2 * w.real) / (2 * (2 * w.real - 1))
    return EvalResult.of(zs * acc.value, tail + 16 * EPS * abs(zs) * acc.abs_total)


# Residues of A(s, w).


def _residue_s1_closed(alpha: complex) -> complex:
    return (
        zeta(1 + 2 * alpha).z
        / zeta(2 + 2 * alpha).z
        * (1 - _power(2, 1 + 2 * alpha))
        / (2 * (1 - _power(2, 2 + 2 * alpha)))
    )


def _check_alpha(alpha: complex) -> None:
    if not 0.0 < alpha.real < 0.5:
        raise DomainError(f"Re alpha must lie in (0, 1/2), got {alpha}")


def residue_s1_forms(alpha: Number) -> ResidueForms:
    """Res_{s=1} A(s, 1/2 + alpha) as zeta(1 + 2 alpha) P(1, 1/2 + alpha) and
    as the first main-term coefficient of the moment asymptotic."""
    alpha = complex(alpha)
    _check_alpha(alpha)
    first = zeta(1 + 2 * alpha).z * p_euler(1, 0.5 + alpha).z
    return ResidueForms(
        name="s=1",
        alpha=ComplexValue.from_complex(alpha),
        first=ComplexValue.from_complex(first),
        second=ComplexValue.from_complex(_residue_s1_closed(alpha)),
    )


def residue_s1(alpha: Number) -> ComplexValue:
    forms = residue_s1_forms(alpha)
    if forms.difference > RESIDUE_TOL * (1 + abs(forms.first.z)):
        raise ConsistencyError(f"Residue forms at s=1 disagree by {forms.difference}")
    return forms.first


def _residue_c_closed(s: complex) -> complex:
    # Res_{w=3/2} C(s, w) = (2/3) zeta(2s) / zeta(2)
    return 2 * zeta(2 * s).z / (3 * zeta(2).z)


def residue_s_3_2_minus_w(w: Number) -> ComplexValue:
    """Res_{s=3/2-w} A(s, w): the functional-equation factor at s = 3/2 - w
    times Res_{w'=3/2} C(w - 1/2, w')."""
    w = complex(w)
    fe = (
        _power(math.pi, w - 1)
        * _power(4, 1.5 - w)
        * gamma((w - 0.5) / 2).z
        / gamma((1.5 - w) / 2).z
    )
    return ComplexValue.from_complex(fe * _residue_c_closed(w - 0.5))


def residue_s_1_minus_alpha_forms(alpha: Number) -> ResidueForms:
    alpha = complex(alpha)
    _check_alpha(alpha)
    first = (
        _power(math.pi, -alpha)
        * gamma(0.5 - alpha).z
        * gamma(alpha / 2).z
        / (gamma((1 - alpha) / 2).z * gamma(alpha).z)
        * zeta(1 - 2 * alpha).z
        / zeta(2).z
        * _power(2, -2 * alpha)
        / 6
    )
    second = residue_s_3_2_minus_w(0.5 + alpha)
    return ResidueForms(
        name="s=1-alpha",
        alpha=ComplexValue.from_complex(alpha),
        first=ComplexValue.from_complex(first),
        second=second,
    )


def residue_s_1_minus_alpha(alpha: Number) -> ComplexValue:
    """Res_{s=1-alpha} A(s, 1/2 + alpha), checked against its unreflected form."""
    forms = residue_s_1_minus_alpha_forms(alpha)
    if forms.difference > RESIDUE_TOL * (1 + abs(forms.first.z)):
        raise ConsistencyError(
            f"Residue forms at s=1-alpha disagree by {forms.difference}"
        )
    return forms.first


# Euler factors of the twisted D-series.


def _euler_depth(p: int, s: complex, w: complex) -> int:
    rate = 2 * s.real - 2 * max(0.0, 1 - w.real)
    if rate <= 0:
        raise RegionError(f"Euler factor at p={p} diverges for ({s}, {w})")
    k = math.ceil(-math.log(EULER_TARGET) / (rate * math.log(p))) + 1
    return min(EULER_MAX_K, k)


def _d1_blocks(
    p: int, q1: int, twist: TwistLabel, s: complex, w: complex, K: int
) -> list[complex]:
    psi_p = twist_value(twist.psi, p)
    psi_prime_p = twist_value(twist.psi_prime, p)
    v = valuation(q1, p)
    log_p = math.log(p)
    blocks = []
    for k in range(K + 1):
        q = q1 * p ** (2 * k)
        block = 0j
        # G(chi_{p^l}, q) vanishes for l > v_p(q) + 1.
        for l in range(2 * k + v + 2):
            g = g_prime_power(p, l, q)
            if g == 0.0:
                continue
            block += psi_p**l * g * cmath.exp(-(l * w + 2 * k * s) * log_p)
        blocks.append(psi_prime_p ** (2 * k) * block)
    return blocks


def d1_euler_factor(
    p: int, q1: int, twist: TwistLabel, s: Number, w: Number, K: int | None = None
) -> EvalResult:
    """sum_{l, k <= K} psi(p^l) psi'(p^2k) G(chi_{p^l}, q1 p^2k) p^-(lw + 2ks).

    K defaults to the depth at which the geometric tail drops below 1e-17.
    """
    s, w = complex(s), complex(w)
    if p == 2 or not is_prime(p):
        raise DomainError(f"d1_euler_factor needs an odd prime, got {p}")
    if q1 < 1 or not is_squarefree(q1):
        raise DomainError(f"q1 must be squarefree positive, got {q1}")
    if s.real <= 1 or w.real <= 0.75:
        raise RegionError(
            f"D1 Euler factor needs Re s > 1 and Re w > 3/4, got ({s}, {w})"
        )
    K = _euler_depth(p, s, w) if K is None else K
    blocks = _d1_blocks(p, q1, twist, s, w, K)
    acc = CompensatedSum()
    for b in blocks:
        acc.add(b)
    ratio = p ** (-2 * s.real + 2 * max(0.0, 1 - w.real))
    tail = abs(blocks[-1]) * ratio / (1 - ratio)
    return EvalResult.of(acc.value, tail + 8 * EPS * acc.abs_total)


def k0_slice_identity(p: int, q1: int, psi: PsiName, w: Number) -> float:
    """Residual of the finite k = 0 slice of the Euler factor.

    p !| q1:  sum_l psi(p)^l G(chi_{p^l}, q1) p^-lw = 1 + psi(p)(q1/p) p^(1/2-w)
    p || q1:  the same sum = 1 - psi(p)^2 p^(1-2w)
    """
    w = complex(w)
    psi_p = twist_value(psi, p)
    v = valuation(q1, p)
    if v > 1:
        raise DomainError(f"q1 = {q1} is not squarefree at p = {p}")
    lhs = sum(
        psi_p**l * g_prime_power(p, l, q1) * _power(p, l * w) for l in range(v + 3)
    )
    if v == 0:
        rhs = 1 + psi_p * kronecker(q1, p) * _power(p, w - 0.5)
    else:
        rhs = 1 - psi_p**2 * _power(p, 2 * w - 1)
    return abs(lhs - rhs)


def dk1_psi1_identity(p: int, s: Number, K: int) -> float:
    """|sum_{l >= 0, 1 <= k <= K} G(chi_{p^l}, p^2k) p^-(3l/2 + 2ks)
    - (1 + 1/p) p^-2s / (1 - p^-2s)|."""
    s = complex(s)
    if s.real <= 0.5:
        raise RegionError(f"The psi_1 slice needs Re s > 1/2, got {s}")
    acc = CompensatedSum()
    for k in range(1, K + 1):
        q = p ** (2 * k)
        for l in range(2 * k + 2):
            g = g_prime_power(p, l, q)
            if g:
                acc.add(g * cmath.exp(-(1.5 * l + 2 * k * s) * math.log(p)))
    p2s = _power(p, 2 * s)
    return abs(acc.value - (1 + 1 / p) * p2s / (1 - p2s))


def residue_w_3_2_C_product(
    s: Number, prime_bound: int = RESIDUE_PRIME_BOUND
) -> complex:
    """Res_{w=3/2} C(s, w) from the Euler factors of D1(s, 3/2; 1, psi1, psi').

    The pole sits in the (psi1, psi0) and (psi1, psi-1) twists, weighted 4^-s and 1;
    their odd-prime factors agree and only the factor at 2 differs.
    """
    s = complex(s)
    twist = TwistLabel(psi="psi1", psi_prime="psi0")
    # Res_{w=3/2} zeta(w - 1/2)(1 - 2^(1/2-w)) = 1/2
    log_odd = math.log(0.5)
    for p in odd_primes_up_to(prime_bound):
        factor = d1_euler_factor(p, 1, twist, s, 1.5).z
        log_odd += cmath.log(factor * (1 - 1 / p))
    log_bound = math.log(prime_bound)
    log_odd += -scipy.special.exp1(log_bound) + complex(
        scipy.special.exp1((2 * s - 1) * log_bound)
    )
    odd = cmath.exp(log_odd)
    four_s = _power(4, s)
    return four_s * odd / (1 - four_s) + odd


def residue_w_3_2_C(
    s: Number, prime_bound: int = RESIDUE_PRIME_BOUND, verify: bool = True
) -> ComplexValue:
    """Res_{w=3/2} C(s, w) = (2/3) zeta(2s) / zeta(2) for Re s > 1."""
    s = complex(s)
    if s.real <= 1:
        raise RegionError(f"Res_(w=3/2) C needs Re s > 1, got {s}")
    closed = _residue_c_closed(s)
    if verify:
        product = residue_w_3_2_C_product(s, prime_bound)
        rel = abs(product - closed) / abs(closed)
        logger.debug(f"Res C at s={s}: closed={closed} product={product} rel={rel:.2e}")
        if rel > RESIDUE_PRODUCT_TOL:
            raise ConsistencyError(
                f"Euler product residue {product} differs from {closed} (rel {rel:.2e})"
            )
    return ComplexValue.from_complex(closed)


# The dual Gauss-sum series C = C1 - C2 and its twisted pieces.


def _require_dual(s: complex, w: complex) -> None:
    if s.real <= 1 or w.real <= 1.5:
        raise RegionError(
            f"The Gauss-sum series needs Re s > 1, Re w > 3/2; got ({s}, {w})"
        )


def _q_weights(s: complex, Q: int) -> tuple[np.ndarray, np.ndarray]:
    q = np.arange(1, Q + 1, dtype=np.int64)
    return q, np.exp(-s * np.log(q.astype(float)))


def c1_direct(s: Number, w: Number, M: int, Q: int) -> complex:
    """C1 = sum_{q <= Q} sum_{odd m <= M} tau(chi^(4m), q) q^-s m^-w."""
    s, w = complex(s), complex(w)
    _require_dual(s, w)
    q, q_pow = _q_weights(s, Q)
    acc = CompensatedSum()
    for m in range(1, M + 1, 2):
        acc.add(_power(m, w) * pairwise_sum(tau_4l_array(m, q) * q_pow))
    return acc.value


def c2_direct(s: Number, w: Number, M: int, Q: int) -> complex:
    """C2: the part of C1 over square m = l^2 <= M."""
    s, w = complex(s), complex(w)
    _require_dual(s, w)
    q, q_pow = _q_weights(s, Q)
    acc = CompensatedSum()
    for l in range(1, math.isqrt(M) + 1, 2):
        acc.add(_power(l, 2 * w) * pairwise_sum(tau_4l_array(l * l, q) * q_pow))
    return acc.value


def c_series(s: Number, w: Number, M: int, Q: int) -> complex:
    return c1_direct(s, w, M, Q) - c2_direct(s, w, M, Q)


def _twisted(
    s: complex, w: complex, twist: TwistLabel, L: int, Q: int, square: bool
) -> complex:
    _require_dual(s, w)
    if twist.psi == "psi0":
        raise DomainError("The l-twist must be non-principal (l runs over odd l)")
    q, q_pow = _q_weights(s, Q)
    weights = twist_array(twist.psi_prime, q) * q_pow
    acc = CompensatedSum()
    for l in range(1, L + 1, 2):
        psi_l = twist_value(twist.psi, l)
        if psi_l == 0:
            continue
        n = l * l if square else l
        acc.add(psi_l * _power(n, w) * pairwise_sum(g_sum_array(n, q) * weights))
    return acc.value


def c1_twisted(s: Number, w: Number, twist: TwistLabel, L: int, Q: int) -> complex:
    """C1(s, w; psi, psi') = sum_{l <= L, q <= Q} G(chi_l, q) psi(l) psi'(q) l^-w q^-s.

    Only odd l contribute since psi is non-principal.
    """
    return _twisted(complex(s), complex(w), twist, L, Q, square=False)


def c2_twisted(s: Number, w: Number, twist: TwistLabel, L: int, Q: int) -> complex:
    """C2(s, w; psi, psi') = sum G(chi_{l^2}, q) psi(l) psi'(q) l^-2w q^-s."""
    return _twisted(complex(s), complex(w), twist, L, Q, square=True)


def _tw(psi: PsiName, psi_prime: PsiName) -> TwistLabel:
    return TwistLabel(psi=psi, psi_prime=psi_prime)


def c1_from_twists(s: Number, w: Number, M: int, Q: int) -> complex:
    """C1 as the six-term combination of twisted series (q = 2q', 4q'' and odd q)."""
    s, w = complex(s), complex(w)
    h, f = Q // 2, Q // 4
    return (
        -_power(2, s)
        * (
            c1_twisted(s, w, _tw("psi2", "psi1"), M, h)
            + c1_twisted(s, w, _tw("psi-2", "psi1"), M, h)
        )
        + _power(4, s)
        * (
            c1_twisted(s, w, _tw("psi1", "psi0"), M, f)
            + c1_twisted(s, w, _tw("psi-1", "psi0"), M, f)
        )
        + c1_twisted(s, w, _tw("psi1", "psi-1"), M, Q)
        - c1_twisted(s, w, _tw("psi-1", "psi-1"), M, Q)
    )


def c2_from_twists(s: Number, w: Number, M: int, Q: int) -> complex:
    s, w = complex(s), complex(w)
    L = math.isqrt(M)
    return -2 * _power(2, s) * c2_twisted(
        s, w, _tw("psi1", "psi1"), L, Q // 2
    ) + 2 * _power(4, s) * c2_twisted(s, w, _tw("psi1", "psi0"), L, Q // 4)


def d1_euler_product(
    s: Number, w: Number, q1: int, twist: TwistLabel, prime_bound: int
) -> EvalResult:
    """D1(s, w; q1, psi, psi') as a product of local factors over p <= prime_bound."""
    s, w = complex(s), complex(w)
    # p = 2: only l = 0 survives (psi is non-principal) and psi'(4^k) weights k.
    value = 1 / (1 - _power(2, 2 * s)) if twist.psi_prime == "psi0" else 1 + 0j
    error = 0.0
    for p in odd_primes_up_to(prime_bound):
        factor = d1_euler_factor(p, q1, twist, s, w)
        value *= factor.z
        error += factor.abs_error_bound / max(abs(factor.z), EPS)
    excess = w.real - 1.5
    tail = 1.0
    if excess > 0:
        tail = float(scipy.special.exp1(excess * math.log(prime_bound)))
    return EvalResult.of(value, abs(value) * (error + tail))


@functools.lru_cache(maxsize=8)
def _squarefree_up_to(limit: int) -> tuple[int, ...]:
    return tuple(q for q in range(1, limit + 1) if is_squarefree(q))


def c1_from_d1(
    s: Number, w: Number, twist: TwistLabel, Q1: int, prime_bound: int
) -> complex:
    """C1(s, w; psi, psi') = sum*_{q1 <= Q1} psi'(q1) q1^-s D1(s, w; q1, psi, psi')."""
    s, w = complex(s), complex(w)
    _require_dual(s, w)
    if twist.psi == "psi0":
        raise DomainError("The l-twist must be non-principal (l runs over odd l)")
    acc = CompensatedSum()
    for q1 in _squarefree_up_to(Q1):
        weight = twist_value(twist.psi_prime, q1)
        if weight == 0:
            continue
        d1 = d1_euler_product(s, w, q1, twist, prime_bound)
        acc.add(weight * _power(q1, s) * d1.z)
    return acc.value
