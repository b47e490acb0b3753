import math

import mpmath
import numpy as np
import pydantic
import pytest

from qdlmoment.dds import (
    a1_closed_form,
    a1_truncated,
    a_series_msum,
    a_series_nsum,
    c1_direct,
    c1_from_d1,
    c1_from_twists,
    c1_twisted,
    c2_direct,
    c2_from_twists,
    c_series,
    d1_euler_factor,
    dk1_psi1_identity,
    k0_slice_identity,
    p_euler,
    region_point,
    residue_s1,
    residue_s1_forms,
    residue_s_1_minus_alpha,
    residue_s_1_minus_alpha_forms,
    residue_w_3_2_C,
    residue_w_3_2_C_product,
    twist_array,
    twist_value,
)
from qdlmoment.errors import DomainError, RegionError
from qdlmoment.numkit import zeta
from qdlmoment.types.complex_value import ComplexValue
from qdlmoment.types.region_point import RegionPoint
from qdlmoment.types.twist_label import TwistLabel
from qdlmoment.utils.primes import odd_primes_up_to

TWISTS = ("psi0", "psi1", "psi-1", "psi2", "psi-2")


def test_region_point_tags():
    assert region_point(2, 2).region_tag == "S0"
    assert region_point(0.5, 2).region_tag == "S1"
    assert region_point(0.2, 0.2).region_tag == "other"
    with pytest.raises(pydantic.ValidationError):
        RegionPoint(
            s=ComplexValue(re=0.5), w=ComplexValue(re=0.5), region_tag="S0"
        )


def test_twist_values():
    assert [twist_value(name, 3) for name in TWISTS] == [1, 1, -1, -1, 1]
    assert [twist_value(name, 2) for name in TWISTS] == [1, 0, 0, 0, 0]
    k = np.arange(0, 60)
    for name in TWISTS:
        assert twist_array(name, k).tolist() == [twist_value(name, int(x)) for x in k]


def test_nsum_matches_msum():
    for s, w in ((2.5, 2.5), (3.0, 2.5 + 1j)):
        by_n = a_series_nsum(s, w, 4001)
        by_m = a_series_msum(s, w, 4001)
        assert abs(by_n.z - by_m.z) < 1e-5
        assert by_n.abs_error_bound < 1e-4


def test_msum_single_term():
    value = a_series_msum(3, 3, 1).z
    assert abs(value - 7 / 8 * zeta(3).z) < 1e-13


def test_a1_closed_form_matches_truncation():
    for s, w in ((2.0, 2.0), (1.5 + 1j, 2.0), (3.0, 2.5 - 0.5j)):
        closed = a1_closed_form(s, w)
        truncated = a1_truncated(s, w, 1001)
        assert abs(closed.z - truncated.z) <= 1e-8 * abs(closed.z)
        assert truncated.abs_error_bound < 1e-8


def test_p_euler_at_s_one():
    alpha = 0.2
    expected = (
        0.5
        * (1 - 2 ** (-1 - 2 * alpha))
        / (float(mpmath.zeta(2 + 2 * alpha)) * (1 - 2 ** (-2 - 2 * alpha)))
    )
    assert abs(p_euler(1, 0.5 + alpha).z - expected) < 1e-13


def test_residue_s1_value():
    for alpha in (0.1, 0.25, 0.4):
        expected = (
            float(mpmath.zeta(1 + 2 * alpha) / mpmath.zeta(2 + 2 * alpha))
            * (1 - 2 ** (-1 - 2 * alpha))
            / (2 * (1 - 2 ** (-2 - 2 * alpha)))
        )
        assert abs(residue_s1(alpha).z - expected) < 1e-12 * expected


def test_residue_forms_agree():
    rng = np.random.default_rng(11)
    for _ in range(20):
        alpha = complex(rng.uniform(0.05, 0.45), rng.uniform(-5.0, 5.0))
        for forms in (residue_s1_forms(alpha), residue_s_1_minus_alpha_forms(alpha)):
            assert forms.difference <= 1e-10 * (1 + abs(forms.first.z))
        residue_s1(alpha)
        residue_s_1_minus_alpha(alpha)


def test_residue_s_1_minus_alpha_real():
    value = residue_s_1_minus_alpha(0.25).z
    assert abs(value.imag) < 1e-14
    assert value.real != 0


def test_residue_alpha_out_of_range():
    for alpha in (0.0, 0.5, -0.1 + 1j, 0.7):
        with pytest.raises(DomainError):
            residue_s1(alpha)
        with pytest.raises(DomainError):
            residue_s_1_minus_alpha(alpha)


def test_k0_slice_identities():
    w = 1.5 + 0.3j
    squarefree = [q for q in range(1, 51) if all(q % (p * p) for p in (2, 3, 5, 7))]
    for p in odd_primes_up_to(100):
        for q1 in squarefree:
            for psi in TWISTS:
                assert k0_slice_identity(p, q1, psi, w) < 1e-12


def test_k0_slice_rejects_square_part():
    with pytest.raises(DomainError):
        k0_slice_identity(3, 18, "psi1", 2.0)


def test_dk1_identity():
    for p in (3, 5, 7):
        for s in (1.5, 2.0 + 1j):
            assert dk1_psi1_identity(p, s, 40) < 1e-12
    with pytest.raises(RegionError):
        dk1_psi1_identity(3, 0.5, 10)


def test_d1_euler_factor_errors():
    twist = TwistLabel(psi="psi1", psi_prime="psi0")
    with pytest.raises(DomainError):
        d1_euler_factor(2, 1, twist, 2, 2)
    with pytest.raises(DomainError):
        d1_euler_factor(9, 1, twist, 2, 2)
    with pytest.raises(DomainError):
        d1_euler_factor(3, 12, twist, 2, 2)
    with pytest.raises(RegionError):
        d1_euler_factor(3, 1, twist, 1.0, 2)


def test_d1_euler_factor_converges():
    twist = TwistLabel(psi="psi-1", psi_prime="psi1")
    deep = d1_euler_factor(5, 3, twist, 1.5, 1.8, K=80)
    auto = d1_euler_factor(5, 3, twist, 1.5, 1.8)
    assert abs(deep.z - auto.z) < 1e-14
    assert auto.abs_error_bound < 1e-14


def test_residue_w_3_2_C():
    for s in (2.0, 1.5):
        closed = 2 * float(mpmath.zeta(2 * s)) / (3 * math.pi**2 / 6)
        assert abs(residue_w_3_2_C(s).z - closed) < 1e-12 * closed
    product = residue_w_3_2_C_product(2.0 + 1j)
    closed = residue_w_3_2_C(2.0 + 1j, verify=False).z
    assert abs(product - closed) < 1e-6 * abs(closed)
    limit = 2 / (3 * zeta(2).z.real)
    assert abs(residue_w_3_2_C(40.0, verify=False).z - limit) < 1e-12
    with pytest.raises(RegionError):
        residue_w_3_2_C(1.0)


def test_c1_twist_decomposition():
    for s, w in ((2.0, 2.5), (1.5 + 0.5j, 2.0)):
        direct = c1_direct(s, w, 101, 400)
        twisted = c1_from_twists(s, w, 101, 400)
        assert abs(direct - twisted) <= 1e-10 * (1 + abs(direct))


def test_c2_twist_decomposition():
    for s, w in ((2.0, 2.5), (1.5 + 0.5j, 2.0)):
        direct = c2_direct(s, w, 121, 400)
        twisted = c2_from_twists(s, w, 121, 400)
        assert abs(direct - twisted) <= 1e-10 * (1 + abs(direct))
    c = c_series(2.0, 2.5, 121, 400)
    parts = c1_direct(2.0, 2.5, 121, 400) - c2_direct(2.0, 2.5, 121, 400)
    assert abs(c - parts) < 1e-14


def test_c1_twisted_matches_euler_product():
    s = w = 3.5
    for twist in (
        TwistLabel(psi="psi1", psi_prime="psi0"),
        TwistLabel(psi="psi-1", psi_prime="psi-1"),
    ):
        summed = c1_twisted(s, w, twist, 400, 40_000)
        product = c1_from_d1(s, w, twist, 200, 500)
        assert abs(summed - product) < 1e-4


def test_region_errors():
    with pytest.raises(RegionError):
        a_series_nsum(1.0, 2.0, 11)
    with pytest.raises(RegionError):
        a_series_msum(0.5, 0.5, 11)
    with pytest.raises(RegionError):
        p_euler(0.0, 0.4)
    with pytest.raises(RegionError):
        a1_closed_form(2.0, 0.5)
    with pytest.raises(RegionError):
        c1_direct(1.0, 2.0, 11, 11)
    with pytest.raises(RegionError):
        c2_direct(2.0, 1.5, 11, 11)
    with pytest.raises(DomainError):
        c1_twisted(2.0, 2.0, TwistLabel(psi="psi0", psi_prime="psi1"), 11, 11)
