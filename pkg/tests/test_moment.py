import math
import pathlib

import mpmath
import numpy as np
import pydantic
import pytest

from qdlmoment.cache import ResultCache
from qdlmoment.dds import residue_s1, residue_s_1_minus_alpha
from qdlmoment.errors import DomainError, LimitError
from qdlmoment.lfunc import l2_chi_n
from qdlmoment.moment import (
    Q_ALPHAS,
    central_limit_fit,
    central_limit_Q,
    central_limit_value,
    compute_moment,
    custom_weight,
    error_scan,
    gaussian_weight,
    large_sieve_scan,
    main_terms,
    mellin_inversion_check,
    moment_l_values,
    moment_row,
    richardson,
    smoothed_sum,
)
from qdlmoment.types.complex_value import ComplexValue
from qdlmoment.types.l_value_block import LValueBlock
from qdlmoment.types.moment_params import MomentParams


def _params(X: float, alpha: complex, scale: float = 1.0) -> MomentParams:
    return MomentParams(
        X=X,
        alpha=ComplexValue.from_complex(alpha),
        weight=gaussian_weight(scale),
    )


def test_m1_example():
    m1, _ = main_terms(_params(1000, 0.25))
    expected = (
        1000
        * math.sqrt(math.pi)
        / 2
        * float(mpmath.zeta(1.5) / mpmath.zeta(2.5))
        * (1 - 2**-1.5)
        / (2 * (1 - 2**-2.5))
    )
    assert abs(m1.z - expected) < 1e-10 * expected


def test_main_terms_match_residues():
    alpha = 0.2 + 0.5j
    X = 300.0
    m1, m2 = main_terms(_params(X, alpha))
    w1 = math.sqrt(math.pi) / 2
    assert abs(m1.z - X * w1 * residue_s1(alpha).z) < 1e-10 * abs(m1.z)
    w2 = complex(mpmath.gamma((1 - alpha) / 2)) / 2
    expected = X ** (1 - alpha) * w2 * residue_s_1_minus_alpha(alpha).z
    assert abs(m2.z - expected) < 1e-10 * abs(expected)


def test_main_terms_real_for_real_alpha():
    m1, m2 = main_terms(_params(2000, 0.1))
    assert abs(m1.im) <= 1e-12 * abs(m1.re)
    assert abs(m2.im) <= 1e-12 * abs(m2.re)


def test_params_reject_alpha_outside_strip():
    for alpha in (0.0, 0.5, -0.2):
        with pytest.raises(pydantic.ValidationError):
            _params(100, alpha)
    with pytest.raises(LimitError):
        compute_moment(_params(2.0**21, 0.25))


def test_moment_linear_in_weight():
    S = compute_moment(_params(200, 0.25)).z
    S2 = compute_moment(_params(200, 0.25, scale=2.0)).z
    assert S2 == 2 * S
    m1, m2 = main_terms(_params(200, 0.25))
    n1, n2 = main_terms(_params(200, 0.25, scale=2.0))
    assert abs(n1.z - 2 * m1.z) < 1e-12 * abs(m1.z)
    assert abs(n2.z - 2 * m2.z) < 1e-12 * abs(m2.z)


def test_moment_conjugate_symmetry():
    alpha = 0.3 + 2j
    S = compute_moment(_params(150, alpha)).z
    S_bar = compute_moment(_params(150, alpha.conjugate())).z
    assert abs(S_bar - S.conjugate()) <= 1e-10 * abs(S)


def test_moment_at_x_one():
    """At X = 1 the weight leaves n = 1 and n = 3 as the only visible terms."""
    alpha = 0.25
    S = compute_moment(_params(1, alpha)).z
    head = l2_chi_n(1, 0.5 + alpha).z * math.exp(-1) + l2_chi_n(
        3, 0.5 + alpha
    ).z * math.exp(-9)
    assert abs(S - head) < 1e-9


def test_methods_agree():
    params = _params(500, 0.25)
    afe = compute_moment(params, method="afe").z
    hurwitz = compute_moment(params, method="hurwitz").z
    assert abs(afe - hurwitz) <= 1e-6 * abs(afe)


def test_worker_count_does_not_change_values():
    ns1, one = moment_l_values(0.25, 1500, threads=1, chunk_size=100)
    ns2, two = moment_l_values(0.25, 1500, threads=2, chunk_size=100)
    assert np.array_equal(ns1, ns2)
    assert np.array_equal(one, two)
    assert ns1.tolist() == list(range(1, 1501, 2))


def test_cached_values_identical(temp_cache_url: pathlib.Path):
    cache = ResultCache[LValueBlock](
        object_type=pydantic.TypeAdapter(LValueBlock),
        cache_url=temp_cache_url,
    )
    _, fresh = moment_l_values(0.2 + 1j, 999, cache=cache, chunk_size=64)
    _, cached = moment_l_values(0.2 + 1j, 999, cache=cache, chunk_size=64)
    _, longer = moment_l_values(0.2 + 1j, 1200, cache=cache, chunk_size=64)
    assert np.array_equal(fresh, cached)
    assert np.array_equal(longer[: fresh.size], fresh)


def test_custom_weight_matches_gaussian():
    custom = custom_weight(lambda t: np.exp(-t * t), support_cut=6.1)
    assert abs(custom.mellin_at(1) - math.sqrt(math.pi) / 2) < 1e-10
    gauss = _params(100, 0.25)
    other = MomentParams(X=100, alpha=gauss.alpha, weight=custom)
    assert compute_moment(other).z == compute_moment(gauss).z
    for a, b in zip(main_terms(other), main_terms(gauss)):
        assert abs(a.z - b.z) < 1e-8 * abs(b.z)


def test_moment_row_decomposition():
    params = _params(400, 0.25)
    S = compute_moment(params).z
    row = moment_row(params, S)
    assert abs(row.S.z - row.M1.z - row.M2.z - row.E.z) < 1e-9 * abs(S)
    assert row.E_norm == pytest.approx(abs(row.E.z) / 400**0.25)
    assert row.relative_error < 0.1


def test_mellin_inversion():
    direct, integral = mellin_inversion_check(50, 0.25)
    assert abs(direct - integral) <= 1e-8 * abs(direct)
    with pytest.raises(DomainError):
        mellin_inversion_check(50, 0.25, c=0.0)


def test_richardson():
    table = richardson([1 + h + h * h for h in (1.0, 0.5, 0.25)])
    assert [len(row) for row in table] == [3, 2, 1]
    assert table[-1][0] == pytest.approx(1.0, abs=1e-14)


def test_central_limit_q():
    weight = gaussian_weight()
    X_grid = [2.0**k for k in range(8, 14)]
    q0, q1 = central_limit_Q(X_grid, weight)
    # q1 = w^(1) / (6 zeta(2))
    assert q1 == pytest.approx(math.sqrt(math.pi) / (12 * math.pi**2 / 6), rel=1e-6)
    fit = central_limit_fit(X_grid, weight)
    assert (fit.q0, fit.q1) == (q0, q1)
    for X, limit in zip(fit.X, fit.limit):
        assert fit.predict(X) == pytest.approx(limit, rel=1e-6)
    limit = central_limit_value(1000, weight)
    assert limit == pytest.approx(fit.predict(1000), rel=1e-6)
    with pytest.raises(DomainError):
        central_limit_Q([1000.0], weight)


def test_central_limit_matches_small_alpha_moment():
    weight = gaussian_weight()
    X_grid = (256.0, 1024.0)
    n_max = math.floor(weight.support_cut * max(X_grid))
    ladders: dict[float, list[float]] = {X: [] for X in X_grid}
    for alpha in Q_ALPHAS:
        ns, values = moment_l_values(alpha, n_max)
        for X in X_grid:
            ladders[X].append(smoothed_sum(ns, values, X, weight).real)
    ns, values = moment_l_values(1e-4, n_max)
    for X in X_grid:
        limit = central_limit_value(X, weight)
        row = moment_row(_params(X, 1e-4), smoothed_sum(ns, values, X, weight))
        # At alpha = 1e-4 the moment still carries its O(alpha log X) drift.
        assert abs(row.S.z - limit) <= 2e-3 * abs(limit)
        # With the drift extrapolated away the moment and the limit differ by E.
        extrapolated = richardson(ladders[X])[-1][0]
        assert abs(extrapolated - limit) <= 2 * abs(row.E.z) + 1e-6 * abs(limit)


def test_large_sieve_scan():
    rows = large_sieve_scan([100, 200, 400, 800], 0.5)
    sums = [total for _, total in rows]
    assert all(b > a for a, b in zip(sums, sums[1:]))
    for a, b in zip(sums, sums[1:]):
        assert 1.5 < b / a < 3.0
    with pytest.raises(DomainError):
        large_sieve_scan([100], 0.3)
    with pytest.raises(LimitError):
        large_sieve_scan([2e4], 0.5)


def test_error_scan_needs_six_points():
    with pytest.raises(DomainError):
        error_scan(0.25, gaussian_weight(), [64, 128, 256, 512, 1024])


def test_small_error_scan():
    X_grid = [2.0**k for k in range(5, 11)]
    summary = error_scan(0.25, gaussian_weight(), X_grid)
    assert [row.X for row in summary.rows] == X_grid
    assert math.isfinite(summary.fitted_slope)
    for row in summary.rows:
        S = compute_moment(_params(row.X, 0.25)).z
        assert row.S.z == S


@pytest.mark.slow
def test_error_scan_full_range():
    X_grid = [2.0**k for k in range(9, 16)]
    summary = error_scan(0.1, gaussian_weight(), X_grid, threads=4)
    relative = [row.relative_error for row in summary.rows]
    assert all(b < a for a, b in zip(relative, relative[1:]))
    assert relative[-1] < 1e-2
    # |E| shrinks slowly over this range; only the upper bound is asserted.
    assert summary.fitted_slope <= 0.6
