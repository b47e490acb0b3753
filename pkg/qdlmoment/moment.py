"""The smoothed first moment S(X; alpha) = sum_{n odd} L^(2)(1/2 + alpha, chi_n) w(n/X).

L-values do not depend on X, so a scan computes them once, in fixed chunks of
odd n, and every X reuses the same array. Each chunk is an independent pure
computation; sums are reduced by `pairwise_sum`, whose tree depends only on the
number of terms, so the worker count never changes the output.
"""

import concurrent.futures
import logging
import math
import typing

import numpy as np
import pydantic
import scipy.integrate
import scipy.stats

from qdlmoment.arith import fundamental_discriminants
from qdlmoment.cache import ResultCache
from qdlmoment.config import Settings
from qdlmoment.dds import residue_s1, residue_s_1_minus_alpha
from qdlmoment.errors import DomainError, ExtrapolationError, LimitError
from qdlmoment.lfunc import Method, l_primitive_afe, l_primitive_hurwitz, l_values_l2
from qdlmoment.types.complex_value import ComplexValue, Number
from qdlmoment.types.l_value_block import LValueBlock
from qdlmoment.types.moment_params import MomentParams
from qdlmoment.types.moment_row import MomentRow
from qdlmoment.types.scan_summary import ScanSummary
from qdlmoment.types.weight_spec import WeightSpec
from qdlmoment.utils.summation import pairwise_sum

logger = logging.getLogger(__name__)

MAX_X = 2**20
MIN_SCAN_POINTS = 6
SIEVE_MAX_X = 10**4
E_FLOOR = 1e-12
Q_ALPHAS = (1e-3, 5e-4, 2.5e-4)
Q_STABILITY = 1e-4

LValueCache = ResultCache[LValueBlock]


def gaussian_weight(scale: float = 1.0) -> WeightSpec:
    """w(t) = scale * exp(-t^2), Mellin transform scale * Gamma(s/2) / 2."""
    return WeightSpec(kind="gaussian", scale=scale)


def custom_weight(
    w: typing.Callable[[np.ndarray], np.ndarray],
    support_cut: float,
    mellin: typing.Callable[[complex], complex] | None = None,
    scale: float = 1.0,
) -> WeightSpec:
    return WeightSpec(
        kind="custom", w=w, mellin=mellin, support_cut=support_cut, scale=scale
    )


def _l2_block(s: complex, n_start: int, n_stop: int, method: Method) -> LValueBlock:
    values, _ = l_values_l2(range(n_start, n_stop, 2), s, method)
    return LValueBlock(
        n_start=n_start,
        n_stop=n_stop,
        re=values.real.tolist(),
        im=values.imag.tolist(),
    )


def _block_key(s: complex, n_start: int, n_stop: int, method: Method) -> str:
    return f"l2:{method}:{s.real!r}:{s.imag!r}:{n_start}:{n_stop}"


def moment_l_values(
    alpha: Number,
    n_max: int,
    threads: int | None = None,
    method: Method = "afe",
    cache: LValueCache | None = None,
    chunk_size: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """(ns, L^(2)(1/2 + alpha, chi_n)) for every odd n <= n_max.

    Chunks always cover `chunk_size` odd n starting at 1, so cached chunks are
    shared by runs with different `n_max`.
    """
    settings = Settings()
    threads = settings.threads if threads is None else threads
    chunk_size = settings.chunk_size if chunk_size is None else chunk_size
    if threads < 1:
        raise DomainError(f"threads must be >= 1, got {threads}")
    s = 0.5 + complex(alpha)
    span = 2 * chunk_size
    bounds = [(start, start + span) for start in range(1, n_max + 1, span)]

    blocks: dict[int, LValueBlock] = {}
    if cache is not None:
        for start, stop in bounds:
            hit = cache.get(_block_key(s, start, stop, method))
            if hit is not None:
                blocks[start] = hit
    missing = [(start, stop) for start, stop in bounds if start not in blocks]
    logger.debug(
        f"L^(2)({s}) for n <= {n_max}: {len(bounds)} chunks, "
        f"{len(missing)} to compute on {threads} worker(s)"
    )

    if threads == 1 or len(missing) <= 1:
        computed = [_l2_block(s, start, stop, method) for start, stop in missing]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as pool:
            computed = list(
                pool.map(
                    _l2_block,
                    [s] * len(missing),
                    [start for start, _ in missing],
                    [stop for _, stop in missing],
                    [method] * len(missing),
                )
            )
    for block in computed:
        blocks[block.n_start] = block
        if cache is not None:
            cache.set(_block_key(s, block.n_start, block.n_stop, method), block)

    ns = np.arange(1, n_max + 1, 2, dtype=np.int64)
    if not bounds:
        return ns, np.zeros(0, dtype=complex)
    values = np.concatenate(
        [
            np.asarray(blocks[start].re) + 1j * np.asarray(blocks[start].im)
            for start, _ in bounds
        ]
    )
    return ns, values[: ns.size]


def _cutoff(X: float, weight: WeightSpec) -> int:
    if X > MAX_X:
        raise LimitError(f"X = {X} exceeds {MAX_X}")
    return int(math.floor(weight.support_cut * X))


def smoothed_sum(
    ns: np.ndarray, values: np.ndarray, X: float, weight: WeightSpec
) -> complex:
    """sum over the given odd n <= T X of values[n] w(n/X)."""
    keep = ns <= _cutoff(X, weight)
    return pairwise_sum(values[keep] * weight.values(ns[keep] / X))


def compute_moment(
    params: MomentParams,
    threads: int | None = None,
    method: Method = "afe",
    cache: LValueCache | None = None,
) -> ComplexValue:
    """S(X; alpha) over odd n <= T X, T the weight's support cut."""
    n_max = _cutoff(params.X, params.weight)
    ns, values = moment_l_values(params.alpha, n_max, threads, method, cache)
    return ComplexValue.from_complex(
        smoothed_sum(ns, values, params.X, params.weight)
    )


def main_terms(params: MomentParams) -> tuple[ComplexValue, ComplexValue]:
    """M1 = X w^(1) Res_{s=1} and M2 = X^(1-alpha) w^(1-alpha) Res_{s=1-alpha}
    of A(s, 1/2 + alpha)."""
    alpha = params.alpha.z
    X = params.X
    m1 = X * params.weight.mellin_at(1) * residue_s1(alpha).z
    m2 = (
        np.exp((1 - alpha) * math.log(X))
        * params.weight.mellin_at(1 - alpha)
        * residue_s_1_minus_alpha(alpha).z
    )
    return ComplexValue.from_complex(m1), ComplexValue.from_complex(complex(m2))


def moment_row(params: MomentParams, S: complex) -> MomentRow:
    m1, m2 = main_terms(params)
    error = S - m1.z - m2.z
    return MomentRow(
        X=params.X,
        alpha=params.alpha,
        S=ComplexValue.from_complex(S),
        M1=m1,
        M2=m2,
        E=ComplexValue.from_complex(error),
        E_norm=abs(error) / params.X**0.25,
    )


def error_scan(
    alpha: Number,
    weight: WeightSpec,
    X_grid: typing.Sequence[float],
    threads: int | None = None,
    method: Method = "afe",
    cache: LValueCache | None = None,
) -> ScanSummary:
    """MomentRow per X and the least-squares slope of log|E| against log X."""
    if len(X_grid) < MIN_SCAN_POINTS:
        raise DomainError(f"An error scan needs >= {MIN_SCAN_POINTS} points")
    alpha = ComplexValue.from_complex(complex(alpha))
    n_max = max(_cutoff(X, weight) for X in X_grid)
    ns, values = moment_l_values(alpha, n_max, threads, method, cache)

    rows = []
    for X in X_grid:
        params = MomentParams(X=X, alpha=alpha, weight=weight)
        row = moment_row(params, smoothed_sum(ns, values, X, weight))
        logger.debug(f"X={X}: E={row.E.z} relative={row.relative_error:.3e}")
        rows.append(row)

    fit_rows = [r for r in rows if abs(r.E.z) > E_FLOOR]
    if len(fit_rows) < 2:
        logger.warning(f"Only {len(fit_rows)} rows with |E| > {E_FLOOR}; no slope")
        return ScanSummary(rows=rows, fitted_slope=math.nan, slope_stderr=math.nan)
    fit = scipy.stats.linregress(
        [math.log(r.X) for r in fit_rows], [math.log(abs(r.E.z)) for r in fit_rows]
    )
    return ScanSummary(
        rows=rows, fitted_slope=float(fit.slope), slope_stderr=float(fit.stderr)
    )


def richardson(values: typing.Sequence[float], ratio: float = 2.0) -> list[list[float]]:
    """Richardson tableau for f(h_i) with h_{i+1} = h_i / ratio and error
    c1 h + c2 h^2 + ...; level j removes the h^j term."""
    table = [list(values)]
    j = 1
    while len(table[-1]) > 1:
        prev = table[-1]
        factor = ratio**j
        table.append(
            [
                (factor * prev[i + 1] - prev[i]) / (factor - 1)
                for i in range(len(prev) - 1)
            ]
        )
        j += 1
    return table


def central_limit_value(X: float, weight: WeightSpec) -> float:
    """lim_{alpha -> 0+} (M1 + M2) at X, by Richardson extrapolation."""
    samples = []
    for alpha in Q_ALPHAS:
        params = MomentParams(X=X, alpha=ComplexValue(re=alpha), weight=weight)
        m1, m2 = main_terms(params)
        samples.append((m1.z + m2.z).real)
    table = richardson(samples)
    best, previous = table[-1][0], table[-2][-1]
    if abs(best - previous) > Q_STABILITY * abs(best):
        raise ExtrapolationError(
            f"Extrapolation at X={X} unstable: {previous} vs {best}"
        )
    return best


class QFit(pydantic.BaseModel):
    """X Q(log X) = X (q1 log X + q0) fitted to the extrapolated main terms."""

    q0: float
    q1: float
    X: list[float]
    limit: list[float]

    def predict(self, X: float) -> float:
        return X * (self.q1 * math.log(X) + self.q0)


def central_limit_fit(X_grid: typing.Sequence[float], weight: WeightSpec) -> QFit:
    if len(X_grid) < 2:
        raise DomainError("Recovering Q needs at least two X values")
    X = [float(x) for x in X_grid]
    limit = [central_limit_value(x, weight) for x in X]
    q1, q0 = np.polyfit(np.log(X), np.asarray(limit) / np.asarray(X), 1)
    return QFit(q0=float(q0), q1=float(q1), X=X, limit=limit)


def central_limit_Q(
    X_grid: typing.Sequence[float], weight: WeightSpec
) -> tuple[float, float]:
    """(q0, q1) with lim_{alpha -> 0+} (M1 + M2) ~ X (q1 log X + q0)."""
    fit = central_limit_fit(X_grid, weight)
    return fit.q0, fit.q1


def large_sieve_scan(
    X_grid: typing.Sequence[float], s: Number, method: Method = "afe"
) -> list[tuple[float, float]]:
    """(X, sum over fundamental d with |d| <= X of |L(s, chi^(d))|)."""
    s = complex(s)
    if s.real < 0.5:
        raise DomainError(f"large_sieve_scan needs Re s >= 1/2, got {s}")
    top = max(X_grid)
    if top > SIEVE_MAX_X:
        raise LimitError(f"X = {top} exceeds {SIEVE_MAX_X}")
    evaluate = l_primitive_afe if method == "afe" else l_primitive_hurwitz
    ds = [d for d in fundamental_discriminants(int(top)) if not (d == 1 and s == 1)]
    conductors = np.array([abs(d) for d in ds], dtype=float)
    magnitudes = np.array([abs(evaluate(d, s).z) for d in ds])
    return [
        (float(X), pairwise_sum(magnitudes[conductors <= X]).real) for X in X_grid
    ]


def mellin_inversion_check(
    X: float,
    alpha: Number,
    weight: WeightSpec | None = None,
    c: float = 2.0,
    height: float = 60.0,
    nodes: int = 4001,
    threads: int | None = None,
    method: Method = "afe",
) -> tuple[complex, complex]:
    """The smoothed sum and (1/2 pi i) int_(c) A_N(s, 1/2 + alpha) X^s w^(s) ds.

    A_N is A truncated to the same odd n <= T X as the smoothed sum, so the two
    agree up to the quadrature error.
    """
    weight = weight or gaussian_weight()
    if c <= 0:
        raise DomainError(f"The contour needs c > 0, got {c}")
    ns, values = moment_l_values(alpha, _cutoff(X, weight), threads, method)
    direct = smoothed_sum(ns, values, X, weight)

    t = np.linspace(-height, height, nodes)
    contour = c + 1j * t
    log_ratio = math.log(X) - np.log(ns.astype(float))
    mellin = np.array([weight.mellin_at(z) for z in contour])
    # (X/n)^s summed against L-values, one row per node.
    kernel = np.exp(contour[:, None] * log_ratio[None, :])
    integrand = (kernel @ values) * mellin
    integral = scipy.integrate.trapezoid(integrand, t) / (2 * math.pi)
    return direct, complex(integral)
