"""Command-line front end: `qdl <subcommand> [options]`.

Every subcommand builds a `Report`, writes it as CSV or JSON to `--output` (or
standard output) and exits 0 when its checks pass, 1 on a tolerance violation
and 2 on a usage error.
"""

import argparse
import csv
import io
import logging
import math
import pathlib
import sys
import typing

import numpy as np
import pydantic
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from qdlmoment import __version__
from qdlmoment.arith import fundamental_discriminants, is_squarefree
from qdlmoment.config import Settings
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
    dk1_psi1_identity,
    k0_slice_identity,
    residue_s1_forms,
    residue_s_1_minus_alpha_forms,
    residue_w_3_2_C,
    residue_w_3_2_C_product,
)
from qdlmoment.errors import (
    ConsistencyError,
    DomainError,
    ExtrapolationError,
    LimitError,
)
from qdlmoment.gauss import g_from_tau, g_sum_array, tau_4l_array, tau_4l_bruteforce
from qdlmoment.lfunc import (
    AGREEMENT_POINTS,
    completed_lambda,
    k_series_check,
    l2_chi_n,
    l_kronecker,
    l_primitive_afe,
    l_primitive_hurwitz,
)
from qdlmoment.moment import (
    LValueCache,
    central_limit_fit,
    error_scan,
    gaussian_weight,
    large_sieve_scan,
)
from qdlmoment.types.l_value_block import LValueBlock
from qdlmoment.types.moment_row import CSV_HEADER
from qdlmoment.types.report import Cell, Report
from qdlmoment.types.run_config import RunConfig
from qdlmoment.types.twist_label import TwistLabel
from qdlmoment.utils.primes import odd_primes_up_to

logger = logging.getLogger(__name__)

console = Console(stderr=True)

CHECK_HEADER = ["check", "cases", "max_residual", "tolerance", "passed"]

GAUSS_TOL = 1e-8
CONVERSION_Q_MAX = 60
FE_TOL = 1e-9
LAMBDA_TOL = 1e-10
K_SERIES_TOL = 1e-2
REPRESENTATION_TOL = 1e-5
REPRESENTATION_POINTS = (
    (3.0, 3.0),
    (3.5, 3.0),
    (3.0, 3.5 + 1j),
    (3 + 0.5j, 3.2),
    (4.0, 2.9),
)
SQUARE_PART_TOL = 1e-6
SQUARE_PART_POINTS = ((2.0, 2.0), (3.0, 2.0), (1.5, 2.5), (2 + 1j, 2.0), (0.5, 3.0))
SLICE_TOL = 1e-10
SLICE_W = (1.2, 0.9 + 2j)
DK1_POINTS = (1.5, 1.1, 2 + 1j)
DK1_DEPTH = 40
C1_POINT = (3.5, 3.5)
C1_D1_TOL = 1e-4
RESIDUE_TOL = 1e-10
RESIDUE_C_TOL = 1e-6
RESIDUE_C_POINTS = (2.0, 1.5)


def _check_row(name: str, cases: int, residual: float, tolerance: float) -> list[Cell]:
    return [name, cases, residual, tolerance, residual <= tolerance]


def _report(name: str, rows: list[list[Cell]]) -> Report:
    return Report(
        name=name,
        header=CHECK_HEADER,
        rows=rows,
        passed=all(bool(row[-1]) for row in rows),
    )


def gauss_check(cfg: RunConfig) -> Report:
    tol = cfg.tolerance or GAUSS_TOL
    q = np.arange(1, cfg.q_max + 1, dtype=np.int64)
    worst, cases = 0.0, 0
    for n in range(1, cfg.n_max + 1, 2):
        fast = g_sum_array(n, q)
        oracle = np.array([g_from_tau(n, int(k)).z for k in q])
        worst = max(worst, float(np.max(np.abs(fast - oracle), initial=0.0)) / n)
        cases += q.size
    q_conv = q[q <= CONVERSION_Q_MAX]
    worst_conv, cases_conv = 0.0, 0
    for l in range(1, cfg.l_max + 1, 2):
        fast = tau_4l_array(l, q_conv)
        oracle = np.array([tau_4l_bruteforce(l, int(k)).z for k in q_conv])
        worst_conv = max(
            worst_conv, float(np.max(np.abs(fast - oracle), initial=0.0)) / (4 * l)
        )
        cases_conv += q_conv.size
    return _report(
        "gauss-check",
        [
            _check_row("G(chi_n,q) table vs tau", cases, worst, tol),
            _check_row("tau(chi^(4l),q) conversion", cases_conv, worst_conv, tol),
        ],
    )


def lvalue(cfg: RunConfig) -> Report:
    if cfg.n is not None:
        lv = l2_chi_n(cfg.n, cfg.s, cfg.method)
        label = f"L^(2)(s,chi_{cfg.n})"
    else:
        lv = l_kronecker(typing.cast(int, cfg.d), cfg.s, cfg.method)
        label = f"L(s,chi^({cfg.d}))"
    return Report(
        name="lvalue",
        header=["character", "s_re", "s_im", "value_re", "value_im", "abs_error_bound"],
        rows=[[label, lv.s.re, lv.s.im, lv.value.re, lv.value.im, lv.abs_error_bound]],
    )


def fe_check(cfg: RunConfig) -> Report:
    tol = cfg.tolerance or FE_TOL
    ds = fundamental_discriminants(cfg.d_max)
    worst, cases = 0.0, 0
    for d in ds:
        for s in AGREEMENT_POINTS:
            afe = l_primitive_afe(d, s).z
            oracle = l_primitive_hurwitz(d, s).z
            worst = max(worst, abs(afe - oracle) / (1 + abs(oracle)))
            cases += 1
    rng = np.random.default_rng(cfg.seed)
    worst_lambda = 0.0
    for _ in range(cfg.samples):
        d = int(rng.choice(ds[1:]))
        s = complex(rng.uniform(-1.0, 2.0), rng.uniform(-10.0, 10.0))
        left, right = completed_lambda(d, s).z, completed_lambda(d, 1 - s).z
        worst_lambda = max(worst_lambda, abs(left - right) / (1 + abs(left)))
    return _report(
        "fe-check",
        [
            _check_row("AFE vs Hurwitz", cases, worst, tol),
            _check_row(
                "Lambda(s) = Lambda(1-s)", cfg.samples, worst_lambda, LAMBDA_TOL
            ),
        ],
    )


def k_series(cfg: RunConfig) -> Report:
    tol = cfg.tolerance or K_SERIES_TOL
    rows = [
        _check_row(f"K-series m={m}", 1, k_series_check(m, cfg.s, cfg.qmax), tol)
        for m in cfg.m
    ]
    return _report("k-series-check", rows)


def dds_check(cfg: RunConfig) -> Report:
    rows: list[list[Cell]] = []

    worst = 0.0
    for s, w in REPRESENTATION_POINTS:
        by_n = a_series_nsum(s, w, cfg.cutoff).z
        by_m = a_series_msum(s, w, cfg.cutoff).z
        worst = max(worst, abs(by_n - by_m))
    rows.append(
        _check_row(
            "A(s,w): n-sum vs m-sum",
            len(REPRESENTATION_POINTS),
            worst,
            REPRESENTATION_TOL,
        )
    )

    worst = 0.0
    for s, w in SQUARE_PART_POINTS:
        closed = a1_closed_form(s, w).z
        truncated = a1_truncated(s, w, cfg.cutoff).z
        worst = max(worst, abs(closed - truncated) / abs(closed))
    rows.append(
        _check_row("A1 closed form", len(SQUARE_PART_POINTS), worst, SQUARE_PART_TOL)
    )

    worst, cases = 0.0, 0
    q1s = [q for q in range(1, 51) if is_squarefree(q)]
    for p in odd_primes_up_to(100):
        for q1 in q1s:
            for psi in ("psi0", "psi1", "psi-1", "psi2", "psi-2"):
                for w in SLICE_W:
                    worst = max(worst, k0_slice_identity(int(p), q1, psi, w))
                    cases += 1
    rows.append(_check_row("k=0 slices", cases, worst, SLICE_TOL))

    worst = max(
        dk1_psi1_identity(p, s, DK1_DEPTH) for p in (3, 5, 7) for s in DK1_POINTS
    )
    rows.append(_check_row("psi_1 k>=1 slice", 3 * len(DK1_POINTS), worst, SLICE_TOL))

    s, w = C1_POINT
    direct = c1_direct(s, w, 101, 400)
    rows.append(
        _check_row(
            "C1 twist decomposition",
            1,
            abs(direct - c1_from_twists(s, w, 101, 400)) / abs(direct),
            SLICE_TOL,
        )
    )
    direct = c2_direct(s, w, 10_001, 400)
    rows.append(
        _check_row(
            "C2 twist decomposition",
            1,
            abs(direct - c2_from_twists(s, w, 10_001, 400)) / abs(direct),
            SLICE_TOL,
        )
    )
    twist = TwistLabel(psi="psi1", psi_prime="psi0")
    twisted = c1_twisted(s, w, twist, 400, 40_000)
    from_d1 = c1_from_d1(s, w, twist, 200, 500)
    rows.append(
        _check_row(
            "C1 from D1", 1, abs(twisted - from_d1) / abs(twisted), C1_D1_TOL
        )
    )
    return _report("dds-check", rows)


def residue_check(cfg: RunConfig) -> Report:
    header = [
        "residue",
        "arg_re",
        "arg_im",
        "first_re",
        "first_im",
        "second_re",
        "second_im",
        "difference",
        "tolerance",
        "passed",
    ]
    rows: list[list[Cell]] = []
    tol = cfg.tolerance or RESIDUE_TOL
    for forms in (
        residue_s1_forms(cfg.alpha_z),
        residue_s_1_minus_alpha_forms(cfg.alpha_z),
    ):
        diff = forms.difference
        rows.append(
            [
                forms.name,
                forms.alpha.re,
                forms.alpha.im,
                forms.first.re,
                forms.first.im,
                forms.second.re,
                forms.second.im,
                diff,
                tol,
                diff <= tol * (1 + abs(forms.first.z)),
            ]
        )
    for s in RESIDUE_C_POINTS:
        closed = residue_w_3_2_C(s, verify=False).z
        product = residue_w_3_2_C_product(s, cfg.prime_bound)
        rel = abs(closed - product) / abs(closed)
        rows.append(
            [
                "w=3/2 of C",
                s,
                0.0,
                closed.real,
                closed.imag,
                product.real,
                product.imag,
                rel,
                RESIDUE_C_TOL,
                rel <= RESIDUE_C_TOL,
            ]
        )
    return Report(
        name="residue-check",
        header=header,
        rows=rows,
        passed=all(bool(row[-1]) for row in rows),
    )


def _l_value_cache() -> LValueCache | None:
    return Settings().result_cache(pydantic.TypeAdapter(LValueBlock))


def moment_scan(cfg: RunConfig) -> Report:
    summary = error_scan(
        cfg.alpha_z,
        gaussian_weight(),
        cfg.x_grid(),
        cfg.threads,
        cfg.method,
        _l_value_cache(),
    )

    last = summary.rows[-1]
    slope_ok = summary.fitted_slope <= cfg.slope_max and (
        cfg.slope_min is None or summary.fitted_slope >= cfg.slope_min
    )
    decreasing = all(
        b.relative_error <= a.relative_error
        for a, b in zip(summary.rows, summary.rows[1:])
    )
    if not decreasing:
        logger.warning("Relative error is not monotone across the grid")
    passed = slope_ok and decreasing and last.relative_error < cfg.rel_error_max
    console.print(
        f"fitted slope {summary.fitted_slope:.4f} +- {summary.slope_stderr:.4f}, "
        f"relative error at X={last.X:g}: {last.relative_error:.3e}"
    )
    if cfg.output is not None:
        path = cfg.output.with_name(cfg.output.stem + ".summary.json")
        path.write_text(summary.model_dump_json(indent=2) + "\n")
    return Report(
        name="moment-scan",
        header=list(CSV_HEADER),
        rows=[row.csv_fields() for row in summary.rows],
        passed=passed,
    )


def q_recover(cfg: RunConfig) -> Report:
    fit = central_limit_fit(cfg.x_grid(), gaussian_weight())
    rows: list[list[Cell]] = []
    for X, limit in zip(fit.X, fit.limit):
        predicted = fit.predict(X)
        rows.append([X, limit, predicted, abs(limit - predicted) / abs(limit)])
    console.print(f"Q(log X) = {fit.q1:.10g} log X + {fit.q0:.10g}")
    return Report(
        name="q-recover",
        header=["X", "limit", "fitted", "relative_residual"],
        rows=rows,
        passed=float(rows[-1][-1]) < cfg.rel_error_max,
    )


def sieve_scan(cfg: RunConfig) -> Report:
    sums = large_sieve_scan(cfg.x_grid(), cfg.s, cfg.method)
    rows: list[list[Cell]] = []
    previous = math.nan
    for X, total in sums:
        rows.append([X, total, total / previous if previous else math.nan])
        previous = total
    return Report(name="sieve-scan", header=["X", "sum_abs_L", "ratio"], rows=rows)


SUITES: dict[str, typing.Callable[[RunConfig], Report]] = {
    "gauss-check": gauss_check,
    "lvalue": lvalue,
    "fe-check": fe_check,
    "k-series-check": k_series,
    "dds-check": dds_check,
    "residue-check": residue_check,
    "moment-scan": moment_scan,
    "q-recover": q_recover,
    "sieve-scan": sieve_scan,
}


def run(cfg: RunConfig) -> int:
    """Runs one subcommand and writes its report; returns the exit status."""
    report = SUITES[cfg.subcommand](cfg)
    write_report(report, cfg.format, cfg.output)
    if cfg.verbose:
        console.print(_rich_table(report))
    if not report.passed:
        console.print(f"[red]{report.name}: tolerance violated[/red]")
        return 1
    return 0


def _format_cell(value: Cell) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def render_csv(report: Report) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(report.header)
    for row in report.rows:
        writer.writerow([_format_cell(v) for v in row])
    return buffer.getvalue()


def write_report(
    report: Report, fmt: typing.Literal["csv", "json"], output: pathlib.Path | None
) -> None:
    if fmt == "csv":
        text = render_csv(report)
    else:
        text = report.model_dump_json(indent=2) + "\n"
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text)


def _rich_table(report: Report) -> Table:
    table = Table(title=report.name)
    for column in report.header:
        table.add_column(column)
    for row in report.rows:
        table.add_row(*[_format_cell(v) for v in row])
    return table


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdl",
        description=(
            "Numerical checks for the first moment of quadratic Dirichlet "
            "L-functions."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--threads", type=int, help="worker processes (QDL_THREADS)")
    parser.add_argument("--output", type=pathlib.Path, help="output file")
    parser.add_argument("--format", choices=["csv", "json"])
    parser.add_argument("--verbose", action="store_true", default=None)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("gauss-check", help="fast G(chi_n, q) against brute force")
    p.add_argument("--n-max", type=int)
    p.add_argument("--q-max", type=int)
    p.add_argument("--l-max", type=int)
    p.add_argument("--tolerance", type=float)

    p = sub.add_parser("lvalue", help="one L-value")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--d", type=int, help="discriminant D: L(s, chi^(D))")
    group.add_argument("--n", type=int, help="odd n: L^(2)(s, chi_n)")
    _add_s(p)
    p.add_argument("--method", choices=["afe", "hurwitz"])

    p = sub.add_parser("fe-check", help="AFE against Hurwitz, Lambda symmetry")
    p.add_argument("--d-max", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--tolerance", type=float)

    p = sub.add_parser("k-series-check", help="functional equation with K(1-s)")
    p.add_argument("--m", type=int, nargs="+")
    p.add_argument("--s-re", type=float, default=-0.75)
    p.add_argument("--s-im", type=float)
    p.add_argument("--qmax", type=int)
    p.add_argument("--tolerance", type=float)

    p = sub.add_parser("dds-check", help="double Dirichlet series identities")
    p.add_argument("--cutoff", type=int)

    p = sub.add_parser("residue-check", help="closed forms of the residues")
    _add_alpha(p)
    p.add_argument("--prime-bound", type=int)
    p.add_argument("--tolerance", type=float)

    p = sub.add_parser("moment-scan", help="S(X; alpha) against the main terms")
    _add_alpha(p)
    _add_grid(p)
    p.add_argument("--method", choices=["afe", "hurwitz"])
    p.add_argument("--slope-min", type=float)
    p.add_argument("--slope-max", type=float)
    p.add_argument("--rel-error-max", type=float)

    p = sub.add_parser("q-recover", help="X Q(log X) from alpha -> 0")
    _add_grid(p)
    p.add_argument("--rel-error-max", type=float)

    p = sub.add_parser("sieve-scan", help="sum of |L(s, chi^(d))| over |d| <= X")
    _add_grid(p)
    _add_s(p)
    p.add_argument("--method", choices=["afe", "hurwitz"])
    p.set_defaults(x_min=100.0, x_max=6400.0)
    return parser


def _add_s(p: argparse.ArgumentParser) -> None:
    p.add_argument("--s-re", type=float)
    p.add_argument("--s-im", type=float)


def _add_alpha(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, help="real part of alpha")
    p.add_argument("--alpha-im", type=float)


def _add_grid(p: argparse.ArgumentParser) -> None:
    p.add_argument("--x-min", type=float)
    p.add_argument("--x-max", type=float)
    p.add_argument("--grid", type=int)


def main(argv: typing.Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    given = {k: v for k, v in vars(args).items() if v is not None}
    logging.basicConfig(
        level=logging.DEBUG if given.get("verbose") else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=console, show_path=False)],
    )
    try:
        cfg = RunConfig(**given)
        logger.debug(f"Run config: {cfg!r}")
        return run(cfg)
    except pydantic.ValidationError as exc:
        console.print(f"[red]invalid arguments[/red]: {exc}")
        return 2
    except (DomainError, LimitError) as exc:
        console.print(f"[red]{type(exc).__name__}[/red]: {exc}")
        return 2
    except (ConsistencyError, ExtrapolationError) as exc:
        console.print(f"[red]{type(exc).__name__}[/red]: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
