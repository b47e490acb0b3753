import pathlib
import typing

import pydantic
import pydantic_settings

Subcommand = typing.Literal[
    "gauss-check",
    "lvalue",
    "fe-check",
    "k-series-check",
    "dds-check",
    "residue-check",
    "moment-scan",
    "q-recover",
    "sieve-scan",
]


class RunConfig(pydantic_settings.BaseSettings):
    """Parameters of one CLI run.

    Values not given on the command line fall back to `QDL_*` environment
    variables, then to the defaults below.
    """

    model_config = pydantic_settings.SettingsConfigDict(
        env_prefix="QDL_", extra="ignore"
    )

    subcommand: Subcommand
    threads: int = pydantic.Field(default=1, ge=1)
    output: pathlib.Path | None = None
    format: typing.Literal["csv", "json"] = "csv"
    verbose: bool = False
    method: typing.Literal["afe", "hurwitz"] = "afe"

    # L-values and characters
    d: int | None = None
    n: int | None = None
    s_re: float = 0.5
    s_im: float = 0.0

    # Suites
    n_max: int = pydantic.Field(default=500, ge=1)
    q_max: int = pydantic.Field(default=200, ge=0)
    l_max: int = pydantic.Field(default=300, ge=1)
    d_max: int = pydantic.Field(default=300, ge=1)
    samples: int = pydantic.Field(default=100, ge=1)
    seed: int = 0
    m: list[int] = pydantic.Field(default_factory=lambda: [3, 5, 15])
    qmax: int = pydantic.Field(default=100_000, ge=1)
    cutoff: int = pydantic.Field(default=2000, ge=1)
    prime_bound: int = pydantic.Field(default=10_000, ge=3)

    # Moment experiment
    alpha: float = 0.1
    alpha_im: float = 0.0
    x_min: float = pydantic.Field(default=512.0, gt=0.0)
    x_max: float = pydantic.Field(default=32768.0, gt=0.0)
    grid: int = pydantic.Field(default=7, ge=2)
    slope_min: float | None = None
    slope_max: float = 0.6
    rel_error_max: float = pydantic.Field(default=1e-2, gt=0.0)
    tolerance: float | None = pydantic.Field(default=None, gt=0.0)

    @pydantic.model_validator(mode="after")
    def validate_ranges(self) -> typing.Self:
        if self.x_max < self.x_min:
            raise ValueError(f"x-max {self.x_max} is below x-min {self.x_min}")
        if self.slope_min is not None and self.slope_max < self.slope_min:
            raise ValueError("slope-max is below slope-min")
        if self.subcommand == "lvalue" and (self.d is None) == (self.n is None):
            raise ValueError("lvalue takes exactly one of --d and --n")
        return self

    @property
    def s(self) -> complex:
        return complex(self.s_re, self.s_im)

    @property
    def alpha_z(self) -> complex:
        return complex(self.alpha, self.alpha_im)

    def x_grid(self) -> list[float]:
        """`grid` geometrically spaced X from x_min to x_max."""
        ratio = (self.x_max / self.x_min) ** (1 / (self.grid - 1))
        return [float(round(self.x_min * ratio**i, 9)) for i in range(self.grid)]
