import pydantic


class LValueBlock(pydantic.BaseModel):
    """L^(2)(s, chi_n) for the odd n in [n_start, n_stop), as cached."""

    n_start: int
    n_stop: int
    re: list[float]
    im: list[float]
