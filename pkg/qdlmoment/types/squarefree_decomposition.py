import pydantic


class SquarefreeDecomposition(pydantic.BaseModel):
    """`n = n0 * m**2` with `n0` squarefree."""

    model_config = pydantic.ConfigDict(frozen=True)

    n0: int = pydantic.Field(ge=1)
    m: int = pydantic.Field(ge=1)

    @property
    def value(self) -> int:
        return self.n0 * self.m * self.m
