import pydantic


class PrimitiveQuadChar(pydantic.BaseModel):
    """The primitive real character chi^(d) of a fundamental discriminant d."""

    model_config = pydantic.ConfigDict(frozen=True)

    d: int

    @pydantic.field_validator("d")
    @classmethod
    def validate_fundamental(cls, d: int) -> int:
        from qdlmoment.arith import is_fundamental_discriminant

        if not is_fundamental_discriminant(d):
            raise ValueError(f"{d} is not a fundamental discriminant")
        return d

    @property
    def conductor(self) -> int:
        return abs(self.d)
