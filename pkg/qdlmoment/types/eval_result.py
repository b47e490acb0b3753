import pydantic

from qdlmoment.types.complex_value import ComplexValue


class EvalResult(pydantic.BaseModel):
    """A computed value together with a bound on its absolute error."""

    model_config = pydantic.ConfigDict(frozen=True)

    value: ComplexValue
    abs_error_bound: float = pydantic.Field(ge=0.0)

    @classmethod
    def of(cls, value: complex | float, abs_error_bound: float) -> "EvalResult":
        return cls(
            value=ComplexValue.from_complex(value),
            abs_error_bound=float(abs_error_bound),
        )

    @property
    def z(self) -> complex:
        return self.value.z
