import typing

import pydantic

from qdlmoment.types.complex_value import ComplexValue
from qdlmoment.types.primitive_quad_char import PrimitiveQuadChar


class ImprimitiveQuadChar(pydantic.BaseModel):
    """Label of an imprimitive L-function: L^(2)(s, chi_n) or L(s, chi^(D))."""

    model_config = pydantic.ConfigDict(frozen=True)

    variant: typing.Literal["l2_chi_n", "kronecker"]
    n: int


class LValue(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True)

    character: PrimitiveQuadChar | ImprimitiveQuadChar
    s: ComplexValue
    value: ComplexValue
    method: typing.Literal["afe", "hurwitz", "decomposition"]
    inner_method: typing.Literal["afe", "hurwitz"] | None = None
    abs_error_bound: float = pydantic.Field(ge=0.0)

    @property
    def z(self) -> complex:
        return self.value.z
