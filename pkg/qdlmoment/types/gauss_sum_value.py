import typing

import pydantic

from qdlmoment.types.complex_value import ComplexValue


class GaussSumValue(pydantic.BaseModel):
    """tau(chi, q) or G(chi_n, q) for a character of the given modulus."""

    model_config = pydantic.ConfigDict(frozen=True)

    value: ComplexValue
    modulus: int = pydantic.Field(ge=1)
    shift: int

    @pydantic.model_validator(mode="after")
    def validate_trivial_bound(self) -> typing.Self:
        if abs(self.value.z) > self.modulus * (1.0 + 1e-9):
            raise ValueError(
                f"|{self.value.z}| exceeds the trivial bound {self.modulus}"
            )
        return self

    @property
    def z(self) -> complex:
        return self.value.z
