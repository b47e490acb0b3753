import math
import typing

import pydantic


class ComplexValue(pydantic.BaseModel):
    """A double-precision complex number with finite components."""

    model_config = pydantic.ConfigDict(frozen=True)

    re: float
    im: float = 0.0

    @pydantic.model_validator(mode="after")
    def validate_finite(self) -> typing.Self:
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError(f"Non-finite complex value: ({self.re}, {self.im})")
        return self

    @classmethod
    def from_complex(cls, z: "complex | float | ComplexValue") -> "ComplexValue":
        if isinstance(z, ComplexValue):
            return z
        z = complex(z)
        return cls(re=z.real, im=z.imag)

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    def conjugate(self) -> "ComplexValue":
        return ComplexValue(re=self.re, im=-self.im)


Number = typing.Union[complex, float, int, ComplexValue]
