import typing

import pydantic

from qdlmoment.types.complex_value import ComplexValue
from qdlmoment.types.weight_spec import WeightSpec


class MomentParams(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True)

    X: float = pydantic.Field(gt=0.0)
    alpha: ComplexValue
    weight: WeightSpec = pydantic.Field(default_factory=WeightSpec)

    @pydantic.model_validator(mode="after")
    def validate_alpha(self) -> typing.Self:
        if not 0.0 < self.alpha.re < 0.5:
            raise ValueError(f"Re alpha must lie in (0, 1/2), got {self.alpha.re}")
        return self
