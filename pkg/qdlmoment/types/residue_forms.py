import pydantic

from qdlmoment.types.complex_value import ComplexValue


class ResidueForms(pydantic.BaseModel):
    """Two independent closed forms of one residue."""

    model_config = pydantic.ConfigDict(frozen=True)

    name: str
    alpha: ComplexValue
    first: ComplexValue
    second: ComplexValue

    @property
    def difference(self) -> float:
        return abs(self.first.z - self.second.z)
