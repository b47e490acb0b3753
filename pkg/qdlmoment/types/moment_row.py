import pydantic

from qdlmoment.types.complex_value import ComplexValue

CSV_HEADER = (
    "X",
    "alpha_re",
    "alpha_im",
    "S_re",
    "S_im",
    "M1_re",
    "M1_im",
    "M2_re",
    "M2_im",
    "E_re",
    "E_im",
    "E_norm",
)


class MomentRow(pydantic.BaseModel):
    """One X of the moment experiment: S = M1 + M2 + E."""

    model_config = pydantic.ConfigDict(frozen=True)

    X: float
    alpha: ComplexValue
    S: ComplexValue
    M1: ComplexValue
    M2: ComplexValue
    E: ComplexValue
    E_norm: float

    @property
    def relative_error(self) -> float:
        return abs(self.E.z) / (abs(self.M1.z) + abs(self.M2.z))

    def csv_fields(self) -> list[float]:
        return [
            self.X,
            self.alpha.re,
            self.alpha.im,
            self.S.re,
            self.S.im,
            self.M1.re,
            self.M1.im,
            self.M2.re,
            self.M2.im,
            self.E.re,
            self.E.im,
            self.E_norm,
        ]
