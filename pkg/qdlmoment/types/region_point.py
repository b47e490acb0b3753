import typing

import pydantic

from qdlmoment.types.complex_value import ComplexValue

RegionTag = typing.Literal["S0", "S1", "dual-K", "other"]


class RegionPoint(pydantic.BaseModel):
    """A point (s, w) tagged with the convergence region it lies in."""

    model_config = pydantic.ConfigDict(frozen=True)

    s: ComplexValue
    w: ComplexValue
    region_tag: RegionTag

    @pydantic.model_validator(mode="after")
    def validate_tag(self) -> typing.Self:
        if self.region_tag != "other" and self.region_tag not in regions_of(
            self.s.z, self.w.z
        ):
            raise ValueError(f"({self.s.z}, {self.w.z}) is not in {self.region_tag}")
        return self


def regions_of(s: complex, w: complex, margin: float = 0.0) -> list[RegionTag]:
    """Every region containing (s, w), each inequality tightened by `margin`."""
    out: list[RegionTag] = []
    if s.real > 1 + margin and (s + w).real > 1.5 + margin:
        out.append("S0")
    if (
        w.real > 1 + margin
        and (s + w).real >= 1.5 + margin
        and (2 * s + w).real > 1.5 + margin
    ):
        out.append("S1")
    if s.real > 1 + margin and w.real > 1.5 + margin:
        out.append("dual-K")
    return out
