import typing

import pydantic


class QuadraticCharacter(pydantic.BaseModel):
    """A real character: the Kronecker symbol `(top/.)` or the Jacobi `(./bottom)`.

    `conductor` is the modulus of the primitive character inducing it.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    kind: typing.Literal["kronecker_top", "jacobi_bottom"]
    top: int | None = None
    bottom: int | None = None
    conductor: int = pydantic.Field(ge=1)
    parity: typing.Literal["even", "odd"]

    @pydantic.model_validator(mode="after")
    def validate_kind(self) -> typing.Self:
        if self.kind == "kronecker_top":
            if self.top is None or self.bottom is not None:
                raise ValueError("kronecker_top requires `top` only")
            if self.top == 0 or self.top % 4 not in (0, 1):
                raise ValueError(f"Kronecker top {self.top} is not 0 or 1 mod 4")
            expected = "even" if self.top > 0 else "odd"
        else:
            if self.bottom is None or self.top is not None:
                raise ValueError("jacobi_bottom requires `bottom` only")
            if self.bottom < 1 or self.bottom % 2 == 0:
                raise ValueError(f"Jacobi bottom {self.bottom} is not odd positive")
            expected = "even" if self.bottom % 4 == 1 else "odd"
        if self.parity != expected:
            raise ValueError(f"Parity {self.parity} inconsistent with {self.label}")
        return self

    @property
    def modulus(self) -> int:
        if self.kind == "kronecker_top":
            return abs(typing.cast(int, self.top))
        return typing.cast(int, self.bottom)

    @property
    def label(self) -> str:
        if self.kind == "kronecker_top":
            return f"({self.top}/.)"
        return f"(./{self.bottom})"
