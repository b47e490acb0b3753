import typing

import pydantic

PsiName = typing.Literal["psi0", "psi1", "psi-1", "psi2", "psi-2"]

# psi_j = chi^(4j); psi0 is the principal character (value 1 everywhere).
PSI_INDEX: dict[str, int] = {"psi0": 0, "psi1": 1, "psi-1": -1, "psi2": 2, "psi-2": -2}


class TwistLabel(pydantic.BaseModel):
    """The pair (psi, psi') twisting the dual Gauss-sum series."""

    model_config = pydantic.ConfigDict(frozen=True)

    psi: PsiName
    psi_prime: PsiName

    @property
    def label(self) -> str:
        return f"({self.psi},{self.psi_prime})"
