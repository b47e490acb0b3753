import math
import typing

import pydantic

from qdlmoment.utils.primes import is_prime


class Factorization(pydantic.BaseModel):
    """Prime factorization `value = prod(p**e for p, e in factors)`."""

    model_config = pydantic.ConfigDict(frozen=True)

    value: int = pydantic.Field(ge=1, le=2**63 - 1)
    factors: tuple[tuple[int, int], ...] = ()

    @pydantic.model_validator(mode="after")
    def validate_factors(self) -> typing.Self:
        primes = [p for p, _ in self.factors]
        if any(a >= b for a, b in zip(primes, primes[1:])):
            raise ValueError(f"Primes not strictly increasing: {primes}")
        if any(e < 1 for _, e in self.factors):
            raise ValueError(f"Non-positive exponent in {self.factors}")
        if math.prod(p**e for p, e in self.factors) != self.value:
            raise ValueError(f"Factors {self.factors} do not multiply to {self.value}")
        for p in primes:
            if not is_prime(p):
                raise ValueError(f"Factor {p} of {self.value} is not prime")
        return self

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)
