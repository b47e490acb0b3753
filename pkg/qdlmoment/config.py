import typing

import pydantic
import pydantic_settings
from str_or_none import str_or_none

if typing.TYPE_CHECKING:
    from qdlmoment.cache import ResultCache

T = typing.TypeVar("T")


class Settings(pydantic_settings.BaseSettings):
    """Runtime settings read from `QDL_*` environment variables."""

    model_config = pydantic_settings.SettingsConfigDict(env_prefix="QDL_")

    threads: int = pydantic.Field(
        default=1, ge=1, description="Worker processes for data-parallel loops."
    )
    chunk_size: int = pydantic.Field(
        default=256,
        ge=1,
        description="Odd n per work unit; independent of the worker count.",
    )
    cache_url: str | None = pydantic.Field(
        default=None,
        description="Disk path or redis:// URL of the result cache. Empty disables.",
    )
    cache_ttl: int = pydantic.Field(
        default=-1,
        description=(
            "Cache time-to-live (seconds). "
            "-1: no expiration. "
            "0: disable cache. "
            ">0: expire after N seconds."
        ),
    )
    cache_prefix: str = pydantic.Field(default="qdl")

    @pydantic.field_validator("cache_url", mode="before")
    @classmethod
    def validate_cache_url(cls, value: typing.Any) -> str | None:
        if value is None:
            return None
        return str_or_none(str(value))

    def result_cache(
        self, object_type: pydantic.TypeAdapter[T]
    ) -> "ResultCache[T] | None":
        """Returns a typed cache on `cache_url`, or None when caching is off."""
        if self.cache_url is None or self.cache_ttl == 0:
            return None

        from qdlmoment.cache import ResultCache

        return ResultCache[T](
            object_type=object_type,
            cache_url=self.cache_url,
            default_ttl=self.cache_ttl,
            prefix=self.cache_prefix,
        )
