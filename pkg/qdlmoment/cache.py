"""Typed result cache on disk (diskcache) or in redis.

Expensive numerical blocks are serialized through a pydantic `TypeAdapter`, so a
cached float comes back bit-for-bit identical to the computed one.
"""

import functools
import logging
import pathlib
import typing
import urllib.parse

import diskcache
import pydantic
import pydantic_settings
import redis
from rich.pretty import pretty_repr

from qdlmoment.errors import ResultNotCachedError

T = typing.TypeVar("T")

logger = logging.getLogger(__name__)


class ResultCache(pydantic_settings.BaseSettings, typing.Generic[T]):
    """A typed cache client for numerical results.

    Keys are namespaced by `prefix`; values are stored as JSON bytes.
    """

    model_config = pydantic_settings.SettingsConfigDict(
        arbitrary_types_allowed=True, env_prefix="QDL_"
    )

    object_type: pydantic.TypeAdapter[T]

    cache_url: str | pathlib.Path | redis.Redis | diskcache.Cache
    default_ttl: int = pydantic.Field(
        default=-1,
        description=(
            "Cache time-to-live (seconds). "
            "-1: no expiration. "
            "0: disable cache. "
            ">0: expire after N seconds."
        ),
    )
    prefix: str = pydantic.Field(default="qdl")

    @pydantic.model_validator(mode="after")
    def validate_ttl(self) -> typing.Self:
        self.default_ttl = _normalize_ttl(self.default_ttl)
        return self

    @functools.cached_property
    def backend(self) -> diskcache.Cache | redis.Redis:
        """Returns the storage backend selected by `cache_url`."""
        logger.debug(f"Result cache backend: {self.cache_url_safe}")
        if isinstance(self.cache_url, (redis.Redis, diskcache.Cache)):
            return self.cache_url
        if isinstance(self.cache_url, pathlib.Path):
            return diskcache.Cache(self.cache_url)
        if urllib.parse.urlparse(self.cache_url).scheme in ("redis", "rediss"):
            return redis.Redis.from_url(self.cache_url)
        return diskcache.Cache(self.cache_url)

    @property
    def cache_url_safe(self) -> str:
        """Returns the cache URL with any password masked."""
        return mask_url_password(str(self.cache_url))

    def get_cache_key(self, key: str, *, with_prefix: bool = True) -> str:
        return f"{self.prefix}:{key}" if with_prefix and self.prefix else key

    def get(self, key: str) -> T | None:
        """Returns the cached value, or None on a miss."""
        _key = self.get_cache_key(key)
        logger.debug(f"[GET] cache: {pretty_repr(_key, max_string=60)}")
        data = self.backend.get(_key)
        if data is None:
            return None
        return self.object_type.validate_json(data)

    def get_or_raise(self, key: str) -> T:
        out = self.get(key)
        if out is None:
            raise ResultNotCachedError(f"Result not cached for key '{key}'")
        return out

    def set(self, key: str, value: T, ex: int | None = None) -> None:
        """Stores `value`; `ex` overrides `default_ttl` for this entry."""
        _key = self.get_cache_key(key)
        ex = _normalize_ttl(ex if ex is not None else self.default_ttl)
        if ex == 0:
            return None
        logger.debug(f"[SET] cache(ex={ex}): {pretty_repr(_key, max_string=60)}")
        expire = None if ex < 0 else ex
        self.backend.set(_key, self.object_type.dump_json(value), expire)

    def delete(self, key: str) -> None:
        self.backend.delete(self.get_cache_key(key))


def mask_url_password(url: str) -> str:
    """Replaces the password of a URL with '***'."""
    parsed = urllib.parse.urlparse(url)
    if parsed.password is None:
        return url
    port = f":{parsed.port}" if parsed.port is not None else ""
    netloc = f"{parsed.username or ''}:***@{parsed.hostname or ''}{port}"
    return parsed._replace(netloc=netloc).geturl()


def _normalize_ttl(ttl: int) -> int:
    # Any negative value means "never expire".
    return -1 if ttl < 0 else ttl
