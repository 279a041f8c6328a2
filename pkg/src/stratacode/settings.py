from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings

from stratacode.constants import DEFAULT_DISTANCE_BUDGET, JSON_SAFE_INT


class StrataSettings(BaseSettings):
    model_config = {"env_prefix": "STRATACODE_"}

    threads: int | None = Field(default=None, ge=1)
    distance_budget: int = Field(default=DEFAULT_DISTANCE_BUDGET, ge=1)
    json_safe_int: int = Field(default=JSON_SAFE_INT, ge=1)

    @property
    def parallel(self) -> bool:
        return self.threads is not None and self.threads > 1

    def executor(self) -> ThreadPoolExecutor:
        return ThreadPoolExecutor(max_workers=self.threads)


@lru_cache
def get_settings() -> StrataSettings:
    return StrataSettings()
