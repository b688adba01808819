"""
Environment-backed settings for ffdioph.

Values come from the process environment (a ``.env`` file is loaded by
``app.py`` before the first call). ``get_settings`` caches the parsed model;
tests that patch the environment call ``get_settings.cache_clear()``.
"""

from __future__ import annotations

import logging
import os
from functools import lru_cache
from typing import Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

logger = logging.getLogger(__name__)

ENV_VARS: Dict[str, str] = {
    "threads": "FFDIOPH_THREADS",
    "max_q": "FFDIOPH_MAX_Q",
    "default_floor": "FFDIOPH_DEFAULT_FLOOR",
    "auto_extend": "FFDIOPH_AUTO_EXTEND",
    "enumeration_limit": "FFDIOPH_ENUMERATION_LIMIT",
    "log_level": "FFDIOPH_LOG_LEVEL",
}


class Settings(BaseModel):
    """Process-wide knobs. Run-specific values live in ``config.run_config.RunConfig``."""

    model_config = ConfigDict(frozen=True)

    threads: int = Field(default=4, ge=1)
    max_q: int = Field(default=64, ge=2)
    default_floor: int = Field(default=-64, le=0)
    auto_extend: int = Field(default=256, ge=0)
    enumeration_limit: int = Field(default=65536, ge=1)
    log_level: str = "WARNING"

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"unknown log level {value!r}")
        return level


def _read_env() -> Dict[str, Optional[str]]:
    return {name: os.getenv(var) for name, var in ENV_VARS.items()}


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    raw = {name: value for name, value in _read_env().items() if value not in (None, "")}
    settings = Settings(**raw)
    logger.debug("Loaded settings: %s", settings.model_dump())
    return settings
