"""
Per-invocation configuration for the ffdioph CLI.

A ``RunConfig`` captures everything a command's output depends on, so the
serialised echo in each document is enough to reproduce the run.
"""

from __future__ import annotations

import logging
from typing import Any, Dict, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from config.settings import get_settings
from utils.field_core import FieldConfig, field_config, field_config_for_q

logger = logging.getLogger(__name__)

OutputFormat = Literal["json", "csv", "pretty"]


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    field: FieldConfig
    command: str
    params: Dict[str, Any] = Field(default_factory=dict)
    seed: int = 0
    output_format: OutputFormat = "json"
    default_floor: int = Field(le=0)
    auto_extend: int = Field(ge=0)

    def echo(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


def resolve_field(
    q: Optional[int], p: Optional[int], r: Optional[int], modulus: Optional[Tuple[int, ...]]
) -> FieldConfig:
    """FieldConfig from either ``q`` or ``p``/``r``; raises FieldConfigError on bad input."""
    if q is not None:
        return field_config_for_q(q, modulus)
    return field_config(p if p is not None else 2, r if r is not None else 1, modulus)


def build_run_config(
    field: FieldConfig,
    command: str,
    params: Dict[str, Any],
    *,
    seed: int = 0,
    output_format: str = "json",
    default_floor: Optional[int] = None,
) -> RunConfig:
    settings = get_settings()
    return RunConfig(
        field=field,
        command=command,
        params=params,
        seed=seed,
        output_format=output_format,
        default_floor=settings.default_floor if default_floor is None else default_floor,
        auto_extend=settings.auto_extend,
    )
