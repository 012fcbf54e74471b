#!/usr/bin/env python3
"""
Run configuration: defaults < key = value config file < command flags
"""

import logging
import os
from pathlib import Path
from typing import Any, Dict, Literal, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError as PydanticValidationError, model_validator

from utils.errors import FormatError, ValidationError

logger = logging.getLogger(__name__)

TOLERANCE_ENV = "IDENT_ENTANGLE_TOL"
DEFAULT_REPORT_TOL = 1e-10

Command = Literal["decompose", "evolve", "average", "model-report", "mc-check"]


class RunConfig(BaseModel):
    """
    One invocation of the command-line pipeline
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Command
    state: Optional[Path] = None
    model: Optional[str] = None
    t0: float = 0.0
    t1: float = 10.0
    steps: int = Field(default=100, ge=1)
    samples: int = Field(default=100_000, ge=1)
    seed: int = 0
    nondegenerate: bool = False
    out: Optional[Path] = None
    workers: int = Field(default=1, ge=1)
    group_tol: Optional[float] = Field(default=None, gt=0.0)

    @model_validator(mode="after")
    def _sources(self) -> "RunConfig":
        if self.command == "decompose":
            if self.state is None and self.model is None:
                raise ValueError("decompose needs --state or --model")
            return self
        if self.model is None:
            raise ValueError(f"{self.command} needs --model to define the Hamiltonian")
        if self.command == "model-report" and self.state is not None:
            raise ValueError("model-report uses the model's own initial state; drop --state")
        if self.command == "evolve" and self.t1 < self.t0:
            raise ValueError("t1 must not precede t0")
        return self


def load_config_file(path: Path) -> Dict[str, str]:
    """
    Read a key = value config file, '#' starting a comment

    Args:
        path (Path): Config file

    Returns:
        dict: Raw string values keyed by RunConfig field names
    """
    values: Dict[str, str] = {}
    known = set(RunConfig.model_fields)
    for number, line in enumerate(Path(path).read_text().splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        key, sep, value = content.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or not key:
            raise FormatError(f"expected 'key = value', got {content!r}", str(path), number)
        if key not in known:
            raise FormatError(f"unknown key {key!r}", str(path), number)
        values[key] = value.strip()
    return values


def build_config(flags: Mapping[str, Any], config_file: Optional[Path] = None) -> RunConfig:
    """
    Merge the config file with command flags; flags set to None are absent

    Args:
        flags (Mapping[str, Any]): Parsed command-line values
        config_file (Path, optional): key = value file

    Returns:
        RunConfig: The validated configuration
    """
    merged: Dict[str, Any] = load_config_file(config_file) if config_file else {}
    merged.update({key: value for key, value in flags.items() if value is not None})
    try:
        return RunConfig(**merged)
    except PydanticValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"]) or "config"
        raise ValidationError(f"invalid configuration ({where}): {first['msg']}") from e


def report_tolerance() -> float:
    """Tolerance for closed-form versus engine comparisons, from IDENT_ENTANGLE_TOL"""
    raw = os.environ.get(TOLERANCE_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_REPORT_TOL
    try:
        value = float(raw)
    except ValueError as e:
        raise ValidationError(f"{TOLERANCE_ENV} must be a number, got {raw!r}") from e
    if value <= 0:
        raise ValidationError(f"{TOLERANCE_ENV} must be positive, got {value}")
    logger.debug("report tolerance %g from %s", value, TOLERANCE_ENV)
    return value
