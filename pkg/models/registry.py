#!/usr/bin/env python3
"""
Model specifiers for the command line

    hubbard:N=<n>[,p=<p>]
    bose:N=<n>[,eps=<e>]
"""

import logging
from typing import Callable, Dict, Union

from pydantic import ValidationError as PydanticValidationError

from models.bose import InfiniteRangeBoseModel
from models.hubbard import HubbardRing
from utils.errors import ValidationError

logger = logging.getLogger(__name__)

ReferenceModel = Union[HubbardRing, InfiniteRangeBoseModel]

_KEYS: Dict[str, Dict[str, Callable[[str], object]]] = {
    "hubbard": {"N": int, "p": float},
    "bose": {"N": int, "eps": float},
}
_FIELDS = {"N": "sites"}


def parse_model_spec(text: str) -> ReferenceModel:
    """
    Parse a model specifier into a reference model

    Args:
        text (str): e.g. "hubbard:N=4" or "bose:N=8,eps=0.05"

    Returns:
        ReferenceModel: The model, defaults filled in
    """
    name, _, arguments = text.strip().partition(":")
    name = name.strip().lower()
    if name not in _KEYS:
        raise ValidationError(f"unknown model {name!r} in specifier {text!r}")

    values: Dict[str, object] = {}
    for item in filter(None, (part.strip() for part in arguments.split(","))):
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep or key not in _KEYS[name]:
            raise ValidationError(f"unexpected parameter {item!r} for model {name}")
        try:
            values[_FIELDS.get(key, key)] = _KEYS[name][key](raw.strip())
        except ValueError as e:
            raise ValidationError(f"bad value for {key} in {text!r}: {raw.strip()!r}") from e
    if "sites" not in values:
        raise ValidationError(f"model specifier {text!r} needs N=<sites>")

    cls = HubbardRing if name == "hubbard" else InfiniteRangeBoseModel
    try:
        model = cls(**values)
    except PydanticValidationError as e:
        raise ValidationError(f"invalid model specifier {text!r}: {e.errors()[0]['msg']}") from e
    logger.debug("parse_model_spec: %s", model.describe())
    return model
