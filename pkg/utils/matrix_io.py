#!/usr/bin/env python3
"""
Plain-text matrix and state files

Matrix file: a "rows cols" header, then rows x cols whitespace-separated
complex entries written as "a+bi" (e.g. "0.5-0.5i"); '#' starts a comment.
State file: a "species dim" header followed by the coefficient matrix.
"""

import logging
from pathlib import Path
from typing import Iterator, List, Tuple, Union

import numpy as np
from pydantic import ValidationError as PydanticValidationError

from entanglement.two_particle import Species, TwoParticleState
from utils.errors import FormatError, ValidationError

logger = logging.getLogger(__name__)

# states farther than this from unit norm are rejected instead of renormalized
NORM_REJECT = 1e-6

PathLike = Union[str, Path]


def format_number(value: float) -> str:
    return f"{value:.12g}"


def format_complex(value: complex) -> str:
    return f"{value.real:.12g}{value.imag:+.12g}i"


def _content_lines(text: str) -> Iterator[Tuple[int, str]]:
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if content:
            yield number, content


def _parse_complex(token: str, source: str, line: int) -> complex:
    candidate = token.replace("i", "j").replace("I", "j")
    try:
        return complex(candidate)
    except ValueError as e:
        raise FormatError(f"cannot parse complex entry {token!r}", source, line) from e


def _parse_header(content: str, source: str, line: int) -> Tuple[str, str]:
    parts = content.split()
    if len(parts) != 2:
        raise FormatError(f"expected a two-field header, got {content!r}", source, line)
    return parts[0], parts[1]


def _parse_body(lines: List[Tuple[int, str]], source: str, header_line: int) -> np.ndarray:
    if not lines:
        raise FormatError("missing matrix header", source, header_line)
    line, content = lines[0]
    rows_text, cols_text = _parse_header(content, source, line)
    try:
        rows, cols = int(rows_text), int(cols_text)
    except ValueError as e:
        raise FormatError(f"matrix dimensions must be integers, got {content!r}", source, line) from e
    if rows < 1 or cols < 1:
        raise FormatError(f"matrix dimensions must be positive, got {rows}x{cols}", source, line)

    entries: List[complex] = []
    last = line
    for last, content in lines[1:]:
        for token in content.split():
            if len(entries) == rows * cols:
                raise FormatError(f"more than {rows * cols} entries", source, last)
            entries.append(_parse_complex(token, source, last))
    if len(entries) != rows * cols:
        raise FormatError(f"expected {rows * cols} entries, found {len(entries)}", source, last)
    return np.array(entries, dtype=np.complex128).reshape(rows, cols)


def parse_matrix(text: str, source: str = "<string>") -> np.ndarray:
    """
    Parse the matrix text format

    Args:
        text (str): File contents
        source (str): Name used in error messages

    Returns:
        np.ndarray: Complex matrix
    """
    return _parse_body(list(_content_lines(text)), source, 1)


def format_matrix(matrix: np.ndarray) -> str:
    m = np.asarray(matrix, dtype=np.complex128)
    lines = [f"{m.shape[0]} {m.shape[1]}"]
    lines.extend(" ".join(format_complex(z) for z in row) for row in m)
    return "\n".join(lines) + "\n"


def read_matrix(path: PathLike) -> np.ndarray:
    path = Path(path)
    return parse_matrix(path.read_text(), str(path))


def write_matrix(path: PathLike, matrix: np.ndarray) -> None:
    Path(path).write_text(format_matrix(matrix))


def parse_state(text: str, source: str = "<string>") -> TwoParticleState:
    """
    Parse a state file

    Args:
        text (str): File contents
        source (str): Name used in error messages

    Returns:
        TwoParticleState: The state, renormalized when its norm is off by
        at most NORM_REJECT
    """
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("empty state file", source, 1)
    line, content = lines[0]
    species_text, dim_text = _parse_header(content, source, line)
    try:
        species = Species(species_text.lower())
    except ValueError as e:
        raise FormatError(f"unknown species {species_text!r}", source, line) from e
    try:
        dim = int(dim_text)
    except ValueError as e:
        raise FormatError(f"dimension must be an integer, got {dim_text!r}", source, line) from e

    lam = _parse_body(lines[1:], source, line + 1)
    if lam.shape != (dim, dim):
        raise ValidationError(f"{source}: header says N={dim} but the matrix is {lam.shape[0]}x{lam.shape[1]}")
    norm = float(np.linalg.norm(lam) ** 2)
    if abs(norm - 1.0) > NORM_REJECT:
        raise ValidationError(f"{source}: state is not normalized (Tr Lambda^dagger Lambda = {norm:.12g})")
    try:
        state = TwoParticleState.normalized(species, lam)
    except PydanticValidationError as e:
        raise ValidationError(f"{source}: {e.errors()[0]['msg']}") from e
    logger.debug("parse_state: %s N=%d from %s", species.value, dim, source)
    return state


def format_state(state: TwoParticleState) -> str:
    return f"{state.species.value} {state.dim}\n" + format_matrix(state.lam)


def read_state(path: PathLike) -> TwoParticleState:
    path = Path(path)
    return parse_state(path.read_text(), str(path))


def write_state(path: PathLike, state: TwoParticleState) -> None:
    Path(path).write_text(format_state(state))
