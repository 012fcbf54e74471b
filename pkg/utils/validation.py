#!/usr/bin/env python3
"""
Validation utilities for matrices, probability lists and pair labels
"""

from typing import Iterable, Sequence, Tuple

import numpy as np

from utils.errors import ValidationError


def validate_square(matrix: np.ndarray) -> bool:
    """
    Check whether an array is a non-empty square matrix

    Args:
        matrix (np.ndarray): Array to check

    Returns:
        bool: Whether the array is 2-D, square and non-empty
    """
    return matrix.ndim == 2 and matrix.shape[0] == matrix.shape[1] and matrix.shape[0] >= 1


def validate_finite(matrix: np.ndarray) -> bool:
    """
    Check that an array holds no NaN or Inf entries

    Args:
        matrix (np.ndarray): Array to check

    Returns:
        bool: Whether every entry is finite
    """
    return bool(np.all(np.isfinite(matrix)))


def require_square(matrix: np.ndarray, what: str = "matrix") -> None:
    if not validate_square(matrix):
        raise ValidationError(f"{what} must be square, got shape {matrix.shape}")


def require_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValidationError(f"shape mismatch: {a.shape} vs {b.shape}")


def relative_defect(defect: np.ndarray, reference: np.ndarray) -> float:
    """
    Frobenius norm of a defect relative to the norm of a reference matrix

    Args:
        defect (np.ndarray): Residual matrix
        reference (np.ndarray): Matrix whose norm sets the scale

    Returns:
        float: ||defect||_F / ||reference||_F, or the absolute norm when the
        reference vanishes
    """
    scale = np.linalg.norm(reference)
    value = float(np.linalg.norm(defect))
    return value / scale if scale > 0 else value


def hermiticity_defect(matrix: np.ndarray) -> float:
    return relative_defect(matrix - matrix.conj().T, matrix)


def symmetry_defect(matrix: np.ndarray, parity: int) -> float:
    """
    Relative distance of a matrix from (anti)symmetry

    Args:
        matrix (np.ndarray): Square matrix
        parity (int): +1 for symmetric, -1 for antisymmetric

    Returns:
        float: ||M - parity * M^T||_F / ||M||_F
    """
    return relative_defect(matrix - parity * matrix.T, matrix)


def require_probabilities(
    values: Iterable[float],
    norm_tol: float = 1e-8,
    negative_tol: float = 1e-12,
) -> np.ndarray:
    """
    Validate a probability list and clamp roundoff negatives to zero

    Args:
        values (Iterable[float]): Candidate probabilities
        norm_tol (float): Allowed deviation of the sum from one
        negative_tol (float): Magnitude below which negatives count as roundoff

    Returns:
        np.ndarray: The probabilities as a float array, negatives clamped
    """
    p = np.asarray(list(values), dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValidationError("probability list must be a non-empty sequence")
    if not validate_finite(p):
        raise ValidationError("probability list contains non-finite values")
    if np.any(p < -negative_tol):
        raise ValidationError(f"negative probability {p.min():.3e}")
    p = np.clip(p, 0.0, None)
    total = p.sum()
    if abs(total - 1.0) > norm_tol:
        raise ValidationError(f"probabilities sum to {total:.12g}, expected 1")
    return p


def validate_pair(pair: Sequence[int], upper: int) -> bool:
    """
    Check a label pair (r, s) with 1 <= r, s <= upper and r != s

    Args:
        pair (Sequence[int]): Two integer labels
        upper (int): Largest admissible label

    Returns:
        bool: Whether the pair is admissible
    """
    if len(pair) != 2:
        return False
    r, s = pair
    return 1 <= r <= upper and 1 <= s <= upper and r != s


def require_pair(pair: Sequence[int], upper: int) -> Tuple[int, int]:
    if not validate_pair(pair, upper):
        raise ValidationError(f"invalid label pair {tuple(pair)} for N={upper}")
    return int(pair[0]), int(pair[1])
