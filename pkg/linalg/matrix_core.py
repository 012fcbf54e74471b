#!/usr/bin/env python3
"""
Dense complex matrix primitives: validation of matrix carriers, the Hermitian
eigendecomposition and a few distance/unitarity helpers
"""

import logging
from typing import Any

import numpy as np
import numpy.typing as npt
import scipy.linalg as la
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from utils.errors import ValidationError
from utils.validation import (
    hermiticity_defect,
    relative_defect,
    require_same_shape,
    require_square,
    validate_finite,
)

logger = logging.getLogger(__name__)

# relative tolerances, double precision
TOL_SYM = 1e-10
TOL_ORTH = 1e-10
TOL_RESID = 1e-10

ComplexMatrix = npt.NDArray[np.complex128]


def as_complex_matrix(data: Any) -> ComplexMatrix:
    """
    Copy array-like data into a read-only complex128 matrix

    Args:
        data (Any): Nested sequence or array with two dimensions

    Returns:
        ComplexMatrix: Validated matrix (rows, cols >= 1, finite entries)
    """
    matrix = np.array(data, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[0] < 1 or matrix.shape[1] < 1:
        raise ValidationError(f"expected a non-empty 2-D matrix, got shape {matrix.shape}")
    if not validate_finite(matrix):
        raise ValidationError("matrix contains NaN or Inf entries")
    matrix.setflags(write=False)
    return matrix


def frozen(array: np.ndarray) -> np.ndarray:
    copy = np.array(array)
    copy.setflags(write=False)
    return copy


class HermitianEig(BaseModel):
    """
    Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
    orthonormal eigenvectors stored as columns
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @field_validator("eigenvalues", mode="before")
    @classmethod
    def _ascending(cls, value: np.ndarray) -> np.ndarray:
        value = np.asarray(value, dtype=float)
        if value.ndim != 1:
            raise ValueError("eigenvalues must be one-dimensional")
        if np.any(np.diff(value) < 0):
            raise ValueError("eigenvalues must be sorted ascending")
        return frozen(value)

    @field_validator("eigenvectors", mode="before")
    @classmethod
    def _orthonormal(cls, value: np.ndarray) -> np.ndarray:
        value = np.asarray(value, dtype=np.complex128)
        require_square(value, "eigenvector matrix")
        if not is_unitary(value, TOL_ORTH):
            raise ValueError("eigenvectors are not orthonormal")
        return frozen(value)

    @model_validator(mode="after")
    def _shapes(self) -> "HermitianEig":
        if self.eigenvectors.shape[1] != self.eigenvalues.size:
            raise ValueError("eigenvalue count does not match eigenvector count")
        return self

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.size)

    def reconstruct(self) -> ComplexMatrix:
        vecs = self.eigenvectors
        return (vecs * self.eigenvalues) @ vecs.conj().T


def hermitian_eig(matrix: Any) -> HermitianEig:
    """
    Diagonalize a Hermitian matrix

    Args:
        matrix (Any): Square matrix, Hermitian within TOL_SYM (relative)

    Returns:
        HermitianEig: Ascending eigenvalues and orthonormal eigenvectors of
        the symmetrized matrix (H + H^dagger) / 2
    """
    h = as_complex_matrix(matrix)
    require_square(h)
    defect = hermiticity_defect(h)
    if defect > TOL_SYM:
        raise ValidationError(f"matrix is not Hermitian (relative defect {defect:.3e})")
    h = 0.5 * (h + h.conj().T)

    values, vectors = la.eigh(h)
    residual = relative_defect(h @ vectors - vectors * values, h)
    if residual > TOL_RESID:
        raise ValidationError(f"eigensolver residual {residual:.3e} above tolerance")
    logger.debug("hermitian_eig: n=%d, residual=%.2e", h.shape[0], residual)
    return HermitianEig(eigenvalues=values, eigenvectors=vectors)


def frobenius_distance(a: Any, b: Any) -> float:
    """
    Frobenius norm of the difference of two equally shaped matrices

    Args:
        a (Any): First matrix
        b (Any): Second matrix

    Returns:
        float: ||A - B||_F
    """
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    require_same_shape(a, b)
    return float(np.linalg.norm(a - b))


def is_unitary(matrix: Any, tol: float = TOL_ORTH) -> bool:
    """
    Check whether ||U^dagger U - I||_F <= tol

    Args:
        matrix (Any): Square matrix
        tol (float): Absolute tolerance on the Frobenius defect

    Returns:
        bool: Whether the matrix is unitary within tol
    """
    u = np.asarray(matrix, dtype=np.complex128)
    require_square(u)
    defect = np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0]))
    return bool(defect <= tol)
