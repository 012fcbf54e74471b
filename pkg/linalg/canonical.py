#!/usr/bin/env python3
"""
Structured factorizations of complex symmetric and antisymmetric matrices

Both factorizations have the congruence form M = U^T D U with U unitary:
diagonal nonnegative D for symmetric M (Takagi), and 2x2 blocks
[[0, z], [-z, 0]] followed by zeros for antisymmetric M. The rows of U are
the one-particle modes of a two-particle wavefunction whose coefficient
matrix is M.
"""

import logging
from enum import IntEnum
from typing import Any, List, Tuple

import numpy as np
import scipy.linalg as la
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from linalg.matrix_core import (
    TOL_SYM,
    ComplexMatrix,
    as_complex_matrix,
    frozen,
    hermitian_eig,
    is_unitary,
)
from utils.errors import EntanglementError, ValidationError
from utils.validation import relative_defect, require_square, symmetry_defect

logger = logging.getLogger(__name__)

TOL_FACT = 1e-10
# singular values below TRUNCATION * max(d) are exact zeros
TRUNCATION = 1e-12
# singular values closer than CLUSTER_TOL * max(d) share an eigenspace of M^dagger M
CLUSTER_TOL = 1e-9


class Parity(IntEnum):
    SYMMETRIC = 1
    ANTISYMMETRIC = -1


def _prepare(matrix: Any, parity: Parity) -> ComplexMatrix:
    m = as_complex_matrix(matrix)
    require_square(m)
    defect = symmetry_defect(m, int(parity))
    if defect > TOL_SYM:
        kind = "symmetric" if parity is Parity.SYMMETRIC else "antisymmetric"
        raise ValidationError(f"matrix is not {kind} (relative defect {defect:.3e})")
    return 0.5 * (m + int(parity) * m.T)


def _largest_entry(vector: np.ndarray) -> complex:
    return vector[int(np.argmax(np.abs(vector)))]


def _orthonormal_completion(columns: np.ndarray, n: int) -> np.ndarray:
    if columns.shape[1] == 0:
        return np.eye(n, dtype=np.complex128)
    return la.null_space(columns.conj().T)


def _check_reconstruction(m: np.ndarray, u: np.ndarray, d: np.ndarray, what: str) -> None:
    residual = relative_defect(u.T @ d @ u - m, m)
    if residual > TOL_FACT:
        raise EntanglementError(f"{what}: reconstruction residual {residual:.3e} above tolerance")
    if not is_unitary(u, TOL_FACT):
        raise EntanglementError(f"{what}: mode matrix is not unitary")


class TakagiResult(BaseModel):
    """
    Takagi factorization M = U^T diag(d) U of a complex symmetric matrix
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    u: np.ndarray
    d: np.ndarray

    @field_validator("u", mode="before")
    @classmethod
    def _unitary(cls, value: Any) -> np.ndarray:
        value = np.asarray(value, dtype=np.complex128)
        if not is_unitary(value, TOL_FACT):
            raise ValueError("Takagi modes are not unitary")
        return frozen(value)

    @field_validator("d", mode="before")
    @classmethod
    def _descending(cls, value: Any) -> np.ndarray:
        value = np.asarray(value, dtype=float)
        if np.any(value < 0) or np.any(np.diff(value) > 0):
            raise ValueError("Takagi values must be nonnegative and descending")
        return frozen(value)

    @model_validator(mode="after")
    def _shapes(self) -> "TakagiResult":
        if self.u.shape[0] != self.d.size:
            raise ValueError("Takagi values and modes disagree in dimension")
        return self

    def reconstruct(self) -> ComplexMatrix:
        return self.u.T @ np.diag(self.d) @ self.u


class AntisymCanonical(BaseModel):
    """
    Canonical form M = U^T D U of a complex antisymmetric matrix, D made of
    blocks [[0, z_j], [-z_j, 0]] followed by null_dim zero rows/columns
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    u: np.ndarray
    blocks: np.ndarray
    null_dim: int

    @field_validator("u", mode="before")
    @classmethod
    def _unitary(cls, value: Any) -> np.ndarray:
        value = np.asarray(value, dtype=np.complex128)
        if not is_unitary(value, TOL_FACT):
            raise ValueError("canonical modes are not unitary")
        return frozen(value)

    @field_validator("blocks", mode="before")
    @classmethod
    def _descending(cls, value: Any) -> np.ndarray:
        value = np.asarray(value, dtype=float).reshape(-1)
        if np.any(value < 0) or np.any(np.diff(value) > 0):
            raise ValueError("block values must be nonnegative and descending")
        return frozen(value)

    @model_validator(mode="after")
    def _dimension(self) -> "AntisymCanonical":
        if 2 * self.blocks.size + self.null_dim != self.u.shape[0]:
            raise ValueError("2 * blocks + null_dim must equal the matrix dimension")
        return self

    def block_matrix(self) -> ComplexMatrix:
        n = self.u.shape[0]
        d = np.zeros((n, n), dtype=np.complex128)
        for j, z in enumerate(self.blocks):
            d[2 * j, 2 * j + 1] = z
            d[2 * j + 1, 2 * j] = -z
        return d

    def reconstruct(self) -> ComplexMatrix:
        return self.u.T @ self.block_matrix() @ self.u


class NormalReduction(BaseModel):
    """
    Reduction C = U^dagger M conj(U) of an (anti)symmetric M to a normal
    matrix of the same symmetry type, U diagonalizing M M^dagger
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    u: np.ndarray
    c: np.ndarray
    parity: Parity


def takagi(matrix: Any) -> TakagiResult:
    """
    Takagi factorization of a complex symmetric matrix

    The real symmetric embedding [[X, Y], [Y, -X]] of M = X + iY has
    eigenvalues +d_k and -d_k; an eigenvector [a; b] for +d_k gives the
    column w = a + ib with M conj(w) = d_k w, and U = W^T.

    Args:
        matrix (Any): Square matrix, symmetric within TOL_SYM

    Returns:
        TakagiResult: Unitary U and descending nonnegative d
    """
    m = _prepare(matrix, Parity.SYMMETRIC)
    n = m.shape[0]

    embedding = np.block([[m.real, m.imag], [m.imag, -m.real]])
    values, vectors = la.eigh(embedding)
    order = np.argsort(-values, kind="stable")[:n]
    d = np.array(values[order])
    w = vectors[:n, order] + 1j * vectors[n:, order]

    top = d.max() if n else 0.0
    null = d <= TRUNCATION * top if top > 0 else np.ones(n, dtype=bool)
    d[null] = 0.0
    if null.any():
        w[:, null] = _orthonormal_completion(w[:, ~null], n)
        logger.debug("takagi: %d null modes of %d", int(null.sum()), n)

    for k in range(n):
        lead = _largest_entry(w[:, k])
        if null[k]:
            w[:, k] *= np.exp(-1j * np.angle(lead))
        elif lead.real < 0:
            w[:, k] *= -1.0

    u = w.T
    _check_reconstruction(m, u, np.diag(d), "takagi")
    return TakagiResult(u=u, d=d)


def _clusters(values: np.ndarray, scale: float) -> List[List[int]]:
    groups: List[List[int]] = []
    for index, value in enumerate(values):
        if groups and abs(values[groups[-1][-1]] - value) <= CLUSTER_TOL * scale:
            groups[-1].append(index)
        else:
            groups.append([index])
    # eigenspaces of M^dagger M come in even dimensions for antisymmetric M
    merged: List[List[int]] = []
    for group in groups:
        if merged and len(merged[-1]) % 2:
            merged[-1].extend(group)
        else:
            merged.append(list(group))
    return merged


def _pair_modes(m: np.ndarray, basis: np.ndarray) -> List[Tuple[np.ndarray, np.ndarray]]:
    """
    Split an eigenspace of M^dagger M into pairs (x, y), y = conj(M x) / |M x|

    y lies in the same eigenspace and is orthogonal to x because x^T M x = 0.
    Rounding from larger singular values is projected out of y before it is
    normalized.
    """
    pairs = []
    while basis.shape[1] >= 2:
        x = basis[:, 0]
        mx = m @ x
        y = np.conj(mx)
        for _ in range(2):
            y = basis @ (basis.conj().T @ y)
            y = y - x * (x.conj() @ y)
        y = y / np.linalg.norm(y)
        pairs.append((x, y))
        remaining = basis.shape[1] - 2
        if remaining == 0:
            break
        rest = basis - np.outer(x, x.conj() @ basis) - np.outer(y, y.conj() @ basis)
        left, _, _ = la.svd(rest, full_matrices=False)
        basis = left[:, :remaining]
    return pairs


def antisym_canonical(matrix: Any) -> AntisymCanonical:
    """
    Canonical block form of a complex antisymmetric matrix

    Args:
        matrix (Any): Square matrix, antisymmetric within TOL_SYM

    Returns:
        AntisymCanonical: Unitary U, descending block values z_j, null dimension
    """
    m = _prepare(matrix, Parity.ANTISYMMETRIC)
    n = m.shape[0]

    _, singular, vh = la.svd(m)
    right = vh.conj().T
    top = singular[0] if n else 0.0
    rank = int(np.sum(singular > TRUNCATION * top)) if top > 0 else 0
    rank -= rank % 2

    columns: List[np.ndarray] = []
    for group in _clusters(singular[:rank], top):
        for x, y in _pair_modes(m, right[:, group]):
            even, odd = np.conj(y), np.conj(x)
            phase = np.exp(-1j * np.angle(_largest_entry(even)))
            columns.extend([even * phase, odd / phase])

    w = np.column_stack(columns) if columns else np.zeros((n, 0), dtype=np.complex128)
    null_dim = n - w.shape[1]
    if null_dim:
        completion = _orthonormal_completion(w, n)
        for k in range(completion.shape[1]):
            completion[:, k] *= np.exp(-1j * np.angle(_largest_entry(completion[:, k])))
        w = np.column_stack([w, completion])

    core = w.conj().T @ m @ w.conj()
    blocks = np.array([core[2 * j, 2 * j + 1].real for j in range(rank // 2)])
    order = np.argsort(-blocks, kind="stable")
    blocks = blocks[order]
    permutation = [c for j in order for c in (2 * j, 2 * j + 1)] + list(range(rank, n))
    u = w[:, permutation].T

    result = AntisymCanonical(u=u, blocks=blocks, null_dim=null_dim)
    _check_reconstruction(m, u, result.block_matrix(), "antisym_canonical")
    logger.debug("antisym_canonical: n=%d, blocks=%d, null=%d", n, blocks.size, null_dim)
    return result


def canonical_spectrum(matrix: Any, parity: Parity) -> np.ndarray:
    """
    Eigenvalues of M^dagger M without performing the factorization

    Args:
        matrix (Any): Square matrix with the given symmetry
        parity (Parity): SYMMETRIC or ANTISYMMETRIC

    Returns:
        np.ndarray: Descending eigenvalues, clamped to be nonnegative
    """
    m = _prepare(matrix, Parity(parity))
    eig = hermitian_eig(m.conj().T @ m)
    return np.clip(eig.eigenvalues[::-1], 0.0, None)


def normal_reduction(matrix: Any) -> NormalReduction:
    """
    Reduce a symmetric or antisymmetric matrix to a normal one by congruence

    Args:
        matrix (Any): Square matrix, symmetric or antisymmetric

    Returns:
        NormalReduction: U diagonalizing M M^dagger and C = U^dagger M conj(U),
        with M = U C U^T
    """
    m = as_complex_matrix(matrix)
    require_square(m)
    if symmetry_defect(m, 1) <= TOL_SYM:
        parity = Parity.SYMMETRIC
    elif symmetry_defect(m, -1) <= TOL_SYM:
        parity = Parity.ANTISYMMETRIC
    else:
        raise ValidationError("matrix is neither symmetric nor antisymmetric")
    m = _prepare(m, parity)
    u = hermitian_eig(m @ m.conj().T).eigenvectors
    c = u.conj().T @ m @ u.conj()
    return NormalReduction(u=frozen(u), c=frozen(c), parity=parity)
