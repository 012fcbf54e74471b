#!/usr/bin/env python3
"""
Two-identical-particle wavefunctions in a finite site basis, their
generalized Schmidt decomposition, reduced density operators and entropies

A state is psi = sum_mn lambda_mn omega_m (x) omega_n with Lambda symmetric
for bosons and antisymmetric for fermions, normalized as Tr(Lambda^dagger
Lambda) = 1.
"""

import logging
from enum import Enum
from typing import Any, Dict, Mapping, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from scipy.special import entr

from linalg.canonical import (
    Parity,
    antisym_canonical,
    canonical_spectrum,
    takagi,
)
from linalg.matrix_core import (
    TOL_SYM,
    ComplexMatrix,
    as_complex_matrix,
    frozen,
    is_unitary,
)
from utils.errors import ValidationError
from utils.validation import (
    hermiticity_defect,
    require_probabilities,
    require_square,
    symmetry_defect,
)

logger = logging.getLogger(__name__)

TOL_NORM = 1e-10
TOL_OCCUPATION_NORM = 1e-8
TOL_PSD = 1e-12


class Species(str, Enum):
    BOSON = "boson"
    FERMION = "fermion"

    @property
    def parity(self) -> Parity:
        return Parity.SYMMETRIC if self is Species.BOSON else Parity.ANTISYMMETRIC


class TwoParticleState(BaseModel):
    """
    Normalized two-particle state given by its coefficient matrix Lambda
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    species: Species
    dim: int
    lam: np.ndarray

    @model_validator(mode="before")
    @classmethod
    def _coefficients(cls, data: Dict[str, Any]) -> Dict[str, Any]:
        data = dict(data)
        species = Species(data["species"])
        lam = as_complex_matrix(data["lam"])
        require_square(lam, "coefficient matrix")
        dim = int(data.get("dim", lam.shape[0]))
        if dim != lam.shape[0]:
            raise ValidationError(f"dimension {dim} does not match Lambda of shape {lam.shape}")
        if species is Species.FERMION and dim < 2:
            raise ValidationError("no antisymmetric two-fermion state exists for dimension 1")

        parity = int(species.parity)
        defect = symmetry_defect(lam, parity)
        if defect > TOL_SYM:
            raise ValidationError(f"Lambda violates {species.value} symmetry (defect {defect:.3e})")
        lam = 0.5 * (lam + parity * lam.T)

        norm = float(np.linalg.norm(lam) ** 2)
        if abs(norm - 1.0) > TOL_NORM:
            raise ValidationError(f"state is not normalized: Tr(Lambda^dagger Lambda) = {norm:.12g}")
        data.update(species=species, dim=dim, lam=frozen(lam))
        return data

    @classmethod
    def normalized(cls, species: Union[Species, str], lam: Any) -> "TwoParticleState":
        """
        Build a state after rescaling Lambda to unit norm

        Args:
            species (Species | str): boson or fermion
            lam (Any): Nonzero coefficient matrix

        Returns:
            TwoParticleState: The normalized state
        """
        lam = np.asarray(lam, dtype=np.complex128)
        norm = np.linalg.norm(lam)
        if norm == 0:
            raise ValidationError("cannot normalize the zero vector")
        return cls(species=species, lam=lam / norm)

    def gram(self) -> ComplexMatrix:
        return self.lam.conj().T @ self.lam

    def overlap(self, other: "TwoParticleState") -> complex:
        return complex(np.vdot(self.lam, other.lam))

    def require_compatible(self, species: Species, dim: int) -> None:
        if self.species is not species:
            raise ValidationError(f"species mismatch: state is {self.species.value}, expected {species.value}")
        if self.dim != dim:
            raise ValidationError(f"dimension mismatch: state has N={self.dim}, expected N={dim}")


class SchmidtDecomposition(BaseModel):
    """
    Generalized Schmidt decomposition: row r of modes defines
    phi_r = sum_m modes[r, m] omega_m, carrying probability p_r
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    species: Species
    modes: np.ndarray
    probabilities: np.ndarray

    @field_validator("modes", mode="before")
    @classmethod
    def _unitary(cls, value: Any) -> np.ndarray:
        value = np.asarray(value, dtype=np.complex128)
        if not is_unitary(value, 1e-10):
            raise ValueError("Schmidt modes are not unitary")
        return frozen(value)

    @field_validator("probabilities", mode="before")
    @classmethod
    def _normalized(cls, value: Any) -> np.ndarray:
        return frozen(require_probabilities(value, norm_tol=TOL_NORM, negative_tol=TOL_PSD))

    @model_validator(mode="after")
    def _paired(self) -> "SchmidtDecomposition":
        if self.modes.shape[0] != self.probabilities.size:
            raise ValueError("mode count does not match probability count")
        if self.species is Species.FERMION:
            p = self.probabilities
            pairs = p.size // 2
            if not np.allclose(p[0 : 2 * pairs : 2], p[1 : 2 * pairs : 2], rtol=0, atol=1e-10):
                raise ValueError("fermion probabilities must come in equal pairs")
        return self

    @property
    def support(self) -> int:
        return int(np.count_nonzero(self.probabilities))


class ReducedDensity(BaseModel):
    """
    One-particle reduced density operator in the site basis
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    rho: np.ndarray

    @field_validator("rho", mode="before")
    @classmethod
    def _density(cls, value: Any) -> np.ndarray:
        rho = as_complex_matrix(value)
        require_square(rho, "density matrix")
        if hermiticity_defect(rho) > TOL_SYM:
            raise ValueError("density matrix is not Hermitian")
        rho = 0.5 * (rho + rho.conj().T)
        if abs(np.trace(rho).real - 1.0) > TOL_NORM:
            raise ValueError(f"density matrix trace {np.trace(rho).real:.12g} differs from 1")
        if np.linalg.eigvalsh(rho).min() < -TOL_PSD:
            raise ValueError("density matrix is not positive semidefinite")
        return frozen(rho)

    def eigenvalues(self) -> np.ndarray:
        return np.clip(np.linalg.eigvalsh(self.rho)[::-1], 0.0, None)

    def von_neumann_entropy(self) -> float:
        return von_neumann_entropy(self.eigenvalues() / self.eigenvalues().sum())

    def linear_entropy(self) -> float:
        return float(1.0 - np.linalg.norm(self.rho) ** 2)


def _parse_pattern(pattern: Sequence[int], species: Species, dim: int) -> Tuple[int, int]:
    occupation = tuple(int(k) for k in pattern)
    if len(occupation) != dim or any(k < 0 for k in occupation) or sum(occupation) != 2:
        raise ValidationError(f"unknown occupation pattern {tuple(pattern)} for N={dim}")
    sites = [m for m, k in enumerate(occupation) for _ in range(k)]
    if sites[0] == sites[1] and species is Species.FERMION:
        raise ValidationError(f"double occupancy {tuple(pattern)} is forbidden for fermions")
    return sites[0], sites[1]


def state_from_occupation(
    species: Union[Species, str],
    dim: int,
    amplitudes: Mapping[Sequence[int], complex],
) -> TwoParticleState:
    """
    Build Lambda from occupation-number amplitudes

    A pattern is an occupation tuple of length dim, e.g. (1, 1, 0, 0) for
    b_1^dagger b_2^dagger |0> or (2, 0, 0, 0) for a doubly occupied boson
    site. Singly occupied pairs spread their amplitude a as a / sqrt(2) over
    lambda_mn and +-lambda_nm, so that ||psi|| = 1 iff Tr(Lambda^dagger Lambda) = 1.

    Args:
        species (Species | str): boson or fermion
        dim (int): One-particle dimension N
        amplitudes (Mapping): Occupation tuple -> complex amplitude

    Returns:
        TwoParticleState: The state, renormalized to unit norm
    """
    species = Species(species)
    lam = np.zeros((dim, dim), dtype=np.complex128)
    weight = 0.0
    sign = int(species.parity)
    for pattern, amplitude in amplitudes.items():
        m, n = _parse_pattern(pattern, species, dim)
        amplitude = complex(amplitude)
        weight += abs(amplitude) ** 2
        if m == n:
            lam[m, m] += amplitude
        else:
            lam[m, n] += amplitude / np.sqrt(2.0)
            lam[n, m] += sign * amplitude / np.sqrt(2.0)
    if weight == 0.0:
        raise ValidationError("occupation amplitudes describe the zero vector")
    if abs(weight - 1.0) > TOL_OCCUPATION_NORM:
        raise ValidationError(f"occupation amplitudes have squared norm {weight:.12g}, expected 1")
    return TwoParticleState.normalized(species, lam)


def schmidt_probabilities(state: TwoParticleState) -> np.ndarray:
    """Eigenvalues of Lambda^dagger Lambda, descending, without factorizing"""
    return canonical_spectrum(state.lam, state.species.parity)


def schmidt_decompose(state: TwoParticleState) -> SchmidtDecomposition:
    """
    Generalized Schmidt decomposition of a two-particle state

    Args:
        state (TwoParticleState): Valid state

    Returns:
        SchmidtDecomposition: Modes and probabilities; fermion probabilities
        are listed as equal pairs p_2j = p_2j+1 = z_j^2
    """
    if state.species is Species.BOSON:
        result = takagi(state.lam)
        probabilities = result.d**2
        modes = result.u
    else:
        result = antisym_canonical(state.lam)
        paired = np.repeat(result.blocks**2, 2)
        probabilities = np.concatenate([paired, np.zeros(result.null_dim)])
        modes = result.u
    logger.debug("schmidt_decompose: %s N=%d", state.species.value, state.dim)
    return SchmidtDecomposition(species=state.species, modes=modes, probabilities=probabilities)


def schmidt_reconstruct(decomposition: SchmidtDecomposition) -> TwoParticleState:
    """
    Rebuild the coefficient matrix from modes and probabilities

    Args:
        decomposition (SchmidtDecomposition): A decomposition

    Returns:
        TwoParticleState: The state sum_r sqrt(p_r) phi_r (x) phi_r (bosons)
        or the block form over mode pairs (fermions)
    """
    u = decomposition.modes
    root = np.sqrt(decomposition.probabilities)
    if decomposition.species is Species.BOSON:
        lam = u.T @ np.diag(root) @ u
    else:
        core = np.zeros(u.shape, dtype=np.complex128)
        for j in range(root.size // 2):
            core[2 * j, 2 * j + 1] = root[2 * j]
            core[2 * j + 1, 2 * j] = -root[2 * j]
        lam = u.T @ core @ u
    return TwoParticleState.normalized(decomposition.species, lam)


def _projector_sum(rows: np.ndarray, weights: np.ndarray) -> np.ndarray:
    return rows.T @ np.diag(weights) @ rows.conj()


def reduced_densities(state: TwoParticleState) -> Tuple[ReducedDensity, ReducedDensity]:
    """
    Reduced density operators sigma and tau built from the Schmidt modes

    For fermions the even mode of each pair goes to sigma and the odd one to
    tau, each with weight 2 p so that both have unit trace.

    Args:
        state (TwoParticleState): Valid state

    Returns:
        tuple: (sigma, tau)
    """
    decomposition = schmidt_decompose(state)
    u, p = decomposition.modes, decomposition.probabilities
    if state.species is Species.BOSON:
        sigma = ReducedDensity(rho=_projector_sum(u, p))
        return sigma, sigma
    pairs = p.size // 2
    even = slice(0, 2 * pairs, 2)
    odd = slice(1, 2 * pairs, 2)
    sigma = ReducedDensity(rho=_projector_sum(u[even], 2.0 * p[even]))
    tau = ReducedDensity(rho=_projector_sum(u[odd], 2.0 * p[odd]))
    return sigma, tau


def von_neumann_entropy(probabilities: Sequence[float]) -> float:
    """
    -sum p ln p in nats, with 0 ln 0 = 0

    Args:
        probabilities (Sequence[float]): Nonnegative values summing to one

    Returns:
        float: The entropy
    """
    p = require_probabilities(probabilities, norm_tol=TOL_OCCUPATION_NORM, negative_tol=TOL_PSD)
    return float(entr(p).sum())


def linear_entropy(source: Union[TwoParticleState, Sequence[float]]) -> float:
    """
    Linear entropy 1 - sum p^2

    A state is handled without factorization as 1 - Tr[(Lambda^dagger Lambda)^2].

    Args:
        source (TwoParticleState | Sequence[float]): State or probability list

    Returns:
        float: Value in [0, 1)
    """
    if isinstance(source, TwoParticleState):
        gram = source.gram()
        return float(1.0 - np.linalg.norm(gram) ** 2)
    p = require_probabilities(source, norm_tol=TOL_OCCUPATION_NORM, negative_tol=TOL_PSD)
    return float(1.0 - np.dot(p, p))
