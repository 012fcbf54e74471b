#!/usr/bin/env python3
"""
Two-particle spectra of quadratic hopping Hamiltonians
H = sign * sum_jk t_jk b_j^dagger b_k, projection of states onto the
(degenerate) energy levels and eigenbasis time evolution
"""

import logging
from typing import Any, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from entanglement.two_particle import Species, TwoParticleState, linear_entropy
from linalg.matrix_core import (
    TOL_RESID,
    TOL_SYM,
    HermitianEig,
    as_complex_matrix,
    frozen,
    hermitian_eig,
)
from utils.errors import EntanglementError, ValidationError
from utils.validation import hermiticity_defect, relative_defect, require_square

logger = logging.getLogger(__name__)

# degeneracy grouping threshold relative to the spectral range, or to the
# hopping scale when the range itself is rounding noise
GROUP_REL = 1e-8
# projections with smaller weight are discarded
P_FLOOR = 1e-14


class HoppingModel(BaseModel):
    """
    Hopping matrix t (Hermitian) and the overall sign of the Hamiltonian

    An exact one-particle eigenbasis may be attached; it is used instead of
    a numerical diagonalization, which fixes the basis inside degenerate
    one-particle levels.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    t: np.ndarray
    sign: int = -1
    basis: Optional[HermitianEig] = None

    @field_validator("t", mode="before")
    @classmethod
    def _hermitian(cls, value: Any) -> np.ndarray:
        t = as_complex_matrix(value)
        require_square(t, "hopping matrix")
        defect = hermiticity_defect(t)
        if defect > TOL_SYM:
            raise ValueError(f"hopping matrix is not Hermitian (defect {defect:.3e})")
        return frozen(0.5 * (t + t.conj().T))

    @field_validator("sign")
    @classmethod
    def _sign(cls, value: int) -> int:
        if value not in (-1, 1):
            raise ValueError("sign must be +1 or -1")
        return value

    @model_validator(mode="after")
    def _basis_diagonalizes(self) -> "HoppingModel":
        if self.basis is not None:
            if self.basis.dim != self.dim:
                raise ValueError("eigenbasis dimension does not match the hopping matrix")
            vecs, vals = self.basis.eigenvectors, self.basis.eigenvalues
            if relative_defect(self.t @ vecs - vecs * vals, self.t) > TOL_RESID:
                raise ValueError("attached basis does not diagonalize the hopping matrix")
        return self

    @classmethod
    def from_graph(
        cls,
        graph: nx.Graph,
        sign: int = -1,
        onsite: Union[float, Sequence[float]] = 0.0,
        weight: str = "weight",
    ) -> "HoppingModel":
        """
        Hopping matrix from a weighted graph

        Args:
            graph (nx.Graph): Sites as nodes, hopping amplitudes as edge weights
                (edges without the attribute count as 1)
            sign (int): Overall sign of the Hamiltonian
            onsite (float | Sequence[float]): Diagonal entries t_jj
            weight (str): Edge attribute holding the amplitude

        Returns:
            HoppingModel: The model, sites ordered as graph.nodes
        """
        graph = nx.Graph(graph)
        graph.remove_edges_from(list(nx.selfloop_edges(graph)))
        t = nx.to_numpy_array(graph, weight=weight, dtype=np.complex128)
        t = t + np.diag(np.broadcast_to(np.asarray(onsite, dtype=float), t.shape[0]))
        return cls(t=t, sign=sign)

    @property
    def dim(self) -> int:
        return int(self.t.shape[0])

    def one_particle(self) -> HermitianEig:
        return self.basis if self.basis is not None else hermitian_eig(self.t)


class SpectralLevel(BaseModel):
    """One energy level: its energy and the one-particle index pairs (a, b) spanning it"""

    model_config = ConfigDict(frozen=True)

    energy: float
    pairs: Tuple[Tuple[int, int], ...]


class SpectralDecomposition(BaseModel):
    """
    Energy levels of the two-particle Hamiltonian in one symmetry sector

    The level projectors F_n act diagonally in the product eigenbasis
    phi_a (x) phi_b: in the coefficients C = V^dagger Lambda conj(V) they
    keep the entries whose pair (a, b) belongs to level n.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    species: Species
    sign: int
    one_particle: HermitianEig
    levels: Tuple[SpectralLevel, ...]
    nondegenerate: bool = False
    group_tol: float = 0.0

    @model_validator(mode="after")
    def _levels(self) -> "SpectralDecomposition":
        if not self.levels:
            raise ValueError("spectrum has no levels")
        energies = np.array([level.energy for level in self.levels])
        if not self.nondegenerate and np.any(np.diff(energies) <= self.group_tol):
            raise ValueError("level energies must increase by more than the grouping tolerance")
        seen = [pair for level in self.levels for pair in level.pairs]
        if len(seen) != len(set(seen)) or len(seen) != len(_sector_pairs(self.species, self.dim)):
            raise ValueError("levels must partition the symmetry sector")
        return self

    @property
    def dim(self) -> int:
        return self.one_particle.dim

    @property
    def energies(self) -> np.ndarray:
        return np.array([level.energy for level in self.levels])

    def level_index(self) -> np.ndarray:
        """N x N map from pair (a, b) to its level, -1 outside the sector"""
        index = np.full((self.dim, self.dim), -1, dtype=int)
        for n, level in enumerate(self.levels):
            for a, b in level.pairs:
                index[a, b] = index[b, a] = n
        return index

    def energy_matrix(self) -> np.ndarray:
        index = self.level_index()
        return np.where(index >= 0, self.energies[np.maximum(index, 0)], 0.0)

    def to_eigenbasis(self, lam: np.ndarray) -> np.ndarray:
        vecs = self.one_particle.eigenvectors
        return vecs.conj().T @ lam @ vecs.conj()

    def from_eigenbasis(self, coefficients: np.ndarray) -> np.ndarray:
        vecs = self.one_particle.eigenvectors
        return vecs @ coefficients @ vecs.T

    def pair_state(self, a: int, b: int) -> np.ndarray:
        """Normalized coefficient matrix of the product eigenstate for pair (a, b)"""
        vecs = self.one_particle.eigenvectors
        if a == b:
            return np.outer(vecs[:, a], vecs[:, a])
        parity = 1 if self.species is Species.BOSON else -1
        return (np.outer(vecs[:, a], vecs[:, b]) + parity * np.outer(vecs[:, b], vecs[:, a])) / np.sqrt(2.0)

    def projector(self, n: int) -> np.ndarray:
        """
        Materialize F_n on the N^2-dimensional coefficient space

        Args:
            n (int): Level index

        Returns:
            np.ndarray: Hermitian idempotent N^2 x N^2 matrix
        """
        columns = [self.pair_state(a, b).reshape(-1) for a, b in self.levels[n].pairs]
        basis = np.column_stack(columns)
        return basis @ basis.conj().T

    def sector_projector(self) -> np.ndarray:
        n = self.dim
        swap = np.eye(n * n).reshape(n, n, n, n).transpose(0, 1, 3, 2).reshape(n * n, n * n)
        parity = 1 if self.species is Species.BOSON else -1
        return 0.5 * (np.eye(n * n) + parity * swap)


class LevelComponent(BaseModel):
    """Normalized projection F_n psi / ||F_n psi|| with its weight"""

    model_config = ConfigDict(frozen=True)

    level: int
    energy: float
    weight: float
    state: TwoParticleState


class StateProjection(BaseModel):
    """Decomposition psi = sum_n sqrt(p_n) psi'_n over energy levels"""

    model_config = ConfigDict(frozen=True)

    components: Tuple[LevelComponent, ...]
    discarded_weight: float = 0.0

    @model_validator(mode="after")
    def _normalized(self) -> "StateProjection":
        if not self.components:
            raise ValueError("projection is empty")
        total = sum(component.weight for component in self.components)
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"projection weights sum to {total:.12g}")
        return self

    @property
    def weights(self) -> np.ndarray:
        return np.array([component.weight for component in self.components])

    def stacked(self) -> np.ndarray:
        return np.stack([component.state.lam for component in self.components])

    def reassemble(self, phases: Optional[Sequence[float]] = None) -> np.ndarray:
        """sum_n sqrt(p_n) exp(i chi_n) Lambda'_n, with chi = 0 by default"""
        chi = np.zeros(len(self.components)) if phases is None else np.asarray(phases, dtype=float)
        amplitudes = np.sqrt(self.weights) * np.exp(1j * chi)
        return np.tensordot(amplitudes, self.stacked(), axes=1)


def _sector_pairs(species: Species, dim: int) -> List[Tuple[int, int]]:
    offset = 0 if species is Species.BOSON else 1
    return [(a, b) for a in range(dim) for b in range(a + offset, dim)]


def _group(energies: np.ndarray, tol: float) -> List[List[int]]:
    order = np.argsort(energies, kind="stable")
    groups: List[List[int]] = []
    for index in order:
        if groups and energies[index] - energies[groups[-1][-1]] <= tol:
            groups[-1].append(int(index))
        else:
            groups.append([int(index)])
    return groups


def two_particle_spectrum(
    model: HoppingModel,
    species: Union[Species, str],
    nondegenerate: bool = False,
    group_tol: Optional[float] = None,
) -> SpectralDecomposition:
    """
    Energy levels of two identical particles under a hopping Hamiltonian

    Pair energies are sign * (eps_a + eps_b) over a < b (fermions) or a <= b
    (bosons). Each product eigenstate obeys sign * (t Lambda + Lambda t^T) =
    E Lambda with a residual bounded by twice the largest one-particle
    residual, which is checked here.

    Args:
        model (HoppingModel): The hopping model
        species (Species | str): boson or fermion
        nondegenerate (bool): One level per pair even when energies coincide
        group_tol (float, optional): Override of the grouping threshold

    Returns:
        SpectralDecomposition: Levels sorted by energy
    """
    species = Species(species)
    eig = model.one_particle()
    eps, vecs = eig.eigenvalues, eig.eigenvectors

    column_residual = np.linalg.norm(model.t @ vecs - vecs * eps, axis=0)
    scale = max(1.0, float(np.linalg.norm(model.t)))
    if 2.0 * column_residual.max() > TOL_RESID * scale:
        raise EntanglementError("two-particle eigen-relation residual above tolerance")

    pairs = _sector_pairs(species, model.dim)
    if not pairs:
        raise ValidationError(f"no two-{species.value} sector for N={model.dim}")
    energies = np.array([model.sign * (eps[a] + eps[b]) for a, b in pairs])

    spread = float(energies.max() - energies.min())
    floor = max(1.0, float(np.abs(model.t).max()))
    tol = float(group_tol) if group_tol is not None else GROUP_REL * max(spread, floor)
    if nondegenerate:
        groups = [[int(i)] for i in np.argsort(energies, kind="stable")]
    else:
        groups = _group(energies, tol)

    levels = tuple(
        SpectralLevel(
            energy=float(np.mean(energies[group])),
            pairs=tuple(pairs[i] for i in group),
        )
        for group in groups
    )
    logger.debug("two_particle_spectrum: %s N=%d, %d levels", species.value, model.dim, len(levels))
    return SpectralDecomposition(
        species=species,
        sign=model.sign,
        one_particle=eig,
        levels=levels,
        nondegenerate=nondegenerate,
        group_tol=tol,
    )


def project_state(
    state: TwoParticleState,
    spectrum: SpectralDecomposition,
    p_floor: float = P_FLOOR,
) -> StateProjection:
    """
    Project a state onto the energy levels

    Args:
        state (TwoParticleState): State of matching species and dimension
        spectrum (SpectralDecomposition): Levels to project on
        p_floor (float): Weights below this are dropped and renormalized away

    Returns:
        StateProjection: Components with p_n = ||F_n psi||^2
    """
    state.require_compatible(spectrum.species, spectrum.dim)
    coefficients = spectrum.to_eigenbasis(state.lam)
    index = spectrum.level_index()
    inside = index >= 0
    weights = np.bincount(
        index[inside], weights=np.abs(coefficients[inside]) ** 2, minlength=len(spectrum.levels)
    )

    kept = [n for n in range(len(spectrum.levels)) if weights[n] >= p_floor]
    if not kept:
        raise ValidationError("state has no weight on any energy level")
    discarded = float(weights.sum() - weights[kept].sum())
    total = float(weights[kept].sum())

    components = []
    for n in kept:
        lam = spectrum.from_eigenbasis(np.where(index == n, coefficients, 0.0))
        components.append(
            LevelComponent(
                level=n,
                energy=spectrum.levels[n].energy,
                weight=float(weights[n] / total),
                state=TwoParticleState.normalized(state.species, lam),
            )
        )
    if discarded > 0:
        logger.debug("project_state: discarded weight %.3e", discarded)
    return StateProjection(components=tuple(components), discarded_weight=discarded)


def evolve(state: TwoParticleState, spectrum: SpectralDecomposition, time: float) -> TwoParticleState:
    """
    Evolve a state by exp(-i H time), one phase per level

    Args:
        state (TwoParticleState): State of matching species and dimension
        spectrum (SpectralDecomposition): Levels of H
        time (float): Evolution time

    Returns:
        TwoParticleState: The evolved state
    """
    state.require_compatible(spectrum.species, spectrum.dim)
    coefficients = spectrum.to_eigenbasis(state.lam)
    phases = np.exp(-1j * spectrum.energy_matrix() * float(time))
    return TwoParticleState.normalized(state.species, spectrum.from_eigenbasis(coefficients * phases))


def e1_trajectory(
    state: TwoParticleState,
    spectrum: SpectralDecomposition,
    times: Iterable[float],
) -> List[Tuple[float, float]]:
    """
    Linear entropy along the evolution

    Args:
        state (TwoParticleState): Initial state
        spectrum (SpectralDecomposition): Levels of H
        times (Iterable[float]): Sample times

    Returns:
        list: (t, E1(t)) pairs in the order of times
    """
    return [(float(t), linear_entropy(evolve(state, spectrum, t))) for t in times]
