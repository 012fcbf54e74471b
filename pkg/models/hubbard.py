#!/usr/bin/env python3
"""
Two spin-polarized electrons on a Hubbard ring with nearest-neighbour
hopping, H = -sum_jk t_jk b_j^dagger b_k

Momentum labels r, s run over 1..N with theta(m) = exp(2 pi i m / N); sites
are 0..N-1 internally (site N is identified with site 0).
"""

import itertools
import logging
from typing import Dict, Mapping, Optional, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from entanglement.spectrum import HoppingModel
from entanglement.two_particle import Species, TwoParticleState
from linalg.matrix_core import HermitianEig
from utils.errors import ValidationError
from utils.validation import require_pair

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


def theta(n_sites: int, m: np.ndarray) -> np.ndarray:
    return np.exp(2j * np.pi * np.asarray(m) / n_sites)


def _require_sites(n_sites: int) -> None:
    if n_sites < 3:
        raise ValidationError(f"the ring needs at least 3 sites, got N={n_sites}")


def plane_wave_basis(n_sites: int) -> HermitianEig:
    """
    Exact one-particle eigenbasis of the ring hopping matrix

    Column for label r has components theta(m r) / sqrt(N) and eigenvalue
    2 cos(2 pi r / N); columns are sorted by eigenvalue, ties by label.
    """
    labels = np.arange(1, n_sites + 1)
    # r and N - r share one eigenvalue; evaluate it once so ties are exact
    values = 2.0 * np.cos(2.0 * np.pi * np.minimum(labels, n_sites - labels) / n_sites)
    order = np.lexsort((labels, values))
    sites = np.arange(n_sites)
    vectors = theta(n_sites, np.outer(sites, labels[order])) / np.sqrt(n_sites)
    return HermitianEig(eigenvalues=values[order], eigenvectors=vectors)


class HubbardRing(BaseModel):
    """Periodic ring of N sites with unit nearest-neighbour hopping"""

    model_config = ConfigDict(frozen=True)

    sites: int = Field(ge=3)
    p: float = Field(default=0.5, ge=0.0, le=1.0)

    species: Species = Species.FERMION

    def hopping_graph(self) -> nx.Graph:
        return nx.cycle_graph(self.sites)

    def hopping_model(self) -> HoppingModel:
        t = nx.to_numpy_array(self.hopping_graph(), dtype=np.complex128)
        return HoppingModel(t=t, sign=-1, basis=plane_wave_basis(self.sites))

    def initial_state(self) -> TwoParticleState:
        """sqrt(p) psi^(1,N) + sqrt(1-p) psi^(2,N-1), or psi^(1,N) when N = 3"""
        n = self.sites
        if n == 3:
            return hubbard_eigenstate(n, 1, n)
        return hubbard_superposition(n, {(1, n): self.p, (2, n - 1): 1.0 - self.p})

    def describe(self) -> str:
        return f"hubbard:N={self.sites},p={self.p:g}"


def hubbard_eigenstate(n_sites: int, r: int, s: int) -> TwoParticleState:
    """
    Two-fermion eigenstate with momentum labels (r, s)

    lambda_mn = [theta(m r + n s) - theta(n r + m s)] / (N sqrt 2)

    Args:
        n_sites (int): Ring size N >= 3
        r (int): First label, 1..N
        s (int): Second label, 1..N, different from r

    Returns:
        TwoParticleState: Normalized antisymmetric eigenstate
    """
    _require_sites(n_sites)
    r, s = require_pair((r, s), n_sites)
    m, n = np.meshgrid(np.arange(n_sites), np.arange(n_sites), indexing="ij")
    lam = (theta(n_sites, m * r + n * s) - theta(n_sites, n * r + m * s)) / (n_sites * np.sqrt(2.0))
    return TwoParticleState(species=Species.FERMION, lam=lam)


def hubbard_energy(n_sites: int, r: int, s: int) -> float:
    """E^(rs) = -2 Re theta(r) - 2 Re theta(s)"""
    _require_sites(n_sites)
    r, s = require_pair((r, s), n_sites)
    return float(-2.0 * np.cos(2 * np.pi * r / n_sites) - 2.0 * np.cos(2 * np.pi * s / n_sites))


class CrossTrace(BaseModel):
    model_config = ConfigDict(frozen=True)

    closed_form: float
    direct: float

    @property
    def difference(self) -> float:
        return abs(self.closed_form - self.direct)


def hubbard_cross_trace(n_sites: int, pair: Pair, other: Pair) -> CrossTrace:
    """
    Tr[(Lambda^(rs)^dagger Lambda^(rs)) (Lambda^(r's')^dagger Lambda^(r's'))]
    computed directly and as (1/4)[d_ss' + d_rr' + d_rs' + d_sr']

    Args:
        n_sites (int): Ring size
        pair (Pair): (r, s)
        other (Pair): (r', s')

    Returns:
        CrossTrace: Both values
    """
    r, s = require_pair(pair, n_sites)
    r2, s2 = require_pair(other, n_sites)
    closed = 0.25 * ((s == s2) + (r == r2) + (r == s2) + (s == r2))
    first = hubbard_eigenstate(n_sites, r, s).gram()
    second = hubbard_eigenstate(n_sites, r2, s2).gram()
    return CrossTrace(closed_form=float(closed), direct=float(np.trace(first @ second).real))


def _unordered_weights(n_sites: int, weights: Mapping[Pair, float]) -> Dict[frozenset, float]:
    result: Dict[frozenset, float] = {}
    for pair, weight in weights.items():
        r, s = require_pair(pair, n_sites)
        key = frozenset((r, s))
        if key in result:
            raise ValidationError(f"label pair {{{r}, {s}}} given twice")
        if weight < 0:
            raise ValidationError(f"negative weight {weight} for pair ({r}, {s})")
        result[key] = float(weight)
    total = sum(result.values())
    if abs(total - 1.0) > 1e-10:
        raise ValidationError(f"pair weights sum to {total:.12g}, expected 1")
    return result


def hubbard_average_closed_form(n_sites: int, weights: Mapping[Pair, float]) -> float:
    """
    Average linear entropy of sum sqrt(p_rs) psi^(rs) when each psi^(rs) is
    its own level: 1/2 plus p_A p_B summed once over every unordered couple
    of disjoint label pairs {A, B}

    Args:
        n_sites (int): Ring size
        weights (Mapping[Pair, float]): p_rs on distinct unordered pairs, summing to 1

    Returns:
        float: The average
    """
    _require_sites(n_sites)
    table = _unordered_weights(n_sites, weights)
    restricted = sum(
        table[a] * table[b] for a, b in itertools.combinations(table, 2) if not a & b
    )
    return 0.5 + restricted


def hubbard_superposition(
    n_sites: int,
    weights: Mapping[Pair, float],
    phases: Optional[Mapping[Pair, float]] = None,
) -> TwoParticleState:
    """
    sum_rs sqrt(p_rs) exp(i chi_rs) psi^(rs)

    Args:
        n_sites (int): Ring size
        weights (Mapping[Pair, float]): Normalized weights on distinct pairs
        phases (Mapping[Pair, float], optional): Phases chi_rs, zero by default

    Returns:
        TwoParticleState: The superposition
    """
    _unordered_weights(n_sites, weights)
    phases = phases or {}
    lam = sum(
        np.sqrt(p) * np.exp(1j * phases.get(pair, 0.0)) * hubbard_eigenstate(n_sites, *pair).lam
        for pair, p in weights.items()
    )
    return TwoParticleState.normalized(Species.FERMION, lam)


def hubbard_pair_weights(state: TwoParticleState, floor: float = 1e-14) -> Dict[Pair, float]:
    """
    Weights |<psi^(rs), psi>|^2 on the momentum eigenstates, r < s

    Args:
        state (TwoParticleState): Fermion state on the ring
        floor (float): Smaller weights are omitted

    Returns:
        Dict[Pair, float]: Weights keyed by (r, s)
    """
    state.require_compatible(Species.FERMION, state.dim)
    n = state.dim
    _require_sites(n)
    weights = {}
    for r, s in itertools.combinations(range(1, n + 1), 2):
        weight = abs(hubbard_eigenstate(n, r, s).overlap(state)) ** 2
        if weight >= floor:
            weights[(r, s)] = weight
    return weights
