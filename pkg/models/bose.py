#!/usr/bin/env python3
"""
Infinite-range Bose-Hubbard model: every site hops to every other with
amplitude eps, t_jk = [1 - (N-1) eps] delta_jk + eps (1 - delta_jk), H = +sum t b^dagger b

The one-particle spectrum is 1 - N eps (N-1 fold) and 1 (uniform mode), so
two bosons see only three levels: 2(1 - N eps), 2 - N eps and 2.
"""

import logging
from typing import Dict, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from entanglement.spectrum import HoppingModel, two_particle_spectrum
from entanglement.two_particle import Species, TwoParticleState, state_from_occupation
from utils.errors import ValidationError

logger = logging.getLogger(__name__)

# one-particle eigenvalues closer than this count as one multiplicity
MULTIPLICITY_TOL = 1e-9


def _require_sites(n_sites: int) -> None:
    if n_sites < 3:
        raise ValidationError(f"the infinite-range model needs N >= 3, got N={n_sites}")


class InfiniteRangeBoseModel(BaseModel):
    """Complete hopping graph with uniform amplitude eps"""

    model_config = ConfigDict(frozen=True)

    sites: int = Field(ge=3)
    eps: float = Field(default=0.1, gt=0.0)

    species: Species = Species.BOSON

    def hopping_graph(self) -> nx.Graph:
        graph = nx.complete_graph(self.sites)
        nx.set_edge_attributes(graph, self.eps, "weight")
        return graph

    def hopping_model(self) -> HoppingModel:
        onsite = 1.0 - (self.sites - 1) * self.eps
        return HoppingModel.from_graph(self.hopping_graph(), sign=1, onsite=onsite)

    def initial_state(self) -> TwoParticleState:
        """b_1^dagger b_2^dagger |0>, i.e. occupation |1, 1, 0, ..., 0>"""
        pattern = (1, 1) + (0,) * (self.sites - 2)
        return state_from_occupation(Species.BOSON, self.sites, {pattern: 1.0})

    def describe(self) -> str:
        return f"bose:N={self.sites},eps={self.eps:g}"


class BoseSpectrumFacts(BaseModel):
    """Numerical check of the degeneracy structure of the model"""

    model_config = ConfigDict(frozen=True)

    sites: int
    eps: float
    one_particle: Tuple[float, ...]
    ground_multiplicity: int
    top_multiplicity: int
    uniform_overlap: float
    two_particle: Tuple[float, ...]
    expected_two_particle: Tuple[float, float, float]

    @property
    def consistent(self) -> bool:
        return (
            self.ground_multiplicity == self.sites - 1
            and self.top_multiplicity == 1
            and abs(self.uniform_overlap - 1.0) <= 1e-10
            and len(self.two_particle) == 3
            and np.allclose(self.two_particle, self.expected_two_particle, atol=1e-10)
        )


def bose_model_spectrum_facts(n_sites: int, eps: float) -> BoseSpectrumFacts:
    """
    Verify one-particle multiplicities (N-1, 1) and the three two-particle levels

    Args:
        n_sites (int): N >= 3
        eps (float): Hopping amplitude, strictly positive

    Returns:
        BoseSpectrumFacts: Observed and expected spectra
    """
    _require_sites(n_sites)
    if eps <= 0:
        raise ValidationError(f"eps must be positive, got {eps}")
    model = InfiniteRangeBoseModel(sites=n_sites, eps=eps).hopping_model()
    eig = model.one_particle()
    ground = 1.0 - n_sites * eps
    values = eig.eigenvalues

    uniform = np.full(n_sites, 1.0 / np.sqrt(n_sites))
    top = eig.eigenvectors[:, -1]
    spectrum = two_particle_spectrum(model, Species.BOSON)
    return BoseSpectrumFacts(
        sites=n_sites,
        eps=eps,
        one_particle=tuple(float(v) for v in values),
        ground_multiplicity=int(np.sum(np.abs(values - ground) <= MULTIPLICITY_TOL)),
        top_multiplicity=int(np.sum(np.abs(values - 1.0) <= MULTIPLICITY_TOL)),
        uniform_overlap=float(abs(np.vdot(uniform, top))),
        two_particle=tuple(float(e) for e in spectrum.energies),
        expected_two_particle=(2.0 * ground, ground + 1.0, 2.0),
    )


class BoseClosedForm(BaseModel):
    """Closed-form averages for the initial state |1, 1, 0, ..., 0>"""

    model_config = ConfigDict(frozen=True)

    sites: int
    p00: float
    p11: float
    p01: float
    s1_sigma: float
    delta: float
    avg_e1: float

    def level_weights(self) -> Tuple[float, float, float]:
        """Weights in ascending energy order: both ground, mixed, both uniform"""
        return (self.p11, self.p01, self.p00)


def bose_average_closed_form(n_sites: int) -> BoseClosedForm:
    """
    Args:
        n_sites (int): N >= 3

    Returns:
        BoseClosedForm: p00 = 2/N^2, p11 = (1-1/N)^2 + 1/N^2, p01 = (2/N)(1-2/N),
        S1(sigma) = 1/2 + 1/N - 2/N^2, Delta and avg E1 = 1/2 + (4/N^2)(1-2/N)^2
    """
    _require_sites(n_sites)
    n = float(n_sites)
    s1_sigma = 0.5 + 1.0 / n - 2.0 / n**2
    delta = 0.5 + 2.0 / n - 8.0 / n**2 + 16.0 / n**3 - 16.0 / n**4
    return BoseClosedForm(
        sites=n_sites,
        p00=2.0 / n**2,
        p11=(1.0 - 1.0 / n) ** 2 + 1.0 / n**2,
        p01=(2.0 / n) * (1.0 - 2.0 / n),
        s1_sigma=s1_sigma,
        delta=delta,
        avg_e1=0.5 + (4.0 / n**2) * (1.0 - 2.0 / n) ** 2,
    )


def _building_blocks(n_sites: int) -> Dict[str, np.ndarray]:
    first = np.zeros(n_sites)
    first[:2] = 1.0
    difference = np.zeros(n_sites)
    difference[0], difference[1] = 1.0, -1.0
    return {
        "x1": np.full((n_sites, n_sites), 2.0 / n_sites),
        "x2": np.outer(first, first),
        "x3": np.add.outer(first, first),
        "y": np.outer(difference, difference),
    }


def bose_eigencomponents(n_sites: int) -> Dict[str, TwoParticleState]:
    """
    Level components of |1, 1, 0, ..., 0> written with the symmetric matrices
    x1 = (2/N) 1, x2 = (d1 + d2)(d1 + d2)^T, x3 = (d1 + d2) 1^T + 1 (d1 + d2)^T
    and y = (d1 - d2)(d1 - d2)^T

    Returns:
        Dict[str, TwoParticleState]: "00" (both uniform), "11" (both in the
        ground space) and "01" (one in each), normalized
    """
    _require_sites(n_sites)
    n = n_sites
    blocks = _building_blocks(n)
    x1, x2, x3, y = blocks["x1"], blocks["x2"], blocks["x3"], blocks["y"]
    components = {
        "00": x1 / 2.0,
        "11": (2.0 * x1 - 2.0 * x3 + n * x2 - n * y) / (2.0 * n * np.sqrt(2.0)),
        "01": (x3 - 2.0 * x1) / (n * np.sqrt(2.0)),
    }
    return {key: TwoParticleState.normalized(Species.BOSON, lam) for key, lam in components.items()}
