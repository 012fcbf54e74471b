#!/usr/bin/env python3
"""
Time-averaged linear entropy of two identical particles

With psi = sum_n sqrt(p_n) exp(i chi_n) psi'_n over energy levels,
averaging E1 over independent uniform phases gives

    avg E1 = S1(sigma) + S1(tau) - Delta
    sigma  = sum_m p_m Lambda_m^dagger Lambda_m
    tau    = sum_m p_m Lambda_m Lambda_m^dagger
    Delta  = 1 - sum_m p_m^2 Tr(Lambda_m^dagger Lambda_m)^2

with S1(rho) = 1 - Tr rho^2. The literal long-time average differs from it
when level differences are resonant; time_average_entanglement evaluates
that average exactly.
"""

import asyncio
import logging
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from entanglement.spectrum import GROUP_REL, SpectralDecomposition, project_state
from entanglement.two_particle import TwoParticleState, linear_entropy
from utils.errors import ValidationError

logger = logging.getLogger(__name__)

# samples per Monte-Carlo chunk; each chunk draws from its own seed substream
CHUNK = 8192


class AverageReport(BaseModel):
    """Phase-ensemble average of E1 and its constituents"""

    model_config = ConfigDict(frozen=True)

    avg_e1: float
    s1_sigma: float
    s1_tau: float
    delta: float
    weights: Tuple[Tuple[float, float], ...]
    discarded_weight: float = 0.0

    @model_validator(mode="after")
    def _identity(self) -> "AverageReport":
        if abs(self.avg_e1 - (self.s1_sigma + self.s1_tau - self.delta)) > 1e-12:
            raise ValueError("avg_E1 must equal S1_sigma + S1_tau - delta")
        total = sum(p for _, p in self.weights)
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"level weights sum to {total:.12g}")
        return self


class MonteCarloEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    mean: float
    stderr: float
    samples: int

    def within(self, value: float, sigmas: float = 3.0) -> bool:
        return abs(self.mean - value) <= sigmas * self.stderr + 1e-12


def _purity(rho: np.ndarray) -> float:
    return float(np.linalg.norm(rho) ** 2)


def average_entanglement(
    state: TwoParticleState,
    spectrum: SpectralDecomposition,
) -> AverageReport:
    """
    Phase-ensemble (time) average of the linear entropy

    Args:
        state (TwoParticleState): Initial state
        spectrum (SpectralDecomposition): Levels of the Hamiltonian

    Returns:
        AverageReport: avg E1, S1(sigma), S1(tau), Delta and level weights
    """
    projection = project_state(state, spectrum)
    p = projection.weights
    lam = projection.stacked()
    lam_dagger = lam.conj().transpose(0, 2, 1)
    grams = lam_dagger @ lam
    sigma = np.tensordot(p, grams, axes=1)
    tau = np.tensordot(p, lam @ lam_dagger, axes=1)

    s1_sigma = 1.0 - _purity(sigma)
    s1_tau = 1.0 - _purity(tau)
    delta = 1.0 - float(np.sum(p**2 * np.linalg.norm(grams, axis=(1, 2)) ** 2))
    return AverageReport(
        avg_e1=s1_sigma + s1_tau - delta,
        s1_sigma=s1_sigma,
        s1_tau=s1_tau,
        delta=delta,
        weights=tuple((c.energy, c.weight) for c in projection.components),
        discarded_weight=projection.discarded_weight,
    )


def _phase_samples(
    amplitudes: np.ndarray,
    flat: np.ndarray,
    dim: int,
    seed: np.random.SeedSequence,
    size: int,
) -> np.ndarray:
    rng = np.random.default_rng(seed)
    chi = rng.uniform(0.0, 2.0 * np.pi, size=(size, amplitudes.size))
    lam = ((amplitudes * np.exp(1j * chi)) @ flat).reshape(size, dim, dim)
    gram = lam.conj().transpose(0, 2, 1) @ lam
    return 1.0 - np.sum(np.abs(gram) ** 2, axis=(1, 2))


async def _run_chunks(
    run: Callable[[Tuple[np.random.SeedSequence, int]], np.ndarray],
    jobs: Sequence[Tuple[np.random.SeedSequence, int]],
    workers: int,
) -> List[np.ndarray]:
    limit = asyncio.Semaphore(workers)

    async def one(job: Tuple[np.random.SeedSequence, int]) -> np.ndarray:
        async with limit:
            return await asyncio.to_thread(run, job)

    # gather returns chunks in job order
    return list(await asyncio.gather(*(one(job) for job in jobs)))


def monte_carlo_phase_average(
    state: TwoParticleState,
    spectrum: SpectralDecomposition,
    samples: int,
    seed: int,
    workers: int = 1,
) -> MonteCarloEstimate:
    """
    Monte-Carlo estimate of the phase-ensemble average of E1

    Samples are drawn in fixed-size chunks, each from a substream spawned
    from the seed, so the result does not depend on the number of workers.

    Args:
        state (TwoParticleState): Initial state
        spectrum (SpectralDecomposition): Levels of the Hamiltonian
        samples (int): Number of phase draws, at least 1
        seed (int): Seed of the generator
        workers (int): Threads evaluating chunks

    Returns:
        MonteCarloEstimate: Sample mean and standard error
    """
    if samples < 1:
        raise ValidationError("samples must be at least 1")
    projection = project_state(state, spectrum)
    if len(projection.components) == 1:
        # a single level only picks up a global phase
        value = linear_entropy(projection.components[0].state)
        return MonteCarloEstimate(mean=value, stderr=0.0, samples=samples)

    dim = spectrum.dim
    amplitudes = np.sqrt(projection.weights)
    flat = projection.stacked().reshape(len(projection.components), dim * dim)
    sizes = [min(CHUNK, samples - start) for start in range(0, samples, CHUNK)]
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))

    def run(job: Tuple[np.random.SeedSequence, int]) -> np.ndarray:
        return _phase_samples(amplitudes, flat, dim, job[0], job[1])

    jobs = list(zip(seeds, sizes))
    if workers > 1:
        chunks = asyncio.run(_run_chunks(run, jobs, workers))
    else:
        chunks = [run(job) for job in jobs]

    values = np.concatenate(chunks)
    stderr = float(values.std(ddof=1) / np.sqrt(samples)) if samples > 1 else 0.0
    logger.debug("monte_carlo_phase_average: %d samples in %d chunks", samples, len(sizes))
    return MonteCarloEstimate(mean=float(values.mean()), stderr=stderr, samples=samples)


def time_average_entanglement(
    state: TwoParticleState,
    spectrum: SpectralDecomposition,
    resonance_tol: Optional[float] = None,
) -> float:
    """
    Exact infinite-time average of E1, resonances included

    Writing G(t) = Lambda(t)^dagger Lambda(t) = sum_mn A_mn exp(i w_mn t) with
    w_mn = E_m - E_n, the average of Tr G^2 keeps every product A_mn A_rs with
    w_mn + w_rs = 0. Without resonances only the pairings of the phase
    ensemble survive and the result equals average_entanglement.

    Args:
        state (TwoParticleState): Initial state
        spectrum (SpectralDecomposition): Levels of the Hamiltonian
        resonance_tol (float, optional): Frequencies closer than this are equal

    Returns:
        float: lim_{T -> inf} (1/T) int_0^T E1(t) dt
    """
    projection = project_state(state, spectrum)
    energies = np.array([c.energy for c in projection.components])
    amplitudes = np.sqrt(projection.weights)
    lam = projection.stacked()
    count, dim = lam.shape[0], lam.shape[1]

    terms = np.einsum("mji,njk->mnik", lam.conj(), lam) * np.outer(amplitudes, amplitudes)[:, :, None, None]
    terms = terms.reshape(count * count, dim, dim)
    frequencies = (energies[:, None] - energies[None, :]).reshape(-1)

    spread = float(np.ptp(spectrum.energies)) if len(spectrum.levels) > 1 else 0.0
    tol = resonance_tol if resonance_tol is not None else GROUP_REL * max(spread, 1.0)
    order = np.argsort(frequencies, kind="stable")
    clusters: List[List[int]] = []
    for index in order:
        if clusters and frequencies[index] - frequencies[clusters[-1][-1]] <= tol:
            clusters[-1].append(int(index))
        else:
            clusters.append([int(index)])
    centers = np.array([frequencies[cluster].mean() for cluster in clusters])
    sums = [terms[cluster].sum(axis=0) for cluster in clusters]

    purity = 0.0
    for k, center in enumerate(centers):
        partner = int(np.argmin(np.abs(centers + center)))
        if abs(centers[partner] + center) <= tol:
            purity += float(np.trace(sums[k] @ sums[partner]).real)
    logger.debug("time_average_entanglement: %d frequency clusters", len(clusters))
    return 1.0 - purity
