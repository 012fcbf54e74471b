#!/usr/bin/env python3
"""
Load stage: builds the reference model, the initial state and the spectrum
"""

from typing import Any, Dict

from entanglement.spectrum import two_particle_spectrum
from models.registry import parse_model_spec
from stages.base_stage import BaseStage, PipelineState
from utils.matrix_io import read_state


class LoadStage(BaseStage):
    """
    Stage responsible for turning the run configuration into domain objects
    """

    def __init__(self):
        super().__init__("LoadStage")

    def process(self, state: PipelineState) -> Dict[str, Any]:
        """
        Resolve the state source and, when a model is given, its spectrum

        Args:
            state (PipelineState): Holds the run config

        Returns:
            dict: reference, state and spectrum
        """
        self._require(state, ["run_config"])
        config = state["run_config"]
        reference = parse_model_spec(config.model) if config.model else None

        if config.state is not None:
            initial = read_state(config.state)
            self._log_info(f"read {initial.species.value} state with N={initial.dim} from {config.state}")
        else:
            initial = reference.initial_state()
            self._log_info(f"using the initial state of {reference.describe()}")

        spectrum = None
        if reference is not None and config.command != "decompose":
            initial.require_compatible(reference.species, reference.sites)
            spectrum = two_particle_spectrum(
                reference.hopping_model(),
                reference.species,
                nondegenerate=config.nondegenerate,
                group_tol=config.group_tol,
            )
            self._log_info(f"{len(spectrum.levels)} levels for {reference.describe()}")
        return {"reference": reference, "state": initial, "spectrum": spectrum, "report": [], "files": {}}
