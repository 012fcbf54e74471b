#!/usr/bin/env python3
"""
Base stage class for the analysis pipeline
"""

import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, List, Optional, TypedDict

from entanglement.spectrum import SpectralDecomposition
from entanglement.two_particle import TwoParticleState
from utils.settings import RunConfig

logger = logging.getLogger("stages")


class PipelineState(TypedDict, total=False):
    """Values flowing between the nodes of the run graph"""

    run_config: RunConfig
    reference: Optional[Any]
    state: TwoParticleState
    spectrum: Optional[SpectralDecomposition]
    report: List[str]
    files: Dict[Path, str]
    report_tolerance: float
    route: str
    written: List[Path]


class BaseStage(ABC):
    """
    Abstract base class for all pipeline stages
    """

    def __init__(self, name: str = "BaseStage"):
        """
        Initialize the base stage

        Args:
            name (str): Name of the stage, used as log prefix
        """
        self.name = name

    @abstractmethod
    def process(self, state: PipelineState) -> Dict[str, Any]:
        """
        Run the stage on the current pipeline state

        Args:
            state (PipelineState): Current state of the run

        Returns:
            dict: Partial state update
        """

    def __call__(self, state: PipelineState) -> Dict[str, Any]:
        return self.process(state)

    def _validate_state(self, state: PipelineState, required_keys: list) -> bool:
        """
        Validate that required keys are present in state

        Args:
            state (PipelineState): State to validate
            required_keys (list): Keys the stage reads

        Returns:
            bool: Whether all required keys are present
        """
        return all(state.get(key) is not None for key in required_keys)

    def _require(self, state: PipelineState, required_keys: list) -> None:
        if not self._validate_state(state, required_keys):
            missing = [key for key in required_keys if state.get(key) is None]
            self._log_error(f"missing pipeline values: {', '.join(missing)}")
            raise RuntimeError(f"{self.name} ran before its inputs were prepared: {missing}")

    def _log_info(self, message: str):
        logger.info("[%s] %s", self.name, message)

    def _log_error(self, message: str):
        logger.error("[%s] %s", self.name, message)
