#!/usr/bin/env python3
"""
Evolve stage: E1 along a uniform time grid, written as CSV
"""

from typing import Any, Dict

import numpy as np

from entanglement.spectrum import e1_trajectory
from stages.base_stage import BaseStage, PipelineState
from utils.matrix_io import format_number


class EvolveStage(BaseStage):
    """
    Stage responsible for the entanglement trajectory E1(t)
    """

    def __init__(self):
        super().__init__("EvolveStage")

    def process(self, state: PipelineState) -> Dict[str, Any]:
        """
        Sample E1 at steps + 1 equally spaced times from t0 to t1

        Args:
            state (PipelineState): Needs config, state and spectrum

        Returns:
            dict: CSV lines with header "t,E1"
        """
        self._require(state, ["run_config", "state", "spectrum"])
        config = state["run_config"]
        times = np.linspace(config.t0, config.t1, config.steps + 1)
        trajectory = e1_trajectory(state["state"], state["spectrum"], times)
        values = np.array([e1 for _, e1 in trajectory])
        self._log_info(f"{len(trajectory)} samples, mean E1 {values.mean():.6f}")
        report = ["t,E1"] + [f"{format_number(t)},{format_number(e1)}" for t, e1 in trajectory]
        return {"report": report}
