#!/usr/bin/env python3
"""
Step manager for the analysis pipeline: routes a run to its analysis stage
and judges closed-form values against the engine
"""

from typing import Any, Dict, Tuple

from stages.base_stage import BaseStage, PipelineState
from utils.matrix_io import format_number

# command -> graph node
ROUTES: Dict[str, str] = {
    "decompose": "decompose",
    "evolve": "evolve",
    "average": "average",
    "model-report": "model_report",
    "mc-check": "mc_check",
}


class StepManager(BaseStage):
    """
    Stage responsible for picking the analysis node of a run
    """

    def __init__(self, tolerance: float = 1e-10):
        super().__init__("StepManager")
        self.tolerance = tolerance

    def process(self, state: PipelineState) -> Dict[str, Any]:
        self._require(state, ["run_config"])
        route = self.route(state)
        self._log_info(f"command {state['run_config'].command} -> {route}")
        return {"route": route}

    def route(self, state: PipelineState) -> str:
        return ROUTES[state["run_config"].command]

    def next_node(self, state: PipelineState) -> str:
        return state["route"]

    def compare(self, label: str, closed: float, engine: float) -> Tuple[bool, str]:
        """
        Compare a closed-form value with the engine

        Args:
            label (str): Quantity name
            closed (float): Closed-form value
            engine (float): Value from the generic pipeline

        Returns:
            tuple: (is_valid (bool), report line (str))
        """
        difference = abs(closed - engine)
        is_valid = difference <= self.tolerance
        line = (
            f"{label} closed={format_number(closed)} engine={format_number(engine)} "
            f"diff={difference:.3e} {'ok' if is_valid else 'MISMATCH'}"
        )
        if not is_valid:
            self._log_error(f"{label}: closed form and engine differ by {difference:.3e}")
        return is_valid, line
