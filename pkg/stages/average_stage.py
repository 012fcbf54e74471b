#!/usr/bin/env python3
"""
Average stage: phase-ensemble average of E1 and its constituents
"""

from typing import Any, Dict

from entanglement.averaging import average_entanglement
from stages.base_stage import BaseStage, PipelineState
from utils.matrix_io import format_number


class AverageStage(BaseStage):
    """
    Stage responsible for the time-averaged linear entropy report
    """

    def __init__(self):
        super().__init__("AverageStage")

    def process(self, state: PipelineState) -> Dict[str, Any]:
        self._require(state, ["state", "spectrum"])
        result = average_entanglement(state["state"], state["spectrum"])
        report = [
            f"avg_E1={format_number(result.avg_e1)}",
            f"S1_sigma={format_number(result.s1_sigma)}",
            f"S1_tau={format_number(result.s1_tau)}",
            f"delta={format_number(result.delta)}",
        ]
        report.extend(f"level {format_number(e)} {format_number(p)}" for e, p in result.weights)
        if result.discarded_weight > 0:
            report.append(f"discarded_weight={result.discarded_weight:.3e}")
        self._log_info(f"avg_E1={result.avg_e1:.6f} over {len(result.weights)} levels")
        return {"report": report}
