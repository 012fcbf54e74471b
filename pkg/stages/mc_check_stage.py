#!/usr/bin/env python3
"""
Monte-Carlo check: sampled phase average of E1 against the exact formula
"""

from typing import Any, Dict

from entanglement.averaging import average_entanglement, monte_carlo_phase_average
from stages.base_stage import BaseStage, PipelineState
from utils.matrix_io import format_number


class MonteCarloStage(BaseStage):
    """
    Stage responsible for the sampled cross-check of average_entanglement
    """

    def __init__(self):
        super().__init__("MonteCarloStage")

    def process(self, state: PipelineState) -> Dict[str, Any]:
        self._require(state, ["run_config", "state", "spectrum"])
        config = state["run_config"]
        exact = average_entanglement(state["state"], state["spectrum"])
        estimate = monte_carlo_phase_average(
            state["state"],
            state["spectrum"],
            samples=config.samples,
            seed=config.seed,
            workers=config.workers,
        )
        within = estimate.within(exact.avg_e1)
        if not within:
            self._log_error(f"sample mean {estimate.mean:.6f} is beyond 3 standard errors of {exact.avg_e1:.6f}")
        report = [
            f"samples={estimate.samples}",
            f"seed={config.seed}",
            f"mc_mean={format_number(estimate.mean)}",
            f"mc_stderr={format_number(estimate.stderr)}",
            f"avg_E1={format_number(exact.avg_e1)}",
            f"diff={abs(estimate.mean - exact.avg_e1):.3e}",
            f"within_3_stderr={str(within).lower()}",
        ]
        return {"report": report}
