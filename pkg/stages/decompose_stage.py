#!/usr/bin/env python3
"""
Decompose stage: Schmidt probabilities, entropies and the mode matrix
"""

from pathlib import Path
from typing import Any, Dict

from entanglement.two_particle import (
    linear_entropy,
    reduced_densities,
    schmidt_decompose,
    schmidt_reconstruct,
    von_neumann_entropy,
)
from stages.base_stage import BaseStage, PipelineState
from utils.matrix_io import format_matrix, format_number, format_state

# probabilities below this are not listed in the report
REPORT_FLOOR = 1e-14


class DecomposeStage(BaseStage):
    """
    Stage responsible for the generalized Schmidt decomposition of one state
    """

    def __init__(self):
        super().__init__("DecomposeStage")

    def process(self, state: PipelineState) -> Dict[str, Any]:
        self._require(state, ["run_config", "state"])
        psi = state["state"]
        decomposition = schmidt_decompose(psi)
        p = decomposition.probabilities
        sigma, tau = reduced_densities(psi)
        self._log_info(f"support {decomposition.support} of N={psi.dim}")

        report = [
            f"species={psi.species.value}",
            f"N={psi.dim}",
            "p=" + ", ".join(format_number(v) for v in p if v > REPORT_FLOOR),
            f"E={format_number(von_neumann_entropy(p))}",
            f"E1={format_number(linear_entropy(p))}",
            f"E1_direct={format_number(linear_entropy(psi))}",
            f"S1_sigma={format_number(sigma.linear_entropy())}",
            f"S1_tau={format_number(tau.linear_entropy())}",
        ]

        files: Dict[Path, str] = {}
        out = state["run_config"].out
        if out is not None:
            files[Path(f"{out}.modes.txt")] = format_matrix(decomposition.modes)
            files[Path(f"{out}.state.txt")] = format_state(schmidt_reconstruct(decomposition))
        return {"report": report, "files": files}
