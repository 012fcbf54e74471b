#!/usr/bin/env python3
"""
Model-report stage: closed-form results of the reference models against the
generic engine
"""

from typing import Any, Dict, List

from entanglement.averaging import average_entanglement
from entanglement.two_particle import linear_entropy
from models.bose import InfiniteRangeBoseModel, bose_average_closed_form, bose_model_spectrum_facts
from models.hubbard import (
    HubbardRing,
    hubbard_average_closed_form,
    hubbard_eigenstate,
    hubbard_energy,
    hubbard_pair_weights,
)
from stages.base_stage import BaseStage, PipelineState
from stages.step_manager import StepManager


class ModelReportStage(BaseStage):
    """
    Stage responsible for the closed-form versus engine comparison table
    """

    def __init__(self, step_manager: StepManager):
        super().__init__("ModelReportStage")
        self.step_manager = step_manager

    def process(self, state: PipelineState) -> Dict[str, Any]:
        self._require(state, ["reference", "state", "spectrum"])
        reference = state["reference"]
        if isinstance(reference, HubbardRing):
            rows = self._hubbard_rows(state)
        elif isinstance(reference, InfiniteRangeBoseModel):
            rows = self._bose_rows(state)
        else:
            raise TypeError(f"no closed forms for {type(reference).__name__}")

        verdicts = [ok for ok, _ in rows]
        report = [f"model={reference.describe()}"] + [line for _, line in rows]
        report.append(f"all_ok={str(all(verdicts)).lower()}")
        self._log_info(f"{sum(verdicts)}/{len(verdicts)} comparisons within tolerance")
        return {"report": report}

    def _hubbard_rows(self, state: PipelineState) -> List:
        reference, psi, spectrum = state["reference"], state["state"], state["spectrum"]
        n = reference.sites
        if not spectrum.nondegenerate:
            self._log_info("closed form assumes one level per eigenstate; use --nondegenerate for a strict check")
        weights = hubbard_pair_weights(psi)
        total = sum(weights.values())
        weights = {pair: w / total for pair, w in weights.items()}

        compare = self.step_manager.compare
        index = spectrum.level_index().reshape(-1)
        rows = []
        for r, s in weights:
            eigenstate = hubbard_eigenstate(n, r, s)
            rows.append(compare(f"E1({r},{s})", 0.5, linear_entropy(eigenstate)))
            coefficients = spectrum.to_eigenbasis(eigenstate.lam)
            dominant = int(index[abs(coefficients).reshape(-1).argmax()])
            rows.append(compare(f"E({r},{s})", hubbard_energy(n, r, s), spectrum.levels[dominant].energy))
        engine = average_entanglement(psi, spectrum)
        rows.append(compare("avg_E1", hubbard_average_closed_form(n, weights), engine.avg_e1))
        return rows

    def _bose_rows(self, state: PipelineState) -> List:
        reference, psi, spectrum = state["reference"], state["state"], state["spectrum"]
        closed = bose_average_closed_form(reference.sites)
        facts = bose_model_spectrum_facts(reference.sites, reference.eps)
        engine = average_entanglement(psi, spectrum)

        compare = self.step_manager.compare
        rows = [compare("levels", 3.0, float(len(facts.two_particle)))]
        if not spectrum.nondegenerate and len(engine.weights) == 3:
            for label, value, (_, weight) in zip(("p11", "p01", "p00"), closed.level_weights(), engine.weights):
                rows.append(compare(label, value, weight))
        rows.extend(
            [
                compare("S1_sigma", closed.s1_sigma, engine.s1_sigma),
                compare("S1_tau", closed.s1_sigma, engine.s1_tau),
                compare("delta", closed.delta, engine.delta),
                compare("avg_E1", closed.avg_e1, engine.avg_e1),
            ]
        )
        return rows
