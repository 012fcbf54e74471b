#!/usr/bin/env python3
"""
Main entry point: entanglement analysis of two identical particles

The run is a small graph: load -> step manager -> one analysis stage -> output.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, TextIO

from langgraph.graph import END, StateGraph
from pydantic import ValidationError as PydanticValidationError

from stages.average_stage import AverageStage
from stages.base_stage import PipelineState
from stages.decompose_stage import DecomposeStage
from stages.evolve_stage import EvolveStage
from stages.load_stage import LoadStage
from stages.mc_check_stage import MonteCarloStage
from stages.model_report_stage import ModelReportStage
from stages.output_stage import OutputStage
from stages.step_manager import ROUTES, StepManager
from utils.errors import EntanglementError
from utils.settings import RunConfig, build_config, report_tolerance

logger = logging.getLogger("main")

EXIT_OK = 0
EXIT_IO = 1
EXIT_INVALID = 2


class EntanglementPipeline:
    """
    Coordinates the stages of one run through a compiled state graph
    """

    def __init__(self, tolerance: float = 1e-10, stream: Optional[TextIO] = None):
        self.step_manager = StepManager(tolerance)
        self.stages = {
            "decompose": DecomposeStage(),
            "evolve": EvolveStage(),
            "average": AverageStage(),
            "model_report": ModelReportStage(self.step_manager),
            "mc_check": MonteCarloStage(),
        }
        self.graph = self._build(LoadStage(), OutputStage(stream))

    def _build(self, load: LoadStage, output: OutputStage):
        graph = StateGraph(PipelineState)
        graph.add_node("load", load)
        graph.add_node("dispatch", self.step_manager)
        for name, stage in self.stages.items():
            graph.add_node(name, stage)
            graph.add_edge(name, "write")
        graph.add_node("write", output)

        graph.set_entry_point("load")
        graph.add_edge("load", "dispatch")
        graph.add_conditional_edges(
            "dispatch", self.step_manager.next_node, {node: node for node in ROUTES.values()}
        )
        graph.add_edge("write", END)
        return graph.compile()

    def execute(self, config: RunConfig) -> PipelineState:
        return self.graph.invoke({"run_config": config})


def run(config: RunConfig, stream: Optional[TextIO] = None) -> int:
    """
    Execute one configured run

    Args:
        config (RunConfig): What to compute
        stream (TextIO, optional): Destination of the report when no --out is given

    Returns:
        int: 0 on success, 2 on validation failure, 1 on I/O failure
    """
    try:
        pipeline = EntanglementPipeline(report_tolerance(), stream)
        pipeline.execute(config)
    except (EntanglementError, PydanticValidationError) as e:
        logger.error("%s", e)
        return EXIT_INVALID
    except OSError as e:
        logger.error("I/O failure: %s", e)
        return EXIT_IO
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Schmidt decomposition and time-averaged entanglement of two identical particles"
    )
    parser.add_argument("--command", choices=sorted(ROUTES), help="analysis to run")
    parser.add_argument("--state", type=Path, help="state file ('species dim' header + matrix)")
    parser.add_argument("--model", help="hubbard:N=<n>[,p=<p>] or bose:N=<n>[,eps=<e>]")
    parser.add_argument("--t0", type=float, help="first time of the evolve grid")
    parser.add_argument("--t1", type=float, help="last time of the evolve grid")
    parser.add_argument("--steps", type=int, help="number of evolve time steps")
    parser.add_argument("--samples", type=int, help="Monte-Carlo phase draws")
    parser.add_argument("--seed", type=int, help="Monte-Carlo seed")
    parser.add_argument(
        "--nondegenerate", action="store_true", default=None, help="one level per product eigenstate"
    )
    parser.add_argument("--out", type=Path, help="report path (stdout when omitted)")
    parser.add_argument("--config", type=Path, help="key = value file, overridden by flags")
    parser.add_argument("--workers", type=int, help="Monte-Carlo threads")
    parser.add_argument("--group-tol", dest="group_tol", type=float, help="degeneracy grouping threshold")
    parser.add_argument("--log-level", default="WARNING", help="logging level on stderr")
    return parser


def main(argv: Optional[List[str]] = None, stream: Optional[TextIO] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )
    flags = {key: value for key, value in vars(args).items() if key not in ("config", "log_level")}
    try:
        config = build_config(flags, args.config)
    except EntanglementError as e:
        logger.error("%s", e)
        return EXIT_INVALID
    except OSError as e:
        logger.error("cannot read config: %s", e)
        return EXIT_IO
    return run(config, stream)


if __name__ == "__main__":
    sys.exit(main())
