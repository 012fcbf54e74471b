#!/usr/bin/env python3
"""
Output stage: writes the report and any side files
"""

import sys
from pathlib import Path
from typing import Any, Dict, TextIO

from stages.base_stage import BaseStage, PipelineState


class OutputStage(BaseStage):
    """
    Stage responsible for emitting results, to --out or to stdout
    """

    def __init__(self, stream: TextIO = None):
        super().__init__("OutputStage")
        self.stream = stream

    def process(self, state: PipelineState) -> Dict[str, Any]:
        self._require(state, ["run_config", "report"])
        text = "\n".join(state["report"]) + "\n"
        out = state["run_config"].out
        if out is not None:
            Path(out).write_text(text)
            self._log_info(f"wrote {out}")
        else:
            (self.stream or sys.stdout).write(text)
        written = [Path(out)] if out is not None else []
        for path, content in (state.get("files") or {}).items():
            path.write_text(content)
            written.append(path)
            self._log_info(f"wrote {path}")
        return {"written": written}
