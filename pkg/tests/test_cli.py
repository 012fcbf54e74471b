#!/usr/bin/env python3
"""
Tests for file formats, run configuration and the command-line pipeline
"""

import io
import os
import sys
import tempfile
import unittest
from pathlib import Path
from unittest import mock

import numpy as np

# Add the parent directory to the path so we can import the packages
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from entanglement.two_particle import Species, TwoParticleState
from main import EXIT_INVALID, EXIT_IO, EXIT_OK, main
from stages.step_manager import StepManager
from utils.errors import FormatError, ValidationError
from utils.matrix_io import (
    format_matrix,
    parse_matrix,
    parse_state,
    read_state,
    write_state,
)
from utils.settings import TOLERANCE_ENV, build_config, load_config_file, report_tolerance

SLATER = "fermion 2\n2 2\n0 0.707106781186548\n-0.707106781186548 0\n"


def report_values(text: str) -> dict:
    values = {}
    for line in text.splitlines():
        key, sep, value = line.partition("=")
        if sep:
            values[key] = value
    return values


class TestMatrixFiles(unittest.TestCase):
    """Test cases for the matrix and state text formats"""

    def test_matrix_round_trip(self):
        """Formatted matrices parse back within 1e-9"""
        rng = np.random.default_rng(5)
        m = rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4))
        np.testing.assert_allclose(parse_matrix(format_matrix(m)), m, atol=1e-9)

    def test_comments_and_imaginary_unit(self):
        """'#' comments are skipped and 'i' marks the imaginary part"""
        m = parse_matrix("# header\n2 2\n1 0.5-0.5i  # first row\n0 1i\n")
        self.assertEqual(m[0, 1], 0.5 - 0.5j)
        self.assertEqual(m[1, 1], 1j)

    def test_format_errors_report_lines(self):
        """Bad entries and short files name the offending line"""
        with self.assertRaises(FormatError) as ctx:
            parse_matrix("2 2\n1 2\n3 x\n")
        self.assertEqual(ctx.exception.line, 3)
        with self.assertRaises(FormatError):
            parse_matrix("2 2\n1 2 3\n")
        with self.assertRaises(FormatError) as ctx:
            parse_state("electron 2\n2 2\n0 1\n-1 0\n")
        self.assertEqual(ctx.exception.line, 1)

    def test_state_checks(self):
        """Unnormalized states, wrong sizes and wrong symmetry are refused"""
        with self.assertRaises(ValidationError):
            parse_state("fermion 2\n2 2\n0 1\n-1 0\n")
        with self.assertRaises(ValidationError):
            parse_state("fermion 3\n2 2\n0 0.707106781186548\n-0.707106781186548 0\n")
        with self.assertRaises(ValidationError):
            parse_state("boson 2\n2 2\n0 0.707106781186548\n-0.707106781186548 0\n")

    def test_small_norm_deviation_is_renormalized(self):
        """A norm off by less than 1e-6 is accepted and fixed"""
        state = parse_state("boson 2\n2 2\n1.0000000001 0\n0 0\n")
        self.assertAlmostEqual(float(np.linalg.norm(state.lam)), 1.0, places=14)

    def test_state_file_round_trip(self):
        """write_state then read_state reproduces the coefficients"""
        rng = np.random.default_rng(6)
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        state = TwoParticleState.normalized(Species.BOSON, a + a.T)
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "state.txt"
            write_state(path, state)
            again = read_state(path)
        self.assertEqual(again.species, Species.BOSON)
        np.testing.assert_allclose(again.lam, state.lam, atol=1e-9)


class TestSettings(unittest.TestCase):
    """Test cases for configuration precedence and validation"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_flags_override_file(self):
        """Defaults < config file < flags"""
        path = self.dir / "run.conf"
        path.write_text("# run\ncommand = mc-check\nmodel = bose:N=4\nsamples = 500\ngroup-tol = 1e-6\n")
        config = build_config({"samples": 800, "seed": None}, path)
        self.assertEqual(config.command, "mc-check")
        self.assertEqual(config.samples, 800)
        self.assertEqual(config.seed, 0)
        self.assertEqual(config.group_tol, 1e-6)

    def test_config_file_errors(self):
        """Unknown keys and malformed lines carry their line number"""
        path = self.dir / "bad.conf"
        path.write_text("command = average\ncolour = blue\n")
        with self.assertRaises(FormatError) as ctx:
            load_config_file(path)
        self.assertEqual(ctx.exception.line, 2)
        path.write_text("command average\n")
        with self.assertRaises(FormatError):
            load_config_file(path)

    def test_invalid_combinations(self):
        """Missing models, stray states and reversed time grids are refused"""
        cases = [
            {"command": "average"},
            {"command": "decompose"},
            {"command": "model-report", "model": "bose:N=4", "state": "s.txt"},
            {"command": "evolve", "model": "bose:N=4", "t0": 2.0, "t1": 1.0},
            {"command": "mc-check", "model": "bose:N=4", "samples": 0},
            {"command": "summarize", "model": "bose:N=4"},
        ]
        for flags in cases:
            with self.assertRaises(ValidationError, msg=str(flags)):
                build_config(flags)

    def test_report_tolerance_from_environment(self):
        """IDENT_ENTANGLE_TOL overrides the default tolerance"""
        with mock.patch.dict(os.environ, {TOLERANCE_ENV: "1e-6"}):
            self.assertEqual(report_tolerance(), 1e-6)
        with mock.patch.dict(os.environ, {TOLERANCE_ENV: "loose"}):
            with self.assertRaises(ValidationError):
                report_tolerance()
        with mock.patch.dict(os.environ, {TOLERANCE_ENV: ""}):
            self.assertEqual(report_tolerance(), 1e-10)

    def test_step_manager_compare(self):
        """Rows are flagged when closed form and engine disagree"""
        manager = StepManager(1e-10)
        ok, row = manager.compare("avg_E1", 0.5625, 0.5625 + 1e-12)
        self.assertTrue(ok)
        self.assertTrue(row.endswith("ok"))
        ok, row = manager.compare("avg_E1", 0.5625, 0.6)
        self.assertFalse(ok)
        self.assertTrue(row.endswith("MISMATCH"))


class TestCommandLine(unittest.TestCase):
    """Test cases for full runs through main()"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def run_cli(self, *argv: str):
        stream = io.StringIO()
        code = main(list(argv), stream)
        return code, stream.getvalue()

    def test_decompose_slater(self):
        """A single Slater determinant has p = 0.5, 0.5, E = ln 2 and E1 = 1/2"""
        path = self.dir / "slater.txt"
        path.write_text(SLATER)
        code, text = self.run_cli("--command", "decompose", "--state", str(path))
        self.assertEqual(code, EXIT_OK)
        values = report_values(text)
        self.assertEqual(values["species"], "fermion")
        self.assertEqual([float(v) for v in values["p"].split(",")], [0.5, 0.5])
        self.assertAlmostEqual(float(values["E"]), np.log(2.0), places=6)
        self.assertAlmostEqual(float(values["E1"]), 0.5, places=10)

    def test_decompose_side_files(self):
        """--out writes the report, the modes and a reconstruction that re-reads"""
        source = self.dir / "slater.txt"
        source.write_text(SLATER)
        out = self.dir / "result"
        code, text = self.run_cli("--command", "decompose", "--state", str(source), "--out", str(out))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(text, "")
        self.assertIn("E1=", out.read_text())
        modes = parse_matrix(Path(f"{out}.modes.txt").read_text())
        np.testing.assert_allclose(modes.conj().T @ modes, np.eye(2), atol=1e-9)
        rebuilt = read_state(f"{out}.state.txt")
        np.testing.assert_allclose(rebuilt.lam, read_state(source).lam, atol=1e-9)

    def test_average_bose(self):
        """The four-site Bose model peaks at avg E1 = 9/16"""
        code, text = self.run_cli("--command", "average", "--model", "bose:N=4")
        self.assertEqual(code, EXIT_OK)
        self.assertAlmostEqual(float(report_values(text)["avg_E1"]), 0.5625, places=10)
        self.assertEqual(sum(line.startswith("level ") for line in text.splitlines()), 3)

    def test_average_hubbard(self):
        """hubbard:N=4 with one level per eigenstate gives 1/2 + 1/4"""
        code, text = self.run_cli("--command", "average", "--model", "hubbard:N=4", "--nondegenerate")
        self.assertEqual(code, EXIT_OK)
        self.assertAlmostEqual(float(report_values(text)["avg_E1"]), 0.75, places=10)

    def test_evolve_csv(self):
        """steps + 1 rows after the header, starting at t0"""
        code, text = self.run_cli("--command", "evolve", "--model", "bose:N=4", "--t1", "2", "--steps", "4")
        self.assertEqual(code, EXIT_OK)
        lines = text.splitlines()
        self.assertEqual(lines[0], "t,E1")
        self.assertEqual(len(lines), 6)
        t, e1 = (float(v) for v in lines[1].split(","))
        self.assertEqual(t, 0.0)
        self.assertAlmostEqual(e1, 0.5, places=10)

    def test_model_report(self):
        """Closed forms and the engine agree for both reference models"""
        for model in ("hubbard:N=5,p=0.3", "bose:N=6,eps=0.05"):
            code, text = self.run_cli("--command", "model-report", "--model", model)
            self.assertEqual(code, EXIT_OK)
            self.assertNotIn("MISMATCH", text)
            self.assertEqual(text.splitlines()[-1], "all_ok=true")

    def test_mc_check_is_deterministic(self):
        """Identical seeds give identical reports"""
        argv = ("--command", "mc-check", "--model", "bose:N=4", "--samples", "4000", "--seed", "11")
        first = self.run_cli(*argv)
        second = self.run_cli(*argv)
        self.assertEqual(first, second)
        self.assertEqual(first[0], EXIT_OK)
        values = report_values(first[1])
        self.assertEqual(values["samples"], "4000")
        self.assertEqual(values["within_3_stderr"], "true")

    def test_config_file_run(self):
        """A config file alone can drive a run"""
        path = self.dir / "run.conf"
        path.write_text("command = average\nmodel = hubbard:N=4\nnondegenerate = true\n")
        code, text = self.run_cli("--config", str(path))
        self.assertEqual(code, EXIT_OK)
        self.assertAlmostEqual(float(report_values(text)["avg_E1"]), 0.75, places=10)

    def test_exit_codes(self):
        """2 for invalid input, 1 for unreadable files"""
        self.assertEqual(self.run_cli("--command", "average")[0], EXIT_INVALID)
        self.assertEqual(self.run_cli("--command", "average", "--model", "chain:N=4")[0], EXIT_INVALID)
        bad = self.dir / "bad.txt"
        bad.write_text("fermion 2\n2 2\n0 1\n-1 0\n")
        self.assertEqual(self.run_cli("--command", "decompose", "--state", str(bad))[0], EXIT_INVALID)
        mismatch = self.dir / "slater.txt"
        mismatch.write_text(SLATER)
        code, _ = self.run_cli("--command", "average", "--model", "bose:N=4", "--state", str(mismatch))
        self.assertEqual(code, EXIT_INVALID)
        missing = self.dir / "missing.txt"
        self.assertEqual(self.run_cli("--command", "decompose", "--state", str(missing))[0], EXIT_IO)
        self.assertEqual(self.run_cli("--config", str(missing))[0], EXIT_IO)


if __name__ == "__main__":
    unittest.main()
