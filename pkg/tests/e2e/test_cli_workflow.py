from __future__ import annotations

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[2]
EXAMPLE_DIAGRAM = ROOT / "diagram.example.yaml"


def _run(*args: str) -> subprocess.CompletedProcess[str]:
    env = {**os.environ, "PYTHONPATH": str(ROOT / "src")}
    return subprocess.run(
        [sys.executable, "-m", "stratacode.cli", *args],
        capture_output=True,
        text=True,
        env=env,
        cwd=ROOT,
    )


@pytest.mark.e2e
class TestCliWorkflow:
    def test_validate_example_document(self):
        result = _run("validate", str(EXAMPLE_DIAGRAM))
        assert result.returncode == 0
        assert "корректна" in result.stdout.lower() or "✓" in result.stdout

    def test_homology_example_document(self):
        result = _run("homology", str(EXAMPLE_DIAGRAM), "--json")
        assert result.returncode == 0
        rows = json.loads(result.stdout)["homology"]
        assert rows[1]["invariant_factors"] == [2]

    def test_example_then_code(self, tmp_path):
        out = tmp_path / "toric.json"
        result = _run("example", "toric", "--n", "3", "-o", str(out))
        assert result.returncode == 0
        assert out.exists()

        result = _run("code", str(out), "--json")
        assert result.returncode == 0
        code = json.loads(result.stdout)["code"]
        assert (code["n"], code["k_logical"], code["distance"]) == (18, 2, 3)

    def test_surgery_workflow(self, tmp_path):
        left = tmp_path / "left.json"
        right = tmp_path / "right.json"
        for path in (left, right):
            result = _run("example", "grid", "--rows", "1", "--cols", "1", "-o", str(path))
            assert result.returncode == 0

        merged = tmp_path / "merged.json"
        shares = ["v(1,0)=v(0,0)", "v(1,1)=v(0,1)", "ev(1,0)=ev(0,0)"]
        share_args = [arg for share in shares for arg in ("--share", share)]
        result = _run(
            "surgery", str(left), str(right), *share_args, "-o", str(merged), "--json"
        )
        assert result.returncode == 0, result.stdout
        assert json.loads(result.stdout)["summary"]["strata"] == 15
        assert _run("validate", str(merged)).returncode == 0

    def test_verbose_logs_to_stderr(self):
        result = _run("validate", str(EXAMPLE_DIAGRAM), "--verbose", "--json")
        assert result.returncode == 0
        json.loads(result.stdout)
        events = [json.loads(line)["event"] for line in result.stderr.splitlines() if line]
        assert "diagram_validated" in events

    def test_missing_file_exit_code(self, tmp_path):
        result = _run("validate", str(tmp_path / "nonexistent.yaml"))
        assert result.returncode == 2
