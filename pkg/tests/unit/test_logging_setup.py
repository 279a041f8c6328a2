from __future__ import annotations

import ast
import logging
import re
import warnings
from pathlib import Path

import numpy as np

import stratacode.logging as log_mod
from stratacode.algebra import RingTag, SparseMatrix
from stratacode.constants import LOG_PREVIEW_ITEMS
from stratacode.logging import _compact_payload, get_logger, setup_logging


class TestSetupLogging:
    def test_valid_level_no_warning(self, monkeypatch):
        monkeypatch.delenv("STRATACODE_LOG_LEVEL", raising=False)
        with warnings.catch_warnings():
            warnings.simplefilter("error", UserWarning)
            setup_logging("DEBUG", force=True)
        assert logging.getLogger().level == logging.DEBUG

    def test_invalid_level_emits_warning(self):
        with warnings.catch_warnings(record=True) as w:
            warnings.simplefilter("always")
            setup_logging("BOGUS", force=True)
            log_warnings = [x for x in w if "BOGUS" in str(x.message)]
            assert len(log_warnings) == 1


class TestGetLogger:
    def test_get_logger_binds_name(self):
        logger = get_logger("my.module")
        assert "my.module" in str(logger)


class TestCompactPayload:
    def test_matrix_summarized(self):
        m = SparseMatrix.from_entries(RingTag.GF2, 3, 4, [(0, 0, 1), (2, 3, 1)])
        result = _compact_payload(None, "info", {"event": "test", "boundary": m})
        assert result["boundary"] == "SparseMatrix(F2 3×4, nnz=2)"

    def test_array_summarized(self):
        result = _compact_payload(None, "info", {"event": "test", "rows": np.zeros((2, 5))})
        assert result["rows"] == "ndarray(2×5, float64)"

    def test_long_list_truncated(self):
        values = list(range(LOG_PREVIEW_ITEMS + 5))
        result = _compact_payload(None, "info", {"event": "test", "ranks": values})
        assert result["ranks"][:LOG_PREVIEW_ITEMS] == values[:LOG_PREVIEW_ITEMS]
        assert result["ranks"][-1] == "… +5"

    def test_plain_values_untouched(self):
        event_dict = {"event": "test", "path": "diagram.yaml", "ranks": [1, 3, 1]}
        result = _compact_payload(None, "info", dict(event_dict))
        assert result == event_dict


class TestEnvConfig:
    def test_env_var_overrides_level(self, monkeypatch):
        monkeypatch.setenv("STRATACODE_LOG_LEVEL", "DEBUG")
        monkeypatch.setattr(log_mod, "_configured", False)
        setup_logging("WARNING", force=True)
        root_level = logging.getLogger().level
        assert root_level == logging.DEBUG

    def test_log_file(self, monkeypatch, tmp_path):
        log_file = tmp_path / "stratacode.log"
        monkeypatch.setenv("STRATACODE_LOG_FILE", str(log_file))
        setup_logging("INFO", force=True)
        logging.getLogger("stratacode").warning("file_handler_check")
        for handler in logging.getLogger().handlers:
            handler.flush()
        assert "file_handler_check" in log_file.read_text(encoding="utf-8")

    def test_setup_idempotent(self, monkeypatch):
        monkeypatch.setattr(log_mod, "_configured", False)
        setup_logging(force=True)
        setup_logging()
        setup_logging()


_EVENT_NAME_RE = re.compile(r"^[a-z][a-z0-9_]*$")
_CYRILLIC_RE = re.compile(r"[\u0400-\u04FF]")
_LOG_METHODS = frozenset({"debug", "info", "warning", "error", "critical", "exception"})


def _event_argument(node: ast.Call) -> ast.expr | None:
    func = node.func
    if isinstance(func, ast.Name) and func.id == "log_duration":
        return node.args[1] if len(node.args) > 1 else None
    if (
        isinstance(func, ast.Attribute)
        and func.attr in _LOG_METHODS
        and isinstance(func.value, ast.Name)
        and func.value.id == "logger"
    ):
        return node.args[0] if node.args else None
    return None


def _extract_event_names() -> list[tuple[str, int, str]]:
    src_root = Path(__file__).resolve().parents[2] / "src" / "stratacode"
    results: list[tuple[str, int, str]] = []
    for py_file in src_root.rglob("*.py"):
        tree = ast.parse(py_file.read_text(encoding="utf-8"), filename=str(py_file))
        for node in ast.walk(tree):
            if not isinstance(node, ast.Call):
                continue
            arg = _event_argument(node)
            if isinstance(arg, ast.Constant) and isinstance(arg.value, str):
                rel = py_file.relative_to(src_root)
                results.append((str(rel), arg.end_lineno or 0, arg.value))
    return results


class TestEventNameConventions:
    def test_no_cyrillic_in_event_names(self):
        violations = []
        for file, line, event in _extract_event_names():
            if _CYRILLIC_RE.search(event):
                violations.append(f"{file}:{line} -> {event!r}")
        assert violations == [], "Cyrillic found in event names:\n" + "\n".join(violations)

    def test_event_names_snake_case(self):
        violations = []
        for file, line, event in _extract_event_names():
            if not _EVENT_NAME_RE.match(event):
                violations.append(f"{file}:{line} -> {event!r}")
        assert violations == [], "Non-snake_case event names:\n" + "\n".join(violations)

    def test_timed_events_found(self):
        events = {event for _, _, event in _extract_event_names()}
        assert {"colimit_build", "homology_table", "gluings_resolved"} <= events
