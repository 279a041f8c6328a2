from __future__ import annotations

from pathlib import Path

import pytest

from stratacode.catalog import dangling_square
from stratacode.documents import write_diagram

EXAMPLE_DIAGRAM = Path(__file__).resolve().parents[2] / "diagram.example.yaml"


@pytest.fixture
def example_diagram() -> Path:
    return EXAMPLE_DIAGRAM


@pytest.fixture
def dangling_document(tmp_path: Path) -> Path:
    entry = dangling_square()
    return write_diagram(tmp_path / "dangling.json", entry.diagram, entry)
