"""Канонический колимит-комплекс, универсальное свойство и склейка диаграмм."""

from __future__ import annotations

from stratacode.colimit.core import (
    ColimitComplex,
    DegreeData,
    ScaffoldLayout,
    boundary_compatibility_check,
    build,
    relation_generators,
    scaffold_boundary,
    structure_map,
)
from stratacode.colimit.pushout import pushout
from stratacode.colimit.universal import ChainMap, Cocone, mediating_map, structure_cocone

__all__ = [
    "ChainMap",
    "Cocone",
    "ColimitComplex",
    "DegreeData",
    "ScaffoldLayout",
    "boundary_compatibility_check",
    "build",
    "mediating_map",
    "pushout",
    "relation_generators",
    "scaffold_boundary",
    "structure_cocone",
    "structure_map",
]
