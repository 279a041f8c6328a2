from __future__ import annotations

SCHEMA_VERSION = "1.0"

DEFAULT_DISTANCE_BUDGET = 2**24
JSON_SAFE_INT = 2**53

EXHAUSTIVE_HOMOLOGY_MAX_DIM = 20
NAIVE_SNF_MAX_SIZE = 6
PAULI_ORACLE_MAX_QUBITS = 64

STRATUM_PREFIXES = ("a/", "b/")

HASSE_PREVIEW_LINES = 40

LOG_PREVIEW_ITEMS = 16
