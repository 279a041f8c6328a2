"""structlog: JSON в stderr, operation_id и тайминги.

Процессор _compact_payload стоит в цепочке до рендера: SparseMatrix и ndarray в полях
события заменяются строкой с формой, кольцом или dtype и числом ненулевых элементов, а
списки длиннее LOG_PREVIEW_ITEMS обрезаются до головы с пометкой «… +N». Так события
колимита и гомологий можно логировать с самими матрицами без многомегабайтных строк.
Та же цепочка используется для файлового обработчика (STRATACODE_LOG_FILE).
"""

from __future__ import annotations

import contextlib
import logging
import os
import sys
import time
import uuid
import warnings
from collections.abc import Generator, MutableMapping
from logging.handlers import RotatingFileHandler
from typing import Any

import numpy as np
import structlog

from stratacode.algebra.matrix import SparseMatrix
from stratacode.constants import LOG_PREVIEW_ITEMS

_configured = False


def _compact(value: Any) -> Any:
    if isinstance(value, SparseMatrix):
        shape = f"{value.rows}×{value.cols}"
        return f"SparseMatrix({value.ring.label} {shape}, nnz={len(value.entries)})"
    if isinstance(value, np.ndarray):
        return f"ndarray({'×'.join(map(str, value.shape))}, {value.dtype})"
    if isinstance(value, list | tuple) and len(value) > LOG_PREVIEW_ITEMS:
        head = [_compact(v) for v in value[:LOG_PREVIEW_ITEMS]]
        return [*head, f"… +{len(value) - LOG_PREVIEW_ITEMS}"]
    return value


def _compact_payload(
    logger: Any, method: str, event_dict: MutableMapping[str, Any]
) -> MutableMapping[str, Any]:
    """Матрицы и длинные списки в событии заменяются короткой сводкой."""
    for k, v in event_dict.items():
        if k != "event":
            event_dict[k] = _compact(v)
    return event_dict


def _pre_chain() -> list[Any]:
    return [
        structlog.contextvars.merge_contextvars,
        _compact_payload,
        structlog.processors.add_log_level,
        structlog.processors.TimeStamper(fmt="iso"),
    ]


class _LazyStderrFactory:
    def __call__(self, *args: object, **kwargs: object) -> structlog.PrintLogger:
        return structlog.PrintLogger(sys.stderr)


def _resolve_level(level: str) -> int:
    resolved = getattr(logging, level.upper(), None)
    if isinstance(resolved, int):
        return resolved
    warnings.warn(f"Unknown log level {level!r}, falling back to INFO", stacklevel=3)
    return logging.INFO


def _attach_file_handler(path: str) -> None:
    handler = RotatingFileHandler(path, maxBytes=10_000_000, backupCount=3, encoding="utf-8")
    handler.setFormatter(
        structlog.stdlib.ProcessorFormatter(
            processor=structlog.processors.JSONRenderer(ensure_ascii=False),
            foreign_pre_chain=_pre_chain(),
        )
    )
    logging.getLogger().addHandler(handler)


def setup_logging(level: str = "WARNING", *, force: bool = False) -> None:
    """Настроить structlog; STRATACODE_LOG_LEVEL и STRATACODE_LOG_FILE имеют приоритет."""
    global _configured  # noqa: PLW0603
    if _configured and not force:
        return

    resolved = _resolve_level(os.environ.get("STRATACODE_LOG_LEVEL") or level)
    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=resolved, force=True)

    log_file = os.environ.get("STRATACODE_LOG_FILE")
    if log_file:
        _attach_file_handler(log_file)

    structlog.configure(
        processors=[
            *_pre_chain(),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.JSONRenderer(ensure_ascii=False),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(resolved),
        logger_factory=_LazyStderrFactory(),
    )
    _configured = True


def get_logger(name: str) -> structlog.BoundLogger:
    return structlog.get_logger(name)  # type: ignore[no-any-return]


@contextlib.contextmanager
def bound_operation(**extra: Any) -> Generator[str, None, None]:
    """Привязать operation_id к контексту structlog, если он ещё не задан."""
    current = structlog.contextvars.get_contextvars()
    if "operation_id" in current:
        yield str(current["operation_id"])
        return
    operation_id = uuid.uuid4().hex[:8]
    with structlog.contextvars.bound_contextvars(operation_id=operation_id, **extra):
        yield operation_id


@contextlib.contextmanager
def log_duration(
    logger: structlog.BoundLogger, event: str, level: str = "info", **extra: Any
) -> Generator[dict[str, Any], None, None]:
    bag: dict[str, Any] = {}
    t0 = time.monotonic()
    try:
        yield bag
    finally:
        elapsed_ms = round((time.monotonic() - t0) * 1000, 1)
        getattr(logger, level)(event, duration_ms=elapsed_ms, **extra, **bag)
