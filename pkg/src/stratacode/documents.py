"""Документы диаграмм: JSON/YAML-схема и преобразование в доменные типы."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Annotated, Any, Literal

import yaml  # type: ignore[import-untyped]
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    ValidationError,
    model_validator,
)

from stratacode.algebra import RingTag, SparseMatrix
from stratacode.catalog import CatalogEntry, Claim, Quantity
from stratacode.constants import SCHEMA_VERSION
from stratacode.diagram import GluingMap, StratifiedDiagram, Stratum
from stratacode.errors import DocumentError
from stratacode.logging import get_logger
from stratacode.settings import get_settings

logger = get_logger(__name__)


def _parse_coefficient(value: Any) -> Any:
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError:
            raise ValueError(f"Коэффициент {value!r} не является целым числом") from None
    return value


def _encode_coefficient(value: int) -> int | str:
    return str(value) if abs(value) > get_settings().json_safe_int else value


Coefficient = Annotated[
    int, BeforeValidator(_parse_coefficient), PlainSerializer(_encode_coefficient)
]
Degree = Annotated[int, Field(ge=0)]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class MatrixDoc(_Strict):
    rows: int = Field(ge=0)
    cols: int = Field(ge=0)
    entries: list[tuple[int, int, Coefficient]] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_indices(self) -> MatrixDoc:
        for r, c, _ in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"Запись ({r}, {c}) вне матрицы {self.rows}×{self.cols}")
        return self

    @classmethod
    def of(cls, m: SparseMatrix) -> MatrixDoc:
        return cls(rows=m.rows, cols=m.cols, entries=list(m.entries))

    def to_matrix(self, ring: RingTag) -> SparseMatrix:
        return SparseMatrix.from_entries(ring, self.rows, self.cols, self.entries)


class StratumDoc(_Strict):
    id: str = Field(min_length=1)
    dim: int | None = Field(default=None, ge=0)
    modules: dict[Degree, Annotated[int, Field(ge=0)]] = Field(default_factory=dict)
    boundaries: dict[Degree, MatrixDoc] = Field(default_factory=dict)


class GluingDoc(_Strict):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    source: str = Field(alias="from", min_length=1)
    target: str = Field(alias="to", min_length=1)
    maps: dict[Degree, MatrixDoc] = Field(default_factory=dict)


class ClaimDoc(_Strict):
    quantity: Quantity
    degree: int
    value: int | list[int]
    note: str = ""


class ExampleDoc(_Strict):
    """Аннотации примера из каталога: параметры, заявленные значения, заметки."""

    name: str
    params: dict[str, bool | int | str] = Field(default_factory=dict)
    qubit_degree: int = 1
    claims: list[ClaimDoc] = Field(default_factory=list)
    notes: list[str] = Field(default_factory=list)
    expect_invalid: bool = False


def _version_tuple(text: str) -> tuple[int, int]:
    parts = text.split(".")
    try:
        return int(parts[0]), int(parts[1]) if len(parts) > 1 else 0
    except ValueError:
        raise ValueError(f"Некорректная версия схемы {text!r}") from None


class DiagramDocument(_Strict):
    """Документ диаграммы.

    Совместимы версии схемы с тем же major и minor не новее SCHEMA_VERSION:
    более новый minor может нести поля, которых этот код не знает.
    """

    schema_version: str = SCHEMA_VERSION
    ring: Literal["F2", "Z"]
    strata: list[StratumDoc]
    gluings: list[GluingDoc] = Field(default_factory=list)
    example: ExampleDoc | None = None

    @model_validator(mode="after")
    def check_document(self) -> DiagramDocument:
        major, minor = _version_tuple(self.schema_version)
        supported_major, supported_minor = _version_tuple(SCHEMA_VERSION)
        if major != supported_major or minor > supported_minor:
            raise ValueError(
                f"Неподдерживаемая версия схемы {self.schema_version!r}, "
                f"ожидалась {SCHEMA_VERSION}"
            )
        seen: set[str] = set()
        for stratum in self.strata:
            if stratum.id in seen:
                raise ValueError(f"Страта {stratum.id!r} описана дважды")
            seen.add(stratum.id)
        return self

    @property
    def ring_tag(self) -> RingTag:
        return RingTag.from_label(self.ring)


def _example_doc(entry: CatalogEntry) -> ExampleDoc:
    return ExampleDoc(
        name=entry.name,
        params=dict(entry.params),
        qubit_degree=entry.default_qubit_degree,
        claims=[
            ClaimDoc(
                quantity=claim.quantity,
                degree=claim.degree,
                value=list(claim.value) if isinstance(claim.value, tuple) else claim.value,
                note=claim.note,
            )
            for claim in entry.claims
        ],
        notes=list(entry.notes),
        expect_invalid=entry.expect_invalid,
    )


def diagram_to_document(
    d: StratifiedDiagram, entry: CatalogEntry | None = None
) -> DiagramDocument:
    strata = [
        StratumDoc(
            id=s.id,
            dim=s.dim,
            modules=dict(s.module_ranks),
            boundaries={k: MatrixDoc.of(m) for k, m in s.local_boundaries.items()},
        )
        for s in d.strata.values()
    ]
    gluings = [
        GluingDoc(
            source=g.source,
            target=g.target,
            maps={k: MatrixDoc.of(m) for k, m in g.maps.items()},
        )
        for g in d.gluings.values()
    ]
    return DiagramDocument(
        ring=d.ring.label,
        strata=strata,
        gluings=gluings,
        example=_example_doc(entry) if entry is not None else None,
    )


def document_to_diagram(doc: DiagramDocument) -> StratifiedDiagram:
    ring = doc.ring_tag
    strata = [
        Stratum(
            module_ranks=s.modules,
            local_boundaries={k: m.to_matrix(ring) for k, m in s.boundaries.items()},
            id=s.id,
            dim=s.dim,
        )
        for s in doc.strata
    ]
    gluings = [
        GluingMap(g.source, g.target, {k: m.to_matrix(ring) for k, m in g.maps.items()})
        for g in doc.gluings
    ]
    return StratifiedDiagram.from_parts(ring, strata, gluings)


def dump_json(payload: Any) -> str:
    """Каноническая JSON-строка: сортировка ключей, UTF-8, отступ 2."""
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2)


def document_payload(doc: BaseModel) -> Any:
    return doc.model_dump(mode="json", by_alias=True, exclude_none=True)


def serialize_diagram(d: StratifiedDiagram, entry: CatalogEntry | None = None) -> str:
    return dump_json(document_payload(diagram_to_document(d, entry)))


def parse_document(text: str, *, source: str = "<string>") -> DiagramDocument:
    """Разобрать документ диаграммы из JSON или YAML."""
    stripped = text.lstrip()
    try:
        if stripped.startswith(("{", "[")):
            raw = json.loads(text)
        else:
            raw = yaml.safe_load(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"Ошибка разбора JSON в {source}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise DocumentError(f"Ошибка разбора YAML в {source}: {exc}") from exc
    if not isinstance(raw, dict):
        raise DocumentError(f"Документ {source} должен быть объектом")
    try:
        doc = DiagramDocument.model_validate(raw)
    except ValidationError as exc:
        raise DocumentError(f"Ошибка валидации документа {source}:\n{exc}") from exc
    logger.debug("document_parsed", source=source, strata=len(doc.strata))
    return doc


def load_document(path: Path) -> DiagramDocument:
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise DocumentError(f"Не удалось прочитать {path}: {exc}") from exc
    return parse_document(text, source=str(path))


def load_diagram(path: Path) -> StratifiedDiagram:
    return document_to_diagram(load_document(path))


def write_diagram(
    path: Path, d: StratifiedDiagram, entry: CatalogEntry | None = None
) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize_diagram(d, entry) + "\n", encoding="utf-8")
    logger.info("document_written", path=str(path), strata=len(d.strata))
    return path


def entry_from_document(doc: DiagramDocument, d: StratifiedDiagram) -> CatalogEntry | None:
    """Восстановить аннотации примера каталога, сохранённые вместе с диаграммой."""
    if doc.example is None:
        return None
    info = doc.example
    claims = tuple(
        Claim(
            quantity=claim.quantity,
            degree=claim.degree,
            value=tuple(claim.value) if isinstance(claim.value, list) else claim.value,
            note=claim.note,
        )
        for claim in info.claims
    )
    return CatalogEntry(
        name=info.name,
        params=dict(info.params),
        diagram=d,
        default_qubit_degree=info.qubit_degree,
        claims=claims,
        notes=tuple(info.notes),
        expect_invalid=info.expect_invalid,
    )
