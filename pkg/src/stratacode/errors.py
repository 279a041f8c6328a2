"""Иерархия доменных ошибок stratacode."""

from __future__ import annotations


class StrataError(Exception):
    """Базовая ошибка вычислений над стратифицированными диаграммами."""


class AlgebraError(StrataError):
    pass


class RingMismatchError(AlgebraError):
    pass


class DimensionMismatchError(AlgebraError):
    pass


class SizeLimitExceeded(AlgebraError):
    pass


class MalformedMatrix(AlgebraError):
    pass


class DiagramError(StrataError):
    pass


class CycleDetected(DiagramError):
    pass


class TransitivityViolation(DiagramError):
    """Композиция глюингов вдоль разных путей (или явное отображение) не совпадает."""

    def __init__(self, pair: tuple[str, str], degree: int, via: str | None = None) -> None:
        self.pair = pair
        self.degree = degree
        self.via = via
        where = f"через {via}" if via is not None else "с явным отображением"
        super().__init__(
            f"Нарушена транзитивность для пары ({pair[0]}, {pair[1]}) в степени {degree} {where}"
        )


class MissingCover(DiagramError):
    def __init__(self, pair: tuple[str, str]) -> None:
        self.pair = pair
        super().__init__(f"Для покрывающей пары ({pair[0]}, {pair[1]}) не задан глюинг")


class UnknownStratum(DiagramError):
    pass


class MalformedDiagram(DiagramError):
    pass


class ColimitError(StrataError):
    pass


class PreconditionFailed(ColimitError):
    pass


class TorsionChainModule(ColimitError):
    def __init__(self, degree: int, factors: list[int]) -> None:
        self.degree = degree
        self.factors = factors
        super().__init__(
            f"Фактормодуль в степени {degree} имеет кручение {factors}: "
            "цепной модуль колимита не свободен"
        )


class IncompatibleCocone(ColimitError):
    pass


class NotAChainMap(ColimitError):
    pass


class EmbeddingNotFull(ColimitError):
    pass


class DegeneratePairing(StrataError):
    pass


class CatalogError(StrataError):
    pass


class UnknownExample(CatalogError):
    pass


class ParameterOutOfRange(CatalogError):
    pass


class DocumentError(StrataError):
    """Ошибка чтения или разбора документа диаграммы."""
