"""Колимит-комплексы стратифицированных диаграмм и CSS-коды."""

__version__ = "0.1.0"
