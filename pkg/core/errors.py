"""
Иерархия исключений движка и диагностические сообщения с позициями
"""

from dataclasses import dataclass
from typing import Optional

from config.settings import EXIT_INVALID, EXIT_CAP_EXCEEDED


class SemioError(Exception):
    """Базовая ошибка движка. exit_code - код завершения CLI."""

    exit_code = EXIT_INVALID


class AlgebraError(SemioError):
    pass


class RelationError(SemioError):
    pass


class AmbiguousMatchError(RelationError):
    """Один и тот же знак встречается дважды на границе свертки."""


class DiagramError(SemioError):
    pass


class GrammarError(SemioError):
    pass


class SemioticError(SemioError):
    pass


class IntegrationClashError(SemioticError):
    """Одинаковые имена с разной интерпретацией в интегрируемых семиотиках."""

    def __init__(self, message, sources=(), witness=None):
        super().__init__(message)
        self.sources = tuple(sources)
        self.witness = witness


class InferenceError(SemioError):
    pass


class CapExceededError(SemioError):
    """Перебор кортежей превышает допустимый предел."""

    exit_code = EXIT_CAP_EXCEEDED

    def __init__(self, required, cap):
        super().__init__(
            f"Требуется перебрать {required} кортежей, предел {cap} (увеличьте --cap)"
        )
        self.required = required
        self.cap = cap


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int
    end_column: Optional[int] = None

    @classmethod
    def file_start(cls, file):
        """Позиция для ошибок уровня файла."""
        return cls(file, 1, 1, 2)

    def __str__(self):
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    message: str
    span: Optional[SourceSpan] = None
    kind: str = "error"

    def __str__(self):
        where = f"{self.span}: " if self.span else ""
        return f"{where}{self.kind}: {self.message}"


class SpecError(SemioError):
    """Ошибки разбора или проверки файла спецификации."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))
