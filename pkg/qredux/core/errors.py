"""
Исключения qredux.

Иерархия повторяет коды завершения CLI: ошибки области определения (1),
ошибки точности (2), ошибки использования (3).
"""

from typing import Any, List, Optional


class QreduxError(Exception):
    """Базовое исключение пакета."""

    exit_code = 2


class DomainError(QreduxError, ValueError):
    """Нарушено предусловие операции: аргумент вне области определения."""

    exit_code = 1


class ContractError(DomainError):
    """Переданная пользователем функция не удовлетворяет контракту."""


class CapacityError(DomainError):
    """Превышено ограничение по памяти или стоимости вычисления."""


class InfiniteDivergenceError(QreduxError):
    """
    Относительная энтропия бесконечна: носитель rho1 не лежит в носителе rho2.

    Это не численная ошибка, а корректный ответ +inf.
    """

    exit_code = 1

    def __init__(self, message: str, weight: float):
        super().__init__(message)
        self.weight = weight


class AccuracyError(QreduxError, ArithmeticError):
    """Численный метод не сошелся; лучшая оценка прикладывается."""

    exit_code = 2

    def __init__(self, message: str, best_estimate: Optional[float] = None):
        super().__init__(message)
        self.best_estimate = best_estimate


class ConsistencyError(AccuracyError):
    """Нарушена внутренняя согласованность (например, вырожденный ранг)."""


class SearchError(AccuracyError):
    """Не удалось найти интервал со сменой знака."""

    def __init__(self, message: str, trace: Optional[List[Any]] = None):
        super().__init__(message)
        self.trace = trace or []


class UsageError(QreduxError):
    """Некорректные аргументы командной строки."""

    exit_code = 3


def exit_code_for(exc: BaseException) -> int:
    """
    Возвращает код завершения CLI для исключения.

    Args:
        exc: Перехваченное исключение

    Returns:
        int: 1 для ошибок области, 2 для ошибок точности, 3 для ошибок использования
    """
    if isinstance(exc, QreduxError):
        return exc.exit_code
    if isinstance(exc, ValueError):
        return 1
    return 2
