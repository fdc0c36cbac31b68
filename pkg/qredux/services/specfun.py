"""
Специальные функции, точная комбинаторика и квадратура по радиусу.

Гамма-функция и ее логарифмические производные берутся из scipy.special;
интеграл по (0, 1) с особенностью (1 - r^2)^(-u) на правом конце
считается двойной экспоненциальной (tanh-sinh) квадратурой.
"""

import logging
import math
from typing import Callable, Optional, Tuple, Union

import numpy as np
from scipy.special import expit, gammaln, gammasgn, log_expit, polygamma, psi

from qredux.core.config import settings
from qredux.core.errors import AccuracyError, DomainError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# exp(-745) ниже наименьшего субнормального double
_LOG_UNDERFLOW = 745.0
# Узел с неконечным значением отбрасывается, если при |f| <= e^20 его вклад ниже tol
_LOG_MARGIN = 20.0


def _require_positive(x: ArrayLike, name: str) -> None:
    if np.any(np.asarray(x) <= 0) or np.any(np.isnan(x)):
        raise DomainError(f"{name}: аргумент должен быть положительным, получено {x}")


def _as_result(value: np.ndarray, x: ArrayLike) -> ArrayLike:
    return float(value) if np.ndim(x) == 0 else value


def log_gamma(x: ArrayLike) -> ArrayLike:
    """
    Логарифм гамма-функции для x > 0.

    Args:
        x: Положительное число или массив

    Returns:
        log Γ(x) той же формы

    Raises:
        DomainError: Если x <= 0
    """
    _require_positive(x, "log_gamma")
    return _as_result(gammaln(x), x)


def log_gamma_signed(x: float) -> Tuple[float, float]:
    """
    Возвращает (log|Γ(x)|, sign Γ(x)) для любого x, кроме полюсов 0, -1, -2, ...

    Нужна для собственных значений на расширенной области d = -1.
    """
    if x <= 0 and float(x).is_integer():
        raise DomainError(f"Γ(x) имеет полюс в x = {x}")
    return float(gammaln(x)), float(gammasgn(x))


def digamma(x: ArrayLike) -> ArrayLike:
    """Дигамма-функция psi(x) = Γ'(x)/Γ(x) для x > 0."""
    _require_positive(x, "digamma")
    return _as_result(psi(x), x)


def trigamma(x: ArrayLike) -> ArrayLike:
    """Тригамма-функция psi'(x) для x > 0."""
    _require_positive(x, "trigamma")
    return _as_result(polygamma(1, x), x)


def binomial(n: int, k: int) -> int:
    """
    Точный биномиальный коэффициент.

    Args:
        n: Верхний индекс
        k: Нижний индекс

    Returns:
        int: C(n, k); 0, если k вне [0, n]
    """
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def log_binomial(n: float, k: float) -> float:
    """log C(n, k) через log-гамму, для аргументов, где целое значение огромно."""
    return float(gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1))


def catalan(m: int) -> int:
    """Число Каталана C(2m, m)/(m + 1)."""
    if m < 0:
        raise DomainError(f"Номер числа Каталана должен быть неотрицательным: {m}")
    return math.comb(2 * m, m) // (m + 1)


def beta_integral(m: float, u: float) -> float:
    """
    Замкнутая форма ∫_0^1 r^m (1 - r^2)^(-u) dr = Γ((m+1)/2) Γ(1-u) / (2 Γ((m+3)/2 - u)).
    """
    if u >= 1:
        raise DomainError(f"Интеграл расходится при u = {u} >= 1")
    return math.exp(
        gammaln((m + 1) / 2) + gammaln(1 - u) - gammaln((m + 3) / 2 - u)
    ) / 2


def _t_range(u: float) -> Tuple[float, float]:
    # Вес убывает как exp(-pi sinh|t|) слева и как exp(-(1-u) pi sinh t) справа
    left = math.asinh(_LOG_UNDERFLOW / math.pi)
    right = math.asinh(_LOG_UNDERFLOW / ((1.0 - u) * math.pi))
    return left, right


def _level_nodes(h: float, left: float, right: float, odd: bool) -> np.ndarray:
    j = np.arange(math.ceil(-left / h), math.floor(right / h) + 1)
    if odd:
        j = j[j % 2 == 1]
    return j.astype(float) * h


def _tanh_sinh_level(
    f: Callable[..., ArrayLike], u: float, t: np.ndarray, complement: bool, log_negligible: float
) -> float:
    y = math.pi * np.sinh(t)
    log_w = (
        np.log(math.pi * np.cosh(t))
        + log_expit(y)
        + (1.0 - u) * log_expit(-y)
        - u * np.log1p(expit(y))
    )
    keep = log_w > -_LOG_UNDERFLOW
    if not np.any(keep):
        return 0.0
    y, log_w = y[keep], log_w[keep]
    r = expit(y)
    c = expit(-y)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        values = f(r, c) if complement else f(r)
    values = np.broadcast_to(np.asarray(values, dtype=float), r.shape)

    finite = np.isfinite(values)
    if not np.all(finite):
        # 1 - r ушло в underflow; допустимо только там, где вес пренебрежимо мал
        worst = float(np.max(log_w[~finite]))
        if worst > log_negligible:
            raise AccuracyError(
                f"Подынтегральная функция не конечна при r = {float(np.max(r[~finite]))!r} "
                f"(log-вес {worst:.1f})"
            )
        values = np.where(finite, values, 0.0)
    return float(np.sum(np.exp(log_w) * values))


def integrate_radial(
    f: Callable[..., ArrayLike],
    u: float,
    complement: bool = False,
    tol: Optional[float] = None,
    max_level: Optional[int] = None,
) -> float:
    """
    Вычисляет ∫_0^1 f(r) (1 - r^2)^(-u) dr квадратурой tanh-sinh.

    Замена r = (1 + tanh(pi/2 sinh t))/2 уводит обе особенности на бесконечность;
    множитель (1 - r)^(-u) учитывается в логарифме веса, поэтому f должна быть
    гладкой. Шаг уменьшается вдвое до совпадения соседних уровней.

    Args:
        f: Векторизованная функция r -> значение (или (r, 1 - r) -> значение при complement)
        u: Показатель особенности, u < 1
        complement: Передавать ли в f точное дополнение 1 - r вторым аргументом
        tol: Порог сходимости (по умолчанию settings.quad_tol)
        max_level: Максимальный уровень (по умолчанию settings.quad_max_level)

    Returns:
        float: Значение интеграла

    Raises:
        DomainError: Если u >= 1
        AccuracyError: Если уровни не совпали до max_level
    """
    if not u < 1:
        raise DomainError(f"Интеграл расходится при u = {u} >= 1")
    tol = settings.quad_tol if tol is None else tol
    max_level = settings.quad_max_level if max_level is None else max_level

    left, right = _t_range(u)
    log_negligible = math.log(tol) - _LOG_MARGIN
    logger.debug(f"tanh-sinh при u = {u}: t ∈ [{-left:.3f}, {right:.3f}]")
    nodes = _level_nodes(1.0, left, right, odd=False)
    total = _tanh_sinh_level(f, u, nodes, complement, log_negligible)
    estimate = total
    for level in range(1, max_level + 1):
        h = 2.0 ** -level
        nodes = _level_nodes(h, left, right, odd=True)
        total += _tanh_sinh_level(f, u, nodes, complement, log_negligible)
        previous, estimate = estimate, total * h
        if not math.isfinite(estimate):
            raise AccuracyError(f"Квадратура дала {estimate} на уровне {level}", best_estimate=previous)
        if level >= 3 and abs(estimate - previous) <= tol * max(1.0, abs(estimate)):
            logger.debug(f"tanh-sinh сошлась на уровне {level}: {estimate}")
            return estimate

    raise AccuracyError(
        f"Квадратура tanh-sinh не сошлась за {max_level} уровней", best_estimate=estimate
    )
