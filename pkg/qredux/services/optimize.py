"""
Поиск оптимальных параметров семейства q(u).

minimax_u: u_n, при котором избыточности в центре и на границе шара совпадают.
maximin_u: максимум постоянной C(u) байесовской избыточности.
rmax_scan: профиль точной избыточности по r и его максимум.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from qredux.core.config import settings
from qredux.core.errors import ConsistencyError, DomainError, SearchError
from qredux.models.schemas import (
    DensityMatrix,
    MaximinResult,
    MinimaxResult,
    OptimalityCheck,
    RScanResult,
)
from qredux.services.qstate import relative_entropy
from qredux.services.redundancy import bayes_constant, relative_entropy_exact
from qredux.services.specfun import trigamma

logger = logging.getLogger(__name__)

# Диапазон поиска u_n: 1 - u от 1e-3 до 9
_MINIMAX_SPAN = (1e-3, 9.0)

# Интервал уравнения максимина: h(0) > 0, h(0.9) < 0
_MAXIMIN_BRACKET = (0.0, 0.9)


def _map(func: Callable[[float], float], points: Sequence[float]) -> List[float]:
    if settings.threads > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=settings.threads) as executor:
            return list(executor.map(func, points))
    return [func(x) for x in points]


def _sign_changes(points: Sequence[float], values: Sequence[float]) -> List[Tuple[float, float]]:
    brackets = []
    for left, right, f_left, f_right in zip(points, points[1:], values, values[1:]):
        if f_left == 0.0:
            brackets.append((left, left))
        elif f_left * f_right < 0.0:
            brackets.append((left, right))
    return brackets


def _refine(func: Callable[[float], float], bracket: Tuple[float, float]) -> float:
    left, right = bracket
    if left == right:
        return left
    return brentq(func, left, right, xtol=settings.root_xtol)


# =============================================================================
# МИНИМАКС
# =============================================================================


def minimax_gap(n: int, u: float) -> float:
    """g(u) = S(n, u, r=0) - S(n, u, r=1)."""
    return relative_entropy_exact(n, u, 0.0) - relative_entropy_exact(n, u, 1.0)


def minimax_u(n: int) -> MinimaxResult:
    """
    Корень u_n уравнения S(n, u, 0) = S(n, u, 1) на u ∈ [-8, 0.999].

    Интервал находится сканированием settings.scan_points точек, где 1 - u
    распределено логарифмически; каждая смена знака уточняется методом Брента.
    Если смен несколько, основным считается корень с наименьшим u.

    Raises:
        DomainError: Если n < 1
        SearchError: Если смены знака нет (след сканирования прикладывается)
    """
    if n < 1:
        raise DomainError(f"Число кубитов должно быть положительным: {n}")
    low, high = _MINIMAX_SPAN
    points = sorted(float(1.0 - x) for x in np.geomspace(low, high, settings.scan_points))
    values = [minimax_gap(n, u) for u in points]
    brackets = _sign_changes(points, values)
    if not brackets:
        raise SearchError(
            f"Нет смены знака S(r=0) - S(r=1) при n = {n}",
            trace=list(zip(points, values)),
        )

    def gap(u: float) -> float:
        return minimax_gap(n, u)

    roots = [_refine(gap, bracket) for bracket in brackets]
    if len(roots) > 1:
        logger.warning(f"При n = {n} найдено {len(roots)} корней: {roots}")
    u_n = roots[0]
    logger.info(f"u_{n} = {u_n:.12f}")
    return MinimaxResult(
        n=n,
        u_n=u_n,
        value=relative_entropy_exact(n, u_n, 0.0),
        bracket=brackets[0],
        residual=abs(gap(u_n)),
        other_roots=roots[1:],
    )


def minimax_sequence(ns: Iterable[int]) -> List[MinimaxResult]:
    """minimax_u для каждого n из ns."""
    return [minimax_u(n) for n in ns]


# =============================================================================
# МАКСИМИН
# =============================================================================


def maximin_equation(u: float) -> float:
    """h(u) = 2 (1-u)^3 (ψ'(1-u) - ψ'(5/2-u)) - 1; нуль h совпадает с dC/du = 0."""
    if not u < 1:
        raise DomainError(f"Параметр u должен быть меньше 1: {u}")
    return 2.0 * (1.0 - u) ** 3 * (trigamma(1.0 - u) - trigamma(2.5 - u)) - 1.0


def maximin_u() -> MaximinResult:
    """
    Решение уравнения максимина и значение C(u*).

    Raises:
        SearchError: Если на интервале нет смены знака
    """
    low, high = _MAXIMIN_BRACKET
    h_low, h_high = maximin_equation(low), maximin_equation(high)
    if h_low * h_high > 0:
        raise SearchError(
            "Уравнение максимина не меняет знак на интервале",
            trace=[(low, h_low), (high, h_high)],
        )
    u_star = brentq(maximin_equation, low, high, xtol=settings.root_xtol)
    return MaximinResult(
        u_star=u_star,
        constant=bayes_constant(u_star),
        equation_residual=abs(maximin_equation(u_star)),
    )


def maximin_profile(grid: int, lower: float = 0.0, upper: float = 0.95) -> List[Tuple[float, float, float]]:
    """Тройки (u, C(u), h(u)) на равномерной сетке."""
    if grid < 2:
        raise DomainError(f"Размер сетки должен быть не меньше 2: {grid}")
    return [
        (float(u), bayes_constant(float(u)), maximin_equation(float(u)))
        for u in np.linspace(lower, upper, grid)
    ]


# =============================================================================
# СКАНИРОВАНИЕ ПО r
# =============================================================================


def rmax_scan(n: int, u: float, grid: int = 64) -> RScanResult:
    """
    Максимум точной избыточности по r ∈ [0, 1].

    Значения считаются на равномерной сетке; если лучшая точка внутренняя,
    она уточняется золотым сечением по соседним ячейкам.

    Args:
        n: Число кубитов
        u: Параметр, u < 1
        grid: Число точек сетки, не меньше 64
    """
    if grid < 64:
        raise DomainError(f"Сетка rmax_scan должна содержать не меньше 64 точек: {grid}")
    radii = [float(r) for r in np.linspace(0.0, 1.0, grid)]
    values = _map(lambda r: relative_entropy_exact(n, u, r), radii)
    best = int(np.argmax(values))
    argmax_r, max_value = radii[best], values[best]

    if 0 < best < grid - 1:
        try:
            result = minimize_scalar(
                lambda r: -relative_entropy_exact(n, u, r),
                bracket=(radii[best - 1], radii[best], radii[best + 1]),
                method="golden",
            )
            if -result.fun > max_value and 0.0 <= result.x <= 1.0:
                argmax_r, max_value = float(result.x), float(-result.fun)
        except ValueError as e:
            logger.debug(f"Уточнение золотым сечением пропущено: {e}")

    logger.info(f"rmax_scan n = {n}, u = {u}: максимум {max_value:.10g} при r = {argmax_r:.6f}")
    return RScanResult(
        n=n,
        u=u,
        argmax_r=argmax_r,
        max_value=max_value,
        profile=list(zip(radii, values)),
    )


# =============================================================================
# БАЙЕСОВСКАЯ ОПТИМАЛЬНОСТЬ СМЕСИ
# =============================================================================


def _matrix(state) -> np.ndarray:
    if isinstance(state, DensityMatrix):
        return state.matrix
    return np.asarray(state)


def bayes_optimality_check(
    states: Sequence[DensityMatrix],
    weights: Sequence[float],
    q: Optional[DensityMatrix] = None,
) -> OptimalityCheck:
    """
    Сравнивает среднюю относительную энтропию к Q и к смеси m = sum w_i P_i.

    gap = sum w_i S(P_i, Q) - sum w_i S(P_i, m) должно совпадать с S(m, Q) >= 0,
    поэтому смесь минимизирует среднюю избыточность.

    Args:
        states: Матрицы плотности P_i одной размерности
        weights: Вероятностный вектор
        q: Сравниваемое состояние (по умолчанию максимально смешанное)

    Raises:
        DomainError: Если веса не образуют распределение или размерности различны
        InfiniteDivergenceError: Если носитель P_i выходит за носитель Q
        ConsistencyError: Если gap не совпадает с S(m, Q)
    """
    if len(states) != len(weights) or not states:
        raise DomainError("Число состояний и весов должно совпадать и быть положительным")
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0) or abs(math.fsum(w) - 1.0) > 1e-12:
        raise DomainError(f"Веса не образуют распределение: {list(w)}")
    matrices = [_matrix(state) for state in states]
    dim = matrices[0].shape[0]
    if any(m.shape != (dim, dim) for m in matrices):
        raise DomainError("Размерности состояний различаются")
    target = np.eye(dim) / dim if q is None else _matrix(q)
    if target.shape != (dim, dim):
        raise DomainError(f"Размерность Q {target.shape} не равна {dim}")

    mixture = sum(wi * m for wi, m in zip(w, matrices))
    to_target = math.fsum(wi * relative_entropy(m, target) for wi, m in zip(w, matrices) if wi > 0)
    to_mixture = math.fsum(wi * relative_entropy(m, mixture) for wi, m in zip(w, matrices) if wi > 0)
    gap = to_target - to_mixture
    s_mq = relative_entropy(mixture, target)
    if abs(gap - s_mq) > 1e-9 * max(1.0, abs(s_mq)) or gap < -1e-10:
        raise ConsistencyError(f"gap = {gap!r} не совпадает с S(m, Q) = {s_mq!r}")
    return OptimalityCheck(gap=gap, s_mq=s_mq)
