"""
Точные и асимптотические избыточности универсального кодирования кубитов.

Относительная энтропия S(rho^{⊗n} || zeta_n(u)) зависит от состояния только
через длину вектора Блоха r и сводится к сумме по уровням спектра:
n [p log p + q log q] - sum_d w_d(r) log lambda_d.
"""

import logging
import math
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import xlogy

from qredux.core.errors import DomainError
from qredux.models.schemas import (
    BayesMode,
    CheckStatus,
    ClassicalBaselines,
    IdentityParams,
    IdentityResult,
    LevelWeights,
    RedundancyReport,
    Regime,
)
from qredux.services.bayes_matrix import reduced_zeta
from qredux.services.identities import ASYMPTOTIC_IDENTITIES, EXACT_IDENTITIES
from qredux.services.priors import q_normalizer
from qredux.services.qstate import von_neumann_entropy
from qredux.services.specfun import digamma, integrate_radial, log_binomial, log_gamma
from qredux.services.spectrum import log_eigenvalues, multiplicity

logger = logging.getLogger(__name__)

# Радиусы ближе к концам отрезка считаются концами
ENDPOINT_CLAMP = 1e-14

# Допуск точных тождеств по умолчанию
IDENTITY_TOL = 1e-11

LOG2 = math.log(2.0)
LOG_PI = math.log(math.pi)


def _require_u(u: float) -> None:
    if not u < 1:
        raise DomainError(f"Параметр u должен быть меньше 1: {u}")


def _require_n(n: int) -> None:
    if n < 1:
        raise DomainError(f"Число кубитов должно быть положительным: {n}")


def clamp_radius(r: float) -> float:
    """Приводит r к 0 или 1, если он ближе ENDPOINT_CLAMP к концу отрезка."""
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"r должно лежать в [0, 1]: {r}")
    if r < ENDPOINT_CLAMP:
        return 0.0
    if r > 1.0 - ENDPOINT_CLAMP:
        return 1.0
    return r


# =============================================================================
# ВЕСА УРОВНЕЙ И ТОЧНАЯ ИЗБЫТОЧНОСТЬ
# =============================================================================


def level_weights(n: int, r: float) -> LevelWeights:
    """
    Веса w_d(r) = Tr rho^{⊗n} P_d уровней спектра zeta_n(u).

    w_d = (n-2d+1)/(n+1) C(n+1,d) ((1+r)^{n+1-d}(1-r)^d - (1+r)^d(1-r)^{n+1-d}) / (2^{n+1} r);
    при r = 0 берется предел (n-2d+1)^2 C(n+1,d) / ((n+1) 2^n), при r = 1 весь вес у d = 0.

    Args:
        n: Число кубитов
        r: Длина вектора Блоха, 0 <= r <= 1

    Returns:
        LevelWeights: Веса для d = 0..floor(n/2)
    """
    _require_n(n)
    r = clamp_radius(r)
    levels = range(n // 2 + 1)
    if r == 1.0:
        weights = [1.0] + [0.0] * (n // 2)
    elif r == 0.0:
        weights = [
            math.exp(2 * math.log(n - 2 * d + 1) + log_binomial(n + 1, d) - math.log(n + 1) - n * LOG2)
            for d in levels
        ]
    else:
        log_plus, log_minus = math.log1p(r), math.log1p(-r)
        weights = []
        for d in levels:
            head = (
                log_binomial(n + 1, d)
                + (n + 1 - d) * log_plus
                + d * log_minus
                - (n + 1) * LOG2
                - math.log(r)
            )
            tail = -math.expm1((n + 1 - 2 * d) * (log_minus - log_plus))
            weights.append((n - 2 * d + 1) / (n + 1) * math.exp(head) * tail)
    return LevelWeights(n=n, r=r, weights=weights)


def relative_entropy_exact(n: int, u: float, r: float) -> float:
    """
    S(rho^{⊗n} || zeta_n(u)) для кубита с длиной вектора Блоха r.

    Args:
        n: Число кубитов
        u: Параметр априорного распределения, u < 1
        r: Длина вектора Блоха, 0 <= r <= 1

    Returns:
        float: Относительная энтропия (натуральный логарифм)
    """
    _require_u(u)
    weights = level_weights(n, r)
    if weights.r == 1.0:
        return -float(log_eigenvalues(n, u)[0])
    p, q = (1.0 - weights.r) / 2.0, (1.0 + weights.r) / 2.0
    entropy_part = n * float(xlogy(p, p) + xlogy(q, q))
    log_lambda = log_eigenvalues(n, u)
    cross = math.fsum(
        w * float(log_lambda[d]) for d, w in enumerate(weights.weights) if w > 0.0
    )
    return entropy_part - cross


# =============================================================================
# АСИМПТОТИКИ
# =============================================================================


def _nonclassical_term(r: float) -> float:
    # (1/2r) log((1-r)/(1+r)), стремится к -1 при r -> 0
    return (math.log1p(-r) - math.log1p(r)) / (2.0 * r)


def asymptotic_redundancy(n: int, u: float, r: float, regime: Regime) -> float:
    """
    Асимптотика относительной энтропии без члена O(1/n).

    interior (0 < r < 1):
        (3/2) log n - 1/2 - (3/2) log 2 - (1-u) log(1-r^2) + (1/2r) log((1-r)/(1+r))
        + log Γ(1-u) - log Γ(5/2-u)
    center (r = 0):
        (3/2) log n - 3/2 - (3/2) log 2 + log Γ(1-u) - log Γ(5/2-u)
    boundary (r = 1):
        (2-u) log n + (2u-3) log 2 + (1/2) log pi - log Γ(5/2-u)

    Raises:
        DomainError: Если режим не соответствует r
    """
    _require_u(u)
    _require_n(n)
    regime = Regime(regime)
    log_n = math.log(n)
    prior_part = log_gamma(1.0 - u) - log_gamma(2.5 - u)
    if regime == Regime.interior:
        if not 0.0 < r < 1.0:
            raise DomainError(f"Режим interior требует 0 < r < 1: r = {r}")
        return (
            1.5 * log_n - 0.5 - 1.5 * LOG2
            - (1.0 - u) * math.log1p(-r * r)
            + _nonclassical_term(r)
            + prior_part
        )
    if regime == Regime.center:
        if r != 0.0:
            raise DomainError(f"Режим center требует r = 0: r = {r}")
        return 1.5 * log_n - 1.5 - 1.5 * LOG2 + prior_part
    if r != 1.0:
        raise DomainError(f"Режим boundary требует r = 1: r = {r}")
    return (2.0 - u) * log_n + (2.0 * u - 3.0) * LOG2 + 0.5 * LOG_PI - log_gamma(2.5 - u)


def regime_for(r: float) -> Regime:
    """Асимптотический режим по (приведенному) радиусу."""
    r = clamp_radius(r)
    if r == 0.0:
        return Regime.center
    if r == 1.0:
        return Regime.boundary
    return Regime.interior


def redundancy_report(n: int, u: float, r: float) -> RedundancyReport:
    """Точное значение, асимптотика и масштабированная ошибка n |exact - asymptotic|."""
    r = clamp_radius(r)
    regime = regime_for(r)
    exact = relative_entropy_exact(n, u, r)
    asymptotic = asymptotic_redundancy(n, u, r, regime)
    return RedundancyReport(
        n=n,
        u=u,
        r=r,
        regime=regime,
        exact=exact,
        asymptotic=asymptotic,
        scaled_error=n * abs(exact - asymptotic),
    )


def interior_limit_at_boundary(n: int, u: float) -> float:
    """
    Предел внутренней асимптотики при r -> 1.

    Член -(1-u) log(1-r^2) уходит в +inf при u < 1/2 и компенсируется
    логарифмом из (1/2r) log((1-r)/(1+r)) только при u = 1/2.
    """
    _require_u(u)
    _require_n(n)
    if u < 0.5:
        return math.inf
    if u > 0.5:
        return -math.inf
    return 1.5 * math.log(n) - 0.5 - 2.5 * LOG2 + 0.5 * LOG_PI


def classical_baselines(n: int, u: float, r: float) -> ClassicalBaselines:
    """
    Классические асимптотики: минимаксная избыточность для трех параметров,
    избыточность в точке r для плотности q(u) и граничный двумерный случай.
    """
    _require_u(u)
    _require_n(n)
    r = clamp_radius(r)
    log_n = math.log(n)
    base = 1.5 * (log_n - LOG2 - 1.0)
    redundancy3d: Optional[float] = None
    if r < 1.0:
        redundancy3d = (
            base - (1.0 - u) * math.log1p(-r * r) + log_gamma(1.0 - u) - log_gamma(2.5 - u)
        )
    return ClassicalBaselines(
        minimax3d=base + 0.5 * LOG_PI,
        redundancy3d=redundancy3d,
        boundary2d=log_n + LOG2 - 1.0,
    )


# =============================================================================
# ЭНТРОПИЯ zeta_n(u) И БАЙЕСОВСКАЯ ИЗБЫТОЧНОСТЬ
# =============================================================================


def zeta_entropy_exact(n: int, u: float) -> float:
    """Энтропия фон Неймана -sum_d m_d lambda_d log lambda_d."""
    _require_u(u)
    _require_n(n)
    log_lambda = log_eigenvalues(n, u)
    terms = []
    for d in range(n // 2 + 1):
        value = float(log_lambda[d])
        terms.append(-math.exp(math.log(multiplicity(n, d)) + value) * value)
    return math.fsum(terms)


def entropy_rate(u: float) -> float:
    """Линейный по n коэффициент энтропии: (-7+5u)/(2(2-u)(1-u)) + ψ(5-2u) - ψ(1-u)."""
    _require_u(u)
    return (-7.0 + 5.0 * u) / (2.0 * (2.0 - u) * (1.0 - u)) + digamma(5.0 - 2.0 * u) - digamma(1.0 - u)


def bayes_constant(u: float) -> float:
    """
    Постоянная C(u) асимптотики байесовской избыточности (3/2) log n + C(u).
    """
    _require_u(u)
    return (
        (-3.5 + 2.0 * u) * LOG2
        - (14.0 - 20.0 * u + 7.0 * u * u) / (2.0 * (2.0 - u) * (1.0 - u))
        + log_gamma(1.0 - u)
        - log_gamma(2.5 - u)
        + (2.0 - 2.0 * u) * (digamma(5.0 - 2.0 * u) - digamma(1.0 - u))
    )


def zeta_entropy_asym(n: int, u: float) -> float:
    """Асимптотика энтропии zeta_n(u) без члена O(n^{u-1})."""
    _require_n(n)
    return n * entropy_rate(u) + 1.5 * math.log(n) + bayes_constant(u)


def bayes_redundancy(n: int, u: float, mode: BayesMode = BayesMode.exact) -> float:
    """
    Средняя по q(u) избыточность.

    exact: -n * entropy_rate(u) + S(zeta_n(u)); asymptotic: (3/2) log n + C(u).
    """
    _require_u(u)
    _require_n(n)
    if BayesMode(mode) == BayesMode.exact:
        return -n * entropy_rate(u) + zeta_entropy_exact(n, u)
    return 1.5 * math.log(n) + bayes_constant(u)


def bayes_redundancy_integral(n: int, u: float) -> float:
    """4 pi ∫ r^2 q(u) S(rho^{⊗n} || zeta_n(u)) dr, посчитанный квадратурой."""
    _require_u(u)
    _require_n(n)

    def integrand(r: np.ndarray) -> np.ndarray:
        return np.array([x * x * relative_entropy_exact(n, u, float(x)) for x in np.atleast_1d(r)])

    logger.info(f"Квадратура байесовской избыточности n = {n}, u = {u}")
    return 4.0 * math.pi * q_normalizer(u) * integrate_radial(integrand, u)


def entropy_subadditivity_gap(n: int, u: float, split: Sequence[int]) -> float:
    """
    sum_i S(zeta_{n_i}(u)) - S(zeta_n(u)) для разбиения кубитов на блоки подряд.

    Энтропии блоков считаются по частичным следам zeta_n(u), энтропия целого
    по замкнутой формуле спектра.
    """
    if sum(split) != n or any(size < 1 for size in split):
        raise DomainError(f"Разбиение {list(split)} не является разбиением {n}")
    parts = []
    start = 1
    for size in split:
        block = range(start, start + size)
        parts.append(von_neumann_entropy(reduced_zeta(n, u, block)))
        start += size
    return math.fsum(parts) - zeta_entropy_exact(n, u)


# =============================================================================
# ДАННЫЕ ДЛЯ ГРАФИКОВ
# =============================================================================


def figure2_data(grid: int) -> List[Tuple[float, float]]:
    """Пары (r, (1/2r) log((1-r)/(1+r))) на равномерной сетке внутри (0, 1)."""
    if grid < 2:
        raise DomainError(f"Размер сетки должен быть не меньше 2: {grid}")
    radii = np.linspace(0.0, 1.0, grid + 2)[1:-1]
    return [(float(r), _nonclassical_term(float(r))) for r in radii]


def figure3_data(grid: int, lower: float = 0.0, upper: float = 0.95) -> List[Tuple[float, float]]:
    """Пары (u, C(u)) на равномерной сетке [lower, upper]."""
    if grid < 2:
        raise DomainError(f"Размер сетки должен быть не меньше 2: {grid}")
    if not lower < upper < 1:
        raise DomainError(f"Интервал [{lower}, {upper}] должен лежать левее 1")
    return [(float(u), bayes_constant(float(u))) for u in np.linspace(lower, upper, grid)]


def redundancy_table(ns: Iterable[int], u: float, r: float) -> List[RedundancyReport]:
    """Отчеты redundancy_report для последовательности n."""
    return [redundancy_report(n, u, r) for n in ns]


# =============================================================================
# ТОЖДЕСТВА
# =============================================================================


def identity_names() -> List[str]:
    """Все зарегистрированные тождества: сначала точные, затем асимптотические."""
    return list(EXACT_IDENTITIES) + list(ASYMPTOTIC_IDENTITIES)


def identity_check(name: str, params: Optional[IdentityParams] = None, tol: Optional[float] = None) -> IdentityResult:
    """
    Невязка тождества name в точке params.

    Для точных тождеств residual = |lhs - rhs| / max(1, |rhs|), статус PASS при
    residual <= tol. Для асимптотических residual = n |lhs - rhs| (a15) или
    n^{1-u} |lhs - rhs| (B8), статус PASS при конечном значении.

    Raises:
        DomainError: Неизвестное имя или нарушено предусловие
    """
    params = params or IdentityParams()
    tol = IDENTITY_TOL if tol is None else tol
    if not 0.0 < params.r < 1.0:
        raise DomainError(f"Тождества требуют 0 < r < 1: r = {params.r}")

    if name in EXACT_IDENTITIES:
        lhs, rhs = EXACT_IDENTITIES[name](params)
        residual = abs(lhs - rhs) / max(1.0, abs(rhs))
        passed = residual <= tol
        asymptotic = False
    elif name in ASYMPTOTIC_IDENTITIES:
        lhs, rhs = ASYMPTOTIC_IDENTITIES[name](params)
        scale = params.n if name == "a15" else params.n ** (1.0 - params.u)
        residual = scale * abs(lhs - rhs)
        passed = math.isfinite(residual)
        asymptotic = True
    else:
        raise DomainError(f"Неизвестное тождество: {name}")

    logger.debug(f"Тождество {name}: lhs = {lhs!r}, rhs = {rhs!r}, невязка {residual:.3e}")
    return IdentityResult(
        name=name,
        lhs=lhs,
        rhs=rhs,
        residual=residual,
        asymptotic=asymptotic,
        status=CheckStatus.passed if passed else CheckStatus.failed,
    )


def run_identity_suite(params: Optional[IdentityParams] = None, tol: Optional[float] = None) -> List[IdentityResult]:
    """
    Проверяет все тождества в одной точке.

    Тождества, чьи предусловия не выполнены (B5 при u = 0, B6 при alpha <= u - 1),
    пропускаются с предупреждением.
    """
    params = params or IdentityParams()
    results = []
    for name in identity_names():
        try:
            results.append(identity_check(name, params, tol))
        except DomainError as e:
            logger.warning(f"Тождество {name} пропущено: {e}")
    failed = [result.name for result in results if result.status == CheckStatus.failed]
    if failed:
        logger.warning(f"Тождества не выполнены: {', '.join(failed)}")
    return results
