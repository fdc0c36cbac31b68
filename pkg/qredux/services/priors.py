"""
Плотности распределений на шаре Блоха.

q_density задана на единицу декартова объема dx dy dz;
kubo_mori_density и monotone_volume заданы на единицу dr dtheta dphi.
Переход между соглашениями выполняют spherical_to_cartesian и cartesian_to_spherical.
"""

import logging
import math
from typing import Callable

import numpy as np
from scipy.special import betainc

from qredux.core.errors import ContractError, DomainError
from qredux.models.schemas import QuPrior, RadialPrior
from qredux.services.specfun import integrate_radial, log_gamma

logger = logging.getLogger(__name__)

MonotoneFunction = Callable[[np.ndarray], np.ndarray]

# Сетка проверки функционального уравнения f(t) = t f(1/t)
_T_GRID = np.logspace(-3, 3, 61)


def _require_u(u: float) -> None:
    if not u < 1:
        raise DomainError(f"Параметр u должен быть меньше 1: {u}")


def q_normalizer(u: float) -> float:
    """Нормирующий множитель Γ(5/2-u) / (pi^{3/2} Γ(1-u)) семейства q(u)."""
    _require_u(u)
    return math.exp(log_gamma(2.5 - u) - log_gamma(1.0 - u)) / math.pi ** 1.5


def q_density(u: float, r: float) -> float:
    """
    Плотность q(u) на единицу декартова объема.

    Args:
        u: Параметр семейства, u < 1
        r: Радиус, 0 <= r < 1 (r = 1 допускается при u <= 0)

    Returns:
        float: Γ(5/2-u) / (pi^{3/2} Γ(1-u) (1-r^2)^u)
    """
    _require_u(u)
    if not 0.0 <= r <= 1.0 or (r == 1.0 and u > 0):
        raise DomainError(f"Радиус {r} вне области определения q({u})")
    return q_normalizer(u) * (1.0 - r * r) ** (-u)


def q_radial_mass(u: float, radius: float) -> float:
    """
    Масса q(u) внутри шара радиуса radius: регуляризованная неполная бета-функция
    I_{R^2}(3/2, 1-u).
    """
    _require_u(u)
    if not 0.0 <= radius <= 1.0:
        raise DomainError(f"Радиус {radius} вне [0, 1]")
    return float(betainc(1.5, 1.0 - u, radius * radius))


def _atanh2(r: np.ndarray, c: np.ndarray) -> np.ndarray:
    # log((1+r)/(1-r)) с точностью у обоих концов
    near_zero = r < 0.5
    return np.where(
        near_zero,
        np.log1p(r) - np.log1p(-np.where(near_zero, r, 0.0)),
        np.log1p(r) - np.log(np.where(near_zero, 1.0, c)),
    )


def kubo_mori_density(u: float, r: float, theta: float) -> float:
    """
    Нормированная плотность семейства Кубо-Мори на единицу dr dtheta dphi:
    (1-u) Γ(5/2-u) r log((1+r)/(1-r)) sin(theta) / (pi^{3/2} (3-2u) Γ(1-u) (1-r^2)^u).
    """
    _require_u(u)
    if not 0.0 <= r < 1.0:
        raise DomainError(f"Радиус {r} вне [0, 1)")
    if r == 0.0:
        return 0.0
    constant = (1.0 - u) * q_normalizer(u) / (3.0 - 2.0 * u)
    log_ratio = float(_atanh2(np.array([r]), np.array([1.0 - r]))[0])
    return constant * r * log_ratio * math.sin(theta) * (1.0 - r * r) ** (-u)


def sld_monotone(t: np.ndarray) -> np.ndarray:
    """Функция (1+t)/2 метрики SLD."""
    return (1.0 + np.asarray(t, dtype=float)) / 2.0


def kubo_mori_monotone(t: np.ndarray) -> np.ndarray:
    """Функция (t-1)/log t метрики Кубо-Мори (в t = 1 доопределена пределом)."""
    t = np.asarray(t, dtype=float)
    delta = t - 1.0
    near_one = np.abs(delta) < 1e-6
    safe = np.where(near_one, 2.0, t)
    series = 1.0 + delta / 2.0 - delta * delta / 12.0
    return np.where(near_one, series, (safe - 1.0) / np.log(safe))


def equated_monotone(t: np.ndarray) -> np.ndarray:
    """Функция t^{t/(1+t)}, для которой объемный элемент согласует асимптотики."""
    t = np.asarray(t, dtype=float)
    return t ** (t / (1.0 + t))


def validate_monotone(f: MonotoneFunction, rtol: float = 1e-10) -> None:
    """
    Проверяет f(1) = 1, f(t) = t f(1/t) и f > 0 на логарифмической сетке t.

    Raises:
        ContractError: Если хотя бы одно условие нарушено
    """
    at_one = float(np.asarray(f(np.array([1.0])))[0])
    if abs(at_one - 1.0) > rtol:
        raise ContractError(f"Монотонная функция: f(1) = {at_one}, а не 1")
    values = np.asarray(f(_T_GRID), dtype=float)
    if np.any(~np.isfinite(values)) or np.any(values <= 0):
        raise ContractError("Монотонная функция должна быть положительной на (0, inf)")
    mirrored = _T_GRID * np.asarray(f(1.0 / _T_GRID), dtype=float)
    deviation = float(np.max(np.abs(values - mirrored) / np.abs(values)))
    if deviation > rtol:
        raise ContractError(f"Нарушено f(t) = t f(1/t): отклонение {deviation:.3e}")


def monotone_volume(f: MonotoneFunction, r: float, theta: float, validate: bool = True) -> float:
    """
    Ненормированный объемный элемент монотонной метрики на единицу dr dtheta dphi:
    r^2 sin(theta) / (f((1-r)/(1+r)) (1-r^2)^{1/2} (1+r)).

    Args:
        f: Операторно монотонная функция (векторизованная)
        r: Радиус, 0 <= r < 1
        theta: Полярный угол
        validate: Проверять ли функциональное уравнение

    Raises:
        ContractError: Если f нарушает f(1) = 1 или f(t) = t f(1/t)
    """
    if validate:
        validate_monotone(f)
    if not 0.0 <= r < 1.0:
        raise DomainError(f"Радиус {r} вне [0, 1)")
    t = (1.0 - r) / (1.0 + r)
    f_t = float(np.asarray(f(np.array([t])))[0])
    return r * r * math.sin(theta) / (f_t * math.sqrt(1.0 - r * r) * (1.0 + r))


def spherical_to_cartesian(density: float, r: float, theta: float) -> float:
    """Переводит плотность на dr dtheta dphi в плотность на dx dy dz."""
    jacobian = r * r * math.sin(theta)
    if jacobian == 0.0:
        raise DomainError("Якобиан сферических координат равен нулю")
    return density / jacobian


def cartesian_to_spherical(density: float, r: float, theta: float) -> float:
    """Переводит плотность на dx dy dz в плотность на dr dtheta dphi."""
    return density * r * r * math.sin(theta)


def prior_mass(prior: RadialPrior) -> float:
    """Полная масса 4 pi ∫ r^2 w(r) dr радиального распределения."""
    integral = integrate_radial(
        lambda r, c: r * r * prior.profile(r, c), prior.u_singular, complement=True
    )
    return 4.0 * math.pi * prior.normalization * integral


def q_prior(u: float) -> RadialPrior:
    """Распределение q(u) в виде RadialPrior."""
    constant = q_normalizer(u)
    family = QuPrior(u=u)
    return RadialPrior(
        name=f"q({family.u})",
        profile=lambda r, c: np.full_like(np.asarray(r, dtype=float), constant),
        u_singular=u,
    )


def uniform_ball() -> RadialPrior:
    """Равномерное распределение на шаре, q(0)."""
    return q_prior(0.0)


def kubo_mori_prior(u: float) -> RadialPrior:
    """Семейство Кубо-Мори в виде RadialPrior (на единицу декартова объема)."""
    _require_u(u)
    constant = (1.0 - u) * q_normalizer(u) / (3.0 - 2.0 * u)

    def profile(r: np.ndarray, c: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        ratio = _atanh2(r, np.asarray(c, dtype=float)) / np.where(r > 0, r, 1.0)
        return constant * np.where(r > 0, ratio, 2.0)

    return RadialPrior(name=f"kubo_mori({u})", profile=profile, u_singular=u)


def monotone_normalizer(f: MonotoneFunction) -> float:
    """Полная масса 4 pi ∫ r^2 / (f(t) (1+r) sqrt(1-r^2)) dr объемного элемента монотонной метрики."""
    validate_monotone(f)

    def profile(r: np.ndarray, c: np.ndarray) -> np.ndarray:
        return r * r / (np.asarray(f(c / (1.0 + r)), dtype=float) * (1.0 + r))

    return 4.0 * math.pi * integrate_radial(profile, 0.5, complement=True)


def monotone_prior(f: MonotoneFunction, name: str = "monotone") -> RadialPrior:
    """
    Нормированное распределение, пропорциональное объемному элементу монотонной метрики.
    """
    mass = monotone_normalizer(f)
    logger.info(f"Нормировка распределения {name}: {mass:.12g}")
    return RadialPrior(
        name=name,
        profile=lambda r, c: 1.0 / (np.asarray(f(c / (1.0 + r)), dtype=float) * (1.0 + r)),
        u_singular=0.5,
        normalization=1.0 / mass,
    )
