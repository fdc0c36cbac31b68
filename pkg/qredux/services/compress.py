"""
Планировщик универсального сжатия по Шумахеру.

Сохраняются целые уровни спектра zeta_n(u) в порядке убывания lambda_d,
пока их суммарный след не превысит 1 - epsilon.
"""

import logging
import math
from typing import Iterable, List, Optional, Tuple

import numpy as np

from qredux.core.errors import DomainError
from qredux.models.schemas import CompressionPlan
from qredux.services.qstate import von_neumann_entropy_bloch
from qredux.services.redundancy import level_weights
from qredux.services.spectrum import level_mass, multiplicity

logger = logging.getLogger(__name__)


def plan(n: int, u: float, epsilon: float, radii: Optional[Iterable[float]] = None) -> CompressionPlan:
    """
    Наименьшее D, при котором sum_{d<=D} m_d lambda_d >= 1 - epsilon.

    Args:
        n: Число кубитов
        u: Параметр априорного распределения, u < 1
        epsilon: Допустимая потеря веса, 0 < epsilon < 1
        radii: Радиусы r, для которых считается вес источника в сохраненном подпространстве

    Returns:
        CompressionPlan: Сохраненные уровни, размерность и число кубитов
    """
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon должно лежать в (0, 1): {epsilon}")
    if not u < 1:
        raise DomainError(f"Параметр u должен быть меньше 1: {u}")
    if n < 1:
        raise DomainError(f"Число кубитов должно быть положительным: {n}")

    masses: List[float] = []
    dim = 0
    top = n // 2
    for d in range(top + 1):
        masses.append(level_mass(n, u, d))
        dim += multiplicity(n, d)
        if math.fsum(masses) >= 1.0 - epsilon or d == top:
            break
    levels_kept = len(masses) - 1
    prior_weight = min(1.0, math.fsum(masses))
    source_weights = {float(r): source_weight(n, levels_kept, r) for r in (radii or [])}
    logger.info(f"План сжатия n = {n}, u = {u}, epsilon = {epsilon}: D = {levels_kept}, dim = {dim}")
    return CompressionPlan(
        n=n,
        u=u,
        epsilon=epsilon,
        levels_kept=levels_kept,
        dim=dim,
        qubits=math.log2(dim),
        prior_weight=prior_weight,
        source_weights=source_weights,
    )


def source_weight(n: int, levels_kept: int, r: float) -> float:
    """След rho^{⊗n} на уровнях d <= levels_kept; от направления вектора Блоха не зависит."""
    if not 0 <= levels_kept <= n // 2:
        raise DomainError(f"D = {levels_kept} вне [0, {n // 2}]")
    weights = level_weights(n, r).weights
    return min(1.0, math.fsum(weights[:levels_kept + 1]))


def fidelity_bound(weight: float) -> float:
    """Нижняя оценка точности 1 - 2(1 - weight), обрезанная до [0, 1]."""
    if not 0.0 <= weight <= 1.0:
        raise DomainError(f"Вес должен лежать в [0, 1]: {weight}")
    return min(1.0, max(0.0, 1.0 - 2.0 * (1.0 - weight)))


def source_curve(n: int, levels_kept: int, grid: int) -> List[Tuple[float, float, float]]:
    """Тройки (r, сохраненный вес, оценка точности) на равномерной сетке r ∈ [0, 1]."""
    if grid < 2:
        raise DomainError(f"Размер сетки должен быть не меньше 2: {grid}")
    rows = []
    for r in np.linspace(0.0, 1.0, grid):
        weight = source_weight(n, levels_kept, float(r))
        rows.append((float(r), weight, fidelity_bound(weight)))
    return rows


def typical_qubits(n: int, r: float) -> float:
    """n S(rho) / log 2: число кубитов кода, которому известно r."""
    if n < 1:
        raise DomainError(f"Число кубитов должно быть положительным: {n}")
    return n * von_neumann_entropy_bloch(r) / math.log(2.0)
