"""
Спектр и собственный базис zeta_n(u).

Собственные значения lambda_d (d = 0..floor(n/2)) имеют кратности
(n-2d+1)^2 C(n+1,d)/(n+1). Собственные векторы v_{d,s}(P) нумеруются
баллотными путями P с d шагами вниз и значениями s = d..n-d.
"""

import logging
import math
from itertools import combinations
from typing import Callable, Iterable, Iterator, List, Tuple

import numpy as np
import scipy.linalg

from qredux.core.config import settings
from qredux.core.errors import CapacityError, ConsistencyError, DomainError
from qredux.models.schemas import (
    BallotPath,
    EigenvectorSpec,
    RadialLevel,
    RadialPrior,
    Spectrum,
    SpectrumLevel,
    Step,
)
from qredux.services.bayes_matrix import validate_symmetric
from qredux.services.qstate import mask_elements, subset_mask
from qredux.services.specfun import binomial, integrate_radial, log_gamma, log_gamma_signed

logger = logging.getLogger(__name__)


def _require_u(u: float) -> None:
    if not u < 1:
        raise DomainError(f"Параметр u должен быть меньше 1: {u}")


def log_eigenvalue(n: int, u: float, d: int) -> float:
    """log lambda_d для 0 <= d <= n+1."""
    _require_u(u)
    if not 0 <= d <= n + 1:
        raise DomainError(f"Номер уровня d = {d} вне [0, {n + 1}]")
    return (
        -n * math.log(2.0)
        + log_gamma(2.5 - u)
        + log_gamma(2.0 + n - d - u)
        + log_gamma(1.0 + d - u)
        - log_gamma(2.5 + n / 2 - u)
        - log_gamma(2.0 + n / 2 - u)
        - log_gamma(1.0 - u)
    )


def log_eigenvalues(n: int, u: float) -> np.ndarray:
    """Массив log lambda_d для d = 0..floor(n/2)."""
    _require_u(u)
    d = np.arange(n // 2 + 1, dtype=float)
    return (
        -n * math.log(2.0)
        + log_gamma(2.5 - u)
        + log_gamma(2.0 + n - d - u)
        + log_gamma(1.0 + d - u)
        - log_gamma(2.5 + n / 2 - u)
        - log_gamma(2.0 + n / 2 - u)
        - log_gamma(1.0 - u)
    )


def eigenvalue(n: int, u: float, d: int) -> float:
    """
    Собственное значение
    lambda_d = 2^-n Γ(5/2-u) Γ(2+n-d-u) Γ(1+d-u) / (Γ(5/2+n/2-u) Γ(2+n/2-u) Γ(1-u)).

    Args:
        n: Число кубитов
        u: Параметр, u < 1
        d: Номер уровня; допускается расширенная область 0 <= d <= n+1,
           на которой lambda_{n+1-d} = lambda_d

    Raises:
        DomainError: Если u >= 1 или d вне области
    """
    return math.exp(log_eigenvalue(n, u, d))


def eigenvalue_signed(n: int, u: float, d: int) -> float:
    """
    lambda_d на области -1 <= d <= n+1 со знаком: при d = -1 множитель
    Γ(1+d-u) = Γ(-u) отрицателен для 0 < u < 1.
    """
    _require_u(u)
    if d >= 0:
        return eigenvalue(n, u, d)
    if d != -1:
        raise DomainError(f"Номер уровня d = {d} вне [-1, {n + 1}]")
    log_abs, sign = log_gamma_signed(-u)
    value = (
        -n * math.log(2.0)
        + log_gamma(2.5 - u)
        + log_gamma(3.0 + n - u)
        + log_abs
        - log_gamma(2.5 + n / 2 - u)
        - log_gamma(2.0 + n / 2 - u)
        - log_gamma(1.0 - u)
    )
    return sign * math.exp(value)


def ballot_count(n: int, d: int) -> int:
    """Число баллотных путей с n-d шагами вверх и d вниз: (n-2d+1) C(n+1,d)/(n+1)."""
    if not 0 <= 2 * d <= n:
        return 0
    return binomial(n, d) - binomial(n, d - 1)


def multiplicity(n: int, d: int) -> int:
    """
    Кратность lambda_d: (n-2d+1)^2 C(n+1,d)/(n+1), точное целое.

    Raises:
        DomainError: Если d вне [0, floor(n/2)]
    """
    if not 0 <= 2 * d <= n:
        raise DomainError(f"Номер уровня d = {d} вне [0, {n // 2}]")
    return (n - 2 * d + 1) * ballot_count(n, d)


def level_mass(n: int, u: float, d: int) -> float:
    """Вклад уровня в след: multiplicity * lambda_d (в лог-шкале, без переполнения)."""
    return math.exp(math.log(multiplicity(n, d)) + log_eigenvalue(n, u, d))


def _paths(n: int, d: int, height: int, prefix: List[Step]) -> Iterator[Tuple[Step, ...]]:
    ups_left = n - d - sum(1 for s in prefix if s == Step.up)
    downs_left = d - sum(1 for s in prefix if s == Step.down)
    if ups_left == 0 and downs_left == 0:
        yield tuple(prefix)
        return
    if ups_left > 0:
        yield from _paths(n, d, height + 1, prefix + [Step.up])
    if downs_left > 0 and height > 0:
        yield from _paths(n, d, height - 1, prefix + [Step.down])


def ballot_paths(n: int, d: int) -> List[BallotPath]:
    """
    Все баллотные пути из n-d шагов вверх и d шагов вниз в лексикографическом
    порядке (вверх < вниз).

    Args:
        n: Длина пути
        d: Число шагов вниз, 0 <= 2d <= n

    Returns:
        List[BallotPath]: (n-2d+1) C(n+1,d)/(n+1) путей
    """
    if not 0 <= 2 * d <= n:
        raise DomainError(f"Число шагов вниз d = {d} вне [0, {n // 2}]")
    return [BallotPath(steps=steps) for steps in _paths(n, d, 0, [])]


def _as_sorted(subset, n: int) -> Tuple[int, ...]:
    return tuple(mask_elements(subset_mask(subset, n)))


def eigenvector(n: int, d: int, s: int, a_set, b_set) -> EigenvectorSpec:
    """
    Собственный вектор v_{d,s}(A, B) = Σ_{X ⊆ A} Σ_Y (-1)^{|X|} e_{X ∪ X' ∪ Y}.

    X' получается из B удалением элементов, стоящих в упорядоченном B на тех же
    местах, которые X занимает в упорядоченном A; Y пробегает (s-d)-подмножества
    дополнения A ∪ B.

    Args:
        n: Число кубитов
        d: Уровень (|A| = |B| = d)
        s: Мощность подмножеств-носителей, d <= s <= n-d
        a_set: Множество A
        b_set: Множество B, не пересекающееся с A

    Raises:
        DomainError: Если A и B пересекаются или параметры недопустимы
    """
    a_sorted = _as_sorted(a_set, n)
    b_sorted = _as_sorted(b_set, n)
    if len(a_sorted) != d or len(b_sorted) != d:
        raise DomainError(f"|A| = {len(a_sorted)}, |B| = {len(b_sorted)}, ожидалось d = {d}")
    if set(a_sorted) & set(b_sorted):
        raise DomainError(f"A = {a_sorted} и B = {b_sorted} пересекаются")
    if not d <= s <= n - d:
        raise DomainError(f"Недопустимое s = {s} при d = {d}, n = {n}")

    rest = [e for e in range(1, n + 1) if e not in a_sorted and e not in b_sorted]
    y_masks = [subset_mask(y, n) for y in combinations(rest, s - d)]
    coefficients = {}
    for size in range(d + 1):
        for ranks in combinations(range(d), size):
            x_mask = subset_mask([a_sorted[i] for i in ranks], n)
            x_prime = subset_mask([b_sorted[i] for i in range(d) if i not in ranks], n)
            sign = -1 if size % 2 else 1
            for y_mask in y_masks:
                coefficients[x_mask | x_prime | y_mask] = sign
    return EigenvectorSpec(n=n, d=d, s=s, a_set=a_sorted, b_set=b_sorted, coefficients=coefficients)


def eigenvector_dense(spec: EigenvectorSpec) -> np.ndarray:
    """Вектор длины 2^n в порядке масок."""
    vector = np.zeros(1 << spec.n)
    for mask, sign in spec.coefficients.items():
        vector[mask] = sign
    return vector


def level_vectors(n: int, d: int) -> List[EigenvectorSpec]:
    """Векторы v_{d,s}(P) уровня d по всем баллотным путям P и s = d..n-d."""
    vectors = []
    for path in ballot_paths(n, d):
        for s in range(d, n - d + 1):
            vectors.append(eigenvector(n, d, s, path.a_set, path.b_set))
    return vectors


def eigenbasis(n: int) -> List[EigenvectorSpec]:
    """
    Базис из 2^n собственных векторов zeta_n(u) (линейно независимых, но не ортогональных).

    Raises:
        CapacityError: Если n превышает settings.eigenbasis_max_n
    """
    if n > settings.eigenbasis_max_n:
        raise CapacityError(f"n = {n} превышает ограничение {settings.eigenbasis_max_n}")
    basis = []
    for d in range(n // 2 + 1):
        basis.extend(level_vectors(n, d))
    if len(basis) != 1 << n:
        raise ConsistencyError(f"Собрано {len(basis)} векторов вместо {1 << n}")
    logger.info(f"Собственный базис n = {n}: {len(basis)} векторов")
    return basis


def basis_rank(basis: Iterable[EigenvectorSpec], n: int) -> int:
    """Ранг набора векторов (SVD с порогом settings.rank_tol)."""
    matrix = np.column_stack([eigenvector_dense(spec) for spec in basis])
    return int(np.linalg.matrix_rank(matrix, tol=settings.rank_tol * max(matrix.shape)))


def generalized_eigenvalue(n: int, u: float, d: int, s: int, f: Callable[[float], float]) -> float:
    """
    Собственное значение обобщенной матрицы на векторе v_{d,s}:
    f(n-2s) Γ(2+n-d-u) Γ(1+d-u) / (Γ(2+n-s-u) Γ(2+s-u) Γ(1-u)).

    Raises:
        DomainError: Если u >= 1 или (d, s) недопустимы
        ContractError: Если f несимметрична
    """
    _require_u(u)
    if not 0 <= d <= s <= n - d:
        raise DomainError(f"Недопустимые d = {d}, s = {s} при n = {n}")
    validate_symmetric(f, n)
    log_ratio = (
        log_gamma(2.0 + n - d - u)
        + log_gamma(1.0 + d - u)
        - log_gamma(2.0 + n - s - u)
        - log_gamma(2.0 + s - u)
        - log_gamma(1.0 - u)
    )
    return float(f(n - 2 * s)) * math.exp(log_ratio)


def radial_eigenvalue(n: int, d: int, prior: RadialPrior) -> float:
    """
    Собственное значение усреднения rho^{⊗n} по сферически симметричному распределению w:
    pi / (2^{n-1} (n-2d+1)) ∫_0^1 r ((1+r)^{n-d+1}(1-r)^d - (1-r)^{n-d+1}(1+r)^d) w(r) dr.

    Raises:
        DomainError: Если d вне [0, floor(n/2)]
        AccuracyError: Если квадратура не сошлась
    """
    if not 0 <= 2 * d <= n:
        raise DomainError(f"Номер уровня d = {d} вне [0, {n // 2}]")

    def integrand(r: np.ndarray, c: np.ndarray) -> np.ndarray:
        plus = (1.0 + r) / 2.0
        minus = c / 2.0
        difference = plus ** (n - d + 1) * minus ** d - minus ** (n - d + 1) * plus ** d
        return r * difference * prior.profile(r, c)

    integral = integrate_radial(integrand, prior.u_singular, complement=True)
    return 4.0 * math.pi * prior.normalization * integral / (n - 2 * d + 1)


def radial_spectrum(n: int, prior: RadialPrior) -> List[RadialLevel]:
    """
    Все уровни спектра для сферически симметричного распределения; проверяет,
    что суммарная размерность равна 2^n.

    Raises:
        ConsistencyError: Если размерности не складываются в 2^n
    """
    levels = [
        RadialLevel(
            d=d,
            eigenvalue=radial_eigenvalue(n, d, prior),
            paths=ballot_count(n, d),
            s_count=n - 2 * d + 1,
        )
        for d in range(n // 2 + 1)
    ]
    total = sum(level.paths * level.s_count for level in levels)
    if total != 1 << n:
        raise ConsistencyError(f"Суммарная размерность {total} не равна 2^{n}")
    return levels


def spectrum(n: int, u: float) -> Spectrum:
    """Полный спектр zeta_n(u) с кратностями и накопленными весами."""
    _require_u(u)
    levels = []
    cumulative = 0.0
    for d in range(n // 2 + 1):
        cumulative += level_mass(n, u, d)
        levels.append(
            SpectrumLevel(
                d=d,
                eigenvalue=eigenvalue(n, u, d),
                log_eigenvalue=log_eigenvalue(n, u, d),
                multiplicity=multiplicity(n, d),
                s_values=list(range(d, n - d + 1)),
                cumulative_weight=cumulative,
            )
        )
    return Spectrum(n=n, u=u, levels=levels)


def eigenprojector(n: int, u: float, d: int) -> np.ndarray:
    """
    Ортогональный проектор на собственное подпространство lambda_d.

    Собственные подпространства не зависят от u; параметр проверяется на
    допустимость. Векторы уровня ортонормируются QR-разложением с выбором
    ведущего столбца.

    Raises:
        CapacityError: Если n превышает settings.projector_max_n
        ConsistencyError: Если ранг векторов уровня меньше кратности
    """
    _require_u(u)
    if n > settings.projector_max_n:
        raise CapacityError(f"n = {n} превышает ограничение {settings.projector_max_n}")
    vectors = np.column_stack([eigenvector_dense(spec) for spec in level_vectors(n, d)])
    q, r, _ = scipy.linalg.qr(vectors, mode="economic", pivoting=True)
    diagonal = np.abs(np.diag(r))
    rank = int(np.sum(diagonal > settings.rank_tol * diagonal[0]))
    expected = multiplicity(n, d)
    if rank != expected:
        raise ConsistencyError(f"Ранг уровня d = {d} равен {rank}, ожидалось {expected}")
    basis = q[:, :rank]
    return basis @ basis.T
