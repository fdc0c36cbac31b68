"""
Байесовские матрицы плотности zeta_n(u) = ∫ rho^{⊗n} q(u) dV.

Элемент (I, J) зависит только от мощностей пересечений I и J и равен нулю,
если |I| != |J|. Матрицы строятся по таблице значений, индексированной
парой (n∈∈, n∉∉).
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable

import numpy as np

from qredux.core.config import settings
from qredux.core.errors import CapacityError, ConsistencyError, ContractError, DomainError
from qredux.models.schemas import OverlapStats, ZetaMatrix
from qredux.services.priors import q_normalizer
from qredux.services.qstate import partial_trace, popcount_table, subset_mask
from qredux.services.specfun import integrate_radial, log_gamma

logger = logging.getLogger(__name__)

_ROW_BLOCK = 256


def overlap_stats(i_set, j_set, n: int) -> OverlapStats:
    """
    Мощности n∈∈, n∉∉, n∉∈, n∈∉ для пары подмножеств.

    Args:
        i_set: Подмножество I (маска или набор элементов)
        j_set: Подмножество J
        n: Размер основного множества

    Returns:
        OverlapStats: Четыре мощности, в сумме n
    """
    i_mask = subset_mask(i_set, n)
    j_mask = subset_mask(j_set, n)
    full = (1 << n) - 1
    return OverlapStats(
        n=n,
        n_in_in=bin(i_mask & j_mask).count("1"),
        n_out_out=bin(full & ~(i_mask | j_mask)).count("1"),
        n_out_in=bin(j_mask & ~i_mask).count("1"),
        n_in_out=bin(i_mask & ~j_mask).count("1"),
    )


def _log_z(n: int, u: float, n_in_in: int, n_out_out: int) -> float:
    # k целое, когда n∉∈ = n∈∉
    k = (n - n_in_in - n_out_out) // 2
    half = n / 2
    diff = (n_in_in - n_out_out) / 2
    return (
        log_gamma(k + 1.0)
        - n * math.log(2.0)
        + log_gamma(2.5 - u)
        + log_gamma(2.0 + half + diff - u)
        + log_gamma(2.0 + half - diff - u)
        - log_gamma(2.5 + half - u)
        - log_gamma(2.0 + half - u)
        - log_gamma(2.0 + k - u)
    )


def z_entry(n: int, u: float, stats: OverlapStats) -> float:
    """
    Элемент Z_IJ матрицы zeta_n(u).

    Ненулевой только при n∉∈ = n∈∉; тогда с k = (n - n∈∈ - n∉∉)/2
    Z = k! 2^-n Γ(5/2-u) Γ(2+n/2+(n∈∈-n∉∉)/2-u) Γ(2+n/2-(n∈∈-n∉∉)/2-u)
        / (Γ(5/2+n/2-u) Γ(2+n/2-u) Γ(2+k-u)).

    Raises:
        DomainError: Если u >= 1
    """
    if not u < 1:
        raise DomainError(f"Параметр u должен быть меньше 1: {u}")
    if stats.n_out_in != stats.n_in_out:
        return 0.0
    return math.exp(_log_z(stats.n, u, stats.n_in_in, stats.n_out_out))


def _entry_table(n: int, value: Callable[[int, int], float]) -> np.ndarray:
    table = np.zeros((n + 1, n + 1))
    for a in range(n + 1):
        for b in range(n + 1 - a):
            if (n - a - b) % 2 == 0:
                table[a, b] = value(a, b)
    return table


def _assemble(n: int, table: np.ndarray) -> np.ndarray:
    """Собирает матрицу по таблице значений (n∈∈, n∉∉) блоками строк."""
    dim = 1 << n
    pc = popcount_table(n).astype(np.int16)
    masks = np.arange(dim)
    result = np.zeros((dim, dim))

    def fill(start: int) -> None:
        rows = masks[start:start + _ROW_BLOCK, None]
        cols = masks[None, :]
        n_in_in = pc[rows & cols]
        n_out_out = n - pc[rows | cols]
        same_size = pc[rows] == pc[cols]
        result[start:start + _ROW_BLOCK] = np.where(same_size, table[n_in_in, n_out_out], 0.0)

    starts = range(0, dim, _ROW_BLOCK)
    if settings.threads > 1 and dim > _ROW_BLOCK:
        with ThreadPoolExecutor(max_workers=settings.threads) as executor:
            list(executor.map(fill, starts))
    else:
        for start in starts:
            fill(start)
    return result


def zeta_matrix(n: int, u: float) -> ZetaMatrix:
    """
    Плотная матрица zeta_n(u) в порядке масок.

    Args:
        n: Число кубитов, 1 <= n <= settings.zeta_max_n
        u: Параметр априорного распределения, u < 1

    Returns:
        ZetaMatrix: Симметричная матрица со следом 1

    Raises:
        CapacityError: Если n превышает ограничение
    """
    if not u < 1:
        raise DomainError(f"Параметр u должен быть меньше 1: {u}")
    if n < 1:
        raise DomainError(f"Число кубитов должно быть положительным: {n}")
    if n > settings.zeta_max_n:
        raise CapacityError(f"n = {n} превышает ограничение {settings.zeta_max_n}")
    logger.info(f"Построение zeta_{n}({u})")
    table = _entry_table(n, lambda a, b: math.exp(_log_z(n, u, a, b)))
    return ZetaMatrix(n=n, u=u, matrix=_assemble(n, table))


def _angular_rule(n: int):
    cos_nodes, cos_weights = np.polynomial.legendre.leggauss(n + 2)
    phi_count = 2 * n + 2
    phi = 2.0 * math.pi * np.arange(phi_count) / phi_count
    weights = cos_weights[:, None] * np.full(phi_count, 2.0 * math.pi / phi_count)[None, :]
    return cos_nodes, phi, weights


def z_entry_oracle(n: int, u: float, i_set, j_set) -> float:
    """
    Элемент zeta_n(u), вычисленный прямым интегрированием R_IJ q(u) по шару.

    Угловая часть: правило Гаусса-Лежандра по cos(theta) и равномерная сетка по phi
    (обе точны для многочлена степени n); радиальная часть: integrate_radial.

    Raises:
        CapacityError: Если n превышает settings.oracle_max_n
        ConsistencyError: Если мнимая часть интеграла не исчезает
    """
    if n > settings.oracle_max_n:
        raise CapacityError(f"n = {n} превышает ограничение оракула {settings.oracle_max_n}")
    stats = overlap_stats(i_set, j_set, n)
    cos_t, phi, weights = _angular_rule(n)
    sin_t = np.sqrt(1.0 - cos_t ** 2)

    def angular(r: np.ndarray, part: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        r = np.asarray(r, dtype=float)[:, None, None]
        x = r * sin_t[None, :, None] * np.cos(phi)[None, None, :]
        y = r * sin_t[None, :, None] * np.sin(phi)[None, None, :]
        z = r * cos_t[None, :, None]
        plus = x + 1j * y
        value = (
            (1 + z) ** stats.n_in_in
            * (1 - z) ** stats.n_out_out
            * plus ** stats.n_out_in
            * np.conj(plus) ** stats.n_in_out
            / 2 ** n
        )
        return np.sum(part(value) * weights[None, :, :], axis=(1, 2)) * r[:, 0, 0] ** 2

    constant = q_normalizer(u)
    real = constant * integrate_radial(lambda r: angular(r, np.real), u)
    imag = constant * integrate_radial(lambda r: angular(r, np.imag), u)
    if abs(imag) > 1e-8:
        raise ConsistencyError(f"Мнимая часть элемента не исчезает: {imag:.3e}")
    return real


def zeta_matrix_oracle(n: int, u: float) -> np.ndarray:
    """Полная матрица из z_entry_oracle (только для малых n)."""
    dim = 1 << n
    result = np.zeros((dim, dim))
    for i in range(dim):
        for j in range(i, dim):
            result[i, j] = result[j, i] = z_entry_oracle(n, u, i, j)
    return result


def validate_symmetric(f: Callable[[float], float], n: int) -> None:
    """
    Проверяет f(x) = f(-x) на целых |x| <= n.

    Raises:
        ContractError: Если f несимметрична
    """
    for x in range(1, n + 1):
        left, right = float(f(x)), float(f(-x))
        if abs(left - right) > 1e-12 * max(1.0, abs(left)):
            raise ContractError(f"Функция несимметрична: f({x}) = {left}, f({-x}) = {right}")


def tilde_zeta_matrix(n: int, u: float, f: Callable[[float], float]) -> np.ndarray:
    """
    Обобщенная матрица с элементами
    δ(n∉∈, n∈∉) k! / Γ(2+k-u) f(n∈∈ - n∉∉), k = (n - n∈∈ - n∉∉)/2.

    Args:
        n: Число кубитов
        u: Параметр, u < 1
        f: Четная функция целого аргумента

    Raises:
        ContractError: Если f(x) != f(-x) на сетке |x| <= n
    """
    if not u < 1:
        raise DomainError(f"Параметр u должен быть меньше 1: {u}")
    if n > settings.zeta_max_n:
        raise CapacityError(f"n = {n} превышает ограничение {settings.zeta_max_n}")
    validate_symmetric(f, n)

    def value(a: int, b: int) -> float:
        k = (n - a - b) // 2
        return math.exp(log_gamma(k + 1.0) - log_gamma(2.0 + k - u)) * float(f(a - b))

    return _assemble(n, _entry_table(n, value))


def reduced_zeta(n: int, u: float, keep: Iterable[int]) -> np.ndarray:
    """Частичный след zeta_n(u) на сохраняемые кубиты keep (совпадает с zeta_m(u))."""
    return partial_trace(zeta_matrix(n, u).matrix, n, keep)
