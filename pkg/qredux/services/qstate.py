"""
Состояния кубита, тензорные степени и плотная эрмитова линейная алгебра.

Подмножества [n] кодируются масками: элемент i соответствует биту i-1.
Строки и столбцы всех матриц 2^n x 2^n идут в порядке масок 0..2^n-1.
"""

import logging
import math
from functools import reduce
from typing import Iterable, Union

import numpy as np

from qredux.core.config import settings
from qredux.core.errors import AccuracyError, CapacityError, DomainError, InfiniteDivergenceError
from qredux.models.schemas import BlochVector, DensityMatrix, HermitianEigen, ZetaMatrix

logger = logging.getLogger(__name__)

Subset = Union[int, Iterable[int]]
MatrixLike = Union[np.ndarray, DensityMatrix, ZetaMatrix]


def subset_mask(subset: Subset, n: int) -> int:
    """
    Переводит подмножество [n] в битовую маску.

    Args:
        subset: Маска (int) или набор элементов из 1..n
        n: Размер основного множества

    Returns:
        int: Маска с битом i-1 для каждого элемента i
    """
    if isinstance(subset, (int, np.integer)):
        mask = int(subset)
        if mask < 0 or mask >> n:
            raise DomainError(f"Маска {mask} не является подмножеством [{n}]")
        return mask
    mask = 0
    for element in subset:
        if not 1 <= element <= n:
            raise DomainError(f"Элемент {element} вне [1, {n}]")
        mask |= 1 << (element - 1)
    return mask


def mask_elements(mask: int) -> list:
    """Элементы подмножества по возрастанию."""
    return [i + 1 for i in range(mask.bit_length()) if mask >> i & 1]


def popcount_table(n: int) -> np.ndarray:
    """Таблица числа единичных битов для масок 0..2^n-1."""
    table = np.zeros(1 << n, dtype=np.int64)
    for bit in range(n):
        table[1 << bit:1 << (bit + 1)] = table[:1 << bit] + 1
    return table


def _as_array(matrix: MatrixLike) -> np.ndarray:
    if isinstance(matrix, (DensityMatrix, ZetaMatrix)):
        return matrix.matrix
    return np.asarray(matrix)


def density_from_bloch(b: BlochVector) -> DensityMatrix:
    """
    Матрица плотности кубита rho = 1/2 [[1+z, x-iy], [x+iy, 1-z]].

    Raises:
        DomainError: Если r > 1
    """
    if b.r > 1.0 + 1e-12:
        raise DomainError(f"Вектор Блоха вне шара: r = {b.r}")
    rho = 0.5 * np.array(
        [[1 + b.z, b.x - 1j * b.y], [b.x + 1j * b.y, 1 - b.z]], dtype=complex
    )
    return DensityMatrix.trusted(rho)


def _mask_factor(b: BlochVector) -> np.ndarray:
    # Однокубитный множитель в порядке масок: строка 0 соответствует пустому множеству
    return 0.5 * np.array(
        [[1 - b.z, b.x + 1j * b.y], [b.x - 1j * b.y, 1 + b.z]], dtype=complex
    )


def tensor_power_entry(b: BlochVector, n: int, i_set: Subset, j_set: Subset) -> complex:
    """
    Элемент R_IJ тензорной степени rho^{⊗n}.

    R_IJ = 2^-n (1+z)^{n∈∈} (1-z)^{n∉∉} (x+iy)^{n∉∈} (x-iy)^{n∈∉}.
    """
    i_mask = subset_mask(i_set, n)
    j_mask = subset_mask(j_set, n)
    full = (1 << n) - 1
    n_in_in = bin(i_mask & j_mask).count("1")
    n_out_out = bin(full & ~(i_mask | j_mask)).count("1")
    n_out_in = bin(j_mask & ~i_mask).count("1")
    n_in_out = bin(i_mask & ~j_mask).count("1")
    plus = complex(b.x, b.y)
    return (
        (1 + b.z) ** n_in_in
        * (1 - b.z) ** n_out_out
        * plus ** n_out_in
        * plus.conjugate() ** n_in_out
        / 2 ** n
    )


def tensor_power(b: BlochVector, n: int) -> DensityMatrix:
    """
    Тензорная степень rho^{⊗n} в порядке масок.

    Args:
        b: Вектор Блоха
        n: Число копий, 1 <= n <= settings.tensor_power_max_n

    Returns:
        DensityMatrix: Матрица 2^n x 2^n

    Raises:
        CapacityError: Если n превышает ограничение по памяти
    """
    if n < 1:
        raise DomainError(f"Число копий должно быть положительным: {n}")
    if n > settings.tensor_power_max_n:
        raise CapacityError(f"n = {n} превышает ограничение {settings.tensor_power_max_n}")
    factor = _mask_factor(b)
    logger.debug(f"Тензорная степень n = {n}, r = {b.r:.6f}")
    return DensityMatrix.trusted(reduce(np.kron, [factor] * n))


def hermitian_eig(matrix: MatrixLike) -> HermitianEigen:
    """
    Полное спектральное разложение эрмитовой матрицы (LAPACK, собственные
    значения по убыванию).

    Raises:
        DomainError: Если матрица не эрмитова
        AccuracyError: Если LAPACK не сошелся
    """
    a = _as_array(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"Ожидается квадратная матрица, получено {a.shape}")
    asymmetry = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if asymmetry > settings.hermitian_tol:
        raise DomainError(f"Матрица не эрмитова: отклонение {asymmetry:.3e}")
    try:
        values, vectors = np.linalg.eigh(a)
    except np.linalg.LinAlgError as e:
        raise AccuracyError(f"Спектральное разложение не сошлось: {e}")
    return HermitianEigen(eigenvalues=values[::-1].copy(), eigenvectors=vectors[:, ::-1].copy())


def _xlogx(p: np.ndarray) -> np.ndarray:
    # 0 log 0 = 0
    safe = np.where(p > 0, p, 1.0)
    return np.where(p > 0, p * np.log(safe), 0.0)


def von_neumann_entropy_bloch(r: float) -> float:
    """Энтропия S(rho) кубита с длиной вектора Блоха r (натуральный логарифм)."""
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"r должно лежать в [0, 1]: {r}")
    p = np.array([(1 - r) / 2, (1 + r) / 2])
    return float(-_xlogx(p).sum())


def von_neumann_entropy(rho: MatrixLike) -> float:
    """Энтропия фон Неймана -Tr rho log rho произвольной матрицы плотности."""
    values = hermitian_eig(rho).eigenvalues
    values = np.where(values < settings.null_eigen_tol, 0.0, values)
    return float(-_xlogx(values).sum())


def _spectral_pair(rho1: MatrixLike, rho2: MatrixLike):
    a = _as_array(rho1)
    b = _as_array(rho2)
    if a.shape != b.shape:
        raise DomainError(f"Размерности не совпадают: {a.shape} и {b.shape}")
    e1 = hermitian_eig(a)
    e2 = hermitian_eig(b)
    p = np.clip(e1.eigenvalues, 0.0, None)
    q = e2.eigenvalues
    null = q < settings.null_eigen_tol
    if np.any(null):
        v_null = e2.eigenvectors[:, null]
        weights = np.real(np.einsum("ij,ik,kj->j", v_null.conj(), a, v_null))
        worst = float(weights.max())
        if worst > settings.support_tol:
            raise InfiniteDivergenceError(
                f"Носитель rho1 не лежит в носителе rho2: вес {worst:.3e}", weight=worst
            )
    log_q = np.where(null, 0.0, np.log(np.where(null, 1.0, q)))
    return e1, p, e2, log_q


def relative_entropy(rho1: MatrixLike, rho2: MatrixLike) -> float:
    """
    Квантовая относительная энтропия Tr rho1 (log rho1 - log rho2).

    Raises:
        InfiniteDivergenceError: Если носитель rho1 выходит за носитель rho2
    """
    e1, p, e2, log_q = _spectral_pair(rho1, rho2)
    overlap = np.abs(e1.eigenvectors.conj().T @ e2.eigenvectors) ** 2
    cross = float(p @ overlap @ log_q)
    return float(_xlogx(p).sum()) - cross


def relative_entropy_square(rho1: MatrixLike, rho2: MatrixLike) -> float:
    """
    Второй момент Tr rho1 (log rho1 - log rho2)^2, вычисленный как
    квадрат нормы Фробениуса (log rho1 - log rho2) rho1^{1/2}.
    """
    e1, p, e2, log_q = _spectral_pair(rho1, rho2)
    v1 = e1.eigenvectors
    v2 = e2.eigenvectors
    sqrt_p = np.sqrt(p)
    log_p = np.log(np.where(p > 0, p, 1.0))
    first = (v1 * (log_p * sqrt_p)) @ v1.conj().T
    root = (v1 * sqrt_p) @ v1.conj().T
    second = (v2 * log_q) @ v2.conj().T @ root
    return float(np.linalg.norm(first - second, "fro") ** 2)


def sld_fisher_matrix(b: BlochVector) -> np.ndarray:
    """
    Матрица информации Фишера симметричных логарифмических производных:
    I = E + x x^T / (1 - r^2).

    Raises:
        DomainError: На границе шара (r >= 1)
    """
    r = b.r
    if r >= 1.0:
        raise DomainError(f"Информация Фишера определена только внутри шара: r = {r}")
    v = np.array([b.x, b.y, b.z])
    return np.eye(3) + np.outer(v, v) / (1.0 - r * r)


def partial_trace(rho: MatrixLike, n: int, keep: Iterable[int]) -> np.ndarray:
    """
    Частичный след по всем кубитам, кроме keep.

    Args:
        rho: Матрица 2^n x 2^n в порядке масок
        n: Число кубитов
        keep: Сохраняемые элементы из 1..n

    Returns:
        np.ndarray: Матрица 2^m x 2^m в порядке масок по сохраненным элементам
    """
    a = _as_array(rho)
    kept = sorted(set(keep))
    if any(not 1 <= e <= n for e in kept):
        raise DomainError(f"Сохраняемые элементы {kept} вне [1, {n}]")
    # Ось a тензора соответствует элементу n - a
    rows = list(range(n))
    cols = list(range(n, 2 * n))
    for element in range(1, n + 1):
        if element not in kept:
            cols[n - element] = rows[n - element]
    out = [rows[n - e] for e in reversed(kept)] + [cols[n - e] for e in reversed(kept)]
    tensor = a.reshape([2] * (2 * n))
    reduced = np.einsum(tensor, rows + cols, out)
    size = 1 << len(kept)
    return reduced.reshape(size, size)


def bloch_eigenvalue_multiset(r: float, n: int) -> np.ndarray:
    """Собственные значения rho^{⊗n}: ((1+r)/2)^k ((1-r)/2)^(n-k) с кратностями C(n, k), по убыванию."""
    values = []
    for k in range(n, -1, -1):
        values.extend([((1 + r) / 2) ** k * ((1 - r) / 2) ** (n - k)] * math.comb(n, k))
    return np.array(values)
