"""
Pydantic модели предметной области qredux.

Состояния кубита, матрицы плотности, спектры zeta_n(u), баллотные пути,
отчеты об избыточности и планы сжатия.
"""

import math
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Regime(str, Enum):
    """Режим асимптотики избыточности."""
    interior = "interior"   # 0 < r < 1
    center = "center"       # r = 0
    boundary = "boundary"   # r = 1


class BayesMode(str, Enum):
    """Способ вычисления байесовской избыточности."""
    exact = "exact"
    asymptotic = "asymptotic"


class OutputFormat(str, Enum):
    """Форматы вывода CLI."""
    csv = "csv"
    json = "json"
    bin = "bin"


class Step(str, Enum):
    """Шаг решетчатого пути."""
    up = "U"
    down = "D"


class CheckStatus(str, Enum):
    """Результат проверки."""
    passed = "PASS"
    failed = "FAIL"


# =============================================================================
# СОСТОЯНИЯ И МАТРИЦЫ
# =============================================================================


class BlochVector(BaseModel):
    """Вектор Блоха состояния кубита."""
    model_config = ConfigDict(frozen=True)

    x: float = Field(0.0, description="Компонента x")
    y: float = Field(0.0, description="Компонента y")
    z: float = Field(0.0, description="Компонента z")

    @model_validator(mode="after")
    def _inside_ball(self) -> "BlochVector":
        if not all(math.isfinite(c) for c in (self.x, self.y, self.z)):
            raise ValueError("Компоненты вектора Блоха должны быть конечными")
        if self.r > 1.0 + 1e-12:
            raise ValueError(f"Вектор Блоха вне единичного шара: r = {self.r}")
        return self

    @property
    def r(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    @property
    def theta(self) -> float:
        """Полярный угол; для r = 0 равен 0."""
        r = self.r
        return math.acos(max(-1.0, min(1.0, self.z / r))) if r > 0 else 0.0

    @property
    def phi(self) -> float:
        return math.atan2(self.y, self.x)

    @classmethod
    def from_spherical(cls, r: float, theta: float, phi: float) -> "BlochVector":
        """Строит вектор по сферическим координатам (r, theta, phi)."""
        return cls(
            x=r * math.sin(theta) * math.cos(phi),
            y=r * math.sin(theta) * math.sin(phi),
            z=r * math.cos(theta),
        )


class DensityMatrix(BaseModel):
    """
    Матрица плотности размерности 2^k.

    При прямом создании проверяются эрмитовость, след и неотрицательность.
    Вычисления, для которых эти свойства выполнены по построению,
    используют DensityMatrix.trusted.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray = Field(description="Плотная комплексная матрица")

    @field_validator("matrix")
    @classmethod
    def _check_matrix(cls, value: np.ndarray) -> np.ndarray:
        value = np.asarray(value, dtype=complex)
        if value.ndim != 2 or value.shape[0] != value.shape[1]:
            raise ValueError(f"Ожидается квадратная матрица, получено {value.shape}")
        dim = value.shape[0]
        if dim < 2 or dim & (dim - 1):
            raise ValueError(f"Размерность должна быть степенью двойки: {dim}")
        if np.max(np.abs(value - value.conj().T)) > 1e-12:
            raise ValueError("Матрица плотности не эрмитова")
        trace = np.trace(value).real
        if abs(trace - 1.0) > 1e-12:
            raise ValueError(f"След матрицы плотности равен {trace}, а не 1")
        if np.linalg.eigvalsh(value).min() < -1e-10:
            raise ValueError("Матрица плотности имеет отрицательные собственные значения")
        return value

    @classmethod
    def trusted(cls, matrix: np.ndarray) -> "DensityMatrix":
        """Создает модель без проверок для матриц, корректных по построению."""
        return cls.model_construct(matrix=np.asarray(matrix, dtype=complex))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def qubits(self) -> int:
        return self.dim.bit_length() - 1


class HermitianEigen(BaseModel):
    """Спектральное разложение эрмитовой матрицы (значения по убыванию)."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    eigenvalues: np.ndarray = Field(description="Собственные значения по убыванию")
    eigenvectors: np.ndarray = Field(description="Ортонормированные собственные векторы в столбцах")


# =============================================================================
# АПРИОРНЫЕ РАСПРЕДЕЛЕНИЯ
# =============================================================================


class QuPrior(BaseModel):
    """Распределение q(u) на шаре Блоха."""
    model_config = ConfigDict(frozen=True)

    u: float = Field(description="Параметр семейства, u < 1")

    @field_validator("u")
    @classmethod
    def _check_u(cls, value: float) -> float:
        if not value < 1.0:
            raise ValueError(f"Параметр u должен быть меньше 1: {value}")
        return value


class RadialPrior(BaseModel):
    """
    Сферически симметричная плотность w(r) на единичном шаре (на единицу
    декартова объема), представленная как profile(r, 1 - r) * (1 - r^2)^(-u_singular).

    profile векторизован по numpy и получает дополнение 1 - r отдельно,
    чтобы сохранять точность вблизи r = 1.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = Field(description="Название распределения")
    profile: Callable[[np.ndarray, np.ndarray], np.ndarray] = Field(
        description="Гладкая часть плотности как функция (r, 1 - r)"
    )
    u_singular: float = Field(0.0, description="Показатель особенности (1 - r^2)^(-u) на границе")
    normalization: float = Field(1.0, gt=0, description="Множитель нормировки")

    def density(self, r: float) -> float:
        """Значение w(r) на единицу декартова объема."""
        arr = np.asarray([r], dtype=float)
        value = self.normalization * self.profile(arr, 1.0 - arr)[0]
        return float(value * (1.0 - r * r) ** (-self.u_singular))


# =============================================================================
# МАТРИЦЫ БАЙЕСА
# =============================================================================


class OverlapStats(BaseModel):
    """Мощности пересечений пары подмножеств I, J из [n]."""
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0, description="Число кубитов")
    n_in_in: int = Field(ge=0, description="|I ∩ J|")
    n_out_out: int = Field(ge=0, description="|[n] \\ (I ∪ J)|")
    n_out_in: int = Field(ge=0, description="|J \\ I|")
    n_in_out: int = Field(ge=0, description="|I \\ J|")

    @model_validator(mode="after")
    def _sum_is_n(self) -> "OverlapStats":
        total = self.n_in_in + self.n_out_out + self.n_out_in + self.n_in_out
        if total != self.n:
            raise ValueError(f"Сумма мощностей {total} не равна n = {self.n}")
        return self


class ZetaMatrix(BaseModel):
    """Байесовская матрица плотности zeta_n(u) в порядке масок."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(ge=1, description="Число кубитов")
    u: float = Field(lt=1.0, description="Параметр априорного распределения")
    matrix: np.ndarray = Field(description="Вещественная симметричная матрица 2^n x 2^n")

    @model_validator(mode="after")
    def _check_invariants(self) -> "ZetaMatrix":
        dim = 1 << self.n
        if self.matrix.shape != (dim, dim):
            raise ValueError(f"Размер матрицы {self.matrix.shape} не равен ({dim}, {dim})")
        if np.max(np.abs(self.matrix - self.matrix.T)) > 1e-12:
            raise ValueError("Матрица zeta_n(u) не симметрична")
        trace = float(np.trace(self.matrix))
        if abs(trace - 1.0) > 1e-12:
            raise ValueError(f"След zeta_n(u) равен {trace}")
        return self


# =============================================================================
# СПЕКТР
# =============================================================================


class BallotPath(BaseModel):
    """Баллотный путь: шаги вверх и вниз, не опускающийся ниже оси."""
    model_config = ConfigDict(frozen=True)

    steps: Tuple[Step, ...] = Field(description="Последовательность шагов длины n")

    @field_validator("steps")
    @classmethod
    def _never_below_axis(cls, value: Tuple[Step, ...]) -> Tuple[Step, ...]:
        height = 0
        for step in value:
            height += 1 if step == Step.up else -1
            if height < 0:
                raise ValueError("Путь опускается ниже оси")
        return value

    @property
    def n(self) -> int:
        return len(self.steps)

    @property
    def d(self) -> int:
        return sum(1 for step in self.steps if step == Step.down)

    @property
    def up_labels(self) -> List[int]:
        return [i + 1 for i, step in enumerate(self.steps) if step == Step.up]

    @property
    def a_set(self) -> Tuple[int, ...]:
        """Метки первых d шагов вверх."""
        return tuple(self.up_labels[: self.d])

    @property
    def b_set(self) -> Tuple[int, ...]:
        """Метки шагов вниз."""
        return tuple(i + 1 for i, step in enumerate(self.steps) if step == Step.down)

    def __str__(self) -> str:
        return "".join(step.value for step in self.steps)


class EigenvectorSpec(BaseModel):
    """Собственный вектор v_{d,s}(A, B) с коэффициентами ±1 по маскам подмножеств."""
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1, description="Число кубитов")
    d: int = Field(ge=0, description="Номер уровня")
    s: int = Field(ge=0, description="Мощность подмножеств-носителей")
    a_set: Tuple[int, ...] = Field(description="Множество A (по возрастанию)")
    b_set: Tuple[int, ...] = Field(description="Множество B (по возрастанию)")
    coefficients: Dict[int, int] = Field(description="Маска подмножества -> коэффициент ±1")

    @model_validator(mode="after")
    def _check_support(self) -> "EigenvectorSpec":
        if not (self.d <= self.s <= self.n - self.d):
            raise ValueError(f"Недопустимые d = {self.d}, s = {self.s} при n = {self.n}")
        if any(bin(mask).count("1") != self.s for mask in self.coefficients):
            raise ValueError("Все ключи должны иметь мощность s")
        expected = (1 << self.d) * math.comb(self.n - 2 * self.d, self.s - self.d)
        if len(self.coefficients) != expected:
            raise ValueError(f"Число членов {len(self.coefficients)} не равно {expected}")
        return self


class SpectrumLevel(BaseModel):
    """Уровень спектра: собственное значение lambda_d и его кратность."""
    model_config = ConfigDict(frozen=True)

    d: int = Field(ge=0, description="Номер уровня")
    eigenvalue: float = Field(ge=0, description="lambda_d (при больших n уходит в underflow)")
    log_eigenvalue: float = Field(description="log lambda_d, конечен при любом n")
    multiplicity: int = Field(ge=1, description="Кратность (точное целое)")
    s_values: List[int] = Field(description="Допустимые значения s = d..n-d")
    cumulative_weight: float = Field(description="Сумма кратность * lambda по уровням 0..d")


class Spectrum(BaseModel):
    """Полный спектр zeta_n(u)."""
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1, description="Число кубитов")
    u: float = Field(lt=1.0, description="Параметр априорного распределения")
    levels: List[SpectrumLevel] = Field(description="Уровни d = 0..floor(n/2)")

    @model_validator(mode="after")
    def _check_totals(self) -> "Spectrum":
        if sum(level.multiplicity for level in self.levels) != 1 << self.n:
            raise ValueError("Сумма кратностей не равна 2^n")
        return self


class RadialLevel(BaseModel):
    """Уровень спектра для сферически симметричного распределения."""
    model_config = ConfigDict(frozen=True)

    d: int = Field(ge=0, description="Номер уровня")
    eigenvalue: float = Field(description="lambda_d")
    paths: int = Field(ge=1, description="Число баллотных путей (кратность на одно s)")
    s_count: int = Field(ge=1, description="Число допустимых s")


# =============================================================================
# ИЗБЫТОЧНОСТЬ
# =============================================================================


class LevelWeights(BaseModel):
    """Веса w_d(r) уровней в следе rho^{⊗n} log zeta_n(u)."""
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1, description="Число кубитов")
    r: float = Field(ge=0.0, le=1.0, description="Длина вектора Блоха")
    weights: List[float] = Field(description="w_d для d = 0..floor(n/2)")

    @model_validator(mode="after")
    def _check_weights(self) -> "LevelWeights":
        if min(self.weights) < -1e-15:
            raise ValueError("Отрицательный вес уровня")
        total = math.fsum(self.weights)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"Сумма весов {total} не равна 1")
        return self


class RedundancyReport(BaseModel):
    """Точная и асимптотическая избыточность в точке (n, u, r)."""
    n: int = Field(ge=1, description="Число кубитов")
    u: float = Field(lt=1.0, description="Параметр априорного распределения")
    r: float = Field(ge=0.0, le=1.0, description="Длина вектора Блоха")
    regime: Regime = Field(description="Использованная асимптотическая формула")
    exact: float = Field(description="Точная относительная энтропия")
    asymptotic: float = Field(description="Асимптотика без O(1/n)")
    scaled_error: float = Field(description="n * |exact - asymptotic|")


class ClassicalBaselines(BaseModel):
    """Классические асимптотики для сравнения."""
    minimax3d: float = Field(description="Классическая минимаксная избыточность, 3 параметра")
    redundancy3d: Optional[float] = Field(None, description="Классическая избыточность в точке, 3 параметра")
    boundary2d: float = Field(description="Граничный случай, 2 параметра")


# =============================================================================
# ОПТИМИЗАЦИЯ
# =============================================================================


class MinimaxResult(BaseModel):
    """Корень u_n уравнения S(n, u, 0) = S(n, u, 1)."""
    n: int = Field(ge=1, description="Число кубитов")
    u_n: float = Field(description="Корень")
    value: float = Field(description="Общее значение избыточности в корне")
    bracket: Tuple[float, float] = Field(description="Интервал со сменой знака")
    residual: float = Field(description="|S(n, u_n, 0) - S(n, u_n, 1)|")
    other_roots: List[float] = Field(default_factory=list, description="Прочие смены знака на сетке")


class MaximinResult(BaseModel):
    """Решение уравнения максимина и константа C(u*)."""
    u_star: float = Field(description="Корень уравнения на тригамму")
    constant: float = Field(description="C(u*)")
    equation_residual: float = Field(description="Невязка уравнения в u*")


class RScanResult(BaseModel):
    """Профиль точной избыточности по r и его максимум."""
    n: int = Field(ge=1, description="Число кубитов")
    u: float = Field(description="Параметр априорного распределения")
    argmax_r: float = Field(description="Точка максимума")
    max_value: float = Field(description="Максимальное значение")
    profile: List[Tuple[float, float]] = Field(description="Пары (r, S)")


class OptimalityCheck(BaseModel):
    """Проверка байесовской оптимальности смеси."""
    gap: float = Field(description="sum w_i S(P_i, Q) - sum w_i S(P_i, m)")
    s_mq: float = Field(description="S(m, Q)")


# =============================================================================
# СЖАТИЕ
# =============================================================================


class CompressionPlan(BaseModel):
    """План универсального сжатия: сохраненные уровни спектра zeta_n(u)."""
    n: int = Field(ge=1, description="Число кубитов")
    u: float = Field(lt=1.0, description="Параметр априорного распределения")
    epsilon: float = Field(gt=0.0, lt=1.0, description="Допустимая потеря веса")
    levels_kept: int = Field(ge=0, description="D: наибольший сохраненный уровень")
    dim: int = Field(ge=1, description="Размерность сохраненного подпространства")
    qubits: float = Field(description="log2(dim)")
    prior_weight: float = Field(description="След zeta_n(u) на сохраненном подпространстве")
    source_weights: Dict[float, float] = Field(
        default_factory=dict, description="r -> вес rho^{⊗n} в сохраненном подпространстве"
    )

    @model_validator(mode="after")
    def _check_plan(self) -> "CompressionPlan":
        if self.prior_weight < 1.0 - self.epsilon - 1e-12:
            raise ValueError("Сохраненный вес меньше 1 - epsilon")
        if self.dim > 1 << self.n:
            raise ValueError("Размерность больше 2^n")
        return self


# =============================================================================
# ПРОВЕРКИ И CLI
# =============================================================================


class VerificationCheck(BaseModel):
    """Результат одной проверки набора verify."""
    name: str = Field(description="Название проверки")
    status: CheckStatus = Field(description="PASS или FAIL")
    residual: Optional[float] = Field(None, description="Наибольшая невязка")
    message: str = Field("", description="Пояснение")


class RunConfig(BaseModel):
    """Разобранные аргументы командной строки."""
    subcommand: str = Field(description="Подкоманда")
    n: Optional[int] = Field(None, ge=1, description="Число кубитов")
    u: Optional[float] = Field(None, description="Параметр априорного распределения")
    r: Optional[float] = Field(None, description="Длина вектора Блоха")
    epsilon: Optional[float] = Field(None, description="Допуск сжатия")
    grid: Optional[int] = Field(None, ge=2, description="Размер сетки")
    format: OutputFormat = Field(OutputFormat.csv, description="Формат вывода")
    out: Optional[str] = Field(None, description="Путь к файлу вывода")
    tol: Optional[float] = Field(None, gt=0, description="Переопределение допуска")
    alpha: Optional[float] = Field(None, description="Свободный параметр тождества B6")
    input: Optional[str] = Field(None, description="Входной бинарный файл матрицы")


class IdentityParams(BaseModel):
    """Параметры проверки тождества."""
    n: int = Field(10, ge=1, le=40, description="Число кубитов")
    r: float = Field(0.5, description="Длина вектора Блоха, 0 < r < 1")
    u: float = Field(0.5, lt=1.0, description="Параметр априорного распределения")
    alpha: float = Field(0.5, description="Свободный параметр тождества B6, alpha > u - 1")
    d: Optional[int] = Field(None, ge=0, description="Уровень для e37 (по умолчанию min(2, n // 2))")
    z: Optional[float] = Field(None, description="Компонента z для e37 (по умолчанию r / 2)")


class IdentityResult(BaseModel):
    """Невязка одного тождества."""
    name: str = Field(description="Обозначение тождества")
    lhs: float = Field(description="Конечная сумма")
    rhs: float = Field(description="Замкнутая форма")
    residual: float = Field(description="|lhs - rhs| / max(1, |rhs|) или масштабированный асимптотический зазор")
    asymptotic: bool = Field(False, description="Асимптотическое ли тождество")
    status: CheckStatus = Field(description="PASS или FAIL относительно допуска")
