"""Конфигурация qredux."""

from typing import Optional
from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Настройки вычислений и вывода."""

    # =============================================================================
    # ПАРАЛЛЕЛИЗМ
    # =============================================================================

    threads: int = Field(1, ge=1, description="Максимальное число рабочих потоков (QREDUX_THREADS)")

    # =============================================================================
    # ЛОГИ
    # =============================================================================

    log_level: str = Field("WARNING", description="Уровень логирования")
    log_console: bool = Field(True, description="Вывод логов в stderr")
    log_dir: Optional[str] = Field(
        None,
        description="Директория для файла qredux.log (если не задана, файл не пишется)"
    )

    # =============================================================================
    # КВАДРАТУРЫ
    # =============================================================================

    quad_max_level: int = Field(12, ge=3, description="Максимальный уровень сгущения tanh-sinh")
    quad_tol: float = Field(1e-13, gt=0, description="Порог сходимости tanh-sinh")

    # =============================================================================
    # ДОПУСКИ ЛИНЕЙНОЙ АЛГЕБРЫ
    # =============================================================================

    hermitian_tol: float = Field(1e-10, description="Допуск проверки эрмитовости")
    null_eigen_tol: float = Field(1e-14, description="Собственные значения ниже порога считаются нулевыми")
    support_tol: float = Field(1e-12, description="Допустимый вес rho1 на нулевом подпространстве rho2")
    rank_tol: float = Field(1e-10, description="Порог ведущего элемента при ортогонализации и оценке ранга")

    # =============================================================================
    # ОГРАНИЧЕНИЯ РАЗМЕРА
    # =============================================================================

    tensor_power_max_n: int = Field(14, description="Максимальное n для тензорной степени")
    zeta_max_n: int = Field(12, description="Максимальное n для плотной матрицы zeta_n(u)")
    oracle_max_n: int = Field(6, description="Максимальное n для квадратурного оракула элементов")
    eigenbasis_max_n: int = Field(12, description="Максимальное n для перечисления собственного базиса")
    projector_max_n: int = Field(10, description="Максимальное n для плотных собственных проекторов")

    # =============================================================================
    # ПОИСК КОРНЕЙ И ВЫВОД
    # =============================================================================

    root_xtol: float = Field(1e-12, description="Ширина интервала при уточнении корня")
    scan_points: int = Field(512, ge=16, description="Число точек сканирования при поиске интервала")
    csv_digits: int = Field(17, ge=1, le=17, description="Значащих цифр в CSV и JSON")

    class Config:
        """Конфигурация Pydantic."""
        env_prefix = "QREDUX_"
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = False
        extra = "ignore"


# Глобальный экземпляр настроек
settings = Settings()
