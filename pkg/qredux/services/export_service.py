"""
Сервис вывода результатов.

Содержит форматирование таблиц и моделей:
- CSV (точка как разделитель дробной части, 17 значащих цифр, окончания строк LF)
- JSON (модели pydantic с сортировкой ключей)
- Бинарный формат матрицы zeta_n(u): 16-байтовый заголовок и little-endian binary64
"""

import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel

from qredux.core.config import settings
from qredux.core.errors import DomainError
from qredux.models.schemas import Spectrum, ZetaMatrix

logger = logging.getLogger(__name__)

MATRIX_MAGIC = b"ZETA"
HEADER_DTYPE = np.dtype([("magic", "S4"), ("n", "<i4"), ("u", "<f8")])

Row = Sequence[Any]


class ExportService:
    """Сервис форматирования и записи таблиц, моделей и матриц."""

    def __init__(self, digits: Optional[int] = None):
        """
        Инициализация сервиса вывода.

        Args:
            digits: Число значащих цифр (по умолчанию settings.csv_digits)
        """
        self.digits = digits or settings.csv_digits

    def format_value(self, value: Any) -> str:
        """Форматирует число для CSV; остальные значения приводятся к строке."""
        if isinstance(value, bool):
            return str(value).lower()
        if isinstance(value, (float, np.floating)):
            return format(float(value), f".{self.digits}g")
        if value is None:
            return ""
        if hasattr(value, "value"):
            return str(value.value)
        return str(value)

    def to_csv(self, header: Sequence[str], rows: Iterable[Row]) -> str:
        """
        Таблица в CSV.

        Args:
            header: Имена столбцов
            rows: Строки таблицы

        Returns:
            str: Текст CSV с окончаниями строк LF
        """
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([self.format_value(value) for value in row])
        return buffer.getvalue()

    def to_json(self, payload: Union[BaseModel, List[BaseModel], Any]) -> str:
        """Модель, список моделей или словарь в JSON."""
        if isinstance(payload, BaseModel):
            data = payload.model_dump(mode="json")
        elif isinstance(payload, list) and payload and isinstance(payload[0], BaseModel):
            data = [item.model_dump(mode="json") for item in payload]
        else:
            data = payload
        return json.dumps(data, indent=2, sort_keys=True) + "\n"

    def emit(self, text: str, out: Optional[str] = None) -> None:
        """Пишет текст в файл out или в stdout."""
        if out is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return
        path = Path(out)
        path.write_text(text, encoding="utf-8", newline="\n")
        logger.info(f"Результат записан: {path}")

    # =========================================================================
    # ТАБЛИЦЫ ПРЕДМЕТНОЙ ОБЛАСТИ
    # =========================================================================

    def spectrum_rows(self, spectrum: Spectrum) -> Tuple[List[str], List[Row]]:
        """Столбцы d, lambda, multiplicity, cumulative_weight."""
        header = ["d", "lambda", "multiplicity", "cumulative_weight"]
        rows = [
            (level.d, level.eigenvalue, level.multiplicity, level.cumulative_weight)
            for level in spectrum.levels
        ]
        return header, rows

    def matrix_rows(self, zeta: ZetaMatrix) -> Tuple[List[str], List[Row]]:
        """Столбцы I, J, value по строкам; I и J заданы масками подмножеств."""
        dim = zeta.matrix.shape[0]
        rows = [
            (i, j, float(zeta.matrix[i, j]))
            for i in range(dim)
            for j in range(dim)
        ]
        return ["I", "J", "value"], rows

    # =========================================================================
    # БИНАРНЫЙ ФОРМАТ МАТРИЦЫ
    # =========================================================================

    def matrix_to_bytes(self, zeta: ZetaMatrix) -> bytes:
        """Заголовок (magic, n, u) и элементы по строкам в little-endian binary64."""
        header = np.array([(MATRIX_MAGIC, zeta.n, zeta.u)], dtype=HEADER_DTYPE)
        body = np.ascontiguousarray(zeta.matrix, dtype="<f8")
        return header.tobytes() + body.tobytes(order="C")

    def write_matrix_bin(self, zeta: ZetaMatrix, out: str) -> Path:
        """Пишет матрицу в бинарный файл."""
        path = Path(out)
        path.write_bytes(self.matrix_to_bytes(zeta))
        logger.info(f"Матрица zeta_{zeta.n}({zeta.u}) записана в {path}")
        return path

    def read_matrix_bin(self, source: Union[str, Path, bytes]) -> Tuple[int, float, np.ndarray]:
        """
        Читает бинарный файл матрицы.

        Args:
            source: Путь к файлу или его содержимое

        Returns:
            Tuple[int, float, np.ndarray]: (n, u, матрица 2^n x 2^n)

        Raises:
            DomainError: Если заголовок или размер файла не соответствуют формату
        """
        data = source if isinstance(source, bytes) else Path(source).read_bytes()
        if len(data) < HEADER_DTYPE.itemsize:
            raise DomainError(f"Файл короче заголовка: {len(data)} байт")
        header = np.frombuffer(data[:HEADER_DTYPE.itemsize], dtype=HEADER_DTYPE)[0]
        if bytes(header["magic"]) != MATRIX_MAGIC:
            raise DomainError(f"Неверная сигнатура файла: {bytes(header['magic'])!r}")
        n, u = int(header["n"]), float(header["u"])
        if not 1 <= n <= settings.zeta_max_n:
            raise DomainError(f"Недопустимое n = {n} в заголовке")
        dim = 1 << n
        expected = HEADER_DTYPE.itemsize + 8 * dim * dim
        if len(data) != expected:
            raise DomainError(f"Размер файла {len(data)} байт, ожидалось {expected}")
        matrix = np.frombuffer(data, dtype="<f8", offset=HEADER_DTYPE.itemsize).reshape(dim, dim)
        logger.info(f"Прочитана матрица n = {n}, u = {u}")
        return n, u, matrix.astype(float)


# Глобальный экземпляр сервиса вывода
export_service = ExportService()
