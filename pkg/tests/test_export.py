"""
Тесты форматирования CSV/JSON и бинарного формата матрицы.
"""

import json
import logging
import sys
from pathlib import Path

import numpy as np
import pytest

# Добавляем корневую директорию в Python path
sys.path.insert(0, str(Path(__file__).parent.parent))

from qredux.core.errors import DomainError
from qredux.models.schemas import CheckStatus, Regime
from qredux.services.bayes_matrix import zeta_matrix
from qredux.services.export_service import HEADER_DTYPE, ExportService, export_service
from qredux.services.spectrum import spectrum

# Настройка логирования
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)


def test_format_value():
    assert export_service.format_value(0.1) == "0.10000000000000001"
    assert export_service.format_value(np.float64(0.5)) == "0.5"
    assert export_service.format_value(True) == "true"
    assert export_service.format_value(None) == ""
    assert export_service.format_value(7) == "7"
    assert export_service.format_value(Regime.center) == "center"
    assert export_service.format_value(CheckStatus.passed) == "PASS"
    assert ExportService(digits=4).format_value(1 / 3) == "0.3333"


def test_to_csv_uses_lf():
    text = export_service.to_csv(["a", "b"], [(1, 0.25), (2, 3.0)])
    assert text == "a,b\n1,0.25\n2,3\n"


def test_spectrum_rows():
    header, rows = export_service.spectrum_rows(spectrum(7, 0.5))
    assert header == ["d", "lambda", "multiplicity", "cumulative_weight"]
    assert [row[2] for row in rows] == [8, 36, 56, 28]


def test_to_json_sorted():
    text = export_service.to_json(spectrum(2, 0.5))
    data = json.loads(text)
    assert list(data) == sorted(data)
    assert data["levels"][0]["eigenvalue"] == pytest.approx(5 / 16)
    assert json.loads(export_service.to_json([{"x": 1}])) == [{"x": 1}]


def test_matrix_binary_layout(tmp_path):
    zeta = zeta_matrix(2, 0.5)
    data = export_service.matrix_to_bytes(zeta)
    assert len(data) == HEADER_DTYPE.itemsize + 8 * 16
    assert HEADER_DTYPE.itemsize == 16
    assert data[:4] == b"ZETA"

    path = export_service.write_matrix_bin(zeta, str(tmp_path / "zeta.bin"))
    n, u, matrix = export_service.read_matrix_bin(path)
    assert (n, u) == (2, 0.5)
    assert np.array_equal(matrix, zeta.matrix)


def test_matrix_binary_errors():
    data = export_service.matrix_to_bytes(zeta_matrix(1, 0.0))
    with pytest.raises(DomainError):
        export_service.read_matrix_bin(b"ATEZ" + data[4:])
    with pytest.raises(DomainError):
        export_service.read_matrix_bin(data[:-8])
    with pytest.raises(DomainError):
        export_service.read_matrix_bin(data[:10])


def test_emit_to_file(tmp_path):
    out = tmp_path / "table.csv"
    export_service.emit("a\n1\n", str(out))
    assert out.read_bytes() == b"a\n1\n"
