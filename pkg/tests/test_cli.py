"""
Тесты командной строки qredux: подкоманды, форматы вывода и коды завершения.
"""

import csv
import io
import json
import logging
import sys
from pathlib import Path

import pytest

# Добавляем корневую директорию в Python path
sys.path.insert(0, str(Path(__file__).parent.parent))

from qredux.core.config import settings
from qredux.main import run

# Настройка логирования
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)


def _rows(text: str):
    return list(csv.DictReader(io.StringIO(text)))


def test_spectrum_csv(capsys):
    assert run(["spectrum", "--n", "7", "--u", "0.5"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 4
    assert [int(row["multiplicity"]) for row in rows] == [8, 36, 56, 28]
    assert float(rows[-1]["cumulative_weight"]) == pytest.approx(1.0)


def test_redundancy_json(capsys):
    assert run(["redundancy", "--n", "16", "--u", "0.5", "--r", "0", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["regime"] == "center"
    assert data["n"] == 16


def test_maximin_defaults_to_json(capsys):
    assert run(["maximin"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["u_star"] == pytest.approx(0.531267, abs=1e-5)


def test_compress_row(capsys):
    assert run(["compress", "--n", "2", "--u", "0.5", "--eps", "0.1", "--r", "0.5"]) == 0
    row = _rows(capsys.readouterr().out)[0]
    assert (row["D"], row["dim"]) == ("0", "3")
    assert float(row["source_weight"]) <= 1.0


def test_identities_pass(capsys):
    assert run(["identities", "--n", "10", "--r", "0.3", "--u", "0.2"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert {row["status"] for row in rows} == {"PASS"}
    assert "e37" in {row["name"] for row in rows}


def test_figure_data(capsys, tmp_path):
    out = tmp_path / "figure2.csv"
    assert run(["figure2", "--grid", "3", "--out", str(out)]) == 0
    assert len(_rows(out.read_text())) == 3
    assert run(["figure3", "--grid", "4"]) == 0
    assert len(_rows(capsys.readouterr().out)) == 4


def test_matrix_bin_then_verify(capsys, tmp_path):
    path = tmp_path / "zeta.bin"
    assert run(["matrix", "--n", "3", "--u", "0.5", "--format", "bin", "--out", str(path)]) == 0
    assert path.stat().st_size == 16 + 8 * 64
    code = run(["verify", "--input", str(path)])
    rows = _rows(capsys.readouterr().out)
    assert code == 0, [row for row in rows if row["status"] != "PASS"]
    assert "matrix_file" in {row["name"] for row in rows}


def test_tol_is_a_general_flag(capsys, monkeypatch):
    """--tol принимается любой подкомандой; вне identities и verify он задает порог квадратуры."""
    monkeypatch.setattr(settings, "quad_tol", settings.quad_tol)
    assert run(["identities", "--n", "6", "--tol", "1e-8"]) == 0
    assert {row["status"] for row in _rows(capsys.readouterr().out)} == {"PASS"}
    assert run(["spectrum", "--n", "3", "--tol", "1e-8"]) == 0
    assert settings.quad_tol == 1e-8
    assert run(["bayes", "--n", "3", "--u", "0.0", "--integral", "--tol", "1e-10"]) == 0
    assert settings.quad_tol == 1e-10
    capsys.readouterr()
    assert run(["spectrum", "--n", "3", "--tol", "-1"]) == 1


@pytest.mark.parametrize("argv, expected", [
    (["spectrum", "--bogus"], 3),
    (["nosuch"], 3),
    (["spectrum", "--threads", "0"], 3),
    (["spectrum", "--format", "bin"], 3),
    (["spectrum", "--u", "1.5"], 1),
    (["matrix", "--n", "20"], 1),
    (["minimax", "--n", "1"], 2),
    (["--help"], 0),
])
def test_exit_codes(argv, expected, capsys):
    assert run(argv) == expected
