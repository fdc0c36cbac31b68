"""
Тесты специальных функций, комбинаторики и радиальной квадратуры.
"""

import logging
import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Добавляем корневую директорию в Python path
sys.path.insert(0, str(Path(__file__).parent.parent))

from qredux.core.errors import AccuracyError, DomainError
from qredux.services.specfun import (
    beta_integral,
    binomial,
    catalan,
    digamma,
    integrate_radial,
    log_binomial,
    log_gamma,
    log_gamma_signed,
    trigamma,
)

# Настройка логирования
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)


@pytest.mark.parametrize("x, expected", [
    (1.0, 0.0),
    (0.5, 0.57236494292),
    (2.5, 0.28468287047),
    (5.0, math.log(24.0)),
])
def test_log_gamma_values(x, expected):
    """log Γ в известных точках."""
    assert log_gamma(x) == pytest.approx(expected, abs=1e-10)


def test_log_gamma_vectorized():
    """log Γ принимает массивы и сохраняет форму."""
    values = log_gamma(np.array([1.0, 2.0, 3.0, 4.0]))
    assert values.shape == (4,)
    assert np.allclose(values, np.log([1.0, 1.0, 2.0, 6.0]), atol=1e-14)


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
def test_log_gamma_rejects_nonpositive(x):
    with pytest.raises(DomainError):
        log_gamma(x)


def test_log_gamma_signed_negative_argument():
    """Γ(-1/2) = -2 sqrt(pi)."""
    log_abs, sign = log_gamma_signed(-0.5)
    assert sign == -1.0
    assert log_abs == pytest.approx(math.log(2.0 * math.sqrt(math.pi)), abs=1e-12)
    with pytest.raises(DomainError):
        log_gamma_signed(-2.0)


@pytest.mark.parametrize("x, expected", [
    (1.0, -0.5772156649),
    (0.5, -1.9635100260),
    (4.0, 1.2561176684),
])
def test_digamma_values(x, expected):
    assert digamma(x) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("x, expected", [
    (1.0, 1.6449340668),
    (0.5, 4.9348022005),
    (2.0, 0.6449340668),
])
def test_trigamma_values(x, expected):
    assert trigamma(x) == pytest.approx(expected, abs=1e-9)


def test_binomial_and_catalan():
    """Точные целые и нули вне треугольника Паскаля."""
    assert binomial(8, 2) == 28
    assert binomial(17, 0) == 1
    assert binomial(3, 1) == 3
    assert binomial(5, -1) == 0
    assert binomial(5, 6) == 0
    assert [catalan(m) for m in range(6)] == [1, 1, 2, 5, 14, 42]
    assert catalan(11) == 58786
    assert binomial(200, 100) == math.comb(200, 100)
    with pytest.raises(DomainError):
        catalan(-1)


def test_log_binomial_matches_exact():
    assert log_binomial(60, 23) == pytest.approx(math.log(math.comb(60, 23)), rel=1e-13)


def test_integrate_radial_constant():
    """∫_0^1 dr = 1 при u = 0."""
    assert integrate_radial(lambda r: np.ones_like(r), 0.0) == pytest.approx(1.0, abs=1e-12)


def test_integrate_radial_quarter_pi():
    """∫ r^2 (1-r^2)^{-1/2} dr = pi/4."""
    assert integrate_radial(lambda r: r ** 2, 0.5) == pytest.approx(math.pi / 4, abs=1e-11)


@pytest.mark.parametrize("m", [0, 2, 5])
@pytest.mark.parametrize("u", [-1.0, 0.0, 0.5, 0.9])
def test_integrate_radial_against_beta(m, u):
    """Квадратура степеней r совпадает с замкнутой формой через Γ."""
    value = integrate_radial(lambda r: r ** m, u)
    assert value == pytest.approx(beta_integral(m, u), rel=1e-10)


@pytest.mark.parametrize("m", [0, 2])
@pytest.mark.parametrize("u", [0.97, 0.99, 0.999])
def test_integrate_radial_near_unit_singularity(m, u):
    """Масса у r = 1 при u -> 1 уходит далеко по t; диапазон узлов растет вместе с 1/(1-u)."""
    value = integrate_radial(lambda r: r ** m, u)
    assert value == pytest.approx(beta_integral(m, u), rel=1e-10)


def test_integrate_radial_complement_log():
    """-∫ log(1-r) dr = 1; дополнение передается точно."""
    value = integrate_radial(lambda r, c: -np.log(c), 0.0, complement=True)
    assert value == pytest.approx(1.0, rel=1e-10)


def test_integrate_radial_errors():
    with pytest.raises(DomainError):
        integrate_radial(lambda r: r, 1.0)
    with pytest.raises(AccuracyError):
        # 1 - r уходит в underflow там, где вес еще не мал
        integrate_radial(lambda r, c: -np.log(c), 0.999, complement=True)
    with pytest.raises(AccuracyError) as info:
        integrate_radial(lambda r: np.sin(400.0 * r), 0.0, max_level=3)
    assert info.value.best_estimate is not None
