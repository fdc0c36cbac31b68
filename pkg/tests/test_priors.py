"""
Тесты распределений на шаре Блоха и монотонных метрик.
"""

import logging
import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Добавляем корневую директорию в Python path
sys.path.insert(0, str(Path(__file__).parent.parent))

from qredux.core.errors import ContractError, DomainError
from qredux.services.priors import (
    cartesian_to_spherical,
    equated_monotone,
    kubo_mori_density,
    kubo_mori_monotone,
    kubo_mori_prior,
    monotone_normalizer,
    monotone_prior,
    monotone_volume,
    prior_mass,
    q_density,
    q_prior,
    q_radial_mass,
    sld_monotone,
    spherical_to_cartesian,
    uniform_ball,
    validate_monotone,
)

# Настройка логирования
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)


def test_q_density_values():
    """q(0) равномерна: 3/(4 pi); q(1/2) в центре равна 1/pi^2."""
    assert q_density(0.0, 0.3) == pytest.approx(0.2387324146, abs=1e-10)
    assert q_density(0.0, 0.3) == pytest.approx(3 / (4 * math.pi))
    assert q_density(0.5, 0.0) == pytest.approx(1 / math.pi ** 2)
    assert q_density(-1.0, 1.0) == 0.0


def test_q_density_domain():
    with pytest.raises(DomainError):
        q_density(1.0, 0.5)
    with pytest.raises(DomainError):
        q_density(0.5, 1.0)
    with pytest.raises(DomainError):
        q_density(0.0, 1.2)


@pytest.mark.parametrize("u", [-1.0, 0.0, 0.5, 0.9, 0.97, 0.99, 0.999])
def test_q_prior_is_normalized(u):
    assert prior_mass(q_prior(u)) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("u", [-1.0, 0.0, 0.5, 0.9])
def test_kubo_mori_prior_is_normalized(u):
    assert prior_mass(kubo_mori_prior(u)) == pytest.approx(1.0, abs=1e-10)


def test_kubo_mori_density_conventions():
    """Сферическая плотность Кубо-Мори совпадает с декартовой после якобиана."""
    u, r, theta = 0.3, 0.7, 1.1
    cartesian = kubo_mori_prior(u).density(r)
    assert kubo_mori_density(u, r, theta) == pytest.approx(cartesian_to_spherical(cartesian, r, theta))
    assert spherical_to_cartesian(kubo_mori_density(u, r, theta), r, theta) == pytest.approx(cartesian)
    assert kubo_mori_density(u, 0.0, theta) == 0.0


def test_q_radial_mass():
    assert q_radial_mass(0.0, 0.5) == pytest.approx(0.125)
    assert q_radial_mass(0.5, 1.0) == pytest.approx(1.0)
    # При u -> 1 масса уходит к границе
    assert q_radial_mass(0.99, 0.95) < 0.1
    with pytest.raises(DomainError):
        q_radial_mass(0.5, 1.5)


def test_uniform_ball_is_q_zero():
    assert uniform_ball().density(0.4) == pytest.approx(q_density(0.0, 0.4))
    assert q_prior(0.5).name == "q(0.5)"


@pytest.mark.parametrize("f", [sld_monotone, kubo_mori_monotone, equated_monotone])
def test_monotone_functions_satisfy_contract(f):
    validate_monotone(f)
    assert float(f(np.array([1.0]))[0]) == pytest.approx(1.0)


@pytest.mark.parametrize("f", [
    lambda t: np.asarray(t, dtype=float),
    lambda t: np.ones_like(np.asarray(t, dtype=float)),
    lambda t: 2.0 * (1.0 + np.asarray(t, dtype=float)),
])
def test_monotone_contract_violations(f):
    with pytest.raises(ContractError):
        monotone_volume(f, 0.5, 1.0)


def test_sld_volume_matches_q_half():
    """Объемный элемент SLD, деленный на pi^2, есть q(1/2)."""
    assert monotone_normalizer(sld_monotone) == pytest.approx(math.pi ** 2, rel=1e-10)
    for r in (0.1, 0.5, 0.9):
        theta = 0.7
        volume = monotone_volume(sld_monotone, r, theta) / math.pi ** 2
        assert volume == pytest.approx(cartesian_to_spherical(q_density(0.5, r), r, theta), rel=1e-12)


def test_monotone_prior_is_normalized():
    prior = monotone_prior(kubo_mori_monotone, name="kubo_mori_volume")
    assert prior.name == "kubo_mori_volume"
    assert prior_mass(prior) == pytest.approx(1.0, abs=1e-10)
    assert prior_mass(monotone_prior(sld_monotone)) == pytest.approx(1.0, abs=1e-10)
