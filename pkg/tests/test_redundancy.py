"""
Тесты точной и асимптотической избыточности, энтропии zeta_n(u)
и байесовской избыточности.
"""

import logging
import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Добавляем корневую директорию в Python path
sys.path.insert(0, str(Path(__file__).parent.parent))

from qredux.core.errors import DomainError
from qredux.models.schemas import BayesMode, BlochVector, Regime
from qredux.services.bayes_matrix import zeta_matrix
from qredux.services.qstate import relative_entropy, tensor_power, von_neumann_entropy_bloch
from qredux.services.redundancy import (
    asymptotic_redundancy,
    bayes_constant,
    bayes_redundancy,
    bayes_redundancy_integral,
    clamp_radius,
    classical_baselines,
    entropy_rate,
    entropy_subadditivity_gap,
    figure2_data,
    figure3_data,
    interior_limit_at_boundary,
    level_weights,
    redundancy_report,
    redundancy_table,
    regime_for,
    relative_entropy_exact,
    zeta_entropy_asym,
    zeta_entropy_exact,
)

# Настройка логирования
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)


def test_level_weights_endpoints():
    assert level_weights(2, 0.0).weights == pytest.approx([0.75, 0.25])
    assert level_weights(2, 1.0).weights == [1.0, 0.0]
    assert level_weights(5, 1.0 - 1e-15).r == 1.0


@pytest.mark.parametrize("n", [1, 2, 7, 100, 1000])
@pytest.mark.parametrize("r", [0.0, 1e-8, 0.3, 0.999999])
def test_level_weights_sum_to_one(n, r):
    weights = level_weights(n, r).weights
    assert math.fsum(weights) == pytest.approx(1.0, abs=1e-12)
    assert min(weights) >= 0.0


def test_clamp_and_regime():
    assert clamp_radius(1e-15) == 0.0
    assert clamp_radius(1.0 - 1e-15) == 1.0
    assert clamp_radius(0.4) == 0.4
    assert regime_for(0.0) == Regime.center
    assert regime_for(0.5) == Regime.interior
    assert regime_for(1.0) == Regime.boundary
    with pytest.raises(DomainError):
        clamp_radius(1.2)


def test_single_qubit_redundancy():
    """zeta_1(u) = I/2 при любом u."""
    assert relative_entropy_exact(1, 0.3, 1.0) == pytest.approx(math.log(2.0))
    for r in (0.0, 0.4, 0.9):
        expected = math.log(2.0) - von_neumann_entropy_bloch(r)
        assert relative_entropy_exact(1, -0.5, r) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("n, u, r", [(3, 0.5, 0.6), (2, -1.0, 0.2), (4, 0.9, 0.95), (4, 0.0, 0.0)])
def test_exact_redundancy_matches_dense(n, u, r):
    b = BlochVector.from_spherical(r, 0.9, 2.1)
    dense = relative_entropy(tensor_power(b, n), zeta_matrix(n, u))
    assert relative_entropy_exact(n, u, r) == pytest.approx(dense, abs=1e-10)


def test_exact_redundancy_matches_dense_random():
    """Случайные n <= 6, u, r и направления: формула по уровням против плотной."""
    rng = np.random.default_rng(7)
    for _ in range(20):
        n = int(rng.integers(1, 7))
        u = float(rng.uniform(-1.0, 0.9))
        r = float(rng.uniform(0.0, 0.95))
        theta, phi = rng.uniform(0.0, math.pi), rng.uniform(0.0, 2 * math.pi)
        b = BlochVector.from_spherical(r, float(theta), float(phi))
        dense = relative_entropy(tensor_power(b, n), zeta_matrix(n, u))
        assert relative_entropy_exact(n, u, r) == pytest.approx(dense, abs=1e-8)


def test_pure_state_redundancy():
    """При r = 1 избыточность равна -log lambda_0."""
    n, u = 6, 0.4
    dense = relative_entropy(tensor_power(BlochVector(z=1.0), n), zeta_matrix(n, u))
    assert relative_entropy_exact(n, u, 1.0) == pytest.approx(dense, abs=1e-10)


def test_asymptotic_constants():
    """Константы при u = 1/2: центр -1.9673559, граница -0.8139295."""
    n = 100
    center = asymptotic_redundancy(n, 0.5, 0.0, Regime.center) - 1.5 * math.log(n)
    boundary = asymptotic_redundancy(n, 0.5, 1.0, Regime.boundary) - 1.5 * math.log(n)
    assert center == pytest.approx(-1.9673559, abs=1e-7)
    assert boundary == pytest.approx(-0.8139295, abs=1e-7)
    baselines = classical_baselines(n, 0.5, 0.0)
    assert baselines.minimax3d - 1.5 * math.log(n) == pytest.approx(-1.9673559, abs=1e-7)
    assert baselines.redundancy3d == pytest.approx(center + 1.5 * math.log(n))
    assert classical_baselines(n, 0.5, 1.0).redundancy3d is None


def test_asymptotic_regime_mismatch():
    with pytest.raises(DomainError):
        asymptotic_redundancy(10, 0.5, 0.5, Regime.center)
    with pytest.raises(DomainError):
        asymptotic_redundancy(10, 0.5, 1.0, Regime.interior)
    with pytest.raises(DomainError):
        asymptotic_redundancy(10, 0.5, 0.3, Regime.boundary)


@pytest.mark.parametrize("u, r", [(0.5, 0.5), (0.0, 0.0), (0.3, 1.0), (-1.0, 0.8)])
def test_asymptotic_error_shrinks(u, r):
    """Ошибка асимптотики убывает как O(1/n)."""
    small = redundancy_report(64, u, r)
    large = redundancy_report(1024, u, r)
    assert small.regime == regime_for(r)
    assert abs(large.exact - large.asymptotic) < abs(small.exact - small.asymptotic) / 4


@pytest.mark.parametrize("u", [0.0, 0.5])
@pytest.mark.parametrize("r", [0.0, 0.2, 0.5, 0.8, 1.0])
def test_scaled_error_stays_bounded(u, r):
    """n * |точное - асимптотика| ограничено: разброс по n = 16..512 в пределах трех раз."""
    scaled = [redundancy_report(n, u, r).scaled_error for n in (16, 32, 64, 128, 256, 512)]
    assert min(scaled) > 0.0
    assert max(scaled) <= 3 * min(scaled)


def test_interior_limit_at_boundary():
    n = 50
    assert interior_limit_at_boundary(n, 0.3) == math.inf
    assert interior_limit_at_boundary(n, 0.7) == -math.inf
    near_one = asymptotic_redundancy(n, 0.5, 1.0 - 1e-9, Regime.interior)
    assert near_one == pytest.approx(interior_limit_at_boundary(n, 0.5), abs=1e-6)


def test_zeta_entropy_values():
    assert zeta_entropy_exact(2, 0.5) == pytest.approx(1.2637407, abs=1e-7)
    assert zeta_entropy_exact(1, 0.2) == pytest.approx(math.log(2.0))
    assert entropy_rate(0.5) == pytest.approx(0.2196277, abs=1e-7)
    assert entropy_rate(0.0) == pytest.approx(1.0 / 3.0)
    assert bayes_constant(0.5) == pytest.approx(-1.7742087, abs=1e-7)


def test_zeta_entropy_asymptotics():
    """Поправка к асимптотике энтропии убывает как n^{u-1}."""
    u = 0.5
    small = abs(zeta_entropy_exact(256, u) - zeta_entropy_asym(256, u))
    large = abs(zeta_entropy_exact(4096, u) - zeta_entropy_asym(4096, u))
    assert large < small / 2


@pytest.mark.parametrize("u", [0.0, 0.5])
def test_zeta_entropy_error_scales_as_power(u):
    """n^{1-u} |S(zeta_n) - асимптотика| остается в пределах трех раз при n = 16..1024."""
    scaled = [
        n ** (1 - u) * abs(zeta_entropy_exact(n, u) - zeta_entropy_asym(n, u))
        for n in (16, 32, 64, 128, 256, 512, 1024)
    ]
    assert min(scaled) > 0.0
    assert max(scaled) <= 3 * min(scaled)


def test_bayes_redundancy_modes():
    u = 0.3
    asym = bayes_redundancy(400, u, BayesMode.asymptotic)
    assert asym == pytest.approx(1.5 * math.log(400) + bayes_constant(u))
    small = abs(bayes_redundancy(256, u) - bayes_redundancy(256, u, BayesMode.asymptotic))
    large = abs(bayes_redundancy(4096, u) - bayes_redundancy(4096, u, BayesMode.asymptotic))
    assert large < small / 2


@pytest.mark.parametrize("n, u", [(2, 0.5), (3, 0.0)])
def test_bayes_redundancy_integral(n, u):
    """Среднее избыточности по q(u) равно S(zeta_n) - n * entropy_rate(u)."""
    assert bayes_redundancy_integral(n, u) == pytest.approx(bayes_redundancy(n, u), rel=1e-8)


def test_entropy_subadditivity_gap():
    assert entropy_subadditivity_gap(4, 0.5, [4]) == pytest.approx(0.0, abs=1e-11)
    assert entropy_subadditivity_gap(4, 0.5, [2, 2]) > 0
    assert entropy_subadditivity_gap(5, 0.0, [1, 1, 3]) > 0
    with pytest.raises(DomainError):
        entropy_subadditivity_gap(4, 0.5, [2, 1])


def test_plot_data():
    points = figure2_data(3)
    assert [r for r, _ in points] == pytest.approx([0.25, 0.5, 0.75])
    assert points[1][1] == pytest.approx(math.log(1 / 3))
    assert all(value < -1.0 for _, value in points)
    curve = figure3_data(5)
    assert [u for u, _ in curve] == pytest.approx(list(np.linspace(0.0, 0.95, 5)))
    assert curve[0][1] == pytest.approx(bayes_constant(0.0))
    with pytest.raises(DomainError):
        figure3_data(5, upper=1.0)


def test_redundancy_table():
    reports = redundancy_table([4, 8, 16], 0.5, 0.5)
    assert [report.n for report in reports] == [4, 8, 16]
    assert reports[0].exact < reports[2].exact
