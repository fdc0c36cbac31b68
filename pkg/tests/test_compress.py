"""
Тесты планировщика универсального сжатия.
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
from qredux.models.schemas import BlochVector
from qredux.services.bayes_matrix import zeta_matrix
from qredux.services.compress import fidelity_bound, plan, source_curve, source_weight, typical_qubits
from qredux.services.qstate import tensor_power
from qredux.services.spectrum import eigenprojector

# Настройка логирования
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)


def test_plan_two_qubits():
    result = plan(2, 0.5, 0.1)
    assert result.levels_kept == 0
    assert result.dim == 3
    assert result.qubits == pytest.approx(math.log2(3))
    assert result.prior_weight == pytest.approx(15 / 16)

    full = plan(2, 0.5, 0.01)
    assert (full.levels_kept, full.dim) == (1, 4)
    assert full.prior_weight == pytest.approx(1.0)


def test_plan_monotone_in_epsilon():
    dims = [plan(40, 0.3, eps).dim for eps in (0.5, 0.1, 0.01, 1e-4)]
    assert dims == sorted(dims)
    assert dims[-1] <= 2 ** 40


def test_plan_source_weights():
    result = plan(10, 0.5, 0.05, radii=[0.0, 0.5, 1.0])
    assert set(result.source_weights) == {0.0, 0.5, 1.0}
    assert result.source_weights[1.0] == pytest.approx(1.0)
    assert result.source_weights[0.0] <= result.source_weights[0.5] <= 1.0


def test_plan_domain():
    with pytest.raises(DomainError):
        plan(4, 0.5, 0.0)
    with pytest.raises(DomainError):
        plan(4, 1.0, 0.1)


def test_source_weight_matches_projectors():
    n, levels_kept, r = 6, 1, 0.5
    projector = eigenprojector(n, 0.5, 0) + eigenprojector(n, 0.5, 1)
    rho = tensor_power(BlochVector.from_spherical(r, 0.4, 1.3), n).matrix
    dense = float(np.real(np.trace(rho @ projector)))
    assert source_weight(n, levels_kept, r) == pytest.approx(dense, abs=1e-12)
    with pytest.raises(DomainError):
        source_weight(n, 4, r)


@pytest.mark.parametrize("u", [-1.0, 0.5])
@pytest.mark.parametrize("epsilon", [0.3, 0.05])
@pytest.mark.parametrize("n", range(2, 7))
def test_prior_weight_matches_projectors(n, u, epsilon):
    """prior_weight равен Tr(zeta_n P) для проектора на сохраненные уровни."""
    result = plan(n, u, epsilon)
    projector = sum(eigenprojector(n, u, d) for d in range(result.levels_kept + 1))
    dense = float(np.real(np.trace(zeta_matrix(n, u).matrix @ projector)))
    assert result.prior_weight == pytest.approx(dense, abs=1e-9)


def test_fidelity_bound():
    assert fidelity_bound(1.0) == 1.0
    assert fidelity_bound(0.95) == pytest.approx(0.9)
    assert fidelity_bound(0.3) == 0.0
    with pytest.raises(DomainError):
        fidelity_bound(1.5)


def test_source_curve_and_typical_qubits():
    rows = source_curve(4, 0, 3)
    assert [r for r, _, _ in rows] == [0.0, 0.5, 1.0]
    assert rows[-1][1:] == pytest.approx((1.0, 1.0))
    assert typical_qubits(10, 0.0) == pytest.approx(10.0)
    assert typical_qubits(10, 1.0) == 0.0
