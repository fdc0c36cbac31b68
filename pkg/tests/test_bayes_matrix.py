"""
Тесты байесовских матриц плотности zeta_n(u).
"""

import itertools
import logging
import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Добавляем корневую директорию в Python path
sys.path.insert(0, str(Path(__file__).parent.parent))

from qredux.core.errors import CapacityError, ContractError, DomainError
from qredux.services.bayes_matrix import (
    overlap_stats,
    reduced_zeta,
    tilde_zeta_matrix,
    z_entry,
    z_entry_oracle,
    zeta_matrix,
    zeta_matrix_oracle,
)
from qredux.services.qstate import mask_elements, subset_mask
from qredux.services.specfun import log_gamma

# Настройка логирования
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)


def test_overlap_stats():
    stats = overlap_stats({2, 4, 5}, {2, 5, 6}, 7)
    assert (stats.n_in_in, stats.n_out_out, stats.n_out_in, stats.n_in_out) == (2, 3, 1, 1)


@pytest.mark.parametrize("i_set, j_set, expected", [
    (set(), set(), 5 / 16),
    ({1, 2}, {1, 2}, 5 / 16),
    ({1}, {1}, 3 / 16),
    ({1}, {2}, 1 / 8),
    (set(), {1}, 0.0),
])
def test_z_entry_two_qubits(i_set, j_set, expected):
    assert z_entry(2, 0.5, overlap_stats(i_set, j_set, 2)) == pytest.approx(expected, abs=1e-15)


def test_z_entry_domain():
    with pytest.raises(DomainError):
        z_entry(2, 1.0, overlap_stats(set(), set(), 2))


@pytest.mark.parametrize("n", [1, 3, 5])
@pytest.mark.parametrize("u", [-1.0, 0.0, 0.5, 0.9])
def test_zeta_matrix_invariants(n, u):
    """След 1, симметрия и неотрицательность спектра."""
    zeta = zeta_matrix(n, u).matrix
    assert np.trace(zeta) == pytest.approx(1.0, abs=1e-13)
    assert np.allclose(zeta, zeta.T)
    assert np.linalg.eigvalsh(zeta).min() > 0


def test_zeta_matrix_permutation_invariance():
    """Перестановка элементов [n] не меняет матрицу."""
    n = 4
    zeta = zeta_matrix(n, 0.3).matrix
    for perm in [(2, 1, 3, 4), (4, 3, 2, 1), (2, 3, 4, 1)]:
        relabel = [subset_mask({perm[e - 1] for e in mask_elements(m)}, n) for m in range(1 << n)]
        assert np.allclose(zeta[np.ix_(relabel, relabel)], zeta, atol=1e-15)


def test_zeta_matrix_limits():
    with pytest.raises(CapacityError):
        zeta_matrix(13, 0.5)
    with pytest.raises(DomainError):
        zeta_matrix(2, 1.0)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("u", [0.0, 0.5])
def test_entries_match_quadrature_oracle(n, u):
    for i, j in itertools.product(range(1 << n), repeat=2):
        exact = z_entry(n, u, overlap_stats(i, j, n))
        assert z_entry_oracle(n, u, i, j) == pytest.approx(exact, abs=1e-10)


@pytest.mark.parametrize("u", [0.0, 0.5])
def test_entries_depend_only_on_overlap_sizes(u):
    """Элемент (I, J) определяется тройкой (|I ∩ J|, |I|, |J|)."""
    n = 6
    matrix = zeta_matrix(n, u).matrix
    groups = {}
    for i, j in itertools.product(range(1 << n), repeat=2):
        key = (bin(i & j).count("1"), bin(i).count("1"), bin(j).count("1"))
        groups.setdefault(key, []).append(matrix[i, j])
    for (_, size_i, size_j), values in groups.items():
        assert len(set(values)) == 1, f"Разные значения в группе {size_i}, {size_j}"
        if size_i != size_j:
            assert values[0] == 0.0


def test_dense_oracle_matches_closed_form():
    oracle = zeta_matrix_oracle(2, -0.5)
    assert np.allclose(oracle, zeta_matrix(2, -0.5).matrix, atol=1e-10)
    assert np.trace(oracle) == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(CapacityError):
        zeta_matrix_oracle(7, 0.5)


def test_tilde_zeta_reproduces_zeta():
    """zeta_n(u) есть tilde_zeta с f(x) = Γ(2+n/2+x/2-u) Γ(2+n/2-x/2-u) и общим множителем."""
    n, u = 4, 0.3

    def f(x: float) -> float:
        return math.exp(log_gamma(2 + n / 2 + x / 2 - u) + log_gamma(2 + n / 2 - x / 2 - u))

    constant = math.exp(
        -n * math.log(2.0) + log_gamma(2.5 - u) - log_gamma(2.5 + n / 2 - u) - log_gamma(2 + n / 2 - u)
    )
    assert np.allclose(constant * tilde_zeta_matrix(n, u, f), zeta_matrix(n, u).matrix, atol=1e-15)


def test_tilde_zeta_rejects_odd_function():
    with pytest.raises(ContractError):
        tilde_zeta_matrix(3, 0.5, lambda x: float(x))


def test_reduced_zeta_is_smaller_zeta():
    assert np.allclose(reduced_zeta(4, 0.5, [1, 3]), zeta_matrix(2, 0.5).matrix, atol=1e-14)
    assert np.allclose(reduced_zeta(3, -1.0, [2]), zeta_matrix(1, -1.0).matrix, atol=1e-14)
