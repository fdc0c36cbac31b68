"""
Тесты реестра суммационных тождеств.
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
from qredux.models.schemas import CheckStatus, IdentityParams
from qredux.services.identities import ASYMPTOTIC_IDENTITIES, EXACT_IDENTITIES, b6_closed_form, b7_closed_form
from qredux.services.redundancy import identity_check, identity_names, run_identity_suite

# Настройка логирования
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)


def test_registry_names():
    names = identity_names()
    assert names[:7] == ["a8", "a9", "a10", "a11", "a12", "a13", "a14"]
    assert names[-2:] == ["a15", "B8"]
    assert len(names) == len(EXACT_IDENTITIES) + len(ASYMPTOTIC_IDENTITIES)


@pytest.mark.parametrize("name, params", [
    ("a8", IdentityParams(n=9, r=0.37)),
    ("a9", IdentityParams(n=15, r=0.8)),
    ("a10", IdentityParams(n=6, r=0.25)),
    ("B3", IdentityParams(n=12, u=0.3)),
    ("B4", IdentityParams(n=7, u=-0.4)),
    ("e37", IdentityParams(n=8, d=2, r=0.5, z=0.2)),
])
def test_exact_identity_points(name, params):
    result = identity_check(name, params)
    assert result.status == CheckStatus.passed, f"{name}: невязка {result.residual:.3e}"
    assert not result.asymptotic


def test_b5_precondition():
    with pytest.raises(DomainError):
        identity_check("B5", IdentityParams(u=0.0))
    assert identity_check("B5", IdentityParams(n=5, u=0.4)).status == CheckStatus.passed


def test_b6_alpha_precondition():
    with pytest.raises(DomainError):
        identity_check("B6", IdentityParams(u=0.5, alpha=-0.6))


def test_b7_is_alpha_derivative_of_b6():
    n, u, h = 9, 0.35, 1e-5
    derivative = (b6_closed_form(n, u, h) - b6_closed_form(n, u, -h)) / (2 * h)
    assert derivative == pytest.approx(b7_closed_form(n, u), rel=1e-7)


def test_suite_on_random_points():
    rng = np.random.default_rng(7)
    for _ in range(10):
        params = IdentityParams(
            n=int(rng.integers(1, 17)),
            r=float(rng.uniform(0.05, 0.95)),
            u=float(rng.uniform(-1.0, 0.95)),
            alpha=float(rng.uniform(0.0, 2.0)),
        )
        for result in run_identity_suite(params, tol=1e-9):
            assert result.status == CheckStatus.passed, f"{result.name} при {params}: {result.residual:.3e}"


def test_suite_skips_failed_preconditions():
    names = [result.name for result in run_identity_suite(IdentityParams(n=6, u=0.0))]
    assert "B5" not in names
    assert "B3" in names


def test_asymptotic_identities_are_scaled():
    """Масштабированные зазоры асимптотических разложений ограничены."""
    small = identity_check("a15", IdentityParams(n=10, r=0.6, u=0.2))
    large = identity_check("a15", IdentityParams(n=40, r=0.6, u=0.2))
    assert small.asymptotic and large.asymptotic
    assert math.isfinite(large.residual)
    assert large.residual < 10 * max(small.residual, 1.0)
    assert identity_check("B8", IdentityParams(n=30, u=0.5)).status == CheckStatus.passed


def test_unknown_identity_and_radius():
    with pytest.raises(DomainError):
        identity_check("a99", IdentityParams())
    with pytest.raises(DomainError):
        identity_check("a8", IdentityParams(r=1.0))
