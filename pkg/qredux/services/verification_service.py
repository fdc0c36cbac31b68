"""
Набор проверок `verify`: замкнутые формулы против плотных оракулов.

Каждая проверка возвращает VerificationCheck со статусом PASS или FAIL и
наибольшей невязкой; исключение внутри проверки превращается в FAIL.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Tuple

import numpy as np

from qredux.core.config import settings
from qredux.core.errors import QreduxError
from qredux.models.schemas import BlochVector, CheckStatus, IdentityParams, VerificationCheck
from qredux.services.bayes_matrix import overlap_stats, z_entry, z_entry_oracle, zeta_matrix
from qredux.services.compress import plan, source_weight
from qredux.services.export_service import export_service
from qredux.services.optimize import bayes_optimality_check, maximin_u
from qredux.services.priors import q_prior
from qredux.services.qstate import relative_entropy, tensor_power
from qredux.services.redundancy import bayes_constant, relative_entropy_exact, run_identity_suite
from qredux.services.specfun import catalan
from qredux.services.spectrum import (
    basis_rank,
    eigenbasis,
    eigenprojector,
    eigenvalue,
    eigenvector_dense,
    radial_spectrum,
    spectrum,
)

logger = logging.getLogger(__name__)

CheckResult = Tuple[float, str]

# Фиксированное зерно: verify детерминирован
_SEED = 20240917


def _random_bloch(rng: np.random.Generator, r: float) -> BlochVector:
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    return BlochVector(x=r * direction[0], y=r * direction[1], z=r * direction[2])


def _random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def _spectrum_multiset(n: int, u: float) -> np.ndarray:
    values = []
    for level in spectrum(n, u).levels:
        values.extend([level.eigenvalue] * level.multiplicity)
    return np.sort(np.array(values))


class VerificationService:
    """Сервис проверки замкнутых формул против плотных вычислений."""

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    # =========================================================================
    # ПРОВЕРКИ
    # =========================================================================

    def check_catalan(self, tol: float) -> CheckResult:
        """lambda_0(n, 1/2) 4^n равно числу Каталана C_{n+1}."""
        worst = 0.0
        for n in range(1, 13):
            scaled = eigenvalue(n, 0.5, 0) * 4 ** n
            worst = max(worst, abs(scaled - catalan(n + 1)) / catalan(n + 1))
        return worst, "n = 1..12"

    def check_spectrum_dense(self, tol: float) -> CheckResult:
        """Спектр плотной zeta_n(u) совпадает с замкнутой формулой."""
        worst = 0.0
        for n in range(1, 9):
            for u in (-1.0, 0.0, 0.5, 0.9):
                dense = np.linalg.eigvalsh(zeta_matrix(n, u).matrix)
                worst = max(worst, float(np.max(np.abs(np.sort(dense) - _spectrum_multiset(n, u)))))
        return worst, "n = 1..8, u ∈ {-1, 0, 0.5, 0.9}"

    def check_eigenbasis(self, tol: float) -> CheckResult:
        """Векторы баллотного базиса собственные и линейно независимые."""
        worst = 0.0
        for n in range(1, 9):
            basis = eigenbasis(n)
            vectors = [(spec.d, eigenvector_dense(spec)) for spec in basis]
            for u in (0.0, 0.5):
                matrix = zeta_matrix(n, u).matrix
                for d, v in vectors:
                    residual = matrix @ v - eigenvalue(n, u, d) * v
                    worst = max(worst, float(np.max(np.abs(residual))))
            rank = basis_rank(basis, n)
            if rank != 1 << n:
                return math.inf, f"ранг {rank} при n = {n}"
        return worst, "n = 1..8, u ∈ {0, 0.5}, ранг 2^n"

    def check_identities(self, tol: float) -> CheckResult:
        """Точные суммационные тождества в случайных точках."""
        rng = np.random.default_rng(_SEED)
        worst = 0.0
        for _ in range(20):
            params = IdentityParams(
                n=int(rng.integers(1, 21)),
                r=float(rng.uniform(0.05, 0.95)),
                u=float(rng.uniform(-1.0, 0.95)),
                alpha=float(rng.uniform(0.0, 2.0)),
            )
            for result in run_identity_suite(params, tol):
                if not result.asymptotic:
                    worst = max(worst, result.residual)
        return worst, "a8-a14, B3-B7, e37"

    def check_relative_entropy(self, tol: float) -> CheckResult:
        """Формула по уровням против плотной относительной энтропии."""
        rng = np.random.default_rng(_SEED + 1)
        worst = 0.0
        for n in range(1, 7):
            for _ in range(4):
                u = float(rng.uniform(-1.0, 0.9))
                r = float(rng.uniform(0.0, 0.95))
                dense = relative_entropy(tensor_power(_random_bloch(rng, r), n), zeta_matrix(n, u))
                worst = max(worst, abs(dense - relative_entropy_exact(n, u, r)))
        return worst, "n = 1..6, по 4 случайные точки"

    def check_entry_oracle(self, tol: float) -> CheckResult:
        """Элементы z_entry против трехмерной квадратуры."""
        worst = 0.0
        for n in (1, 2, 3, 4):
            for u in (0.0, 0.5):
                for i in range(1 << n):
                    for j in range(1 << n):
                        exact = z_entry(n, u, overlap_stats(i, j, n))
                        worst = max(worst, abs(exact - z_entry_oracle(n, u, i, j)))
        return worst, "n = 1..4"

    def check_radial_spectrum(self, tol: float) -> CheckResult:
        """Спектр для радиального распределения q(u) совпадает с lambda_d."""
        worst = 0.0
        for n in range(1, 9):
            for u in (-1.0, 0.0, 0.5):
                for level in radial_spectrum(n, q_prior(u)):
                    worst = max(worst, abs(level.eigenvalue - eigenvalue(n, u, level.d)))
        return worst, "n = 1..8"

    def check_optimality(self, tol: float) -> CheckResult:
        """Средняя избыточность смеси против произвольного Q."""
        rng = np.random.default_rng(_SEED + 2)
        worst = 0.0
        for _ in range(100):
            dim = int(rng.integers(2, 9))
            count = int(rng.integers(2, 6))
            states = [_random_density(rng, dim) for _ in range(count)]
            weights = rng.dirichlet(np.ones(count))
            check = bayes_optimality_check(states, weights, _random_density(rng, dim))
            worst = max(worst, abs(check.gap - check.s_mq))
        return worst, "100 случайных смесей, размерность 2..8"

    def check_maximin(self, tol: float) -> CheckResult:
        """u* и C(u*) из уравнения максимина."""
        result = maximin_u()
        message = f"u* = {result.u_star:.6f}, C(u*) = {result.constant:.6f}"
        if abs(result.u_star - 0.531267) > 1e-5 or not result.constant > bayes_constant(0.5):
            return math.inf, message
        return result.equation_residual, message

    def check_compression(self, tol: float) -> CheckResult:
        """План сжатия и вес источника против плотных проекторов."""
        result = plan(2, 0.5, 0.1)
        if (result.levels_kept, result.dim) != (0, 3):
            return math.inf, f"plan(2, 0.5, 0.1) = (D = {result.levels_kept}, dim = {result.dim})"
        rng = np.random.default_rng(_SEED + 3)
        worst = 0.0
        for n in range(2, 7):
            result = plan(n, 0.5, 0.1)
            projector = sum(eigenprojector(n, 0.5, d) for d in range(result.levels_kept + 1))
            zeta = zeta_matrix(n, 0.5).matrix
            kept = float(np.real(np.trace(zeta @ projector)))
            worst = max(worst, abs(kept - result.prior_weight))
            for r in (0.2, 0.5, 0.9):
                rho = tensor_power(_random_bloch(rng, r), n).matrix
                dense = float(np.real(np.trace(rho @ projector)))
                worst = max(worst, abs(dense - source_weight(n, result.levels_kept, r)))
        return worst, "n = 2..6, вес zeta_n и источника на сохраненных уровнях"

    def check_matrix_file(self, path: str, tol: float) -> CheckResult:
        """След и спектр матрицы, прочитанной из бинарного файла."""
        n, u, matrix = export_service.read_matrix_bin(path)
        trace_error = abs(float(np.trace(matrix)) - 1.0)
        dense = np.sort(np.linalg.eigvalsh(matrix))
        spectrum_error = float(np.max(np.abs(dense - _spectrum_multiset(n, u))))
        return max(trace_error, spectrum_error), f"{path}: n = {n}, u = {u}"

    # =========================================================================
    # ЗАПУСК
    # =========================================================================

    def _run(self, name: str, check: Callable[[float], CheckResult], tol: float) -> VerificationCheck:
        try:
            residual, message = check(tol)
        except (QreduxError, ArithmeticError, ValueError) as e:
            self.logger.error(f"Проверка {name} завершилась ошибкой: {e}")
            return VerificationCheck(name=name, status=CheckStatus.failed, message=str(e))
        passed = residual <= tol
        self.logger.info(f"Проверка {name}: невязка {residual:.3e}")
        return VerificationCheck(
            name=name,
            status=CheckStatus.passed if passed else CheckStatus.failed,
            residual=residual if math.isfinite(residual) else None,
            message=message,
        )

    def run_all(self, tol: float = 1e-9, input_path: Optional[str] = None) -> List[VerificationCheck]:
        """
        Запускает все проверки (параллельно при settings.threads > 1).

        Args:
            tol: Допуск невязки
            input_path: Бинарный файл матрицы для дополнительной проверки

        Returns:
            List[VerificationCheck]: Результаты в фиксированном порядке
        """
        checks: List[Tuple[str, Callable[[float], CheckResult]]] = [
            ("catalan", self.check_catalan),
            ("spectrum_dense", self.check_spectrum_dense),
            ("eigenbasis", self.check_eigenbasis),
            ("identities", self.check_identities),
            ("relative_entropy", self.check_relative_entropy),
            ("entry_oracle", self.check_entry_oracle),
            ("radial_spectrum", self.check_radial_spectrum),
            ("optimality", self.check_optimality),
            ("maximin", self.check_maximin),
            ("compression", self.check_compression),
        ]
        if input_path is not None:
            checks.append(("matrix_file", lambda t: self.check_matrix_file(input_path, t)))

        self.logger.info(f"Запуск {len(checks)} проверок, потоков: {settings.threads}")
        with ThreadPoolExecutor(max_workers=settings.threads) as executor:
            results = list(executor.map(lambda item: self._run(item[0], item[1], tol), checks))
        failed = [result.name for result in results if result.status == CheckStatus.failed]
        if failed:
            self.logger.warning(f"Не пройдены проверки: {', '.join(failed)}")
        return results


# Глобальный экземпляр сервиса проверок
verification_service = VerificationService()
