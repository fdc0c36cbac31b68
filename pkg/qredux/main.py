"""Точка входа командной строки qredux."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from qredux import __version__
from qredux.core.config import settings
from qredux.core.errors import UsageError, exit_code_for
from qredux.models.schemas import (
    BayesMode,
    CheckStatus,
    IdentityParams,
    OutputFormat,
    RunConfig,
)
from qredux.services import compress, optimize, redundancy
from qredux.services.bayes_matrix import zeta_matrix
from qredux.services.export_service import export_service
from qredux.services.spectrum import spectrum
from qredux.services.verification_service import verification_service

logger = logging.getLogger(__name__)

# Последовательность n для minimax без --n
MINIMAX_NS = [4, 8, 16, 32, 64, 128, 256, 512]

_HANDLER_MARK = "_qredux_handler"


def setup_logging() -> None:
    """Настройка логирования: stderr (stdout занят данными) и, при log_dir, файл qredux.log."""
    root = logging.getLogger()
    for handler in [h for h in root.handlers if getattr(h, _HANDLER_MARK, False)]:
        root.removeHandler(handler)
        handler.close()

    log_format = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    log_level = getattr(logging, settings.log_level.upper(), logging.WARNING)

    handlers: List[logging.Handler] = []
    if settings.log_console:
        handlers.append(logging.StreamHandler(sys.stderr))
    if settings.log_dir:
        log_dir = Path(settings.log_dir)
        log_dir.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_dir / "qredux.log", encoding="utf-8"))

    for handler in handlers:
        handler.setLevel(log_level)
        handler.setFormatter(logging.Formatter(log_format))
        setattr(handler, _HANDLER_MARK, True)
        root.addHandler(handler)
    root.setLevel(log_level)

    logging.info(f"qredux {__version__}, уровень логирования: {settings.log_level}")
    logging.info(f"Потоков: {settings.threads}")


class CliParser(argparse.ArgumentParser):
    """ArgumentParser, который сообщает об ошибке исключением UsageError (код 3)."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        raise UsageError(message)


# =============================================================================
# ПАРСЕР
# =============================================================================


def build_parser() -> CliParser:
    """Парсер со всеми подкомандами."""
    common = CliParser(add_help=False)
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=None,
                        help="Формат вывода (по умолчанию csv, для maximin json)")
    common.add_argument("--out", type=str, default=None, help="Файл вывода (по умолчанию stdout)")
    common.add_argument("--threads", type=int, default=None, help="Число рабочих потоков")
    common.add_argument("--log-level", type=str, default=None, help="Уровень логирования")
    common.add_argument("--tol", type=float, default=None,
                        help="Допуск: невязки для identities и verify, квадратуры для остальных")

    def n_flag(p: argparse.ArgumentParser, default: Optional[int] = 8) -> None:
        p.add_argument("--n", type=int, default=default, help=f"Число кубитов (по умолчанию: {default})")

    def u_flag(p: argparse.ArgumentParser) -> None:
        p.add_argument("--u", type=float, default=0.5, help="Параметр распределения q(u) (по умолчанию: 0.5)")

    def r_flag(p: argparse.ArgumentParser, default: Optional[float] = 0.5) -> None:
        p.add_argument("--r", type=float, default=default, help=f"Длина вектора Блоха (по умолчанию: {default})")

    def grid_flag(p: argparse.ArgumentParser, default: Optional[int]) -> None:
        p.add_argument("--grid", type=int, default=default, help=f"Размер сетки (по умолчанию: {default})")

    parser = CliParser(
        prog="qredux",
        description="Избыточности универсального квантового кодирования кубитов",
    )
    parser.add_argument("--version", action="version", version=f"qredux {__version__}")
    sub = parser.add_subparsers(dest="subcommand", metavar="subcommand", parser_class=CliParser)
    sub.required = True

    p = sub.add_parser("spectrum", parents=[common], help="Спектр zeta_n(u)")
    n_flag(p)
    u_flag(p)

    p = sub.add_parser("matrix", parents=[common], help="Плотная матрица zeta_n(u)")
    n_flag(p, 4)
    u_flag(p)

    p = sub.add_parser("redundancy", parents=[common], help="Точная избыточность и асимптотика")
    n_flag(p)
    u_flag(p)
    r_flag(p)

    p = sub.add_parser("asymptotic", parents=[common], help="Асимптотики и классические аналоги")
    n_flag(p)
    u_flag(p)
    r_flag(p)

    p = sub.add_parser("entropy", parents=[common], help="Энтропия zeta_n(u)")
    n_flag(p)
    u_flag(p)

    p = sub.add_parser("bayes", parents=[common], help="Байесовская избыточность")
    n_flag(p)
    u_flag(p)
    p.add_argument("--integral", action="store_true", help="Добавить значение квадратурой по шару")

    p = sub.add_parser("minimax", parents=[common], help="Корни u_n минимакса")
    n_flag(p, None)

    p = sub.add_parser("maximin", parents=[common], help="Решение уравнения максимина")
    grid_flag(p, None)

    p = sub.add_parser("rscan", parents=[common], help="Профиль избыточности по r")
    n_flag(p)
    u_flag(p)
    grid_flag(p, 64)

    p = sub.add_parser("compress", parents=[common], help="План универсального сжатия")
    n_flag(p)
    u_flag(p)
    r_flag(p, None)
    p.add_argument("--eps", type=float, default=0.01, help="Допустимая потеря веса (по умолчанию: 0.01)")
    grid_flag(p, None)

    p = sub.add_parser("identities", parents=[common], help="Невязки суммационных тождеств")
    n_flag(p, 10)
    u_flag(p)
    r_flag(p)
    p.add_argument("--alpha", type=float, default=0.5, help="Параметр тождества B6 (по умолчанию: 0.5)")

    p = sub.add_parser("verify", parents=[common], help="Проверки против плотных оракулов")
    p.add_argument("--input", type=str, default=None, help="Бинарный файл матрицы для проверки")

    p = sub.add_parser("figure2", parents=[common], help="Данные неклассического члена")
    grid_flag(p, 99)

    p = sub.add_parser("figure3", parents=[common], help="Данные постоянной C(u)")
    grid_flag(p, 96)

    return parser


# =============================================================================
# ПОДКОМАНДЫ
# =============================================================================


def _table(config: RunConfig, header: Sequence[str], rows: List[Sequence[Any]], payload: Any = None) -> int:
    if config.format == OutputFormat.json:
        data = payload if payload is not None else [dict(zip(header, row)) for row in rows]
        export_service.emit(export_service.to_json(data), config.out)
    else:
        export_service.emit(export_service.to_csv(header, rows), config.out)
    return 0


def _spectrum(config: RunConfig, args: argparse.Namespace) -> int:
    result = spectrum(config.n, config.u)
    header, rows = export_service.spectrum_rows(result)
    return _table(config, header, rows, result)


def _matrix(config: RunConfig, args: argparse.Namespace) -> int:
    zeta = zeta_matrix(config.n, config.u)
    if config.format == OutputFormat.bin:
        if config.out is None:
            sys.stdout.buffer.write(export_service.matrix_to_bytes(zeta))
            sys.stdout.buffer.flush()
        else:
            export_service.write_matrix_bin(zeta, config.out)
        return 0
    if config.format == OutputFormat.json:
        payload = {"n": zeta.n, "u": zeta.u, "matrix": zeta.matrix.tolist()}
        export_service.emit(export_service.to_json(payload), config.out)
        return 0
    header, rows = export_service.matrix_rows(zeta)
    return _table(config, header, rows)


def _redundancy(config: RunConfig, args: argparse.Namespace) -> int:
    report = redundancy.redundancy_report(config.n, config.u, config.r)
    header = ["n", "u", "r", "regime", "exact", "asymptotic", "scaled_error"]
    row = (report.n, report.u, report.r, report.regime, report.exact, report.asymptotic, report.scaled_error)
    return _table(config, header, [row], report)


def _asymptotic(config: RunConfig, args: argparse.Namespace) -> int:
    r = redundancy.clamp_radius(config.r)
    regime = redundancy.regime_for(r)
    value = redundancy.asymptotic_redundancy(config.n, config.u, r, regime)
    baselines = redundancy.classical_baselines(config.n, config.u, r)
    header = ["n", "u", "r", "regime", "asymptotic", "minimax3d", "redundancy3d", "boundary2d"]
    row = (config.n, config.u, r, regime, value,
           baselines.minimax3d, baselines.redundancy3d, baselines.boundary2d)
    return _table(config, header, [row])


def _entropy(config: RunConfig, args: argparse.Namespace) -> int:
    exact = redundancy.zeta_entropy_exact(config.n, config.u)
    asym = redundancy.zeta_entropy_asym(config.n, config.u)
    header = ["n", "u", "exact", "asymptotic", "rate", "scaled_error"]
    row = (config.n, config.u, exact, asym, redundancy.entropy_rate(config.u),
           config.n ** (1.0 - config.u) * abs(exact - asym))
    return _table(config, header, [row])


def _bayes(config: RunConfig, args: argparse.Namespace) -> int:
    header = ["n", "u", "exact", "asymptotic", "constant"]
    row = [
        config.n,
        config.u,
        redundancy.bayes_redundancy(config.n, config.u, BayesMode.exact),
        redundancy.bayes_redundancy(config.n, config.u, BayesMode.asymptotic),
        redundancy.bayes_constant(config.u),
    ]
    if args.integral:
        header.append("integral")
        row.append(redundancy.bayes_redundancy_integral(config.n, config.u))
    return _table(config, header, [row])


def _minimax(config: RunConfig, args: argparse.Namespace) -> int:
    ns = [config.n] if config.n is not None else MINIMAX_NS
    results = optimize.minimax_sequence(ns)
    header = ["n", "u_n", "value", "residual", "other_roots"]
    rows = [(m.n, m.u_n, m.value, m.residual, len(m.other_roots)) for m in results]
    return _table(config, header, rows, results)


def _maximin(config: RunConfig, args: argparse.Namespace) -> int:
    if config.grid is not None:
        rows = optimize.maximin_profile(config.grid)
        return _table(config, ["u", "constant", "equation"], rows)
    result = optimize.maximin_u()
    header = ["u_star", "constant", "equation_residual"]
    return _table(config, header, [(result.u_star, result.constant, result.equation_residual)], result)


def _rscan(config: RunConfig, args: argparse.Namespace) -> int:
    result = optimize.rmax_scan(config.n, config.u, config.grid)
    return _table(config, ["r", "value"], result.profile, result)


def _compress(config: RunConfig, args: argparse.Namespace) -> int:
    radii = [config.r] if config.r is not None else []
    result = compress.plan(config.n, config.u, config.epsilon, radii)
    if config.grid is not None:
        rows = compress.source_curve(config.n, result.levels_kept, config.grid)
        return _table(config, ["r", "retained_weight", "fidelity_bound"], rows)
    header = ["n", "u", "epsilon", "D", "dim", "qubits", "prior_weight"]
    row = [result.n, result.u, result.epsilon, result.levels_kept, result.dim, result.qubits, result.prior_weight]
    if config.r is not None:
        weight = result.source_weights[float(config.r)]
        header += ["r", "source_weight", "fidelity_bound", "typical_qubits"]
        row += [config.r, weight, compress.fidelity_bound(weight), compress.typical_qubits(config.n, config.r)]
    return _table(config, header, [row], result)


def _identities(config: RunConfig, args: argparse.Namespace) -> int:
    params = IdentityParams(n=config.n, r=config.r, u=config.u, alpha=config.alpha)
    results = redundancy.run_identity_suite(params, config.tol)
    header = ["name", "lhs", "rhs", "residual", "asymptotic", "status"]
    rows = [(x.name, x.lhs, x.rhs, x.residual, x.asymptotic, x.status) for x in results]
    _table(config, header, rows, results)
    return 0 if all(x.status == CheckStatus.passed for x in results) else 2


def _verify(config: RunConfig, args: argparse.Namespace) -> int:
    tol = config.tol if config.tol is not None else 1e-9
    results = verification_service.run_all(tol, config.input)
    header = ["name", "status", "residual", "message"]
    rows = [(x.name, x.status, x.residual, x.message) for x in results]
    _table(config, header, rows, results)
    return 0 if all(x.status == CheckStatus.passed for x in results) else 2


def _figure2(config: RunConfig, args: argparse.Namespace) -> int:
    return _table(config, ["r", "term"], redundancy.figure2_data(config.grid))


def _figure3(config: RunConfig, args: argparse.Namespace) -> int:
    return _table(config, ["u", "constant"], redundancy.figure3_data(config.grid))


COMMANDS: Dict[str, Callable[[RunConfig, argparse.Namespace], int]] = {
    "spectrum": _spectrum,
    "matrix": _matrix,
    "redundancy": _redundancy,
    "asymptotic": _asymptotic,
    "entropy": _entropy,
    "bayes": _bayes,
    "minimax": _minimax,
    "maximin": _maximin,
    "rscan": _rscan,
    "compress": _compress,
    "identities": _identities,
    "verify": _verify,
    "figure2": _figure2,
    "figure3": _figure3,
}


# Для этих подкоманд --tol задает допуск невязки, для остальных порог квадратуры
_RESIDUAL_SUBCOMMANDS = {"identities", "verify"}


def _config_from(args: argparse.Namespace) -> RunConfig:
    default_format = OutputFormat.json if args.subcommand == "maximin" else OutputFormat.csv
    return RunConfig(
        subcommand=args.subcommand,
        n=getattr(args, "n", None),
        u=getattr(args, "u", None),
        r=getattr(args, "r", None),
        epsilon=getattr(args, "eps", None),
        grid=getattr(args, "grid", None),
        format=args.format or default_format,
        out=args.out,
        tol=args.tol,
        alpha=getattr(args, "alpha", None),
        input=getattr(args, "input", None),
    )


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Разбирает аргументы и выполняет подкоманду.

    Returns:
        int: 0 при успехе, 1 при ошибке области определения, 2 при ошибке точности,
             3 при ошибке использования
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        sys.stderr.write(f"qredux: ошибка: {e}\n")
        return e.exit_code
    except SystemExit as e:
        # --help и --version
        return int(e.code or 0)

    if args.threads is not None:
        if args.threads < 1:
            sys.stderr.write(f"qredux: ошибка: --threads должно быть положительным: {args.threads}\n")
            return UsageError.exit_code
        settings.threads = args.threads
    if args.log_level is not None:
        settings.log_level = args.log_level
    setup_logging()

    try:
        config = _config_from(args)
        if config.format == OutputFormat.bin and config.subcommand != "matrix":
            raise UsageError("Формат bin поддерживается только подкомандой matrix")
        if config.tol is not None and config.subcommand not in _RESIDUAL_SUBCOMMANDS:
            settings.quad_tol = config.tol
        logger.info(f"Подкоманда {config.subcommand}: {config.model_dump(exclude_none=True)}")
        return COMMANDS[config.subcommand](config, args)
    except Exception as e:
        code = exit_code_for(e)
        logger.error(f"Ошибка выполнения {args.subcommand}: {e}")
        sys.stderr.write(f"qredux: ошибка: {e}\n")
        return code


def main() -> None:
    """Запуск из командной строки."""
    sys.exit(run())


if __name__ == "__main__":
    main()
