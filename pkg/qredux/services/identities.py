"""
Реестр конечных суммационных тождеств и асимптотических разложений,
на которых держатся асимптотики избыточности и энтропии.

Каждая запись возвращает пару (конечная сумма, замкнутая форма).
Суммы по d идут по расширенной области 0..n+1 (для a10 и B5 с d = -1).
"""

import math
from typing import Callable, Dict, Tuple

from qredux.core.errors import DomainError
from qredux.models.schemas import IdentityParams
from qredux.services.specfun import binomial, digamma, log_gamma
from qredux.services.spectrum import eigenvalue_signed

Pair = Tuple[float, float]


def _t_weight(n: int, r: float, d: int) -> float:
    """(n-2d+1)/(n+1) C(n+1,d) (1+r)^{n+1-d} (1-r)^d / (2^{n+1} r)."""
    return (
        (n - 2 * d + 1) / (n + 1) * binomial(n + 1, d)
        * ((1 + r) / 2) ** (n + 1 - d) * ((1 - r) / 2) ** d / r
    )


def _level_coefficient(n: int, d: int) -> float:
    """(n-2d+1)^2 C(n+1,d) / (n+1) на расширенной области."""
    return (n - 2 * d + 1) ** 2 * binomial(n + 1, d) / (n + 1)


# =============================================================================
# СУММЫ С БИНОМИАЛЬНЫМИ ВЕСАМИ
# =============================================================================


def _a8(p: IdentityParams) -> Pair:
    lhs = math.fsum(_t_weight(p.n, p.r, d) for d in range(p.n + 2))
    return lhs, 1.0


def _a9(p: IdentityParams) -> Pair:
    n, r = p.n, p.r
    lhs = math.fsum(_t_weight(n, r, d) * d for d in range(n + 2))
    return lhs, (1 - r) * (n * r - 1) / (2 * r)


def _a10(p: IdentityParams) -> Pair:
    n, r = p.n, p.r
    terms = []
    for d in range(-1, n + 2):
        coefficient = (n - 2 * d + 1) / ((n + 1) * (n + 2)) * binomial(n + 2, d + 1)
        terms.append(coefficient * ((1 + r) / 2) ** (n + 1 - d) * ((1 - r) / 2) ** d / r)
    return math.fsum(terms), 2 * (1 + 2 * r + n * r) / ((n + 1) * (n + 2) * r * (1 - r))


def _moment(p: IdentityParams, power: int) -> float:
    n, r, u = p.n, p.r, p.u
    centre = n * (1 - r) / 2
    return math.fsum(
        _t_weight(n, r, d) * (0.5 - u + d) * (1 + d - u - centre) ** power
        for d in range(n + 2)
    )


def _a11(p: IdentityParams) -> Pair:
    n, r, u = p.n, p.r, p.u
    return _moment(p, 0), (-1 + 2 * r + n * r - n * r ** 2 - 2 * r * u) / (2 * r)


def _a12(p: IdentityParams) -> Pair:
    n, r, u = p.n, p.r, p.u
    rhs = (
        -5 - n + 7 * r + 5 * n * r - 3 * n * r ** 2 - n * r ** 3 + 4 * u - 10 * r * u
        - 2 * n * r * u + 2 * n * r ** 2 * u + 4 * r * u ** 2
    ) / (4 * r)
    return _moment(p, 1), rhs


def _a13(p: IdentityParams) -> Pair:
    n, r, u = p.n, p.r, p.u
    poly = (
        -22 - 9 * n + 26 * r + 24 * n * r + n ** 2 * r - 5 * n * r ** 2 - n ** 2 * r ** 2
        - 8 * n * r ** 3 - n ** 2 * r ** 3 - 2 * n * r ** 4 + n ** 2 * r ** 4 + 32 * u
        + 4 * n * u - 48 * r * u - 22 * n * r * u + 12 * n * r ** 2 * u + 6 * n * r ** 3 * u
        - 12 * u ** 2 + 32 * r * u ** 2 + 4 * n * r * u ** 2 - 4 * n * r ** 2 * u ** 2
        - 8 * r * u ** 3
    )
    return _moment(p, 2), poly / (8 * r)


def _a14(p: IdentityParams) -> Pair:
    n, r, u = p.n, p.r, p.u
    poly = (
        -92 - 61 * n - 3 * n ** 2 + 100 * r + 105 * n * r + 15 * n ** 2 * r
        + 19 * n * r ** 2 - 4 * n ** 2 * r ** 2 - 35 * n * r ** 3 - 20 * n ** 2 * r ** 3
        - 22 * n * r ** 4 + 7 * n ** 2 * r ** 4 - 6 * n * r ** 5 + 5 * n ** 2 * r ** 5
        + 188 * u + 60 * n * u - 228 * r * u - 162 * n * r * u - 6 * n ** 2 * r * u
        + 20 * n * r ** 2 * u + 6 * n ** 2 * r ** 2 * u + 66 * n * r ** 3 * u
        + 6 * n ** 2 * r ** 3 * u + 16 * n * r ** 4 * u - 6 * n ** 2 * r ** 4 * u
        - 132 * u ** 2 - 12 * n * u ** 2 + 204 * r * u ** 2 + 72 * n * r * u ** 2
        - 36 * n * r ** 2 * u ** 2 - 24 * n * r ** 3 * u ** 2 + 32 * u ** 3
        - 88 * r * u ** 3 - 8 * n * r * u ** 3 + 8 * n * r ** 2 * u ** 3 + 16 * r * u ** 4
    )
    return _moment(p, 3), poly / (16 * r)


def _a15(p: IdentityParams) -> Pair:
    n, r, u = p.n, p.r, p.u
    lhs = math.fsum(
        _t_weight(n, r, d) * (0.5 - u + d) * math.log(1 + d - u) for d in range(n + 2)
    )
    rhs = (
        (n / 2 * (1 - r) + 1 - u - 1 / (2 * r)) * (math.log(n) + math.log(1 - r) - math.log(2))
        + 7 / 4 - u + r / 4 - 1 / (2 * r)
    )
    return lhs, rhs


def _e37(p: IdentityParams) -> Pair:
    n, r = p.n, p.r
    d = min(2, n // 2) if p.d is None else p.d
    z = r / 2 if p.z is None else p.z
    if not 0 <= 2 * d <= n:
        raise DomainError(f"e37: d = {d} вне [0, {n // 2}]")
    terms = []
    for s in range(d, n - d + 1):
        for j in range(d + 1):
            for k in range(j, s + 1):
                coefficient = binomial(d, j) * binomial(s - d, k - j) * binomial(n - s - d, k - j)
                if coefficient == 0:
                    continue
                terms.append(
                    (-1) ** j * coefficient
                    * (1 + z) ** (s - k) * (r * r - z * z) ** k * (1 - z) ** (n - s - k)
                )
    rhs = ((1 + r) ** (n + 1 - d) * (1 - r) ** d - (1 + r) ** d * (1 - r) ** (n + 1 - d)) / (2 * r)
    return math.fsum(terms), rhs


# =============================================================================
# СУММЫ СО СПЕКТРОМ
# =============================================================================


def _b3(p: IdentityParams) -> Pair:
    n, u = p.n, p.u
    lhs = math.fsum(_level_coefficient(n, d) * eigenvalue_signed(n, u, d) for d in range(n + 2))
    return lhs, 2.0


def _b4(p: IdentityParams) -> Pair:
    n, u = p.n, p.u
    lhs = math.fsum(
        (n - 2 * d + 1) ** 2 * binomial(n, d - 1) * eigenvalue_signed(n, u, d)
        for d in range(1, n + 2)
    )
    return lhs, float(n + 1)


def _b5(p: IdentityParams) -> Pair:
    n, u = p.n, p.u
    if u == 0:
        raise DomainError("B5 не определено при u = 0")
    lhs = math.fsum(
        (n - 2 * d + 1) ** 2 / ((n + 1) * (n + 2)) * binomial(n + 2, d + 1)
        * eigenvalue_signed(n, u, d)
        for d in range(-1, n + 2)
    )
    return lhs, 2 * (n + 3) * (2 * u - 3) / ((n + 1) * (n + 2) * u)


def b6_closed_form(n: int, u: float, alpha: float) -> float:
    """Замкнутая форма суммы B6 с параметром alpha."""
    a = alpha
    poly = (
        48 + 64 * a + 25 * a ** 2 + 3 * a ** 3 + 40 * n + 66 * a * n + 37 * a ** 2 * n
        + 5 * a ** 3 * n + 8 * n ** 2 + 14 * a * n ** 2 + 8 * a ** 2 * n ** 2
        + 2 * a ** 3 * n ** 2 - 152 * u - 138 * a * u - 34 * a ** 2 * u - 2 * a ** 3 * u
        - 92 * n * u - 92 * a * n * u - 32 * a ** 2 * n * u - 2 * a ** 3 * n * u
        - 12 * n ** 2 * u - 10 * a * n ** 2 * u - 2 * a ** 2 * n ** 2 * u + 176 * u ** 2
        + 100 * a * u ** 2 + 12 * a ** 2 * u ** 2 + 68 * n * u ** 2 + 32 * a * n * u ** 2
        + 4 * a ** 2 * n * u ** 2 + 4 * n ** 2 * u ** 2 - 88 * u ** 3 - 24 * a * u ** 3
        - 16 * n * u ** 3 + 16 * u ** 4
    )
    log_ratio = (
        log_gamma(5 - 2 * u) + log_gamma(3 + a + n - 2 * u) + log_gamma(1 + a - u)
        - log_gamma(5 + a - 2 * u) - log_gamma(4 + n - 2 * u) - log_gamma(3 - u)
    )
    return poly * math.exp(log_ratio) / 4


def b7_closed_form(n: int, u: float) -> float:
    """Замкнутая форма суммы B7 (производная B6 по alpha в нуле)."""
    poly = (
        32 + 33 * n + 7 * n ** 2 - 69 * u - 46 * n * u - 5 * n ** 2 * u + 50 * u ** 2
        + 16 * n * u ** 2 - 12 * u ** 3
    )
    return poly / (2 * (2 - u) * (1 - u) * (3 + n - 2 * u)) + (n + 2 - 2 * u) * (
        digamma(1 - u) + digamma(n + 3 - 2 * u) - digamma(5 - 2 * u)
    )


def _b6(p: IdentityParams) -> Pair:
    n, u, a = p.n, p.u, p.alpha
    if not a > u - 1:
        raise DomainError(f"B6 требует alpha > u - 1: alpha = {a}, u = {u}")
    base = (
        -n * math.log(2) + log_gamma(2.5 - u) - log_gamma(2.5 + n / 2 - u)
        - log_gamma(2 + n / 2 - u) - log_gamma(1 - u)
    )
    lhs = math.fsum(
        _level_coefficient(n, d) * (d - u + 0.5)
        * math.exp(base + log_gamma(2 + n - d - u) + log_gamma(1 + a + d - u))
        for d in range(n + 2)
    )
    return lhs, b6_closed_form(n, u, a)


def _b7(p: IdentityParams) -> Pair:
    n, u = p.n, p.u
    lhs = math.fsum(
        _level_coefficient(n, d) * eigenvalue_signed(n, u, d) * (d - u + 0.5) * digamma(1 + d - u)
        for d in range(n + 2)
    )
    return lhs, b7_closed_form(n, u)


def _b8(p: IdentityParams) -> Pair:
    n, u = p.n, p.u
    lhs = math.fsum(
        _level_coefficient(n, d) * eigenvalue_signed(n, u, d) * (d - u + 0.5) * math.log(1 + d - u)
        for d in range(n + 2)
    )
    rhs = (
        n * (
            math.log(n) + (7 - 5 * u) / (2 * (2 - u) * (1 - u))
            - digamma(5 - 2 * u) + digamma(1 - u)
        )
        + (2 - 2 * u) * math.log(n)
        + (26 - 46 * u + 25 * u ** 2 - 4 * u ** 3) / (2 * (2 - u) * (1 - u))
        + (-2 + 2 * u) * digamma(5 - 2 * u)
        + (2 - 2 * u) * digamma(1 - u)
    )
    return lhs, rhs


# Точные тождества
EXACT_IDENTITIES: Dict[str, Callable[[IdentityParams], Pair]] = {
    "a8": _a8,
    "a9": _a9,
    "a10": _a10,
    "a11": _a11,
    "a12": _a12,
    "a13": _a13,
    "a14": _a14,
    "B3": _b3,
    "B4": _b4,
    "B5": _b5,
    "B6": _b6,
    "B7": _b7,
    "e37": _e37,
}

# Асимптотические разложения: невязка масштабируется на n (a15) или n^{1-u} (B8)
ASYMPTOTIC_IDENTITIES: Dict[str, Callable[[IdentityParams], Pair]] = {
    "a15": _a15,
    "B8": _b8,
}
