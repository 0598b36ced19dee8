# pa_harq/specfun.py
"""
Núcleo de funções especiais com contratos de precisão documentados.

Todas as funções são puras: mesma entrada, mesma saída (bit a bit).
Os kernels transcendentais vêm de scipy.special; aqui ficam validação de domínio,
convenções (sinc normalizada, I0 escalonada) e a série de Marcum-Q.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from pa_harq.config import NUMERICS
from pa_harq.exceptions import ConvergenceError, DomainError


@dataclass(frozen=True)
class AccuracySpec:
    """Tolerâncias absoluta e relativa de uma função pública."""
    abs_tol: float
    rel_tol: float

    def __post_init__(self):
        if not (0 < self.abs_tol <= 1e-8 and 0 < self.rel_tol <= 1e-8):
            raise DomainError(f"Invalid accuracy contract: {self}")


ACCURACY = {
    "bessel_j0": AccuracySpec(abs_tol=1e-12, rel_tol=1e-10),
    "bessel_i0_scaled": AccuracySpec(abs_tol=1e-12, rel_tol=1e-10),
    "marcum_q1": AccuracySpec(abs_tol=1e-10, rel_tol=1e-9),
    "exp_integral_e1": AccuracySpec(abs_tol=1e-12, rel_tol=1e-10),
    "erf": AccuracySpec(abs_tol=1e-12, rel_tol=1e-12),
    "lambert_w0": AccuracySpec(abs_tol=1e-12, rel_tol=1e-12),
    "sinc": AccuracySpec(abs_tol=1e-15, rel_tol=1e-12),
}


def _require_finite(name: str, x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"{name}: argument must be finite, got {x}")
    return x


def bessel_j0(x: float) -> float:
    """
    Função de Bessel de primeira espécie, ordem zero. Par: J0(-x) = J0(x).

    Raises:
        DomainError: Se x não for finito
    """
    x = _require_finite("bessel_j0", x)
    return float(special.j0(abs(x)))


def bessel_i0_scaled(x: float) -> float:
    """
    Retorna e^{-x}·I0(x) em (0, 1], sem overflow para argumentos grandes.

    Raises:
        DomainError: Se x < 0 ou não finito
    """
    x = _require_finite("bessel_i0_scaled", x)
    if x < 0:
        raise DomainError(f"bessel_i0_scaled: x must be >= 0, got {x}")
    return float(special.i0e(x))


def exp_integral_e1(x: float) -> float:
    """
    Integral exponencial E1(x) = ∫_x^∞ e^{-t}/t dt.

    Raises:
        DomainError: Se x <= 0
    """
    x = _require_finite("exp_integral_e1", x)
    if x <= 0:
        raise DomainError(f"exp_integral_e1: x must be > 0, got {x}")
    return float(special.exp1(x))


def erf(x: float) -> float:
    """Função erro; ímpar, com imagem em (-1, 1)."""
    x = _require_finite("erf", x)
    return float(special.erf(x))


def sinc(x: float) -> float:
    """Sinc normalizada sin(πx)/(πx), com sinc(0) = 1."""
    x = _require_finite("sinc", x)
    return float(np.sinc(x))


def lambert_w0(y: float) -> float:
    """
    Ramo principal da função W de Lambert: x·e^x = y, x >= 0 para y >= 0.

    O valor vem da iteração de Halley de scipy (chute inicial por série em torno de
    y = 0 e assintótica log(y) - log(log(y)) para y grande) e é conferido pelo resíduo.

    Raises:
        DomainError: Se y < 0 (ramo não necessário)
        ConvergenceError: Se o resíduo |w·e^w - y| exceder 1e-12·max(1, y)
    """
    y = _require_finite("lambert_w0", y)
    if y < 0:
        raise DomainError(f"lambert_w0: y must be >= 0, got {y}")
    if y == 0.0:
        return 0.0
    w = float(special.lambertw(y, 0).real)
    residual = abs(w * math.exp(w) - y)
    if residual > 1e-12 * max(1.0, y):
        raise ConvergenceError(f"lambert_w0({y}) residual {residual:.3e} above tolerance")
    return w


def _scaled_bessel_series(a: float, b: float, ratio: float, first_order: int) -> float:
    """
    Soma Σ_{k>=first_order} ratio^k · e^{-(a-b)²/2} · e^{-ab}·I_k(ab).

    Os termos são positivos e decrescentes; para quando um termo cai abaixo de
    1e-16 × soma acumulada. O limite de termos cresce com √(ab), já que a largura
    de I_k(ab) em k é dessa ordem.
    """
    z = a * b
    prefactor = math.exp(-0.5 * (a - b) ** 2)
    max_terms = NUMERICS.series_max_terms + int(10.0 * math.sqrt(z))
    log_ratio = math.log(ratio)

    total = 0.0
    block = max(64, int(math.sqrt(z)))
    start = first_order
    while start < first_order + max_terms:
        orders = np.arange(start, min(start + block, first_order + max_terms), dtype=float)
        terms = prefactor * np.exp(orders * log_ratio) * special.ive(orders, z)
        partial = total + np.cumsum(terms)
        below = np.nonzero(terms <= NUMERICS.series_rel_stop * partial)[0]
        if below.size:
            return float(partial[below[0]])
        total = float(partial[-1])
        start += block
    raise ConvergenceError(f"marcum_q1({a}, {b}): series did not converge in {max_terms} terms")


def marcum_q1(a: float, b: float) -> float:
    """
    Função Q de Marcum de primeira ordem, Q1(a, b) ∈ [0, 1].

    Série de Bessel com I_k escalonadas: para a < b soma-se Q1 diretamente,
    para a > b soma-se o complemento 1 - Q1, mantendo todos os termos positivos.
    Em a = b usa a identidade Q1(a, a) = (1 + e^{-a²}I0(a²))/2.

    Args:
        a: Parâmetro de não centralidade (>= 0)
        b: Limiar (>= 0)

    Returns:
        Probabilidade de cauda

    Raises:
        DomainError: Se algum argumento for negativo
        ConvergenceError: Se a série não convergir
    """
    a = _require_finite("marcum_q1", a)
    b = _require_finite("marcum_q1", b)
    if a < 0 or b < 0:
        raise DomainError(f"marcum_q1: arguments must be >= 0, got ({a}, {b})")

    if b == 0.0:
        return 1.0
    if a == 0.0:
        return math.exp(-0.5 * b * b)
    if a == b:
        return 0.5 * (1.0 + float(special.i0e(a * a)))

    if a < b:
        q = _scaled_bessel_series(a, b, a / b, first_order=0)
    else:
        q = 1.0 - _scaled_bessel_series(a, b, b / a, first_order=1)
    return min(1.0, max(0.0, q))
