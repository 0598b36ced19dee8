# pa_harq/channel.py
"""
Modelo de canal com descasamento espacial.

Cinemática do veículo + geometria de espalhamento -> fator de correlação σ,
e estatísticas/amostradores conjuntos dos ganhos BS-PA (ĝ) e BS-RA (g).
"""
import math
from typing import Tuple

import numpy as np

from pa_harq.exceptions import DegenerateDistributionError, ConfigurationError
from pa_harq.specfun import bessel_i0_scaled, bessel_j0, marcum_q1, sinc
from pa_harq.types import (
    ChannelDraw,
    CorrelationModel,
    ScenarioParams,
    SpatialCorrelation,
)


def effective_distance(params: ScenarioParams) -> float:
    """
    Distância efetiva d = |d_a - v·δ| entre onde a PA estimou o canal e onde a RA recebe.

    Args:
        params: Parâmetros do cenário

    Returns:
        Distância em metros (>= 0)
    """
    return abs(params.da - params.v * params.delta)


def correlation_entry(d: float, wavelength: float, model: CorrelationModel) -> float:
    """
    Entrada Φ_{1,2}(d) da matriz de correlação para o modelo de espalhamento.

    Args:
        d: Distância efetiva (m)
        wavelength: Comprimento de onda λ (m)
        model: Lei de espalhamento

    Returns:
        Φ_{1,2}(d); vale 1 em d = 0 para todos os modelos
    """
    if d < 0 or not wavelength > 0:
        raise ConfigurationError(f"Invalid correlation arguments: d={d}, lambda={wavelength}")

    ratio = d / wavelength
    if model is CorrelationModel.JAKES:
        return bessel_j0(2.0 * math.pi * ratio)
    if model is CorrelationModel.GAUSSIAN:
        return math.exp(-(math.pi * ratio) ** 2)
    return sinc(2.0 * ratio)


def sigma_from_phi(phi12: float) -> Tuple[float, bool]:
    """
    σ a partir de Φ_{1,2}, com φ1² = Φ_{1,1} = 1 e φ2² = Φ_{1,2}.

    Avalia (Φ12 - 1)/√(Φ12 + (Φ12 - 1)²) sem calcular φ2 (Φ12 pode ser negativo);
    usa |σ| e satura em 1.

    Returns:
        Tupla (sigma, clamped)
    """
    radicand = phi12 + (phi12 - 1.0) ** 2
    if radicand <= 0:
        return 1.0, True
    raw = abs(phi12 - 1.0) / math.sqrt(radicand)
    if raw > 1.0:
        return 1.0, True
    return raw, False


def sigma_from_scenario(params: ScenarioParams) -> SpatialCorrelation:
    """
    Calcula o fator de descasamento espacial σ do cenário.

    Se `params.sigma_override` estiver definido, σ é o valor fixado e a cinemática
    só informa d e Φ12.

    Args:
        params: Parâmetros do cenário

    Returns:
        Correlação espacial (σ, Φ12, d, clamped)
    """
    d = effective_distance(params)
    phi12 = correlation_entry(d, params.wavelength, params.model)

    if params.sigma_override is not None:
        return SpatialCorrelation(sigma=params.sigma_override, phi12=phi12, d=d, clamped=False)

    sigma, clamped = sigma_from_phi(phi12)
    return SpatialCorrelation(sigma=sigma, phi12=phi12, d=d, clamped=clamped)


def _complex_normal(rng: np.random.Generator, size) -> np.ndarray:
    # CN(0, 1): partes real e imaginária N(0, 1/2), amostrador normal padrão do Generator
    parts = rng.standard_normal((2,) + tuple(np.atleast_1d(size)))
    return (parts[0] + 1j * parts[1]) * math.sqrt(0.5)


def sample_joint_batch(
    sigma: float,
    rng: np.random.Generator,
    size: int
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Amostra `size` realizações conjuntas de (ĝ, g) pelo modelo h = √(1-σ²)ĥ + σq.

    Args:
        sigma: Fator de descasamento em [0, 1]
        rng: Gerador (fluxo exclusivo do chamador)
        size: Número de realizações

    Returns:
        Tupla (g_hat, g) de arrays
    """
    h_hat, h = _draw_coefficients(sigma, rng, size)
    return np.abs(h_hat) ** 2, np.abs(h) ** 2


def _draw_coefficients(sigma: float, rng: np.random.Generator, size: int) -> Tuple[np.ndarray, np.ndarray]:
    if not 0.0 <= sigma <= 1.0:
        raise ConfigurationError(f"sigma must be in [0, 1], got {sigma}")
    h_hat = _complex_normal(rng, size)
    q = _complex_normal(rng, size)
    h = math.sqrt(1.0 - sigma * sigma) * h_hat + sigma * q
    return h_hat, h


def sample_joint(sigma: float, rng: np.random.Generator) -> ChannelDraw:
    """
    Amostra uma realização conjunta (ĥ, h) com ĥ, q ~ CN(0, 1) independentes.

    Args:
        sigma: Fator de descasamento em [0, 1]
        rng: Gerador (fluxo exclusivo do chamador)

    Returns:
        Realização com ganhos preenchidos
    """
    h_hat, h = _draw_coefficients(sigma, rng, 1)
    h_hat, h = complex(h_hat[0]), complex(h[0])
    return ChannelDraw(h_hat=h_hat, h=h, g_hat=abs(h_hat) ** 2, g=abs(h) ** 2)


def _require_nondegenerate(sigma: float) -> None:
    if sigma == 0.0:
        raise DegenerateDistributionError("sigma = 0: g equals g_hat, conditional law is a point mass")
    if not 0.0 < sigma <= 1.0:
        raise ConfigurationError(f"sigma must be in (0, 1], got {sigma}")


def conditional_gain_cdf(x: float, g_hat: float, sigma: float) -> float:
    """
    CDF de g dado ĝ: F(x) = 1 - Q1(√(2(1-σ²)ĝ/σ²), √(2x/σ²)).

    Args:
        x: Ponto de avaliação (>= 0)
        g_hat: Ganho conhecido BS-PA (>= 0)
        sigma: Fator de descasamento em (0, 1]

    Returns:
        Probabilidade em [0, 1]

    Raises:
        DegenerateDistributionError: Se sigma = 0
    """
    _require_nondegenerate(sigma)
    if x < 0 or g_hat < 0:
        raise ConfigurationError(f"x and g_hat must be >= 0, got x={x}, g_hat={g_hat}")
    if math.isinf(x):
        return 1.0
    s2 = sigma * sigma
    a = math.sqrt(2.0 * (1.0 - s2) * g_hat / s2)
    b = math.sqrt(2.0 * x / s2)
    return 1.0 - marcum_q1(a, b)


def conditional_gain_pdf(x: float, g_hat: float, sigma: float) -> float:
    """
    Densidade de g dado ĝ (qui-quadrado não central), calculada em espaço log.

    log f = -log σ² - (x + (1-σ²)ĝ)/σ² + log(e^{-z}I0(z)) + z, com z = 2√(x(1-σ²)ĝ)/σ².
    """
    _require_nondegenerate(sigma)
    if x < 0 or g_hat < 0:
        return 0.0
    s2 = sigma * sigma
    z = 2.0 * math.sqrt(x * (1.0 - s2) * g_hat) / s2
    log_f = -math.log(s2) - (x + (1.0 - s2) * g_hat) / s2 + math.log(bessel_i0_scaled(z)) + z
    return math.exp(log_f)
