# pa_harq/protocol.py
"""
Regras de transmissão PA-HARQ (INR de comprimento variável, duas rodadas) e benchmarks.

Convenções de fronteira (fixas, iguais para formas escalares e vetorizadas):
- sucesso na rodada 1: ĝ > θ/p (estrito)
- regime de retransmissão: θ_min/p <= ĝ <= θ/p (fechado)
- decodificação na rodada 2 (evento A): g >= ĝ
- diversidade MRC: log(1 + (g+ĝ)p) > R (estrito)

A taxa média é a esperança da recompensa por realização, sem renormalizar
pelo número esperado de usos de canal.
"""
import math

import numpy as np

from pa_harq.exceptions import ContractViolation
from pa_harq.types import ChannelDraw, RatePolicy, RoundOutcome, RoundStatus

LOG2_E = math.log2(math.e)

# códigos inteiros de RoundStatus usados nos lotes vetorizados
STATUS_CODES = {
    RoundStatus.FIRST_ROUND: 0,
    RoundStatus.SECOND_ROUND: 1,
    RoundStatus.SKIPPED: 2,
    RoundStatus.FAILED: 3,
}


def nats_to_bits(value: float) -> float:
    """Converte npcu para bits por uso de canal (fator log2 e)."""
    return value * LOG2_E


def second_round_length(g_hat: float, policy: RatePolicy, power: float) -> float:
    """
    Comprimento da segunda rodada L(ĝ) = K/log(1+ĝp) - L.

    Args:
        g_hat: Ganho BS-PA no regime θ_min/p <= ĝ <= θ/p
        policy: Política de taxa
        power: Potência de transmissão p

    Returns:
        Usos de canal (>= 0); L + L(ĝ) <= L_max

    Raises:
        ContractViolation: Se ĝ estiver fora do regime de retransmissão
    """
    lower = policy.theta_min / power
    upper = policy.theta / power
    if not lower <= g_hat <= upper:
        raise ContractViolation(
            f"g_hat={g_hat} outside retransmission regime [{lower}, {upper}]"
        )
    return max(0.0, policy.K / math.log1p(g_hat * power) - policy.L)


def _regimes(g_hat, policy: RatePolicy, power: float):
    first = g_hat > policy.theta / power
    regime = (g_hat >= policy.theta_min / power) & ~first
    return first, regime


def pa_harq_rate_batch(g_hat: np.ndarray, g: np.ndarray, policy: RatePolicy, power: float) -> np.ndarray:
    """Taxa por realização do PA-HARQ para arrays de ganhos."""
    g_hat = np.asarray(g_hat, dtype=float)
    g = np.asarray(g, dtype=float)
    first, regime = _regimes(g_hat, policy, power)
    rate = np.where(first, policy.R, 0.0)
    return np.where(regime & (g >= g_hat), np.log1p(g_hat * power), rate)


def basic_arq_rate_batch(g_hat: np.ndarray, g: np.ndarray, policy: RatePolicy, power: float) -> np.ndarray:
    """Taxa por realização do ARQ básico (retransmissão idêntica, sem combinação)."""
    g_hat = np.asarray(g_hat, dtype=float)
    g = np.asarray(g, dtype=float)
    first, regime = _regimes(g_hat, policy, power)
    rate = np.where(first, policy.R, 0.0)
    return np.where(regime & (g >= g_hat), 0.5 * policy.R, rate)


def open_loop_rate_batch(g_hat: np.ndarray, R: float, power: float) -> np.ndarray:
    """Taxa por realização da transmissão em malha aberta."""
    g_hat = np.asarray(g_hat, dtype=float)
    return np.where(g_hat > math.expm1(R) / power, R, 0.0)


def diversity_rate_batch(g_hat: np.ndarray, g: np.ndarray, R: float, power: float) -> np.ndarray:
    """Taxa por realização da diversidade MRC (duas cópias simultâneas)."""
    combined = np.asarray(g_hat, dtype=float) + np.asarray(g, dtype=float)
    return np.where(combined > math.expm1(R) / power, 0.5 * R, 0.0)


def harq_status_batch(g_hat: np.ndarray, g: np.ndarray, policy: RatePolicy, power: float) -> np.ndarray:
    """
    Código de RoundStatus por realização (PA-HARQ e ARQ básico compartilham os eventos).

    Returns:
        Array de inteiros (ver STATUS_CODES)
    """
    g_hat = np.asarray(g_hat, dtype=float)
    g = np.asarray(g, dtype=float)
    first, regime = _regimes(g_hat, policy, power)
    decoded = g >= g_hat
    return np.select(
        [first, regime & decoded, regime & ~decoded],
        [
            STATUS_CODES[RoundStatus.FIRST_ROUND],
            STATUS_CODES[RoundStatus.SECOND_ROUND],
            STATUS_CODES[RoundStatus.FAILED],
        ],
        default=STATUS_CODES[RoundStatus.SKIPPED]
    ).astype(np.int8)


def pa_harq_rate(draw: ChannelDraw, policy: RatePolicy, power: float) -> float:
    """
    Taxa do PA-HARQ para uma realização.

    R se ĝ > θ/p; log(1+ĝp) se θ_min/p <= ĝ <= θ/p e g >= ĝ; 0 caso contrário
    (inclusive ĝ < θ_min/p, quando nada é enviado na segunda rodada).
    """
    return float(pa_harq_rate_batch(draw.g_hat, draw.g, policy, power))


def pa_harq_outcome(draw: ChannelDraw, policy: RatePolicy, power: float) -> RoundOutcome:
    """
    Resultado detalhado de uma realização: rodadas usadas, taxa entregue e L(ĝ).

    Args:
        draw: Realização do canal
        policy: Política de taxa
        power: Potência p

    Returns:
        RoundOutcome
    """
    code = int(harq_status_batch(draw.g_hat, draw.g, policy, power))
    status = next(s for s, c in STATUS_CODES.items() if c == code)
    rate = pa_harq_rate(draw, policy, power)

    if status is RoundStatus.FIRST_ROUND:
        return RoundOutcome(rounds_used=1, delivered_rate=rate, second_len=0.0, status=status)
    if status is RoundStatus.SKIPPED:
        return RoundOutcome(rounds_used=0, delivered_rate=0.0, second_len=0.0, status=status)
    second_len = second_round_length(draw.g_hat, policy, power)
    return RoundOutcome(rounds_used=2, delivered_rate=rate, second_len=second_len, status=status)


def basic_arq_rate(draw: ChannelDraw, policy: RatePolicy, power: float) -> float:
    """Taxa do ARQ básico: R se ĝ > θ/p; R/2 no regime com g >= ĝ; 0 caso contrário."""
    return float(basic_arq_rate_batch(draw.g_hat, draw.g, policy, power))


def diversity_rate(draw: ChannelDraw, R: float, power: float) -> float:
    """Taxa da diversidade MRC: R/2 se log(1+(g+ĝ)p) > R, senão 0."""
    return float(diversity_rate_batch(draw.g_hat, draw.g, R, power))


def open_loop_rate(draw: ChannelDraw, R: float, power: float) -> float:
    """Taxa em malha aberta: R se ĝ > θ/p, senão 0."""
    return float(open_loop_rate_batch(draw.g_hat, R, power))
