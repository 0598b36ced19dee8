# pa_harq/montecarlo.py
"""
Estimador Monte Carlo determinístico e paralelo da taxa média.

Cada bloco (chunk) de ensaios tem seu próprio fluxo Philox, derivado de
(semente do ponto, índice do bloco). A redução é feita em ordem fixa de blocos com
soma compensada, então o resultado não depende do número de workers.

A semente do ponto vem de um hash canônico do cenário (sem a taxa R): varreduras são
independentes da ordem, e avaliações em taxas diferentes usam os mesmos números
aleatórios (útil para otimização sobre a estimativa).
"""
import concurrent.futures
import math
import time
from typing import List, Tuple

import numpy as np

from pa_harq.channel import sample_joint_batch, sigma_from_scenario
from pa_harq.config import McConfig
from pa_harq.exceptions import ConfigurationError, NumericError
from pa_harq.protocol import (
    STATUS_CODES,
    basic_arq_rate_batch,
    diversity_rate_batch,
    harq_status_batch,
    open_loop_rate_batch,
    pa_harq_rate_batch,
)
from pa_harq.types import McEstimate, RatePolicy, RoundStatus, ScenarioParams
from shared.utils import format_duration, log, stable_hash

# acima disso a contagem de ensaios deixa de ser exata em float64
MAX_TRIALS = 2 ** 53

ChunkResult = Tuple[float, float, np.ndarray]


def point_seed(master_seed: int, params: ScenarioParams) -> int:
    """
    Semente de um ponto do cenário: hash canônico de (master_seed, parâmetros).

    Args:
        master_seed: Semente mestre (64 bits)
        params: Parâmetros do cenário

    Returns:
        Inteiro não negativo de 64 bits
    """
    return stable_hash({"master_seed": master_seed, "params": params.to_dict()})


def chunk_generator(seed: int, chunk_index: int) -> np.random.Generator:
    """Gerador Philox exclusivo do bloco `chunk_index`."""
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(chunk_index,))
    return np.random.Generator(np.random.Philox(sequence))


def _success_codes(success: np.ndarray) -> np.ndarray:
    return np.where(
        success,
        STATUS_CODES[RoundStatus.FIRST_ROUND],
        STATUS_CODES[RoundStatus.FAILED]
    ).astype(np.int8)


def _rates_and_codes(
    scheme: str,
    g_hat: np.ndarray,
    g: np.ndarray,
    policy: RatePolicy,
    power: float
) -> Tuple[np.ndarray, np.ndarray]:
    if scheme == "pa-harq":
        return pa_harq_rate_batch(g_hat, g, policy, power), harq_status_batch(g_hat, g, policy, power)
    if scheme == "basic-arq":
        return basic_arq_rate_batch(g_hat, g, policy, power), harq_status_batch(g_hat, g, policy, power)
    if scheme == "open-loop":
        rates = open_loop_rate_batch(g_hat, policy.R, power)
        return rates, _success_codes(rates > 0)
    rates = diversity_rate_batch(g_hat, g, policy.R, power)
    return rates, _success_codes(rates > 0)


def _run_chunk(
    chunk_index: int,
    size: int,
    seed: int,
    sigma: float,
    policy: RatePolicy,
    power: float,
    scheme: str
) -> ChunkResult:
    rng = chunk_generator(seed, chunk_index)
    g_hat, g = sample_joint_batch(sigma, rng, size)
    rates, codes = _rates_and_codes(scheme, g_hat, g, policy, power)
    counts = np.bincount(codes, minlength=len(STATUS_CODES))
    return math.fsum(rates), math.fsum(rates * rates), counts


def _chunk_sizes(trials: int, chunk_size: int) -> List[int]:
    full, rest = divmod(trials, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def estimate(params: ScenarioParams, policy: RatePolicy, cfg: McConfig) -> McEstimate:
    """
    Estima a taxa média do esquema `cfg.scheme` por média amostral.

    Args:
        params: Parâmetros do cenário (σ resolvido pela cinemática ou fixado)
        policy: Política de taxa
        cfg: Configuração Monte Carlo

    Returns:
        McEstimate com média, erro padrão e frações por desfecho

    Raises:
        NumericError: Se trials exceder a faixa exata do acumulador ou a média não for finita
    """
    if cfg.trials > MAX_TRIALS:
        raise NumericError(f"trials={cfg.trials} exceeds exact accumulator range ({MAX_TRIALS})")

    sigma = sigma_from_scenario(params).sigma
    seed = point_seed(cfg.master_seed, params)
    sizes = _chunk_sizes(cfg.trials, cfg.chunk_size)

    def run(item: Tuple[int, int]) -> ChunkResult:
        index, size = item
        return _run_chunk(index, size, seed, sigma, policy, params.power, cfg.scheme)

    started = time.time()
    if cfg.workers > 1 and len(sizes) > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=cfg.workers) as executor:
            # map preserva a ordem dos blocos
            results = list(executor.map(run, enumerate(sizes)))
    else:
        results = [run(item) for item in enumerate(sizes)]

    n = cfg.trials
    total = math.fsum(r[0] for r in results)
    total_sq = math.fsum(r[1] for r in results)
    counts = np.sum([r[2] for r in results], axis=0)

    mean = total / n
    if n > 1:
        variance = max(0.0, (total_sq - n * mean * mean) / (n - 1))
    else:
        variance = 0.0
    std_error = math.sqrt(variance / n)

    if not (math.isfinite(mean) and math.isfinite(std_error)):
        raise NumericError(f"Non-finite Monte Carlo estimate: mean={mean}, std_error={std_error}")

    shares = {status.value: float(counts[code]) / n for status, code in STATUS_CODES.items()}

    log(f"Monte Carlo {cfg.scheme}: {n} trials in {len(sizes)} chunks, {cfg.workers} workers, "
        f"mean={mean:.6f} ({format_duration(time.time() - started)})", level="debug")

    return McEstimate(
        mean=mean,
        std_error=std_error,
        trials=n,
        per_round_shares=shares,
        seed=seed
    )


def sweep(
    params_grid: List[ScenarioParams],
    policy_grid: List[RatePolicy],
    cfg: McConfig
) -> List[McEstimate]:
    """
    Estima uma grade de pontos; um ponto com falha não interrompe a varredura.

    As grades são combinadas ponto a ponto; uma grade de tamanho 1 é repetida.

    Args:
        params_grid: Cenários
        policy_grid: Políticas de taxa
        cfg: Configuração Monte Carlo

    Returns:
        Uma estimativa por ponto, na ordem da grade (com `error` em caso de falha)
    """
    if not params_grid or not policy_grid:
        raise ConfigurationError("sweep requires non-empty grids")

    size = max(len(params_grid), len(policy_grid))
    for grid in (params_grid, policy_grid):
        if len(grid) not in (1, size):
            raise ConfigurationError(f"Grid lengths do not match: {len(params_grid)} vs {len(policy_grid)}")

    def pick(grid, idx):
        return grid[0] if len(grid) == 1 else grid[idx]

    results = []
    for idx in range(size):
        params, policy = pick(params_grid, idx), pick(policy_grid, idx)
        try:
            results.append(estimate(params, policy, cfg))
        except Exception as e:
            log(f"Monte Carlo point {idx} failed ({params.to_dict()}, R={policy.R}): {e}", level="error")
            results.append(McEstimate(mean=0.0, std_error=0.0, trials=0, error=str(e)))

    log(f"Monte Carlo sweep finished: {size} points, "
        f"{sum(1 for r in results if r.error)} failures")
    return results
