# pa_harq/optimize.py
"""
Busca da taxa inicial ótima R_opt = argmax_R η(R), com R >= R_min.

- optimize_rate_stationarity: bisseção na derivada numérica da forma fechada
- optimize_rate_direct: grade grossa (guarda de unimodalidade) + seção áurea,
  para qualquer esquema e avaliador (forma fechada, integral exata, Monte Carlo)
- stationarity_residual_literal: condição de estacionariedade na forma impressa,
  usada apenas como verificação cruzada
"""
import math
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import optimize as sp_optimize

from pa_harq.analytic import (
    closed_form_value,
    eta_benchmarks_analytic,
    eta_exact,
    eta_open_loop,
    open_loop_optimal_rate,
)
from pa_harq.cache import EvaluationCache
from pa_harq.config import NUMERICS, SCHEMES, McConfig, ScenarioDefaults
from pa_harq.exceptions import ConfigurationError
from pa_harq.montecarlo import estimate
from pa_harq.types import (
    METHOD_CLOSED,
    METHOD_EXACT,
    METHOD_MC,
    LinearLogApprox,
    OptResult,
    RatePolicy,
    ScenarioParams,
)
from shared.utils import log, wavelength

STATIONARITY = "stationarity-bisection"
GOLDEN = "golden-section"
GRID = "grid"
LAMBERT = "lambert-w"

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2

ROOT_XTOL = 1e-8

EVAL_CACHE = EvaluationCache(label="optimize", max_entries=NUMERICS.cache_max_entries)


def _check_inputs(r_min: float, sigma: float, power: float) -> None:
    if not r_min > 0:
        raise ConfigurationError(f"R_min must be positive, got {r_min}")
    if not power > 0:
        raise ConfigurationError(f"power must be positive, got {power}")
    if not 0.0 <= sigma <= 1.0:
        raise ConfigurationError(f"sigma must be in [0, 1], got {sigma}")


def stationarity_residual_literal(R: float, R_min: float, sigma: float, power: float) -> float:
    """
    Lado esquerdo da condição de estacionariedade impressa, transcrito termo a termo.

    -(1/p)(Re^R - p)e^{-θ/p}
    + σ/(4√π)·(k·e^{R-θ/p} - k(2e^R - p - 2)e^{R-θ/p}/(2p²·θ/p) + 2b·e^{R-θ/p})
    + (1/(4p))(Re^R - p)e^{-θ/p}·e^{R+1/p}·e^{-(pR+1)/p}/((pR+1)/p)

    Não é garantido que coincida com a derivada exata da forma fechada; o resíduo
    em R_opt é apenas reportado.
    """
    p = power
    theta = math.expm1(R)
    theta_min = math.expm1(R_min)
    approx = LinearLogApprox.at_midpoint(theta, theta_min, p)
    k, b = approx.k, approx.b
    x = theta / p
    e_r = math.exp(R)
    common = math.exp(R - x)

    first = -(1.0 / p) * (R * e_r - p) * math.exp(-x)
    mismatch = (sigma / (4.0 * math.sqrt(math.pi))) * (
        k * common
        - k * (2.0 * e_r - p - 2.0) * common / (2.0 * p * p * x)
        + 2.0 * b * common
    )
    z = (p * R + 1.0) / p
    tail = (1.0 / (4.0 * p)) * (R * e_r - p) * math.exp(-x) * math.exp(R + 1.0 / p) * math.exp(-z) / z
    return first + mismatch + tail


def closed_form_derivative(R: float, R_min: float, sigma: float, power: float) -> float:
    """dη/dR da forma fechada por diferença central com passo relativo 1e-6."""
    h = NUMERICS.derivative_rel_step * R
    upper = closed_form_value(R + h, R_min, sigma, power)
    lower = closed_form_value(R - h, R_min, sigma, power)
    return (upper - lower) / (2.0 * h)


def search_upper_rate(r_min: float, power: float) -> float:
    """Extremo superior da busca: min(teto, max(R_min + 3, W(p) + 5))."""
    return min(NUMERICS.rate_cap, max(r_min + 3.0, open_loop_optimal_rate(power) + 5.0))


def _scan_bracket(derivative: Callable[[float], float], r_min: float, r_hi: float) -> Tuple[float, float, int, bool]:
    """
    Percorre a grade de NUMERICS.grid_points taxas em [R_min, R_hi] até a primeira
    troca de sinal + -> - da derivada.

    A forma fechada volta a crescer lentamente para R grande (o intercepto b da
    tangente cresce com R), então só a primeira troca delimita o máximo interior.

    Returns:
        (lo, hi, avaliações, encontrou troca de sinal)
    """
    grid = np.linspace(r_min, r_hi, NUMERICS.grid_points)
    lo = float(grid[0])
    evaluations = 0
    for R in grid[1:]:
        evaluations += 1
        if derivative(float(R)) <= 0:
            return lo, float(R), evaluations, True
        lo = float(R)
    return lo, lo, evaluations, False


def optimize_rate_stationarity(r_min: float, sigma: float, power: float) -> OptResult:
    """
    Resolve dη/dR = 0 (forma fechada) por bisseção.

    O intervalo vem da varredura da derivada em [R_min, R_hi], com o mesmo R_hi da
    busca direta; a bisseção parte da primeira troca de sinal.

    Args:
        r_min: Taxa mínima R_min (npcu)
        sigma: Fator de descasamento
        power: Potência p

    Returns:
        OptResult; `boundary=True` quando o máximo fica em R_min ou R_hi
        e `residual` com o valor da condição impressa em r_opt
    """
    _check_inputs(r_min, sigma, power)

    def derivative(R: float) -> float:
        return closed_form_derivative(R, r_min, sigma, power)

    if derivative(r_min) <= 0:
        eta = closed_form_value(r_min, r_min, sigma, power)
        log(f"Stationarity: derivative non-positive at R_min={r_min}, boundary maximizer", level="debug")
        return OptResult(
            r_opt=r_min,
            eta_opt=eta,
            method=STATIONARITY,
            iterations=1,
            bracket=(r_min, r_min),
            evaluator=METHOD_CLOSED,
            boundary=True,
            residual=stationarity_residual_literal(r_min, r_min, sigma, power)
        )

    r_hi = search_upper_rate(r_min, power)
    lo, hi, evaluations, found = _scan_bracket(derivative, r_min, r_hi)
    if not found:
        log(f"Stationarity: derivative positive up to R={hi}, boundary maximizer", level="warning")
        return OptResult(
            r_opt=hi,
            eta_opt=closed_form_value(hi, r_min, sigma, power),
            method=STATIONARITY,
            iterations=evaluations + 1,
            bracket=(lo, hi),
            evaluator=METHOD_CLOSED,
            boundary=True,
            residual=stationarity_residual_literal(hi, r_min, sigma, power)
        )

    root, info = sp_optimize.bisect(derivative, lo, hi, xtol=ROOT_XTOL, full_output=True)
    residual = stationarity_residual_literal(root, r_min, sigma, power)
    result = OptResult(
        r_opt=root,
        eta_opt=closed_form_value(root, r_min, sigma, power),
        method=STATIONARITY,
        iterations=evaluations + 1 + info.iterations,
        bracket=(lo, hi),
        evaluator=METHOD_CLOSED,
        residual=residual
    )
    log(f"Stationarity optimum: R_opt={root:.6f}, eta={result.eta_opt:.6f}, "
        f"printed-equation residual={residual:.3e}", level="debug")
    return result


def golden_section_max(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float
) -> Tuple[float, float, int]:
    """
    Seção áurea para máximo de f em [a, b] (f unimodal no intervalo).

    Em empate mantém o subintervalo da esquerda, então funções constantes
    convergem para a.

    Returns:
        (x, f(x), número de avaliações)
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        return a, f(a), 1

    # passos necessários para atingir a tolerância
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)

    for _ in range(n):
        if yc >= yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)

    if yc >= yd:
        return c, yc, n + 2
    return d, yd, n + 2


def _count_local_maxima(values: np.ndarray) -> int:
    # platôs contam uma vez; um extremo da grade só conta se for o máximo global
    steps = np.sign(np.diff(values))
    steps = steps[steps != 0]
    if steps.size == 0:
        return 1
    peaks = int(np.sum((steps[:-1] > 0) & (steps[1:] < 0)))
    top = values.max()
    peaks += int(steps[0] < 0 and values[0] == top)  # máximo em R_min
    peaks += int(steps[-1] > 0 and values[-1] == top)  # máximo em R_hi
    return peaks


def _default_params(sigma: float, power: float) -> ScenarioParams:
    defaults = ScenarioDefaults.from_env()
    fc = defaults.fc_ghz * 1e9
    return ScenarioParams(
        delta=defaults.delta_ms * 1e-3,
        fc=fc,
        da=defaults.da_lambda * wavelength(fc),
        v=0.0,
        power=power,
        sigma_override=sigma
    )


def make_objective(
    scheme: str,
    evaluator: str,
    r_min: float,
    sigma: float,
    power: float,
    k_nats: float = 100.0,
    params: Optional[ScenarioParams] = None,
    mc_config: Optional[McConfig] = None
) -> Callable[[float], float]:
    """
    Função R -> η(R) para um esquema e um método de avaliação, com cache.

    Raises:
        ConfigurationError: Se o esquema não tiver o método pedido
    """
    if scheme not in SCHEMES:
        raise ConfigurationError(f"Unknown scheme: {scheme}. Available: {list(SCHEMES)}")

    context = {
        "scheme": scheme,
        "evaluator": evaluator,
        "r_min": r_min,
        "sigma": sigma,
        "power": power,
        "k": k_nats
    }

    def policy(R: float) -> RatePolicy:
        return RatePolicy(R=R, R_min=r_min, K=k_nats)

    if evaluator == METHOD_MC:
        params = params or _default_params(sigma, power)
        cfg = (mc_config or McConfig()).with_scheme(scheme)
        context.update({
            "params": params.to_dict(),
            "trials": cfg.trials,
            "seed": cfg.master_seed,
            "chunk_size": cfg.chunk_size
        })

        def compute(R: float) -> float:
            return estimate(params, policy(R), cfg).mean
    elif scheme == "pa-harq" and evaluator == METHOD_CLOSED:
        def compute(R: float) -> float:
            return closed_form_value(R, r_min, sigma, power)
    elif scheme == "pa-harq" and evaluator == METHOD_EXACT:
        def compute(R: float) -> float:
            return eta_exact(policy(R), sigma, power).eta
    elif scheme == "basic-arq" and evaluator == METHOD_EXACT:
        def compute(R: float) -> float:
            return eta_benchmarks_analytic(policy(R), sigma, power).eta
    elif scheme == "open-loop" and evaluator in (METHOD_CLOSED, METHOD_EXACT):
        def compute(R: float) -> float:
            return eta_open_loop(R, power)
    else:
        raise ConfigurationError(f"Scheme {scheme} has no {evaluator} evaluator")

    return lambda R: EVAL_CACHE.get_or_compute(context, R, compute)


def optimize_rate_direct(
    r_min: float,
    sigma: float,
    power: float,
    evaluator: str = METHOD_CLOSED,
    scheme: str = "pa-harq",
    k_nats: float = 100.0,
    params: Optional[ScenarioParams] = None,
    mc_config: Optional[McConfig] = None
) -> OptResult:
    """
    Maximização direta de η(R) em [R_min, R_hi].

    Uma grade de 50 pontos verifica a unimodalidade; a seção áurea refina entre os
    vizinhos do melhor ponto da grade até tolerância 1e-4 npcu. Se a grade mostrar
    mais de um máximo local, o método reportado é "grid".

    Args:
        r_min: Taxa mínima R_min
        sigma: Fator de descasamento (ignorado por open-loop)
        power: Potência p
        evaluator: closed-form, exact-integral ou monte-carlo
        scheme: pa-harq, basic-arq, open-loop ou diversity
        k_nats: Carga útil K
        params: Cenário para o avaliador Monte Carlo (σ fixado se omitido)
        mc_config: Configuração Monte Carlo (semente fixa em todas as taxas)

    Returns:
        OptResult
    """
    _check_inputs(r_min, sigma, power)
    objective = make_objective(scheme, evaluator, r_min, sigma, power, k_nats, params, mc_config)

    r_hi = search_upper_rate(r_min, power)
    grid = np.linspace(r_min, r_hi, NUMERICS.grid_points)
    values = np.array([objective(R) for R in grid])
    best = int(np.argmax(values))
    multimodal = _count_local_maxima(values) > 1
    if multimodal:
        log(f"Direct search ({scheme}/{evaluator}): grid shows several local maxima, "
            f"refining around the global grid maximum", level="warning")

    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, len(grid) - 1)]
    x, fx, evaluations = golden_section_max(objective, lo, hi, NUMERICS.rate_tol)

    if fx > values[best]:
        r_opt, eta_opt = x, fx
    else:
        r_opt, eta_opt = float(grid[best]), float(values[best])

    boundary = r_opt - r_min <= NUMERICS.rate_tol or r_hi - r_opt <= NUMERICS.rate_tol
    result = OptResult(
        r_opt=r_opt,
        eta_opt=eta_opt,
        method=GRID if multimodal else GOLDEN,
        iterations=len(grid) + evaluations,
        bracket=(float(lo), float(hi)),
        evaluator=evaluator,
        boundary=boundary
    )
    log(f"Direct optimum ({scheme}/{evaluator}): R_opt={r_opt:.6f}, eta={eta_opt:.6f}", level="debug")
    return result


def optimize_open_loop(r_min: float, power: float) -> OptResult:
    """Ótimo da malha aberta com piso: R_opt = max(R_min, W(p))."""
    _check_inputs(r_min, 0.0, power)
    w = open_loop_optimal_rate(power)
    r_opt = max(r_min, w)
    return OptResult(
        r_opt=r_opt,
        eta_opt=eta_open_loop(r_opt, power),
        method=LAMBERT,
        iterations=1,
        bracket=(r_min, r_opt),
        evaluator=METHOD_CLOSED,
        boundary=w < r_min
    )
