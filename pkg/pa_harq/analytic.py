# pa_harq/analytic.py
"""
Avaliação analítica e semi-analítica da taxa média.

- eta_exact: integral exata (sem aproximações) por quadratura adaptativa
- eta_closed_form: expressão fechada (aproximações Q(x,x), I0 assintótica e log linear)
- benchmarks: malha aberta (forma fechada e ótimo via W de Lambert) e ARQ básico
"""
import math
from typing import Callable, Dict, Any, Tuple

from scipy import integrate

from pa_harq.config import NUMERICS
from pa_harq.exceptions import ConfigurationError, QuadratureError
from pa_harq.specfun import erf, exp_integral_e1, lambert_w0, marcum_q1
from pa_harq.types import (
    METHOD_CLOSED,
    METHOD_EXACT,
    EvalResult,
    LinearLogApprox,
    RatePolicy,
)
from shared.utils import log

SQRT_PI = math.sqrt(math.pi)


def _check_sigma(sigma: float) -> None:
    if not 0.0 <= sigma <= 1.0:
        raise ConfigurationError(f"sigma must be in [0, 1], got {sigma}")


def _echo(policy: RatePolicy, sigma: float, power: float) -> Dict[str, Any]:
    data = policy.to_dict()
    data.update({"sigma": sigma, "power": power})
    return data


def f1(x: float, power: float) -> float:
    """
    F1(x) = -½e^{-x}(log(px+1) + E1((px+1)/p)·e^{x+1/p}).

    Primitiva de ½e^{-x}log(1+px). O produto e^{-x}·e^{x+1/p} é simplificado
    para e^{1/p}, evitando overflow para x grande.
    """
    return -0.5 * (math.exp(-x) * math.log1p(power * x) + exp_integral_e1(x + 1.0 / power) * math.exp(1.0 / power))


def f2(x: float) -> float:
    """F2(x) = ½√π·erf(√x) - √x·e^{-x}; primitiva de √x·e^{-x}, F2(0) = 0."""
    root = math.sqrt(x)
    return 0.5 * SQRT_PI * erf(root) - root * math.exp(-x)


def linear_log_approx(policy: RatePolicy, power: float) -> LinearLogApprox:
    """Tangente de log(1+px) no ponto médio (θ+θ_min)/(2p)."""
    return LinearLogApprox.at_midpoint(policy.theta, policy.theta_min, power)


def second_round_success(x: float, sigma: float) -> float:
    """
    Pr(g >= x | ĝ = x) = Q1(√(2(1-σ²)x/σ²), √(2x/σ²)).

    Em σ = 0 o canal é perfeitamente conhecido (g = ĝ) e o evento é certo.
    """
    if sigma == 0.0:
        return 1.0
    s2 = sigma * sigma
    return marcum_q1(math.sqrt(2.0 * (1.0 - s2) * x / s2), math.sqrt(2.0 * x / s2))


def _upper_limit(lo: float, hi: float) -> float:
    # a massa de e^{-x} além de lo + quad_tail fica abaixo da tolerância absoluta
    return min(hi, lo + NUMERICS.quad_tail)


def _quad(integrand: Callable[[float], float], lo: float, hi: float) -> Tuple[float, Dict[str, Any]]:
    """
    Quadratura adaptativa de Gauss-Kronrod (QUADPACK) com diagnóstico.

    Raises:
        QuadratureError: Se a integral não convergir dentro da tolerância
    """
    if hi <= lo:
        return 0.0, {"abserr": 0.0, "neval": 0, "subintervals": 0}

    result = integrate.quad(
        integrand,
        lo,
        hi,
        epsabs=NUMERICS.quad_abs_tol,
        epsrel=NUMERICS.quad_rel_tol,
        limit=NUMERICS.quad_limit,
        full_output=1
    )
    value, abserr, info = result[0], result[1], result[2]
    diagnostics = {"abserr": abserr, "neval": info.get("neval"), "subintervals": info.get("last")}

    if len(result) > 3:
        diagnostics["message"] = result[3]
        if abserr > 10.0 * NUMERICS.quad_abs_tol:
            raise QuadratureError(f"Quadrature on [{lo}, {hi}] did not converge: {result[3]}", diagnostics)
        log(f"Quadrature warning on [{lo:.4g}, {hi:.4g}] accepted (abserr={abserr:.2e}): {result[3]}", level="debug")

    return value, diagnostics


def eta_exact(policy: RatePolicy, sigma: float, power: float) -> EvalResult:
    """
    Taxa média do PA-HARQ sem aproximações.

    η(R) = R·e^{-θ/p} + ∫_{θ_min/p}^{θ/p} e^{-x}·log(1+px)·Pr(g >= x | ĝ = x) dx

    Args:
        policy: Política de taxa
        sigma: Fator de descasamento em [0, 1]
        power: Potência p

    Returns:
        EvalResult com método exact-integral

    Raises:
        QuadratureError: Se a quadratura não convergir
    """
    _check_sigma(sigma)
    lo = policy.theta_min / power
    hi = policy.theta / power

    def integrand(x: float) -> float:
        return math.exp(-x) * math.log1p(power * x) * second_round_success(x, sigma)

    integral, diagnostics = _quad(integrand, lo, _upper_limit(lo, hi))
    eta = policy.R * math.exp(-hi) + integral
    diagnostics["perfect_csit"] = sigma == 0.0
    return EvalResult(
        eta=eta,
        method=METHOD_EXACT,
        params_echo=_echo(policy, sigma, power),
        details=diagnostics
    )


def closed_form_value(R: float, R_min: float, sigma: float, power: float) -> float:
    """
    Expressão fechada da taxa média para valores escalares de R e R_min.

    Não valida R >= R_min, para uso em diferenças finitas na fronteira do domínio.
    """
    theta = math.expm1(R)
    theta_min = math.expm1(R_min)
    hi = theta / power
    lo = theta_min / power
    approx = LinearLogApprox.at_midpoint(theta, theta_min, power)

    first_round = R * math.exp(-hi)
    log_term = f1(hi, power) - f1(lo, power)
    mismatch_term = (sigma / (4.0 * SQRT_PI)) * (
        approx.k * (f2(hi) - f2(lo))
        + approx.b * SQRT_PI * (erf(math.sqrt(hi)) - erf(math.sqrt(lo)))
    )
    return first_round + log_term + mismatch_term


def eta_closed_form(policy: RatePolicy, sigma: float, power: float) -> EvalResult:
    """
    Taxa média do PA-HARQ pela expressão fechada aproximada.

    η ≃ Re^{-θ/p} + (F1(θ/p) - F1(θ_min/p))
        + σ/(4√π)·(k(F2(θ/p) - F2(θ_min/p)) + b√π(erf(√(θ/p)) - erf(√(θ_min/p))))

    A qualidade da aproximação cai para σ grande; não há limite rígido.
    """
    _check_sigma(sigma)
    eta = closed_form_value(policy.R, policy.R_min, sigma, power)
    approx = linear_log_approx(policy, power)
    return EvalResult(
        eta=eta,
        method=METHOD_CLOSED,
        params_echo=_echo(policy, sigma, power),
        details={"k": approx.k, "b": approx.b, "x0": approx.x0}
    )


def eta_open_loop(R: float, power: float) -> float:
    """Taxa média em malha aberta: R·e^{-(e^R - 1)/p}."""
    if not (R > 0 and power > 0):
        raise ConfigurationError(f"R and power must be positive, got R={R}, power={power}")
    return R * math.exp(-math.expm1(R) / power)


def open_loop_optimal_rate(power: float) -> float:
    """Taxa ótima em malha aberta, R = W(p) (zera a derivada de R·e^{-θ/p})."""
    if not power > 0:
        raise ConfigurationError(f"power must be positive, got {power}")
    return lambert_w0(power)


def eta_benchmarks_analytic(policy: RatePolicy, sigma: float, power: float) -> EvalResult:
    """
    Taxa média exata do ARQ básico por quadratura.

    η = R·e^{-θ/p} + 0.5R·∫_{θ_min/p}^{θ/p} e^{-x}·Pr(g >= x | ĝ = x) dx

    A diversidade MRC não tem forma fechada aqui e só é avaliada por Monte Carlo.
    """
    _check_sigma(sigma)
    lo = policy.theta_min / power
    hi = policy.theta / power

    def integrand(x: float) -> float:
        return math.exp(-x) * second_round_success(x, sigma)

    integral, diagnostics = _quad(integrand, lo, _upper_limit(lo, hi))
    eta = policy.R * math.exp(-hi) + 0.5 * policy.R * integral
    diagnostics["scheme"] = "basic-arq"
    return EvalResult(
        eta=eta,
        method=METHOD_EXACT,
        params_echo=_echo(policy, sigma, power),
        details=diagnostics
    )
