# pa_harq/cli.py
"""
Interface de linha de comando.

Subcomandos:
- sweep: varredura em SNR, velocidade ou taxa, com CSV de saída
- optimize: R_opt e η_opt de um cenário (forma fechada, integral exata e Monte Carlo)
- validate: comparações Monte Carlo x integral exata x forma fechada, com tabela pass/fail
- scattering-compare: η_opt x velocidade para os três modelos de espalhamento

Unidades na fronteira: SNR em dB, velocidade em km/h, δ em ms, f_c em GHz,
d_a em múltiplos de λ; taxas em npcu (nats), ou bits com --bits.

Códigos de saída: 0 sucesso, 1 falha numérica ou de tolerância, 2 erro de uso.
"""
import argparse
import concurrent.futures
import itertools
import math
import sys
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from pa_harq.analytic import (
    eta_benchmarks_analytic,
    eta_closed_form,
    eta_exact,
    eta_open_loop,
    open_loop_optimal_rate,
)
from pa_harq.channel import sigma_from_scenario
from pa_harq.config import SCHEMES, McConfig, ScenarioDefaults
from pa_harq.exceptions import ConfigurationError, PaHarqException
from pa_harq.export import export_record_to_csv, export_rows_to_csv, export_to_json
from pa_harq.montecarlo import estimate
from pa_harq.optimize import (
    optimize_open_loop,
    optimize_rate_direct,
    optimize_rate_stationarity,
)
from pa_harq.protocol import LOG2_E
from pa_harq.types import (
    METHOD_CLOSED,
    METHOD_EXACT,
    METHOD_MC,
    CorrelationModel,
    CsvRow,
    RatePolicy,
    ScenarioParams,
    SweepSpec,
)
from shared.utils import db_to_linear, format_dict, log

METHOD_ALIASES = {"closed": METHOD_CLOSED, "exact": METHOD_EXACT, "mc": METHOD_MC}

# métodos disponíveis por esquema, do mais barato ao mais caro
AVAILABLE_METHODS = {
    "pa-harq": (METHOD_CLOSED, METHOD_EXACT, METHOD_MC),
    "basic-arq": (METHOD_EXACT, METHOD_MC),
    "open-loop": (METHOD_CLOSED, METHOD_EXACT, METHOD_MC),
    "diversity": (METHOD_MC,),
}

VALIDATION_MIN_TRIALS = 100_000
VALIDATION_SIGMAS = (0.1, 0.3)
VALIDATION_REPORT_SIGMAS = (0.9,)
VALIDATION_SNRS_DB = (0.0, 10.0, 20.0, 30.0)
VALIDATION_RATE_OFFSETS = (0.5, 1.5, 3.0)
VALIDATION_OPEN_LOOP_POWERS = (1.0, 10.0, 100.0)
VALIDATION_CLOSED_MIN_SNR_DB = 20.0
VALIDATION_CLOSED_MAX_OFFSET = 1.5
VALIDATION_ORDERING_SIGMAS = (0.1, 0.9)
VALIDATION_ORDERING_SNRS_DB = (15.0, 20.0, 25.0, 30.0, 35.0, 40.0)
VALIDATION_ORDERING_MAX_TRIALS = 1_000_000
BENCHMARK_SCHEMES = ("open-loop", "basic-arq", "diversity")
CLOSED_FORM_REL_TOL = 0.05
OPTIMIZER_REL_TOL = 1e-3
MC_BAND = 3.0


@dataclass
class RunSettings:
    """Parâmetros de avaliação comuns a todos os pontos de uma execução."""
    r_min: float
    k_nats: float
    rate: Optional[float]  # None: taxa otimizada em cada ponto
    mc: McConfig
    scale: float = 1.0  # log2(e) com --bits


# ---------------------------------------------------------------------------
# Argumentos
# ---------------------------------------------------------------------------

def _csv_list(value: str) -> List[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def _add_scenario_args(parser: argparse.ArgumentParser, defaults: ScenarioDefaults) -> None:
    parser.add_argument("--snr-db", type=float, default=defaults.snr_db, help="SNR em dB (p = 10^(SNR/10))")
    parser.add_argument("--sigma", type=float, default=None, help="σ direto (ignora a cinemática)")
    parser.add_argument("--speed-kmh", type=float, default=0.0, help="Velocidade do veículo (km/h)")
    parser.add_argument("--delta-ms", type=float, default=defaults.delta_ms, help="Atraso δ (ms)")
    parser.add_argument("--fc-ghz", type=float, default=defaults.fc_ghz, help="Frequência de portadora (GHz)")
    parser.add_argument("--da-lambda", type=float, default=defaults.da_lambda, help="Separação PA-RA (múltiplos de λ)")
    parser.add_argument("--rmin", type=float, default=defaults.r_min, help="Taxa mínima R_min (npcu)")
    parser.add_argument("--k-nats", type=float, default=defaults.k_nats, help="Carga útil K (nats)")
    parser.add_argument("--model", default=defaults.model, choices=[m.value for m in CorrelationModel])
    parser.add_argument("--bits", action="store_true", help="Reporta taxas em bits (fator log2 e)")


def _add_mc_args(parser: argparse.ArgumentParser, mc_defaults: McConfig) -> None:
    parser.add_argument("--seed", type=int, default=mc_defaults.master_seed, help="Semente mestre")
    parser.add_argument("--trials", type=int, default=mc_defaults.trials, help="Ensaios Monte Carlo")
    parser.add_argument("--chunk-size", type=int, default=mc_defaults.chunk_size, help="Ensaios por bloco")
    parser.add_argument("--workers", type=int, default=mc_defaults.workers, help="Threads de trabalho")


def build_parser() -> argparse.ArgumentParser:
    """Cria o parser com todos os subcomandos."""
    defaults = ScenarioDefaults.from_env()
    mc_defaults = McConfig.from_env()

    parser = argparse.ArgumentParser(prog="pa-harq", description="PA-HARQ average-rate toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="Parameter sweep to CSV")
    sweep.add_argument("--axis", required=True, choices=["snr-db", "speed-kmh", "rate"])
    sweep.add_argument("--start", type=float, required=True)
    sweep.add_argument("--stop", type=float, required=True)
    sweep.add_argument("--points", type=int, required=True)
    sweep.add_argument("--schemes", type=_csv_list, default=["pa-harq"])
    sweep.add_argument("--methods", type=_csv_list, default=["closed"])
    sweep.add_argument("--rate", type=float, default=None, help="R fixo (sem --rate, R é otimizado)")
    sweep.add_argument("--optimize", action="store_true", help="Otimiza R em cada ponto")
    sweep.add_argument("--out", default=None, help="Arquivo CSV (stdout por padrão)")
    _add_scenario_args(sweep, defaults)
    _add_mc_args(sweep, mc_defaults)
    sweep.set_defaults(handler=cmd_sweep)

    opt = sub.add_parser("optimize", help="Optimal initial rate for one scenario")
    opt.add_argument("--scheme", default="pa-harq", choices=list(SCHEMES))
    opt.add_argument("--format", default="csv", choices=["csv", "json"])
    opt.add_argument("--out", default=None)
    _add_scenario_args(opt, defaults)
    _add_mc_args(opt, mc_defaults)
    opt.set_defaults(handler=cmd_optimize)

    val = sub.add_parser("validate", help="Cross-method validation table")
    val.add_argument("--rmin", type=float, default=defaults.r_min)
    _add_mc_args(val, mc_defaults)
    val.set_defaults(handler=cmd_validate)

    scat = sub.add_parser("scattering-compare", help="eta_opt vs speed for all scattering models")
    scat.add_argument("--start", type=float, default=60.0)
    scat.add_argument("--stop", type=float, default=180.0)
    scat.add_argument("--points", type=int, default=61)
    scat.add_argument("--method", default="closed", choices=["closed", "exact"])
    scat.add_argument("--out", default=None)
    _add_scenario_args(scat, defaults)
    scat.set_defaults(handler=cmd_scattering_compare)

    return parser


def _mc_config(args: argparse.Namespace, scheme: str = "pa-harq", workers: Optional[int] = None) -> McConfig:
    return McConfig(
        trials=args.trials,
        master_seed=args.seed,
        chunk_size=args.chunk_size,
        scheme=scheme,
        workers=args.workers if workers is None else workers
    )


def _scenario(args: argparse.Namespace, **overrides) -> ScenarioParams:
    kwargs = {
        "snr_db": args.snr_db,
        "speed_kmh": args.speed_kmh,
        "delta_ms": args.delta_ms,
        "fc_ghz": args.fc_ghz,
        "da_lambda": args.da_lambda,
        "model": CorrelationModel.from_name(args.model),
        "sigma": args.sigma,
    }
    kwargs.update(overrides)
    return ScenarioParams.from_units(**kwargs)


def _parse_methods(names: Sequence[str]) -> List[str]:
    unknown = [n for n in names if n not in METHOD_ALIASES]
    if unknown or not names:
        raise ConfigurationError(f"Unknown methods: {unknown}. Available: {list(METHOD_ALIASES)}")
    return [METHOD_ALIASES[n] for n in names]


def _parse_schemes(names: Sequence[str]) -> List[str]:
    unknown = [n for n in names if n not in SCHEMES]
    if unknown or not names:
        raise ConfigurationError(f"Unknown schemes: {unknown}. Available: {list(SCHEMES)}")
    return list(names)


# ---------------------------------------------------------------------------
# Avaliação por ponto
# ---------------------------------------------------------------------------

def methods_for(scheme: str, requested: Sequence[str]) -> List[str]:
    """
    Métodos pedidos que o esquema suporta; sem nenhum, o mais barato disponível.
    """
    available = AVAILABLE_METHODS[scheme]
    methods = [m for m in requested if m in available]
    if not methods:
        log(f"Scheme {scheme} supports none of {list(requested)}, using {available[0]}", level="warning")
        methods = [available[0]]
    return methods


def analytic_eta(scheme: str, method: str, policy: RatePolicy, sigma: float, power: float) -> float:
    """η(R) de um esquema por método determinístico."""
    if scheme == "open-loop":
        return eta_open_loop(policy.R, power)
    if scheme == "basic-arq":
        return eta_benchmarks_analytic(policy, sigma, power).eta
    if method == METHOD_CLOSED:
        return eta_closed_form(policy, sigma, power).eta
    return eta_exact(policy, sigma, power).eta


def optimal_rate(
    scheme: str,
    method: str,
    settings: RunSettings,
    sigma: float,
    params: ScenarioParams
) -> float:
    """
    R_opt de um esquema. Linhas Monte Carlo usam o R ótimo do avaliador analítico
    do esquema; a diversidade (sem forma analítica) usa seção áurea sobre Monte Carlo.
    """
    power = params.power
    if scheme == "open-loop":
        return optimize_open_loop(settings.r_min, power).r_opt
    if scheme == "pa-harq" and method in (METHOD_CLOSED, METHOD_MC):
        return optimize_rate_stationarity(settings.r_min, sigma, power).r_opt
    if scheme in ("pa-harq", "basic-arq"):
        return optimize_rate_direct(
            settings.r_min, sigma, power, evaluator=METHOD_EXACT, scheme=scheme, k_nats=settings.k_nats
        ).r_opt
    return optimize_rate_direct(
        settings.r_min, sigma, power, evaluator=METHOD_MC, scheme=scheme,
        k_nats=settings.k_nats, params=params, mc_config=settings.mc
    ).r_opt


def evaluate_point(
    axis: str,
    axis_value: float,
    params: ScenarioParams,
    schemes: Sequence[str],
    methods: Sequence[str],
    settings: RunSettings,
    model: Optional[str] = None
) -> List[CsvRow]:
    """
    Linhas CSV de um ponto do eixo: uma por (esquema x método).

    Raises:
        PaHarqException: Falha numérica, com o ponto identificado na mensagem
    """
    corr = sigma_from_scenario(params)
    rows = []
    try:
        for scheme in schemes:
            rate_cache: Dict[str, float] = {}
            for method in methods_for(scheme, methods):
                if settings.rate is not None:
                    R = settings.rate
                else:
                    key = METHOD_CLOSED if method == METHOD_MC and scheme != "diversity" else method
                    if key not in rate_cache:
                        rate_cache[key] = optimal_rate(scheme, method, settings, corr.sigma, params)
                    R = rate_cache[key]

                policy = RatePolicy(R=R, R_min=settings.r_min, K=settings.k_nats)
                if method == METHOD_MC:
                    mc = estimate(params, policy, settings.mc.with_scheme(scheme))
                    eta, std_error = mc.mean, mc.std_error
                else:
                    eta, std_error = analytic_eta(scheme, method, policy, corr.sigma, params.power), 0.0

                rows.append(CsvRow(
                    axis=axis,
                    axis_value=axis_value,
                    scheme=scheme,
                    method=method,
                    eta=eta * settings.scale,
                    std_error=std_error * settings.scale,
                    r_used=R * settings.scale,
                    sigma=corr.sigma,
                    d_eff=corr.d,
                    model=model
                ))
    except ConfigurationError:
        raise
    except PaHarqException as e:
        raise type(e)(f"{axis}={axis_value}: {e}") from e
    return rows


def _sweep_point_params(args: argparse.Namespace, axis: str, value: float) -> ScenarioParams:
    if axis == "snr-db":
        return _scenario(args, snr_db=value)
    if axis == "speed-kmh":
        return _scenario(args, speed_kmh=value)
    return _scenario(args)


# ---------------------------------------------------------------------------
# Subcomandos
# ---------------------------------------------------------------------------

def cmd_sweep(args: argparse.Namespace) -> int:
    """
    Varredura no eixo pedido; uma linha por (ponto x esquema x método).

    Com eixo speed-kmh, σ é recalculado pela cinemática em cada ponto.
    Sem --rate (ou com --optimize), cada ponto usa a taxa ótima.
    """
    spec = SweepSpec(
        axis=args.axis,
        start=args.start,
        stop=args.stop,
        points=args.points,
        methods=_parse_methods(args.methods),
        schemes=_parse_schemes(args.schemes),
        optimize=args.optimize or (args.rate is None and args.axis != "rate")
    )
    if spec.axis == "speed-kmh" and args.sigma is not None:
        raise ConfigurationError("--sigma overrides kinematics and cannot be combined with --axis speed-kmh")
    if spec.axis == "rate" and spec.start < args.rmin:
        raise ConfigurationError(f"rate axis must start at or above R_min={args.rmin}, got {spec.start}")

    parallel_points = args.workers > 1
    base = RunSettings(
        r_min=args.rmin,
        k_nats=args.k_nats,
        rate=None if spec.optimize else args.rate,
        mc=_mc_config(args, workers=1 if parallel_points else None),
        scale=LOG2_E if args.bits else 1.0
    )

    def run(value: float) -> List[CsvRow]:
        params = _sweep_point_params(args, spec.axis, value)
        if spec.axis == "rate":
            settings = RunSettings(base.r_min, base.k_nats, value, base.mc, base.scale)
        else:
            settings = base
        log(f"Sweep point {spec.axis}={value:.6g}", level="debug")
        return evaluate_point(spec.axis, value, params, spec.schemes, spec.methods, settings)

    values = spec.values()
    log(f"Sweep {spec.axis} over {len(values)} points, schemes={spec.schemes}, methods={spec.methods}")
    if parallel_points:
        with concurrent.futures.ThreadPoolExecutor(max_workers=args.workers) as executor:
            # map preserva a ordem do eixo
            per_point = list(executor.map(run, values))
    else:
        per_point = [run(v) for v in values]

    rows = list(itertools.chain.from_iterable(per_point))
    export_rows_to_csv(rows, args.out)
    log(f"Sweep finished: {len(rows)} rows")
    return 0


def cmd_optimize(args: argparse.Namespace) -> int:
    """
    R_opt e η_opt de um cenário, com os três métodos quando disponíveis.

    pa-harq: bisseção estacionária (forma fechada), conferida por seção áurea;
    basic-arq: seção áurea sobre a integral exata; open-loop: W de Lambert;
    diversity: seção áurea sobre Monte Carlo.
    """
    params = _scenario(args)
    corr = sigma_from_scenario(params)
    sigma, power = corr.sigma, params.power
    scheme = args.scheme
    mc_cfg = _mc_config(args, scheme=scheme)
    scale = LOG2_E if args.bits else 1.0

    record: Dict[str, object] = {
        "scheme": scheme,
        "snr_db": args.snr_db,
        "sigma": sigma,
        "d_eff_m": corr.d,
        "R_min": args.rmin * scale,
        "eta_closed": None,
        "eta_exact": None,
        "r_opt_check": None,
        "residual": None,
    }

    if scheme == "pa-harq":
        result = optimize_rate_stationarity(args.rmin, sigma, power)
        check = optimize_rate_direct(args.rmin, sigma, power, evaluator=METHOD_CLOSED, k_nats=args.k_nats)
        record["r_opt_check"] = check.r_opt * scale
        record["residual"] = result.residual
    elif scheme == "basic-arq":
        result = optimize_rate_direct(args.rmin, sigma, power, evaluator=METHOD_EXACT, scheme=scheme, k_nats=args.k_nats)
    elif scheme == "open-loop":
        result = optimize_open_loop(args.rmin, power)
    else:
        result = optimize_rate_direct(
            args.rmin, sigma, power, evaluator=METHOD_MC, scheme=scheme,
            k_nats=args.k_nats, params=params, mc_config=mc_cfg
        )

    policy = RatePolicy(R=result.r_opt, R_min=args.rmin, K=args.k_nats)
    if METHOD_CLOSED in AVAILABLE_METHODS[scheme]:
        record["eta_closed"] = analytic_eta(scheme, METHOD_CLOSED, policy, sigma, power) * scale
    if METHOD_EXACT in AVAILABLE_METHODS[scheme]:
        record["eta_exact"] = analytic_eta(scheme, METHOD_EXACT, policy, sigma, power) * scale
    mc = estimate(params, policy, mc_cfg)

    record.update({
        "r_opt": result.r_opt * scale,
        "eta_opt": result.eta_opt * scale,
        "eta_mc": mc.mean * scale,
        "std_error_mc": mc.std_error * scale,
        "method": result.method,
        "iterations": result.iterations,
        "boundary": result.boundary,
    })
    log(f"Optimization result: {format_dict(record)}", level="debug")

    if args.format == "json":
        export_to_json(record, args.out)
    else:
        export_record_to_csv(record, args.out)
    return 0


def _validation_params(snr_db: float, sigma: float) -> ScenarioParams:
    defaults = ScenarioDefaults.from_env()
    return ScenarioParams.from_units(
        snr_db=snr_db,
        delta_ms=defaults.delta_ms,
        fc_ghz=defaults.fc_ghz,
        da_lambda=defaults.da_lambda,
        sigma=sigma
    )


def _check_row(check, sigma, snr_db, R, reference, value, deviation, tolerance, gated) -> Dict[str, object]:
    return {
        "check": check,
        "sigma": sigma,
        "snr_db": snr_db,
        "R": R,
        "reference": reference,
        "value": value,
        "deviation": deviation,
        "tolerance": tolerance,
        "gated": gated,
        "passed": bool(deviation <= tolerance),
    }


def open_loop_grid_argmax(power: float, resolution: float = 1e-4, upper: float = 10.0) -> float:
    """Maximizador de R·e^{-(e^R - 1)/p} numa grade de R em (0, upper]."""
    grid = np.arange(1, int(round(upper / resolution)) + 1) * resolution
    values = grid * np.exp(-np.expm1(grid) / power)
    return float(grid[int(np.argmax(values))])


def validation_table(args: argparse.Namespace) -> pd.DataFrame:
    """
    Monta a tabela de validação:

    - Monte Carlo x integral exata (faixa de 3 erros padrão), σ ∈ {0.1, 0.3}
    - forma fechada x integral exata (5% relativo), controlada para σ <= 0.3 com
      SNR >= 20 dB e R <= R_min + 1.5; fora dessa região (SNR baixa, R distante de
      R_min, σ = 0.9) a tangente de log(1+px) e a aproximação de Q(x,x) perdem
      precisão e o desvio é apenas reportado
    - ótimo da malha aberta por grade x W(p)
    - bisseção estacionária x seção áurea (0.1% no valor objetivo)
    - ordem dos esquemas com taxas otimizadas (até 10⁶ ensaios por ponto)
    """
    rows = []
    r_min = args.rmin

    for sigma, snr_db, offset in itertools.product(
        VALIDATION_SIGMAS + VALIDATION_REPORT_SIGMAS, VALIDATION_SNRS_DB, VALIDATION_RATE_OFFSETS
    ):
        params = _validation_params(snr_db, sigma)
        policy = RatePolicy(R=r_min + offset, R_min=r_min)
        exact = eta_exact(policy, sigma, params.power).eta
        closed = eta_closed_form(policy, sigma, params.power).eta
        gated = sigma in VALIDATION_SIGMAS
        closed_gated = (
            gated
            and snr_db >= VALIDATION_CLOSED_MIN_SNR_DB
            and offset <= VALIDATION_CLOSED_MAX_OFFSET
        )

        if gated:
            mc = estimate(params, policy, _mc_config(args))
            rows.append(_check_row(
                "mc-vs-exact", sigma, snr_db, policy.R, exact, mc.mean,
                abs(mc.mean - exact), MC_BAND * mc.std_error, True
            ))
        rows.append(_check_row(
            "closed-vs-exact", sigma, snr_db, policy.R, exact, closed,
            abs(closed - exact) / exact, CLOSED_FORM_REL_TOL, closed_gated
        ))

    for power in VALIDATION_OPEN_LOOP_POWERS:
        w = open_loop_optimal_rate(power)
        argmax = open_loop_grid_argmax(power)
        rows.append(_check_row(
            "open-loop-lambert-w", math.nan, 10.0 * math.log10(power), w, w, argmax,
            abs(argmax - w), 1e-3, True
        ))

    for sigma, snr_db in itertools.product(VALIDATION_SIGMAS, VALIDATION_SNRS_DB):
        power = db_to_linear(snr_db)
        stationary = optimize_rate_stationarity(r_min, sigma, power)
        golden = optimize_rate_direct(r_min, sigma, power, evaluator=METHOD_CLOSED)
        rows.append(_check_row(
            "optimizer-agreement", sigma, snr_db, stationary.r_opt, golden.eta_opt, stationary.eta_opt,
            abs(stationary.eta_opt - golden.eta_opt) / golden.eta_opt, OPTIMIZER_REL_TOL, True
        ))

    rows.extend(scheme_ordering_rows(args))
    return pd.DataFrame(rows)


def scheme_ordering_rows(args: argparse.Namespace) -> List[Dict[str, object]]:
    """
    PA-HARQ x benchmarks com taxas otimizadas, por Monte Carlo.

    Passa quando η_pa-harq >= η_benchmark dentro de 3 erros padrão combinados.
    """
    settings = RunSettings(
        r_min=args.rmin,
        k_nats=ScenarioDefaults.from_env().k_nats,
        rate=None,
        mc=_mc_config(args).with_trials(min(args.trials, VALIDATION_ORDERING_MAX_TRIALS))
    )
    rows = []
    for sigma, snr_db in itertools.product(VALIDATION_ORDERING_SIGMAS, VALIDATION_ORDERING_SNRS_DB):
        params = _validation_params(snr_db, sigma)
        estimates = {}
        for scheme in ("pa-harq",) + BENCHMARK_SCHEMES:
            method = METHOD_EXACT if scheme == "pa-harq" else METHOD_MC
            R = optimal_rate(scheme, method, settings, sigma, params)
            policy = RatePolicy(R=R, R_min=settings.r_min, K=settings.k_nats)
            estimates[scheme] = (R, estimate(params, policy, settings.mc.with_scheme(scheme)))

        _, pa = estimates["pa-harq"]
        for scheme in BENCHMARK_SCHEMES:
            R, other = estimates[scheme]
            band = MC_BAND * math.hypot(pa.std_error, other.std_error)
            rows.append(_check_row(
                f"ordering-{scheme}", sigma, snr_db, R, pa.mean, other.mean,
                max(0.0, other.mean - pa.mean), band, True
            ))
    return rows


def cmd_validate(args: argparse.Namespace) -> int:
    """
    Executa a matriz de validação e imprime a tabela; sai com 0 sse todas as
    verificações controladas passarem.
    """
    if args.trials < VALIDATION_MIN_TRIALS:
        raise ConfigurationError(f"validate requires at least {VALIDATION_MIN_TRIALS} trials, got {args.trials}")

    table = validation_table(args)
    sys.stdout.write(table.to_string(index=False, float_format=lambda v: f"{v:.6g}") + "\n")

    gated = table[table["gated"]]
    failures = int((~gated["passed"]).sum())
    report_only = table[~table["gated"]]
    if len(report_only):
        log(f"Closed-form deviation outside the gated region (reported only): "
            f"max {report_only['deviation'].max():.3%} over {len(report_only)} points")
    log(f"Validation: {len(gated) - failures}/{len(gated)} gated checks passed")
    return 0 if failures == 0 else 1


def _max_pairwise_deviation(etas: Sequence[float]) -> float:
    worst = 0.0
    for a, b in itertools.combinations(etas, 2):
        top = max(abs(a), abs(b))
        if top > 0:
            worst = max(worst, abs(a - b) / top)
    return worst


def cmd_scattering_compare(args: argparse.Namespace) -> int:
    """
    η_opt x velocidade para Jakes, gaussiano e retangular num único CSV.

    Registra o maior desvio relativo entre pares de modelos; falha (saída 1) se os
    modelos não coincidirem exatamente em v = d_a/δ, onde σ = 0 para todos.
    """
    if args.sigma is not None:
        raise ConfigurationError("--sigma overrides kinematics and cannot be used in scattering-compare")
    if args.points < 1 or args.start > args.stop or (args.points > 1 and args.start == args.stop):
        raise ConfigurationError(f"Invalid speed grid: start={args.start}, stop={args.stop}, points={args.points}")

    method = METHOD_ALIASES[args.method]
    settings = RunSettings(
        r_min=args.rmin,
        k_nats=args.k_nats,
        rate=None,
        mc=McConfig(),
        scale=LOG2_E if args.bits else 1.0
    )
    speeds = np.linspace(args.start, args.stop, args.points) if args.points > 1 else np.array([args.start])

    rows: List[CsvRow] = []
    by_speed: Dict[float, List[float]] = {}
    for model in CorrelationModel:
        for speed in speeds:
            params = _scenario(args, speed_kmh=float(speed), model=model)
            point_rows = evaluate_point("speed-kmh", float(speed), params, ["pa-harq"], [method], settings, model.value)
            rows.extend(point_rows)
            by_speed.setdefault(float(speed), []).append(point_rows[0].eta)

    export_rows_to_csv(rows, args.out)
    worst = max(_max_pairwise_deviation(etas) for etas in by_speed.values())
    log(f"Scattering comparison: max pairwise relative deviation {worst:.4%} over {len(speeds)} speeds")

    # v = d_a/δ: distância efetiva nula
    matched = _scenario(args)
    match_kmh = matched.da / matched.delta * 3.6
    matched_etas = []
    for model in CorrelationModel:
        params = _scenario(args, speed_kmh=match_kmh, model=model)
        matched_etas.append(evaluate_point("speed-kmh", match_kmh, params, ["pa-harq"], [method], settings)[0].eta)
    if len(set(matched_etas)) != 1:
        log(f"Models disagree at matched speed {match_kmh:.3f} km/h: {matched_etas}", level="error")
        return 1
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """
    Ponto de entrada da CLI.

    Returns:
        Código de saída (0, 1 ou 2)
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0

    try:
        return args.handler(args)
    except ConfigurationError as e:
        log(f"Usage error: {e}", level="error")
        return 2
    except PaHarqException as e:
        log(f"Numeric failure: {e}", level="error")
        return 1


if __name__ == "__main__":
    sys.exit(main())
