# pa_harq/types.py
"""
Tipos de dados e modelos do enlace PA-HARQ.
Unidades internas: SI e razões lineares; taxas em nats por uso de canal (npcu).
"""
import math
from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Dict, List, Optional, Any, Tuple

from pa_harq.exceptions import ConfigurationError
from shared.utils import db_to_linear, kmh_to_ms, wavelength

METHOD_CLOSED = "closed-form"
METHOD_EXACT = "exact-integral"
METHOD_MC = "monte-carlo"
METHODS = (METHOD_CLOSED, METHOD_EXACT, METHOD_MC)

CSV_HEADER = ["axis", "axis_value", "scheme", "method", "eta_npcu", "std_error", "R", "sigma", "d_eff_m"]


class CorrelationModel(Enum):
    """Leis de espalhamento que produzem Φ_{1,2}(d)."""
    JAKES = "jakes"  # J0(2πd/λ)
    GAUSSIAN = "gaussian"  # exp(-(πd/λ)²)
    RECTANGULAR = "rectangular"  # sinc(2d/λ)

    @classmethod
    def from_name(cls, name: str) -> "CorrelationModel":
        """
        Obtém o modelo pelo nome.

        Raises:
            ConfigurationError: Se o modelo não existir
        """
        try:
            return cls(name.lower())
        except ValueError:
            raise ConfigurationError(f"Unknown scattering model: {name}. Available: {[m.value for m in cls]}")


@dataclass(frozen=True)
class ScenarioParams:
    """
    Parâmetros físicos do cenário.

    `sigma_override`, quando definido, ignora a cinemática e fixa σ diretamente.
    """
    delta: float  # s, atraso de processamento/feedback (t3 - t1)
    fc: float  # Hz
    da: float  # m, separação PA-RA
    v: float  # m/s
    power: float  # razão linear (= SNR, ruído unitário)
    model: CorrelationModel = CorrelationModel.JAKES
    sigma_override: Optional[float] = None

    def __post_init__(self):
        if not self.delta > 0:
            raise ConfigurationError(f"delta must be positive, got {self.delta}")
        if not self.fc > 0:
            raise ConfigurationError(f"fc must be positive, got {self.fc}")
        if not self.da >= 0:
            raise ConfigurationError(f"da must be non-negative, got {self.da}")
        if not self.v >= 0:
            raise ConfigurationError(f"v must be non-negative, got {self.v}")
        if not self.power > 0:
            raise ConfigurationError(f"power must be positive, got {self.power}")
        if self.sigma_override is not None and not 0.0 <= self.sigma_override <= 1.0:
            raise ConfigurationError(f"sigma must be in [0, 1], got {self.sigma_override}")

    @property
    def wavelength(self) -> float:
        """λ = c/f_c em metros."""
        return wavelength(self.fc)

    @classmethod
    def from_units(
        cls,
        snr_db: float,
        speed_kmh: float = 0.0,
        delta_ms: float = 5.0,
        fc_ghz: float = 2.68,
        da_lambda: float = 1.5,
        model: CorrelationModel = CorrelationModel.JAKES,
        sigma: Optional[float] = None
    ) -> "ScenarioParams":
        """
        Cria parâmetros a partir das unidades de fronteira (dB, km/h, ms, GHz, múltiplos de λ).

        Args:
            snr_db: SNR em dB (p = 10^(SNR/10))
            speed_kmh: Velocidade do veículo em km/h
            delta_ms: Atraso δ em ms
            fc_ghz: Frequência de portadora em GHz
            da_lambda: Separação das antenas em múltiplos de λ
            model: Modelo de espalhamento
            sigma: σ direto (opcional)

        Returns:
            Parâmetros em unidades SI
        """
        fc = fc_ghz * 1e9
        return cls(
            delta=delta_ms * 1e-3,
            fc=fc,
            da=da_lambda * wavelength(fc),
            v=kmh_to_ms(speed_kmh),
            power=db_to_linear(snr_db),
            model=model,
            sigma_override=sigma
        )

    def replace(self, **changes) -> "ScenarioParams":
        """Cópia com campos alterados."""
        data = {
            "delta": self.delta,
            "fc": self.fc,
            "da": self.da,
            "v": self.v,
            "power": self.power,
            "model": self.model,
            "sigma_override": self.sigma_override
        }
        data.update(changes)
        return ScenarioParams(**data)

    def to_dict(self) -> Dict[str, Any]:
        """Converte para dicionário."""
        return {
            "delta": self.delta,
            "fc": self.fc,
            "da": self.da,
            "v": self.v,
            "power": self.power,
            "model": self.model.value,
            "sigma_override": self.sigma_override
        }


@dataclass(frozen=True)
class SpatialCorrelation:
    """Fator de descasamento σ e grandezas intermediárias."""
    sigma: float
    phi12: float
    d: float  # m
    clamped: bool = False

    def to_dict(self) -> Dict[str, Any]:
        """Converte para dicionário."""
        return asdict(self)


@dataclass(frozen=True)
class ChannelDraw:
    """Realização conjunta (ĥ, h) e ganhos (ĝ, g)."""
    h_hat: complex
    h: complex
    g_hat: float
    g: float


@dataclass(frozen=True)
class RatePolicy:
    """
    Política de taxa inicial.

    R = K/L e R_min = K/L_max; θ = e^R − 1 e θ_min = e^{R_min} − 1.
    """
    R: float
    R_min: float
    K: float = 100.0

    def __post_init__(self):
        if not self.R_min > 0:
            raise ConfigurationError(f"R_min must be positive, got {self.R_min}")
        if not self.R >= self.R_min:
            raise ConfigurationError(f"R must be >= R_min ({self.R_min}), got {self.R}")
        if not self.K > 0:
            raise ConfigurationError(f"K must be positive, got {self.K}")

    @property
    def theta(self) -> float:
        return math.expm1(self.R)

    @property
    def theta_min(self) -> float:
        return math.expm1(self.R_min)

    @property
    def L(self) -> float:
        """Comprimento da primeira rodada (usos de canal)."""
        return self.K / self.R

    @property
    def L_max(self) -> float:
        """Comprimento máximo total (restrição de atraso)."""
        return self.K / self.R_min

    def with_rate(self, R: float) -> "RatePolicy":
        """Cópia com outra taxa inicial."""
        return RatePolicy(R=R, R_min=self.R_min, K=self.K)

    def to_dict(self) -> Dict[str, Any]:
        """Converte para dicionário."""
        return {"R": self.R, "R_min": self.R_min, "K": self.K}


class RoundStatus(Enum):
    """Como terminou a transmissão de uma mensagem."""
    FIRST_ROUND = "round-1 success"
    SECOND_ROUND = "round-2 success"
    SKIPPED = "skip"
    FAILED = "failure"


@dataclass(frozen=True)
class RoundOutcome:
    """Resultado por realização: rodadas usadas, taxa entregue e L(ĝ)."""
    rounds_used: int  # 1, 2 ou 0 (segunda rodada suprimida)
    delivered_rate: float
    second_len: float
    status: RoundStatus


@dataclass(frozen=True)
class LinearLogApprox:
    """
    Aproximação linear log(1+px) ≃ kx + b no ponto x0 = (θ+θ_min)/(2p).
    """
    k: float
    b: float
    x0: float

    @classmethod
    def at_midpoint(cls, theta: float, theta_min: float, power: float) -> "LinearLogApprox":
        """Tangente de log(1+px) no ponto médio do regime de retransmissão."""
        mid = (theta + theta_min) / 2.0
        x0 = mid / power
        k = 2.0 * power / (theta + theta_min + 2.0)
        b = -x0 * k + math.log1p(mid)
        return cls(k=k, b=b, x0=x0)


@dataclass
class EvalResult:
    """Taxa média avaliada por um método (closed-form, exact-integral, monte-carlo)."""
    eta: float
    method: str
    std_error: float = 0.0
    params_echo: Dict[str, Any] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """Converte para dicionário."""
        return {
            "eta": self.eta,
            "method": self.method,
            "std_error": self.std_error,
            "params": self.params_echo,
            "details": self.details
        }


@dataclass
class McEstimate:
    """
    Estimativa Monte Carlo da taxa média.

    `per_round_shares` mapeia cada RoundStatus.value para a fração de ensaios.
    """
    mean: float
    std_error: float
    trials: int
    per_round_shares: Dict[str, float] = field(default_factory=dict)
    seed: Optional[int] = None
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        """Converte para dicionário."""
        return {
            "mean": self.mean,
            "std_error": self.std_error,
            "trials": self.trials,
            "per_round_shares": dict(self.per_round_shares),
            "seed": self.seed,
            "error": self.error
        }


@dataclass
class OptResult:
    """Taxa inicial ótima e taxa média correspondente."""
    r_opt: float
    eta_opt: float
    method: str  # stationarity-bisection, golden-section, grid, lambert-w
    iterations: int
    bracket: Tuple[float, float]
    evaluator: str = METHOD_CLOSED
    boundary: bool = False  # máximo na fronteira (sem troca de sinal)
    residual: Optional[float] = None  # resíduo da equação de estacionariedade impressa

    def to_dict(self) -> Dict[str, Any]:
        """Converte para dicionário."""
        return {
            "r_opt": self.r_opt,
            "eta_opt": self.eta_opt,
            "method": self.method,
            "iterations": self.iterations,
            "bracket": list(self.bracket),
            "evaluator": self.evaluator,
            "boundary": self.boundary,
            "residual": self.residual
        }


@dataclass
class SweepSpec:
    """Eixo e pontos fixos de uma varredura."""
    axis: str  # snr-db, speed-kmh, rate
    start: float
    stop: float
    points: int
    methods: List[str] = field(default_factory=lambda: [METHOD_CLOSED])
    schemes: List[str] = field(default_factory=lambda: ["pa-harq"])
    optimize: bool = False

    def __post_init__(self):
        if self.axis not in ("snr-db", "speed-kmh", "rate"):
            raise ConfigurationError(f"Unknown axis: {self.axis}")
        if self.points < 2:
            raise ConfigurationError(f"points must be >= 2, got {self.points}")
        if not self.start < self.stop:
            raise ConfigurationError(f"start must be < stop, got {self.start} >= {self.stop}")

    def values(self) -> List[float]:
        """Valores do eixo, igualmente espaçados."""
        step = (self.stop - self.start) / (self.points - 1)
        return [self.start + i * step for i in range(self.points)]


@dataclass
class CsvRow:
    """Linha do CSV de saída (ordem das colunas = CSV_HEADER)."""
    axis: str
    axis_value: float
    scheme: str
    method: str
    eta: float
    std_error: float
    r_used: float
    sigma: float
    d_eff: float
    model: Optional[str] = None  # só na comparação de modelos de espalhamento

    def to_dict(self) -> Dict[str, Any]:
        """Converte para dicionário com os nomes do cabeçalho."""
        row = {
            "axis": self.axis,
            "axis_value": self.axis_value,
            "scheme": self.scheme,
            "method": self.method,
            "eta_npcu": self.eta,
            "std_error": self.std_error,
            "R": self.r_used,
            "sigma": self.sigma,
            "d_eff_m": self.d_eff
        }
        if self.model is not None:
            row["model"] = self.model
        return row
