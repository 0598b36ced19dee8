# pa_harq/config.py
"""
Configurações centralizadas (cenário, Monte Carlo e tolerâncias numéricas).
Valores padrão seguem o cenário de avaliação: δ = 5 ms, f_c = 2.68 GHz, d_a = 1.5λ, R_min = 2 npcu.
"""
import os
from dataclasses import dataclass

from pa_harq.exceptions import ConfigurationError

SCHEMES = ("pa-harq", "basic-arq", "open-loop", "diversity")


@dataclass
class ScenarioDefaults:
    """Parâmetros padrão do cenário físico, em unidades de fronteira (dB, ms, GHz, λ)."""
    delta_ms: float = 5.0
    fc_ghz: float = 2.68
    da_lambda: float = 1.5
    r_min: float = 2.0
    k_nats: float = 100.0
    snr_db: float = 20.0
    model: str = "jakes"

    @classmethod
    def from_env(cls) -> "ScenarioDefaults":
        """Carrega configuração de variáveis de ambiente."""
        return cls(
            delta_ms=float(os.environ.get("PA_HARQ_DELTA_MS", "5.0")),
            fc_ghz=float(os.environ.get("PA_HARQ_FC_GHZ", "2.68")),
            da_lambda=float(os.environ.get("PA_HARQ_DA_LAMBDA", "1.5")),
            r_min=float(os.environ.get("PA_HARQ_RMIN", "2.0")),
            k_nats=float(os.environ.get("PA_HARQ_K_NATS", "100.0")),
            snr_db=float(os.environ.get("PA_HARQ_SNR_DB", "20.0")),
            model=os.environ.get("PA_HARQ_MODEL", "jakes")
        )


@dataclass
class McConfig:
    """
    Configuração do estimador Monte Carlo.

    O resultado é função pura de (trials, master_seed, chunk_size, scheme, parâmetros);
    `workers` só altera o tempo de execução.
    """
    trials: int = 1_000_000
    master_seed: int = 42
    chunk_size: int = 1 << 16
    scheme: str = "pa-harq"
    workers: int = 1

    def __post_init__(self):
        if self.trials <= 0:
            raise ConfigurationError(f"trials must be positive, got {self.trials}")
        if self.chunk_size <= 0:
            raise ConfigurationError(f"chunk_size must be positive, got {self.chunk_size}")
        if self.workers <= 0:
            raise ConfigurationError(f"workers must be positive, got {self.workers}")
        if self.scheme not in SCHEMES:
            raise ConfigurationError(f"Unknown scheme: {self.scheme}. Available: {list(SCHEMES)}")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ConfigurationError(f"master_seed must fit in 64 bits, got {self.master_seed}")

    def with_scheme(self, scheme: str) -> "McConfig":
        """Cópia com outro esquema de transmissão."""
        return McConfig(
            trials=self.trials,
            master_seed=self.master_seed,
            chunk_size=self.chunk_size,
            scheme=scheme,
            workers=self.workers
        )

    def with_trials(self, trials: int) -> "McConfig":
        """Cópia com outro número de ensaios."""
        return McConfig(
            trials=trials,
            master_seed=self.master_seed,
            chunk_size=self.chunk_size,
            scheme=self.scheme,
            workers=self.workers
        )

    @classmethod
    def from_env(cls) -> "McConfig":
        """Carrega configuração de variáveis de ambiente."""
        return cls(
            trials=int(os.environ.get("PA_HARQ_TRIALS", "1000000")),
            master_seed=int(os.environ.get("PA_HARQ_SEED", "42")),
            chunk_size=int(os.environ.get("PA_HARQ_CHUNK_SIZE", str(1 << 16))),
            scheme=os.environ.get("PA_HARQ_SCHEME", "pa-harq"),
            workers=int(os.environ.get("PA_HARQ_WORKERS", "1"))
        )


@dataclass
class NumericsConfig:
    """Tolerâncias e limites dos núcleos numéricos."""
    quad_abs_tol: float = 1e-9
    quad_rel_tol: float = 1e-10
    quad_limit: int = 10_000
    series_rel_stop: float = 1e-16
    series_max_terms: int = 500
    rate_tol: float = 1e-4
    rate_cap: float = 20.0
    grid_points: int = 50
    derivative_rel_step: float = 1e-6
    quad_tail: float = 50.0
    cache_max_entries: int = 4096

    @classmethod
    def from_env(cls) -> "NumericsConfig":
        """Carrega configuração de variáveis de ambiente."""
        return cls(
            quad_abs_tol=float(os.environ.get("PA_HARQ_QUAD_ABS_TOL", "1e-9")),
            quad_limit=int(os.environ.get("PA_HARQ_QUAD_LIMIT", "10000")),
            rate_tol=float(os.environ.get("PA_HARQ_RATE_TOL", "1e-4")),
            rate_cap=float(os.environ.get("PA_HARQ_RATE_CAP", "20.0")),
            cache_max_entries=int(os.environ.get("PA_HARQ_CACHE_SIZE", "4096"))
        )


NUMERICS = NumericsConfig.from_env()
