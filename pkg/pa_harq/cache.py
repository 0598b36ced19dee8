# pa_harq/cache.py
"""
Cache de avaliações da taxa média.
Evita reavaliar a mesma taxa R durante a busca do ótimo (grade + seção áurea).
"""
from collections import OrderedDict
from threading import Lock
from typing import Any, Callable, Dict, Optional

from shared.utils import log, stable_hash


class EvaluationCache:
    """
    Cache LRU de resultados de avaliação, indexado por (avaliador, esquema, cenário, R).

    Seguro para uso a partir das threads de `--workers`: leitura, escrita e
    contadores passam pelo mesmo lock.
    """

    def __init__(self, label: str = "", max_entries: int = 4096):
        """
        Inicializa o cache.

        Args:
            label: Identificação do avaliador (entra na chave)
            max_entries: Número máximo de entradas; as menos usadas saem primeiro
        """
        self.cache: "OrderedDict[int, float]" = OrderedDict()
        self.label = label
        self.max_entries = max_entries
        self.hits = 0
        self.misses = 0
        self.evictions = 0
        self._lock = Lock()

    def _get_key(self, context: Dict[str, Any], R: float) -> int:
        """
        Gera chave canônica para uma avaliação.

        Args:
            context: Esquema, cenário e demais parâmetros fixos
            R: Taxa avaliada

        Returns:
            Chave hash
        """
        return stable_hash({"label": self.label, "context": context, "R": float(R).hex()})

    def get(self, context: Dict[str, Any], R: float) -> Optional[float]:
        """
        Obtém valor do cache se disponível.

        Returns:
            Valor em cache ou None
        """
        key = self._get_key(context, R)
        with self._lock:
            if key in self.cache:
                self.cache.move_to_end(key)
                self.hits += 1
                return self.cache[key]
            self.misses += 1
        return None

    def put(self, context: Dict[str, Any], R: float, value: float) -> None:
        """Armazena valor no cache, descartando a entrada menos usada se cheio."""
        key = self._get_key(context, R)
        with self._lock:
            self.cache[key] = value
            self.cache.move_to_end(key)
            while len(self.cache) > self.max_entries:
                self.cache.popitem(last=False)
                self.evictions += 1

    def get_or_compute(self, context: Dict[str, Any], R: float, compute: Callable[[float], float]) -> float:
        """
        Retorna o valor em cache ou calcula, armazena e retorna.

        O cálculo roda fora do lock; duas threads podem calcular a mesma taxa,
        com o mesmo resultado.

        Args:
            context: Parâmetros fixos da avaliação
            R: Taxa avaliada
            compute: Função R -> η

        Returns:
            η(R)
        """
        value = self.get(context, R)
        if value is None:
            value = compute(R)
            self.put(context, R, value)
        return value

    def clear(self) -> None:
        """Limpa o cache."""
        with self._lock:
            self.cache.clear()
            self.hits = 0
            self.misses = 0
            self.evictions = 0
        log(f"Cache {self.label} cleared", level="debug")

    def size(self) -> int:
        """Retorna tamanho do cache."""
        with self._lock:
            return len(self.cache)
