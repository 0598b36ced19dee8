# pa_harq/exceptions.py
"""
Exceções customizadas para o pacote PA-HARQ.
"""


class PaHarqException(Exception):
    """Exceção base para erros do pacote."""
    pass


class ConfigurationError(PaHarqException):
    """Erro relacionado a parâmetros ou flags inválidos."""
    pass


class DomainError(PaHarqException, ValueError):
    """Argumento fora do domínio de uma função especial."""
    pass


class ConvergenceError(PaHarqException):
    """Série ou iteração não convergiu dentro do limite de termos."""
    pass


class DegenerateDistributionError(PaHarqException):
    """Distribuição condicional degenerada (σ = 0, g = ĝ)."""
    pass


class ContractViolation(PaHarqException):
    """Pré-condição de uma operação do protocolo não satisfeita."""
    pass


class NumericError(PaHarqException):
    """Falha numérica genérica (overflow de acumulador, resultado não finito)."""
    pass


class QuadratureError(NumericError):
    """Integração numérica não convergiu."""

    def __init__(self, message: str, diagnostics: dict = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
