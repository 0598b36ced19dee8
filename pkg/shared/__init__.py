# shared/__init__.py
"""Módulo compartilhado com utilitários comuns."""

from .utils import (
    log,
    format_dict,
    stable_hash,
    db_to_linear,
    kmh_to_ms,
    wavelength,
    format_duration,
    SPEED_OF_LIGHT,
)

__all__ = [
    "log",
    "format_dict",
    "stable_hash",
    "db_to_linear",
    "kmh_to_ms",
    "wavelength",
    "format_duration",
    "SPEED_OF_LIGHT",
]
