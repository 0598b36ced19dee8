# pa_harq/tests/__init__.py
"""Testes do pacote PA-HARQ."""
