# scripts/__init__.py
"""Scripts de execução da CLI."""


