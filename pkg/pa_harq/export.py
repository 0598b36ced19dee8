# pa_harq/export.py
"""
Exportação de resultados em CSV/JSON.

CSV: UTF-8, separador decimal ".", fim de linha LF, floats com 12 dígitos significativos
(saída estável byte a byte para entradas iguais).
"""
import json
import sys
from typing import Any, Dict, List, Optional

import pandas as pd

from pa_harq.types import CSV_HEADER, CsvRow
from shared.utils import log

FLOAT_FORMAT = "%.12g"


def rows_to_frame(rows: List[CsvRow]) -> pd.DataFrame:
    """
    Monta o DataFrame das linhas na ordem do cabeçalho fixo.

    A coluna `model` é acrescentada ao final quando alguma linha a define.
    """
    columns = list(CSV_HEADER)
    if any(row.model is not None for row in rows):
        columns.append("model")
    return pd.DataFrame([row.to_dict() for row in rows], columns=columns)


def _emit(text: str, output_path: Optional[str]) -> None:
    if output_path in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(output_path, "w", encoding="utf-8", newline="") as f:
        f.write(text)


def frame_to_csv(df: pd.DataFrame, output_path: Optional[str] = None) -> None:
    """
    Escreve um DataFrame em CSV.

    Args:
        df: Dados
        output_path: Caminho do arquivo (stdout se None ou "-")
    """
    text = df.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    _emit(text, output_path)
    if output_path not in (None, "-"):
        log(f"Exported {len(df)} rows to {output_path}")


def export_rows_to_csv(rows: List[CsvRow], output_path: Optional[str] = None) -> None:
    """
    Exporta linhas de varredura para CSV.

    Args:
        rows: Linhas em ordem determinística do eixo
        output_path: Caminho do arquivo (stdout se None ou "-")
    """
    frame_to_csv(rows_to_frame(rows), output_path)


def export_record_to_csv(record: Dict[str, Any], output_path: Optional[str] = None) -> None:
    """Exporta um único registro (ex.: resultado de otimização) como CSV de uma linha."""
    frame_to_csv(pd.DataFrame([record]), output_path)


def export_to_json(data: Dict[str, Any], output_path: Optional[str] = None) -> None:
    """
    Exporta um registro para JSON.

    Args:
        data: Registro serializável
        output_path: Caminho do arquivo (stdout se None ou "-")
    """
    _emit(json.dumps(data, indent=2, sort_keys=True, default=str) + "\n", output_path)
    if output_path not in (None, "-"):
        log(f"Exported data to {output_path}")
