"""
級数の JSON 出力
"""
import json
import logging
from fractions import Fraction
from pathlib import Path

from numeric.cyclo import CycloQ
from .laurent import LaurentSeries

logger = logging.getLogger(__name__)


def _coeff_to_json(c):
    if isinstance(c, CycloQ):
        if c.is_rational():
            return str(c.coords[0])
        return c.to_json()
    return str(Fraction(c))


def series_to_record(S: LaurentSeries, chart_name: str = None) -> dict:
    """
    {chart, ring, lead_exp, step, order, prefactor, coeffs[]} 形式の辞書

    係数は lead_exp から step 刻みで、整数・有理数は文字列、
    ℚ(i,√2) の元は [1, √2, i, i√2] 座標の文字列リスト
    """
    prefactor = None
    if S.prefactor is not None:
        prefactor = {
            "coeff": S.prefactor.coeff.to_json(),
            "phase16": S.prefactor.phase16,
            "text": str(S.prefactor),
        }
    return {
        "chart": chart_name,
        "ring": S.ring,
        "lead_exp": S.lead_exp,
        "step": S.step,
        "order": S.order,
        "prefactor": prefactor,
        "coeffs": [_coeff_to_json(c) for c in S.coeffs()],
    }


def export_series(S: LaurentSeries, chart_name: str = None, path: Path = None) -> str:
    """
    JSON 文字列を返し、path があればファイルにも保存

    Returns:
        str: JSON テキスト
    """
    text = json.dumps(series_to_record(S, chart_name), ensure_ascii=False, indent=2)
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"級数を保存しました: {path}")
    return text
