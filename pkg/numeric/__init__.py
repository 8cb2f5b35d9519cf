"""
数値カーネル（厳密体演算・多倍長複素数）
"""
from .cyclo import CycloQ, cyclo_arith, embed
from .precision import ToleranceConfig, workprec, current_tol, parse_complex, format_value

__all__ = [
    "CycloQ",
    "cyclo_arith",
    "embed",
    "ToleranceConfig",
    "workprec",
    "current_tol",
    "parse_complex",
    "format_value",
]
