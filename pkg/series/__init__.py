"""
形式級数モジュール
"""
from .laurent import LaurentSeries, Prefactor
from .charts import (
    CuspChart,
    CHARTS,
    ABELIAN_CHART,
    INFINITY_CHART,
    SingularityClass,
    classify_singularity,
    get_chart,
    poles_formula,
)
from .recurrence import solve_schwarz_series, y_series_from_x, curve_identity_defect
from .products import (
    EtaProductSpec,
    PRODUCT_SPECS,
    eta_product_series,
    theta_and_divisor_series,
    series_compose,
    series_derivative,
    series_integrate,
    series_revert,
    numeric_eval,
)
from .export import series_to_record, export_series

__all__ = [
    "LaurentSeries",
    "Prefactor",
    "CuspChart",
    "CHARTS",
    "ABELIAN_CHART",
    "INFINITY_CHART",
    "SingularityClass",
    "classify_singularity",
    "get_chart",
    "poles_formula",
    "solve_schwarz_series",
    "y_series_from_x",
    "curve_identity_defect",
    "EtaProductSpec",
    "PRODUCT_SPECS",
    "eta_product_series",
    "theta_and_divisor_series",
    "series_compose",
    "series_derivative",
    "series_integrate",
    "series_revert",
    "numeric_eval",
    "series_to_record",
    "export_series",
]
