"""
検証スイートの実行とレポート
"""
from .config_manager import RunConfig, RunConfigManager
from .reports import ReportGenerator
from .suites import SUITE_NAMES, VerificationSuite, sample_taus

__all__ = [
    "RunConfig",
    "RunConfigManager",
    "ReportGenerator",
    "SUITE_NAMES",
    "VerificationSuite",
    "sample_taus",
]
