"""
エラーハンドリングユーティリティ
ガード半径・収束失敗・設定エラー等を適切に処理
"""
import logging
import functools
from typing import Any, Callable

logger = logging.getLogger(__name__)


class UniformizationError(Exception):
    """計算全般のエラー"""

    def __init__(self, message: str, error_code: str = None, guard: str = None):
        self.message = message
        self.error_code = error_code
        self.guard = guard
        super().__init__(self.message)

    def get_user_friendly_message(self) -> str:
        """ユーザーにわかりやすいエラーメッセージを返す"""
        error_messages = {
            "near_lattice": "格子点に近すぎます。ガード半径 2^(−P/4) の外で評価してください。",
            "degenerate_lattice": "格子が退化しています（Im τ ≤ 0 または |q| ≥ 1）。",
            "branch_value": "分岐値の近傍です。級数チャートで評価してください。",
            "branch_cut": "主枝の切断線上の入力です。",
            "pole": "極での評価はできません。",
            "series_radius": "収束半径の外です。別のチャートを使用してください。",
            "newton": "Newton 反復が収束しませんでした。初期値を変えてください。",
            "pivot": "漸化式のピボットが0です。仮定した展開形を確認してください。",
            "branch_tracking": "x(α) の枝を追跡できません。経路を細かくしてください。",
        }

        if self.error_code:
            text = error_messages.get(str(self.error_code), self.message)
            return f"{text}（{self.guard}）" if self.guard else text
        return self.message


class DomainError(UniformizationError):
    """定義域外・ガード半径内の入力"""
    pass


class ConvergenceError(UniformizationError):
    """反復・級数の収束失敗"""
    pass


class ConfigurationError(Exception):
    """設定関連のエラー"""
    pass


class ValidationError(Exception):
    """バリデーションエラー"""
    pass


def safe_check(default_status: str = "fail", log_error: bool = True):
    """
    検証チェックを安全にラップするデコレータ

    DomainError は "skip"、それ以外の例外は default_status の記録に変換する。
    ラップされる関数は check 記録の dict を返すこと。

    Args:
        default_status: 例外時のステータス
        log_error: エラーをログに出力するか
    """
    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs) -> Any:
            try:
                return func(*args, **kwargs)
            except DomainError as e:
                if log_error:
                    logger.warning(f"{func.__name__} をスキップ: {e.get_user_friendly_message()}")
                return {"status": "skip", "detail": e.get_user_friendly_message()}
            except Exception as e:
                if log_error:
                    logger.error(f"{func.__name__} でエラー発生: {e}")
                return {"status": default_status, "detail": str(e)}
        return wrapper
    return decorator


def validate_required_fields(data: dict, required_fields: list[str]) -> list[str]:
    """
    必須フィールドのバリデーション

    Args:
        data: 検証するデータ
        required_fields: 必須フィールドのリスト

    Returns:
        list[str]: 欠けているフィールドのリスト
    """
    missing = []
    for field in required_fields:
        if field not in data or data[field] is None or data[field] == "":
            missing.append(field)
    return missing


def format_error_for_report(error: Exception) -> dict:
    """
    エラーをレポート表示用にフォーマット

    Args:
        error: 発生した例外

    Returns:
        dict: {"type": str, "message": str, "suggestion": str}
    """
    if isinstance(error, DomainError):
        return {
            "type": "domain_error",
            "message": error.get_user_friendly_message(),
            "suggestion": "評価点を変えるか、級数チャートを使用してください。",
        }
    elif isinstance(error, ConvergenceError):
        return {
            "type": "convergence_error",
            "message": error.get_user_friendly_message(),
            "suggestion": "精度 (--precision) か初期値を変えて再試行してください。",
        }
    elif isinstance(error, ConfigurationError):
        return {
            "type": "config_error",
            "message": str(error),
            "suggestion": ".envファイルまたは storage/run_config.json を確認してください。",
        }
    elif isinstance(error, ValidationError):
        return {
            "type": "validation_error",
            "message": str(error),
            "suggestion": "入力内容を確認してください。",
        }
    else:
        return {
            "type": "unknown_error",
            "message": str(error),
            "suggestion": "問題が続く場合は、ログを確認してください。",
        }


def log_check(check_id: str, residual: Any = None, status: str = None, error: Exception = None):
    """
    検証チェックをログに記録

    Args:
        check_id: チェックID
        residual: 残差
        status: pass / fail / skip
        error: エラー
    """
    if error:
        logger.error(f"[CHECK] {check_id} - ERROR: {error}")
    elif status == "fail":
        logger.warning(f"[CHECK] {check_id} - FAIL residual={residual}")
    elif status:
        logger.info(f"[CHECK] {check_id} - {status.upper()}")
    else:
        logger.debug(f"[CHECK] {check_id} - residual: {residual}")
