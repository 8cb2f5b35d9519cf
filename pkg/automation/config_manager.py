"""
実行設定管理モジュール
精度・打ち切り次数・サンプル点のシード等を管理
"""
import json
import logging

import config
from numeric.precision import ToleranceConfig
from utils.error_handler import ConfigurationError, ValidationError, validate_required_fields

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("text", "json")


class RunConfig:
    """
    1回の実行の設定

    Args:
        precision_bits: 2進精度（64以上）
        truncation_order: 級数の打ち切り次数（8以上）
        residual_tol: 残差の許容値（None なら 2^(−P/2)）
        output: "text" または "json"
        suites: 実行するスイート名のリスト
        seed: サンプル点の乱数シード
        sample_count: サンプル点の数
        digit_tol: 定数照合の10進桁数
        workers: スイートを並列実行するプロセス数（1 なら逐次）
    """

    def __init__(
        self,
        precision_bits: int = None,
        truncation_order: int = None,
        residual_tol: float = None,
        output: str = None,
        suites: list = None,
        seed: int = None,
        sample_count: int = None,
        digit_tol: int = None,
        workers: int = None,
    ):
        self.precision_bits = precision_bits if precision_bits is not None else config.PRECISION_BITS
        self.truncation_order = truncation_order if truncation_order is not None else config.TRUNCATION_ORDER
        self.residual_tol = residual_tol if residual_tol is not None else config.RESIDUAL_TOL
        self.output = output or config.OUTPUT_FORMAT
        self.suites = list(suites) if suites else ["all"]
        self.seed = seed if seed is not None else config.SAMPLE_SEED
        self.sample_count = sample_count if sample_count is not None else config.SAMPLE_COUNT
        self.digit_tol = digit_tol if digit_tol is not None else config.DIGIT_TOL
        self.workers = workers if workers is not None else config.SUITE_WORKERS

    def validate(self):
        """
        Raises:
            ConfigurationError: 不正な値
        """
        if self.precision_bits < 64:
            raise ConfigurationError(f"precision_bits は64以上が必要です: {self.precision_bits}")
        if self.truncation_order < 8:
            raise ConfigurationError(f"truncation_order は8以上が必要です: {self.truncation_order}")
        if self.residual_tol is not None and self.residual_tol <= 0:
            raise ConfigurationError(f"residual_tol は正である必要があります: {self.residual_tol}")
        if self.output not in OUTPUT_FORMATS:
            raise ConfigurationError(f"未知の出力形式: {self.output}（{', '.join(OUTPUT_FORMATS)}）")
        if self.sample_count < 1:
            raise ConfigurationError(f"sample_count は1以上が必要です: {self.sample_count}")
        if self.workers < 1:
            raise ConfigurationError(f"workers は1以上が必要です: {self.workers}")
        return self

    @property
    def tolerance(self) -> ToleranceConfig:
        try:
            return ToleranceConfig(self.precision_bits, self.residual_tol, self.digit_tol)
        except ValidationError as e:
            raise ConfigurationError(str(e))

    def to_dict(self) -> dict:
        return {
            "precision_bits": self.precision_bits,
            "truncation_order": self.truncation_order,
            "residual_tol": self.residual_tol,
            "output": self.output,
            "suites": self.suites,
            "seed": self.seed,
            "sample_count": self.sample_count,
            "digit_tol": self.digit_tol,
            "workers": self.workers,
        }


class RunConfigManager:
    """
    storage/run_config.json の実行設定を管理するクラス

    機能:
    1. 既定のスイート・シード・サンプル数の保存
    2. 名前付きの基準点 τ の表
    3. config.py・保存値・コマンドライン引数のマージ
    """

    def __init__(self, config_file=None):
        self.config_file = config_file or config.RUN_CONFIG_FILE
        self.config = self._load_config()
        logger.info("RunConfigManager初期化完了")

    def _load_config(self) -> dict:
        """設定をファイルから読み込み"""
        if self.config_file.exists():
            try:
                with open(self.config_file, "r", encoding="utf-8") as f:
                    data = json.load(f)
                missing = validate_required_fields(data, ["defaults"])
                if not missing:
                    return data
                logger.warning(f"実行設定に必須項目がありません: {missing}")
            except Exception as e:
                logger.error(f"設定読み込みエラー: {e}")

        return {
            "defaults": {
                "suites": ["all"],
                "seed": config.SAMPLE_SEED,
                "sample_count": config.SAMPLE_COUNT,
            },
            "anchor_taus": {
                "square": "i",
                "cm": "sqrt2*i",
                "deep": "2i",
            },
        }

    def _save_config(self):
        """設定をファイルに保存"""
        try:
            self.config_file.parent.mkdir(parents=True, exist_ok=True)
            with open(self.config_file, "w", encoding="utf-8") as f:
                json.dump(self.config, f, ensure_ascii=False, indent=2)
            logger.info("実行設定を保存しました")
        except Exception as e:
            logger.error(f"設定保存エラー: {e}")

    # =========================================================================
    # 既定値
    # =========================================================================

    def get_defaults(self) -> dict:
        return self.config.get("defaults", {})

    def set_default(self, key: str, value):
        """既定値を1つ更新して保存"""
        self.config.setdefault("defaults", {})[key] = value
        self._save_config()
        logger.info(f"既定値を更新: {key}={value}")

    # =========================================================================
    # 基準点
    # =========================================================================

    def get_anchor_taus(self) -> dict:
        """
        Returns:
            dict: 名前 → τ の文字列（parse_complex で解釈できる形）
        """
        return self.config.get("anchor_taus", {})

    def resolve_tau(self, text: str) -> str:
        """基準点の名前なら τ の文字列に置き換える"""
        return self.get_anchor_taus().get(text, text)

    def add_anchor_tau(self, name: str, tau: str):
        self.config.setdefault("anchor_taus", {})[name] = tau
        self._save_config()

    # =========================================================================
    # マージ
    # =========================================================================

    def build_run_config(self, args=None) -> RunConfig:
        """
        config.py → run_config.json → コマンドライン引数の順に上書きして RunConfig を作る

        Raises:
            ConfigurationError: 検証に失敗
        """
        defaults = self.get_defaults()
        values = {
            "suites": defaults.get("suites"),
            "seed": defaults.get("seed"),
            "sample_count": defaults.get("sample_count"),
        }
        if args is not None:
            # series の --order は出力する級数の次数で、スイートの打ち切り次数ではない
            order = None if getattr(args, "command", None) == "series" else getattr(args, "order", None)
            overrides = {
                "precision_bits": getattr(args, "precision", None),
                "truncation_order": order,
                "residual_tol": getattr(args, "tol", None),
                "output": getattr(args, "format", None),
                "seed": getattr(args, "seed", None),
                "workers": getattr(args, "workers", None),
            }
            suite = getattr(args, "suite", None)
            if suite:
                overrides["suites"] = [suite]
            values.update({k: v for k, v in overrides.items() if v is not None})
        run_config = RunConfig(**values).validate()
        logger.debug(f"実行設定: {run_config.to_dict()}")
        return run_config
