"""
Burnside Uniformizer - 設定ファイル
"""
import os
from pathlib import Path
from dotenv import load_dotenv

# .envファイルを読み込み
load_dotenv()

# ベースディレクトリ
BASE_DIR = Path(__file__).parent

# =============================================================================
# 精度設定
# =============================================================================
# 2進精度（ビット）- 30桁の定数照合には110ビット以上が必要
PRECISION_BITS = int(os.getenv("PRECISION_BITS", "256"))

# 残差の許容値（空なら 2^(−P/2)）
RESIDUAL_TOL = float(os.getenv("RESIDUAL_TOL")) if os.getenv("RESIDUAL_TOL") else None

# 定数照合の10進桁数
DIGIT_TOL = int(os.getenv("DIGIT_TOL", "30"))

# Newton 法の最大反復回数
NEWTON_MAX_ITER = int(os.getenv("NEWTON_MAX_ITER", "80"))

FINITE_DIFFERENCE = {
    # 差分ステップ h = 2^(−P/step_divisor)
    "step_divisor": int(os.getenv("FD_STEP_DIVISOR", "6")),
    # 中心差分の節点数（9 点で1・2階は8次精度）
    "nodes": 9,
}

# =============================================================================
# 級数設定
# =============================================================================
# 打ち切り次数（チャートのステップ単位）
TRUNCATION_ORDER = int(os.getenv("TRUNCATION_ORDER", "200"))

# 数値評価で許す |q| の上限
SERIES_EVAL_GUARD = float(os.getenv("SERIES_EVAL_GUARD", "0.5"))

SERIES_DEFAULTS = {
    # cmd_series の既定次数（チャートのステップ単位）
    "order": 64,
    # cmd_series で許す最大次数
    "max_order": 2000,
    # 整数性チェックの次数
    "integrality_order": 200,
}

# =============================================================================
# 検証スイート設定
# =============================================================================
# サンプル点の乱数シード
SAMPLE_SEED = int(os.getenv("SAMPLE_SEED", "20240601"))

# 1スイートあたりのサンプル数
SAMPLE_COUNT = int(os.getenv("SAMPLE_COUNT", "20"))

# サンプル領域 {|Re τ| ≤ re_max, im_min ≤ Im τ ≤ im_max}
SAMPLE_REGION = {
    "re_max": 2.0,
    "im_min": 0.5,
    "im_max": 4.0,
}

# スイートを並列実行するプロセス数（1 なら逐次）
SUITE_WORKERS = int(os.getenv("SUITE_WORKERS", "1"))

# 分岐値の逆像まわりのガード半径（τ 平面）
TAU_GUARD_RADIUS = float(os.getenv("TAU_GUARD_RADIUS", "1e-3"))

# 出力形式（text / json）
OUTPUT_FORMAT = os.getenv("OUTPUT_FORMAT", "text")

# =============================================================================
# ストレージ設定
# =============================================================================
STORAGE_DIR = BASE_DIR / "storage"
REPORT_DIR = STORAGE_DIR / "reports"
RUN_CONFIG_FILE = STORAGE_DIR / "run_config.json"

# =============================================================================
# ログ設定
# =============================================================================
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
