"""
レポート生成モジュール
検証結果の表・JSON・CSV 出力
"""
import json
import logging
from datetime import datetime
from pathlib import Path

import pandas as pd

import config

logger = logging.getLogger(__name__)

COLUMNS = ["id", "anchor", "status", "expected", "computed", "residual", "ms"]


class ReportGenerator:
    """
    検証レポートを生成するクラス

    機能:
    1. チェック記録の DataFrame 化
    2. テキスト表とサマリー
    3. JSON 出力
    4. CSV 保存（storage/reports/<suite>_<timestamp>.csv）
    """

    def __init__(self, report: dict, report_dir: Path = None):
        self.report = report
        self.report_dir = Path(report_dir or config.REPORT_DIR)
        self.df = self._to_frame(report.get("checks", []))
        logger.info("ReportGenerator初期化完了")

    @staticmethod
    def _to_frame(checks: list) -> pd.DataFrame:
        df = pd.DataFrame(checks)
        for column in COLUMNS:
            if column not in df.columns:
                df[column] = None
        return df[COLUMNS + [c for c in df.columns if c not in COLUMNS]]

    # =========================================================================
    # 集計
    # =========================================================================

    def summary(self) -> dict:
        """
        Returns:
            dict: {"total", "pass", "fail", "skip", "ms"}
        """
        counts = self.df["status"].value_counts()
        return {
            "total": int(len(self.df)),
            "pass": int(counts.get("pass", 0)),
            "fail": int(counts.get("fail", 0)),
            "skip": int(counts.get("skip", 0)),
            "ms": float(self.df["ms"].fillna(0).sum()),
        }

    def failures(self) -> pd.DataFrame:
        return self.df[self.df["status"] == "fail"]

    def by_anchor(self) -> pd.DataFrame:
        """操作ごとの件数"""
        if self.df.empty:
            return pd.DataFrame(columns=["pass", "fail", "skip"])
        table = self.df.pivot_table(index="anchor", columns="status", values="id", aggfunc="count", fill_value=0)
        for status in ("pass", "fail", "skip"):
            if status not in table.columns:
                table[status] = 0
        return table[["pass", "fail", "skip"]]

    @property
    def passed(self) -> bool:
        """skip 以外がすべて pass"""
        return self.summary()["fail"] == 0

    # =========================================================================
    # 出力
    # =========================================================================

    def to_text(self) -> str:
        """テキスト表"""
        s = self.summary()
        lines = [
            f"スイート: {self.report.get('suite')}",
            f"合計 {s['total']}件 / ✅ pass {s['pass']} / ❌ fail {s['fail']} / ⚠️ skip {s['skip']}"
            f" / {s['ms'] / 1000:.1f} 秒",
            "",
        ]
        if not self.df.empty:
            lines.append(self.df[["id", "status", "residual", "ms"]].to_string(index=False))
        failed = self.failures()
        if not failed.empty:
            lines.append("")
            lines.append("失敗したチェック:")
            for _, row in failed.iterrows():
                lines.append(f"  {row['id']} ({row['anchor']})")
                lines.append(f"    期待値: {row['expected']}")
                lines.append(f"    計算値: {row['computed']}")
                if isinstance(row.get("detail"), str):
                    lines.append(f"    詳細: {row['detail']}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(self.report, ensure_ascii=False, indent=2, default=str)

    def save_csv(self) -> Path:
        """
        CSV を保存

        Returns:
            Path: 保存先
        """
        self.report_dir.mkdir(parents=True, exist_ok=True)
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        path = self.report_dir / f"{self.report.get('suite', 'report')}_{timestamp}.csv"
        self.df.to_csv(path, index=False, encoding="utf-8")
        logger.info(f"レポートを保存しました: {path}")
        return path
