"""
리포트 생성 모듈
포트레이트 영점 기록을 CSV와 SVG 산점도로 저장
"""
import csv
import logging
import os
from typing import Optional, Sequence

import matplotlib

matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402

from modules.portrait import PortraitRecord  # noqa: E402

CSV_HEADER = ['family', 'p', 'q', 'root_re', 'root_im', 'residual']
SVG_SIZE_INCHES = 8
SVG_DPI = 100


class ReportGenerator:
    """포트레이트 결과를 파일로 생성하는 클래스"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def write_csv(self, records: Sequence[PortraitRecord], path: str) -> str:
        """
        영점 기록을 CSV로 저장 (헤더 포함, LF 줄바꿈, 유효숫자 17자리)

        Args:
            records: 영점 기록
            path: 출력 파일 경로

        Returns:
            str: 생성된 파일 경로
        """
        try:
            self._ensure_parent(path)
            with open(path, 'w', encoding='utf-8', newline='') as f:
                writer = csv.writer(f, lineterminator='\n')
                writer.writerow(CSV_HEADER)
                for record in records:
                    writer.writerow(record.to_row())

            self.logger.info(f"CSV 저장 완료: {path} ({len(records)}행)")
            return path

        except OSError as e:
            self.logger.error(f"CSV 저장 실패: {e}")
            raise

    def write_svg(self, records: Sequence[PortraitRecord], path: str, title: Optional[str] = None) -> str:
        """
        영점 산점도를 SVG로 저장

        800×800 크기, 원점을 지나는 축과 단위원을 함께 그린다.
        같은 입력이면 같은 바이트가 나오도록 해시 솔트와 날짜 메타데이터를 고정한다.
        """
        try:
            self._ensure_parent(path)
            with plt.rc_context({'svg.hashsalt': 'vkp-portrait', 'svg.fonttype': 'none'}):
                fig, ax = plt.subplots(figsize=(SVG_SIZE_INCHES, SVG_SIZE_INCHES), dpi=SVG_DPI)
                ax.scatter(
                    [r.root.real for r in records],
                    [r.root.imag for r in records],
                    s=2, color='black', linewidths=0,
                )
                ax.add_patch(plt.Circle((0, 0), 1.0, fill=False, color='gray', linewidth=0.5))
                ax.axhline(0, color='gray', linewidth=0.5)
                ax.axvline(0, color='gray', linewidth=0.5)
                ax.set_aspect('equal', adjustable='datalim')
                if title:
                    ax.set_title(title)
                fig.savefig(path, format='svg', metadata={'Date': None})
                plt.close(fig)

            self.logger.info(f"SVG 저장 완료: {path}")
            return path

        except OSError as e:
            self.logger.error(f"SVG 저장 실패: {e}")
            raise

    def default_paths(self, output_dir: str, family: str, of: str = 'jones') -> tuple[str, str]:
        """출력 디렉토리 아래의 기본 CSV, SVG 경로"""
        name = self._sanitize_filename(f"portrait_{family}_{of}")
        return os.path.join(output_dir, f"{name}.csv"), os.path.join(output_dir, f"{name}.svg")

    @staticmethod
    def _ensure_parent(path: str) -> None:
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)

    def _sanitize_filename(self, filename: str) -> str:
        """파일명에서 사용할 수 없는 문자 제거"""
        invalid_chars = '<>:"/\\|?*'
        for char in invalid_chars:
            filename = filename.replace(char, '_')
        return filename[:50]


# 편의를 위한 함수
def generate_portrait_report(
    records: Sequence[PortraitRecord],
    csv_path: Optional[str] = None,
    svg_path: Optional[str] = None,
    title: Optional[str] = None
) -> dict:
    """
    포트레이트 CSV와 SVG를 만드는 편의 함수

    Returns:
        dict: {'csv': 경로 또는 None, 'svg': 경로 또는 None}
    """
    generator = ReportGenerator()
    return {
        'csv': generator.write_csv(records, csv_path) if csv_path else None,
        'svg': generator.write_svg(records, svg_path, title) if svg_path else None,
    }
