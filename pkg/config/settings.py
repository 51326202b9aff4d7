"""
설정 관리 모듈
.env 파일 또는 환경 변수에서 계산 한도와 출력 설정값을 로드하고 관리
"""
import os
from dotenv import load_dotenv


class Settings:
    """애플리케이션 설정을 관리하는 클래스"""

    def __init__(self):
        # .env 파일 로드 (로컬 실행용)
        load_dotenv()

        # 상태합 한도 및 병렬 처리
        self.state_limit = int(os.getenv('VKP_STATE_LIMIT', '24'))
        self.workers = int(os.getenv('VKP_WORKERS', '1'))

        # 포트레이트 출력 및 근 계산
        self.output_dir = os.getenv('VKP_OUTPUT_DIR', './output')
        self.root_tolerance = float(os.getenv('VKP_ROOT_TOLERANCE', '1e-12'))
        self.dedup_tolerance = float(os.getenv('VKP_DEDUP_TOLERANCE', '1e-8'))
        self.max_iterations = int(os.getenv('VKP_MAX_ITERATIONS', '500'))
        self.random_seed = int(os.getenv('VKP_RANDOM_SEED', '20100101'))

        self.log_level = os.getenv('VKP_LOG_LEVEL', 'WARNING').upper()

    def validate(self) -> tuple[bool, str]:
        """
        설정값 유효성 검증

        Returns:
            tuple[bool, str]: (유효성 여부, 에러 메시지)
        """
        if self.state_limit < 1:
            return False, "VKP_STATE_LIMIT는 1 이상이어야 합니다."

        if self.workers < 1:
            return False, "VKP_WORKERS는 1 이상이어야 합니다."

        if self.max_iterations < 1:
            return False, "VKP_MAX_ITERATIONS는 1 이상이어야 합니다."

        if not (0 < self.root_tolerance < 1) or not (0 < self.dedup_tolerance < 1):
            return False, "허용 오차는 0과 1 사이여야 합니다."

        return True, ""

    def override(self, state_limit: int | None = None, workers: int | None = None) -> None:
        """
        CLI 옵션으로 한도 값을 덮어쓰기

        Args:
            state_limit: 상태합 교차점 한도
            workers: 워커 프로세스 수
        """
        if state_limit is not None:
            self.state_limit = state_limit
        if workers is not None:
            self.workers = workers


# 전역 설정 인스턴스
settings = Settings()
