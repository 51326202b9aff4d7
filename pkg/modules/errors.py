"""
예외 정의 모듈
vkp 전체에서 사용하는 도메인 예외 계층
"""


class VkpError(Exception):
    """vkp 도메인 오류의 최상위 클래스"""


class ConwayParseError(VkpError, ValueError):
    """Conway 표기 파싱 실패 (위치 정보 포함)"""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (위치 {position})")
        self.position = position


class NotInvertibleError(VkpError, ArithmeticError):
    """음의 지수를 가질 수 없는 다항식에 음의 거듭제곱을 요청한 경우"""


class StateSumTooLargeError(VkpError):
    """상태합 크기가 설정된 한도를 초과한 경우"""


class DiagramError(VkpError, ValueError):
    """다이어그램 연산 오류 (존재하지 않는 교차점, 불완전한 상태 등)"""


class UnsupportedGraphError(VkpError):
    """그래프 엔진이 지원하지 않는 표현식 또는 라벨"""


class FamilyError(VkpError, ValueError):
    """패밀리 식별자 또는 매개변수 오류"""


class ParityError(VkpError, ValueError):
    """패리티 브래킷 계산 오류"""


class PortraitError(VkpError):
    """근 계산 및 포트레이트 생성 오류"""
