"""
포트레이트 모듈
패밀리 Jones(또는 브래킷) 다항식의 복소 영점을 구하고 격자 전체의 영점 기록을 모음
"""
import cmath
import logging
import math
from dataclasses import dataclass
from multiprocessing import Pool
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config.settings import settings
from modules.errors import FamilyError, PortraitError
from modules.families import family_jones
from modules.laurent import T_SCALE, LaurentPolynomial

logger = logging.getLogger(__name__)

PORTRAIT_FAMILIES = ('ip_q', 'ip1q', 'ip1iq', 'p_i_q', 'p_i_negq')
POLYNOMIALS = ('jones', 'bracket')

# 변수 → 저장 지수 한 단위가 변수값의 몇 제곱근인지
_STEPS = {'t': T_SCALE, 'A': 1}

# 주가지 판정에 쓰는 u 값 비교 허용 오차
_BRANCH_TOLERANCE = 1e-6
RESIDUAL_LIMIT = 1e-8


@dataclass(frozen=True)
class PortraitRecord:
    """격자 한 칸의 영점 하나"""
    family: str
    p: int
    q: int
    root: complex
    residual: float

    def to_row(self) -> List[str]:
        return [
            self.family, str(self.p), str(self.q),
            f"{self.root.real:.17g}", f"{self.root.imag:.17g}", f"{self.residual:.17g}",
        ]


# ----------------------------------------------------------------------
# 영점 계산
# ----------------------------------------------------------------------

def aberth(
    coefficients: Sequence[complex],
    tolerance: Optional[float] = None,
    max_iterations: Optional[int] = None,
    seed: Optional[int] = None
) -> Tuple[np.ndarray, bool]:
    """
    Aberth 동시 반복으로 다항식의 모든 근

    Args:
        coefficients: 최고차항부터의 계수 (최고차항 ≠ 0)

    Returns:
        (근 배열, 수렴 여부)
    """
    tolerance = tolerance if tolerance is not None else settings.root_tolerance
    max_iterations = max_iterations if max_iterations is not None else settings.max_iterations
    rng = np.random.default_rng(settings.random_seed if seed is None else seed)

    c = np.asarray(coefficients, dtype=complex)
    c = c / c[0]
    n = len(c) - 1
    if n < 1:
        return np.zeros(0, dtype=complex), True
    dc = np.polyder(c)

    # 초기값: 계수 크기로 정한 반지름의 원 위에 무작위로 흔든 점들
    radius = max(abs(c[k]) ** (1.0 / k) for k in range(1, n + 1)) or 1.0
    angles = 2 * np.pi * np.arange(n) / n + rng.uniform(0, 2 * np.pi / n)
    z = radius * (1 + 0.01 * rng.standard_normal(n)) * np.exp(1j * angles)

    scale = np.abs(c)
    for iteration in range(max_iterations):
        values = np.polyval(c, z)
        bound = np.polyval(scale, np.abs(z))
        if np.all(np.abs(values) <= tolerance * bound):
            return z, True
        derivative = np.polyval(dc, z)
        derivative[derivative == 0] = tolerance
        ratio = values / derivative
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1)
        inverse = 1 / diff
        np.fill_diagonal(inverse, 0)
        step = ratio / (1 - ratio * inverse.sum(axis=1))
        z = z - step
        if np.all(np.abs(step) <= tolerance * np.maximum(1, np.abs(z))):
            return z, True

    logger.warning(f"Aberth 반복이 {max_iterations}회 안에 수렴하지 않았습니다 (차수 {n})")
    return z, False


def _principal_power(value: complex, g: int, step: int) -> complex:
    """eval_complex와 같은 주가지로 value^(g/step)"""
    return cmath.exp((g / step) * cmath.log(value))


def polynomial_roots(poly: LaurentPolynomial, variable: str = 't') -> List[Tuple[complex, float]]:
    """
    단변수 Laurent 다항식의 서로 다른 0이 아닌 영점과 잔차 |P(영점)|

    최저차 단항식으로 나누고 지수의 최대공약수 g로 u = w^g 치환한 다항식을 푼 뒤
    (w는 저장 지수 한 단위), 변수값 = w^step 으로 되돌린다. 분수 지수는 eval_complex와
    같은 주가지로 계산하므로 주가지에서 u로 돌아오는 후보만 영점으로 남긴다.

    Raises:
        PortraitError: 0 다항식이거나 다른 변수가 섞인 경우
    """
    if variable not in _STEPS:
        raise PortraitError(f"영점을 구할 수 없는 변수: {variable}")
    if poly.is_zero():
        raise PortraitError("0 다항식의 영점은 정의되지 않습니다")
    try:
        table = poly.univariate_coefficients(variable)
    except ValueError as e:
        raise PortraitError(str(e))

    low = min(table)
    shifted = {exp - low: coeff for exp, coeff in table.items()}
    g = 0
    for exp in shifted:
        g = math.gcd(g, exp)
    if g == 0:
        return []

    degree = max(shifted) // g
    c = np.zeros(degree + 1, dtype=complex)
    for exp, coeff in shifted.items():
        c[degree - exp // g] = coeff

    u_roots, _ = aberth(c)
    step = _STEPS[variable]
    unity = np.exp(2j * np.pi * np.arange(g) / g)

    found: List[Tuple[complex, float]] = []
    for u in u_roots:
        u = complex(u)
        if u == 0:
            continue
        base = u ** (1.0 / g)
        for w in base * unity:
            value = complex(w ** step)
            if value == 0:
                continue
            if abs(_principal_power(value, g, step) - u) > _BRANCH_TOLERANCE * max(1.0, abs(u)):
                continue
            if any(abs(value - other) <= settings.dedup_tolerance * max(1.0, abs(other)) for other, _ in found):
                continue
            found.append((value, abs(poly.eval_complex({variable: value}))))

    found.sort(key=lambda item: (round(math.atan2(item[0].imag, item[0].real), 12), abs(item[0])))
    return found


def jones_roots(poly: LaurentPolynomial) -> List[complex]:
    """t에 대한 Jones 다항식의 서로 다른 0이 아닌 영점"""
    return [root for root, _ in polynomial_roots(poly, 't')]


# ----------------------------------------------------------------------
# 격자
# ----------------------------------------------------------------------

def parse_range(text: str) -> List[int]:
    """'a:b' (양 끝 포함) 또는 'n' 형식의 정수 범위"""
    try:
        if ':' in text:
            start, stop = (int(part) for part in text.split(':', 1))
        else:
            start = stop = int(text)
    except ValueError:
        raise PortraitError(f"잘못된 범위: {text!r} ('a:b' 형식)")
    if stop < start:
        raise PortraitError(f"빈 범위: {text!r}")
    return list(range(start, stop + 1))


def _cell(payload) -> List[PortraitRecord]:
    family, p, q, of = payload
    values = family_jones(family, p, q)
    variable = 't' if of == 'jones' else 'A'
    records = [
        PortraitRecord(family, p, q, root, residual)
        for root, residual in polynomial_roots(values[of], variable)
    ]
    bad = [r for r in records if r.residual >= RESIDUAL_LIMIT]
    if bad:
        worst = max(r.residual for r in bad)
        logger.warning(f"{family} ({p}, {q}): 잔차가 {RESIDUAL_LIMIT:g} 이상인 영점 {len(bad)}개 (최대 {worst:.3g})")
    return records


def portrait_grid(
    family: str,
    p_values: Sequence[int],
    q_values: Sequence[int],
    of: str = 'jones',
    workers: Optional[int] = None
) -> List[PortraitRecord]:
    """
    (p, q) 격자 전체의 영점 기록

    Jones는 닫힌 식에서 얻고 상태합은 쓰지 않는다.
    결과는 p, q, 영점 편각 순으로 정렬된다.

    Raises:
        PortraitError: 지원하지 않는 패밀리, 빈 범위
    """
    if family not in PORTRAIT_FAMILIES:
        raise PortraitError(f"unsupported family id: {family} (가능: {', '.join(PORTRAIT_FAMILIES)})")
    if of not in POLYNOMIALS:
        raise PortraitError(f"알 수 없는 다항식 종류: {of}")
    if not p_values or not q_values:
        raise PortraitError("격자 범위가 비어 있습니다")

    payloads = [(family, p, q, of) for p in p_values for q in q_values]
    workers = workers or settings.workers
    logger.info(f"포트레이트 격자: {family}, {len(payloads)}칸, 워커 {workers}개")

    try:
        if workers > 1 and len(payloads) > 1:
            with Pool(workers) as pool:
                cells = pool.map(_cell, payloads)
        else:
            cells = []
            for index, payload in enumerate(payloads, 1):
                cells.append(_cell(payload))
                if index % 50 == 0:
                    logger.info(f"포트레이트 진행: {index}/{len(payloads)}")
    except FamilyError as e:
        raise PortraitError(f"패밀리 계산 실패: {e}")

    return [record for cell in cells for record in cell]


def grid_summary(records: Sequence[PortraitRecord]) -> Dict:
    cells = {(r.p, r.q) for r in records}
    return {
        'records': len(records),
        'cells_with_roots': len(cells),
        'max_residual': max((r.residual for r in records), default=0.0),
        'over_residual_limit': sum(1 for r in records if r.residual >= RESIDUAL_LIMIT),
    }
