"""
매듭 패밀리 모듈
이름 붙은 Conway 표기 패밀리의 상대 Tutte 다항식 닫힌 식과 재귀식,
패밀리 다이어그램 생성, 교차점 변경 가상화를 제공
"""
import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from config.catalog import catalog_entry, catalog_names
from modules.conway import (
    ConwayExpr, Integer, Product, Ramification, VIRTUAL_LEAF, Virtual,
    build_diagram, leaves, parse_conway, to_text,
)
from modules.diagram import VirtualDiagram, kauffman_bracket
from modules.errors import FamilyError
from modules.laurent import ONE, LaurentPolynomial, X, Y, geom_sum, x, y
from modules.tutte_graph import (
    graph_from_conway, match_unit, relative_tutte, tutte_to_bracket, tutte_to_jones,
)

logger = logging.getLogger(__name__)

DUAL_SWAP = (('x', 'y'), ('X', 'Y'))

# 닫힌 식이 있는 패밀리 → 매개변수 개수
FORMULA_FAMILIES: Dict[str, int] = {
    'p': 1,
    'i_p': 1,
    'ip_q': 2,
    'ip1q': 2,
    'ip1iq': 2,
    'p_i_q': 2,
}

# 다이어그램으로만 다루는 패밀리 → 매개변수 개수
DIAGRAM_FAMILIES: Dict[str, int] = {
    'p_i_negq': 2,
    'unit_jones': 2,
    'zfamily': 1,
}

FAMILY_IDS = tuple(FORMULA_FAMILIES) + tuple(DIAGRAM_FAMILIES) + ('candidate_knots',)


def _gy(n: int) -> LaurentPolynomial:
    return geom_sum(n, 'y', 'Y')


# ----------------------------------------------------------------------
# 닫힌 식
# ----------------------------------------------------------------------
def _closed_p(p: int) -> LaurentPolynomial:
    return geom_sum(p) * y + (Y - y) * x ** (p - 1)


def _closed_i_p(p: int) -> LaurentPolynomial:
    return x ** p + geom_sum(p) * y


def _closed_ip_q(p: int, q: int) -> LaurentPolynomial:
    # 마지막 항의 부호는 재귀식과 일치하도록 +x^q·Y^p
    gx, gy = geom_sum(q + 1), _gy(p + 1)
    return (gx * gy - gy * X ** q - gx * Y ** p + geom_sum(q) * y ** (p + 1)
            + X ** q * Y ** p + x ** q * Y ** p)


def printed_ip_q(p: int, q: int) -> LaurentPolynomial:
    """
    원문에 인쇄된 ip_q 닫힌 식 (미정의 n을 p로 읽음, 마지막 항 -x^q·Y^n)
    재귀식과 2·x^q·Y^p 만큼 어긋나며 자체 검사에서 비교용으로만 쓴다.
    """
    gx, gy = geom_sum(q + 1), _gy(p + 1)
    return (gx * gy - gy * X ** q - gx * Y ** p + geom_sum(q) * y ** (p + 1)
            + X ** q * Y ** p - x ** q * Y ** p)


def _closed_ip1q(p: int, q: int) -> LaurentPolynomial:
    return y * _closed_i_p(p + q) + x * _closed_i_p(p) * _closed_p(q)


def _closed_ip1iq(p: int, q: int) -> LaurentPolynomial:
    return y * _closed_p(p + q) + x * _closed_i_p(p) * _closed_i_p(q)


def _closed_p_i_q(p: int, q: int) -> LaurentPolynomial:
    g = geom_sum
    return (g(p) * (x + X) * x ** (q - 1) * y
            + g(q - p - 1) * x ** p * X ** (p + 1) * y
            + g(p - 2) * g(q) * x ** 2 * y ** 2
            + g(q) * (x + X) * X ** (p - 2) * y ** 2
            + x ** (p + q - 1) * Y)


_CLOSED: Dict[str, Callable[..., LaurentPolynomial]] = {
    'p': _closed_p,
    'i_p': _closed_i_p,
    'ip_q': _closed_ip_q,
    'ip1q': _closed_ip1q,
    'ip1iq': _closed_ip1iq,
    'p_i_q': _closed_p_i_q,
}


# ----------------------------------------------------------------------
# 재귀식 (양의 매개변수 전용)
# ----------------------------------------------------------------------
def _rec_p(p: int) -> LaurentPolynomial:
    if p == 1:
        return Y
    return y * X ** (p - 1) + x * _rec_p(p - 1)


def _rec_i_p(p: int) -> LaurentPolynomial:
    if p == 0:
        return ONE
    return y * X ** (p - 1) + x * _rec_i_p(p - 1)


def _rec_ip_q(p: int, q: int) -> LaurentPolynomial:
    """
    쌍대 그래프에서 T = y·X^(p-1)·T(Ḡ(1^q)) + x·T(p-1) 로 재귀한 뒤 x↔y, X↔Y로 되돌린다.
    p = 0이면 쌍대 그래프는 0-변과 평행한 q겹 다중 변.
    """
    dual_cycle = _rec_p(q).swap(DUAL_SWAP)
    value = _rec_i_p(q).swap(DUAL_SWAP)
    for k in range(1, p + 1):
        value = y * X ** (k - 1) * dual_cycle + x * value
    return value.swap(DUAL_SWAP)


def _rec_ip1q(p: int, q: int) -> LaurentPolynomial:
    return y * _rec_i_p(p + q) + x * _rec_i_p(p) * _rec_p(q)


def _rec_ip1iq(p: int, q: int) -> LaurentPolynomial:
    return y * _rec_p(p + q) + x * _rec_i_p(p) * _rec_i_p(q)


def _rec_p_i_q(p: int, q: int) -> LaurentPolynomial:
    # q = 0이면 세 번째 경로가 없어 길이 p 사이클이 남는다
    value = _rec_p(p)
    for k in range(1, q + 1):
        value = y * X ** (k - 1) * _rec_i_p(p) + x * value
    return value


_RECURSIVE: Dict[str, Callable[..., LaurentPolynomial]] = {
    'p': _rec_p,
    'i_p': _rec_i_p,
    'ip_q': _rec_ip_q,
    'ip1q': _rec_ip1q,
    'ip1iq': _rec_ip1iq,
    'p_i_q': _rec_p_i_q,
}


def _check_params(family: str, params: Sequence[int], table: Dict[str, int]) -> Tuple[int, ...]:
    if family not in table:
        raise FamilyError(f"unknown family: {family} (가능: {', '.join(table)})")
    if len(params) != table[family]:
        raise FamilyError(f"{family} 패밀리는 매개변수 {table[family]}개가 필요합니다 (받음: {len(params)}개)")
    if any(not isinstance(value, int) for value in params):
        raise FamilyError(f"매개변수는 정수여야 합니다: {list(params)}")
    return tuple(params)


def family_eval(family: str, *params: int) -> LaurentPolynomial:
    """
    닫힌 식으로 상대 Tutte 다항식 계산 (음의 매개변수 허용)

    Args:
        family: FORMULA_FAMILIES의 패밀리 이름
        params: 정수 매개변수 (p 또는 p, q)

    Returns:
        LaurentPolynomial: x, y, X, Y에 대한 로랑 다항식
    """
    values = _check_params(family, params, FORMULA_FAMILIES)
    return _CLOSED[family](*values)


def family_recursive(family: str, *params: int) -> LaurentPolynomial:
    """재귀식으로 상대 Tutte 다항식 계산 (매개변수는 1 이상)"""
    values = _check_params(family, params, FORMULA_FAMILIES)
    if any(value < 1 for value in values):
        raise FamilyError(f"재귀식은 양의 매개변수만 받습니다: {family} {list(values)}")
    return _RECURSIVE[family](*values)


# ----------------------------------------------------------------------
# 패밀리 다이어그램
# ----------------------------------------------------------------------
def _twist(n: int) -> str:
    """n개의 교차점 가로 꼬임: 1^n 또는 (-1)^n"""
    if n == 0:
        raise FamilyError("꼬임 수는 0이 될 수 없습니다")
    base = '1' if n > 0 else '(-1)'
    if abs(n) == 1:
        return base.strip('()')
    return f"{base}^{abs(n)}"


def family_text(family: str, *params) -> str:
    """패밀리 멤버의 Conway 표기 문자열"""
    if family == 'candidate_knots':
        if len(params) != 1 or not isinstance(params[0], str):
            raise FamilyError(f"candidate_knots는 이름 하나가 필요합니다 (가능: {', '.join(catalog_names())})")
        entry = catalog_entry(params[0])
        if 'conway' not in entry:
            raise FamilyError(f"{params[0]}에는 Conway 표기가 없습니다 (Gauss 코드 전용)")
        return entry['conway']

    table = {**FORMULA_FAMILIES, **DIAGRAM_FAMILIES}
    values = _check_params(family, params, table)
    if any(value < 1 for value in values):
        raise FamilyError(f"다이어그램 패밀리는 양의 매개변수만 받습니다: {family} {list(values)}")

    if family == 'p':
        return _twist(values[0])
    if family == 'i_p':
        return f"i,{_twist(values[0])}"
    p = values[0]
    if family == 'zfamily':
        inner = ','.join(['1'] * p + ['i'] + ['-1'] * p)
        return f"({inner}) i ({inner})"
    q = values[1]
    templates = {
        'ip_q': f"(i,{_twist(p)})({_twist(q)})",
        'ip1q': f"(i,{_twist(p)}) 1 ({_twist(q)})",
        'ip1iq': f"(i,{_twist(p)}) 1 (i,{_twist(q)})",
        'p_i_q': f"({_twist(p)}) i ({_twist(q)})",
        'p_i_negq': f"({_twist(p)}) i ({_twist(-q)})",
        'unit_jones': ','.join(['1'] * p + ['i'] + ['-1'] * q + ['i']),
    }
    return templates[family]


def family_diagram(family: str, *params) -> ConwayExpr:
    """패밀리 멤버의 Conway AST"""
    return parse_conway(family_text(family, *params))


def catalog_diagram(name: str) -> VirtualDiagram:
    """카탈로그 매듭의 다이어그램 (Conway 표기 또는 Gauss 코드에서)"""
    entry = catalog_entry(name)
    if 'conway' in entry:
        return build_diagram(parse_conway(entry['conway']))
    return VirtualDiagram.from_gauss_code(entry['gauss'])


def family_tutte(family: str, *params: int) -> LaurentPolynomial:
    """패밀리 멤버의 그래프를 만들어 엔진으로 계산한 축약 상대 Tutte 다항식"""
    return relative_tutte(graph_from_conway(family_diagram(family, *params)), reduced=True)


# ----------------------------------------------------------------------
# 단위 보정과 Jones
# ----------------------------------------------------------------------
_UNITS: Dict[str, Tuple[int, int]] = {}


def calibrate(family: str) -> Tuple[int, int]:
    """
    가장 작은 멤버에서 그래프 브래킷과 상태합 브래킷 사이의 단위 ±A^(3k) 결정

    Returns:
        (부호, k): 상태합 브래킷 = 부호·A^(3k)·그래프 브래킷
    """
    if family in _UNITS:
        return _UNITS[family]
    params = (1,) * FORMULA_FAMILIES[family]
    graph_bracket = tutte_to_bracket(family_eval(family, *params))
    oracle = kauffman_bracket(build_diagram(family_diagram(family, *params)))
    unit = match_unit(oracle, graph_bracket)
    if unit is None:
        raise FamilyError(f"{family} 패밀리의 그래프 브래킷과 상태합 브래킷이 단위 차이로 설명되지 않습니다")
    logger.info(f"{family} 단위 보정: 부호 {unit[0]}, k = {unit[1]}")
    _UNITS[family] = unit
    return unit


def family_jones(family: str, *params: int, diagram: Optional[VirtualDiagram] = None) -> Dict[str, LaurentPolynomial]:
    """
    닫힌 식으로 계산한 패밀리 멤버의 브래킷과 Jones 다항식

    writhe는 다이어그램에서 읽는다. p_i_negq는 p_i_q 닫힌 식에 -q를 넣어 계산한다.
    """
    formula_family, values = family, params
    if family == 'p_i_negq':
        formula_family, values = 'p_i_q', (params[0], -params[1])
    sign, k = calibrate(formula_family)
    if diagram is None:
        diagram = build_diagram(family_diagram(family, *params))

    tutte = family_eval(formula_family, *values)
    image = tutte_to_jones(tutte, diagram.writhe, unit=(sign, k))
    return {'tutte': tutte, 'bracket': image.bracket, 'jones': image.jones}


# ----------------------------------------------------------------------
# 교차점 변경 가상화
# ----------------------------------------------------------------------
def crossing_change_virtualization(expr: ConwayExpr, leaf_indices: Sequence[int]) -> ConwayExpr:
    """
    선택한 ±1 잎(왼쪽부터 0번)을 i,∓1,i 로 바꾼 식

    분기의 항이면 이웃 항으로 펼쳐 넣고, 그 밖의 자리에서는 분기 노드로 감싼다.
    """
    chosen = set(leaf_indices)
    counter = [0]

    def replacement(leaf: ConwayExpr) -> Optional[List[ConwayExpr]]:
        index = counter[0]
        counter[0] += 1
        if index not in chosen:
            return None
        if not isinstance(leaf, Integer) or abs(leaf.n) != 1:
            raise FamilyError(f"{index}번 잎은 ±1 교차점이 아닙니다: {to_text(leaf)}")
        return [VIRTUAL_LEAF, Integer(-leaf.n), VIRTUAL_LEAF]

    def walk(node: ConwayExpr) -> ConwayExpr:
        if isinstance(node, (Integer, Virtual)):
            swapped = replacement(node)
            return node if swapped is None else Ramification(tuple(swapped))
        if isinstance(node, Product):
            return Product(tuple(walk(factor) for factor in node.factors))
        parts: List[ConwayExpr] = []
        for part in node.parts:
            if isinstance(part, (Integer, Virtual)):
                swapped = replacement(part)
                parts.extend([part] if swapped is None else swapped)
            else:
                parts.append(walk(part))
        return Ramification(tuple(parts))

    total = sum(1 for _ in leaves(expr))
    bad = [index for index in chosen if not 0 <= index < total]
    if bad:
        raise FamilyError(f"잎 번호가 범위를 벗어났습니다: {sorted(bad)} (잎 {total}개)")
    result = walk(expr)
    logger.debug(f"교차점 변경 가상화: {to_text(expr)} → {to_text(result)}")
    return result
