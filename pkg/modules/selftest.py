"""
자체 검사 모듈
닫힌 식, 재귀식, 상태합, 패리티, 포트레이트 결과를 서로 대조하는 검사 모음.
각 검사는 (통과 여부, 메시지)를 반환한다.
"""
import logging
import random
from typing import Callable, List, Tuple

from modules.conway import build_diagram, diagram_from_text, random_conway
from modules.diagram import (
    insert_classical_r2, insert_kink, insert_virtual_r2, jones, kauffman_bracket, mirror, virtualize,
)
from modules.families import (
    FORMULA_FAMILIES, catalog_diagram, family_diagram, family_eval, family_jones, family_recursive,
    printed_ip_q,
)
from modules.laurent import A, LOOP_VALUE, ONE, X, Y, x, y
from modules.parity import Certificate, code_node_count, gauss_parity, nontriviality_certificate, parity_bracket
from modules.portrait import jones_roots

logger = logging.getLogger(__name__)

Check = Tuple[bool, str]

# 닫힌 식이 그대로 재현해야 하는 값 (ip_q (1,1)과 p_i_q (-4,3)의 첫 항은 정정된 값)
GOLDEN = {
    ('p', 2): y * X + x * Y,
    ('i_p', 1): x + y,
    ('i_p', 2): x ** 2 + x * y + X * y,
    ('i_p', -2): x ** -2 - y * x ** -1 * X ** -2 - y * x ** -2 * X ** -1,
    ('ip_q', 1, 1): x * y + y ** 2 + x * Y,
    ('p_i_q', 4, -3): (
        -x ** 3 * y * X ** -3 - x ** 2 * y * X ** -2 - x * y * X ** -1
        + X * y * x ** -1 + X ** 2 * y * x ** -2 + X ** 3 * y * x ** -3
        - 3 * y ** 2 * x ** -1 - x ** 2 * y ** 2 * X ** -3 - 2 * x * y ** 2 * X ** -2
        - 3 * y ** 2 * X ** -1 - 2 * X * y ** 2 * x ** -2 - X ** 2 * y ** 2 * x ** -3 + Y
    ),
    ('p_i_q', -4, 3): (
        -x ** 2 * y * X ** -4 - x * y * X ** -3 - y * X ** -2 - y * x ** -1 * X ** -1
        + X * y * x ** -3 + X ** 2 * y * x ** -4 - 2 * y ** 2 * x ** -3 - x * y ** 2 * X ** -4
        - 2 * y ** 2 * X ** -3 - 3 * y ** 2 * x ** -1 * X ** -2 - 3 * y ** 2 * x ** -2 * X ** -1
        - X * y ** 2 * x ** -4 + Y * x ** -2
    ),
}


def check_golden_formulas(quick: bool = False) -> Check:
    failed = [key for key, expected in GOLDEN.items() if family_eval(key[0], *key[1:]) != expected]
    if failed:
        return False, f"닫힌 식 불일치: {failed}"
    return True, f"닫힌 식 {len(GOLDEN)}개 일치"


def check_recursion(quick: bool = False) -> Check:
    top = 4 if quick else 8
    mismatches = []
    for family, count in FORMULA_FAMILIES.items():
        grid = [(p,) for p in range(1, top + 1)] if count == 1 else [
            (p, q) for p in range(1, top + 1) for q in range(1, top + 1)
        ]
        for params in grid:
            if family_eval(family, *params) != family_recursive(family, *params):
                logger.warning(f"닫힌 식과 재귀식 불일치: {family} {params}")
                mismatches.append((family, params))
    # 인쇄된 ip_q 식은 재귀식과 어긋나야 하고 정정된 식은 일치해야 한다
    printed = sum(
        printed_ip_q(p, q) != family_recursive('ip_q', p, q)
        for p in range(1, top + 1) for q in range(1, top + 1)
    )
    if printed:
        logger.info(f"인쇄된 ip_q 닫힌 식 불일치 {printed}/{top * top}칸 (정정식 사용)")
    if mismatches:
        return False, f"재귀식 불일치 {len(mismatches)}건: {mismatches[:5]}"
    return True, f"재귀식 일치 ([1..{top}] 격자), 인쇄된 ip_q 식 불일치 {printed}/{top * top}칸"


def check_oracle(quick: bool = False) -> Check:
    top = 2 if quick else 3
    checked = 0
    for family, count in FORMULA_FAMILIES.items():
        grid = [(p,) for p in range(1, top + 2)] if count == 1 else [
            (p, q) for p in range(1, top + 1) for q in range(1, top + 1)
        ]
        for params in grid:
            diagram = build_diagram(family_diagram(family, *params))
            if family_jones(family, *params, diagram=diagram)['bracket'] != kauffman_bracket(diagram):
                return False, f"그래프 브래킷과 상태합 불일치: {family} {params}"
            checked += 1
    return True, f"상태합 대조 {checked}건 일치"


def check_unit_jones(quick: bool = False) -> Check:
    if jones(diagram_from_text("1,1,i,-1,i")) != ONE:
        return False, "1,1,i,-1,i 의 Jones가 1이 아닙니다"
    for p in range(2, 5 if quick else 7):
        if jones(build_diagram(family_diagram('unit_jones', p, p - 1))) != ONE:
            return False, f"unit_jones ({p}, {p - 1})의 Jones가 1이 아닙니다"
    for k in range(1, 3 if quick else 4):
        if jones(build_diagram(family_diagram('zfamily', k))) != ONE:
            return False, f"zfamily {k}의 Jones가 1이 아닙니다"
    return True, "단위 Jones 패밀리 확인"


def check_torus_coincidence(quick: bool = False) -> Check:
    for twist in (3, 5):
        expected = jones(diagram_from_text(f"1^{twist}"))
        for q in range(1, 2 if quick else 3):
            member = jones(build_diagram(family_diagram('unit_jones', q + twist, q)))
            if member != expected:
                return False, f"unit_jones ({q + twist}, {q})의 Jones가 1^{twist}와 다릅니다"
    return True, "토러스 매듭 Jones 일치"


def check_move_invariance(quick: bool = False) -> Check:
    rng = random.Random(20100101)
    trials = 10 if quick else 100
    done = 0
    while done < trials:
        diagram = build_diagram(random_conway(rng, max_leaves=5))
        classical = diagram.classical()
        edges = diagram.edges()
        if not classical or len(classical) > 6 or len(edges) < 2:
            continue
        base = kauffman_bracket(diagram)
        first, second = rng.sample(edges, 2)
        target = rng.choice(classical).id
        if kauffman_bracket(insert_classical_r2(diagram, first, second)) != base:
            return False, f"고전 R2 불변성 실패: {diagram.gauss_code()}"
        if kauffman_bracket(insert_virtual_r2(diagram, first, second)) != base:
            return False, f"가상 R2 불변성 실패: {diagram.gauss_code()}"
        if kauffman_bracket(virtualize(diagram, target)) != base:
            return False, f"가상화 불변성 실패: {diagram.gauss_code()}"
        if kauffman_bracket(insert_kink(diagram, first, 1)) != -(A ** 3) * base:
            return False, f"R1 꼬임 배수 실패: {diagram.gauss_code()}"
        if kauffman_bracket(mirror(diagram)) != base.invert_variable('A'):
            return False, f"거울상 대칭 실패: {diagram.gauss_code()}"
        done += 1
    return True, f"무작위 다이어그램 {trials}개에서 이동 불변성 확인"


def check_parity(quick: bool = False) -> Check:
    kishino = catalog_diagram('kishino')
    if set(gauss_parity(kishino).values()) != {'odd'}:
        return False, "Kishino 교차점이 모두 홀수가 아닙니다"
    plain = parity_bracket(kishino, allow_z=False)
    if not plain.scalar.is_zero() or len(plain.nodal_terms) != 1:
        return False, f"Kishino 패리티 브래킷 형태가 다릅니다: {plain.to_json()}"
    (code, coeff), = plain.nodal_terms.items()
    if code_node_count(code) != 4 or coeff != ONE:
        return False, f"Kishino 노드 항이 다릅니다: {code} → {coeff}"
    if parity_bracket(kishino, allow_z=True).nodal_terms:
        return False, "Kishino가 Z-이동으로 축약되지 않습니다"

    ks = catalog_diagram('KS')
    values = list(gauss_parity(ks).values())
    if values.count('even') != 1 or values.count('odd') != 4:
        return False, f"KS 패리티가 다릅니다: {values}"
    with_z = parity_bracket(ks, allow_z=True)
    if with_z.scalar.is_zero() or nontriviality_certificate(with_z) != Certificate.NOT_Z_EQUIVALENT:
        return False, f"KS 판정이 다릅니다: {with_z.to_json()}"
    if jones(ks) != ONE:
        return False, "KS의 Jones가 1이 아닙니다"

    trefoil = diagram_from_text("3")
    pb = parity_bracket(trefoil)
    if pb.nodal_terms or pb.scalar.substitute({'d': LOOP_VALUE}) != LOOP_VALUE * kauffman_bracket(trefoil):
        return False, "삼엽 매듭의 패리티 브래킷이 d·<K>와 다릅니다"
    return True, "패리티 판정 확인 (Kishino, KS, 삼엽 매듭)"


def check_portrait(quick: bool = False) -> Check:
    polynomial = family_jones('ip_q', 1, 2)['jones']
    closed = jones_roots(polynomial)
    for root in closed:
        if abs(polynomial.eval_complex({'t': root})) >= 1e-8:
            return False, f"|J(영점)|가 1e-8 이상입니다: {root}"
    oracle = jones_roots(jones(build_diagram(family_diagram('ip_q', 1, 2))))
    if len(closed) != len(oracle):
        return False, f"영점 개수가 다릅니다: {len(closed)} ≠ {len(oracle)}"
    for root in closed:
        if min(abs(root - other) for other in oracle) > 1e-8:
            return False, f"상태합 영점과 맞지 않는 영점: {root}"
    return True, f"(i,1)(1^2) 영점 {len(closed)}개 일치"


CHECKS: List[Tuple[str, Callable[[bool], Check]]] = [
    ('golden_formulas', check_golden_formulas),
    ('recursion', check_recursion),
    ('oracle', check_oracle),
    ('unit_jones', check_unit_jones),
    ('torus_coincidence', check_torus_coincidence),
    ('move_invariance', check_move_invariance),
    ('parity', check_parity),
    ('portrait', check_portrait),
]


def run_selftest(quick: bool = False) -> List[Tuple[str, bool, str]]:
    """모든 검사를 실행. 검사 중 예외가 나면 실패로 기록"""
    results = []
    for name, check in CHECKS:
        try:
            ok, message = check(quick)
        except Exception as e:
            logger.error(f"{name} 검사 중 오류: {e}")
            ok, message = False, f"오류: {e}"
        results.append((name, ok, message))
    return results
