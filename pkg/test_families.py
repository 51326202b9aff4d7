"""
매듭 패밀리 닫힌 식, 재귀식, 패밀리 다이어그램 테스트
"""
import sys
from pathlib import Path

# 프로젝트 루트를 Python 경로에 추가
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from modules.conway import build_diagram, diagram_from_text, parse_conway, to_text
from modules.diagram import jones, kauffman_bracket
from modules.errors import FamilyError
from modules.families import (
    FORMULA_FAMILIES, calibrate, catalog_diagram, crossing_change_virtualization, family_diagram, family_eval,
    family_jones, family_recursive, family_text, family_tutte, printed_ip_q,
)
from modules.laurent import ONE, X, Y, x, y
from modules.selftest import GOLDEN
from modules.tutte_graph import match_unit


def test_golden_formulas():
    """닫힌 식이 알려진 값을 그대로 재현"""
    print("🔍 닫힌 식 테스트 중...")
    assert family_eval('p', 2) == y * X + x * Y
    assert family_eval('i_p', 1) == x + y
    assert family_eval('i_p', 2) == x ** 2 + x * y + X * y
    assert family_eval('i_p', -2) == x ** -2 - y * x ** -1 * X ** -2 - y * x ** -2 * X ** -1
    for key, expected in GOLDEN.items():
        assert family_eval(key[0], *key[1:]) == expected, key
    print(f"✅ 닫힌 식 {len(GOLDEN)}개 일치")


def test_small_member_errata():
    """(i,1)(1)의 값은 재귀식과 그래프 엔진이 함께 정한다"""
    print("\n📌 정정값 테스트 중...")
    expected = x * y + y ** 2 + x * Y
    assert family_eval('ip_q', 1, 1) == expected
    assert family_recursive('ip_q', 1, 1) == expected
    assert family_tutte('ip_q', 1, 1) == expected
    assert family_eval('ip_q', 1, 1) != x * y + x ** 2 * y + x ** 3
    print("✅ 정정값 통과")


def test_recursion_matches_closed_form():
    """[1..8] 격자에서 재귀식 = 닫힌 식"""
    print("\n🔁 재귀식 대조 테스트 중...")
    checked = 0
    for family, count in FORMULA_FAMILIES.items():
        grid = [(p,) for p in range(1, 9)] if count == 1 else [(p, q) for p in range(1, 9) for q in range(1, 9)]
        for params in grid:
            assert family_eval(family, *params) == family_recursive(family, *params), (family, params)
            checked += 1
    print(f"✅ {checked}개 멤버 일치")


def test_printed_ip_q_form():
    """인쇄된 ip_q 식(n=p)은 모든 칸에서 2·x^q·Y^p 만큼 어긋남"""
    print("\n🖨️  인쇄된 ip_q 식 테스트 중...")
    for p in range(1, 9):
        for q in range(1, 9):
            reference = family_recursive('ip_q', p, q)
            assert printed_ip_q(p, q) != reference, (p, q)
            assert reference - printed_ip_q(p, q) == 2 * x ** q * Y ** p, (p, q)
            assert family_eval('ip_q', p, q) == reference, (p, q)
    print("✅ 64칸 모두 인쇄된 식 불일치, 정정식 일치")


def test_recursion_examples():
    """재귀 관계식의 작은 예"""
    print("\n🧮 재귀 관계 테스트 중...")
    assert family_recursive('i_p', 2) == x ** 2 + x * y + X * y
    expected = y * family_eval('i_p', 2) + x * family_eval('i_p', 1) * family_eval('p', 1)
    assert family_recursive('ip1q', 1, 1) == expected
    assert family_eval('p', 1) == Y
    print("✅ 재귀 관계 통과")


def test_engine_matches_closed_form():
    """그래프 엔진 값 = 닫힌 식 (0-변이 하나 이하인 패밀리)"""
    print("\n🕸️  그래프 엔진 대조 테스트 중...")
    for p in range(1, 5):
        assert family_tutte('i_p', p) == family_eval('i_p', p), p
    for p in range(2, 5):
        assert family_tutte('p', p) == family_eval('p', p), p
    for p, q in [(1, 2), (2, 1), (2, 2)]:
        assert family_tutte('ip_q', p, q) == family_eval('ip_q', p, q), (p, q)
    print("✅ 그래프 엔진 대조 통과")


def test_family_text():
    """패밀리 멤버의 Conway 표기"""
    print("\n📝 패밀리 표기 테스트 중...")
    assert family_text('unit_jones', 2, 1) == "1,1,i,-1,i"
    assert family_text('zfamily', 1) == "(1,i,-1) i (1,i,-1)"
    assert family_text('candidate_knots', 'KS') == "(((1,(i,1),-1),-1),i,1)"
    assert family_text('ip_q', 1, 2) == "(i,1)(1^2)"
    assert family_text('p_i_negq', 2, 3) == "(1^2) i ((-1)^3)"
    assert to_text(family_diagram('p', 3)) == "1,1,1"

    for bad_call in [
        lambda: family_eval('nope', 1),
        lambda: family_eval('p', 1, 2),
        lambda: family_recursive('p', 0),
        lambda: family_text('ip_q', 0, 1),
        lambda: family_text('candidate_knots', 'kishino'),
    ]:
        try:
            bad_call()
            raise AssertionError("잘못된 패밀리 호출이 허용되었습니다")
        except FamilyError:
            pass
    print("✅ 패밀리 표기 통과")


def test_family_jones_matches_state_sum():
    """보정된 닫힌 식 브래킷과 Jones = 상태합"""
    print("\n⚖️  보정 Jones 테스트 중...")
    for family, params in [('p', (3,)), ('i_p', (2,)), ('ip_q', (1, 2)), ('ip1q', (1, 1)),
                           ('ip1iq', (1, 2)), ('p_i_q', (2, 2))]:
        diagram = build_diagram(family_diagram(family, *params))
        values = family_jones(family, *params, diagram=diagram)
        assert values['bracket'] == kauffman_bracket(diagram), (family, params)
        assert values['jones'] == jones(diagram), (family, params)
        assert values['tutte'] == family_eval(family, *params)

    sign, k = calibrate('ip_q')
    assert sign in (1, -1) and isinstance(k, int)

    negq = family_jones('p_i_negq', 2, 2)
    oracle = kauffman_bracket(build_diagram(family_diagram('p_i_negq', 2, 2)))
    assert match_unit(oracle, negq['bracket']) is not None
    print("✅ 보정 Jones 통과")


def test_unit_jones_families():
    """Jones 다항식이 1인 패밀리"""
    print("\n1️⃣  단위 Jones 테스트 중...")
    assert jones(diagram_from_text("1,1,i,-1,i")) == ONE
    for p in range(2, 5):
        assert jones(build_diagram(family_diagram('unit_jones', p, p - 1))) == ONE, p
    for k in range(1, 3):
        assert jones(build_diagram(family_diagram('zfamily', k))) == ONE, k
    # 카탈로그의 후보 매듭도 Jones 다항식이 1
    for name in ('KS', 'S7', 'fig10_knot'):
        assert jones(catalog_diagram(name)) == ONE, name
    print("✅ 단위 Jones 통과")


def test_torus_coincidence():
    """p - q가 홀수이면 토러스 매듭과 같은 Jones"""
    print("\n🍩 토러스 일치 테스트 중...")
    for twist in (3, 5):
        expected = jones(diagram_from_text(f"1^{twist}"))
        assert jones(build_diagram(family_diagram('unit_jones', twist + 1, 1))) == expected, twist
    print("✅ 토러스 일치 통과")


def test_crossing_change_virtualization():
    """±1 잎을 i,∓1,i 로 바꾸기"""
    print("\n🔀 교차점 변경 가상화 테스트 중...")
    trefoil = parse_conway("1,1,1")
    changed = crossing_change_virtualization(trefoil, [2])
    assert to_text(changed) == "1,1,i,-1,i"
    assert jones(build_diagram(changed)) == ONE

    product_expr = crossing_change_virtualization(parse_conway("1 1"), [0])
    assert to_text(product_expr) == "(i,-1,i) 1"

    for expr, indices in [(trefoil, [3]), (parse_conway("1,i,1"), [1]), (parse_conway("3"), [0])]:
        try:
            crossing_change_virtualization(expr, indices)
            raise AssertionError(f"{to_text(expr)} {indices} 가 허용되었습니다")
        except FamilyError:
            pass
    print("✅ 교차점 변경 가상화 통과")


def main():
    """전체 테스트 실행"""
    print("=" * 60)
    print("🧪 매듭 패밀리 테스트")
    print("=" * 60)

    tests = [
        ("닫힌 식", test_golden_formulas),
        ("정정값", test_small_member_errata),
        ("재귀식 대조", test_recursion_matches_closed_form),
        ("인쇄된 ip_q 식", test_printed_ip_q_form),
        ("재귀 관계", test_recursion_examples),
        ("그래프 엔진 대조", test_engine_matches_closed_form),
        ("패밀리 표기", test_family_text),
        ("보정 Jones", test_family_jones_matches_state_sum),
        ("단위 Jones", test_unit_jones_families),
        ("토러스 일치", test_torus_coincidence),
        ("교차점 변경 가상화", test_crossing_change_virtualization),
    ]

    passed = 0
    for test_name, test_func in tests:
        try:
            test_func()
            passed += 1
        except AssertionError as e:
            print(f"❌ {test_name} 테스트 실패: {e}")
        except Exception as e:
            print(f"❌ {test_name} 테스트 중 예외 발생: {e}")

    print("\n" + "=" * 60)
    print(f"🎯 테스트 결과: {passed}/{len(tests)} 통과")
    print("=" * 60)
    return passed == len(tests)


if __name__ == "__main__":
    sys.exit(0 if main() else 1)
