"""
Conway 표기 파서와 다이어그램 조립 테스트
"""
import random
import sys
from pathlib import Path

# 프로젝트 루트를 Python 경로에 추가
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from modules.conway import (
    VIRTUAL_LEAF, Integer, Product, Ramification, build_diagram, canonical, classical_leaf_total,
    diagram_from_text, leaves, negate, parse_conway, random_conway, to_text, virtual_leaf_total,
)
from modules.diagram import diagram_stats
from modules.errors import ConwayParseError


def test_parse_examples():
    """대표 표기의 AST"""
    print("🔍 파싱 테스트 중...")
    one = Integer(1)
    assert parse_conway("3") == Integer(3)
    assert parse_conway("(i,1^2)") == Ramification((VIRTUAL_LEAF, one, one))
    assert parse_conway("1,1,i,-1,i") == Ramification((one, one, VIRTUAL_LEAF, Integer(-1), VIRTUAL_LEAF))
    ks = parse_conway("(((1,(i,1),-1),-1),i,1)")
    inner = Ramification((one, Ramification((VIRTUAL_LEAF, one)), Integer(-1)))
    assert ks == Ramification((Ramification((inner, Integer(-1))), VIRTUAL_LEAF, one))
    assert parse_conway("(i,1)(1)") == Product((Ramification((VIRTUAL_LEAF, one)), one))
    assert parse_conway("(i,1) 1") == parse_conway("(i,1)(1)")
    assert parse_conway("1^3") == parse_conway("1,1,1")
    assert parse_conway("0") == Integer(0)
    print("✅ 파싱 통과")


def test_parse_errors():
    """잘못된 입력은 위치가 있는 ConwayParseError"""
    print("\n⚠️  파싱 오류 테스트 중...")
    cases = ["((", "", "(1,)", "1^0", "2a", "1i", "()", ",1", "1)"]
    for text in cases:
        try:
            parse_conway(text)
            raise AssertionError(f"{text!r} 이(가) 파싱되었습니다")
        except ConwayParseError as e:
            assert e.position >= 0
            assert isinstance(e, ValueError)
    print(f"✅ 잘못된 입력 {len(cases)}개 모두 거부")


def test_canonical_text():
    """정규 문자열은 다시 파싱해도 같은 AST"""
    print("\n📝 정규 문자열 테스트 중...")
    assert canonical("(i,1^2)(1^2)") == "(i,1,1) (1,1)"
    assert canonical("1^2") == "1,1"
    for text in ["(((1,(i,1),-1),-1),i,1)", "(i,1) 1,(i,-1) -1,(i,1)", "(1,i,-1) i (1,i,-1)", "1 2,3"]:
        expr = parse_conway(text)
        assert parse_conway(to_text(expr)) == expr, text
    print("✅ 정규 문자열 통과")


def test_leaf_helpers():
    """잎 순회, 개수, 부호 반전"""
    print("\n🍃 잎 도우미 테스트 중...")
    expr = parse_conway("(i,1^2) (-2)")
    assert [to_text(leaf) for leaf in leaves(expr)] == ['i', '1', '1', '-2']
    assert classical_leaf_total(expr) == 4
    assert virtual_leaf_total(expr) == 1
    assert negate(negate(expr)) == expr
    assert to_text(negate(parse_conway("1,i,-1"))) == "-1,i,1"
    print("✅ 잎 도우미 통과")


def test_build_diagram_examples():
    """조립한 다이어그램의 교차점 수와 성분 수"""
    print("\n🪢 다이어그램 조립 테스트 중...")
    trefoil = diagram_stats(diagram_from_text("3"))
    assert (trefoil.classical_count, trefoil.virtual_count, trefoil.components) == (3, 0, 1)
    hopf = diagram_stats(diagram_from_text("2"))
    assert (hopf.classical_count, hopf.components) == (2, 2)
    virtual_trefoil = diagram_stats(diagram_from_text("(i,1,1)"))
    assert (virtual_trefoil.classical_count, virtual_trefoil.virtual_count, virtual_trefoil.components) == (2, 1, 1)
    kink = diagram_stats(diagram_from_text("1"))
    assert (kink.classical_count, kink.components) == (1, 1)
    unknot = diagram_stats(diagram_from_text("0"))
    assert (unknot.classical_count, unknot.components) == (0, 1)
    print("✅ 다이어그램 조립 통과")


def test_random_leaf_counts():
    """무작위 식: 잎 수와 조립된 교차점 수가 같음"""
    print("\n🎲 무작위 조립 테스트 중...")
    rng = random.Random(20100101)
    for _ in range(40):
        expr = random_conway(rng, max_leaves=6)
        diagram = build_diagram(expr)
        assert len(diagram.classical()) == classical_leaf_total(expr), to_text(expr)
        assert len(diagram.virtual()) == virtual_leaf_total(expr), to_text(expr)
        assert parse_conway(to_text(expr)) == expr, to_text(expr)

    first = [to_text(random_conway(random.Random(7))) for _ in range(5)]
    second = [to_text(random_conway(random.Random(7))) for _ in range(5)]
    assert first == second
    print("✅ 무작위 조립 통과")


def main():
    """전체 테스트 실행"""
    print("=" * 60)
    print("🧪 Conway 표기 테스트")
    print("=" * 60)

    tests = [
        ("파싱", test_parse_examples),
        ("파싱 오류", test_parse_errors),
        ("정규 문자열", test_canonical_text),
        ("잎 도우미", test_leaf_helpers),
        ("다이어그램 조립", test_build_diagram_examples),
        ("무작위 조립", test_random_leaf_counts),
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
