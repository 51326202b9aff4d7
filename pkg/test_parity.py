"""
Gauss 패리티, 패리티 브래킷, 노드 그래프 축약 테스트
"""
import sys
from pathlib import Path

# 프로젝트 루트를 Python 경로에 추가
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from modules.conway import diagram_from_text
from modules.diagram import VirtualDiagram, insert_virtual_r2, jones, kauffman_bracket
from modules.errors import ParityError, StateSumTooLargeError
from modules.families import catalog_diagram
from modules.laurent import LOOP_VALUE, ONE, A, d
from modules.parity import (
    EVEN, ODD, Certificate, NodalGraph, canonical_code, code_node_count, eval_flat, gauss_parity,
    nontriviality_certificate, parity_bracket, reduce_nodal,
)


def test_gauss_parity():
    """Kishino, KS, 삼엽 매듭의 교차점 패리티"""
    print("🔍 Gauss 패리티 테스트 중...")
    assert set(gauss_parity(catalog_diagram('kishino')).values()) == {ODD}
    assert len(gauss_parity(catalog_diagram('kishino'))) == 4

    ks = list(gauss_parity(catalog_diagram('KS')).values())
    assert ks.count(EVEN) == 1 and ks.count(ODD) == 4

    assert set(gauss_parity(diagram_from_text("3")).values()) == {EVEN}
    assert gauss_parity(VirtualDiagram.unknot()) == {}

    try:
        gauss_parity(diagram_from_text("2"))
        raise AssertionError("두 성분 링크의 패리티가 계산되었습니다")
    except ParityError as e:
        assert "knots only" in str(e)
    print("✅ Gauss 패리티 통과")


def test_nodal_graph_validation():
    """노드 그래프 입력 검증"""
    print("\n🧱 노드 그래프 검증 테스트 중...")
    bad_inputs = [
        (((1, 0), (2, 0)),),                    # 노드마다 한 번만 통과
        (((1, 0), (1, 2)),),                    # 같은 방향 쌍
        (((1, 0), (1, 1)), ()),                 # 빈 성분
    ]
    for components in bad_inputs:
        try:
            NodalGraph(components)
            raise AssertionError(f"잘못된 노드 그래프가 허용되었습니다: {components}")
        except ParityError:
            pass
    try:
        NodalGraph((), -1)
        raise AssertionError("음의 free_loops가 허용되었습니다")
    except ParityError:
        pass
    print("✅ 노드 그래프 검증 통과")


def test_reduce_nodal_bigon():
    """두 가닥이 나란히 지나는 노드 쌍 제거"""
    print("\n✂️  노드 R2 테스트 중...")
    # 두 노드의 ε가 서로 다른 평면 두각형
    planar = NodalGraph((((1, 0), (2, 0)), ((2, 3), (1, 1))))
    reduced = reduce_nodal(planar)
    assert reduced.components == () and reduced.free_loops == 2

    # ε가 같으면 Z-이동을 허용해야 지워짐
    twisted = NodalGraph((((1, 0), (2, 0)), ((2, 1), (1, 1))))
    assert reduce_nodal(twisted).node_count == 2
    assert reduce_nodal(twisted, allow_z=True).free_loops == 2

    # 남은 자유 고리는 원래 값에 더해짐
    assert reduce_nodal(NodalGraph(planar.components, 3)).free_loops == 5
    print("✅ 노드 R2 통과")


def test_canonical_code():
    """노드 번호, 회전, 역방향, 성분 순서에 불변"""
    print("\n🔑 정규 코드 테스트 중...")
    base = NodalGraph((((1, 0), (2, 0)), ((2, 1), (1, 1))))
    relabeled = NodalGraph((((9, 1), (7, 1)), ((7, 0), (9, 0))))
    rotated = NodalGraph((((2, 0), (1, 0)), ((1, 1), (2, 1))))
    reversed_first = NodalGraph((((2, 2), (1, 2)), ((2, 1), (1, 1))))
    code = canonical_code(base)
    for other in (relabeled, rotated, reversed_first):
        assert canonical_code(other) == code
    assert code_node_count(code) == 2
    assert '+' not in canonical_code(base, allow_z=True) and '-' not in canonical_code(base, allow_z=True)
    assert canonical_code(NodalGraph(base.components, 2)).endswith(" ; loops=2")
    assert base.canonical() == code
    print(f"✅ 정규 코드: {code}")


def test_unknot():
    """교차점 없는 매듭"""
    print("\n⭕ 자명한 매듭 테스트 중...")
    pb = parity_bracket(VirtualDiagram.unknot())
    assert pb.scalar == d and pb.nodal_terms == {}
    assert pb.normalized_scalar() == ONE
    assert nontriviality_certificate(pb) == Certificate.TRIVIAL_LIKE
    assert eval_flat(pb) == {'scalar_at_minus_1': -2, 'nodal_terms_at_minus_1': {}}
    assert eval_flat(pb, normalized=True)['scalar_at_minus_1'] == 1
    print("✅ 자명한 매듭 통과")


def test_kishino():
    """모든 교차점이 홀수: 노드 넷인 항 하나, Z-이동으로만 축약"""
    print("\n🪢 Kishino 매듭 테스트 중...")
    kishino = catalog_diagram('kishino')
    plain = parity_bracket(kishino, allow_z=False)
    assert plain.scalar.is_zero()
    assert len(plain.nodal_terms) == 1
    (code, coeff), = plain.nodal_terms.items()
    assert code_node_count(code) == 4 and coeff == ONE
    assert nontriviality_certificate(plain) == Certificate.NONTRIVIAL_NONCLASSICAL
    assert eval_flat(plain)['nodal_terms_at_minus_1'] == {code: 1}

    with_z = parity_bracket(kishino, allow_z=True)
    assert with_z.nodal_terms == {} and with_z.scalar == d
    assert nontriviality_certificate(with_z) == Certificate.TRIVIAL_LIKE
    print(f"✅ Kishino 노드 항: [{code}]")


def test_ks():
    """KS: Jones는 1이지만 Z-이동을 허용해도 노드 항이 남음"""
    print("\n🧩 KS 매듭 테스트 중...")
    ks = catalog_diagram('KS')
    assert jones(ks) == ONE

    with_z = parity_bracket(ks, allow_z=True)
    assert with_z.scalar == A ** -1 * d
    assert len(with_z.nodal_terms) == 1
    (code, coeff), = with_z.nodal_terms.items()
    assert coeff == A
    assert code_node_count(code) == 4 and code.count('|') == 1
    assert nontriviality_certificate(with_z) == Certificate.NOT_Z_EQUIVALENT

    plain = parity_bracket(ks, allow_z=False)
    assert plain.nodal_terms
    assert nontriviality_certificate(plain) == Certificate.NONTRIVIAL_NONCLASSICAL
    print("✅ KS 판정 통과")


def test_classical_knots():
    """고전 매듭은 노드 항이 없고 스칼라 = d·<K>"""
    print("\n🎀 고전 매듭 테스트 중...")
    for text in ["3", "1^5", "2 2"]:
        diagram = diagram_from_text(text)
        pb = parity_bracket(diagram)
        assert pb.nodal_terms == {}, text
        assert pb.scalar.substitute({'d': LOOP_VALUE}) == LOOP_VALUE * kauffman_bracket(diagram), text
        assert eval_flat(pb)['nodal_terms_at_minus_1'] == {}
    print("✅ 고전 매듭 통과")


def test_virtual_r2_invariance():
    """가상 R2를 넣어도 패리티 브래킷은 같음"""
    print("\n🔁 가상 R2 불변성 테스트 중...")
    for diagram in [catalog_diagram('kishino'), catalog_diagram('KS'), diagram_from_text("3")]:
        edges = diagram.edges()
        moved = insert_virtual_r2(diagram, edges[0], edges[len(edges) // 2])
        for allow_z in (False, True):
            assert parity_bracket(moved, allow_z) == parity_bracket(diagram, allow_z)
    print("✅ 가상 R2 불변성 통과")


def test_limits_and_json():
    """짝수 교차점 한도와 JSON 표현"""
    print("\n🚧 한도와 JSON 테스트 중...")
    try:
        parity_bracket(diagram_from_text("3"), state_limit=2)
        raise AssertionError("한도가 적용되지 않았습니다")
    except StateSumTooLargeError:
        pass
    data = parity_bracket(catalog_diagram('kishino')).to_json()
    assert data['allow_z'] is False and data['scalar'] == '0'
    assert data['nodal_terms'][0]['coefficient'] == '1'
    print("✅ 한도와 JSON 통과")


def main():
    """전체 테스트 실행"""
    print("=" * 60)
    print("🧪 패리티 브래킷 테스트")
    print("=" * 60)

    tests = [
        ("Gauss 패리티", test_gauss_parity),
        ("노드 그래프 검증", test_nodal_graph_validation),
        ("노드 R2", test_reduce_nodal_bigon),
        ("정규 코드", test_canonical_code),
        ("자명한 매듭", test_unknot),
        ("Kishino", test_kishino),
        ("KS", test_ks),
        ("고전 매듭", test_classical_knots),
        ("가상 R2 불변성", test_virtual_r2_invariance),
        ("한도와 JSON", test_limits_and_json),
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
