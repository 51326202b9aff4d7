"""
라벨 그래프와 상대 Tutte 엔진 테스트
"""
import random
import sys
from pathlib import Path

# 프로젝트 루트를 Python 경로에 추가
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

import networkx as nx

from modules.conway import build_diagram, diagram_from_text, parse_conway, random_conway, to_text
from modules.diagram import kauffman_bracket
from modules.errors import UnsupportedGraphError
from modules.laurent import A, JONES_MAP, ONE, X, Y, d, x, y
from modules.tutte_graph import (
    LabeledGraph, canonical_key, graph_bracket, graph_from_conway, match_unit, reduce_graph,
    relative_tutte, tutte_to_bracket, tutte_to_jones,
)


def test_small_graphs():
    """다리, 루프, 2-사이클, 3-사이클"""
    print("🔍 작은 그래프 테스트 중...")
    assert relative_tutte(LabeledGraph.from_edges([(0, 1, '+')])) == X
    assert relative_tutte(LabeledGraph.from_edges([(0, 0, '+')])) == Y
    assert relative_tutte(LabeledGraph.from_edges([(0, 1, '+'), (0, 1, '+')])) == y * X + x * Y
    assert relative_tutte(LabeledGraph.from_edges([(0, 1, '+'), (0, 1, '0')])) == x + y
    triangle = LabeledGraph.from_edges([(0, 1, '+'), (1, 2, '+'), (2, 0, '0')])
    assert relative_tutte(triangle) == x ** 2 + x * y + X * y
    assert relative_tutte(LabeledGraph.from_edges([], vertices=[0, 1])) == d
    print("✅ 작은 그래프 통과")


def test_graph_from_conway():
    """Conway 표기 → 라벨 그래프"""
    print("\n🕸️  그래프 생성 테스트 중...")
    cycle = graph_from_conway("(1^3)")
    assert (cycle.vertex_count, dict(cycle.label_counts())) == (3, {'+': 3})
    assert all(degree == 2 for _, degree in cycle.graph.degree())

    virtual_cycle = graph_from_conway("(i,1^2)")
    assert (virtual_cycle.vertex_count, dict(virtual_cycle.label_counts())) == (3, {'+': 2, '0': 1})

    figure = graph_from_conway(parse_conway("(i,1^2)(1^2)"))
    assert figure.label_counts()['0'] == 1 and figure.label_counts()['+'] == 4
    assert nx.is_connected(figure.graph)

    assert graph_from_conway("(1,-1)").label_counts()['-'] == 1
    try:
        LabeledGraph.from_edges([(0, 1, 'x')])
        raise AssertionError("잘못된 라벨이 허용되었습니다")
    except UnsupportedGraphError:
        pass
    print("✅ 그래프 생성 통과")


def test_reductions():
    """평행한 0-변 쌍, 이웃한 0-변, 고정점"""
    print("\n✂️  그래프 축약 테스트 중...")
    pair = LabeledGraph.from_edges([(0, 1, '0'), (0, 1, '0')])
    reduced, steps = reduce_graph(pair)
    assert reduced.edge_count == 0 and steps == ['virtual_r2']
    assert reduced.vertex_count == 2
    assert relative_tutte(pair) == relative_tutte(pair, reduced=True) == d

    already = graph_from_conway("(i,1^2)")
    reduced, steps = reduce_graph(already)
    assert steps == [] and reduced.edge_list() == already.edge_list()

    series = graph_from_conway("(i,i,1^2)")
    reduced, steps = reduce_graph(series)
    assert dict(reduced.label_counts()) == {'+': 2} and reduced.vertex_count == 2
    assert steps == ['virtual_r2']

    # 평행한 (0, 0)과 + 한 개: 축약하면 다리 하나
    mixed = LabeledGraph.from_edges([(0, 1, '0'), (0, 1, '0'), (0, 1, '+')])
    unreduced = relative_tutte(mixed)
    assert unreduced == x + y * d
    assert relative_tutte(mixed, reduced=True) == X
    assert tutte_to_bracket(unreduced) == tutte_to_bracket(X) == -(A ** -3)
    print("✅ 그래프 축약 통과")


def test_negative_edges():
    """'-' 변은 축약 모드에서만"""
    print("\n➖ 음의 변 테스트 중...")
    graph = graph_from_conway("(1,-1)")
    try:
        relative_tutte(graph)
        raise AssertionError("'-' 변이 축약 없이 계산되었습니다")
    except UnsupportedGraphError as e:
        assert "graph construction unsupported" in str(e)
    # 1,-1 의 닫기는 두 성분 자명 링크
    assert relative_tutte(graph, reduced=True) == d
    oracle = kauffman_bracket(build_diagram(parse_conway("1,-1")))
    assert match_unit(oracle, tutte_to_bracket(d)) is not None
    print("✅ 음의 변 통과")


def random_labeled_graphs(count: int, seed: int = 20100101):
    """변 10개 이하의 무작위 라벨 그래프: Conway 식에서 얻은 것과 + 변만 가진 멀티그래프"""
    rng = random.Random(seed)
    graphs = []
    while len(graphs) < count // 2:
        graph = graph_from_conway(random_conway(rng, max_leaves=6, allow_negative=False))
        if graph.edge_count <= 10:
            graphs.append(graph)
    while len(graphs) < count:
        vertices = rng.randint(1, 5)
        edges = [(rng.randrange(vertices), rng.randrange(vertices), '+') for _ in range(rng.randint(1, 10))]
        graphs.append(LabeledGraph.from_edges(edges, vertices=range(vertices)))
    return graphs


def test_memo_matches_plain():
    """메모이제이션 유무와 무관한 결과 (무작위 그래프 200개)"""
    print("\n🧠 메모이제이션 테스트 중...")
    graphs = random_labeled_graphs(200)
    for graph in graphs:
        assert graph.edge_count <= 10
        for reduced in (False, True):
            assert relative_tutte(graph, memo=True, reduced=reduced) == relative_tutte(graph, memo=False, reduced=reduced)
    print(f"✅ 그래프 {len(graphs)}개에서 일치")


def test_canonical_key():
    """정점 번호를 바꿔도 같은 키"""
    print("\n🔑 정규 키 테스트 중...")
    first = LabeledGraph.from_edges([(0, 1, '+'), (1, 2, '+'), (2, 0, '0'), (2, 3, '+')]).graph
    second = LabeledGraph.from_edges([(9, 5, '+'), (5, 7, '+'), (7, 9, '0'), (7, 4, '+')]).graph
    other = LabeledGraph.from_edges([(0, 1, '+'), (1, 2, '0'), (2, 0, '+'), (0, 3, '+')]).graph
    assert canonical_key(first) == canonical_key(second)
    assert canonical_key(first)[0] == 'canonical'
    assert canonical_key(first, exact=True)[0] == 'exact'
    # 덧붙은 변이 0-변의 끝점에 붙어 있지 않으므로 동형이 아님
    assert canonical_key(other) != canonical_key(first)
    print("✅ 정규 키 통과")


def test_substitution_chain():
    """Tutte → 브래킷 → Jones"""
    print("\n🔗 치환 연쇄 테스트 중...")
    assert tutte_to_bracket(x + y) == A + A ** -1
    assert tutte_to_bracket(x ** 2 + x * y + X * y) == A ** 2 + 1 - A ** -4
    image = tutte_to_jones(ONE, 0)
    assert image.bracket == ONE and image.jones == ONE
    shifted = tutte_to_jones(x + y, 0, unit=(-1, 1))
    assert shifted.bracket == -(A ** 3) * (A + A ** -1)
    assert shifted.jones == shifted.bracket.substitute(JONES_MAP)
    assert set(shifted.to_json()) == {'bracket', 'jones'}

    poly = A ** 2 + 1 - A ** -4
    assert match_unit(-(A ** 3) * poly, poly) == (-1, 1)
    assert match_unit(A ** -6 * poly, poly) == (1, -2)
    assert match_unit(A * poly, poly) is None
    print("✅ 치환 연쇄 통과")


def test_oracle_triangulation():
    """그래프 브래킷과 상태합 브래킷은 ±A^(3k) 차이"""
    print("\n📐 상태합 대조 테스트 중...")
    for text in ["2", "3", "(i,1,1)", "(i,1^2)(1^2)", "(1^2) i (1^2)"]:
        oracle = kauffman_bracket(build_diagram(parse_conway(text)))
        assert match_unit(oracle, graph_bracket(text)) is not None, text
    assert graph_bracket("2") == -(A ** 4) - A ** -4
    print("✅ 상태합 대조 통과")


def test_random_oracle_triangulation():
    """무작위 양의 Conway 식 (고전 교차점 10개 이하)에서 단위 차이 확인"""
    print("\n🎲 무작위 상태합 대조 테스트 중...")
    rng = random.Random(1729)
    checked = 0
    while checked < 60:
        expr = random_conway(rng, max_leaves=6, allow_negative=False)
        diagram = build_diagram(expr)
        if len(diagram.classical()) > 10:
            continue
        oracle = kauffman_bracket(diagram)
        for reduced in (False, True):
            assert match_unit(oracle, graph_bracket(expr, reduced=reduced)) is not None, (to_text(expr), reduced)
        checked += 1
    print(f"✅ 무작위 식 {checked}개 일치")


def test_unit_with_large_lowest_coefficient():
    """최저차 계수가 ±1이 아니어도 단위 탐색이 됨"""
    print("\n🔢 최저차 계수 테스트 중...")
    expected = 2 * A ** -1 + A - A ** 5
    oracle = kauffman_bracket(diagram_from_text("i 1 1 i 1"))
    image = graph_bracket("i 1 1 i 1")
    assert oracle == expected and image == expected
    assert match_unit(oracle, image) == (1, 0)
    assert match_unit(-(A ** -3) * expected, expected) == (-1, -1)
    assert match_unit(3 * expected, expected) is None
    assert match_unit(-2 * A ** 3, 2 * A ** 0) == (-1, 1)
    print("✅ 최저차 계수 통과")


def main():
    """전체 테스트 실행"""
    print("=" * 60)
    print("🧪 상대 Tutte 엔진 테스트")
    print("=" * 60)

    tests = [
        ("작은 그래프", test_small_graphs),
        ("그래프 생성", test_graph_from_conway),
        ("그래프 축약", test_reductions),
        ("음의 변", test_negative_edges),
        ("메모이제이션", test_memo_matches_plain),
        ("정규 키", test_canonical_key),
        ("치환 연쇄", test_substitution_chain),
        ("상태합 대조", test_oracle_triangulation),
        ("무작위 상태합 대조", test_random_oracle_triangulation),
        ("최저차 계수", test_unit_with_large_lowest_coefficient),
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
