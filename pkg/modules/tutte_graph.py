"""
라벨 그래프 Tutte 엔진
Conway 표기에서 +/0 라벨 그래프를 만들고, 그래프 축약(R2, 가상 R2, Z-이동)과
상대 Tutte 다항식 T(G; x, y, X, Y, d)을 계산해 브래킷·Jones 다항식으로 옮김
"""
import logging
from collections import Counter
from dataclasses import dataclass
from itertools import permutations, product
from math import factorial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from modules.conway import ConwayExpr, Integer, Product, Ramification, Virtual, parse_conway
from modules.errors import UnsupportedGraphError
from modules.laurent import (
    A, BRACKET_MAP, JONES_MAP, LaurentPolynomial, X, Y, d, x, y,
)

logger = logging.getLogger(__name__)

PLUS = '+'
MINUS = '-'
ZERO_EDGE = '0'
LABELS = (PLUS, MINUS, ZERO_EDGE)

# 정규형 탐색에서 허용하는 최대 정점 순서 수
CANONICAL_LIMIT = 5040

Edge = Tuple[int, int, int]  # (u, v, key)


class LabeledGraph:
    """
    변마다 '+', '-', '0' 라벨이 붙은 무향 멀티그래프 (루프·다중 변 허용)

    '+'는 고전 교차점, '0'은 가상 교차점. '-'는 축약 규칙을 위해서만 허용되며
    Tutte 엔진은 '-' 변이 남은 그래프를 받지 않는다.
    """

    def __init__(self, graph: Optional[nx.MultiGraph] = None):
        self.graph = graph if graph is not None else nx.MultiGraph()

    @classmethod
    def from_edges(cls, edges: Iterable[Tuple[int, int, str]], vertices: Iterable[int] = ()) -> 'LabeledGraph':
        result = cls()
        result.graph.add_nodes_from(vertices)
        for u, v, label in edges:
            result.add_edge(u, v, label)
        return result

    def add_edge(self, u: int, v: int, label: str) -> None:
        if label not in LABELS:
            raise UnsupportedGraphError(f"edge label outside {{+,0}}: {label!r}")
        self.graph.add_edge(u, v, label=label)

    @property
    def vertex_count(self) -> int:
        return self.graph.number_of_nodes()

    @property
    def edge_count(self) -> int:
        return self.graph.number_of_edges()

    def label_counts(self) -> Counter:
        return Counter(label for _, _, label in self.graph.edges(data='label'))

    def edge_list(self) -> List[Tuple[int, int, str]]:
        return sorted((min(u, v), max(u, v), label) for u, v, label in self.graph.edges(data='label'))

    def copy(self) -> 'LabeledGraph':
        return LabeledGraph(self.graph.copy())

    def to_json(self) -> Dict:
        order = {v: i for i, v in enumerate(sorted(self.graph.nodes))}
        return {
            'vertices': len(order),
            'edges': [[order[u], order[v], label] for u, v, label in self.edge_list()],
        }

    def __repr__(self):
        return f"LabeledGraph(vertices={self.vertex_count}, edges={self.edge_list()})"


# ----------------------------------------------------------------------
# Conway → 그래프
# ----------------------------------------------------------------------
# 직병렬 식: ('edge', label) | ('series', children) | ('parallel', children)
def _dual(node: Tuple) -> Tuple:
    kind = node[0]
    if kind == 'edge':
        return node
    flipped = 'parallel' if kind == 'series' else 'series'
    return (flipped, [_dual(child) for child in node[1]])


def _series_parallel(expr: ConwayExpr) -> Tuple:
    """
    탱글 → 두 단자 직병렬 식

    정수 n은 변 |n|개의 직렬, 탱글 반사는 쌍대(직렬↔병렬),
    탱글 합은 직렬 연결에 대응한다.
    """
    if isinstance(expr, Integer):
        label = PLUS if expr.n > 0 else MINUS
        return ('series', [('edge', label)] * abs(expr.n))
    if isinstance(expr, Virtual):
        return ('edge', ZERO_EDGE)
    if isinstance(expr, Ramification):
        return ('series', [_dual(_series_parallel(part)) for part in expr.parts])
    if isinstance(expr, Product):
        acc = _series_parallel(expr.factors[0])
        for factor in expr.factors[1:]:
            acc = ('series', [_dual(acc), _series_parallel(factor)])
        return acc
    raise UnsupportedGraphError(f"graph construction unsupported; use diagram oracle ({expr!r})")


def _realize(node: Tuple, graph: LabeledGraph, s: int, t: int, fresh: List[int]) -> None:
    kind = node[0]
    if kind == 'edge':
        graph.add_edge(s, t, node[1])
        return
    children = node[1]
    if kind == 'parallel':
        for child in children:
            _realize(child, graph, s, t, fresh)
        return
    points = [s]
    for _ in range(len(children) - 1):
        points.append(fresh[0])
        fresh[0] += 1
    points.append(t)
    for index, child in enumerate(children):
        _realize(child, graph, points[index], points[index + 1], fresh)


def graph_from_conway(expr) -> LabeledGraph:
    """
    Conway 표기(문자열 또는 AST)의 분자 닫기에 대응하는 라벨 그래프

    예: 1^p → 길이 p 사이클, (i,1^p) → 0-변 하나를 가진 길이 p+1 사이클.
    음의 정수 잎은 '-' 변이 되어 reduce_graph로만 다룰 수 있다.
    """
    if isinstance(expr, str):
        expr = parse_conway(expr)
    graph = LabeledGraph()
    graph.graph.add_node(0)
    if isinstance(expr, Integer) and expr.n == 0:
        return graph
    # 분자 닫기는 두 단자를 같은 정점으로 잇는다
    _realize(_series_parallel(expr), graph, 0, 0, [1])
    logger.debug(f"그래프 생성: 정점 {graph.vertex_count}개, 라벨 {dict(graph.label_counts())}")
    return graph


# ----------------------------------------------------------------------
# 그래프 기본 연산
# ----------------------------------------------------------------------
def _edges(g: nx.MultiGraph, label: Optional[str] = None) -> List[Edge]:
    found = [(u, v, k) for u, v, k, lab in g.edges(keys=True, data='label') if label is None or lab == label]
    return sorted(found, key=lambda e: (min(e[0], e[1]), max(e[0], e[1]), e[2]))


def _label(g: nx.MultiGraph, e: Edge) -> str:
    return g.edges[e]['label']


def _is_loop(e: Edge) -> bool:
    return e[0] == e[1]


def _is_bridge(g: nx.MultiGraph, e: Edge) -> bool:
    u, v, _ = e
    if u == v or g.number_of_edges(u, v) > 1:
        return False
    h = g.copy()
    h.remove_edge(*e)
    return not nx.has_path(h, u, v)


def _delete(g: nx.MultiGraph, *edges: Edge) -> nx.MultiGraph:
    h = g.copy()
    for e in edges:
        h.remove_edge(*e)
    return h


def _contract(g: nx.MultiGraph, e: Edge) -> nx.MultiGraph:
    u, v, _ = e
    h = _delete(g, e)
    if u == v:
        return h
    keep, gone = min(u, v), max(u, v)
    for _, other, label in list(h.edges(gone, data='label')):
        h.add_edge(keep, keep if other == gone else other, label=label)
    h.remove_node(gone)
    return h


def _same_class(a: str, b: str) -> bool:
    """서로 상쇄되는 라벨 쌍: (+,-) 고전 R2, (0,0) 가상 R2"""
    return {a, b} == {PLUS, MINUS} or a == b == ZERO_EDGE


def _find_reduction(g: nx.MultiGraph, rules: Sequence[str]) -> Optional[Tuple[str, str, Tuple[Edge, ...]]]:
    """적용 가능한 첫 축약: (규칙, 'delete'|'contract', 변들)"""
    if 'virtual_r1' in rules:
        for e in _edges(g, ZERO_EDGE):
            if _is_loop(e):
                return ('virtual_r1', 'delete', (e,))
            if _is_bridge(g, e):
                return ('virtual_r1', 'contract', (e,))

    counts = Counter(label for _, _, label in g.edges(data='label'))
    if counts[MINUS] == 0 and counts[ZERO_EDGE] < 2:
        return None

    candidates = [e for e in _edges(g) if _label(g, e) != PLUS or 'classical_r2' in rules]
    candidates = [e for e in candidates if not _is_loop(e)]
    for i, e in enumerate(candidates):
        for f in candidates[i + 1:]:
            le, lf = _label(g, e), _label(g, f)
            if not _same_class(le, lf):
                continue
            rule = 'classical_r2' if le != ZERO_EDGE else 'virtual_r2'
            if rule not in rules:
                continue
            # 평행 쌍 양쪽의 면은 이동 뒤에도 분리되어 있으므로 끝점을 합치지 않는다
            if {e[0], e[1]} == {f[0], f[1]}:
                return (rule, 'delete', (e, f))

    for i, e in enumerate(candidates):
        for f in candidates[i + 1:]:
            le, lf = _label(g, e), _label(g, f)
            if not _same_class(le, lf) or {e[0], e[1]} == {f[0], f[1]}:
                continue
            if _is_bridge(g, e) or _is_bridge(g, f):
                continue
            rule = 'classical_r2' if le != ZERO_EDGE else ('virtual_r2' if set(e[:2]) & set(f[:2]) else 'z_move')
            if rule not in rules:
                continue
            before = nx.number_connected_components(g)
            if nx.number_connected_components(_delete(g, e, f)) > before:
                return (rule, 'contract', (e, f))
    return None


def _apply(g: nx.MultiGraph, action: str, edges: Tuple[Edge, ...]) -> nx.MultiGraph:
    if action == 'delete':
        return _delete(g, *edges)
    # 두 번째 변의 끝점은 첫 번째 축약 뒤에 이름이 바뀔 수 있다
    first, second = edges[0], edges[1] if len(edges) > 1 else None
    label = None if second is None else g.edges[second]['label']
    h = _contract(g, first)
    if second is None:
        return h
    merged = {max(first[0], first[1]): min(first[0], first[1])}
    u, v = merged.get(second[0], second[0]), merged.get(second[1], second[1])
    for key, data in h.get_edge_data(u, v, default={}).items():
        if data['label'] == label:
            return _contract(h, (u, v, key))
    raise UnsupportedGraphError("축약 중 변을 찾지 못했습니다")


ALL_RULES = ('classical_r2', 'virtual_r2', 'z_move', 'virtual_r1')
ZERO_RULES = ('virtual_r2', 'z_move', 'virtual_r1')


def _reduce(g: nx.MultiGraph, rules: Sequence[str]) -> Tuple[nx.MultiGraph, List[str]]:
    steps = []
    while True:
        found = _find_reduction(g, rules)
        if found is None:
            return g, steps
        rule, action, edges = found
        g = _apply(g, action, edges)
        steps.append(rule)


def reduce_graph(graph: LabeledGraph, rules: Sequence[str] = ALL_RULES) -> Tuple[LabeledGraph, List[str]]:
    """
    그래프 축약을 고정점까지 반복

    - classical_r2: 평행한 (+,-) 쌍은 삭제, 2-변 절단을 이루는 (+,-) 쌍은 축약
    - virtual_r2: 평행한 (0,0) 쌍은 삭제 (두 끝점은 합치지 않고 그대로 남음),
      이웃한 직렬 (0,0) 쌍은 축약
    - z_move: 떨어져 있어도 2-변 절단을 이루는 (0,0) 쌍 축약
    - virtual_r1: 0-루프 삭제, 0-다리 축약

    Returns:
        (축약된 그래프, 적용한 규칙 이름 목록)
    """
    reduced, steps = _reduce(graph.graph.copy(), rules)
    if steps:
        logger.info(f"그래프 축약 {len(steps)}단계: {dict(Counter(steps))}")
    return LabeledGraph(reduced), steps


# ----------------------------------------------------------------------
# 정규 인코딩 (메모이제이션 키)
# ----------------------------------------------------------------------
def _refine_colors(g: nx.MultiGraph) -> Dict[int, int]:
    colors = {v: 0 for v in g.nodes}
    for _ in range(g.number_of_nodes() + 1):
        signatures = {}
        for v in g.nodes:
            around = []
            for _, w, label in g.edges(v, data='label'):
                around.append((label, colors[w], w == v))
            signatures[v] = (colors[v], tuple(sorted(around)))
        ranks = {sig: i for i, sig in enumerate(sorted(set(signatures.values())))}
        refined = {v: ranks[signatures[v]] for v in g.nodes}
        if len(set(refined.values())) == len(set(colors.values())):
            return refined
        colors = refined
    return colors


def _encode(g: nx.MultiGraph, order: Sequence[int]) -> Tuple:
    index = {v: i for i, v in enumerate(order)}
    edges = sorted((min(index[u], index[v]), max(index[u], index[v]), label)
                   for u, v, label in g.edges(data='label'))
    return (len(order), tuple(edges))


def canonical_key(g: nx.MultiGraph, exact: bool = False) -> Tuple:
    """
    동형 불변 인코딩

    색 정제로 정점을 나눈 뒤 같은 색 안의 순서를 모두 시도해 가장 작은 인코딩을 고른다.
    경우의 수가 CANONICAL_LIMIT를 넘거나 exact=True이면 정점 번호를 그대로 쓰는
    (동형 불변이 아닌) 인코딩으로 대체한다.
    """
    colors = _refine_colors(g)
    classes: Dict[int, List[int]] = {}
    for v in sorted(g.nodes):
        classes.setdefault(colors[v], []).append(v)
    groups = [classes[c] for c in sorted(classes)]

    count = 1
    for group in groups:
        count *= factorial(len(group))
    if exact or count > CANONICAL_LIMIT:
        return ('exact',) + _encode(g, sorted(g.nodes))

    best = None
    for choice in product(*(permutations(group) for group in groups)):
        code = _encode(g, [v for group in choice for v in group])
        if best is None or code < best:
            best = code
    return ('canonical',) + best


# ----------------------------------------------------------------------
# 상대 Tutte 엔진
# ----------------------------------------------------------------------
class TutteEngine:
    """
    상대 Tutte 다항식 계산기

    + 변에 대해서만 삭제·축약을 반복한다.
    - 다리인 + 변: X·T(G/e)
    - 루프인 + 변: Y·T(G-e)
    - 그 밖의 + 변: y·T(G-e) + x·T(G/e)
    0-변만 남으면 0-축약을 끝까지 적용한 뒤 d^(성분 수 - 1).
    연결 성분이 여럿이면 d^(c-1)·Π T(성분).

    reduced=True이면 매 단계에서 그래프 축약을 먼저 적용한다 (축약 상대 Tutte 다항식).
    """

    def __init__(self, memo: bool = True, reduced: bool = False):
        self.memo: Optional[Dict[Tuple, LaurentPolynomial]] = {} if memo else None
        self.reduced = reduced
        self.calls = 0
        self.hits = 0
        self.logger = logging.getLogger(__name__)

    def evaluate(self, graph: LabeledGraph) -> LaurentPolynomial:
        labels = graph.label_counts()
        if labels[MINUS] and not self.reduced:
            raise UnsupportedGraphError("graph construction unsupported; use diagram oracle ('-' 변이 있습니다)")
        result = self._tutte(graph.graph)
        self.logger.info(
            f"Tutte 계산 완료: 변 {graph.edge_count}개, 호출 {self.calls}회, 메모 적중 {self.hits}회"
        )
        return result

    def _tutte(self, g: nx.MultiGraph) -> LaurentPolynomial:
        self.calls += 1
        if self.reduced:
            g, _ = _reduce(g, ALL_RULES)
        labels = Counter(label for _, _, label in g.edges(data='label'))
        if labels[MINUS]:
            raise UnsupportedGraphError("graph construction unsupported; use diagram oracle ('-' 변이 축약되지 않습니다)")

        components = list(nx.connected_components(g))
        if len(components) > 1:
            result = d ** (len(components) - 1)
            for nodes in sorted(components, key=min):
                result = result * self._tutte(g.subgraph(nodes).copy())
            return result

        key = None
        if self.memo is not None:
            # 0-변이 둘 이상이면 값이 변 선택 순서에 따라 달라질 수 있어 정점 번호까지 키에 넣는다
            key = (self.reduced, canonical_key(g, exact=labels[ZERO_EDGE] > 1))
            if key in self.memo:
                self.hits += 1
                return self.memo[key]

        result = self._expand(g, labels)
        if key is not None:
            self.memo[key] = result
        return result

    def _expand(self, g: nx.MultiGraph, labels: Counter) -> LaurentPolynomial:
        plus = _edges(g, PLUS)
        if not plus:
            residual, _ = _reduce(g, ZERO_RULES)
            return d ** (nx.number_connected_components(residual) - 1)

        e = self._select(g, plus, labels)
        if _is_loop(e):
            return Y * self._tutte(_delete(g, e))
        if _is_bridge(g, e):
            return X * self._tutte(_contract(g, e))
        return y * self._tutte(_delete(g, e)) + x * self._tutte(_contract(g, e))

    def _select(self, g: nx.MultiGraph, plus: List[Edge], labels: Counter) -> Edge:
        for e in plus:
            if _is_loop(e):
                return e
        for e in plus:
            if _is_bridge(g, e):
                return e

        candidates = plus
        if self.reduced and labels[ZERO_EDGE] > 1:
            # 삭제하면 0-변 쌍 축약이 가능해지는 변을 먼저 고른다
            enabling = [e for e in plus if _find_reduction(_delete(g, e), ('virtual_r2', 'z_move'))]
            if enabling:
                candidates = enabling
        return min(candidates, key=lambda e: (g.degree(e[0]) + g.degree(e[1]), min(e[0], e[1]), max(e[0], e[1]), e[2]))


def relative_tutte(graph: LabeledGraph, memo: bool = True, reduced: bool = False) -> LaurentPolynomial:
    """라벨 그래프의 상대 Tutte 다항식 T(G; x, y, X, Y, d)"""
    return TutteEngine(memo=memo, reduced=reduced).evaluate(graph)


def tutte_to_bracket(polynomial: LaurentPolynomial) -> LaurentPolynomial:
    """X→-A⁻³, Y→-A³, x→A, y→A⁻¹, d→-A²-A⁻²"""
    return polynomial.substitute(BRACKET_MAP)


@dataclass(frozen=True)
class TutteImage:
    """상대 Tutte 다항식을 치환해 얻은 브래킷과 Jones"""
    bracket: LaurentPolynomial
    jones: LaurentPolynomial

    def to_json(self) -> Dict:
        return {'bracket': self.bracket.to_json(), 'jones': self.jones.to_json()}


def tutte_to_jones(polynomial: LaurentPolynomial, writhe: int, unit: Tuple[int, int] = (1, 0)) -> TutteImage:
    """
    브래킷 이미지에 단위 ε·A^(3k)를 곱하고, (-A³)^(-w)로 보정한 뒤 A = t^(-1/4) 대입

    Args:
        writhe: 다이어그램의 writhe
        unit: match_unit이 찾은 (ε, k)
    """
    sign, k = unit
    bracket = tutte_to_bracket(polynomial) * sign * A ** (3 * k)
    jones = ((-(A ** 3)) ** (-writhe) * bracket).substitute(JONES_MAP)
    return TutteImage(bracket, jones)


def match_unit(candidate: LaurentPolynomial, reference: LaurentPolynomial) -> Optional[Tuple[int, int]]:
    """
    candidate = ε·A^(3k)·reference 를 만족하는 (ε, k) 탐색

    Returns:
        (ε, k) 또는 그런 단위가 없으면 None
    """
    if candidate.is_zero() or reference.is_zero():
        return (1, 0) if candidate == reference else None
    cand = candidate.univariate_coefficients('A')
    ref = reference.univariate_coefficients('A')
    low_c = min(cand)
    low_r = min(ref)
    shift = low_c - low_r
    if shift % 3:
        return None
    # 최저차 계수의 비가 ±1이어야 한다
    if cand[low_c] == ref[low_r]:
        sign = 1
    elif cand[low_c] == -ref[low_r]:
        sign = -1
    else:
        return None
    if candidate == reference * (A ** shift) * sign:
        return (sign, shift // 3)
    return None


def graph_bracket(expr, reduced: bool = True) -> LaurentPolynomial:
    """Conway 표기 → 그래프 → 상대 Tutte → 브래킷 이미지"""
    return tutte_to_bracket(relative_tutte(graph_from_conway(expr), reduced=reduced))
