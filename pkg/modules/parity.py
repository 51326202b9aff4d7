"""
패리티 브래킷 모듈
교차점의 Gauss 패리티, 홀수 교차점을 그래프 노드로 남기는 패리티 브래킷,
노드 그래프 축약(노드 R2, 그래프 Z-이동)과 비자명성 판정을 제공
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from itertools import permutations, product
from multiprocessing import Pool
from typing import Dict, List, Optional, Tuple

from config.settings import settings
from modules.diagram import A_PAIRS, B_PAIRS, VIRTUAL, VirtualDiagram
from modules.errors import ParityError, StateSumTooLargeError
from modules.laurent import ZERO, LaurentPolynomial, d as LOOP

logger = logging.getLogger(__name__)

ODD = 'odd'
EVEN = 'even'

# 노드 통과: (노드 id, 들어오는 슬롯). 나가는 슬롯은 (슬롯 + 2) % 4
Pass = Tuple[int, int]

FLAT_VALUES = {'A': LaurentPolynomial.constant(-1), 'd': LaurentPolynomial.constant(-2)}


class Certificate(str, Enum):
    """패리티 브래킷으로 얻는 결론"""
    TRIVIAL_LIKE = 'TrivialLike'
    NONTRIVIAL_NONCLASSICAL = 'NonTrivialNonClassical'
    NOT_Z_EQUIVALENT = 'NonClassicalNotZEquivalent'


# ----------------------------------------------------------------------
# Gauss 패리티
# ----------------------------------------------------------------------

def gauss_parity(diagram: VirtualDiagram) -> Dict[int, str]:
    """
    고전 교차점 id → 'odd' / 'even'

    Gauss 코드에서 한 교차점의 두 등장 사이에 놓인 고전 교차점 기호 수가
    홀수이면 odd. 가상 교차점은 세지 않는다.

    Raises:
        ParityError: 성분이 하나가 아닌 경우
    """
    components = diagram.traverse()
    if len(components) + diagram.free_loops != 1:
        raise ParityError("parity defined for knots only")
    if not components:
        return {}

    sequence = [diagram.crossings[index].id for index, _ in components[0]
                if diagram.crossings[index].kind != VIRTUAL]
    positions: Dict[int, List[int]] = {}
    for position, cid in enumerate(sequence):
        positions.setdefault(cid, []).append(position)

    return {
        cid: ODD if (second - first - 1) % 2 else EVEN
        for cid, (first, second) in sorted(positions.items())
    }


# ----------------------------------------------------------------------
# 노드 그래프
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class NodalGraph:
    """
    강체 꼭짓점 4가 가상 그래프

    components는 닫힌 곡선마다 노드 통과의 순환 열. 각 노드는 정확히 두 번 통과되며
    들어오는 슬롯으로 노드 둘레의 반시계 순서를 기억한다. 가상 교차점 표시는
    우회 이동으로 지워지므로 저장하지 않는다.
    """
    components: Tuple[Tuple[Pass, ...], ...]
    free_loops: int = 0

    def __post_init__(self):
        if self.free_loops < 0:
            raise ParityError("free_loops는 0 이상이어야 합니다.")
        counts = Counter(node for component in self.components for node, _ in component)
        bad = sorted(node for node, count in counts.items() if count != 2)
        if bad:
            raise ParityError(f"노드마다 통과가 정확히 두 번이어야 합니다: {bad}")
        for node in counts:
            first, second = self._slots(node)
            if (first - second) % 2 == 0:
                raise ParityError(f"노드 {node}의 두 통과가 같은 방향 쌍을 씁니다")
        if any(not component for component in self.components):
            raise ParityError("빈 성분은 free_loops로 세어야 합니다.")

    def _slots(self, node: int) -> Tuple[int, int]:
        slots = [slot for component in self.components for n, slot in component if n == node]
        return slots[0], slots[1]

    @property
    def nodes(self) -> List[int]:
        return sorted({node for component in self.components for node, _ in component})

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def epsilon(self) -> Dict[Tuple[int, int], int]:
        """(성분 번호, 위치) → 통과 방향과 다른 가닥 방향의 외적 부호"""
        return _epsilon(self.components)

    def canonical(self, allow_z: bool = False) -> str:
        return canonical_code(self, allow_z)

    def to_json(self) -> Dict:
        return {
            'components': [[list(p) for p in component] for component in self.components],
            'free_loops': self.free_loops,
        }


def _epsilon(components) -> Dict[Tuple[int, int], int]:
    slots: Dict[int, List[int]] = {}
    for component in components:
        for node, slot in component:
            slots.setdefault(node, []).append(slot)

    result = {}
    for ci, component in enumerate(components):
        for pi, (node, slot) in enumerate(component):
            first, second = slots[node]
            other = second if slot == first else first
            result[(ci, pi)] = 1 if (other - slot) % 4 == 1 else -1
    return result


def _find_bigon(graph: NodalGraph, allow_z: bool) -> Optional[Tuple[Tuple[int, int], ...]]:
    """
    노드 R2로 지울 수 있는 두 노드를 찾아 지울 통과 네 개의 위치를 반환

    두 노드 P, Q가 두 가닥 위에서 연달아 통과되어야 한다. 평면 두각형이면
    한 가닥에서 P와 Q의 ε가 서로 달라야 하고, 그래프 Z-이동을 허용하면 같아도 된다.
    """
    components = graph.components
    eps = _epsilon(components)
    where: Dict[int, List[Tuple[int, int]]] = {}
    for ci, component in enumerate(components):
        for pi, (node, _) in enumerate(component):
            where.setdefault(node, []).append((ci, pi))

    def adjacent(u: Tuple[int, int], v: Tuple[int, int]) -> bool:
        if u[0] != v[0]:
            return False
        size = len(components[u[0]])
        return (u[1] - v[1]) % size in (1, size - 1)

    for ci, component in enumerate(components):
        size = len(component)
        if size < 2:
            continue
        for pi in range(size):
            here = (ci, pi)
            nxt = (ci, (pi + 1) % size)
            p_node, q_node = component[here[1]][0], component[nxt[1]][0]
            if p_node == q_node:
                continue
            p_twin = next(pos for pos in where[p_node] if pos != here)
            q_twin = next(pos for pos in where[q_node] if pos != nxt)
            if not adjacent(p_twin, q_twin):
                continue
            if allow_z or eps[here] != eps[nxt]:
                return here, nxt, p_twin, q_twin
    return None


def reduce_nodal(graph: NodalGraph, allow_z: bool = False) -> NodalGraph:
    """
    노드 R2 (allow_z이면 그래프 Z-이동 포함)를 더 이상 적용할 수 없을 때까지 반복

    Returns:
        NodalGraph: 축약된 그래프. 노드가 모두 사라진 곡선은 free_loops로 센다.
    """
    current = graph
    steps = 0
    while True:
        found = _find_bigon(current, allow_z)
        if found is None:
            break
        drop = set(found)
        kept = []
        loops = current.free_loops
        for ci, component in enumerate(current.components):
            rest = tuple(p for pi, p in enumerate(component) if (ci, pi) not in drop)
            if rest:
                kept.append(rest)
            else:
                loops += 1
        current = NodalGraph(tuple(kept), loops)
        steps += 1

    if steps:
        logger.debug(f"노드 그래프 축약: {steps}회, 남은 노드 {current.node_count}개")
    return current


def _orientations(component: Tuple[Pass, ...]):
    """한 성분의 모든 회전과 역방향 (역방향이면 들어오는 슬롯이 반대편으로 바뀜)"""
    size = len(component)
    reverse = tuple((node, (slot + 2) % 4) for node, slot in reversed(component))
    for sequence in (component, reverse):
        for shift in range(size):
            yield sequence[shift:] + sequence[:shift]


def canonical_code(graph: NodalGraph, allow_z: bool = False) -> str:
    """
    노드 번호 재배정, 성분 회전과 역방향, 성분 순서에 대해 불변인 문자열

    allow_z이면 ε 표시를 버린다 (그래프 Z-이동이 교차 방향을 바꿀 수 있음).
    노드가 없는 곡선은 'loops=N'으로만 나타난다.
    """
    best = None
    choices = [list(_orientations(component)) for component in graph.components]
    for order in permutations(range(len(choices))):
        for picked in product(*(choices[i] for i in order)):
            eps = _epsilon(picked)
            labels: Dict[int, int] = {}
            encoded = []
            for ci, component in enumerate(picked):
                row = []
                for pi, (node, _) in enumerate(component):
                    label = labels.setdefault(node, len(labels) + 1)
                    row.append((label, 0 if allow_z else eps[(ci, pi)]))
                encoded.append(tuple(row))
            key = tuple(encoded)
            if best is None or key < best:
                best = key

    chunks = [
        ' '.join(f"{label}{'' if sign == 0 else ('+' if sign > 0 else '-')}" for label, sign in row)
        for row in (best or ())
    ]
    text = ' | '.join(chunks)
    if graph.free_loops:
        text = f"{text} ; loops={graph.free_loops}" if text else f"loops={graph.free_loops}"
    return text


def code_node_count(code: str) -> int:
    """정규형 코드에 나타나는 노드 수"""
    body = code.split(';')[0]
    return len({token.rstrip('+-') for token in body.replace('|', ' ').split()})


# ----------------------------------------------------------------------
# 상태 전개
# ----------------------------------------------------------------------

def state_graph(diagram: VirtualDiagram, parity: Dict[int, str], choice: Dict[int, str]) -> NodalGraph:
    """
    짝수 교차점을 choice대로 스무딩하고 홀수 교차점을 노드로 남긴 그래프 G(S)

    가상 교차점은 두 가닥이 그대로 통과한다.
    """
    heads = diagram._heads()
    tails = diagram._tails()

    def partner(index: int, slot: int) -> int:
        crossing = diagram.crossings[index]
        if crossing.kind == VIRTUAL or parity[crossing.id] == ODD:
            return (slot + 2) % 4
        pairs = A_PAIRS if choice[crossing.id] == 'A' else B_PAIRS
        for i, j in pairs:
            if slot == i:
                return j
            if slot == j:
                return i
        raise ParityError(f"잘못된 슬롯: {slot}")

    def across(index: int, slot: int) -> Tuple[int, int]:
        label = diagram.crossings[index].legs[slot]
        head = heads[label]
        return tails[label] if head == (index, slot) else head

    visited = set()
    components = []
    loops = diagram.free_loops
    for index in range(len(diagram.crossings)):
        for slot in range(4):
            if (index, slot) in visited:
                continue
            passes = []
            current = (index, slot)
            while current not in visited:
                entry_index, entry_slot = current
                exit_slot = partner(entry_index, entry_slot)
                visited.add(current)
                visited.add((entry_index, exit_slot))
                crossing = diagram.crossings[entry_index]
                if crossing.kind != VIRTUAL and parity[crossing.id] == ODD:
                    passes.append((crossing.id, entry_slot))
                current = across(entry_index, exit_slot)
            if passes:
                components.append(tuple(passes))
            else:
                loops += 1

    return NodalGraph(tuple(components), loops)


def _expand_chunk(payload) -> Counter:
    diagram, parity, even_ids, allow_z, start, stop = payload
    weights: Counter = Counter()
    for mask in range(start, stop):
        choice = {cid: ('A' if (mask >> bit) & 1 else 'B') for bit, cid in enumerate(even_ids)}
        n = sum(1 if value == 'A' else -1 for value in choice.values())
        reduced = reduce_nodal(state_graph(diagram, parity, choice), allow_z)
        free = NodalGraph(reduced.components, 0)
        code = canonical_code(free, allow_z) if free.components else ''
        weights[(code, n, reduced.free_loops)] += 1
    return weights


@dataclass(frozen=True)
class ParityBracket:
    """
    패리티 브래킷 Σ_S A^n(S) d^l(S) [G(S)]

    scalar는 노드가 모두 사라진 상태의 합, nodal_terms는 정규형 코드 → 계수.
    계수는 A와 d의 다항식이며 d = -A²-A⁻²는 대입하지 않은 채 둔다.
    """
    scalar: LaurentPolynomial
    nodal_terms: Dict[str, LaurentPolynomial] = field(default_factory=dict)
    allow_z: bool = False

    def normalized_scalar(self) -> LaurentPolynomial:
        """스칼라 항을 d로 한 번 나눈 값 (보통의 브래킷 정규화)"""
        return self.scalar * LOOP ** -1

    def to_json(self, normalized: bool = False) -> Dict:
        scalar = self.normalized_scalar() if normalized else self.scalar
        return {
            'allow_z': self.allow_z,
            'scalar': scalar.to_text(),
            'nodal_terms': [
                {'graph': code, 'coefficient': coeff.to_text()}
                for code, coeff in sorted(self.nodal_terms.items())
            ],
        }


def parity_bracket(
    diagram: VirtualDiagram,
    allow_z: bool = False,
    state_limit: Optional[int] = None,
    workers: Optional[int] = None
) -> ParityBracket:
    """
    패리티 브래킷 계산

    Args:
        diagram: 매듭 다이어그램 (성분 하나)
        allow_z: 상태 축약에서 그래프 Z-이동 허용 여부
        state_limit: 짝수 교차점 수 한도 (기본값은 설정값)
        workers: 워커 프로세스 수

    Raises:
        ParityError: 성분이 하나가 아닌 경우
        StateSumTooLargeError: 짝수 교차점이 한도를 넘는 경우
    """
    parity = gauss_parity(diagram)
    even_ids = [cid for cid, value in parity.items() if value == EVEN]
    limit = state_limit if state_limit is not None else settings.state_limit
    if len(even_ids) > limit:
        raise StateSumTooLargeError(
            f"state sum too large: 짝수 교차점 {len(even_ids)}개가 한도 {limit}개를 초과합니다."
        )

    workers = workers or settings.workers
    total = 1 << len(even_ids)
    logger.info(f"패리티 브래킷: 홀수 {len(parity) - len(even_ids)}개, 상태 {total}개, Z-이동 {allow_z}")

    chunk_count = max(1, min(total, workers * 4))
    bounds = [total * k // chunk_count for k in range(chunk_count + 1)]
    payloads = [(diagram, parity, even_ids, allow_z, bounds[k], bounds[k + 1]) for k in range(chunk_count)]
    if workers > 1 and total > 1:
        with Pool(workers) as pool:
            partials = pool.map(_expand_chunk, payloads)
    else:
        partials = [_expand_chunk(payload) for payload in payloads]

    weights: Counter = Counter()
    for partial in partials:
        weights.update(partial)

    scalar = ZERO
    nodal: Dict[str, LaurentPolynomial] = {}
    for (code, n, loops), count in sorted(weights.items()):
        term = LaurentPolynomial.monomial(count, A=n, d=loops)
        if code:
            nodal[code] = nodal.get(code, ZERO) + term
        else:
            scalar = scalar + term

    nodal = {code: coeff for code, coeff in nodal.items() if not coeff.is_zero()}
    return ParityBracket(scalar, nodal, allow_z)


# ----------------------------------------------------------------------
# 판정과 평탄 평가
# ----------------------------------------------------------------------

def nontriviality_certificate(bracket: ParityBracket) -> Certificate:
    """남은 노드 항이 있으면 비자명 (Z-이동 허용 여부에 따라 결론이 다름), 없으면 판정 불가"""
    if not bracket.nodal_terms:
        return Certificate.TRIVIAL_LIKE
    if bracket.allow_z:
        return Certificate.NOT_Z_EQUIVALENT
    return Certificate.NONTRIVIAL_NONCLASSICAL


def eval_flat(bracket: ParityBracket, normalized: bool = False) -> Dict:
    """
    A = -1 (따라서 d = -2)을 대입한 정수 값

    Returns:
        Dict: {'scalar_at_minus_1': int, 'nodal_terms_at_minus_1': {코드: int}}
    """
    scalar = bracket.normalized_scalar() if normalized else bracket.scalar
    nodal = {}
    for code, coeff in sorted(bracket.nodal_terms.items()):
        value = coeff.substitute(FLAT_VALUES).constant_term()
        if value:
            nodal[code] = value
    return {
        'scalar_at_minus_1': scalar.substitute(FLAT_VALUES).constant_term(),
        'nodal_terms_at_minus_1': nodal,
    }
