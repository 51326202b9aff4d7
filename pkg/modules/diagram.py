"""
가상 링크 다이어그램 모듈
방향이 주어진 PD 코드(가상 교차점 포함)로 다이어그램을 표현하고
Kauffman 브래킷 상태합, Jones 다항식, 다이어그램 변형(R1, R2, 가상화, 거울상)을 제공
"""
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from networkx.utils import UnionFind

from config.settings import settings
from modules.errors import DiagramError, StateSumTooLargeError
from modules.laurent import A, JONES_MAP, LOOP_VALUE, ZERO, LaurentPolynomial

logger = logging.getLogger(__name__)

CLASSICAL = 'classical'
VIRTUAL = 'virtual'

# (슬롯 쌍) 스무딩: A는 (0,1)(2,3), B는 (0,3)(1,2)
A_PAIRS = ((0, 1), (2, 3))
B_PAIRS = ((0, 3), (1, 2))

Slot = Tuple[int, int]  # (교차점 인덱스, 슬롯 번호)


@dataclass(frozen=True)
class Crossing:
    """
    교차점 하나

    legs는 반시계 방향으로 나열한 네 개의 변 라벨.
    고전 교차점: legs[0] → legs[2]가 아래 가닥, 부호가 +이면 위 가닥은 legs[3] → legs[1],
    -이면 legs[1] → legs[3].
    가상 교차점: legs[0] → legs[2], legs[1] → legs[3] 두 가닥이 그대로 통과.
    """
    id: int
    kind: str
    legs: Tuple[int, int, int, int]
    sign: int = 0

    @property
    def is_classical(self) -> bool:
        return self.kind == CLASSICAL

    def in_slots(self) -> Tuple[int, int]:
        if self.kind == VIRTUAL:
            return (0, 1)
        return (0, 3 if self.sign > 0 else 1)

    def out_slots(self) -> Tuple[int, int]:
        if self.kind == VIRTUAL:
            return (2, 3)
        return (2, 1 if self.sign > 0 else 3)

    def to_dict(self) -> Dict:
        return {
            'id': self.id,
            'kind': self.kind,
            'sign': self.sign,
            'legs': list(self.legs),
        }


@dataclass(frozen=True)
class SmoothingState:
    """고전 교차점 id → 'A' 또는 'B' 스무딩 선택"""
    choice: Mapping[int, str] = field(default_factory=dict)

    @property
    def a(self) -> int:
        return sum(1 for value in self.choice.values() if value == 'A')

    @property
    def b(self) -> int:
        return sum(1 for value in self.choice.values() if value == 'B')

    @property
    def n(self) -> int:
        return self.a - self.b


@dataclass(frozen=True)
class DiagramStats:
    """다이어그램 요약 정보"""
    components: int
    writhe: int
    classical_count: int
    virtual_count: int

    def to_dict(self) -> Dict:
        return {
            'components': self.components,
            'writhe': self.writhe,
            'classical_count': self.classical_count,
            'virtual_count': self.virtual_count,
        }


@dataclass(frozen=True)
class VirtualDiagram:
    """
    방향이 주어진 가상 링크 다이어그램

    crossings는 교차점 목록, free_loops는 교차점이 없는 닫힌 성분 수.
    모든 변 라벨은 정확히 한 번 들어오는 다리, 한 번 나가는 다리로 나타남.
    """
    crossings: Tuple[Crossing, ...]
    free_loops: int = 0

    def __post_init__(self):
        ids = [c.id for c in self.crossings]
        if len(set(ids)) != len(ids):
            raise DiagramError(f"중복된 교차점 id: {ids}")

        heads: Counter = Counter()
        tails: Counter = Counter()
        for crossing in self.crossings:
            if crossing.kind == CLASSICAL and crossing.sign not in (1, -1):
                raise DiagramError(f"고전 교차점 {crossing.id}의 부호가 잘못되었습니다: {crossing.sign}")
            if crossing.kind not in (CLASSICAL, VIRTUAL):
                raise DiagramError(f"알 수 없는 교차점 종류: {crossing.kind}")
            for slot in crossing.in_slots():
                heads[crossing.legs[slot]] += 1
            for slot in crossing.out_slots():
                tails[crossing.legs[slot]] += 1

        if set(heads) != set(tails) or any(v != 1 for v in heads.values()) or any(v != 1 for v in tails.values()):
            raise DiagramError("닫히지 않은 가닥이 있습니다 (변 라벨마다 들어옴/나감이 한 번씩이어야 함)")

        if self.free_loops < 0:
            raise DiagramError("free_loops는 0 이상이어야 합니다.")

    # ------------------------------------------------------------------
    # 생성자
    # ------------------------------------------------------------------
    @classmethod
    def unknot(cls) -> 'VirtualDiagram':
        """교차점 없는 자명한 매듭"""
        return cls((), 1)

    @classmethod
    def from_unoriented(
        cls,
        raw: Sequence[Tuple[str, Tuple[int, int, int, int]]],
        free_loops: int = 0
    ) -> 'VirtualDiagram':
        """
        방향이 없는 PD 코드로부터 다이어그램 생성

        각 성분은 아직 방문하지 않은 가장 앞 교차점의 가장 낮은 슬롯으로 들어가는 방향으로 정해짐.

        Args:
            raw: (종류, 반시계 방향 legs) 목록. 고전 교차점은 legs[0]-legs[2]가 아래 가닥
            free_loops: 교차점 없는 성분 수

        Returns:
            VirtualDiagram: 방향이 정해진 다이어그램
        """
        slots_of: Dict[int, List[Slot]] = {}
        for index, (_, legs) in enumerate(raw):
            for slot, label in enumerate(legs):
                slots_of.setdefault(label, []).append((index, slot))

        for label, slots in slots_of.items():
            if len(slots) != 2:
                raise DiagramError(f"변 {label}의 끝점이 {len(slots)}개입니다.")

        # (교차점, 가닥 0|1) → 들어오는 슬롯
        entry: Dict[Tuple[int, int], int] = {}
        for index in range(len(raw)):
            for start in (0, 1):
                if (index, start % 2) in entry:
                    continue
                current = (index, start)
                while (current[0], current[1] % 2) not in entry:
                    entry[(current[0], current[1] % 2)] = current[1]
                    out_slot = (current[1] + 2) % 4
                    label = raw[current[0]][1][out_slot]
                    first, second = slots_of[label]
                    current = second if first == (current[0], out_slot) else first

        crossings = []
        for index, (kind, legs) in enumerate(raw):
            under_in = entry[(index, 0)]
            over_in = entry[(index, 1)]
            if kind == VIRTUAL:
                oriented = (legs[under_in], legs[over_in], legs[(under_in + 2) % 4], legs[(over_in + 2) % 4])
                crossings.append(Crossing(index + 1, VIRTUAL, oriented))
                continue
            if under_in == 2:
                legs = legs[2:] + legs[:2]
                over_in = (over_in + 2) % 4
            sign = 1 if over_in == 3 else -1
            crossings.append(Crossing(index + 1, CLASSICAL, tuple(legs), sign))

        return cls(tuple(crossings), free_loops)

    @classmethod
    def from_gauss_code(cls, text: str) -> 'VirtualDiagram':
        """
        부호 있는 Gauss 코드로부터 다이어그램 생성

        형식: 'O1+ U2- ...' (고전 교차점), 'V3' (가상 교차점), 성분 구분은 '|'.
        가상 교차점을 생략하면 필요한 가상 교차점은 암묵적인 것으로 봄.

        Args:
            text: Gauss 코드 문자열

        Returns:
            VirtualDiagram: 다이어그램
        """
        token_pattern = re.compile(r'([OUV])(\d+)([+-]?)')
        components = []
        for chunk in text.split('|'):
            tokens = chunk.split()
            if not tokens:
                continue
            entries = []
            for token in tokens:
                match = token_pattern.fullmatch(token)
                if not match:
                    raise DiagramError(f"잘못된 Gauss 코드 토큰: {token!r}")
                role, number, sign = match.groups()
                if role != 'V' and not sign:
                    raise DiagramError(f"고전 교차점 토큰에는 부호가 필요합니다: {token!r}")
                entries.append((role, int(number), 1 if sign == '+' else -1))
            components.append(entries)

        if not components:
            return cls.unknot()

        # 각 항목의 (들어오는 변, 나가는 변)
        passes: Dict[int, List[Tuple[str, int, int, int]]] = {}
        label = 0
        for entries in components:
            first_label = label + 1
            for position, (role, number, sign) in enumerate(entries):
                in_label = first_label + position
                out_label = first_label + (position + 1) % len(entries)
                passes.setdefault(number, []).append((role, sign, in_label, out_label))
            label += len(entries)

        crossings = []
        for number in sorted(passes):
            visits = passes[number]
            roles = sorted(role for role, _, _, _ in visits)
            if roles == ['V', 'V']:
                (_, _, in1, out1), (_, _, in2, out2) = visits
                crossings.append(Crossing(number, VIRTUAL, (in1, in2, out1, out2)))
                continue
            if roles != ['O', 'U']:
                raise DiagramError(f"교차점 {number}은(는) O와 U로 한 번씩 나타나야 합니다.")
            over = next(v for v in visits if v[0] == 'O')
            under = next(v for v in visits if v[0] == 'U')
            if over[1] != under[1]:
                raise DiagramError(f"교차점 {number}의 부호가 일치하지 않습니다.")
            sign = over[1]
            if sign > 0:
                legs = (under[2], over[3], under[3], over[2])
            else:
                legs = (under[2], over[2], under[3], over[3])
            crossings.append(Crossing(number, CLASSICAL, legs, sign))

        return cls(tuple(crossings))

    # ------------------------------------------------------------------
    # 조회
    # ------------------------------------------------------------------
    def classical(self) -> List[Crossing]:
        return [c for c in self.crossings if c.kind == CLASSICAL]

    def virtual(self) -> List[Crossing]:
        return [c for c in self.crossings if c.kind == VIRTUAL]

    def crossing(self, crossing_id: int) -> Crossing:
        for c in self.crossings:
            if c.id == crossing_id:
                return c
        raise DiagramError(f"교차점 {crossing_id}이(가) 없습니다.")

    def edges(self) -> List[int]:
        return sorted({label for c in self.crossings for label in c.legs})

    @property
    def writhe(self) -> int:
        return sum(c.sign for c in self.crossings if c.kind == CLASSICAL)

    def _heads(self) -> Dict[int, Slot]:
        heads = {}
        for index, crossing in enumerate(self.crossings):
            for slot in crossing.in_slots():
                heads[crossing.legs[slot]] = (index, slot)
        return heads

    def _tails(self) -> Dict[int, Slot]:
        tails = {}
        for index, crossing in enumerate(self.crossings):
            for slot in crossing.out_slots():
                tails[crossing.legs[slot]] = (index, slot)
        return tails

    def traverse(self) -> List[List[Slot]]:
        """
        성분별 통과 순서

        Returns:
            List[List[Slot]]: 성분마다 (교차점 인덱스, 들어오는 슬롯) 목록
        """
        heads = self._heads()
        visited = set()
        components = []
        for index, crossing in enumerate(self.crossings):
            for slot in crossing.in_slots():
                if (index, slot) in visited:
                    continue
                component = []
                current = (index, slot)
                while current not in visited:
                    visited.add(current)
                    component.append(current)
                    out_label = self.crossings[current[0]].legs[(current[1] + 2) % 4]
                    current = heads[out_label]
                components.append(component)
        return components

    def component_count(self) -> int:
        return len(self.traverse()) + self.free_loops

    def gauss_code(self) -> str:
        """
        부호 있는 Gauss 코드 (가상 교차점 표시 포함)

        Returns:
            str: 'O1+ U2- V3 ... | ...' 형식
        """
        chunks = []
        for component in self.traverse():
            tokens = []
            for index, slot in component:
                crossing = self.crossings[index]
                if crossing.kind == VIRTUAL:
                    tokens.append(f"V{crossing.id}")
                else:
                    role = 'U' if slot == 0 else 'O'
                    tokens.append(f"{role}{crossing.id}{'+' if crossing.sign > 0 else '-'}")
            chunks.append(' '.join(tokens))
        return ' | '.join(chunks)

    def to_json(self) -> Dict:
        return {
            'crossings': [c.to_dict() for c in self.crossings],
            'free_loops': self.free_loops,
            'gauss_code': self.gauss_code(),
        }

    # ------------------------------------------------------------------
    # 내부 도우미
    # ------------------------------------------------------------------
    def _fresh_labels(self, count: int) -> List[int]:
        start = max(self.edges(), default=0) + 1
        return list(range(start, start + count))

    def _fresh_ids(self, count: int) -> List[int]:
        start = max((c.id for c in self.crossings), default=0) + 1
        return list(range(start, start + count))

    def _with_heads_relabeled(self, mapping: Mapping[int, int]) -> List[Crossing]:
        """변 라벨이 들어오는 다리로 쓰인 슬롯만 새 라벨로 교체한 교차점 목록"""
        heads = self._heads()
        crossings = list(self.crossings)
        for label, new_label in mapping.items():
            index, slot = heads[label]
            target = crossings[index]
            legs = list(target.legs)
            legs[slot] = new_label
            crossings[index] = Crossing(target.id, target.kind, tuple(legs), target.sign)
        return crossings

    def _require_edge(self, label: int) -> None:
        if label not in self._heads():
            raise DiagramError(f"변 {label}이(가) 없습니다.")


# ----------------------------------------------------------------------
# 다이어그램 변형
# ----------------------------------------------------------------------
def mirror(diagram: VirtualDiagram) -> VirtualDiagram:
    """모든 고전 교차점의 위/아래를 바꾼 거울상 (가닥 방향은 유지)"""
    crossings = []
    for c in diagram.crossings:
        if c.kind == VIRTUAL:
            crossings.append(c)
            continue
        p0, p1, p2, p3 = c.legs
        legs = (p3, p0, p1, p2) if c.sign > 0 else (p1, p2, p3, p0)
        crossings.append(Crossing(c.id, CLASSICAL, legs, -c.sign))
    return VirtualDiagram(tuple(crossings), diagram.free_loops)


def insert_kink(diagram: VirtualDiagram, edge: int, sign: int = 1) -> VirtualDiagram:
    """변 edge 위에 부호 sign인 R1 꼬임을 추가"""
    diagram._require_edge(edge)
    head_label, loop = diagram._fresh_labels(2)
    (new_id,) = diagram._fresh_ids(1)
    crossings = diagram._with_heads_relabeled({edge: head_label})
    if sign > 0:
        crossings.append(Crossing(new_id, CLASSICAL, (loop, loop, head_label, edge), 1))
    else:
        crossings.append(Crossing(new_id, CLASSICAL, (edge, loop, loop, head_label), -1))
    return VirtualDiagram(tuple(crossings), diagram.free_loops)


def _split_pair(diagram: VirtualDiagram, first: int, second: int):
    if first == second:
        raise DiagramError("R2 삽입에는 서로 다른 두 변이 필요합니다.")
    diagram._require_edge(first)
    diagram._require_edge(second)
    mid1, head1, mid2, head2 = diagram._fresh_labels(4)
    crossings = diagram._with_heads_relabeled({first: head1, second: head2})
    return crossings, (mid1, head1, mid2, head2)


def insert_classical_r2(diagram: VirtualDiagram, over_edge: int, under_edge: int) -> VirtualDiagram:
    """over_edge가 under_edge 위로 두 번 지나가는 고전 R2 쌍을 추가"""
    crossings, (mid1, head1, mid2, head2) = _split_pair(diagram, over_edge, under_edge)
    id1, id2 = diagram._fresh_ids(2)
    crossings.append(Crossing(id1, CLASSICAL, (under_edge, over_edge, mid2, mid1), -1))
    crossings.append(Crossing(id2, CLASSICAL, (mid2, head1, head2, mid1), 1))
    return VirtualDiagram(tuple(crossings), diagram.free_loops)


def insert_virtual_r2(diagram: VirtualDiagram, first_edge: int, second_edge: int) -> VirtualDiagram:
    """두 변 사이에 인접한 가상 교차점 두 개(가상 R2)를 추가"""
    crossings, (mid1, head1, mid2, head2) = _split_pair(diagram, first_edge, second_edge)
    id1, id2 = diagram._fresh_ids(2)
    crossings.append(Crossing(id1, VIRTUAL, (second_edge, first_edge, mid2, mid1)))
    crossings.append(Crossing(id2, VIRTUAL, (mid2, mid1, head2, head1)))
    return VirtualDiagram(tuple(crossings), diagram.free_loops)


def virtualize(diagram: VirtualDiagram, crossing_id: int) -> VirtualDiagram:
    """
    고전 교차점을 가상-고전-가상 순서로 교체 (Z-move와 동치)

    안쪽 고전 교차점은 원래 id를 유지하며 위/아래 가닥이 바뀜.
    """
    target = diagram.crossing(crossing_id)
    if target.kind != CLASSICAL:
        raise DiagramError(f"교차점 {crossing_id}은(는) 고전 교차점이 아닙니다.")

    p0, p1, p2, p3 = target.legs
    n0, n1, n2, n3 = diagram._fresh_labels(4)
    v1, v2 = diagram._fresh_ids(2)
    if target.sign > 0:
        replacement = [
            Crossing(v2, VIRTUAL, (p0, p3, n3, n0)),
            Crossing(crossing_id, CLASSICAL, (n0, n1, n2, n3), 1),
            Crossing(v1, VIRTUAL, (n1, n2, p2, p1)),
        ]
    else:
        replacement = [
            Crossing(v1, VIRTUAL, (n1, p1, p2, n2)),
            Crossing(crossing_id, CLASSICAL, (n2, n3, n0, n1), -1),
            Crossing(v2, VIRTUAL, (p0, n0, n3, p3)),
        ]

    crossings = []
    for c in diagram.crossings:
        if c.id == crossing_id:
            crossings.extend(replacement)
        else:
            crossings.append(c)
    return VirtualDiagram(tuple(crossings), diagram.free_loops)


def delete_virtual_pairs(diagram: VirtualDiagram) -> VirtualDiagram:
    """
    인접한 가상 교차점 쌍(가상 R2)을 고정점까지 제거

    두 가닥이 모두 한 가상 교차점에서 다른 가상 교차점으로 바로 이어지는 경우만 제거함.
    """
    current = diagram
    while True:
        reduced = _delete_one_virtual_pair(current)
        if reduced is None:
            return current
        current = reduced


def _delete_one_virtual_pair(diagram: VirtualDiagram) -> Optional[VirtualDiagram]:
    heads = diagram._heads()
    virtuals = [(index, c) for index, c in enumerate(diagram.crossings) if c.kind == VIRTUAL]
    for first_index, first in virtuals:
        targets = [heads[first.legs[2]], heads[first.legs[3]]]
        second_index = targets[0][0]
        if targets[1][0] != second_index or second_index == first_index:
            continue
        second = diagram.crossings[second_index]
        if second.kind != VIRTUAL or {targets[0][1], targets[1][1]} != {0, 1}:
            continue

        removed = {first_index, second_index}
        merged = UnionFind()
        for strand, (_, entry_slot) in enumerate(targets):
            merged.union(first.legs[strand], second.legs[entry_slot + 2])
        classes = [sorted(group) for group in merged.to_sets()]
        rename = {label: group[0] for group in classes for label in group}

        crossings = []
        for index, c in enumerate(diagram.crossings):
            if index in removed:
                continue
            legs = tuple(rename.get(label, label) for label in c.legs)
            crossings.append(Crossing(c.id, c.kind, legs, c.sign))

        # 제거된 두 교차점만 지나던 가닥은 자유 고리가 됨
        remaining = {label for c in crossings for label in c.legs}
        closed = sum(1 for group in classes if group[0] not in remaining)
        return VirtualDiagram(tuple(crossings), diagram.free_loops + closed)
    return None


def diagram_stats(diagram: VirtualDiagram) -> DiagramStats:
    """성분 수, writhe, 고전/가상 교차점 수"""
    return DiagramStats(
        components=diagram.component_count(),
        writhe=diagram.writhe,
        classical_count=len(diagram.classical()),
        virtual_count=len(diagram.virtual()),
    )


# ----------------------------------------------------------------------
# 상태합
# ----------------------------------------------------------------------
def state_loops(diagram: VirtualDiagram, state: SmoothingState) -> int:
    """
    상태 state로 모든 고전 교차점을 스무딩했을 때 생기는 닫힌 고리 수

    가상 교차점은 두 가닥이 그대로 통과하는 것으로 취급.
    """
    missing = [c.id for c in diagram.classical() if c.id not in state.choice]
    if missing:
        raise DiagramError(f"스무딩 상태가 불완전합니다: 교차점 {missing} 누락")

    loops = UnionFind(diagram.edges())
    for c in diagram.crossings:
        if c.kind == VIRTUAL:
            pairs = ((0, 2), (1, 3))
        elif state.choice[c.id] == 'A':
            pairs = A_PAIRS
        elif state.choice[c.id] == 'B':
            pairs = B_PAIRS
        else:
            raise DiagramError(f"알 수 없는 스무딩 선택: {state.choice[c.id]!r}")
        for i, j in pairs:
            loops.union(c.legs[i], c.legs[j])

    return sum(1 for _ in loops.to_sets()) + diagram.free_loops


def _collapse_virtual(diagram: VirtualDiagram) -> Tuple[List[Tuple[int, ...]], int]:
    """가상 교차점을 통과시켜 고전 교차점 다리만 남기고, 고전 교차점이 없는 성분 수를 함께 반환"""
    merged = UnionFind(diagram.edges())
    for c in diagram.virtual():
        merged.union(c.legs[0], c.legs[2])
        merged.union(c.legs[1], c.legs[3])
    rep = {label: min(group) for group in merged.to_sets() for label in group}

    classical = [tuple(rep[label] for label in c.legs) for c in diagram.classical()]
    used = {label for legs in classical for label in legs}
    extra = len(set(rep.values()) - used)
    return classical, diagram.free_loops + extra


def _contraction_order(classical: List[Tuple[int, ...]]) -> List[Tuple[int, ...]]:
    """열린 끝점이 작게 유지되도록 이미 연결된 다리가 많은 교차점부터 선택"""
    remaining = list(range(len(classical)))
    frontier: set = set()
    order = []
    while remaining:
        best = max(remaining, key=lambda i: (sum(1 for label in classical[i] if label in frontier), -i))
        remaining.remove(best)
        order.append(classical[best])
        for label in classical[best]:
            frontier ^= {label}
    return order


def _attach(ends: Dict[int, int], u: int, v: int) -> int:
    """열린 경로 집합에 호 (u, v)를 붙이고 닫힌 고리 수(0 또는 1)를 반환"""
    if u == v:
        return 1
    if ends.get(u) == v:
        del ends[u]
        del ends[v]
        return 1
    left = ends.pop(u, None)
    if left is None:
        left = u
    else:
        del ends[left]
    right = ends.pop(v, None)
    if right is None:
        right = v
    else:
        del ends[right]
    ends[left] = right
    ends[right] = left
    return 0


def _contract(classical: List[Tuple[int, ...]]) -> Counter:
    """교차점을 하나씩 스무딩하며 (열린 경로 구성 → (A 지수, 고리 수) 가중치)를 갱신"""
    states: Dict[Tuple, Counter] = {(): Counter({(0, 0): 1})}
    for legs in _contraction_order(classical):
        updated: Dict[Tuple, Counter] = {}
        for key, weights in states.items():
            for shift, pairs in ((1, A_PAIRS), (-1, B_PAIRS)):
                ends = {}
                for a, b in key:
                    ends[a] = b
                    ends[b] = a
                closed = sum(_attach(ends, legs[i], legs[j]) for i, j in pairs)
                new_key = tuple(sorted((a, b) for a, b in ends.items() if a < b))
                bucket = updated.setdefault(new_key, Counter())
                for (exponent, loops), count in weights.items():
                    bucket[(exponent + shift, loops + closed)] += count
        states = updated
        logger.debug(f"축약 경계 상태 수: {len(states)}")
    return states.get((), Counter())


def _enumerate_chunk(payload) -> Counter:
    diagram, ids, start, stop = payload
    weights: Counter = Counter()
    for mask in range(start, stop):
        choice = {cid: ('A' if (mask >> bit) & 1 else 'B') for bit, cid in enumerate(ids)}
        state = SmoothingState(choice)
        weights[(state.n, state_loops(diagram, state))] += 1
    return weights


def _enumerate(diagram: VirtualDiagram, workers: int) -> Counter:
    """2^n개 상태 전체 열거 (검증용). 상태 공간을 구간으로 나누어 워커에 분배"""
    ids = [c.id for c in diagram.classical()]
    total = 1 << len(ids)
    chunk_count = max(1, min(total, workers * 4))
    bounds = [total * k // chunk_count for k in range(chunk_count + 1)]
    payloads = [(diagram, ids, bounds[k], bounds[k + 1]) for k in range(chunk_count)]

    if workers > 1 and total > 1:
        with Pool(workers) as pool:
            partials = pool.map(_enumerate_chunk, payloads)
    else:
        partials = [_enumerate_chunk(payload) for payload in payloads]

    weights: Counter = Counter()
    for partial in partials:
        weights.update(partial)
    return weights


def _weights_to_bracket(weights: Counter, extra_loops: int) -> LaurentPolynomial:
    by_loops: Dict[int, LaurentPolynomial] = {}
    for (exponent, loops), count in sorted(weights.items()):
        total = loops + extra_loops
        if total == 0:
            raise DiagramError("빈 다이어그램의 브래킷은 정의되지 않습니다.")
        term = LaurentPolynomial.monomial(count, A=exponent)
        by_loops[total] = by_loops.get(total, ZERO) + term

    result = ZERO
    for total, polynomial in sorted(by_loops.items()):
        result = result + polynomial * LOOP_VALUE ** (total - 1)
    return result


def kauffman_bracket(
    diagram: VirtualDiagram,
    state_limit: Optional[int] = None,
    method: str = 'contract',
    workers: Optional[int] = None
) -> LaurentPolynomial:
    """
    Kauffman 브래킷 <D> = Σ_S A^(a-b) (-A²-A⁻²)^(loops-1)

    Args:
        diagram: 다이어그램
        state_limit: 고전 교차점 수 한도 (기본값은 설정값)
        method: 'contract' (경계 축약) 또는 'enumerate' (전체 상태 열거)
        workers: enumerate 방식의 워커 프로세스 수

    Returns:
        LaurentPolynomial: A에 대한 다항식
    """
    limit = state_limit if state_limit is not None else settings.state_limit
    count = len(diagram.classical())
    if count > limit:
        raise StateSumTooLargeError(
            f"state sum too large: 고전 교차점 {count}개가 한도 {limit}개를 초과합니다."
        )

    logger.info(f"상태합 계산: 고전 교차점 {count}개, 상태 {1 << count}개, 방식 {method}")

    if method == 'enumerate':
        weights = _enumerate(diagram, workers or settings.workers)
        return _weights_to_bracket(weights, 0)
    if method == 'contract':
        classical, extra = _collapse_virtual(diagram)
        return _weights_to_bracket(_contract(classical), extra)
    raise DiagramError(f"알 수 없는 상태합 방식: {method}")


def writhe_factor(writhe: int) -> LaurentPolynomial:
    """(-A³)^(-w)"""
    return (-(A ** 3)) ** (-writhe)


def jones(
    diagram: VirtualDiagram,
    normalize: bool = True,
    state_limit: Optional[int] = None,
    method: str = 'contract',
    workers: Optional[int] = None
) -> LaurentPolynomial:
    """
    Jones 다항식: (-A³)^(-w)<D>에 A = t^(-1/4) 대입

    Args:
        diagram: 다이어그램
        normalize: False이면 writhe 보정 없이 브래킷에 바로 대입

    Returns:
        LaurentPolynomial: t에 대한 다항식 (4분의 1 지수 허용)
    """
    bracket = kauffman_bracket(diagram, state_limit=state_limit, method=method, workers=workers)
    if normalize:
        bracket = writhe_factor(diagram.writhe) * bracket
    return bracket.substitute(JONES_MAP)
