"""
Conway 표기 모듈
확장 Conway 표기(가상 교차점 i 포함)를 파싱해 AST로 만들고,
탱글 합성과 분자 닫기(numerator closure)로 가상 링크 다이어그램을 조립
"""
import logging
import random
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple, Union

from networkx.utils import UnionFind

from modules.diagram import CLASSICAL, VIRTUAL, VirtualDiagram
from modules.errors import ConwayParseError

logger = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# AST
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class Integer:
    n: int


@dataclass(frozen=True)
class Virtual:
    pass


@dataclass(frozen=True)
class Product:
    factors: Tuple['ConwayExpr', ...]


@dataclass(frozen=True)
class Ramification:
    parts: Tuple['ConwayExpr', ...]


ConwayExpr = Union[Integer, Virtual, Product, Ramification]

VIRTUAL_LEAF = Virtual()


def make_product(factors: List[ConwayExpr]) -> ConwayExpr:
    """곱은 왼쪽 결합이므로 맨 앞의 곱 인자는 펼침"""
    if len(factors) == 1:
        return factors[0]
    if isinstance(factors[0], Product):
        factors = list(factors[0].factors) + list(factors[1:])
    return Product(tuple(factors))


def make_ramification(parts: List[ConwayExpr]) -> ConwayExpr:
    if len(parts) == 1:
        return parts[0]
    return Ramification(tuple(parts))


# ----------------------------------------------------------------------
# 파서
# ----------------------------------------------------------------------
class ConwayParser:
    """
    확장 Conway 표기 파서

    문법:
        expr := ram ; ram := prod ("," prod)* ; prod := atom (WS atom)* ;
        atom := signed_int pow? | "i" pow? | "(" ram ")" pow? ;
        signed_int := "-"? digit+ ; pow := "^" digit+ .

    거듭제곱은 쉼표 항 자리에 홀로 있으면 쉼표로 이어진 복사본으로,
    여러 인자의 곱 안에 있으면 곱 인자의 반복으로 펼친다.
    """

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.logger = logging.getLogger(__name__)

    def parse(self) -> ConwayExpr:
        if not self.text.strip():
            raise ConwayParseError("빈 입력입니다", 0)
        if self.text.strip() in ('0', '-0'):
            return Integer(0)

        self._skip_ws()
        node = self._ram()
        self._skip_ws()
        if self.pos < len(self.text):
            if self._peek() == ')':
                raise ConwayParseError("괄호가 맞지 않습니다", self.pos)
            raise ConwayParseError(f"예상하지 못한 문자 {self._peek()!r}", self.pos)

        self.logger.debug(f"파싱 완료: {self.text!r} → {to_text(node)}")
        return node

    def _peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ''

    def _skip_ws(self) -> bool:
        start = self.pos
        while self._peek() and self._peek().isspace():
            self.pos += 1
        return self.pos > start

    def _ram(self) -> ConwayExpr:
        if self._peek() == ',':
            raise ConwayParseError("쉼표 앞에 항이 없습니다", self.pos)
        parts = self._ram_part()
        while True:
            self._skip_ws()
            if self._peek() != ',':
                break
            self.pos += 1
            self._skip_ws()
            if self._peek() in ('', ',', ')'):
                raise ConwayParseError("쉼표 뒤에 항이 없습니다", self.pos)
            parts.extend(self._ram_part())
        return make_ramification(parts)

    def _ram_part(self) -> List[ConwayExpr]:
        atoms = self._prod()
        if len(atoms) == 1:
            node, power = atoms[0]
            return [node] * power
        factors: List[ConwayExpr] = []
        for node, power in atoms:
            factors.extend([node] * power)
        return [make_product(factors)]

    def _prod(self) -> List[Tuple[ConwayExpr, int]]:
        atoms = [self._atom()]
        while True:
            mark = self.pos
            spaced = self._skip_ws()
            ch = self._peek()
            if not (ch == '(' or ch == 'i' or ch == '-' or ch.isdigit()):
                self.pos = mark
                return atoms
            if not spaced and ch != '(' and self.text[mark - 1] != ')':
                raise ConwayParseError("곱 인자 사이에는 공백이 필요합니다", self.pos)
            atoms.append(self._atom())

    def _atom(self) -> Tuple[ConwayExpr, int]:
        ch = self._peek()
        if ch == '(':
            start = self.pos
            self.pos += 1
            self._skip_ws()
            if self._peek() == ')':
                raise ConwayParseError("빈 괄호입니다", self.pos)
            node = self._ram()
            self._skip_ws()
            if self._peek() != ')':
                raise ConwayParseError("괄호가 맞지 않습니다", start if not self._peek() else self.pos)
            self.pos += 1
        elif ch == 'i':
            self.pos += 1
            node = VIRTUAL_LEAF
        elif ch == '-' or ch.isdigit():
            node = Integer(self._signed_int())
        elif not ch:
            raise ConwayParseError("입력이 예상보다 일찍 끝났습니다", self.pos)
        else:
            raise ConwayParseError(f"예상하지 못한 문자 {ch!r}", self.pos)
        return node, self._power()

    def _signed_int(self) -> int:
        start = self.pos
        if self._peek() == '-':
            self.pos += 1
        digits_start = self.pos
        while self._peek().isdigit():
            self.pos += 1
        if self.pos == digits_start:
            raise ConwayParseError("'-' 뒤에 숫자가 필요합니다", self.pos)
        value = int(self.text[start:self.pos])
        if value == 0:
            raise ConwayParseError("0은 식 전체로만 쓸 수 있습니다", start)
        return value

    def _power(self) -> int:
        if self._peek() != '^':
            return 1
        self.pos += 1
        start = self.pos
        if self._peek() == '-':
            raise ConwayParseError("지수는 양의 정수여야 합니다", self.pos)
        while self._peek().isdigit():
            self.pos += 1
        if self.pos == start:
            raise ConwayParseError("'^' 뒤에 지수가 필요합니다", self.pos)
        power = int(self.text[start:self.pos])
        if power == 0:
            raise ConwayParseError("지수는 양의 정수여야 합니다 (^0)", start)
        return power


def parse_conway(text: str) -> ConwayExpr:
    """확장 Conway 표기 문자열을 AST로 파싱"""
    return ConwayParser(text).parse()


# ----------------------------------------------------------------------
# 출력
# ----------------------------------------------------------------------
def to_text(expr: ConwayExpr) -> str:
    """AST의 정규 문자열 (parse_conway의 역)"""
    if isinstance(expr, Integer):
        return str(expr.n)
    if isinstance(expr, Virtual):
        return 'i'
    if isinstance(expr, Product):
        pieces = []
        for index, factor in enumerate(expr.factors):
            text = to_text(factor)
            if isinstance(factor, Ramification) or (isinstance(factor, Product) and index > 0):
                text = f"({text})"
            pieces.append(text)
        return ' '.join(pieces)
    pieces = []
    for part in expr.parts:
        text = to_text(part)
        pieces.append(f"({text})" if isinstance(part, Ramification) else text)
    return ','.join(pieces)


def canonical(text: str) -> str:
    return to_text(parse_conway(text))


def to_json(expr: ConwayExpr) -> Dict:
    if isinstance(expr, Integer):
        return {'type': 'integer', 'value': expr.n}
    if isinstance(expr, Virtual):
        return {'type': 'virtual'}
    if isinstance(expr, Product):
        return {'type': 'product', 'factors': [to_json(f) for f in expr.factors]}
    return {'type': 'ramification', 'parts': [to_json(p) for p in expr.parts]}


def leaves(expr: ConwayExpr) -> Iterator[ConwayExpr]:
    """왼쪽부터 순서대로 잎(Integer, Virtual)을 나열"""
    if isinstance(expr, (Integer, Virtual)):
        yield expr
        return
    children = expr.factors if isinstance(expr, Product) else expr.parts
    for child in children:
        yield from leaves(child)


def classical_leaf_total(expr: ConwayExpr) -> int:
    return sum(abs(leaf.n) for leaf in leaves(expr) if isinstance(leaf, Integer))


def virtual_leaf_total(expr: ConwayExpr) -> int:
    return sum(1 for leaf in leaves(expr) if isinstance(leaf, Virtual))


def negate(expr: ConwayExpr) -> ConwayExpr:
    """모든 Integer 잎의 부호를 바꾼 식 (거울상 다이어그램)"""
    if isinstance(expr, Integer):
        return Integer(-expr.n)
    if isinstance(expr, Virtual):
        return expr
    if isinstance(expr, Product):
        return Product(tuple(negate(f) for f in expr.factors))
    return Ramification(tuple(negate(p) for p in expr.parts))


def random_conway(
    rng: random.Random,
    max_leaves: int = 6,
    virtual_rate: float = 0.25,
    allow_negative: bool = True,
    max_twist: int = 2
) -> ConwayExpr:
    """무작위 AST 생성 (성질 검사용)"""
    budget = rng.randint(1, max_leaves)
    return _random_node(rng, budget, virtual_rate, allow_negative, max_twist)


def _random_node(rng, budget, virtual_rate, allow_negative, max_twist) -> ConwayExpr:
    if budget == 1:
        if rng.random() < virtual_rate:
            return VIRTUAL_LEAF
        value = rng.randint(1, max_twist)
        if allow_negative and rng.random() < 0.5:
            value = -value
        return Integer(value)

    count = rng.randint(2, min(budget, 3))
    cuts = sorted(rng.sample(range(1, budget), count - 1))
    sizes = [b - a for a, b in zip([0] + cuts, cuts + [budget])]
    children = [_random_node(rng, size, virtual_rate, allow_negative, max_twist) for size in sizes]
    if rng.random() < 0.5:
        return make_product(children)
    return Ramification(tuple(children))


# ----------------------------------------------------------------------
# 탱글 합성
# ----------------------------------------------------------------------
NW, NE, SW, SE = 'NW', 'NE', 'SW', 'SE'


@dataclass
class Tangle:
    """
    네 끝점(NW, NE, SW, SE)을 가진 다이어그램 조각

    crossings의 legs는 반시계 방향 끝 라벨, glue는 서로 이어진 끝 라벨 쌍.
    """
    crossings: List[Tuple[str, Tuple[int, int, int, int]]]
    boundary: Dict[str, int]
    glue: List[Tuple[int, int]] = field(default_factory=list)


class TangleBuilder:
    """
    AST를 탱글로 조립하고 분자 닫기로 다이어그램을 만드는 클래스

    규약:
        - 정수 n: |n|개의 교차점을 가로로 꼰 탱글. n > 0이면 NW-SE 가닥이 위로 지나며 닫으면 양의 꼬임
        - i: 가상 교차점 하나
        - 곱 a b: a를 NW-SE 대각선에 대해 뒤집은 뒤(사분 회전 후 위/아래 교환) b와 가로 합
        - 분기 a,b,...: 각 항을 뒤집은 뒤 가로 합
        - 닫기: NW-NE, SW-SE 연결
    """

    def __init__(self):
        self._next_label = 0
        self.logger = logging.getLogger(__name__)

    def _labels(self, count: int) -> List[int]:
        start = self._next_label
        self._next_label += count
        return list(range(start, start + count))

    def integer(self, n: int) -> Tangle:
        crossings = []
        glue = []
        boundary: Dict[str, int] = {}
        previous: Optional[Tuple[int, int]] = None
        for _ in range(abs(n)):
            nw, sw, se, ne = self._labels(4)
            legs = (sw, se, ne, nw) if n > 0 else (nw, sw, se, ne)
            crossings.append((CLASSICAL, legs))
            if previous is None:
                boundary[NW], boundary[SW] = nw, sw
            else:
                glue.extend([(previous[0], nw), (previous[1], sw)])
            previous = (ne, se)
        boundary[NE], boundary[SE] = previous
        return Tangle(crossings, boundary, glue)

    def virtual(self) -> Tangle:
        nw, sw, se, ne = self._labels(4)
        return Tangle([(VIRTUAL, (nw, sw, se, ne))], {NW: nw, SW: sw, SE: se, NE: ne})

    @staticmethod
    def add(left: Tangle, right: Tangle) -> Tangle:
        boundary = {NW: left.boundary[NW], SW: left.boundary[SW],
                    NE: right.boundary[NE], SE: right.boundary[SE]}
        glue = left.glue + right.glue + [
            (left.boundary[NE], right.boundary[NW]),
            (left.boundary[SE], right.boundary[SW]),
        ]
        return Tangle(left.crossings + right.crossings, boundary, glue)

    @staticmethod
    def reflect(tangle: Tangle) -> Tangle:
        """NW-SE 대각선에 대한 반사: NE와 SW가 바뀌고 교차점의 회전 방향이 뒤집힘"""
        crossings = [(kind, (p0, p3, p2, p1)) for kind, (p0, p1, p2, p3) in tangle.crossings]
        boundary = {NW: tangle.boundary[NW], SE: tangle.boundary[SE],
                    NE: tangle.boundary[SW], SW: tangle.boundary[NE]}
        return Tangle(crossings, boundary, list(tangle.glue))

    def build(self, expr: ConwayExpr) -> Tangle:
        if isinstance(expr, Integer):
            if expr.n == 0:
                raise ValueError("0 탱글은 식 전체로만 쓸 수 있습니다")
            return self.integer(expr.n)
        if isinstance(expr, Virtual):
            return self.virtual()
        if isinstance(expr, Product):
            result = self.build(expr.factors[0])
            for factor in expr.factors[1:]:
                result = self.add(self.reflect(result), self.build(factor))
            return result
        parts = [self.reflect(self.build(part)) for part in expr.parts]
        result = parts[0]
        for part in parts[1:]:
            result = self.add(result, part)
        return result

    def close(self, tangle: Tangle) -> VirtualDiagram:
        """분자 닫기 후 변 라벨을 정리하여 다이어그램 생성"""
        merged = UnionFind()
        for label in range(self._next_label):
            merged[label]
        for a, b in tangle.glue + [(tangle.boundary[NW], tangle.boundary[NE]),
                                   (tangle.boundary[SW], tangle.boundary[SE])]:
            merged.union(a, b)

        relabel: Dict[int, int] = {}
        raw = []
        for kind, legs in tangle.crossings:
            new_legs = []
            for label in legs:
                root = merged[label]
                if root not in relabel:
                    relabel[root] = len(relabel) + 1
                new_legs.append(relabel[root])
            raw.append((kind, tuple(new_legs)))
        return VirtualDiagram.from_unoriented(raw)


def build_diagram(expr: ConwayExpr) -> VirtualDiagram:
    """AST를 탱글로 조립하고 분자 닫기로 닫은 가상 링크 다이어그램"""
    if isinstance(expr, Integer) and expr.n == 0:
        return VirtualDiagram.unknot()
    builder = TangleBuilder()
    diagram = builder.close(builder.build(expr))
    logger.debug(f"다이어그램 조립: {to_text(expr)} → 고전 {len(diagram.classical())}, 가상 {len(diagram.virtual())}")
    return diagram


def diagram_from_text(text: str) -> VirtualDiagram:
    return build_diagram(parse_conway(text))
