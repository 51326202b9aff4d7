"""
로랑 다항식 모듈
고정 변수 {x, y, X, Y, d, A, t} 위의 정수 계수 다변수 로랑 다항식 연산

t의 지수는 내부적으로 4배(1/4 단위)로 저장한다.
"""
import cmath
import logging
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple

from modules.errors import NotInvertibleError

logger = logging.getLogger(__name__)

VARIABLES: Tuple[str, ...] = ('x', 'y', 'X', 'Y', 'd', 'A', 't')
_INDEX = {name: i for i, name in enumerate(VARIABLES)}
_ZERO_EXP = (0,) * len(VARIABLES)

# t 지수의 저장 배율
T_SCALE = 4

Monomial = Tuple[int, ...]


def _check_variable(name: str) -> int:
    if name not in _INDEX:
        raise ValueError(f"알 수 없는 변수: {name}")
    return _INDEX[name]


def _add_exp(a: Monomial, b: Monomial) -> Monomial:
    return tuple(i + j for i, j in zip(a, b))


class LaurentPolynomial:
    """
    정수 계수 로랑 다항식 (불변 값 객체)

    terms는 지수 튜플(VARIABLES 순서) → 0이 아닌 정수 계수 매핑이다.
    """

    __slots__ = ('_terms', '_hash')

    def __init__(self, terms: Optional[Mapping[Monomial, int]] = None):
        clean: Dict[Monomial, int] = {}
        if terms:
            for mono, coeff in terms.items():
                if len(mono) != len(VARIABLES):
                    raise ValueError(f"잘못된 단항식 길이: {mono}")
                if coeff:
                    clean[tuple(mono)] = int(coeff)
        self._terms = clean
        self._hash = None

    # ----- 생성자 -----

    @classmethod
    def constant(cls, value: int) -> 'LaurentPolynomial':
        return cls({_ZERO_EXP: value})

    @classmethod
    def variable(cls, name: str, power: int = 1) -> 'LaurentPolynomial':
        """변수 하나의 거듭제곱. t의 power는 수학적 지수(정수)이다."""
        idx = _check_variable(name)
        exps = [0] * len(VARIABLES)
        exps[idx] = power * T_SCALE if name == 't' else power
        return cls({tuple(exps): 1})

    @classmethod
    def monomial(cls, coeff: int = 1, **exponents: int) -> 'LaurentPolynomial':
        """
        단항식 생성

        t는 1/4 단위 정수로 받는다 (예: t=-1 은 t^(-1/4)).
        """
        exps = [0] * len(VARIABLES)
        for name, value in exponents.items():
            exps[_check_variable(name)] = value
        return cls({tuple(exps): coeff})

    # ----- 조회 -----

    @property
    def terms(self) -> Dict[Monomial, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def constant_term(self) -> int:
        return self._terms.get(_ZERO_EXP, 0)

    def variables(self) -> Tuple[str, ...]:
        """실제로 등장하는 변수 목록 (정규 순서)"""
        used = set()
        for mono in self._terms:
            for i, e in enumerate(mono):
                if e:
                    used.add(i)
        return tuple(VARIABLES[i] for i in sorted(used))

    def univariate_coefficients(self, name: str) -> Dict[int, int]:
        """
        단변수 다항식의 (저장 지수 → 계수) 사전

        Raises:
            ValueError: 다른 변수가 섞여 있는 경우
        """
        idx = _check_variable(name)
        out: Dict[int, int] = {}
        for mono, coeff in self._terms.items():
            if any(e for i, e in enumerate(mono) if i != idx):
                raise ValueError(f"{name} 외의 변수가 포함되어 있습니다: {self}")
            out[mono[idx]] = coeff
        return out

    # ----- 환 연산 -----

    @staticmethod
    def _coerce(other) -> 'LaurentPolynomial':
        if isinstance(other, LaurentPolynomial):
            return other
        if isinstance(other, int):
            return LaurentPolynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for mono, coeff in other._terms.items():
            out[mono] = out.get(mono, 0) + coeff
        return LaurentPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = _add_exp(m1, m2)
                out[mono] = out.get(mono, 0) + c1 * c2
        return LaurentPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, power: int):
        if not isinstance(power, int):
            return NotImplemented
        if power < 0:
            return self.inverse() ** (-power)
        result = LaurentPolynomial.constant(1)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    def inverse(self) -> 'LaurentPolynomial':
        """
        역원 (계수 ±1 인 단항식만 가능)

        Raises:
            NotInvertibleError: 단항식이 아니거나 계수가 ±1이 아닌 경우
        """
        if not self.is_monomial():
            raise NotInvertibleError(f"not invertible: {self}")
        (mono, coeff), = self._terms.items()
        if coeff not in (1, -1):
            raise NotInvertibleError(f"not invertible: {self}")
        return LaurentPolynomial({tuple(-e for e in mono): coeff})

    # ----- 비교 -----

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # ----- 변환 -----

    def substitute(self, mapping: Mapping[str, 'LaurentPolynomial']) -> 'LaurentPolynomial':
        """
        변수 치환 (환 준동형)

        Args:
            mapping: 변수 이름 → 치환할 다항식. 없는 변수는 그대로 둔다.

        Returns:
            LaurentPolynomial: 치환 결과

        Raises:
            NotInvertibleError: 음의 지수로 등장하는 변수가 가역이 아닌 다항식에 대응되는 경우
        """
        images = {}
        for name, image in mapping.items():
            images[_check_variable(name)] = self._coerce(image)

        # 변수별 거듭제곱 캐시
        power_cache: Dict[Tuple[int, int], LaurentPolynomial] = {}

        def image_power(idx: int, exp: int) -> LaurentPolynomial:
            key = (idx, exp)
            if key not in power_cache:
                image = images[idx]
                # t의 저장 지수는 1/4 단위이므로 4의 배수만 치환 가능
                if VARIABLES[idx] == 't':
                    if exp % T_SCALE:
                        raise NotInvertibleError(f"t^({exp}/4)는 치환할 수 없습니다")
                    exp_math = exp // T_SCALE
                else:
                    exp_math = exp
                power_cache[key] = image ** exp_math
            return power_cache[key]

        result: Dict[Monomial, int] = {}
        for mono, coeff in self._terms.items():
            kept = list(mono)
            factor = LaurentPolynomial.constant(coeff)
            for idx in images:
                if mono[idx]:
                    factor = factor * image_power(idx, mono[idx])
                    kept[idx] = 0
            shift = tuple(kept)
            for m, c in factor._terms.items():
                key = _add_exp(m, shift)
                result[key] = result.get(key, 0) + c
        return LaurentPolynomial(result)

    def swap(self, pairs: Iterable[Tuple[str, str]]) -> 'LaurentPolynomial':
        """변수 쌍 교환 (예: [('x', 'y'), ('X', 'Y')] 는 쌍대 그래프 치환)"""
        perm = list(range(len(VARIABLES)))
        for a, b in pairs:
            ia, ib = _check_variable(a), _check_variable(b)
            perm[ia], perm[ib] = ib, ia
        out = {}
        for mono, coeff in self._terms.items():
            out[tuple(mono[perm[i]] for i in range(len(VARIABLES)))] = coeff
        return LaurentPolynomial(out)

    def invert_variable(self, name: str) -> 'LaurentPolynomial':
        """name → name^-1 (거울상: A↔A⁻¹, t↔t⁻¹)"""
        idx = _check_variable(name)
        out = {}
        for mono, coeff in self._terms.items():
            m = list(mono)
            m[idx] = -m[idx]
            out[tuple(m)] = coeff
        return LaurentPolynomial(out)

    def eval_complex(self, assignment: Mapping[str, complex]) -> complex:
        """
        복소수 값 대입

        t의 1/4 단위 지수는 주가지(principal branch)로 계산한다.

        Raises:
            ZeroDivisionError: 음의 지수를 가진 변수에 0을 대입한 경우
            KeyError: 등장하는 변수에 값이 주어지지 않은 경우
        """
        total = 0j
        for mono, coeff in self._terms.items():
            value = complex(coeff)
            for idx, exp in enumerate(mono):
                if not exp:
                    continue
                name = VARIABLES[idx]
                base = complex(assignment[name])
                if base == 0 and exp < 0:
                    raise ZeroDivisionError(f"{name}=0 에서 음의 지수 {exp}를 계산할 수 없습니다")
                if name == 't' and exp % T_SCALE:
                    value *= cmath.exp((exp / T_SCALE) * cmath.log(base)) if base else 0
                else:
                    value *= base ** (exp // T_SCALE if name == 't' else exp)
            total += value
        return total

    # ----- 출력 -----

    def sorted_terms(self):
        return sorted(self._terms.items())

    @staticmethod
    def _render_monomial(mono: Monomial) -> str:
        parts = []
        for idx, exp in enumerate(mono):
            if not exp:
                continue
            name = VARIABLES[idx]
            if name == 't':
                frac = Fraction(exp, T_SCALE)
                if frac.denominator == 1:
                    parts.append(f"t^{frac.numerator}")
                else:
                    parts.append(f"t^({frac.numerator}/{frac.denominator})")
            else:
                parts.append(f"{name}^{exp}")
        return '*'.join(parts)

    def to_text(self) -> str:
        """정규 텍스트 표현 (예: '-1*A^-4 + 1 + 1*A^2')"""
        if not self._terms:
            return '0'
        pieces = []
        for i, (mono, coeff) in enumerate(self.sorted_terms()):
            body = self._render_monomial(mono)
            magnitude = abs(coeff)
            text = f"{magnitude}*{body}" if body else f"{magnitude}"
            if i == 0:
                pieces.append(f"-{text}" if coeff < 0 else text)
            else:
                pieces.append(f"{'-' if coeff < 0 else '+'} {text}")
        return ' '.join(pieces)

    def to_json(self) -> list:
        """JSON 직렬화용 레코드 목록 (t 지수는 1/4 단위 정수)"""
        return [
            {
                'coeff': coeff,
                'exponents': {VARIABLES[i]: e for i, e in enumerate(mono) if e},
            }
            for mono, coeff in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, records: list) -> 'LaurentPolynomial':
        total = cls()
        for record in records:
            total = total + cls.monomial(record['coeff'], **record.get('exponents', {}))
        return total

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"LaurentPolynomial('{self.to_text()}')"


# 자주 쓰는 상수와 변수
ZERO = LaurentPolynomial()
ONE = LaurentPolynomial.constant(1)
x = LaurentPolynomial.variable('x')
y = LaurentPolynomial.variable('y')
X = LaurentPolynomial.variable('X')
Y = LaurentPolynomial.variable('Y')
d = LaurentPolynomial.variable('d')
A = LaurentPolynomial.variable('A')
t = LaurentPolynomial.variable('t')

LOOP_VALUE = -(A ** 2) - A ** -2

# Tutte → 브래킷 치환
BRACKET_MAP: Dict[str, LaurentPolynomial] = {
    'X': -(A ** -3),
    'Y': -(A ** 3),
    'x': A,
    'y': A ** -1,
    'd': LOOP_VALUE,
}

# A = t^(-1/4)
JONES_MAP: Dict[str, LaurentPolynomial] = {
    'A': LaurentPolynomial.monomial(1, t=-1),
}


def geom_sum(p: int, a: str = 'x', b: str = 'X') -> LaurentPolynomial:
    """
    (a^p - b^p) / (a - b) 를 로랑 다항식으로 계산

    Args:
        p: 임의의 정수 (음수와 0 포함)
        a, b: 변수 이름 (기본 x, X)

    Returns:
        LaurentPolynomial: q·(a - b) = a^p - b^p 를 만족하는 q
    """
    va, vb = LaurentPolynomial.variable(a), LaurentPolynomial.variable(b)
    if p == 0:
        return ZERO
    if p < 0:
        m = -p
        return -geom_sum(m, a, b) * va ** (-m) * vb ** (-m)
    total = ZERO
    for i in range(p):
        total = total + va ** (p - 1 - i) * vb ** i
    return total


def eval_complex(poly: LaurentPolynomial, assignment: Mapping[str, complex]) -> complex:
    """편의 함수: poly.eval_complex(assignment)"""
    return poly.eval_complex(assignment)


def substitute(poly: LaurentPolynomial, mapping: Mapping[str, LaurentPolynomial]) -> LaurentPolynomial:
    """편의 함수: poly.substitute(mapping)"""
    return poly.substitute(mapping)
