"""
Модуль аналитического спектра L_M как идеала в кольце функций на T*M.

Основные функции:
1. CotangentPoly - многочлены от y1, y2, y3 с коэффициентами Series2
2. Скобка Пуассона с соглашением {y2, t2} = -1
3. Образующие идеала в Y-репере (y1 - 1, Y22, Y23, Y33) и Z-репере (y1 - 1, Z2, Z3)
4. Редукция по модулю идеала к нормальной форме c0 + c2 y2 + c3 y3
5. Критерий F-многообразия через замкнутость идеала относительно скобки
6. Явные разложения скобок Y-образующих и невязки GH-скобки

Коэффициенты не зависят от t1, поэтому слагаемые с d/dt1 в скобке опускаются.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Tuple, Union

import sympy

from analytics.tangent_algebra import a_invariants, mult_matrix, require_associative
from models.exceptions import InvalidParameters
from models.fields import VectorField
from models.series import Scalar, Series2
from models.tables import (
    GhFrame,
    MultTable,
    Vec3,
    basis_vector,
    gh_to_table,
    mult,
    table_to_abc,
    table_to_gh,
)

logger = logging.getLogger(__name__)

Exponent = Tuple[int, int, int]


# ============================================================================
# CotangentPoly
# ============================================================================

class CotangentPoly:
    """
    Многочлен sum s_e(t2, t3) y1^e1 y2^e2 y3^e3.

    Attributes:
        terms: Отображение (e1, e2, e3) -> Series2 (нулевые не хранятся)
        truncation: Усечение коэффициентов
    """

    __slots__ = ('_terms', '_truncation')

    def __init__(self, terms: Optional[Mapping[Exponent, Series2]] = None, truncation: int = 8):
        clean: Dict[Exponent, Series2] = {}
        d = truncation
        for exps, coeff in (terms or {}).items():
            d = min(d, coeff.truncation)
        for exps, coeff in (terms or {}).items():
            if not coeff.is_zero():
                clean[tuple(exps)] = coeff
        self._terms = clean
        self._truncation = d

    @classmethod
    def zero(cls, truncation: int) -> 'CotangentPoly':
        return cls({}, truncation)

    @classmethod
    def constant(cls, value: Union[Series2, Scalar], truncation: int) -> 'CotangentPoly':
        if not isinstance(value, Series2):
            value = Series2.constant(value, truncation)
        return cls({(0, 0, 0): value}, truncation)

    @classmethod
    def y(cls, index: int, truncation: int) -> 'CotangentPoly':
        """Координата y_index на слое"""
        if index not in (1, 2, 3):
            raise InvalidParameters(f"Cotangent coordinate index must be 1, 2 or 3, got {index}")
        exps = tuple(1 if k == index else 0 for k in (1, 2, 3))
        return cls({exps: Series2.constant(1, truncation)}, truncation)

    @property
    def terms(self) -> Mapping[Exponent, Series2]:
        return dict(self._terms)

    @property
    def truncation(self) -> int:
        return self._truncation

    def coeff(self, exps: Exponent) -> Series2:
        return self._terms.get(tuple(exps), Series2.zero(self._truncation))

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=0)

    # ------------------------------------------------------------------
    # Арифметика
    # ------------------------------------------------------------------

    def _coerce(self, other) -> Optional['CotangentPoly']:
        if isinstance(other, CotangentPoly):
            return other
        if isinstance(other, Series2):
            return CotangentPoly.constant(other, other.truncation)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return CotangentPoly.constant(other, self._truncation)
        return None

    def __add__(self, other) -> 'CotangentPoly':
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        d = min(self._truncation, other._truncation)
        result = dict(self._terms)
        for exps, coeff in other._terms.items():
            result[exps] = result[exps] + coeff if exps in result else coeff
        return CotangentPoly(result, d)

    __radd__ = __add__

    def __neg__(self) -> 'CotangentPoly':
        return CotangentPoly({e: -c for e, c in self._terms.items()}, self._truncation)

    def __sub__(self, other) -> 'CotangentPoly':
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> 'CotangentPoly':
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> 'CotangentPoly':
        if isinstance(other, (int, Fraction, Series2)) and not isinstance(other, bool):
            d = self._truncation if not isinstance(other, Series2) else min(
                self._truncation, other.truncation)
            return CotangentPoly({e: c * other for e, c in self._terms.items()}, d)
        if not isinstance(other, CotangentPoly):
            return NotImplemented
        d = min(self._truncation, other._truncation)
        result: Dict[Exponent, Series2] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                key = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                prod = c1 * c2
                result[key] = result[key] + prod if key in result else prod
        return CotangentPoly(result, d)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> 'CotangentPoly':
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = CotangentPoly.constant(1, self._truncation)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    # ------------------------------------------------------------------
    # Производные
    # ------------------------------------------------------------------

    def deriv_t(self, index: int) -> 'CotangentPoly':
        """d/dt_index, index = 2 или 3 (коэффициенты не зависят от t1)"""
        return CotangentPoly({e: c.deriv(index) for e, c in self._terms.items()},
                             max(self._truncation - 1, 0))

    def deriv_y(self, index: int) -> 'CotangentPoly':
        """d/dy_index"""
        pos = index - 1
        result: Dict[Exponent, Series2] = {}
        for exps, coeff in self._terms.items():
            if exps[pos] == 0:
                continue
            lowered = list(exps)
            lowered[pos] -= 1
            result[tuple(lowered)] = coeff * exps[pos]
        return CotangentPoly(result, self._truncation)

    def eval_at(self, point: Tuple[Scalar, Scalar], y: Tuple) -> sympy.Expr:
        """Значение в точке (t2, t3) и точке слоя y = (y1, y2, y3)"""
        total = sympy.Integer(0)
        for exps, coeff in self._terms.items():
            value = coeff.eval(point)
            total += (sympy.Rational(value.numerator, value.denominator)
                      * y[0] ** exps[0] * y[1] ** exps[1] * y[2] ** exps[2])
        return sympy.simplify(total)

    def __str__(self) -> str:
        if not self._terms:
            return '0'
        parts = []
        for exps, coeff in sorted(self._terms.items(), key=lambda item: (-sum(item[0]), item[0])):
            mono = '*'.join(
                (f"y{k}" if e == 1 else f"y{k}^{e}") for k, e in zip((1, 2, 3), exps) if e)
            parts.append(f"({coeff})*{mono}" if mono else f"({coeff})")
        return ' + '.join(parts)

    def __repr__(self) -> str:
        return f"CotangentPoly({self}, D={self._truncation})"


def poisson(f: CotangentPoly, g: CotangentPoly) -> CotangentPoly:
    """
    Скобка Пуассона {f, g} = sum_k (df/dt_k dg/dy_k - df/dy_k dg/dt_k), k = 2, 3.

    При таком соглашении {y2, t2} = -1.
    """
    result = CotangentPoly.zero(min(f.truncation, g.truncation))
    for k in (2, 3):
        result = result + f.deriv_t(k) * g.deriv_y(k) - f.deriv_y(k) * g.deriv_t(k)
    return result


# ============================================================================
# Идеал спектра
# ============================================================================

class SpectrumFrame(str, Enum):
    """Набор образующих идеала"""
    Y = "Y"  # (y1 - 1, Y22, Y23, Y33)
    Z = "Z"  # (y1 - 1, Z2, Z3)


def _shifted_coordinates(table: MultTable) -> Tuple[CotangentPoly, CotangentPoly]:
    """(y2 - b3, y3 - b2)"""
    abc = table_to_abc(table)
    d = table.truncation
    return (CotangentPoly.y(2, d) - abc.b3, CotangentPoly.y(3, d) - abc.b2)


def y_generators(table: MultTable) -> Dict[str, CotangentPoly]:
    """Образующие Y22, Y23, Y33 в ABC-коэффициентах"""
    abc = table_to_abc(table)
    u, v = _shifted_coordinates(table)
    return {
        'Y22': u * u + abc.a3 * abc.c3 - u * abc.a2 - v * abc.a3,
        'Y23': u * v - abc.a3 * abc.c2,
        'Y33': v * v + abc.a2 * abc.c2 - u * abc.c2 - v * abc.c3,
    }


def z_generators(gh: GhFrame) -> Dict[str, CotangentPoly]:
    """Образующие Z2 = y2^3 - g2 y2^2 - g1 y2 - g0, Z3 = y3 - h2 y2^2 - h1 y2 - h0"""
    d = gh.truncation
    y2, y3 = CotangentPoly.y(2, d), CotangentPoly.y(3, d)
    y22 = y2 * y2
    return {
        'Z2': y22 * y2 - y22 * gh.g2 - y2 * gh.g1 - gh.g0,
        'Z3': y3 - y22 * gh.h2 - y2 * gh.h1 - gh.h0,
    }


@dataclass
class SpectrumIdeal:
    """
    Идеал аналитического спектра.

    Attributes:
        table: Исходная таблица умножения (tilde)
        frame: Y или Z
        generators: Имя -> образующая
        gh: GH-данные для Z-репера
    """
    table: MultTable
    frame: SpectrumFrame
    generators: Dict[str, CotangentPoly]
    gh: Optional[GhFrame] = None

    @classmethod
    def from_table(cls, table: MultTable, frame: SpectrumFrame = SpectrumFrame.Y) -> 'SpectrumIdeal':
        """
        Идеал по таблице.

        Raises:
            FrameDegenerate: Для Z-репера, если (e, d2, d2^2) не репер
        """
        d = table.truncation
        unit = {'y1-1': CotangentPoly.y(1, d) - 1}
        if SpectrumFrame(frame) == SpectrumFrame.Y:
            return cls(table=table, frame=SpectrumFrame.Y, generators={**unit, **y_generators(table)})
        gh = table_to_gh(table)
        return cls(table=table, frame=SpectrumFrame.Z, generators={**unit, **z_generators(gh)}, gh=gh)

    @classmethod
    def from_gh(cls, gh: GhFrame) -> 'SpectrumIdeal':
        d = gh.truncation
        return cls(table=gh_to_table(gh), frame=SpectrumFrame.Z,
                   generators={'y1-1': CotangentPoly.y(1, d) - 1, **z_generators(gh)}, gh=gh)


def _normal_form(c0: Series2, c2: Series2, c3: Series2) -> CotangentPoly:
    d = min(c0.truncation, c2.truncation, c3.truncation)
    return CotangentPoly({(0, 0, 0): c0, (0, 1, 0): c2, (0, 0, 1): c3}, d)


def _reduce_y(p: CotangentPoly, table: MultTable) -> CotangentPoly:
    d = min(p.truncation, table.truncation)
    d2, d3 = basis_vector(2, d), basis_vector(3, d)
    powers: Dict[Tuple[int, int], Vec3] = {(0, 0): basis_vector(1, d)}

    def power(a: int, b: int) -> Vec3:
        # d2^a ∘ d3^b
        if (a, b) not in powers:
            if b > 0:
                powers[(a, b)] = mult(table, power(a, b - 1), d3)
            else:
                powers[(a, b)] = mult(table, power(a - 1, 0), d2)
        return powers[(a, b)]

    acc = [Series2.zero(d) for _ in range(3)]
    for (_, e2, e3), coeff in p.terms.items():
        vec = power(e2, e3)
        for k in range(3):
            acc[k] = acc[k] + coeff * vec[k]
    return _normal_form(*acc)


def _reduce_z(p: CotangentPoly, gh: GhFrame) -> CotangentPoly:
    d = min(p.truncation, gh.truncation)
    zero, one = Series2.zero(d), Series2.constant(1, d)
    h_poly = (gh.h0, gh.h1, gh.h2)

    def times_y2(x: Vec3) -> Vec3:
        x0, x1, x2 = x
        return (x2 * gh.g0, x0 + x2 * gh.g1, x1 + x2 * gh.g2)

    def times(x: Vec3, y: Vec3) -> Vec3:
        # y = y0 + y1 Y + y2 Y^2 в базисе (1, y2, y2^2)
        result = tuple(y[0] * xi for xi in x)
        shifted = times_y2(x)
        result = tuple(r + y[1] * s for r, s in zip(result, shifted))
        shifted = times_y2(shifted)
        return tuple(r + y[2] * s for r, s in zip(result, shifted))

    y2_powers: Dict[int, Vec3] = {0: (one, zero, zero)}
    y3_powers: Dict[int, Vec3] = {0: (one, zero, zero)}

    def y2_power(n: int) -> Vec3:
        if n not in y2_powers:
            y2_powers[n] = times_y2(y2_power(n - 1))
        return y2_powers[n]

    def y3_power(n: int) -> Vec3:
        if n not in y3_powers:
            y3_powers[n] = times(y3_power(n - 1), h_poly)
        return y3_powers[n]

    acc = [zero, zero, zero]
    for (_, e2, e3), coeff in p.terms.items():
        vec = times(y3_power(e3), y2_power(e2))
        acc = [a + coeff * v for a, v in zip(acc, vec)]
    x0, x1, x2 = acc
    # y2^2 = (y3 - h1 y2 - h0) / h2
    scaled = x2 * gh.h2.invert()
    return _normal_form(x0 - scaled * gh.h0, x1 - scaled * gh.h1, scaled)


def reduce(p: CotangentPoly, ideal: SpectrumIdeal) -> CotangentPoly:
    """
    Нормальная форма c0 + c2 y2 + c3 y3 по модулю идеала.

    y1 заменяется на 1; в Y-репере y2^a y3^b переходит в координаты d2^a ∘ d3^b,
    в Z-репере y3 подставляется через h, степени y2 понижаются через Z2.

    Raises:
        NotAssociative: Если таблица Y-репера неассоциативна
    """
    if ideal.frame == SpectrumFrame.Y:
        require_associative(ideal.table, 'reduce')
        result = _reduce_y(p, ideal.table)
    else:
        result = _reduce_z(p, ideal.gh)
    logger.debug(f"reduce: degree {p.degree()} -> {result}")
    return result


def contains(ideal: SpectrumIdeal, p: CotangentPoly) -> bool:
    return reduce(p, ideal).is_zero()


# ============================================================================
# Критерий через скобку
# ============================================================================

@dataclass
class BracketResult:
    """
    Результат проверки {I, I} ⊂ I.

    Attributes:
        verdict: True, если все скобки образующих лежат в идеале
        normal_forms: Нормальные формы всех скобок по парам
        residuals: Ненулевые нормальные формы
    """
    verdict: bool
    normal_forms: Dict[str, CotangentPoly] = field(default_factory=dict)
    residuals: Dict[str, CotangentPoly] = field(default_factory=dict)


def f_condition_bracket(ideal: SpectrumIdeal) -> BracketResult:
    """
    F-условие: редукция скобок всех пар образующих равна нулю.

    Raises:
        NotAssociative: Если таблица неассоциативна
    """
    require_associative(ideal.table, 'f_condition_bracket')
    normal_forms: Dict[str, CotangentPoly] = {}
    for (name_f, f), (name_g, g) in combinations(ideal.generators.items(), 2):
        normal_forms[f"{{{name_f},{name_g}}}"] = reduce(poisson(f, g), ideal)
    residuals = {k: v for k, v in normal_forms.items() if not v.is_zero()}
    logger.info(f"Bracket check ({ideal.frame.value}-frame): "
                f"{len(normal_forms) - len(residuals)}/{len(normal_forms)} pairs closed")
    return BracketResult(verdict=not residuals, normal_forms=normal_forms, residuals=residuals)


BRACKET_PAIRS = ('Y23,Y22', 'Y23,Y33', 'Y33,Y22')


def bracket_expansion(table: MultTable, pair: str) -> Tuple[CotangentPoly, CotangentPoly]:
    """
    Скобка пары Y-образующих и ее явное разложение через Y, (y2 - b3), (y3 - b2), A2, A2_dual, A3.

    Тождество выполняется для любой таблицы (не только F-многообразия).

    Args:
        table: Таблица умножения
        pair: 'Y23,Y22', 'Y23,Y33' или 'Y33,Y22'

    Returns:
        (левая часть, правая часть)
    """
    if pair not in BRACKET_PAIRS:
        raise InvalidParameters(f"Unknown generator pair {pair!r}, expected one of {BRACKET_PAIRS}")
    abc = table_to_abc(table)
    a2, a3, b2, b3, c2, c3 = abc.a2, abc.a3, abc.b2, abc.b3, abc.c2, abc.c3
    a22, a23, a32, a33 = a2.deriv(2), a2.deriv(3), a3.deriv(2), a3.deriv(3)
    b22, b33 = b2.deriv(2), b3.deriv(3)
    c22, c23, c32, c33 = c2.deriv(2), c2.deriv(3), c3.deriv(2), c3.deriv(3)
    big_a2, big_a2_dual, big_a3 = a_invariants(abc)
    gens = y_generators(table)
    u, v = _shifted_coordinates(table)
    y22, y23, y33 = gens['Y22'], gens['Y23'], gens['Y33']

    first, second = pair.split(',')
    lhs = poisson(gens[first], gens[second])
    if pair == 'Y23,Y22':
        rhs = (y22 * (-2 * b22 + 2 * b33 + a23) + y23 * (a22 + a33) + y33 * a32
               + u * big_a2 + v * (a3 * big_a3)
               + (-(a3 * big_a2_dual) - a3 * c3 * big_a3))
    elif pair == 'Y23,Y33':
        rhs = (y33 * (-2 * b33 + 2 * b22 + c32) + y23 * (c33 + c22) + y22 * c23
               + v * big_a2_dual - u * (c2 * big_a3)
               + (-(c2 * big_a2) + c2 * a2 * big_a3))
    else:
        rhs = (y22 * (-2 * c22) + y23 * (2 * (-2 * b22 + 2 * b33 + a23 - c32)) + y33 * (2 * a33)
               + u * (-big_a2_dual - c3 * big_a3) + v * (big_a2 - a2 * big_a3)
               + (-(c3 * big_a2) + a2 * big_a2_dual + (a2 * c3 + a3 * c2) * big_a3))
    return lhs, rhs


@dataclass
class GhBracketResiduals:
    """
    Разложение {Z2, Z3} = cofactor * Z2 + y2^2 * r2 + y2 * r1 + r0.

    Attributes:
        cofactor: Множитель при Z2 (многочлен от y2)
        r2, r1, r0: Выражения, обращение которых в ноль равносильно F-условию
    """
    cofactor: CotangentPoly
    r2: Series2
    r1: Series2
    r0: Series2

    def is_f_manifold(self) -> bool:
        return self.r2.is_zero() and self.r1.is_zero() and self.r0.is_zero()


def gh_bracket_residuals(gh: GhFrame) -> GhBracketResiduals:
    """Невязки скобки Z-образующих в GH-данных"""
    g2, g1, g0, h2, h1, h0 = gh.g2, gh.g1, gh.g0, gh.h2, gh.h1, gh.h0
    g22, g12, g02 = g2.deriv(2), g1.deriv(2), g0.deriv(2)
    g23, g13, g03 = g2.deriv(3), g1.deriv(3), g0.deriv(3)
    h22, h12, h02 = h2.deriv(2), h1.deriv(2), h0.deriv(2)
    d = gh.truncation
    y2 = CotangentPoly.y(2, d)
    cofactor = y2 * (3 * h22) + (2 * g22 * h2 + g2 * h22 + 3 * h12)
    r2 = ((g2 * g2 + 2 * g1) * h2 + g2 * h1 + 3 * h0).deriv(2) - g23
    r1 = ((2 * g22 * g1 + 2 * g02) * h2 + (g2 * g1 + 3 * g0) * h22 + g12 * h1
          + 2 * g1 * h12 - 2 * g2 * h02 - g13)
    r0 = (2 * g22 * g0 * h2 + g2 * g0 * h22 + g02 * h1 + 3 * g0 * h12
          - g1 * h02 - g03)
    return GhBracketResiduals(cofactor=cofactor, r2=r2, r1=r1, r0=r0)


# ============================================================================
# Сечение и 1-форма
# ============================================================================

class SectionIdeal:
    """
    Идеал (y1 - 1, y2, y3 - b2) сечения L_M над M.

    Принадлежность проверяется подстановкой y1 = 1, y2 = 0, y3 = b2.
    """

    def __init__(self, b2: Series2):
        self.b2 = b2
        d = b2.truncation
        self.generators = {
            'y1-1': CotangentPoly.y(1, d) - 1,
            'y2': CotangentPoly.y(2, d),
            'y3-b2': CotangentPoly.y(3, d) - b2,
        }

    def substitute(self, p: CotangentPoly) -> Series2:
        d = min(p.truncation, self.b2.truncation)
        total = Series2.zero(d)
        for (_, e2, e3), coeff in p.terms.items():
            if e2:
                continue
            total = total + coeff * self.b2 ** e3
        return total

    def contains(self, p: CotangentPoly) -> bool:
        return self.substitute(p).is_zero()

    def is_bracket_closed(self) -> bool:
        names = list(self.generators)
        return all(self.contains(poisson(self.generators[a], self.generators[b]))
                   for a, b in combinations(names, 2))


def alpha_of(field_: VectorField) -> CotangentPoly:
    """
    Каноническая 1-форма на поле: eps1 y1 + eps2 y2 + eps3 y3 при t1 = 0.

    Raises:
        InvalidParameters: Для мероморфного поля
    """
    if not field_.is_holomorphic:
        raise InvalidParameters("alpha_of expects a holomorphic vector field")
    d = field_.truncation
    return (CotangentPoly.y(1, d) * field_.eps1 + CotangentPoly.y(2, d) * field_.eps2.series
            + CotangentPoly.y(3, d) * field_.eps3.series)


def fiber_points(table: MultTable, point: Tuple[Scalar, Scalar]) -> List[Tuple[sympy.Expr, sympy.Expr]]:
    """
    Точки слоя L_M над t для полупростой алгебры: (y2, y3) с y1 = 1.

    Слой состоит из гомоморфизмов алгебры в C, т.е. общих левых собственных
    векторов операторов d2∘ и d3∘, нормированных условием w(e) = 1.

    Raises:
        InvalidParameters: Если алгебра в точке не полупроста
    """
    m2 = mult_matrix(table, (0, 1, 0), point)
    m3 = mult_matrix(table, (0, 0, 1), point)
    for shift in range(6):
        combo = (m2 + shift * m3).T
        vects = combo.eigenvects()
        if len(vects) == 3 and all(mult_ == 1 for _, mult_, _ in vects):
            break
    else:
        raise InvalidParameters(f"Tangent algebra at {point} is not semisimple")
    points = []
    for _, _, basis in vects:
        w = basis[0]
        if w[0] == 0:
            raise InvalidParameters(f"Degenerate eigencovector at {point}")
        w = w / w[0]
        points.append((sympy.simplify(w[1]), sympy.simplify(w[2])))
    return sorted(points, key=lambda p: (sympy.re(p[0]), sympy.re(p[1])))
