"""
Модуль проверки полей Эйлера.

Основные функции:
1. lie_residual - невязка Lie_E(∘) = ∘ для шести пар (i, j) с очисткой полюсов
2. symmetry_residual - то же для симметрий умножения (Lie_X(∘) = 0)
3. euler_constraint_check - замкнутые системы ограничений по семействам
4. regular_at - регулярность оператора E∘ в точке
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

import sympy

from analytics.tangent_algebra import mult_matrix, require_associative
from models.catalog import build
from models.exceptions import PoleAtPoint, UnknownFamily
from models.families import FamilySpec, FamilyTag
from models.fields import PoleSeries, VectorField
from models.series import Scalar, Series2
from models.tables import MultTable, Vec3

logger = logging.getLogger(__name__)

PAIRS = ((1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3))

PoleVec = Tuple[PoleSeries, PoleSeries, PoleSeries]


# ============================================================================
# Невязка производной Ли
# ============================================================================

@dataclass
class LieResidual:
    """
    Невязка для всех пар (i, j) после умножения на t2^pole_order.

    Attributes:
        pairs: (i, j) -> компоненты невязки при (d1, d2, d3)
        pole_order: Степень t2, на которую умножены все компоненты
    """
    pairs: Dict[Tuple[int, int], Vec3]
    pole_order: int

    def is_zero(self) -> bool:
        return all(c.is_zero() for vec in self.pairs.values() for c in vec)

    def nonzero_pairs(self) -> List[Tuple[int, int]]:
        return [pair for pair, vec in self.pairs.items() if not all(c.is_zero() for c in vec)]


def _partials(field_: VectorField) -> Dict[int, PoleVec]:
    """d_k eps_l для k = 1, 2, 3 (eps2, eps3 не зависят от t1)"""
    d = field_.truncation
    zero = PoleSeries.holomorphic(Series2.zero(d))
    eps = field_.components()
    partials = {1: (PoleSeries.holomorphic(Series2.constant(field_.c, d)), zero, zero)}
    for k in (2, 3):
        partials[k] = tuple(e.deriv(k) for e in eps)
    return partials


def _apply(field_: VectorField, a: Series2) -> PoleSeries:
    """E(a) для коэффициента a(t2, t3)"""
    return field_.eps2 * a.deriv(2) + field_.eps3 * a.deriv(3)


def _times(table: MultTable, w: PoleVec, j: int) -> PoleVec:
    """(w1 d1 + w2 d2 + w3 d3)∘d_j"""
    result = [PoleSeries.holomorphic(Series2.zero(table.truncation)) for _ in range(3)]
    for l in (1, 2, 3):
        if w[l - 1].is_zero():
            continue
        prod = table.product(l, j)
        for k in range(3):
            result[k] = result[k] + w[l - 1] * prod[k]
    return tuple(result)


def _pair_residual(table: MultTable, field_: VectorField, partials: Dict[int, PoleVec],
                   i: int, j: int, weight: int) -> PoleVec:
    prod = table.product(i, j)
    res = [_apply(field_, prod[k]) for k in range(3)]
    # [E, d_k] = -sum_l d_k(eps_l) d_l
    for k in (1, 2, 3):
        if prod[k - 1].is_zero():
            continue
        for l in range(3):
            res[l] = res[l] - partials[k][l] * prod[k - 1]
    left = _times(table, partials[i], j)
    right = _times(table, partials[j], i)
    return tuple(res[k] + left[k] + right[k] - prod[k] * weight for k in range(3))


def _residual(table: MultTable, field_: VectorField, weight: int, operation: str) -> LieResidual:
    require_associative(table, operation)
    partials = _partials(field_)
    raw = {pair: _pair_residual(table, field_, partials, pair[0], pair[1], weight)
           for pair in PAIRS}
    pole_order = max(c.pole for vec in raw.values() for c in vec)
    pairs = {pair: tuple(c.cleared(pole_order) for c in vec) for pair, vec in raw.items()}
    result = LieResidual(pairs=pairs, pole_order=pole_order)
    logger.debug(f"{operation}: pole order {pole_order}, nonzero pairs {result.nonzero_pairs()}")
    return result


def lie_residual(table: MultTable, field_: VectorField) -> LieResidual:
    """
    Невязка [E, d_i∘d_j] - [E, d_i]∘d_j - [E, d_j]∘d_i - d_i∘d_j.

    Поле является полем Эйлера тогда и только тогда, когда все пары нулевые.

    Raises:
        NotAssociative: Для неассоциативной таблицы
    """
    return _residual(table, field_, 1, 'lie_residual')


def symmetry_residual(table: MultTable, field_: VectorField) -> LieResidual:
    """Невязка Lie_X(∘) = 0 для симметрии умножения"""
    return _residual(table, field_, 0, 'symmetry_residual')


def euler_residual_ok(table: MultTable, field_: VectorField) -> bool:
    ok = lie_residual(table, field_).is_zero()
    logger.info(f"Euler residual check at truncation {field_.truncation}: {'ok' if ok else 'nonzero'}")
    return ok


def shift_by_unit(field_: VectorField, c: Scalar) -> VectorField:
    """E + c*e"""
    return field_.shifted(c)


# ============================================================================
# Регулярность
# ============================================================================

def regular_at(table: MultTable, field_: VectorField, point: Tuple[Scalar, Scalar]) -> bool:
    """
    Регулярность E∘ в точке: минимальный многочлен совпадает с характеристическим.

    Значение t1 берется равным нулю: сдвиг eps1 на константу добавляет к E∘
    кратное единицы и регулярность не меняет.

    Raises:
        NotAssociative: Для неассоциативной таблицы
        PoleAtPoint: Если поле имеет полюс в точке
    """
    require_associative(table, 'regular_at')
    if field_.max_pole and Fraction(point[0]) == 0:
        raise PoleAtPoint(f"Field has a pole of order {field_.max_pole} at t2 = 0")
    values = [c.eval(point) for c in field_.components()]
    m = mult_matrix(table, values, point)
    powers = sympy.Matrix.hstack(sympy.eye(3).reshape(9, 1), m.reshape(9, 1), (m * m).reshape(9, 1))
    return powers.rank() == 3


# ============================================================================
# Ограничения по семействам
# ============================================================================

def _bar(field_: VectorField, a) -> PoleSeries:
    """(eps2 d2 + eps3 d3)(a) для Series2 или PoleSeries"""
    if isinstance(a, Series2):
        return _apply(field_, a)
    return field_.eps2 * a.deriv(2) + field_.eps3 * a.deriv(3)


def _only_t2(p: PoleSeries) -> bool:
    return not p.series.has_t3()


def _only_t3(p: PoleSeries) -> bool:
    return p.pole == 0 and p.series == p.series.restrict_t2_zero()


def _check_thm5_2(spec: FamilySpec, field_: VectorField) -> bool:
    d = field_.truncation
    b2 = spec.series('b2', d)
    eps1 = PoleSeries.holomorphic(field_.eps1)
    eps2, eps3 = field_.eps2, field_.eps3
    first = eps1.deriv(2) + b2 * eps3.deriv(2)
    second = eps1.deriv(3) + eps2 * b2.deriv(2) + (eps3 * b2).deriv(3) - b2
    return first.is_zero() and second.is_zero()


def _check_thm5_4a(spec: FamilySpec, field_: VectorField) -> bool:
    eps2, eps3 = field_.eps2, field_.eps3
    if not _only_t2(eps2):
        return False
    t3 = Series2.t3(field_.truncation)
    rest = eps3 - t3 * (eps2.deriv(2) * 2 - 1)
    return field_.eps1.is_constant() and _only_t2(rest)


def _check_thm5_4b(spec: FamilySpec, field_: VectorField) -> bool:
    if not (field_.eps1.is_constant() and _only_t2(field_.eps2)):
        return False
    f = spec.series('f', field_.truncation)
    eps2, eps3 = field_.eps2, field_.eps3
    equation = _bar(field_, f) + f * (eps2.deriv(2) * 2 - eps3.deriv(3) - 1)
    return equation.is_zero()


def _check_thm5_4c(spec: FamilySpec, field_: VectorField) -> bool:
    if not field_.eps1.is_constant():
        return False
    d = field_.truncation
    f1, f2, h = spec.series('f1', d), spec.series('f2', d), spec.series('h', d)
    eps2, eps3 = field_.eps2, field_.eps3
    e22, e23 = eps2.deriv(2), eps2.deriv(3)
    e32, e33 = eps3.deriv(2), eps3.deriv(3)
    first = (3 * h * _bar(field_, f1) + f1 * _bar(field_, h)
             + h * (2 * f1 * e22 - 3 * f2 * e32 - f1 * e33 - f1))
    second = (3 * h * _bar(field_, f2) + f2 * _bar(field_, h)
              + h * (2 * f2 * e33 - 3 * f1 * e23 - f2 * e22 - f2))
    return first.is_zero() and second.is_zero()


def _check_thm5_6(spec: FamilySpec, field_: VectorField) -> bool:
    if not (field_.eps1.is_constant() and field_.is_holomorphic):
        return False
    d, p = field_.truncation, spec.p
    eps30 = field_.eps3.series.restrict_t3_zero()
    t2, t3 = Series2.t2(d), Series2.t3(d)
    lifted = Series2.monomial(p - 2, 0, d) * eps30
    expected2 = t2 * (1 - lifted) * Fraction(1, p)
    expected3 = eps30 + t3 * (2 - p + (2 * p - 2) * lifted) * Fraction(1, p)
    return field_.eps2 == expected2 and field_.eps3 == expected3


def _check_lem5_8(spec: FamilySpec, field_: VectorField) -> bool:
    expected2 = Series2.t2(field_.truncation) * Fraction(1, spec.p)
    return field_.eps1.is_constant() and field_.eps2 == expected2 and _only_t3(field_.eps3)


def _check_catalog_field(spec: FamilySpec, field_: VectorField) -> bool:
    """Поле единственно с точностью до c*e: сравнение с замкнутой формой семейства"""
    expected = build(spec, field_.truncation).fields[0]
    return (field_.eps1.is_constant() and field_.eps2 == expected.eps2
            and field_.eps3 == expected.eps3)


def _check_product(spec: FamilySpec, field_: VectorField) -> bool:
    d = field_.truncation
    t2, t3 = Series2.t2(d), Series2.t3(d)
    if not (field_.eps1.is_constant() and field_.is_holomorphic):
        return False
    if not (field_.eps2.series - t2).is_constant():
        return False
    eps3 = field_.eps3.series
    if spec.tag == FamilyTag.PROD_A1I2M:
        return eps3 == t3 * Fraction(2, spec.m)
    if spec.tag == FamilyTag.PROD_A1N2:
        return _only_t3(field_.eps3)
    return (eps3 - t3).is_constant()


_CONSTRAINTS: Dict[FamilyTag, Callable[[FamilySpec, VectorField], bool]] = {
    FamilyTag.THM5_2: _check_thm5_2,
    FamilyTag.THM5_4A: _check_thm5_4a,
    FamilyTag.THM5_4B: _check_thm5_4b,
    FamilyTag.THM5_4C: _check_thm5_4c,
    FamilyTag.THM5_6: _check_thm5_6,
    FamilyTag.LEM5_8: _check_lem5_8,
    FamilyTag.EX6_2_A3: _check_catalog_field,
    FamilyTag.EX6_2_B3: _check_catalog_field,
    FamilyTag.EX6_2_H3: _check_catalog_field,
    FamilyTag.LEM6_4: _check_catalog_field,
    FamilyTag.LEM6_5: _check_catalog_field,
    FamilyTag.PROD_A1A1A1: _check_product,
    FamilyTag.PROD_A1I2M: _check_product,
    FamilyTag.PROD_A1N2: _check_product,
    **{tag: _check_catalog_field for tag in FamilyTag if tag.is_thm7_1 or tag.is_cor7_2},
}


def euler_constraint_check(spec: FamilySpec, field_: VectorField) -> bool:
    """
    Проверка поля по замкнутой системе ограничений семейства.

    Результат должен совпадать с lie_residual(...).is_zero() на таблице семейства.

    Raises:
        UnknownFamily: Если для семейства нет системы ограничений
    """
    check = _CONSTRAINTS.get(spec.tag)
    if check is None:
        raise UnknownFamily(f"No Euler constraint system for family {spec.tag.value}")
    ok = field_.c == 1 and check(spec, field_)
    logger.info(f"Euler constraints for {spec.label()}: {'satisfied' if ok else 'violated'}")
    return ok
