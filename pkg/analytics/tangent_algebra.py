"""
Модуль анализа касательной алгебры T_tM.

Основные функции:
1. Невязки ассоциативности в ABC-репере
2. Инварианты R1, R2, R3, дискриминант и A2, A2_dual, A3
3. Критерий F-многообразия в замкнутой форме (два случая)
4. Классификация типа алгебры в точке и общего типа (Q1..Q4)
5. Соотношения для psi-полей и факторизация дискриминанта
6. Нормализация координат (b3 = -a2/3, b2 = -c3/3) и функция tau

Все проверки "тождественно ноль" выполняются с точностью до усечения.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from models.exceptions import NotAssociative, PreconditionFailed
from models.series import Scalar, Series2
from models.tables import (
    AbcFrame,
    AlgebraType,
    MultTable,
    Vec3,
    abc_to_table,
    basis_vector,
    mult,
    table_to_abc,
    vec_add,
    vec_scale,
)

logger = logging.getLogger(__name__)

# Ниже этой границы нулевой ряд не считается надежным свидетельством тождественного нуля
MIN_RELIABLE_TRUNCATION = 4


# ============================================================================
# Ассоциативность
# ============================================================================

def associativity_residuals(table: MultTable) -> Tuple[Series2, Series2, Series2]:
    """
    Невязки ассоциативности (a1 + a3 c3, b1 - a3 c2, c1 + a2 c2).

    Все три равны нулю тогда и только тогда, когда умножение ассоциативно.
    """
    abc = table_to_abc(table)
    return (abc.a1 + abc.a3 * abc.c3,
            abc.b1 - abc.a3 * abc.c2,
            abc.c1 + abc.a2 * abc.c2)


def is_associative(table: MultTable) -> bool:
    return all(r.is_zero() for r in associativity_residuals(table))


def require_associative(table: MultTable, operation: str) -> AbcFrame:
    """
    ABC-репер ассоциативной таблицы.

    Raises:
        NotAssociative: Если хотя бы одна невязка ненулевая
    """
    residuals = associativity_residuals(table)
    if not all(r.is_zero() for r in residuals):
        raise NotAssociative(
            f"{operation} requires an associative table; residuals: "
            + ', '.join(str(r) for r in residuals),
            residuals=residuals,
        )
    return table_to_abc(table)


# ============================================================================
# Инварианты
# ============================================================================

@dataclass(frozen=True, eq=False)
class RInvariants:
    """
    Инварианты таблицы.

    Attributes:
        r1, r2, r3: R1 = a3c3 - a2^2/3, R2 = a2c2 - c3^2/3, R3 = a3c2 - a2c3/9
        disc: 9 R3^2 - 4 R1 R2
        a2_inv, a2_dual, a3_inv: A2, A2_dual, A3 (с производными коэффициентов)
    """
    r1: Series2
    r2: Series2
    r3: Series2
    disc: Series2
    a2_inv: Series2
    a2_dual: Series2
    a3_inv: Series2

    def as_dict(self) -> Dict[str, Series2]:
        return {
            'R1': self.r1, 'R2': self.r2, 'R3': self.r3, 'disc': self.disc,
            'A2': self.a2_inv, 'A2_dual': self.a2_dual, 'A3': self.a3_inv,
        }


def _r_values(a2, a3, c2, c3):
    """R1, R2, R3 и дискриминант по значениям a2, a3, c2, c3 (ряды или числа)"""
    r1 = a3 * c3 - a2 * a2 * Fraction(1, 3)
    r2 = a2 * c2 - c3 * c3 * Fraction(1, 3)
    r3 = a3 * c2 - a2 * c3 * Fraction(1, 9)
    disc = 9 * r3 * r3 - 4 * r1 * r2
    return r1, r2, r3, disc


def a_invariants(abc: AbcFrame) -> Tuple[Series2, Series2, Series2]:
    """A2, A2_dual, A3 (x_ji обозначает d_i x_j)"""
    a2, a3, b2, b3, c2, c3 = abc.a2, abc.a3, abc.b2, abc.b3, abc.c2, abc.c3
    a22, a23 = a2.deriv(2), a2.deriv(3)
    a32, a33 = a3.deriv(2), a3.deriv(3)
    b22, b33 = b2.deriv(2), b3.deriv(3)
    c22, c23 = c2.deriv(2), c2.deriv(3)
    c32, c33 = c3.deriv(2), c3.deriv(3)
    a2_inv = a2 * (-b22 + b33 + a23) + a3 * (-2 * c22 - c33) - a32 * c2 - a33 * c3
    a2_dual = c3 * (-b33 + b22 + c32) + c2 * (-2 * a33 - a22) - c23 * a3 - c22 * a2
    a3_inv = -3 * b22 + 3 * b33 + a23 - c32
    return a2_inv, a2_dual, a3_inv


def r_invariants(table: MultTable) -> RInvariants:
    """
    Инварианты R1, R2, R3, дискриминант и A2, A2_dual, A3.

    Raises:
        NotAssociative: Для неассоциативной таблицы
    """
    abc = require_associative(table, 'r_invariants')
    r1, r2, r3, disc = _r_values(abc.a2, abc.a3, abc.c2, abc.c3)
    a2_inv, a2_dual, a3_inv = a_invariants(abc)
    return RInvariants(r1=r1, r2=r2, r3=r3, disc=disc,
                       a2_inv=a2_inv, a2_dual=a2_dual, a3_inv=a3_inv)


# ============================================================================
# Критерий F-многообразия
# ============================================================================

class FCase(str, Enum):
    """Какой из двух случаев критерия выполняется"""
    SQUARE_ZERO = "square_zero"  # (a2, a3, c2, c3) = 0
    A_INVARIANTS = "a_invariants"  # (A2, A2_dual, A3) = 0
    BOTH = "both"


@dataclass
class FManifoldResult:
    """
    Результат проверки F-условия.

    Attributes:
        verdict: True для F-многообразия
        case: Выполняющийся случай (None, если вердикт False или случай не определен)
        residuals: Ненулевые невязки (пусто при verdict=True)
    """
    verdict: bool
    case: Optional[FCase]
    residuals: Dict[str, Series2] = field(default_factory=dict)


def is_f_manifold_closed_form(table: MultTable) -> FManifoldResult:
    """
    F-условие в замкнутой форме.

    Невязки A2, A2_dual и a2 A3, a3 A3, c2 A3, c3 A3 обращаются в ноль ровно тогда,
    когда выполняется один из двух случаев: (a2, a3, c2, c3) = 0 или (A2, A2_dual, A3) = 0.

    Raises:
        NotAssociative: Для неассоциативной таблицы
    """
    abc = require_associative(table, 'is_f_manifold_closed_form')
    a2_inv, a2_dual, a3_inv = a_invariants(abc)
    candidates = {
        'A2': a2_inv,
        'A2_dual': a2_dual,
        'a2*A3': abc.a2 * a3_inv,
        'a3*A3': abc.a3 * a3_inv,
        'c2*A3': abc.c2 * a3_inv,
        'c3*A3': abc.c3 * a3_inv,
    }
    residuals = {name: value for name, value in candidates.items() if not value.is_zero()}
    if residuals:
        logger.info(f"F-condition fails: nonzero {', '.join(residuals)}")
        return FManifoldResult(verdict=False, case=None, residuals=residuals)

    square_zero = all(x.is_zero() for x in (abc.a2, abc.a3, abc.c2, abc.c3))
    a_zero = a3_inv.is_zero()
    if square_zero and a_zero:
        case = FCase.BOTH
    elif square_zero:
        case = FCase.SQUARE_ZERO
    elif a_zero:
        case = FCase.A_INVARIANTS
    else:
        case = None
        logger.warning(
            f"F-condition holds at truncation {table.truncation} but neither case is "
            f"resolved; raise the truncation")
    return FManifoldResult(verdict=True, case=case)


# ============================================================================
# Классификация
# ============================================================================

def _classify_values(a2, a3, c2, c3) -> AlgebraType:
    if all(x == 0 for x in (a2, a3, c2, c3)):
        return AlgebraType.Q1
    r1, r2, r3, disc = _r_values(a2, a3, c2, c3)
    if disc != 0:
        return AlgebraType.Q4
    if r1 == 0 and r2 == 0 and r3 == 0:
        return AlgebraType.Q2
    return AlgebraType.Q3


def classify_at(table: MultTable, point: Tuple[Scalar, Scalar]) -> AlgebraType:
    """
    Тип алгебры T_tM в точке (t2, t3).

    Raises:
        NotAssociative: Для неассоциативной таблицы
    """
    abc = require_associative(table, 'classify_at')
    values = [x.eval(point) for x in (abc.a2, abc.a3, abc.c2, abc.c3)]
    return _classify_values(*values)


@dataclass
class GenericTypeResult:
    """
    Общий тип алгебры.

    Attributes:
        algebra_type: Q1..Q4
        warnings: Предупреждения о недостаточном усечении
    """
    algebra_type: AlgebraType
    warnings: List[str] = field(default_factory=list)


def generic_type(table: MultTable) -> GenericTypeResult:
    """
    Общий тип: Q4 при disc != 0, иначе Q3 при R != 0, иначе Q2 при (a, c) != 0, иначе Q1.

    Raises:
        NotAssociative: Для неассоциативной таблицы
    """
    abc = require_associative(table, 'generic_type')
    r1, r2, r3, disc = _r_values(abc.a2, abc.a3, abc.c2, abc.c3)
    warnings: List[str] = []

    def nonzero(name: str, series: Sequence[Series2]) -> bool:
        if any(not s.is_zero() for s in series):
            return True
        trunc = min(s.truncation for s in series)
        if trunc < MIN_RELIABLE_TRUNCATION:
            message = f"{name} vanishes only at truncation {trunc}; result may be too special"
            logger.warning(message)
            warnings.append(message)
        return False

    if nonzero('disc', [disc]):
        result = AlgebraType.Q4
    elif nonzero('R-invariants', [r1, r2, r3]):
        result = AlgebraType.Q3
    elif nonzero('(a2, a3, c2, c3)', [abc.a2, abc.a3, abc.c2, abc.c3]):
        result = AlgebraType.Q2
    else:
        result = AlgebraType.Q1
    return GenericTypeResult(algebra_type=result, warnings=warnings)


def caustic_implications_hold(table: MultTable, point: Tuple[Scalar, Scalar]) -> bool:
    """
    Поточечные импликации для R-инвариантов:
    a3(t) != 0, R1(t) = R3(t) = 0 => R2(t) = 0; c2(t) != 0, R2(t) = R3(t) = 0 => R1(t) = 0.
    """
    abc = require_associative(table, 'caustic_implications_hold')
    a2, a3, c2, c3 = (x.eval(point) for x in (abc.a2, abc.a3, abc.c2, abc.c3))
    r1, r2, r3, _ = _r_values(a2, a3, c2, c3)
    first = not (a3 != 0 and r1 == 0 and r3 == 0) or r2 == 0
    second = not (c2 != 0 and r2 == 0 and r3 == 0) or r1 == 0
    return first and second


# ============================================================================
# psi-поля
# ============================================================================

def psi_fields(table: MultTable) -> Tuple[Vec3, Vec3]:
    """psi1 = d2 - (b3 + a2/3) d1, psi2 = d3 - (b2 + c3/3) d1"""
    abc = table_to_abc(table)
    d = table.truncation
    one, zero = Series2.constant(1, d), Series2.zero(d)
    psi1 = (-(abc.b3 + abc.a2 * Fraction(1, 3)), one, zero)
    psi2 = (-(abc.b2 + abc.c3 * Fraction(1, 3)), zero, one)
    return psi1, psi2


def _combine(terms: Sequence[Tuple[Series2, Vec3]]) -> Vec3:
    result = vec_scale(terms[0][0], terms[0][1])
    for coeff, vec in terms[1:]:
        result = vec_add(result, vec_scale(coeff, vec))
    return result


def psi_products(table: MultTable) -> Dict[str, Tuple[Vec3, Vec3]]:
    """
    Левые и правые части трех произведений psi-полей:

    psi1∘psi1 = a2/3 psi1 + a3 psi2 - 2/3 R1 e
    psi1∘psi2 = -c3/3 psi1 - a2/3 psi2 + R3 e
    psi2∘psi2 = c2 psi1 + c3/3 psi2 - 2/3 R2 e

    Raises:
        NotAssociative: Для неассоциативной таблицы
    """
    abc = require_associative(table, 'psi_products')
    r1, r2, r3, _ = _r_values(abc.a2, abc.a3, abc.c2, abc.c3)
    psi1, psi2 = psi_fields(table)
    e = basis_vector(1, table.truncation)
    third = Fraction(1, 3)
    return {
        'psi1*psi1': (mult(table, psi1, psi1), _combine([
            (abc.a2 * third, psi1), (abc.a3, psi2), (r1 * Fraction(-2, 3), e)])),
        'psi1*psi2': (mult(table, psi1, psi2), _combine([
            (-(abc.c3 * third), psi1), (-(abc.a2 * third), psi2), (r3, e)])),
        'psi2*psi2': (mult(table, psi2, psi2), _combine([
            (abc.c2, psi1), (abc.c3 * third, psi2), (r2 * Fraction(-2, 3), e)])),
    }


def _psi_cubic_coefficients(abc: AbcFrame, l1: Series2, l2: Series2) -> Tuple[Series2, Series2]:
    """Коэффициенты P, Q в psi^3 + P psi + Q e = 0"""
    r1, r2, r3, _ = _r_values(abc.a2, abc.a3, abc.c2, abc.c3)
    a2, a3, c2, c3 = abc.a2, abc.a3, abc.c2, abc.c3
    p = r1 * l1 * l1 - 3 * r3 * l1 * l2 + r2 * l2 * l2
    q = ((Fraction(2, 9) * a2 * r1 - a3 * r3) * l1 * l1 * l1
         - (Fraction(2, 3) * c3 * r1 - a2 * r3) * l1 * l1 * l2
         - (Fraction(2, 3) * a2 * r2 - c3 * r3) * l1 * l2 * l2
         + (Fraction(2, 9) * c3 * r2 - c2 * r3) * l2 * l2 * l2)
    return p, q


def psi_relation_residual(table: MultTable, l1: Series2, l2: Series2) -> Vec3:
    """
    Невязка кубического соотношения psi^3 + P psi + Q e для psi = l1 psi1 + l2 psi2.

    psi^3 вычисляется явными степенями относительно ∘.

    Raises:
        NotAssociative: Для неассоциативной таблицы
    """
    abc = require_associative(table, 'psi_relation_residual')
    psi1, psi2 = psi_fields(table)
    psi = vec_add(vec_scale(l1, psi1), vec_scale(l2, psi2))
    cube = mult(table, psi, mult(table, psi, psi))
    p, q = _psi_cubic_coefficients(abc, l1, l2)
    e = basis_vector(1, table.truncation)
    return vec_add(cube, vec_add(vec_scale(p, psi), vec_scale(q, e)))


def psi_discriminant_residual(table: MultTable, l1: Series2, l2: Series2) -> Series2:
    """
    4P^3 + 27Q^2 - disc * 3 (a3 l1^3 - a2 l1^2 l2 + c3 l1 l2^2 - c2 l2^3)^2.

    Raises:
        NotAssociative: Для неассоциативной таблицы
    """
    abc = require_associative(table, 'psi_discriminant_residual')
    p, q = _psi_cubic_coefficients(abc, l1, l2)
    _, _, _, disc = _r_values(abc.a2, abc.a3, abc.c2, abc.c3)
    cubic = (abc.a3 * l1 * l1 * l1 - abc.a2 * l1 * l1 * l2
             + abc.c3 * l1 * l2 * l2 - abc.c2 * l2 * l2 * l2)
    return 4 * p * p * p + 27 * q * q - 3 * disc * cubic * cubic


# ============================================================================
# Матрица умножения в точке
# ============================================================================

def mult_matrix(table: MultTable, v: Sequence[Scalar], point: Tuple[Scalar, Scalar]) -> sympy.Matrix:
    """
    Матрица оператора v∘ в точке (столбцы - образы d1, d2, d3).

    Args:
        table: Таблица умножения
        v: Значения коэффициентов поля при (d1, d2, d3) в точке
        point: Точка (t2, t3)

    Returns:
        3x3 sympy.Matrix с рациональными элементами
    """
    values = [Fraction(x) for x in v]
    entries = [[Fraction(0)] * 3 for _ in range(3)]
    for i in (1, 2, 3):
        if values[i - 1] == 0:
            continue
        for j in (1, 2, 3):
            prod = table.product(i, j)
            for k in range(3):
                entries[k][j - 1] += values[i - 1] * prod[k].eval(point)
    return sympy.Matrix(3, 3, lambda r, c: sympy.Rational(entries[r][c].numerator,
                                                          entries[r][c].denominator))


# ============================================================================
# Нормализация
# ============================================================================

def integrate_closed(p: Series2, q: Series2) -> Series2:
    """
    Функция F с d2 F = p, d3 F = q, F(0) = 0 для замкнутой формы p dt2 + q dt3.

    Замкнутость не проверяется: d3 F = q выполняется только при d3 p = d2 q.
    """
    int_p = p.integrate(2)
    correction = (q - int_p.deriv(3)).restrict_t2_zero().integrate(3)
    return int_p + correction


def tau(table: MultTable) -> Series2:
    """
    Функция tau с d2 tau = -b3 - a2/3, d3 tau = -b2 - c3/3, tau(0) = 0.

    Raises:
        PreconditionFailed: Если 1-форма не замкнута (A3 != 0)
    """
    abc = table_to_abc(table)
    p = -(abc.b3 + abc.a2 * Fraction(1, 3))
    q = -(abc.b2 + abc.c3 * Fraction(1, 3))
    closedness = p.deriv(3) - q.deriv(2)
    if not closedness.is_zero():
        raise PreconditionFailed(
            f"Normalizing 1-form is not closed: d3 P - d2 Q = {closedness}",
            residuals={'A3': closedness},
        )
    result = integrate_closed(p, q)
    check = result.deriv(3) - q
    if not check.is_zero():
        raise PreconditionFailed(f"Mixed partials of tau disagree: {check}",
                                 residuals={'d3_tau': check})
    return result


def normalize(table: MultTable) -> MultTable:
    """
    Нормализованная таблица: b3 = -a2/3, b2 = -c3/3, остальные ABC-коэффициенты прежние.

    Raises:
        NotAssociative: Для неассоциативной таблицы
        PreconditionFailed: Если A3 != 0
    """
    abc = require_associative(table, 'normalize')
    _, _, a3_inv = a_invariants(abc)
    if not a3_inv.is_zero():
        raise PreconditionFailed(f"normalize requires A3 = 0, got {a3_inv}",
                                 residuals={'A3': a3_inv})
    third = Fraction(1, 3)
    normalized = AbcFrame(
        a1=abc.a1, a2=abc.a2, a3=abc.a3,
        b1=abc.b1, b2=-(abc.c3 * third), b3=-(abc.a2 * third),
        c1=abc.c1, c2=abc.c2, c3=abc.c3,
    )
    logger.info(f"Normalized table at truncation {table.truncation}")
    return abc_to_table(normalized)
