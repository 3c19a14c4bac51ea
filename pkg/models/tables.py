"""
Таблицы умножения на TM в репере (d1 = e, d2, d3).

Три представления одной и той же структуры:
1. MultTable (tilde) - сырые коэффициенты d2∘d2, d2∘d3, d3∘d3 (каноническое)
2. AbcFrame - коэффициенты относительно (d2 - b3*d1, d3 - b2*d1)
3. GhFrame - d2^3 = g2 d2^2 + g1 d2 + g0 e,  d3 = h2 d2^2 + h1 d2 + h0 e

Все коэффициенты - Series2 от (t2, t3), т.е. не зависят от t1 (Lie_e(∘) = 0 по построению).
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Tuple

from models.exceptions import FrameDegenerate, InvalidParameters
from models.series import Series2

logger = logging.getLogger(__name__)

Vec3 = Tuple[Series2, Series2, Series2]

TILDE_NAMES = ('at1', 'at2', 'a3', 'bt1', 'b2', 'b3', 'ct1', 'c2', 'ct3')
ABC_NAMES = ('a1', 'a2', 'a3', 'b1', 'b2', 'b3', 'c1', 'c2', 'c3')
GH_NAMES = ('g2', 'g1', 'g0', 'h2', 'h1', 'h0')


class AlgebraType(str, Enum):
    """Тип касательной алгебры T_tM (четыре класса 3-мерных алгебр)"""
    Q1 = "Q1"  # C[x1,x2]/(x1^2, x1x2, x2^2)
    Q2 = "Q2"  # C[x]/(x^3)
    Q3 = "Q3"  # C[x]/(x^2) + C
    Q4 = "Q4"  # C^3, полупростая


def basis_vector(index: int, truncation: int) -> Vec3:
    """Координатное поле d_index (index = 1, 2, 3) как 3-вектор"""
    if index not in (1, 2, 3):
        raise InvalidParameters(f"Basis index must be 1, 2 or 3, got {index}")
    return tuple(Series2.constant(1 if k == index else 0, truncation) for k in (1, 2, 3))


def vec_add(v: Vec3, w: Vec3) -> Vec3:
    return (v[0] + w[0], v[1] + w[1], v[2] + w[2])


def vec_sub(v: Vec3, w: Vec3) -> Vec3:
    return (v[0] - w[0], v[1] - w[1], v[2] - w[2])


def vec_scale(s, v: Vec3) -> Vec3:
    return (s * v[0], s * v[1], s * v[2])


def vec_is_zero(v: Vec3) -> bool:
    return all(x.is_zero() for x in v)


# ============================================================================
# MultTable (tilde)
# ============================================================================

@dataclass(frozen=True, eq=False)
class MultTable:
    """
    Таблица умножения в tilde-координатах.

    d2∘d2 = at1 d1 + at2 d2 + a3 d3
    d2∘d3 = bt1 d1 + b2 d2 + b3 d3
    d3∘d3 = ct1 d1 + c2 d2 + ct3 d3

    Attributes:
        at1, at2, a3, bt1, b2, b3, ct1, c2, ct3: Коэффициенты Series2
    """
    at1: Series2
    at2: Series2
    a3: Series2
    bt1: Series2
    b2: Series2
    b3: Series2
    ct1: Series2
    c2: Series2
    ct3: Series2

    @property
    def truncation(self) -> int:
        return min(getattr(self, name).truncation for name in TILDE_NAMES)

    def coefficients(self) -> Dict[str, Series2]:
        return {name: getattr(self, name) for name in TILDE_NAMES}

    @classmethod
    def from_products(cls, d22: Vec3, d23: Vec3, d33: Vec3) -> 'MultTable':
        """Построение из разложений d2∘d2, d2∘d3, d3∘d3 по (d1, d2, d3)"""
        return cls(at1=d22[0], at2=d22[1], a3=d22[2],
                   bt1=d23[0], b2=d23[1], b3=d23[2],
                   ct1=d33[0], c2=d33[1], ct3=d33[2])

    @classmethod
    def zero(cls, truncation: int) -> 'MultTable':
        z = Series2.zero(truncation)
        return cls(*([z] * 9))

    def product(self, i: int, j: int) -> Vec3:
        """d_i ∘ d_j в репере (d1, d2, d3)"""
        d = self.truncation
        if i == 1:
            return basis_vector(j, d)
        if j == 1:
            return basis_vector(i, d)
        if (i, j) == (2, 2):
            return (self.at1, self.at2, self.a3)
        if (i, j) in ((2, 3), (3, 2)):
            return (self.bt1, self.b2, self.b3)
        if (i, j) == (3, 3):
            return (self.ct1, self.c2, self.ct3)
        raise InvalidParameters(f"Basis indices must be 1, 2 or 3, got ({i}, {j})")

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultTable):
            return NotImplemented
        return all(getattr(self, n) == getattr(other, n) for n in TILDE_NAMES)

    __hash__ = None

    def map(self, func) -> 'MultTable':
        """Применение func ко всем коэффициентам (сдвиг базовой точки, усечение)"""
        return MultTable(**{n: func(getattr(self, n)) for n in TILDE_NAMES})


def mult(table: MultTable, v: Vec3, w: Vec3) -> Vec3:
    """
    Произведение v∘w, продолженное билинейно.

    Args:
        table: Таблица умножения
        v, w: Векторные поля как коэффициенты при (d1, d2, d3)

    Returns:
        Коэффициенты v∘w
    """
    d = min(table.truncation, *(x.truncation for x in v), *(x.truncation for x in w))
    result = [Series2.zero(d) for _ in range(3)]
    for i in (1, 2, 3):
        if v[i - 1].is_zero():
            continue
        for j in (1, 2, 3):
            if w[j - 1].is_zero():
                continue
            scale = v[i - 1] * w[j - 1]
            prod = table.product(i, j)
            for k in range(3):
                if not prod[k].is_zero():
                    result[k] = result[k] + scale * prod[k]
    return tuple(result)


# ============================================================================
# ABC-репер
# ============================================================================

@dataclass(frozen=True, eq=False)
class AbcFrame:
    """
    Коэффициенты относительно сдвинутых полей X = d2 - b3 d1, Y = d3 - b2 d1.

    X∘X = a1 e + a2 X + a3 Y,  X∘Y = b1 e,  Y∘Y = c1 e + c2 X + c3 Y
    """
    a1: Series2
    a2: Series2
    a3: Series2
    b1: Series2
    b2: Series2
    b3: Series2
    c1: Series2
    c2: Series2
    c3: Series2

    @classmethod
    def associative(cls, a2: Series2, a3: Series2, b2: Series2, b3: Series2,
                    c2: Series2, c3: Series2) -> 'AbcFrame':
        """ABC-данные с a1, b1, c1, выбранными так, что умножение ассоциативно"""
        return cls(a1=-(a3 * c3), a2=a2, a3=a3, b1=a3 * c2, b2=b2, b3=b3,
                   c1=-(a2 * c2), c2=c2, c3=c3)

    def coefficients(self) -> Dict[str, Series2]:
        return {name: getattr(self, name) for name in ABC_NAMES}

    def __eq__(self, other) -> bool:
        if not isinstance(other, AbcFrame):
            return NotImplemented
        return all(getattr(self, n) == getattr(other, n) for n in ABC_NAMES)

    __hash__ = None


def abc_to_table(abc: AbcFrame) -> MultTable:
    """Переход из ABC-репера в tilde-таблицу"""
    a1, a2, a3 = abc.a1, abc.a2, abc.a3
    b1, b2, b3 = abc.b1, abc.b2, abc.b3
    c1, c2, c3 = abc.c1, abc.c2, abc.c3
    return MultTable(
        at1=a1 - a2 * b3 - a3 * b2 - b3 * b3,
        at2=a2 + 2 * b3,
        a3=a3,
        bt1=b1 - b2 * b3,
        b2=b2,
        b3=b3,
        ct1=c1 - c2 * b3 - c3 * b2 - b2 * b2,
        c2=c2,
        ct3=c3 + 2 * b2,
    )


def table_to_abc(table: MultTable) -> AbcFrame:
    """Переход из tilde-таблицы в ABC-репер"""
    b2, b3 = table.b2, table.b3
    a2 = table.at2 - 2 * b3
    c3 = table.ct3 - 2 * b2
    return AbcFrame(
        a1=table.at1 + a2 * b3 + table.a3 * b2 + b3 * b3,
        a2=a2,
        a3=table.a3,
        b1=table.bt1 + b2 * b3,
        b2=b2,
        b3=b3,
        c1=table.ct1 + table.c2 * b3 + c3 * b2 + b2 * b2,
        c2=table.c2,
        c3=c3,
    )


# ============================================================================
# GH-репер
# ============================================================================

@dataclass(frozen=True, eq=False)
class GhFrame:
    """
    Представление через степени d2.

    d2^3 = g2 d2^2 + g1 d2 + g0 e,  d3 = h2 d2^2 + h1 d2 + h0 e,  h2 - единица.
    """
    g2: Series2
    g1: Series2
    g0: Series2
    h2: Series2
    h1: Series2
    h0: Series2

    @property
    def truncation(self) -> int:
        return min(getattr(self, name).truncation for name in GH_NAMES)

    def coefficients(self) -> Dict[str, Series2]:
        return {name: getattr(self, name) for name in GH_NAMES}

    def __eq__(self, other) -> bool:
        if not isinstance(other, GhFrame):
            return NotImplemented
        return all(getattr(self, n) == getattr(other, n) for n in GH_NAMES)

    __hash__ = None

    def map(self, func) -> 'GhFrame':
        return GhFrame(**{n: func(getattr(self, n)) for n in GH_NAMES})


def _companion(gh: GhFrame, x: Vec3) -> Vec3:
    """Умножение на d2 в базисе (1, d2, d2^2)"""
    x0, x1, x2 = x
    return (x2 * gh.g0, x0 + x2 * gh.g1, x1 + x2 * gh.g2)


def gh_to_table(gh: GhFrame) -> MultTable:
    """
    Tilde-таблица по GH-данным.

    Raises:
        FrameDegenerate: Если h2 не является единицей
    """
    if not gh.h2.is_unit():
        raise FrameDegenerate(f"h2 must be a unit, got h2(0) = 0 ({gh.h2})")
    inv_h2 = gh.h2.invert()

    def to_frame(x: Vec3) -> Vec3:
        # d2^2 = (d3 - h1 d2 - h0 e) / h2
        x0, x1, x2 = x
        scaled = x2 * inv_h2
        return (x0 - scaled * gh.h0, x1 - scaled * gh.h1, scaled)

    d = gh.truncation
    one, zero = Series2.constant(1, d), Series2.zero(d)
    d3_power = (gh.h0, gh.h1, gh.h2)
    d22 = to_frame((zero, zero, one))
    d23_power = _companion(gh, d3_power)
    d23 = to_frame(d23_power)
    d2d23_power = _companion(gh, d23_power)
    d33_power = tuple(
        gh.h0 * d3_power[k] + gh.h1 * d23_power[k] + gh.h2 * d2d23_power[k] for k in range(3))
    d33 = to_frame(d33_power)
    logger.debug(f"gh_to_table at truncation {d}")
    return MultTable.from_products(d22, d23, d33)


def table_to_gh(table: MultTable) -> GhFrame:
    """
    GH-данные по tilde-таблице.

    Raises:
        FrameDegenerate: Если a3 не является единицей, т.е. (e, d2, d2^2) не репер
    """
    if not table.a3.is_unit():
        raise FrameDegenerate(
            f"(e, d2, d2^2) is not a frame: a3(0) = 0 ({table.a3})")
    inv_a3 = table.a3.invert()
    h2 = inv_a3
    h1 = -(table.at2 * inv_a3)
    h0 = -(table.at1 * inv_a3)
    d22 = (table.at1, table.at2, table.a3)
    z1, z2, z3 = mult(table, basis_vector(2, table.truncation), d22)
    g2 = z3 * inv_a3
    g1 = z2 - g2 * table.at2
    g0 = z1 - g2 * table.at1
    return GhFrame(g2=g2, g1=g1, g0=g0, h2=h2, h1=h1, h0=h0)


def frame_names(frame: str) -> Tuple[str, ...]:
    """Имена коэффициентов для тега репера tilde/abc/gh"""
    names = {'tilde': TILDE_NAMES, 'abc': ABC_NAMES, 'gh': GH_NAMES}
    if frame not in names:
        raise InvalidParameters(f"Unknown frame {frame!r}")
    return names[frame]
