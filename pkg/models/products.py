"""
Произведения A1 x (двумерное F-многообразие).

Координаты: t1 - координата множителя A1, t2 = s1 - t1, t3 = s2, где (s1, s2) -
координаты двумерного множителя с единицей d/ds1. Тогда d1 = e - глобальная
единица, d2 = единица второго множителя, и таблица не зависит от t1.

d2∘d2 = d2,  d2∘d3 = d3,  d3∘d3 - по типу второго множителя:
    I2(m): t3^(m-2) d2;  N2: 0;  A1A1: d3.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from models.exceptions import InvalidParameters
from models.fields import VectorField
from models.series import Scalar, Series2
from models.tables import MultTable

logger = logging.getLogger(__name__)


class Factor2d(str, Enum):
    """Двумерный множитель"""
    I2M = "I2(m)"
    N2 = "N2"
    A1A1 = "A1A1"


@dataclass(frozen=True)
class PlaneEuler:
    """
    Поле Эйлера двумерного множителя (s1 + c) d/ds1 + g(s2) d/ds2.

    Attributes:
        c: Константа при единичном поле множителя
        g: Коэффициент при d/ds2, записанный как ряд от t3
    """
    c: Fraction
    g: Series2


@dataclass
class ProductResult:
    table: MultTable
    field: VectorField


def _d33(factor: Factor2d, truncation: int, m: int):
    zero = Series2.zero(truncation)
    if factor == Factor2d.I2M:
        return (zero, Series2.monomial(0, m - 2, truncation), zero)
    if factor == Factor2d.N2:
        return (zero, zero, zero)
    return (zero, zero, Series2.constant(1, truncation))


def product(factor: Factor2d, euler2d: PlaneEuler, truncation: int, m: int = 3,
            c_first: Scalar = 0) -> ProductResult:
    """
    Таблица произведения и поле Эйлера E_A1 + E_2d в координатах (t1, t2, t3).

    E = (t1 + c_first) d1 + (t2 + c - c_first) d2 + g(t3) d3.

    Args:
        factor: Тип второго множителя
        euler2d: Поле Эйлера второго множителя
        truncation: Усечение D
        m: Параметр I2(m), m >= 3
        c_first: Константа поля Эйлера множителя A1

    Raises:
        InvalidParameters: m < 3 или g зависит не только от t3
    """
    factor = Factor2d(factor)
    if factor == Factor2d.I2M and m < 3:
        raise InvalidParameters(f"I2(m) requires m >= 3, got m={m}")
    if euler2d.g != euler2d.g.restrict_t2_zero():
        raise InvalidParameters(f"Plane Euler coefficient must depend on t3 only, got {euler2d.g}")

    d = truncation
    zero, one = Series2.zero(d), Series2.constant(1, d)
    table = MultTable.from_products(
        (zero, one, zero),
        (zero, zero, one),
        _d33(factor, d, m),
    )
    c_first = Fraction(c_first)
    field = VectorField.euler(
        Series2.t2(d) + (euler2d.c - c_first),
        euler2d.g.with_truncation(d) if euler2d.g.truncation > d else euler2d.g,
        c1=c_first,
        truncation=d,
    )
    logger.info(f"Built product A1 x {factor.value} at truncation {d}")
    return ProductResult(table=table, field=field)
