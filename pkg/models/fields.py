"""
Векторные поля с аффинной зависимостью от t1 и мероморфными коэффициентами.

E = (c*t1 + eps1) d1 + eps2 d2 + eps3 d3,  eps_k = t2^(-m_k) * s_k.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

from models.exceptions import InvalidParameters, PoleAtPoint
from models.series import Scalar, Series2, format_rational

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PoleSeries:
    """
    Мероморфный ряд t2^(-pole) * series в канонической форме.

    Инвариант: если pole > 0, то series не делится на t2.

    Attributes:
        pole: Порядок полюса m >= 0
        series: Числитель s
    """
    pole: int
    series: Series2

    def __post_init__(self):
        if self.pole < 0:
            raise InvalidParameters(f"Pole order must be >= 0, got {self.pole}")
        pole, series = self.pole, self.series
        if series.is_zero():
            pole = 0
        while pole > 0 and series.divisible_by_t2():
            series = series.divide_t2()
            pole -= 1
        object.__setattr__(self, 'pole', pole)
        object.__setattr__(self, 'series', series)

    @classmethod
    def holomorphic(cls, series: Series2) -> 'PoleSeries':
        return cls(0, series)

    @property
    def truncation(self) -> int:
        return self.series.truncation

    def is_zero(self) -> bool:
        return self.series.is_zero()

    def cleared(self, order: int) -> Series2:
        """Числитель после умножения на t2^order (order >= pole)"""
        if order < self.pole:
            raise InvalidParameters(f"Cannot clear pole {self.pole} with t2^{order}")
        return self.series.shift_t2(order - self.pole)

    def _align(self, other: 'PoleSeries') -> Tuple[int, Series2, Series2]:
        m = max(self.pole, other.pole)
        return m, self.cleared(m), other.cleared(m)

    def __add__(self, other) -> 'PoleSeries':
        other = _as_pole_series(other, self.truncation)
        if other is None:
            return NotImplemented
        m, a, b = self._align(other)
        return PoleSeries(m, a + b)

    __radd__ = __add__

    def __neg__(self) -> 'PoleSeries':
        return PoleSeries(self.pole, -self.series)

    def __sub__(self, other) -> 'PoleSeries':
        other = _as_pole_series(other, self.truncation)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> 'PoleSeries':
        other = _as_pole_series(other, self.truncation)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> 'PoleSeries':
        other = _as_pole_series(other, self.truncation)
        if other is None:
            return NotImplemented
        return PoleSeries(self.pole + other.pole, self.series * other.series)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        other = _as_pole_series(other, self.truncation)
        if other is None:
            return NotImplemented
        _, a, b = self._align(other)
        return a == b

    __hash__ = None

    def deriv(self, var: Union[str, int]) -> 'PoleSeries':
        """d/dt2 (t2^-m s) = t2^-(m+1) (t2 ds - m s); d/dt3 действует на числитель"""
        if var in ('t3', 3):
            return PoleSeries(self.pole, self.series.deriv('t3'))
        if self.pole == 0:
            return PoleSeries(0, self.series.deriv('t2'))
        return PoleSeries(self.pole + 1, self.series.euler_t2() - self.series * self.pole)

    def eval(self, point: Tuple[Scalar, Scalar]) -> Fraction:
        """
        Значение в точке.

        Raises:
            PoleAtPoint: Если есть полюс и t2 = 0
        """
        t2 = Fraction(point[0])
        if self.pole and t2 == 0:
            raise PoleAtPoint(f"Coefficient has a pole of order {self.pole} at t2 = 0")
        return self.series.eval(point) / t2 ** self.pole

    def __str__(self) -> str:
        if self.pole == 0:
            return str(self.series)
        return f"t2^-{self.pole}*({self.series})"


def _as_pole_series(value, truncation: int):
    if isinstance(value, PoleSeries):
        return value
    if isinstance(value, Series2):
        return PoleSeries(0, value)
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return PoleSeries(0, Series2.constant(value, truncation))
    return None


@dataclass(frozen=True, eq=False)
class VectorField:
    """
    Кандидат в поле Эйлера (c = 1) или симметрию умножения (c = 0).

    Attributes:
        c: Коэффициент при t1 в eps1
        eps1: Часть eps1, не зависящая от t1
        eps2, eps3: Мероморфные коэффициенты при d2, d3
    """
    c: Fraction
    eps1: Series2
    eps2: PoleSeries
    eps3: PoleSeries

    def __post_init__(self):
        object.__setattr__(self, 'c', Fraction(self.c))
        for name in ('eps2', 'eps3'):
            value = getattr(self, name)
            if isinstance(value, Series2):
                object.__setattr__(self, name, PoleSeries(0, value))

    @classmethod
    def euler(cls, eps2, eps3, c1: Scalar = 0, truncation: int = 8) -> 'VectorField':
        """Поле (t1 + c1) d1 + eps2 d2 + eps3 d3"""
        return cls(c=Fraction(1), eps1=Series2.constant(c1, truncation), eps2=eps2, eps3=eps3)

    @classmethod
    def weighted(cls, w2: Scalar, w3: Scalar, truncation: int, c1: Scalar = 0) -> 'VectorField':
        """Поле (t1 + c1) d1 + w2 t2 d2 + w3 t3 d3"""
        return cls.euler(Series2.monomial(1, 0, truncation, w2),
                         Series2.monomial(0, 1, truncation, w3), c1, truncation)

    @property
    def truncation(self) -> int:
        return min(self.eps1.truncation, self.eps2.truncation, self.eps3.truncation)

    @property
    def max_pole(self) -> int:
        return max(self.eps2.pole, self.eps3.pole)

    @property
    def is_holomorphic(self) -> bool:
        return self.max_pole == 0

    def components(self) -> Tuple[PoleSeries, PoleSeries, PoleSeries]:
        """Коэффициенты при t1 = 0 как мероморфные ряды"""
        return (PoleSeries(0, self.eps1), self.eps2, self.eps3)

    def shifted(self, c: Scalar) -> 'VectorField':
        """E + c*e"""
        return VectorField(self.c, self.eps1 + Fraction(c), self.eps2, self.eps3)

    def __sub__(self, other: 'VectorField') -> 'VectorField':
        return VectorField(self.c - other.c, self.eps1 - other.eps1,
                           self.eps2 - other.eps2, self.eps3 - other.eps3)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return (self.c == other.c and self.eps1 == other.eps1
                and self.eps2 == other.eps2 and self.eps3 == other.eps3)

    __hash__ = None

    def __str__(self) -> str:
        first = f"({format_rational(self.c)}*t1 + {self.eps1})"
        return f"{first} d1 + ({self.eps2}) d2 + ({self.eps3}) d3"
