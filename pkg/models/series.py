"""
Точные усеченные степенные ряды от (t2, t3) над рациональными числами.

Модуль содержит:
1. Series2 - кольцо C{t2,t3}, ограниченное на Q, с усечением по полной степени
2. ExtSeries - расширения Series2[u]/(u^k - t2) для дробных степеней t2
3. charpoly_mult - характеристический многочлен умножения на элемент расширения
4. Литералы рядов вида [[i, j, "num/den"], ...] для файлов

Соглашения:
- Ряд с усечением D хранит только коэффициенты при t2^i t3^j с i+j < D
- Операции над двумя рядами выполняются с усечением min(D_a, D_b)
- Равенство означает совпадение всех сохраненных коэффициентов при общем усечении;
  "тождественно ноль" всегда читается с точностью до усечения
- Скаляры (int, Fraction) приводятся к рядам с усечением второго операнда
"""

import logging
import re
from fractions import Fraction
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from models.exceptions import InvalidParameters, NotAUnit, NotDivisible, ParseError

logger = logging.getLogger(__name__)

Rat = Fraction
Scalar = Union[int, Fraction]
Monomial = Tuple[int, int]

_RATIONAL_RE = re.compile(r'^\s*-?\d+\s*(/\s*\d+\s*)?$')


# ============================================================================
# Рациональные литералы
# ============================================================================

def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """
    Разбор рационального литерала "num/den" или "num".

    Args:
        text: Строка, int или Fraction

    Returns:
        Fraction в канонической форме

    Raises:
        ParseError: Если строка не является рациональным литералом
    """
    if isinstance(text, bool):
        raise ParseError(f"Boolean is not a rational literal: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise ParseError(f"Invalid rational literal: {text!r}")
    try:
        return Fraction(text.replace(' ', ''))
    except ZeroDivisionError as e:
        raise ParseError(f"Zero denominator in rational literal: {text!r}") from e


def format_rational(value: Fraction) -> str:
    """Каноническая запись "num/den" (или "num" при знаменателе 1)"""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _normalize_var(var: Union[str, int]) -> int:
    if var in ('t2', 2):
        return 2
    if var in ('t3', 3):
        return 3
    raise InvalidParameters(f"Unknown variable {var!r}, expected 't2' or 't3'")


# ============================================================================
# Series2
# ============================================================================

class Series2:
    """
    Усеченный степенной ряд sum c_ij t2^i t3^j, i+j < truncation.

    Значения неизменяемы после создания; нулевые коэффициенты не хранятся.

    Attributes:
        truncation: Граница полной степени D (D >= 0; D = 0 - ряд без информации)
        coeffs: Отображение (i, j) -> Fraction
    """

    __slots__ = ('_coeffs', '_truncation')

    def __init__(self, coeffs: Optional[Mapping[Monomial, Scalar]] = None, truncation: int = 8):
        if not isinstance(truncation, int) or truncation < 0:
            raise InvalidParameters(f"Truncation must be a non-negative int, got {truncation!r}")
        clean: Dict[Monomial, Fraction] = {}
        for (i, j), value in (coeffs or {}).items():
            if i < 0 or j < 0:
                raise InvalidParameters(f"Negative exponent ({i}, {j}) in Series2")
            if i + j >= truncation:
                continue
            value = Fraction(value)
            if value != 0:
                clean[(i, j)] = value
        self._coeffs = clean
        self._truncation = truncation

    # ------------------------------------------------------------------
    # Конструкторы
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls, truncation: int) -> 'Series2':
        return cls({}, truncation)

    @classmethod
    def constant(cls, value: Scalar, truncation: int) -> 'Series2':
        return cls({(0, 0): value}, truncation)

    @classmethod
    def monomial(cls, i: int, j: int, truncation: int, value: Scalar = 1) -> 'Series2':
        return cls({(i, j): value}, truncation)

    @classmethod
    def t2(cls, truncation: int) -> 'Series2':
        return cls.monomial(1, 0, truncation)

    @classmethod
    def t3(cls, truncation: int) -> 'Series2':
        return cls.monomial(0, 1, truncation)

    @classmethod
    def from_entries(cls, entries: Iterable[Sequence], truncation: int) -> 'Series2':
        """
        Построение ряда из литерала [[i, j, "num/den"], ...].

        Raises:
            ParseError: Некорректная запись, повторный моном или моном вне усечения
        """
        coeffs: Dict[Monomial, Fraction] = {}
        for entry in entries:
            if not isinstance(entry, (list, tuple)) or len(entry) != 3:
                raise ParseError(f"Series entry must be [i, j, \"num/den\"], got {entry!r}")
            i, j, raw = entry
            if not all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in (i, j)):
                raise ParseError(f"Exponents must be non-negative ints, got {entry!r}")
            if i + j >= truncation:
                raise ParseError(f"Monomial ({i}, {j}) lies outside truncation {truncation}")
            if (i, j) in coeffs:
                raise ParseError(f"Duplicate monomial ({i}, {j})")
            value = parse_rational(raw)
            if value == 0:
                raise ParseError(f"Zero coefficient stored for monomial ({i}, {j})")
            coeffs[(i, j)] = value
        return cls(coeffs, truncation)

    def to_entries(self) -> List[list]:
        """Канонический литерал: мономы по возрастанию (i+j, i)"""
        return [[i, j, format_rational(c)] for (i, j), c in sorted(
            self._coeffs.items(), key=lambda item: (item[0][0] + item[0][1], item[0][0]))]

    # ------------------------------------------------------------------
    # Доступ
    # ------------------------------------------------------------------

    @property
    def truncation(self) -> int:
        return self._truncation

    @property
    def coeffs(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._coeffs)

    def coeff(self, i: int, j: int) -> Fraction:
        return self._coeffs.get((i, j), Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.coeff(0, 0)

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_unit(self) -> bool:
        return self.constant_term != 0

    def is_constant(self) -> bool:
        return all(m == (0, 0) for m in self._coeffs)

    def has_t3(self) -> bool:
        return any(j > 0 for (_, j) in self._coeffs)

    def valuation_t2(self) -> Optional[int]:
        """Наименьшая степень t2 среди сохраненных мономов (None для нуля)"""
        if not self._coeffs:
            return None
        return min(i for (i, _) in self._coeffs)

    def with_truncation(self, truncation: int) -> 'Series2':
        """Понижение усечения (повышение запрещено - информации нет)"""
        if truncation > self._truncation:
            raise InvalidParameters(
                f"Cannot raise truncation from {self._truncation} to {truncation}")
        return Series2(self._coeffs, truncation)

    # ------------------------------------------------------------------
    # Арифметика
    # ------------------------------------------------------------------

    def _coerce(self, other) -> Optional['Series2']:
        if isinstance(other, Series2):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Series2.constant(other, self._truncation)
        return None

    def __add__(self, other) -> 'Series2':
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        d = min(self._truncation, other._truncation)
        result: Dict[Monomial, Fraction] = dict(self._coeffs)
        for m, c in other._coeffs.items():
            result[m] = result.get(m, Fraction(0)) + c
        return Series2(result, d)

    __radd__ = __add__

    def __neg__(self) -> 'Series2':
        return Series2({m: -c for m, c in self._coeffs.items()}, self._truncation)

    def __sub__(self, other) -> 'Series2':
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> 'Series2':
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> 'Series2':
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            scale = Fraction(other)
            return Series2({m: c * scale for m, c in self._coeffs.items()}, self._truncation)
        if not isinstance(other, Series2):
            return NotImplemented
        d = min(self._truncation, other._truncation)
        result: Dict[Monomial, Fraction] = {}
        for (i1, j1), c1 in self._coeffs.items():
            if i1 + j1 >= d:
                continue
            budget = d - i1 - j1
            for (i2, j2), c2 in other._coeffs.items():
                if i2 + j2 >= budget:
                    continue
                key = (i1 + i2, j1 + j2)
                result[key] = result.get(key, Fraction(0)) + c1 * c2
        return Series2(result, d)

    __rmul__ = __mul__

    def __truediv__(self, other) -> 'Series2':
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("Series2 division by zero scalar")
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, Series2):
            return self * other.invert()
        return NotImplemented

    def __pow__(self, exponent: int) -> 'Series2':
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.invert() ** (-exponent)
        result = Series2.constant(1, self._truncation)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        d = min(self._truncation, other._truncation)
        mine = {m: c for m, c in self._coeffs.items() if m[0] + m[1] < d}
        theirs = {m: c for m, c in other._coeffs.items() if m[0] + m[1] < d}
        return mine == theirs

    __hash__ = None

    # ------------------------------------------------------------------
    # Анализ
    # ------------------------------------------------------------------

    def deriv(self, var: Union[str, int]) -> 'Series2':
        """Формальная частная производная; усечение D-1"""
        v = _normalize_var(var)
        result: Dict[Monomial, Fraction] = {}
        for (i, j), c in self._coeffs.items():
            if v == 2 and i > 0:
                result[(i - 1, j)] = c * i
            elif v == 3 and j > 0:
                result[(i, j - 1)] = c * j
        return Series2(result, max(self._truncation - 1, 0))

    def integrate(self, var: Union[str, int]) -> 'Series2':
        """Первообразная с нулевой постоянной интегрирования; усечение D+1"""
        v = _normalize_var(var)
        result: Dict[Monomial, Fraction] = {}
        for (i, j), c in self._coeffs.items():
            if v == 2:
                result[(i + 1, j)] = c / (i + 1)
            else:
                result[(i, j + 1)] = c / (j + 1)
        return Series2(result, self._truncation + 1)

    def euler_t2(self) -> 'Series2':
        """t2 * d/dt2 без потери точности"""
        return Series2({(i, j): c * i for (i, j), c in self._coeffs.items()}, self._truncation)

    def invert(self) -> 'Series2':
        """
        Обратный элемент в кольце рядов.

        Raises:
            NotAUnit: Если свободный член равен нулю
        """
        a0 = self.constant_term
        if a0 == 0:
            raise NotAUnit(f"Series with zero constant term is not invertible: {self}")
        d = self._truncation
        inv_a0 = 1 / a0
        tail = [(m, c) for m, c in self._coeffs.items() if m != (0, 0)]
        result: Dict[Monomial, Fraction] = {(0, 0): inv_a0}
        for degree in range(1, d):
            for i in range(degree, -1, -1):
                j = degree - i
                acc = Fraction(0)
                for (k, l), c in tail:
                    if k <= i and l <= j:
                        b = result.get((i - k, j - l))
                        if b:
                            acc += c * b
                if acc:
                    result[(i, j)] = -acc * inv_a0
        return Series2(result, d)

    def eval(self, point: Tuple[Scalar, Scalar]) -> Fraction:
        """Точное значение усеченного многочлена в точке (t2, t3)"""
        x, y = Fraction(point[0]), Fraction(point[1])
        return sum((c * x ** i * y ** j for (i, j), c in self._coeffs.items()), Fraction(0))

    # ------------------------------------------------------------------
    # Срезы и сдвиги
    # ------------------------------------------------------------------

    def restrict_t3_zero(self) -> 'Series2':
        """Ограничение на t3 = 0"""
        return Series2({m: c for m, c in self._coeffs.items() if m[1] == 0}, self._truncation)

    def restrict_t2_zero(self) -> 'Series2':
        """Ограничение на t2 = 0"""
        return Series2({m: c for m, c in self._coeffs.items() if m[0] == 0}, self._truncation)

    def coeff_t3(self, k: int) -> 'Series2':
        """Коэффициент при t3^k как ряд от t2 (усечение D-k)"""
        return Series2({(i, 0): c for (i, j), c in self._coeffs.items() if j == k},
                       max(self._truncation - k, 0))

    def shift_t2(self, k: int) -> 'Series2':
        """Умножение на t2^k; усечение растет на k"""
        if k < 0:
            raise InvalidParameters("shift_t2 expects k >= 0; use divide_t2 for division")
        return Series2({(i + k, j): c for (i, j), c in self._coeffs.items()}, self._truncation + k)

    def shift_t3(self, k: int) -> 'Series2':
        """Умножение на t3^k; усечение растет на k"""
        if k < 0:
            raise InvalidParameters("shift_t3 expects k >= 0")
        return Series2({(i, j + k): c for (i, j), c in self._coeffs.items()}, self._truncation + k)

    def divisible_by_t2(self) -> bool:
        return all(i > 0 for (i, _) in self._coeffs)

    def divide_t2(self, k: int = 1) -> 'Series2':
        """
        Точное деление на t2^k; усечение уменьшается на k.

        Raises:
            NotDivisible: Если есть моном со степенью t2 меньше k
        """
        if any(i < k for (i, _) in self._coeffs):
            raise NotDivisible(f"Series is not divisible by t2^{k}: {self}")
        return Series2({(i - k, j): c for (i, j), c in self._coeffs.items()},
                       max(self._truncation - k, 0))

    def compose_t3_shift(self, tau0: Scalar) -> 'Series2':
        """Подстановка t3 -> t3 + tau0 (для многочленов точна)"""
        tau0 = Fraction(tau0)
        if tau0 == 0:
            return self
        shifted = Series2.t3(self._truncation) + tau0
        result = Series2.zero(self._truncation)
        powers: Dict[int, Series2] = {0: Series2.constant(1, self._truncation)}
        for (i, j), c in self._coeffs.items():
            if j not in powers:
                powers[j] = shifted ** j
            result = result + Series2.monomial(i, 0, self._truncation, c) * powers[j]
        return result

    # ------------------------------------------------------------------
    # Представление
    # ------------------------------------------------------------------

    def __str__(self) -> str:
        if not self._coeffs:
            return '0'
        parts: List[str] = []
        for (i, j), c in sorted(self._coeffs.items(),
                                key=lambda item: (item[0][0] + item[0][1], item[0][0])):
            factors = []
            if i:
                factors.append('t2' if i == 1 else f't2^{i}')
            if j:
                factors.append('t3' if j == 1 else f't3^{j}')
            magnitude = abs(c)
            if factors:
                body = '*'.join(factors)
                term = body if magnitude == 1 else f"{format_rational(magnitude)}*{body}"
            else:
                term = format_rational(magnitude)
            sign = '-' if c < 0 else '+'
            if not parts:
                parts.append(f"-{term}" if c < 0 else term)
            else:
                parts.append(f"{sign} {term}")
        return ' '.join(parts)

    def __repr__(self) -> str:
        return f"Series2({self}, D={self._truncation})"


# ============================================================================
# ExtSeries: Series2[u]/(u^k - t2)
# ============================================================================

class ExtSeries:
    """
    Элемент sum_r parts[r] * u^r расширения степени k, где u^k = t2.

    Attributes:
        k: Порядок ветвления (1, 2 или 3)
        parts: Кортеж из k рядов Series2
    """

    __slots__ = ('_k', '_parts')

    def __init__(self, k: int, parts: Sequence[Series2]):
        if k not in (1, 2, 3):
            raise InvalidParameters(f"Extension order must be 1, 2 or 3, got {k}")
        if not parts or len(parts) > k:
            raise InvalidParameters(f"Expected between 1 and {k} parts, got {len(parts)}")
        d = min(p.truncation for p in parts)
        padded = list(parts) + [Series2.zero(d)] * (k - len(parts))
        self._k = k
        self._parts = tuple(padded)

    @classmethod
    def t2_power(cls, exponent: Union[Fraction, int], k: int, coeff: Series2) -> 'ExtSeries':
        """
        coeff * t2^exponent для exponent из (1/k)Z, exponent >= 0.

        Raises:
            InvalidParameters: Если k*exponent не целое или exponent < 0
        """
        exponent = Fraction(exponent)
        n = exponent * k
        if n.denominator != 1 or n < 0:
            raise InvalidParameters(f"t2^{exponent} is not representable with k={k}")
        m, r = divmod(int(n), k)
        parts = [Series2.zero(coeff.truncation + m) for _ in range(k)]
        parts[r] = coeff.shift_t2(m)
        return cls(k, parts)

    @classmethod
    def lift(cls, series: Series2, k: int) -> 'ExtSeries':
        return cls(k, [series])

    @property
    def k(self) -> int:
        return self._k

    @property
    def parts(self) -> Tuple[Series2, ...]:
        return self._parts

    @property
    def truncation(self) -> int:
        return min(p.truncation for p in self._parts)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self._parts)

    def _coerce(self, other) -> Optional['ExtSeries']:
        if isinstance(other, ExtSeries):
            if other._k != self._k:
                raise InvalidParameters(f"Cannot combine extensions of order {self._k} and {other._k}")
            return other
        if isinstance(other, Series2):
            return ExtSeries.lift(other, self._k)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return ExtSeries.lift(Series2.constant(other, self.truncation), self._k)
        return None

    def __add__(self, other) -> 'ExtSeries':
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return ExtSeries(self._k, [a + b for a, b in zip(self._parts, other._parts)])

    __radd__ = __add__

    def __neg__(self) -> 'ExtSeries':
        return ExtSeries(self._k, [-p for p in self._parts])

    def __sub__(self, other) -> 'ExtSeries':
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> 'ExtSeries':
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> 'ExtSeries':
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        k = self._k
        d = min(self.truncation, other.truncation)
        acc = [Series2.zero(d) for _ in range(k)]
        for r1, p1 in enumerate(self._parts):
            if p1.is_zero():
                continue
            for r2, p2 in enumerate(other._parts):
                if p2.is_zero():
                    continue
                product = p1 * p2
                s = r1 + r2
                if s >= k:
                    # u^k = t2
                    acc[s - k] = acc[s - k] + product.shift_t2(1)
                else:
                    acc[s] = acc[s] + product
        return ExtSeries(k, acc)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        try:
            other = self._coerce(other)
        except InvalidParameters:
            return False
        if other is None:
            return NotImplemented
        return all(a == b for a, b in zip(self._parts, other._parts))

    __hash__ = None

    def deriv(self, var: Union[str, int]) -> 'ExtSeries':
        """
        Частная производная.

        Для t2: d(u^r P) = u^r (t2*dP + (r/k)P) / t2.

        Raises:
            NotDivisible: Если результат не лежит в расширении (отрицательные степени t2)
        """
        v = _normalize_var(var)
        if v == 3:
            return ExtSeries(self._k, [p.deriv('t3') for p in self._parts])
        parts = []
        for r, p in enumerate(self._parts):
            if r == 0:
                parts.append(p.deriv('t2'))
            else:
                numerator = p.euler_t2() + p * Fraction(r, self._k)
                parts.append(numerator.divide_t2())
        return ExtSeries(self._k, parts)

    def mult_matrix(self) -> List[List[Series2]]:
        """Матрица умножения на элемент в базисе 1, u, ..., u^(k-1) (столбцы - образы)"""
        k = self._k
        columns = []
        for c in range(k):
            basis = [Series2.zero(self.truncation) for _ in range(k)]
            basis[c] = Series2.constant(1, self.truncation)
            image = self * ExtSeries(k, basis)
            columns.append(list(image.parts))
        return [[columns[col][row] for col in range(k)] for row in range(k)]

    def __repr__(self) -> str:
        body = ' + '.join(f"({p})*u^{r}" for r, p in enumerate(self._parts) if not p.is_zero()) or '0'
        return f"ExtSeries(k={self._k}, {body})"


def charpoly_mult(f: ExtSeries) -> Tuple[Series2, Series2, Series2]:
    """
    Элементарные симметрические функции ветвей f.

    Возвращает (e1, e2, e3) с det(x - f*) = x^k - e1 x^(k-1) + e2 x^(k-2) - e3
    (лишние e равны нулю). Все выходы имеют целые степени t2.

    Args:
        f: Элемент расширения порядка k

    Returns:
        Кортеж (e1, e2, e3)
    """
    m = f.mult_matrix()
    d = f.truncation
    zero = Series2.zero(d)
    if f.k == 1:
        return m[0][0], zero, zero
    if f.k == 2:
        trace = m[0][0] + m[1][1]
        det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        return trace, det, zero
    trace = m[0][0] + m[1][1] + m[2][2]
    minors = (m[0][0] * m[1][1] - m[0][1] * m[1][0]
              + m[0][0] * m[2][2] - m[0][2] * m[2][0]
              + m[1][1] * m[2][2] - m[1][2] * m[2][1])
    det = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
           - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
           + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
    logger.debug(f"charpoly_mult k=3 at truncation {d}")
    return trace, minors, det


def product_of_roots_poly(factors: Sequence[Tuple[Series2, ...]], truncation: int) -> List[Series2]:
    """
    Произведение монических многочленов от y с коэффициентами Series2.

    Каждый множитель задан элементарными симметрическими функциями своих корней
    (e1, ..., ek). Результат - коэффициенты [c0, c1, ..., 1] по возрастанию степени.
    """
    result: List[Series2] = [Series2.constant(1, truncation)]
    for elementary in factors:
        degree = len(elementary)
        # x^k - e1 x^(k-1) + e2 x^(k-2) - ...
        poly = [Series2.zero(truncation) for _ in range(degree + 1)]
        poly[degree] = Series2.constant(1, truncation)
        for idx, e in enumerate(elementary, start=1):
            poly[degree - idx] = e if idx % 2 == 0 else -e
        product = [Series2.zero(truncation) for _ in range(len(result) + degree)]
        for a, ca in enumerate(result):
            for b, cb in enumerate(poly):
                product[a + b] = product[a + b] + ca * cb
        result = product
    return result
