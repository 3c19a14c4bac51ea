"""
Unit тесты для усеченных рядов Series2 и расширений ExtSeries.

Покрывают:
- Разбор и печать рациональных литералов
- Аксиомы кольца (hypothesis)
- Усечение при умножении и дифференцировании
- Литералы рядов [i, j, "num/den"]
- Дробные степени t2 и характеристический многочлен
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from models.exceptions import InvalidParameters, NotAUnit, NotDivisible, ParseError
from models.series import (
    ExtSeries,
    Series2,
    charpoly_mult,
    format_rational,
    parse_rational,
    product_of_roots_poly,
)

D = 5


# ============================================================================
# Strategies
# ============================================================================

monomials = st.tuples(st.integers(0, D - 1), st.integers(0, D - 1)).filter(lambda m: sum(m) < D)
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
series = st.dictionaries(monomials, rationals, max_size=6).map(lambda c: Series2(c, D))
units = st.tuples(series, rationals.filter(lambda x: x != 0)).map(
    lambda pair: pair[0] - pair[0].constant_term + pair[1])


# ============================================================================
# Рациональные литералы
# ============================================================================

class TestRationalLiterals:
    """Тесты разбора и печати рациональных чисел"""

    def test_parse_reduces_fraction(self):
        assert parse_rational("3/6") == Fraction(1, 2)

    def test_parse_negative_integer(self):
        assert parse_rational("-2") == Fraction(-2)

    def test_parse_accepts_int_and_fraction(self):
        assert parse_rational(4) == 4
        assert parse_rational(Fraction(2, 3)) == Fraction(2, 3)

    @pytest.mark.parametrize("text", ["abc", "1.5", "1/", "", "2/-3"])
    def test_parse_rejects_garbage(self, text):
        with pytest.raises(ParseError):
            parse_rational(text)

    def test_parse_rejects_zero_denominator(self):
        with pytest.raises(ParseError):
            parse_rational("1/0")

    def test_parse_rejects_bool(self):
        with pytest.raises(ParseError):
            parse_rational(True)

    def test_format(self):
        assert format_rational(Fraction(-27, 4)) == "-27/4"
        assert format_rational(Fraction(6, 3)) == "2"


# ============================================================================
# Кольцо
# ============================================================================

class TestRingAxioms:
    """Кольцевые тождества на случайных рядах"""

    @given(series, series)
    @settings(max_examples=50, deadline=None)
    def test_multiplication_commutes(self, a, b):
        assert a * b == b * a

    @given(series, series, series)
    @settings(max_examples=50, deadline=None)
    def test_multiplication_associative(self, a, b, c):
        assert (a * b) * c == a * (b * c)

    @given(series, series, series)
    @settings(max_examples=50, deadline=None)
    def test_distributive(self, a, b, c):
        assert a * (b + c) == a * b + a * c

    @given(series)
    @settings(max_examples=50, deadline=None)
    def test_additive_inverse(self, a):
        assert (a - a).is_zero()

    @given(units)
    @settings(max_examples=50, deadline=None)
    def test_unit_times_inverse_is_one(self, u):
        assert u * u.invert() == Series2.constant(1, D)

    @given(series, series)
    @settings(max_examples=30, deadline=None)
    def test_leibniz_rule(self, a, b):
        assert (a * b).deriv('t2') == a.deriv('t2') * b + a * b.deriv('t2')


class TestTruncation:
    """Усечение по полной степени"""

    def test_product_drops_high_degree(self):
        t2 = Series2.t2(6)
        assert (t2 ** 3 * t2 ** 3).is_zero()
        assert (t2 ** 2 * t2 ** 3).coeff(5, 0) == 1

    def test_mixed_truncation_uses_minimum(self):
        assert (Series2.t2(4) + Series2.t3(7)).truncation == 4

    def test_derivative_lowers_truncation(self):
        s = Series2({(2, 1): 3}, 5)
        d = s.deriv('t2')
        assert d.truncation == 4
        assert d.coeffs == {(1, 1): 6}

    def test_with_truncation_cannot_raise(self):
        with pytest.raises(InvalidParameters):
            Series2.t2(4).with_truncation(5)

    def test_equality_at_common_truncation(self):
        assert Series2({(0, 0): 1, (3, 0): 1}, 4) == Series2.constant(1, 3)


class TestSeriesOperations:
    """Деление, обращение, сдвиги"""

    def test_invert_geometric_series(self):
        inv = (1 - Series2.t2(5)).invert()
        assert inv == Series2({(k, 0): 1 for k in range(5)}, 5)

    def test_invert_non_unit_raises(self):
        with pytest.raises(NotAUnit):
            Series2.t3(5).invert()

    def test_divide_t2(self):
        s = Series2({(2, 0): 1, (1, 1): 2}, 6)
        assert s.divide_t2() == Series2({(1, 0): 1, (0, 1): 2}, 5)
        assert s.divide_t2().truncation == 5

    def test_divide_t2_not_divisible(self):
        with pytest.raises(NotDivisible):
            Series2({(0, 1): 1}, 4).divide_t2()

    def test_compose_t3_shift(self):
        s = Series2.monomial(0, 2, 5).compose_t3_shift(1)
        assert s == Series2({(0, 2): 1, (0, 1): 2, (0, 0): 1}, 5)

    def test_coeff_t3_slice(self):
        s = Series2({(1, 2): 5, (0, 2): 1, (3, 0): 7}, 6)
        assert s.coeff_t3(2) == Series2({(1, 0): 5, (0, 0): 1}, 4)

    def test_integrate_is_inverse_of_derivative(self):
        s = Series2({(0, 0): 1, (1, 2): 3}, 5)
        assert s.integrate('t3').deriv('t3') == s

    def test_eval_exact(self):
        s = Series2({(1, 0): 2, (0, 2): Fraction(1, 2)}, 4)
        assert s.eval((Fraction(1, 2), 2)) == 3

    def test_unknown_variable(self):
        with pytest.raises(InvalidParameters):
            Series2.t2(3).deriv('t1')


class TestSeriesLiterals:
    """Литералы [i, j, "num/den"]"""

    def test_canonical_order(self):
        s = Series2({(0, 1): 2, (1, 0): Fraction(1, 2), (0, 0): 1}, 4)
        assert s.to_entries() == [[0, 0, "1"], [0, 1, "2"], [1, 0, "1/2"]]

    def test_from_entries_round_trip(self):
        entries = [[0, 0, "1"], [0, 1, "-2/3"], [2, 1, "5"]]
        assert Series2.from_entries(entries, 5).to_entries() == entries

    @pytest.mark.parametrize("entries", [
        [[0, 0, "1"], [0, 0, "2"]],
        [[4, 1, "1"]],
        [[0, 1, "0"]],
        [[0, -1, "1"]],
        [[0, 1]],
        [[0, 1, "x"]],
    ])
    def test_from_entries_rejects(self, entries):
        with pytest.raises(ParseError):
            Series2.from_entries(entries, 5)

    def test_pretty_print(self):
        disc = Series2({(0, 4): Fraction(9, 4), (2, 2): Fraction(27, 2), (4, 0): Fraction(-27, 4)}, 8)
        assert str(disc) == "9/4*t3^4 + 27/2*t2^2*t3^2 - 27/4*t2^4"
        assert str(Series2.zero(3)) == "0"


# ============================================================================
# Расширения
# ============================================================================

class TestExtSeries:
    """Элементы Series2[u]/(u^k - t2)"""

    def test_square_root_squares_to_t2(self):
        u = ExtSeries.t2_power(Fraction(1, 2), 2, Series2.constant(1, 6))
        assert u * u == ExtSeries.lift(Series2.t2(6), 2)

    def test_charpoly_of_square_root(self):
        u = ExtSeries.t2_power(Fraction(1, 2), 2, Series2.constant(1, 6))
        e1, e2, e3 = charpoly_mult(u)
        assert e1.is_zero()
        assert e2 == -Series2.t2(6)
        assert e3.is_zero()

    def test_charpoly_of_cube_root(self):
        u = ExtSeries.t2_power(Fraction(1, 3), 3, Series2.constant(1, 6))
        e1, e2, e3 = charpoly_mult(u)
        assert e1.is_zero() and e2.is_zero()
        assert e3 == Series2.t2(6)

    def test_derivative_of_fractional_power(self):
        f = ExtSeries.t2_power(Fraction(3, 2), 2, Series2.constant(1, 6))
        expected = ExtSeries.t2_power(Fraction(1, 2), 2, Series2.constant(Fraction(3, 2), 6))
        assert f.deriv('t2') == expected

    def test_derivative_outside_extension(self):
        u = ExtSeries.t2_power(Fraction(1, 2), 2, Series2.constant(1, 6))
        with pytest.raises(NotDivisible):
            u.deriv('t2')

    def test_non_representable_power(self):
        with pytest.raises(InvalidParameters):
            ExtSeries.t2_power(Fraction(1, 3), 2, Series2.constant(1, 6))

    def test_product_of_roots(self):
        one, two = Series2.constant(1, 4), Series2.constant(2, 4)
        coeffs = product_of_roots_poly([(one,), (two,)], 4)
        assert coeffs == [two, Series2.constant(-3, 4), one]
