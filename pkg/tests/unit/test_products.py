"""
Unit тесты для произведений A1 x (двумерное F-многообразие).
"""

from fractions import Fraction

import pytest

from analytics.euler import euler_residual_ok
from analytics.tangent_algebra import generic_type, is_f_manifold_closed_form
from models.exceptions import InvalidParameters
from models.products import Factor2d, PlaneEuler, product
from models.series import Series2
from models.tables import AlgebraType, basis_vector

D = 6


class TestProduct:
    """Таблица и поле Эйлера произведения"""

    @pytest.mark.parametrize("factor, g, expected", [
        (Factor2d.I2M, Series2.monomial(0, 1, D, Fraction(2, 3)), AlgebraType.Q4),
        (Factor2d.N2, Series2.constant(1, D), AlgebraType.Q3),
        (Factor2d.A1A1, Series2.t3(D) + 1, AlgebraType.Q4),
    ])
    def test_product_is_f_manifold_with_euler_field(self, factor, g, expected):
        result = product(factor, PlaneEuler(c=Fraction(1), g=g), D, m=3)
        assert is_f_manifold_closed_form(result.table).verdict
        assert euler_residual_ok(result.table, result.field)
        assert generic_type(result.table).algebra_type == expected

    def test_second_unit(self):
        result = product(Factor2d.N2, PlaneEuler(c=Fraction(0), g=Series2.zero(D)), D)
        assert result.table.product(2, 2) == basis_vector(2, D)
        assert result.table.product(2, 3) == basis_vector(3, D)

    def test_first_factor_constant(self):
        result = product(Factor2d.A1A1, PlaneEuler(c=Fraction(1), g=Series2.t3(D)), D, c_first=2)
        assert result.field.eps1 == Series2.constant(2, D)
        assert result.field.eps2.series == Series2.t2(D) - 1

    def test_i2m_requires_m_at_least_3(self):
        with pytest.raises(InvalidParameters):
            product(Factor2d.I2M, PlaneEuler(c=Fraction(1), g=Series2.t3(D)), D, m=2)

    def test_plane_euler_depends_on_t3_only(self):
        with pytest.raises(InvalidParameters):
            product(Factor2d.N2, PlaneEuler(c=Fraction(1), g=Series2.t2(D)), D)
