"""
Unit тесты для таблиц умножения и переходов между реперами.

Покрывают:
- Произведения базисных полей и билинейное продолжение
- Переходы tilde <-> abc и tilde <-> gh
- Вырожденные реперы
"""

from fractions import Fraction

import numpy as np
import pytest

from models.exceptions import FrameDegenerate, InvalidParameters
from models.series import Series2
from models.tables import (
    AbcFrame,
    GhFrame,
    MultTable,
    abc_to_table,
    basis_vector,
    frame_names,
    gh_to_table,
    mult,
    table_to_abc,
    table_to_gh,
)
from tests.unit.helpers import random_polynomial

D = 6


# ============================================================================
# Fixtures
# ============================================================================

@pytest.fixture
def a3_gh():
    """GH-данные A3: d2^3 = -2 t3 d2 - t2 e, d3 = d2^2"""
    zero = Series2.zero(D)
    return GhFrame(g2=zero, g1=Series2.monomial(0, 1, D, -2), g0=-Series2.t2(D),
                   h2=Series2.constant(1, D), h1=zero, h0=zero)


@pytest.fixture
def a3_table():
    """Tilde-таблица A3"""
    zero = Series2.zero(D)
    t2, t3 = Series2.t2(D), Series2.t3(D)
    return MultTable(at1=zero, at2=zero, a3=Series2.constant(1, D),
                     bt1=-t2, b2=-2 * t3, b3=zero,
                     ct1=zero, c2=-t2, ct3=-2 * t3)


# ============================================================================
# Tests
# ============================================================================

class TestProducts:
    """Произведения базисных полей"""

    def test_unit_field(self, a3_table):
        for j in (1, 2, 3):
            assert a3_table.product(1, j) == basis_vector(j, D)
            assert a3_table.product(j, 1) == basis_vector(j, D)

    def test_symmetric_entry(self, a3_table):
        assert a3_table.product(2, 3) == a3_table.product(3, 2)

    def test_bad_index(self, a3_table):
        with pytest.raises(InvalidParameters):
            a3_table.product(2, 4)

    def test_mult_is_commutative(self, a3_table):
        rng = np.random.default_rng(1)
        v = tuple(random_polynomial(rng, 2, D) for _ in range(3))
        w = tuple(random_polynomial(rng, 2, D) for _ in range(3))
        assert mult(a3_table, v, w) == mult(a3_table, w, v)

    def test_mult_by_unit(self, a3_table):
        v = (Series2.t3(D), Series2.constant(2, D), Series2.t2(D))
        assert mult(a3_table, basis_vector(1, D), v) == v


class TestAbcFrame:
    """Переход tilde <-> abc"""

    def test_round_trip_random(self):
        rng = np.random.default_rng(2024)
        for _ in range(10):
            coeffs = {name: random_polynomial(rng, 2, D)
                      for name in ('a2', 'a3', 'b2', 'b3', 'c2', 'c3')}
            abc = AbcFrame.associative(**coeffs)
            assert table_to_abc(abc_to_table(abc)) == abc

    def test_a3_abc_coefficients(self, a3_table):
        abc = table_to_abc(a3_table)
        assert abc.a2.is_zero()
        assert abc.c3 == Series2.monomial(0, 1, D, 2)
        assert abc.a1 == Series2.monomial(0, 1, D, -2)
        assert abc.b1 == -Series2.t2(D)
        assert abc.c1.is_zero()


class TestGhFrame:
    """Переход tilde <-> gh"""

    def test_gh_to_table_a3(self, a3_gh, a3_table):
        assert gh_to_table(a3_gh) == a3_table

    def test_table_to_gh_a3(self, a3_gh, a3_table):
        assert table_to_gh(a3_table) == a3_gh

    def test_square_d3_table(self):
        zero = Series2.zero(D)
        table = MultTable(zero, zero, Series2.constant(1, D), zero, zero, zero, zero, zero, zero)
        gh = table_to_gh(table)
        assert gh.h2 == Series2.constant(1, D)
        assert all(getattr(gh, name).is_zero() for name in ('g2', 'g1', 'g0', 'h1', 'h0'))

    def test_degenerate_frame(self):
        zero, t2 = Series2.zero(D), Series2.t2(D)
        table = MultTable(zero, zero, t2, zero, t2, zero, zero, zero, zero)
        with pytest.raises(FrameDegenerate):
            table_to_gh(table)

    def test_non_unit_h2(self, a3_gh):
        gh = GhFrame(g2=a3_gh.g2, g1=a3_gh.g1, g0=a3_gh.g0, h2=Series2.t3(D), h1=a3_gh.h1, h0=a3_gh.h0)
        with pytest.raises(FrameDegenerate):
            gh_to_table(gh)

    def test_round_trip_random_gh(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            parts = {name: random_polynomial(rng, 2, D) for name in ('g2', 'g1', 'g0', 'h1', 'h0')}
            h2 = random_polynomial(rng, 2, D)
            h2 = h2 - h2.constant_term + Fraction(int(rng.integers(1, 4)))
            gh = GhFrame(h2=h2, **parts)
            assert table_to_gh(gh_to_table(gh)) == gh


class TestFrameNames:
    """Имена коэффициентов по реперам"""

    def test_names(self):
        assert frame_names('gh') == ('g2', 'g1', 'g0', 'h2', 'h1', 'h0')
        assert len(frame_names('tilde')) == 9
        assert frame_names('abc')[0] == 'a1'

    def test_unknown_frame(self):
        with pytest.raises(InvalidParameters):
            frame_names('xyz')
