"""
Unit тесты для ассоциативности, R-инвариантов, F-условия и классификации.

Покрывают:
- Дискриминант таблицы с линейными коэффициентами
- Совпадение двух F-критериев на случайных ассоциативных таблицах
- psi-тождества и факторизацию дискриминанта
- Классификацию в точках и общий тип
- Нормализацию и функцию tau
"""

from fractions import Fraction

import numpy as np
import pytest

from analytics.spectrum import BRACKET_PAIRS, SpectrumIdeal, bracket_expansion, f_condition_bracket
from analytics.tangent_algebra import (
    FCase,
    associativity_residuals,
    caustic_implications_hold,
    classify_at,
    generic_type,
    is_associative,
    is_f_manifold_closed_form,
    mult_matrix,
    normalize,
    psi_discriminant_residual,
    psi_products,
    psi_relation_residual,
    r_invariants,
    require_associative,
    tau,
)
from models.catalog import build_family
from models.exceptions import NotAssociative, PreconditionFailed
from models.series import Series2
from models.tables import AbcFrame, AlgebraType, MultTable, abc_to_table, table_to_abc
from tests.unit.helpers import random_associative_table, random_polynomial

D = 8


# ============================================================================
# Fixtures
# ============================================================================

@pytest.fixture
def lem6_5_table():
    """Таблица с дискриминантом 9/4(t3^4 + 6t2^2t3^2 - 3t2^4)"""
    return build_family('Lem6_5', D).table


@pytest.fixture
def a3_table():
    return build_family('Ex6_2_A3', D).table


@pytest.fixture
def non_f_table():
    """Ассоциативная, но не F: c3 = t2 дает A3 = -1"""
    zero, one = Series2.zero(D), Series2.constant(1, D)
    return abc_to_table(AbcFrame.associative(a2=zero, a3=one, b2=zero, b3=zero,
                                             c2=zero, c3=Series2.t2(D)))


@pytest.fixture
def non_associative_table():
    zero, one = Series2.zero(D), Series2.constant(1, D)
    return MultTable(zero, zero, one, zero, zero, zero, one, zero, zero)


# ============================================================================
# Ассоциативность
# ============================================================================

class TestAssociativity:
    """Невязки ассоциативности"""

    def test_catalog_table_is_associative(self, lem6_5_table):
        assert is_associative(lem6_5_table)
        assert all(r.is_zero() for r in associativity_residuals(lem6_5_table))

    def test_perturbed_table(self, non_associative_table):
        assert not is_associative(non_associative_table)
        with pytest.raises(NotAssociative) as exc_info:
            require_associative(non_associative_table, 'test')
        assert exc_info.value.residuals is not None

    def test_operations_require_associativity(self, non_associative_table):
        with pytest.raises(NotAssociative):
            is_f_manifold_closed_form(non_associative_table)
        with pytest.raises(NotAssociative):
            classify_at(non_associative_table, (0, 0))


# ============================================================================
# Инварианты
# ============================================================================

class TestInvariants:
    """R-инварианты и дискриминант"""

    def test_lem6_5_discriminant(self, lem6_5_table):
        disc = r_invariants(lem6_5_table).disc
        expected = Series2({(0, 4): Fraction(9, 4), (2, 2): Fraction(27, 2),
                            (4, 0): Fraction(-27, 4)}, D)
        assert disc == expected

    def test_a3_discriminant(self, a3_table):
        inv = r_invariants(a3_table)
        assert inv.r1 == Series2.monomial(0, 1, D, 2)
        assert inv.r2 == Series2.monomial(0, 2, D, Fraction(-4, 3))
        assert inv.r3 == -Series2.t2(D)
        assert inv.disc == Series2({(2, 0): 9, (0, 3): Fraction(32, 3)}, D)

    def test_as_dict_keys(self, a3_table):
        assert list(r_invariants(a3_table).as_dict()) == ['R1', 'R2', 'R3', 'disc', 'A2', 'A2_dual', 'A3']


# ============================================================================
# F-условие
# ============================================================================

class TestFCondition:
    """Замкнутая форма и сравнение со скобкой"""

    def test_lem6_5_is_f_manifold(self, lem6_5_table):
        result = is_f_manifold_closed_form(lem6_5_table)
        assert result.verdict
        assert result.case == FCase.A_INVARIANTS
        assert not result.residuals

    def test_a3_is_f_manifold(self, a3_table):
        assert is_f_manifold_closed_form(a3_table).verdict
        assert f_condition_bracket(SpectrumIdeal.from_table(a3_table)).verdict

    def test_square_zero_case(self):
        table = build_family('Thm5_2', D).table  # b2 = t2, A3 = -3
        result = is_f_manifold_closed_form(table)
        assert result.verdict
        assert result.case == FCase.SQUARE_ZERO

    def test_non_example(self, non_f_table):
        result = is_f_manifold_closed_form(non_f_table)
        assert not result.verdict
        assert result.case is None
        assert 'a3*A3' in result.residuals
        assert not f_condition_bracket(SpectrumIdeal.from_table(non_f_table)).verdict

    @pytest.mark.slow
    def test_methods_agree_on_random_tables(self):
        rng = np.random.default_rng(7)
        verdicts = []
        for k in range(200):
            table = random_associative_table(rng, 3, 5, square_zero=(k % 2 == 0))
            closed = is_f_manifold_closed_form(table).verdict
            bracket = f_condition_bracket(SpectrumIdeal.from_table(table)).verdict
            assert closed == bracket, f"table #{k}"
            verdicts.append(closed)
            for lhs, rhs in psi_products(table).values():
                assert lhs == rhs
            for pair in BRACKET_PAIRS:
                lhs, rhs = bracket_expansion(table, pair)
                assert lhs == rhs, f"table #{k}, {pair}"
        assert any(verdicts) and not all(verdicts)


# ============================================================================
# psi-поля
# ============================================================================

class TestPsiIdentities:
    """psi-произведения и кубическое соотношение"""

    @pytest.mark.parametrize("family", ['Ex6_2_A3', 'Ex6_2_B3', 'Lem6_5', 'Thm5_6'])
    def test_psi_products(self, family):
        table = build_family(family, 6).table
        for name, (lhs, rhs) in psi_products(table).items():
            assert lhs == rhs, name

    @pytest.mark.parametrize("family", ['Ex6_2_A3', 'Ex6_2_B3', 'Ex6_2_H3', 'Thm5_6', 'Lem6_5'])
    def test_discriminant_factorization(self, family):
        table = build_family(family, 6).table
        rng = np.random.default_rng(11)
        for _ in range(20):
            l1, l2 = random_polynomial(rng, 1, 6), random_polynomial(rng, 1, 6)
            assert psi_discriminant_residual(table, l1, l2).is_zero()

    def test_cubic_relation(self, a3_table):
        l1, l2 = Series2.constant(1, D), Series2.t3(D)
        residual = psi_relation_residual(a3_table, l1, l2)
        assert all(x.is_zero() for x in residual)


# ============================================================================
# Классификация
# ============================================================================

class TestClassification:
    """Типы в точках и общий тип"""

    def test_a3_types(self, a3_table):
        assert classify_at(a3_table, (0, 0)) == AlgebraType.Q2
        assert classify_at(a3_table, (2, Fraction(-3, 2))) == AlgebraType.Q3
        assert classify_at(a3_table, (1, 1)) == AlgebraType.Q4
        assert generic_type(a3_table).algebra_type == AlgebraType.Q4

    def test_lem6_5_origin(self, lem6_5_table):
        assert classify_at(lem6_5_table, (0, 0)) == AlgebraType.Q1
        assert generic_type(lem6_5_table).algebra_type == AlgebraType.Q4

    def test_q1_table(self):
        table = build_family('Thm5_2', D).table
        assert generic_type(table).algebra_type == AlgebraType.Q1

    def test_low_truncation_warning(self):
        table = build_family('Lem6_5', 3).table
        result = generic_type(table)
        assert result.warnings

    def test_caustic_implications(self, lem6_5_table):
        for point in [(0, 0), (1, 0), (0, 1), (1, 2)]:
            assert caustic_implications_hold(lem6_5_table, point)

    def test_mult_matrix_of_unit_is_identity(self, a3_table):
        m = mult_matrix(a3_table, (1, 0, 0), (1, 1))
        assert m == m.eye(3)


# ============================================================================
# Нормализация
# ============================================================================

class TestNormalization:
    """normalize и tau"""

    def test_tau_a3(self, a3_table):
        assert tau(a3_table) == Series2.monomial(0, 2, D, Fraction(2, 3))

    def test_normalize_a3(self, a3_table):
        abc = table_to_abc(normalize(a3_table))
        assert abc.b2 == Series2.monomial(0, 1, D, Fraction(-2, 3))
        assert abc.b3.is_zero()
        assert is_f_manifold_closed_form(normalize(a3_table)).verdict

    def test_normalize_requires_closed_form(self, non_f_table):
        with pytest.raises(PreconditionFailed):
            normalize(non_f_table)
        with pytest.raises(PreconditionFailed):
            tau(non_f_table)
