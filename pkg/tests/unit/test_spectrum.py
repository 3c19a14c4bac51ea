"""
Unit тесты для аналитического спектра и критерия через скобку Пуассона.
"""

from fractions import Fraction

import numpy as np
import pytest

from analytics.spectrum import (
    BRACKET_PAIRS,
    CotangentPoly,
    SectionIdeal,
    SpectrumFrame,
    SpectrumIdeal,
    alpha_of,
    bracket_expansion,
    contains,
    f_condition_bracket,
    fiber_points,
    gh_bracket_residuals,
    poisson,
    reduce,
)
from analytics.tangent_algebra import is_f_manifold_closed_form, mult_matrix
from models.catalog import build_family
from models.exceptions import InvalidParameters
from models.series import Series2
from models.tables import AbcFrame, GhFrame, abc_to_table, gh_to_table
from tests.unit.helpers import random_polynomial

D = 6

# Y-репер для всех трех таблиц; Z-репер там, где d2 порождает алгебру в начале координат
REDUCTION_CASES = [
    ('Ex6_2_A3', SpectrumFrame.Y),
    ('Ex6_2_B3', SpectrumFrame.Y),
    ('Lem6_5', SpectrumFrame.Y),
    ('Ex6_2_A3', SpectrumFrame.Z),
    ('Ex6_2_B3', SpectrumFrame.Z),
]


def random_cotangent_poly(rng: np.random.Generator) -> CotangentPoly:
    """Многочлен степени <= 2 по (y2, y3) со слагаемым y1 y2 и случайными коэффициентами"""
    exps = [(0, 0, 0), (0, 1, 0), (0, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2), (1, 1, 0)]
    return CotangentPoly({e: random_polynomial(rng, 2, D) for e in exps}, D)


@pytest.fixture
def a3():
    return build_family('Ex6_2_A3', D)


@pytest.fixture
def non_f_table():
    zero, one = Series2.zero(D), Series2.constant(1, D)
    return abc_to_table(AbcFrame.associative(a2=zero, a3=one, b2=zero, b3=zero,
                                             c2=zero, c3=Series2.t2(D)))


@pytest.fixture
def non_f_gh():
    """d2^3 = 0, d3 = d2^2 + t2 e: {Z2, Z3} не лежит в идеале"""
    zero, one = Series2.zero(D), Series2.constant(1, D)
    return GhFrame(g2=zero, g1=zero, g0=zero, h2=one, h1=zero, h0=Series2.t2(D))


class TestPoissonBracket:
    """Скобка на T*M"""

    def test_sign_convention(self):
        y2 = CotangentPoly.y(2, D)
        t2 = CotangentPoly.constant(Series2.t2(D), D)
        assert poisson(y2, t2) == CotangentPoly.constant(-1, D)

    def test_antisymmetry(self, a3):
        gens = SpectrumIdeal.from_table(a3.table).generators
        assert poisson(gens['Y22'], gens['Y33']) == -poisson(gens['Y33'], gens['Y22'])

    def test_y1_is_central(self, a3):
        gens = SpectrumIdeal.from_table(a3.table).generators
        for g in gens.values():
            assert poisson(gens['y1-1'], g).is_zero()


class TestReduction:
    """Нормальная форма по модулю идеала"""

    @pytest.mark.parametrize("frame", [SpectrumFrame.Y, SpectrumFrame.Z])
    def test_generators_reduce_to_zero(self, a3, frame):
        ideal = SpectrumIdeal.from_table(a3.table, frame)
        for g in ideal.generators.values():
            assert contains(ideal, g)

    def test_y2_is_normal_form(self, a3):
        ideal = SpectrumIdeal.from_table(a3.table)
        y2 = CotangentPoly.y(2, D)
        assert reduce(y2, ideal) == y2

    def test_y2_squared_is_y3(self, a3):
        ideal = SpectrumIdeal.from_table(a3.table)
        y2, y3 = CotangentPoly.y(2, D), CotangentPoly.y(3, D)
        assert contains(ideal, y2 * y2 - y3)

    @pytest.mark.parametrize("family, frame", REDUCTION_CASES)
    def test_reduce_is_idempotent(self, family, frame):
        ideal = SpectrumIdeal.from_table(build_family(family, D).table, frame)
        rng = np.random.default_rng(5)
        for _ in range(5):
            normal = reduce(random_cotangent_poly(rng), ideal)
            assert reduce(normal, ideal) == normal

    @pytest.mark.parametrize("family, frame", REDUCTION_CASES)
    def test_reduce_is_linear(self, family, frame):
        ideal = SpectrumIdeal.from_table(build_family(family, D).table, frame)
        rng = np.random.default_rng(6)
        for _ in range(5):
            p, q = random_cotangent_poly(rng), random_cotangent_poly(rng)
            s = random_polynomial(rng, 2, D)
            assert reduce(p + q * s, ideal) == reduce(p, ideal) + reduce(q, ideal) * s

    @pytest.mark.parametrize("family, frame", REDUCTION_CASES)
    def test_two_reduction_paths_agree(self, family, frame):
        ideal = SpectrumIdeal.from_table(build_family(family, D).table, frame)
        rng = np.random.default_rng(8)
        for _ in range(5):
            p, q = random_cotangent_poly(rng), random_cotangent_poly(rng)
            assert reduce(reduce(p, ideal) * reduce(q, ideal), ideal) == reduce(p * q, ideal)


class TestBracketCriterion:
    """{I, I} ⊂ I"""

    def test_a3_both_frames(self, a3):
        assert f_condition_bracket(SpectrumIdeal.from_table(a3.table)).verdict
        assert f_condition_bracket(SpectrumIdeal.from_gh(a3.gh)).verdict
        assert gh_bracket_residuals(a3.gh).is_f_manifold()

    def test_non_f_table(self, non_f_table):
        result = f_condition_bracket(SpectrumIdeal.from_table(non_f_table))
        assert not result.verdict
        assert result.residuals
        assert set(result.residuals) <= set(result.normal_forms)

    def test_non_f_gh(self, non_f_gh):
        residuals = gh_bracket_residuals(non_f_gh)
        assert residuals.r2 == Series2.constant(3, D - 1)
        assert not residuals.is_f_manifold()
        assert not f_condition_bracket(SpectrumIdeal.from_gh(non_f_gh)).verdict
        assert not is_f_manifold_closed_form(gh_to_table(non_f_gh)).verdict

    @pytest.mark.parametrize("pair", BRACKET_PAIRS)
    def test_bracket_expansion_identity(self, non_f_table, pair):
        lhs, rhs = bracket_expansion(non_f_table, pair)
        assert lhs == rhs

    def test_bracket_expansion_unknown_pair(self, a3):
        with pytest.raises(InvalidParameters):
            bracket_expansion(a3.table, 'Y22,Y22')


class TestSection:
    """Сечение (y1 - 1, y2, y3 - b2) и 1-форма поля"""

    def test_section_depending_on_t3(self):
        assert SectionIdeal(Series2.t3(D)).is_bracket_closed()

    def test_section_depending_on_t2(self):
        assert not SectionIdeal(Series2.t2(D)).is_bracket_closed()

    def test_alpha_of_weighted_field(self):
        field_ = build_family('Lem6_5', D).fields[0]
        alpha = alpha_of(field_)
        half = Fraction(1, 2)
        expected = (CotangentPoly.y(2, D) * Series2.monomial(1, 0, D, half)
                    + CotangentPoly.y(3, D) * Series2.monomial(0, 1, D, half))
        assert alpha == expected

    def test_alpha_of_meromorphic_field(self):
        field_ = build_family('Thm7_1b', D, p=3, gamma=['1']).fields[0]
        assert not field_.is_holomorphic
        with pytest.raises(InvalidParameters):
            alpha_of(field_)


class TestFiber:
    """Точки слоя над полупростой точкой"""

    def test_lem6_4_fiber(self):
        table = build_family('Lem6_4', D).table
        assert fiber_points(table, (1, 1)) == [(0, 0), (0, 2), (2, 0)]

    def test_fiber_points_lie_on_spectrum(self):
        table = build_family('Lem6_4', D).table
        ideal = SpectrumIdeal.from_table(table)
        for y2, y3 in fiber_points(table, (1, 1)):
            for g in ideal.generators.values():
                assert g.eval_at((1, 1), (1, y2, y3)) == 0

    def test_alpha_reads_euler_eigenvalues(self):
        """Нормальная форма alpha(E) на точках слоя дает собственные значения E∘"""
        build = build_family('Lem6_4', D)
        ideal = SpectrumIdeal.from_table(build.table)
        euler = build.fields[0]
        normal = reduce(alpha_of(euler), ideal)
        for point in [(1, 1), (2, -1), (Fraction(1, 2), 3)]:
            values = [c.eval(point) for c in euler.components()]
            eigenvalues = mult_matrix(build.table, values, point).eigenvals(multiple=True)
            readings = [normal.eval_at(point, (1, y2, y3)) for y2, y3 in fiber_points(build.table, point)]
            assert sorted(readings) == sorted(eigenvalues)

    def test_not_semisimple(self, a3):
        with pytest.raises(InvalidParameters):
            fiber_points(a3.table, (0, 0))
