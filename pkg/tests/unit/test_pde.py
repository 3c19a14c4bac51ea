"""
Unit тесты для построения F-многообразий по начальным данным.

Покрывают:
- Восстановление A3 и B3 по ограничению на t3 = 0
- Обращение в ноль невязок скобки на случайных начальных данных
- Точность решения и проверку входных данных
- Нормализацию GH-данных
"""

from fractions import Fraction

import numpy as np
import pytest

from analytics.pde import InitialData, normalize_gh, solve
from analytics.spectrum import CotangentPoly, gh_bracket_residuals
from analytics.tangent_algebra import is_f_manifold_closed_form
from models.catalog import build_family
from models.exceptions import InvalidParameters, PreconditionFailed
from models.series import Series2
from models.tables import GhFrame, gh_to_table
from tests.unit.helpers import random_polynomial

D = 7


def random_t2_polynomial(rng: np.random.Generator, degree: int, truncation: int) -> Series2:
    coeffs = {(i, 0): Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 3)))
              for i in range(degree + 1)}
    return Series2(coeffs, truncation)


class TestSolve:
    """Рекурсия по степеням t3"""

    @pytest.mark.parametrize("family", ['Ex6_2_A3', 'Ex6_2_B3'])
    def test_recovers_coxeter_family(self, family):
        gh = build_family(family, D).gh
        solution = solve(InitialData.from_gh(gh, order=5))
        assert solution.precision == 6
        assert solution.residual_precision == 5
        assert solution.truncated() == gh

    def test_random_initial_data(self):
        rng = np.random.default_rng(3)
        d = 6
        for _ in range(10):
            h2 = random_polynomial(rng, 2, d)
            h2 = h2 - h2.constant_term + 1
            init = InitialData.create(
                g2=random_t2_polynomial(rng, 2, d),
                g1=random_t2_polynomial(rng, 2, d),
                g0=random_t2_polynomial(rng, 2, d),
                h2=h2, h1=random_polynomial(rng, 2, d), h0=random_polynomial(rng, 2, d),
                order=d - 1,
            )
            solution = solve(init)
            residuals = gh_bracket_residuals(solution.truncated())
            assert residuals.is_f_manifold()
            assert is_f_manifold_closed_form(gh_to_table(solution.truncated())).verdict

    def test_coupled_h0_gives_constant_cofactor(self):
        """(g2, h2, h1, h0) = (0, 1, t2, -2/3 g1): g1 и h0 согласуются итерациями solve"""
        zero, one = Series2.zero(D), Series2.constant(1, D)
        g1_initial = Series2.monomial(3, 0, D)
        g0_initial = Series2.monomial(4, 0, D) + Series2.monomial(5, 0, D)
        h0 = g1_initial * Fraction(-2, 3)
        for _ in range(D + 1):
            solution = solve(InitialData.create(g2=zero, g1=g1_initial, g0=g0_initial,
                                                h2=one, h1=Series2.t2(D), h0=h0, order=5))
            next_h0 = solution.gh.g1 * Fraction(-2, 3)
            if next_h0 == h0:
                break
            h0 = next_h0
        assert solution.gh.h0 == solution.gh.g1 * Fraction(-2, 3)
        assert solution.gh.g2.is_zero()

        residuals = gh_bracket_residuals(solution.truncated())
        assert residuals.is_f_manifold()
        assert residuals.cofactor == CotangentPoly.constant(3, D)

    def test_precision_limited_by_order(self):
        gh = build_family('Ex6_2_A3', D).gh
        solution = solve(InitialData.from_gh(gh, order=2))
        assert solution.precision == 3
        assert solution.order == 2

    def test_order_zero_keeps_initial_values(self):
        zero, one = Series2.zero(D), Series2.constant(1, D)
        init = InitialData.create(g2=zero, g1=zero, g0=-Series2.t2(D), h2=one, h1=zero, h0=zero, order=0)
        solution = solve(init)
        assert solution.gh.g0 == -Series2.t2(D)
        assert solution.precision == 1


class TestInitialDataValidation:
    """Проверка начальных данных"""

    def test_non_unit_h2(self):
        zero = Series2.zero(D)
        init = InitialData.create(g2=zero, g1=zero, g0=zero, h2=Series2.t2(D), h1=zero, h0=zero, order=2)
        with pytest.raises(InvalidParameters):
            solve(init)

    def test_initial_value_depends_on_t3(self):
        zero, one = Series2.zero(D), Series2.constant(1, D)
        with pytest.raises(InvalidParameters):
            InitialData.create(g2=Series2.t3(D), g1=zero, g0=zero, h2=one, h1=zero, h0=zero, order=2)

    def test_order_exceeds_truncation(self):
        zero, one = Series2.zero(D), Series2.constant(1, D)
        with pytest.raises(InvalidParameters):
            InitialData.create(g2=zero, g1=zero, g0=zero, h2=one, h1=zero, h0=zero, order=D)


class TestNormalizeGh:
    """Сдвиг t1 -> t1 - tau"""

    def test_a3(self):
        gh = build_family('Ex6_2_A3', D).gh
        new_gh, tau = normalize_gh(gh)
        assert tau == Series2.monomial(0, 2, D, Fraction(2, 3))
        assert new_gh.g2.is_zero()
        assert (2 * new_gh.g1 * new_gh.h2 + 3 * new_gh.h0).is_zero()
        assert gh_bracket_residuals(new_gh).is_f_manifold()

    def test_branch_family(self):
        gh = build_family('Thm7_1a', D, p=2, q=3).gh
        new_gh, _ = normalize_gh(gh)
        assert new_gh.g2.is_zero()

    def test_requires_f_manifold(self):
        zero, one = Series2.zero(D), Series2.constant(1, D)
        gh = GhFrame(g2=zero, g1=zero, g0=zero, h2=one, h1=zero, h0=Series2.t2(D))
        with pytest.raises(PreconditionFailed):
            normalize_gh(gh)
