"""
Построение F-многообразий по начальным данным на t3 = 0.

При заданных h2, h1, h0 (h2 - единица) и g2, g1, g0 на t3 = 0 существуют
единственные g2, g1, g0, при которых GH-данные задают F-многообразие:
d3 g_j равно правой части, зависящей от g и их производных по t2.
Ряд строится по степеням t3: (k+1) g_(j,k+1) = [RHS_j]_k.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from analytics.spectrum import gh_bracket_residuals
from analytics.tangent_algebra import integrate_closed
from models.exceptions import InvalidParameters, PreconditionFailed
from models.series import Series2
from models.tables import GhFrame, MultTable, Vec3, gh_to_table, table_to_gh

logger = logging.getLogger(__name__)


# ============================================================================
# Начальные данные
# ============================================================================

class InitialData(BaseModel):
    """
    Начальные данные задачи Коши.

    Attributes:
        g2, g1, g0: Значения g на t3 = 0 (ряды без t3)
        h2, h1, h0: Коэффициенты d3 = h2 d2^2 + h1 d2 + h0 e
        order: Целевой порядок N по t3
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    g2: Series2 = Field(..., description="g2 на t3 = 0")
    g1: Series2 = Field(..., description="g1 на t3 = 0")
    g0: Series2 = Field(..., description="g0 на t3 = 0")
    h2: Series2 = Field(..., description="h2, единица")
    h1: Series2 = Field(..., description="h1")
    h0: Series2 = Field(..., description="h0")
    order: int = Field(..., ge=0, description="Порядок по t3")

    @field_validator('g2', 'g1', 'g0')
    @classmethod
    def initial_values_have_no_t3(cls, v: Series2) -> Series2:
        if v.has_t3():
            raise ValueError(f'initial value must not depend on t3, got {v}')
        return v

    @model_validator(mode='after')
    def order_fits_truncation(self):
        if self.order > self.truncation - 1:
            raise ValueError(
                f'order {self.order} exceeds the t3 budget {self.truncation - 1} at truncation {self.truncation}')
        return self

    @property
    def truncation(self) -> int:
        return min(getattr(self, name).truncation for name in ('g2', 'g1', 'g0', 'h2', 'h1', 'h0'))

    @classmethod
    def create(cls, **values) -> 'InitialData':
        """
        Построение с переводом ошибок валидации в InvalidParameters.

        Raises:
            InvalidParameters: Начальные данные вне области
        """
        try:
            return cls(**values)
        except ValidationError as e:
            raise InvalidParameters('; '.join(err['msg'] for err in e.errors())) from e

    @classmethod
    def from_gh(cls, gh: GhFrame, order: int) -> 'InitialData':
        """Ограничение g на t3 = 0 вместе с h из готовых GH-данных"""
        return cls.create(g2=gh.g2.restrict_t3_zero(), g1=gh.g1.restrict_t3_zero(),
                          g0=gh.g0.restrict_t3_zero(), h2=gh.h2, h1=gh.h1, h0=gh.h0, order=order)


@dataclass
class PdeSolution:
    """
    Решение задачи Коши.

    Attributes:
        gh: GH-данные с найденными g
        order: Достигнутый порядок по t3
        precision: Полная степень, до которой g точны (min(D, N+1))
    """
    gh: GhFrame
    order: int
    precision: int

    @property
    def residual_precision(self) -> int:
        """Усечение, до которого невязки скобки обязаны обращаться в ноль"""
        return max(self.precision - 1, 0)

    def truncated(self) -> GhFrame:
        return self.gh.map(lambda s: s.with_truncation(min(s.truncation, self.precision)))


# ============================================================================
# Решение
# ============================================================================

def _right_sides(g2: Series2, g1: Series2, g0: Series2, h2: Series2, h1: Series2,
                 h0: Series2) -> Vec3:
    """Правые части d3 g2, d3 g1, d3 g0"""
    g22, g12, g02 = g2.deriv(2), g1.deriv(2), g0.deriv(2)
    h22, h12, h02 = h2.deriv(2), h1.deriv(2), h0.deriv(2)
    rhs2 = ((g2 * g2 + 2 * g1) * h2 + g2 * h1 + 3 * h0).deriv(2)
    rhs1 = ((2 * g22 * g1 + 2 * g02) * h2 + (g2 * g1 + 3 * g0) * h22 + g12 * h1
            + 2 * g1 * h12 - 2 * g2 * h02)
    rhs0 = (2 * g22 * g0 * h2 + g2 * g0 * h22 + g02 * h1 + 3 * g0 * h12 - g1 * h02)
    return rhs2, rhs1, rhs0


def solve(init: InitialData) -> PdeSolution:
    """
    Рекурсия по степеням t3 до порядка init.order.

    Raises:
        InvalidParameters: h2 не единица или начальные данные зависят от t3
    """
    if not init.h2.is_unit():
        raise InvalidParameters(f"h2 must be a unit, got h2(0) = 0 ({init.h2})")
    if any(g.has_t3() for g in (init.g2, init.g1, init.g0)):
        raise InvalidParameters("Initial values g_j must not depend on t3")

    d = init.truncation
    h2, h1, h0 = (s.with_truncation(d) for s in (init.h2, init.h1, init.h0))
    g = [s.with_truncation(d) for s in (init.g2, init.g1, init.g0)]
    for k in range(init.order):
        rhs = _right_sides(*g, h2, h1, h0)
        g = [g[j] + rhs[j].coeff_t3(k).shift_t3(k + 1) * Fraction(1, k + 1) for j in range(3)]
        logger.debug(f"PDE step {k + 1}/{init.order}: g2 = {g[0]}")

    precision = min(d, init.order + 1)
    gh = GhFrame(g2=g[0], g1=g[1], g0=g[2], h2=h2, h1=h1, h0=h0)
    logger.info(f"Solved PDE to t3-order {init.order} at truncation {d} (precision {precision})")
    return PdeSolution(gh=gh, order=init.order, precision=precision)


# ============================================================================
# Нормализация GH-данных
# ============================================================================

def normalize_gh(gh: GhFrame) -> Tuple[GhFrame, Series2]:
    """
    Замена t1 -> t1 - tau, после которой g2 = 0 и 2 g1 h2 + 3 h0 = 0.

    d2 tau = -g2/3, d3 tau = -((g2^2 + 2 g1) h2 + g2 h1 + 3 h0)/3.

    Returns:
        (новые GH-данные, tau)

    Raises:
        PreconditionFailed: Если GH-данные не задают F-многообразие
    """
    residuals = gh_bracket_residuals(gh)
    if not residuals.is_f_manifold():
        raise PreconditionFailed(
            "normalize_gh requires an F-manifold GH frame",
            residuals={'r2': residuals.r2, 'r1': residuals.r1, 'r0': residuals.r0},
        )
    third = Fraction(1, 3)
    p = -(gh.g2 * third)
    q = -(((gh.g2 * gh.g2 + 2 * gh.g1) * gh.h2 + gh.g2 * gh.h1 + 3 * gh.h0) * third)
    tau = integrate_closed(p, q)

    table = gh_to_table(gh)
    shift = {1: Series2.zero(table.truncation), 2: p, 3: q}

    def to_new_frame(v: Vec3) -> Vec3:
        return (v[0] - v[1] * p - v[2] * q, v[1], v[2])

    def new_product(i: int, j: int) -> Vec3:
        # (d_i + P_i e)∘(d_j + P_j e)
        base = table.product(i, j)
        d_i, d_j = table.product(1, i), table.product(1, j)
        return tuple(base[k] + shift[i] * d_j[k] + shift[j] * d_i[k]
                     + (shift[i] * shift[j] if k == 0 else 0) for k in range(3))

    new_table = MultTable.from_products(
        to_new_frame(new_product(2, 2)),
        to_new_frame(new_product(2, 3)),
        to_new_frame(new_product(3, 3)),
    )
    new_gh = table_to_gh(new_table)
    logger.info(f"Normalized GH frame at truncation {gh.truncation}")
    return new_gh, tau
