"""
Каталог нормальных форм F-многообразий размерности 3.

build(spec, truncation) возвращает таблицу умножения, приложенные поля Эйлера
и ожидаемую классификацию. Все таблицы строятся в tilde-координатах.

Семейства с ветвями (Thm7_1, Cor7_2) строятся через GH-данные: g2, g1, g0 -
коэффициенты многочлена prod_j (y - d2 f_j) по ветвям f_j, h2, h1, h0 - явные
формулы от rho = t2^(p-2) t3 + sum gamma_i t2^i.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from models.exceptions import InvalidParameters
from models.families import (
    CausticSample,
    FamilyMetadata,
    FamilySpec,
    FamilyTag,
    N2Form,
    SeriesLiteral,
)
from models.fields import PoleSeries, VectorField
from models.products import Factor2d, PlaneEuler, product
from models.series import (
    ExtSeries,
    Series2,
    charpoly_mult,
    parse_rational,
    product_of_roots_poly,
)
from models.tables import (
    AbcFrame,
    AlgebraType,
    GhFrame,
    MultTable,
    abc_to_table,
    gh_to_table,
)

logger = logging.getLogger(__name__)

Q1, Q2, Q3, Q4 = AlgebraType.Q1, AlgebraType.Q2, AlgebraType.Q3, AlgebraType.Q4

# Запас точности для промежуточных вычислений семейств с ветвями
BRANCH_GUARD = 2


@dataclass
class BuildResult:
    """
    Результат построения нормальной формы.

    Attributes:
        spec: Параметры семейства (с примененными значениями по умолчанию)
        table: Таблица умножения
        fields: Поля Эйлера (может быть пустым, если замкнутой формы нет)
        metadata: Ожидаемая классификация
        gh: GH-данные для семейств, заданных в GH-репере
        branches: Ветви f_j для семейств с ветвями
    """
    spec: FamilySpec
    table: MultTable
    fields: List[VectorField]
    metadata: FamilyMetadata
    gh: Optional[GhFrame] = None
    branches: List[ExtSeries] = field(default_factory=list)


# ============================================================================
# Вспомогательные функции
# ============================================================================

def _mono(i: int, j: int, d: int, value=1) -> Series2:
    return Series2.monomial(i, j, d, value)


def _table(d: int, **coeffs: Series2) -> MultTable:
    zero = Series2.zero(d)
    return MultTable(**{name: coeffs.get(name, zero) for name in
                        ('at1', 'at2', 'a3', 'bt1', 'b2', 'b3', 'ct1', 'c2', 'ct3')})


def _merged(literal: SeriesLiteral) -> Dict[Tuple[int, int], Fraction]:
    coeffs: Dict[Tuple[int, int], Fraction] = {}
    for i, j, raw in literal:
        coeffs[(i, j)] = coeffs.get((i, j), Fraction(0)) + parse_rational(raw)
    return {m: c for m, c in coeffs.items() if c != 0}


def _single_monomial(literal: SeriesLiteral) -> Optional[Tuple[int, int]]:
    """Показатели (i, j), если литерал - один моном"""
    coeffs = _merged(literal)
    if len(coeffs) != 1:
        return None
    return next(iter(coeffs))


def _homogeneous_degree(literal: SeriesLiteral) -> Optional[int]:
    degrees = {i + j for (i, j) in _merged(literal)}
    return degrees.pop() if len(degrees) == 1 else None


def _order(literal: SeriesLiteral) -> int:
    return min(i + j for (i, j) in _merged(literal))


def _kappa(rho: Series2, kappa: Fraction) -> Series2:
    """(kappa + t2 d2)(rho)"""
    return rho * kappa + rho.euler_t2()


def _sample(t2, t3, expected: AlgebraType) -> CausticSample:
    return CausticSample(point=(Fraction(t2), Fraction(t3)), expected=expected)


# ============================================================================
# Глава 5: типы Q1, Q2, Q3
# ============================================================================

def _build_thm5_2(spec: FamilySpec, d: int) -> BuildResult:
    """(d3 - b2 d1)∘(d3 - b2 d1) = 0, d2∘d2 = 0, d2∘d3 = b2 d2"""
    b2 = spec.series('b2', d)
    table = _table(d, b2=b2, ct1=-(b2 * b2), ct3=2 * b2)
    fields, weights = [], None
    monomial = _single_monomial(spec.b2)
    if b2.is_zero():
        fields.append(VectorField.weighted(1, 1, d))
        weights = (Fraction(1), Fraction(1))
    elif monomial is not None:
        a = monomial[0]
        fields.append(VectorField.weighted(Fraction(1, a), 0, d))
        weights = (Fraction(1, a), Fraction(0))
    else:
        logger.info("Thm5_2: b2 is not a monomial, no closed-form Euler field attached")
    metadata = FamilyMetadata(generic_type=Q1, origin_type=Q1, euler_weights=weights)
    return BuildResult(spec, table, fields, metadata)


def _build_thm5_4a(spec: FamilySpec, d: int) -> BuildResult:
    """d2∘d2 = d3; E = (t1 + c1) d1 + eps2(t2) d2 + (eps3,0(t2) + (2 eps2' - 1) t3) d3"""
    table = _table(d, a3=Series2.constant(1, d))
    eps2 = spec.series('eps2', d + 1)
    eps3 = spec.series('eps30', d) + Series2.t3(d) * (2 * eps2.deriv(2) - 1)
    fields = [VectorField.euler(eps2.with_truncation(d), eps3, truncation=d)]
    metadata = FamilyMetadata(generic_type=Q2, origin_type=Q2)
    return BuildResult(spec, table, fields, metadata)


def _build_thm5_4b(spec: FamilySpec, d: int) -> BuildResult:
    """d2∘d2 = f d3, f в m - {0}"""
    table = _table(d, a3=spec.series('f', d))
    fields, weights, samples = [], None, []
    monomial = _single_monomial(spec.f)
    if monomial is not None:
        a, b = monomial
        weights = (Fraction(1, a + 2), Fraction(0))
        fields.append(VectorField.weighted(weights[0], 0, d))
        samples.append(_sample(0, Fraction(1, 2), Q1) if a else _sample(Fraction(1, 2), 0, Q1))
    metadata = FamilyMetadata(
        generic_type=Q2, origin_type=Q1, caustic='f = 0', caustic_points=samples,
        type_resolution=_order(spec.f) + 1, euler_weights=weights,
    )
    return BuildResult(spec, table, fields, metadata)


def _build_thm5_4c(spec: FamilySpec, d: int) -> BuildResult:
    """d2∘d2 = f1^2 sigma + ..., sigma = h f2 d2 + h f1 d3, gcd(f1, f2) = 1"""
    f1, f2, h = spec.series('f1', d), spec.series('f2', d), spec.series('h', d)
    table = _table(
        d,
        at2=h * f1 * f1 * f2, a3=h * f1 * f1 * f1,
        b2=-(h * f1 * f2 * f2), b3=-(h * f1 * f1 * f2),
        c2=h * f2 * f2 * f2, ct3=h * f1 * f2 * f2,
    )
    fields, weights = [], None
    deg_f1, deg_f2, deg_h = (_homogeneous_degree(spec.f1), _homogeneous_degree(spec.f2),
                             _homogeneous_degree(spec.h))
    if deg_f1 is not None and deg_f1 == deg_f2 and deg_h is not None:
        alpha = Fraction(1, deg_h + 3 * deg_f1 + 1)
        weights = (alpha, alpha)
        fields.append(VectorField.weighted(alpha, alpha, d))
    resolution = _order(spec.h) + 3 * min(_order(spec.f1), _order(spec.f2)) + 1
    metadata = FamilyMetadata(
        generic_type=Q2, origin_type=Q1, caustic='h = 0 or f1 = f2 = 0',
        type_resolution=resolution, euler_weights=weights,
    )
    return BuildResult(spec, table, fields, metadata)


def _build_thm5_6(spec: FamilySpec, d: int) -> BuildResult:
    """d2∘d2 = phi^2 d3, d2∘d3 = t2^(p-1) phi d3, d3∘d3 = t2^(2p-2) d3"""
    p = spec.p
    phi = Series2.constant(p, d) + _mono(p - 2, 1, d, 2 * p - 2)
    table = _table(d, a3=phi * phi, b3=_mono(p - 1, 0, d) * phi, ct3=_mono(2 * p - 2, 0, d))
    eps30 = spec.series('eps30', d)
    lifted = _mono(p - 2, 0, d) * eps30
    eps2 = Series2.t2(d) * (1 - lifted) * Fraction(1, p)
    eps3 = eps30 + Series2.t3(d) * (2 - p + (2 * p - 2) * lifted) * Fraction(1, p)
    weights = (Fraction(1, p), Fraction(2 - p, p)) if eps30.is_zero() else None
    metadata = FamilyMetadata(
        generic_type=Q3, origin_type=Q2, caustic='t2 = 0',
        caustic_points=[_sample(0, Fraction(1, 5), Q2)],
        type_resolution=2 * p - 1, euler_weights=weights,
    )
    return BuildResult(spec, table, [VectorField.euler(eps2, eps3, truncation=d)], metadata)


def _build_lem5_8(spec: FamilySpec, d: int) -> BuildResult:
    """d2∘d2 = p t2^(p-1) d2, остальные произведения нулевые"""
    p = spec.p
    table = _table(d, at2=_mono(p - 1, 0, d, p))
    w2 = Fraction(1, p)
    fields = [VectorField.weighted(w2, 0, d), VectorField.weighted(w2, 1, d)]
    metadata = FamilyMetadata(
        generic_type=Q3, origin_type=Q1, caustic='t2 = 0',
        caustic_points=[_sample(0, 5, Q1)],
        type_resolution=2 * p - 1, euler_weights=(w2, Fraction(0)),
    )
    return BuildResult(spec, table, fields, metadata)


# ============================================================================
# Глава 6: полупростые примеры
# ============================================================================

# g2, g1, g0 как списки (коэффициент, i, j); веса (w2, w3); каустика
_COXETER = {
    FamilyTag.EX6_2_A3: (
        ([], [(-2, 0, 1)], [(-1, 1, 0)]),
        (Fraction(3, 4), Fraction(1, 2)),
        '27*t2^2 + 32*t3^3 = 0',
        [(2, Fraction(-3, 2))],
    ),
    FamilyTag.EX6_2_B3: (
        ([(-2, 0, 1)], [(-1, 1, 0)], []),
        (Fraction(2, 3), Fraction(1, 3)),
        't2*(t3^2 - t2) = 0',
        [(1, 1), (0, 1)],
    ),
    FamilyTag.EX6_2_H3: (
        ([(4, 0, 2)], [(4, 1, 1)], [(1, 2, 0)]),
        (Fraction(3, 5), Fraction(1, 5)),
        'discriminant of xi^3 - (2*xi*t3 + t2)^2 = 0',
        [(0, 1), (Fraction(-1, 2), Fraction(3, 4))],
    ),
}


def _build_coxeter(spec: FamilySpec, d: int) -> BuildResult:
    """GH-данные d3 = d2^2 с кубическим уравнением на d2 (A3, B3, H3)"""
    g_terms, weights, caustic, points = _COXETER[spec.tag]
    g2, g1, g0 = (sum((_mono(i, j, d, c) for c, i, j in terms), Series2.zero(d))
                  for terms in g_terms)
    zero = Series2.zero(d)
    gh = GhFrame(g2=g2, g1=g1, g0=g0, h2=Series2.constant(1, d), h1=zero, h0=zero)
    metadata = FamilyMetadata(
        generic_type=Q4, origin_type=Q2, caustic=caustic,
        caustic_points=[_sample(t2, t3, Q3) for t2, t3 in points],
        type_resolution=7, euler_weights=weights,
    )
    fields = [VectorField.weighted(weights[0], weights[1], d)]
    return BuildResult(spec, gh_to_table(gh), fields, metadata, gh=gh)


def _build_lem6_4(spec: FamilySpec, d: int) -> BuildResult:
    """d2∘d2 = p2 t2^(p2-1) d2, d3∘d3 = p3 t3^(p3-1) d3, d2∘d3 = 0"""
    p2, p3 = spec.p2, spec.p3
    table = _table(d, at2=_mono(p2 - 1, 0, d, p2), ct3=_mono(0, p3 - 1, d, p3))
    weights = (Fraction(1, p2), Fraction(1, p3))
    metadata = FamilyMetadata(
        generic_type=Q4, origin_type=Q1, caustic='t2*t3 = 0',
        caustic_points=[_sample(0, 1, Q3), _sample(1, 0, Q3)],
        type_resolution=2 * p2 + 2 * p3 - 3, euler_weights=weights,
    )
    return BuildResult(spec, table, [VectorField.weighted(*weights, d)], metadata)


def _build_lem6_5(spec: FamilySpec, d: int) -> BuildResult:
    """ABC-данные с линейными a2, a3, b2, b3, c2, c3; дискриминант 9/4(t3^4 + 6t2^2t3^2 - 3t2^4)"""
    t2, t3 = Series2.t2(d), Series2.t3(d)
    abc = AbcFrame.associative(
        a2=t3 * Fraction(-3, 2), a3=t2 * Fraction(-3, 2),
        b2=t2 * Fraction(-1, 2), b3=t3 * Fraction(1, 2),
        c2=t3 * Fraction(-1, 2), c3=t2 * Fraction(3, 2),
    )
    half = Fraction(1, 2)
    metadata = FamilyMetadata(
        generic_type=Q4, origin_type=Q1, caustic='t3^4 + 6*t2^2*t3^2 - 3*t2^4 = 0',
        type_resolution=5, euler_weights=(half, half),
    )
    return BuildResult(spec, abc_to_table(abc), [VectorField.weighted(half, half, d)], metadata)


# ============================================================================
# Глава 7: семейства с ветвями
# ============================================================================

def _rho(p: int, gamma: List[Fraction], d: int) -> Series2:
    rho = _mono(p - 2, 1, d)
    for i, g in enumerate(gamma):
        rho = rho + _mono(i, 0, d, g)
    return rho


def _branches(letter: str, p: int, q: Optional[int], rho: Series2, d: int) -> List[ExtSeries]:
    one = Series2.constant(1, d)
    zero = ExtSeries.lift(Series2.zero(d), 1)
    half, third = Fraction(1, 2), Fraction(1, 3)
    if letter == 'a':
        return [zero, ExtSeries.t2_power(p, 1, one), ExtSeries.t2_power(q, 1, rho)]
    if letter == 'b':
        return [zero, ExtSeries.t2_power(half + p, 2, one) + ExtSeries.t2_power(1 + p, 2, rho)]
    if letter == 'c':
        return [zero, ExtSeries.t2_power(half + q, 2, rho) + ExtSeries.t2_power(p, 2, one)]
    if letter == 'd':
        return [ExtSeries.t2_power(third + p, 3, one) + ExtSeries.t2_power(2 * third + p, 3, rho)]
    return [ExtSeries.t2_power(2 * third + p, 3, one) + ExtSeries.t2_power(4 * third + p, 3, rho)]


def _g_from_branches(branches: List[ExtSeries], d: int) -> Tuple[Series2, Series2, Series2]:
    """g2, g1, g0 из y^3 - g2 y^2 - g1 y - g0 = prod (y - d2 f_j)"""
    factors = []
    for branch in branches:
        df = branch.deriv(2)
        if branch.k == 1:
            factors.append((df.parts[0],))
        else:
            factors.append(charpoly_mult(df)[:branch.k])
    c0, c1, c2, _ = product_of_roots_poly(factors, d)
    return -c2, -c1, -c0


def _h_from_rho(letter: str, p: int, q: Optional[int], rho: Series2,
                d: int) -> Tuple[Series2, Series2, Series2]:
    """h2, h1, h0, при которых d3 f_j = h2 (d2 f_j)^2 + h1 d2 f_j + h0 для всех ветвей"""
    t2 = Series2.t2(d)
    zero = Series2.zero(d)
    if letter == 'a':
        r = _kappa(rho, Fraction(q))
        h2 = (r * (r * _mono(q - p, 0, d) - p)).invert()
        return h2, h2 * _mono(p - 1, 0, d, -p), zero
    if letter == 'b':
        s = _kappa(rho, Fraction(1 + p))
        h2 = ((Fraction(1, 2) + p) ** 2 - t2 * s * s).invert()
        return h2, h2 * _mono(p, 0, d, -2) * s, zero
    if letter == 'c':
        s = _kappa(rho, Fraction(1, 2) + q)
        h2 = (s * (p - _mono(1 + 2 * (q - p), 0, d, Fraction(1, p)) * s * s)).invert()
        h1 = h2 * (_mono(p - 1, 0, d, -p) - _mono(2 * q - p, 0, d, Fraction(1, p)) * s * s)
        return h2, h1, zero
    if letter == 'd':
        t = _kappa(rho, Fraction(2, 3) + p)
        alpha = Fraction(1, 3) + p
        h2 = (alpha * alpha - t2 * t * t * t * (1 / alpha)).invert()
        h1 = h2 * _mono(p, 0, d, -1 / alpha) * t * t
        h0 = h2 * _mono(2 * p - 1, 0, d, -2 * alpha) * t
        return h2, h1, h0
    u = _kappa(rho, Fraction(4, 3) + p)
    beta = Fraction(2, 3) + p
    h2 = (beta * beta - _mono(2, 0, d) * u * u * u * (1 / beta)).invert()
    h1 = h2 * _mono(p + 1, 0, d, -1 / beta) * u * u
    h0 = h2 * _mono(2 * p, 0, d, -2 * beta) * u
    return h2, h1, h0


# w в eps2 = t2/w и kappa в eps3 = -t2^(2-p) (kappa + t2 d2)(rho) / w
_EULER_DATA: Dict[str, Callable[[int, Optional[int]], Tuple[Fraction, Fraction]]] = {
    'a': lambda p, q: (Fraction(p), Fraction(q - p)),
    'b': lambda p, q: (Fraction(1, 2) + p, Fraction(1, 2)),
    'c': lambda p, q: (Fraction(p), Fraction(1, 2) + q - p),
    'd': lambda p, q: (Fraction(1, 3) + p, Fraction(1, 3)),
    'e': lambda p, q: (Fraction(2, 3) + p, Fraction(2, 3)),
}


def _type_resolution(letter: str, p: int, q: Optional[int]) -> int:
    n = {
        'a': lambda: 2 * (2 * p + q - 3),
        'b': lambda: 6 * p - 3,
        'c': lambda: 4 * p + 2 * q - 5,
        'd': lambda: 6 * p - 4,
        'e': lambda: 6 * p - 2,
    }[letter]()
    return n + 2


def _build_branch_family(spec: FamilySpec, d: int, gamma: List[Fraction]) -> BuildResult:
    letter, p, q = spec.tag.branch_letter, spec.p, spec.q
    inner = d + BRANCH_GUARD
    rho = _rho(p, gamma, inner)
    branches = _branches(letter, p, q, rho, inner)
    g2, g1, g0 = _g_from_branches(branches, inner)
    h2, h1, h0 = _h_from_rho(letter, p, q, rho, inner)
    gh = GhFrame(g2=g2, g1=g1, g0=g0, h2=h2, h1=h1, h0=h0).map(lambda s: s.with_truncation(d))

    w, kappa = _EULER_DATA[letter](p, q)
    eps3 = PoleSeries(p - 2, (_kappa(rho, kappa) * (-1 / w)).with_truncation(d))
    euler = VectorField.euler(Series2.t2(d) * (1 / w), eps3, truncation=d)
    logger.debug(f"{spec.tag.value}: eps3 pole order {euler.max_pole}")

    metadata = FamilyMetadata(
        generic_type=Q4, origin_type=Q2, caustic='t2 = 0',
        caustic_points=[_sample(0, Fraction(1, 7), Q2)],
        type_resolution=_type_resolution(letter, p, q),
        euler_holomorphic=euler.is_holomorphic,
    )
    return BuildResult(spec, gh_to_table(gh), [euler], metadata, gh=gh, branches=branches)


def _build_thm7_1(spec: FamilySpec, d: int) -> BuildResult:
    return _build_branch_family(spec, d, spec.gamma_vector())


def _build_cor7_2(spec: FamilySpec, d: int) -> BuildResult:
    """Семейства Thm7_1 в точке (0, tau0) каустики: gamma_(p-2) = tau0"""
    gamma = [Fraction(0)] * (spec.p - 1)
    if spec.tag == FamilyTag.COR7_2_AIII:
        gamma[0] = spec.gamma[0]
    gamma[spec.p - 2] += spec.tau0
    return _build_branch_family(spec, d, gamma)


# ============================================================================
# Произведения
# ============================================================================

def _n2_plane_euler(spec: FamilySpec, d: int) -> Series2:
    if spec.n2_form == N2Form.UNIT:
        return Series2.constant(1, d)
    if spec.n2_form == N2Form.ZERO:
        return Series2.zero(d)
    if spec.n2_form == N2Form.LINEAR:
        return Series2.t3(d) * spec.n2_c0
    r = spec.n2_r
    return _mono(0, r, d) + _mono(0, 2 * r - 1, d, spec.n2_c1)


def _build_product(spec: FamilySpec, d: int) -> BuildResult:
    t3 = Series2.t3(d)
    if spec.tag == FamilyTag.PROD_A1I2M:
        factor, g = Factor2d.I2M, t3 * Fraction(2, spec.m)
        metadata = FamilyMetadata(
            generic_type=Q4, origin_type=Q3, caustic='t3 = 0',
            caustic_points=[_sample(Fraction(1, 3), 0, Q3)], type_resolution=spec.m,
        )
    elif spec.tag == FamilyTag.PROD_A1N2:
        factor, g = Factor2d.N2, _n2_plane_euler(spec, d)
        metadata = FamilyMetadata(generic_type=Q3, origin_type=Q3)
    else:
        factor, g = Factor2d.A1A1, t3 + (spec.c_third - spec.c_second)
        metadata = FamilyMetadata(generic_type=Q4, origin_type=Q4)
    result = product(factor, PlaneEuler(c=spec.c_second, g=g), d, m=spec.m or 3,
                     c_first=spec.c_first)
    return BuildResult(spec, result.table, [result.field], metadata)


# ============================================================================
# build
# ============================================================================

_BUILDERS: Dict[FamilyTag, Callable[[FamilySpec, int], BuildResult]] = {
    FamilyTag.THM5_2: _build_thm5_2,
    FamilyTag.THM5_4A: _build_thm5_4a,
    FamilyTag.THM5_4B: _build_thm5_4b,
    FamilyTag.THM5_4C: _build_thm5_4c,
    FamilyTag.THM5_6: _build_thm5_6,
    FamilyTag.LEM5_8: _build_lem5_8,
    FamilyTag.EX6_2_A3: _build_coxeter,
    FamilyTag.EX6_2_B3: _build_coxeter,
    FamilyTag.EX6_2_H3: _build_coxeter,
    FamilyTag.LEM6_4: _build_lem6_4,
    FamilyTag.LEM6_5: _build_lem6_5,
    **{tag: _build_thm7_1 for tag in FamilyTag if tag.is_thm7_1},
    **{tag: _build_cor7_2 for tag in FamilyTag if tag.is_cor7_2},
    **{tag: _build_product for tag in FamilyTag if tag.is_product},
}


def build(spec: FamilySpec, truncation: int) -> BuildResult:
    """
    Построение нормальной формы семейства.

    Args:
        spec: Параметры семейства
        truncation: Усечение D >= 1

    Returns:
        BuildResult с таблицей, полями Эйлера (сдвинутыми на c1*e) и метаданными

    Raises:
        InvalidParameters: Недопустимое усечение
    """
    if not isinstance(truncation, int) or truncation < 1:
        raise InvalidParameters(f"Truncation must be an int >= 1, got {truncation!r}")
    result = _BUILDERS[spec.tag](spec, truncation)
    if spec.c1:
        result.fields = [f.shifted(spec.c1) for f in result.fields]
    logger.info(f"Built {spec.label()} at truncation {truncation}")
    return result


def build_family(tag, truncation: int, **params) -> BuildResult:
    """build(FamilySpec.create(tag, **params), truncation)"""
    return build(FamilySpec.create(tag, **params), truncation)
