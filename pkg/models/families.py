"""
Описания семейств нормальных форм F-многообразий.

Модуль содержит:
1. FamilyTag - имена семейств (стабильный словарь CLI)
2. FamilySpec - параметры семейства с проверкой допустимой области
3. FamilyMetadata - ожидаемая классификация построенной таблицы
4. RationalField и литералы рядов для pydantic-моделей
"""

import logging
from enum import Enum
from fractions import Fraction
from typing import Annotated, Any, Dict, List, Optional, Tuple, Union

import sympy
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    ValidationError,
    field_validator,
    model_validator,
)

from models.exceptions import InvalidParameters, UnknownFamily
from models.series import Series2, format_rational, parse_rational
from models.tables import AlgebraType

logger = logging.getLogger(__name__)

RationalField = Annotated[
    Fraction,
    BeforeValidator(parse_rational),
    PlainSerializer(format_rational, return_type=str),
]

SeriesLiteral = List[List[Union[int, str]]]


# ============================================================================
# Литералы рядов
# ============================================================================

def validate_series_literal(entries: Any) -> SeriesLiteral:
    """Проверка записи [[i, j, "num/den"], ...] без привязки к усечению"""
    if not isinstance(entries, (list, tuple)):
        raise ValueError(f"Series literal must be a list, got {entries!r}")
    result = []
    for entry in entries:
        if not isinstance(entry, (list, tuple)) or len(entry) != 3:
            raise ValueError(f"Series entry must be [i, j, \"num/den\"], got {entry!r}")
        i, j, raw = entry
        if not all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in (i, j)):
            raise ValueError(f"Exponents must be non-negative ints, got {entry!r}")
        result.append([i, j, format_rational(parse_rational(raw))])
    return result


def series_from_literal(entries: SeriesLiteral, truncation: int) -> Series2:
    """Ряд из литерала; мономы вне усечения отбрасываются"""
    coeffs: Dict[Tuple[int, int], Fraction] = {}
    for i, j, raw in entries:
        coeffs[(i, j)] = coeffs.get((i, j), Fraction(0)) + parse_rational(raw)
    return Series2(coeffs, truncation)


def _literal_to_sympy(entries: SeriesLiteral, t2: sympy.Symbol, t3: sympy.Symbol) -> sympy.Expr:
    return sum((sympy.Rational(str(parse_rational(c))) * t2 ** i * t3 ** j for i, j, c in entries),
               sympy.Integer(0))


# ============================================================================
# Перечисления
# ============================================================================

class FamilyTag(str, Enum):
    """Семейства нормальных форм"""
    THM5_2 = "Thm5_2"
    THM5_4A = "Thm5_4a"
    THM5_4B = "Thm5_4b"
    THM5_4C = "Thm5_4c"
    THM5_6 = "Thm5_6"
    LEM5_8 = "Lem5_8"
    EX6_2_A3 = "Ex6_2_A3"
    EX6_2_B3 = "Ex6_2_B3"
    EX6_2_H3 = "Ex6_2_H3"
    LEM6_4 = "Lem6_4"
    LEM6_5 = "Lem6_5"
    THM7_1A = "Thm7_1a"
    THM7_1B = "Thm7_1b"
    THM7_1C = "Thm7_1c"
    THM7_1D = "Thm7_1d"
    THM7_1E = "Thm7_1e"
    COR7_2_AI = "Cor7_2_ai"
    COR7_2_AII = "Cor7_2_aii"
    COR7_2_AIII = "Cor7_2_aiii"
    COR7_2_B = "Cor7_2_b"
    COR7_2_C = "Cor7_2_c"
    COR7_2_D = "Cor7_2_d"
    COR7_2_E = "Cor7_2_e"
    PROD_A1A1A1 = "Prod_A1A1A1"
    PROD_A1I2M = "Prod_A1I2m"
    PROD_A1N2 = "Prod_A1N2"

    @classmethod
    def parse(cls, name: Union[str, 'FamilyTag']) -> 'FamilyTag':
        """
        Тег по имени.

        Raises:
            UnknownFamily: Для неизвестного имени
        """
        if isinstance(name, FamilyTag):
            return name
        try:
            return cls(name)
        except ValueError as e:
            raise UnknownFamily(
                f"Unknown family {name!r}; known: {', '.join(t.value for t in cls)}") from e

    @property
    def is_thm7_1(self) -> bool:
        return self.value.startswith('Thm7_1')

    @property
    def is_cor7_2(self) -> bool:
        return self.value.startswith('Cor7_2')

    @property
    def is_product(self) -> bool:
        return self.value.startswith('Prod_')

    @property
    def branch_letter(self) -> Optional[str]:
        """Буква a..e для семейств с ветвями"""
        if self.is_thm7_1:
            return self.value[-1]
        if self.is_cor7_2:
            return self.value.split('_')[-1][0]
        return None


class N2Form(str, Enum):
    """Нормальные формы поля Эйлера на втором множителе N2: g(t3) d3"""
    UNIT = "unit"  # g = 1
    ZERO = "zero"  # g = 0
    LINEAR = "linear"  # g = c0 t3
    POWER = "power"  # g = t3^r (1 + c1 t3^(r-1))


# ============================================================================
# FamilySpec
# ============================================================================

class FamilySpec(BaseModel):
    """
    Параметры семейства нормальных форм.

    Незаданные параметры получают значения по умолчанию в валидаторе.

    Attributes:
        tag: Имя семейства
        p, q: Дискретные параметры (p >= 2, q >= p)
        m: Порядок диэдральной группы I2(m)
        p2, p3: Показатели для Lem6_4
        gamma: Коэффициенты gamma_0..gamma_(p-2) функции rho
        tau0: Сдвиг базовой точки по t3 для Cor7_2
        b2, f, f1, f2, h: Свободные ряды (литералы)
        eps2, eps30: Свободные функции полей Эйлера (литералы от t2)
        c1: Сдвиг поля Эйлера на единичное поле
        c_first, c_second, c_third: Константы полей Эйлера множителей произведения
        n2_form, n2_c0, n2_r, n2_c1: Нормальная форма поля Эйлера на N2
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, extra='forbid')

    tag: FamilyTag = Field(..., description="Семейство")
    p: Optional[int] = Field(None, description="Дискретный параметр p")
    q: Optional[int] = Field(None, description="Дискретный параметр q")
    m: Optional[int] = Field(None, description="Параметр m для I2(m)")
    p2: Optional[int] = Field(None, description="Показатель p2")
    p3: Optional[int] = Field(None, description="Показатель p3")
    gamma: Optional[List[RationalField]] = Field(None, description="gamma_0..gamma_(p-2)")
    tau0: Optional[RationalField] = Field(None, description="Сдвиг t3 -> t3 + tau0")
    b2: Optional[SeriesLiteral] = Field(None, description="Ряд b2 для Thm5_2")
    f: Optional[SeriesLiteral] = Field(None, description="Ряд f для Thm5_4b")
    f1: Optional[SeriesLiteral] = Field(None, description="Ряд f1 для Thm5_4c")
    f2: Optional[SeriesLiteral] = Field(None, description="Ряд f2 для Thm5_4c")
    h: Optional[SeriesLiteral] = Field(None, description="Ряд h для Thm5_4c")
    eps2: Optional[SeriesLiteral] = Field(None, description="Свободная функция eps2(t2)")
    eps30: Optional[SeriesLiteral] = Field(None, description="Свободная функция eps3,0(t2)")
    c1: RationalField = Field(default=Fraction(0), description="Сдвиг E + c1*e")
    c_first: RationalField = Field(default=Fraction(0), description="Константа первого множителя")
    c_second: RationalField = Field(default=Fraction(1), description="Константа второго множителя")
    c_third: RationalField = Field(default=Fraction(2), description="Константа третьего множителя A1")
    n2_form: N2Form = Field(default=N2Form.UNIT, description="Форма поля Эйлера на N2")
    n2_c0: RationalField = Field(default=Fraction(1), description="c0 для формы linear")
    n2_r: int = Field(default=2, description="r для формы power")
    n2_c1: RationalField = Field(default=Fraction(0), description="c1 для формы power")

    @field_validator('b2', 'f', 'f1', 'f2', 'h', 'eps2', 'eps30', mode='before')
    @classmethod
    def series_literal_is_wellformed(cls, v):
        """Литерал ряда должен быть списком [i, j, "num/den"]"""
        if v is None:
            return v
        return validate_series_literal(v)

    @field_validator('eps2', 'eps30')
    @classmethod
    def free_function_depends_on_t2_only(cls, v):
        """Свободные функции полей Эйлера зависят только от t2"""
        if v is not None and any(j != 0 for _, j, _ in v):
            raise ValueError('free Euler functions must not depend on t3')
        return v

    @model_validator(mode='after')
    def apply_defaults_and_domain(self):
        """Значения по умолчанию и проверка области параметров"""
        tag = self.tag
        handler = _DOMAIN_RULES.get(tag)
        if handler is not None:
            handler(self)
        return self

    # ------------------------------------------------------------------
    # Конструктор и доступ
    # ------------------------------------------------------------------

    @classmethod
    def create(cls, tag: Union[str, FamilyTag], **params) -> 'FamilySpec':
        """
        Построение спецификации с переводом ошибок валидации в InvalidParameters.

        Raises:
            UnknownFamily: Неизвестное семейство
            InvalidParameters: Параметры вне области
        """
        family = FamilyTag.parse(tag)
        try:
            return cls(tag=family, **params)
        except ValidationError as e:
            messages = '; '.join(err['msg'] for err in e.errors())
            raise InvalidParameters(f"{family.value}: {messages}") from e

    def series(self, name: str, truncation: int) -> Series2:
        """Свободный ряд-параметр как Series2 при заданном усечении"""
        literal = getattr(self, name)
        if literal is None:
            return Series2.zero(truncation)
        return series_from_literal(literal, truncation)

    def gamma_vector(self) -> List[Fraction]:
        """gamma_0..gamma_(p-2), дополненные нулями"""
        values = list(self.gamma or [])
        return values + [Fraction(0)] * (self.p - 1 - len(values))

    def label(self) -> str:
        """Краткое описание для отчетов"""
        keys = ('p', 'q', 'm', 'p2', 'p3', 'tau0')
        parts = [f"{k}={format_rational(getattr(self, k))}" for k in keys
                 if getattr(self, k) is not None]
        if self.gamma:
            parts.append('gamma=(' + ','.join(format_rational(g) for g in self.gamma) + ')')
        return f"{self.tag.value}({', '.join(parts)})"


# ============================================================================
# Правила области параметров
# ============================================================================

def _require(condition: bool, message: str):
    if not condition:
        raise ValueError(message)


def _default(spec: FamilySpec, name: str, value):
    if getattr(spec, name) is None:
        setattr(spec, name, value)


def _rules_thm5_2(spec: FamilySpec):
    _default(spec, 'b2', [[1, 0, '1']])
    _require(all(i >= 1 for i, _, _ in spec.b2), 'b2 must lie in t2*C{t2,t3}')


def _rules_thm5_4a(spec: FamilySpec):
    _default(spec, 'eps2', [[0, 0, '1']])
    _default(spec, 'eps30', [])


def _rules_thm5_4b(spec: FamilySpec):
    _default(spec, 'f', [[1, 0, '1']])
    _require(any(parse_rational(c) != 0 for _, _, c in spec.f), 'f must be nonzero')
    _require(all(i + j > 0 for i, j, _ in spec.f), 'f must vanish at the origin')


def _rules_thm5_4c(spec: FamilySpec):
    _default(spec, 'f1', [[1, 0, '1']])
    _default(spec, 'f2', [[0, 1, '1']])
    _default(spec, 'h', [[0, 0, '1']])
    for name in ('f1', 'f2'):
        _require(all(i + j > 0 for i, j, _ in getattr(spec, name)), f'{name} must vanish at the origin')
    _require(any(parse_rational(c) != 0 for _, _, c in spec.h), 'h must be nonzero')
    t2, t3 = sympy.symbols('t2 t3')
    f1 = _literal_to_sympy(spec.f1, t2, t3)
    f2 = _literal_to_sympy(spec.f2, t2, t3)
    _require(f1 != 0 and f2 != 0, 'f1 and f2 must be nonzero')
    # gcd считается для многочленов литерала, т.е. с точностью до усечения
    common = sympy.gcd(sympy.Poly(f1, t2, t3), sympy.Poly(f2, t2, t3))
    _require(common.total_degree() == 0, f'gcd(f1, f2) must be 1, got {common.as_expr()}')


def _rules_p(spec: FamilySpec):
    _default(spec, 'p', 2)
    _require(spec.p >= 2, f'p must be >= 2, got {spec.p}')


def _rules_thm5_6(spec: FamilySpec):
    _rules_p(spec)
    _default(spec, 'eps30', [])


def _rules_lem6_4(spec: FamilySpec):
    _default(spec, 'p2', 2)
    _default(spec, 'p3', 2)
    _require(spec.p2 >= 2 and spec.p3 >= 2, 'p2 and p3 must be >= 2')


def _check_gamma_length(spec: FamilySpec):
    _require(len(spec.gamma) <= spec.p - 1,
             f'gamma has {len(spec.gamma)} entries, at most p-1 = {spec.p - 1} allowed')
    spec.gamma = spec.gamma_vector()


def _rules_thm7_1(spec: FamilySpec):
    _rules_p(spec)
    letter = spec.tag.branch_letter
    if letter in ('a', 'c'):
        _default(spec, 'q', spec.p)
        _require(spec.q >= spec.p, f'q must be >= p, got q={spec.q}, p={spec.p}')
        _default(spec, 'gamma', [Fraction(2)])
    else:
        _default(spec, 'gamma', [])
    _check_gamma_length(spec)
    gamma0 = spec.gamma[0]
    if letter in ('a', 'c'):
        _require(gamma0 != 0, 'gamma_0 must be nonzero')
    if letter == 'a' and spec.p == spec.q:
        _require(gamma0 != 1, 'gamma_0 must differ from 1 when p = q')


def _rules_cor7_2(spec: FamilySpec):
    variant = spec.tag.value.split('_')[-1]
    if variant == 'ai':
        _require(spec.p in (None, 2) and spec.q in (None, 2), 'family (a)(i) has p = q = 2')
        spec.p, spec.q = 2, 2
        _default(spec, 'tau0', Fraction(2))
        _require(spec.tau0 not in (0, 1), 'tau0 must avoid 0 and 1')
    elif variant == 'aii':
        _require(spec.p in (None, 2), 'family (a)(ii) has p = 2')
        spec.p = 2
        _default(spec, 'q', 3)
        _require(spec.q >= 3, f'q must be >= 3, got {spec.q}')
        _default(spec, 'tau0', Fraction(1))
        _require(spec.tau0 != 0, 'tau0 must be nonzero')
    elif variant == 'aiii':
        _default(spec, 'p', 3)
        _require(spec.p >= 3, f'p must be >= 3, got {spec.p}')
        _require(spec.q in (None, spec.p), 'family (a)(iii) has q = p')
        spec.q = spec.p
        _default(spec, 'gamma', [Fraction(2)])
        _require(len(spec.gamma) == 1, 'family (a)(iii) takes only gamma_0')
        _require(spec.gamma[0] not in (0, 1), 'gamma_0 must avoid 0 and 1')
        _default(spec, 'tau0', Fraction(0))
    elif variant == 'c':
        _require(spec.p in (None, 2), 'family (c) has p = 2')
        spec.p = 2
        _default(spec, 'q', 2)
        _require(spec.q >= 2, f'q must be >= 2, got {spec.q}')
        _default(spec, 'tau0', Fraction(1))
        _require(spec.tau0 != 0, 'tau0 must be nonzero')
    else:
        _rules_p(spec)
        _default(spec, 'tau0', Fraction(1))
    if variant != 'aiii':
        _require(not spec.gamma, 'gamma is fixed by the family; use tau0')
        spec.gamma = []


def _rules_prod_i2m(spec: FamilySpec):
    _default(spec, 'm', 3)
    _require(spec.m >= 3, f'm must be >= 3, got {spec.m}')


def _rules_prod_n2(spec: FamilySpec):
    if spec.n2_form == N2Form.POWER:
        _require(spec.n2_r >= 2, f'r must be >= 2, got {spec.n2_r}')


_DOMAIN_RULES = {
    FamilyTag.THM5_2: _rules_thm5_2,
    FamilyTag.THM5_4A: _rules_thm5_4a,
    FamilyTag.THM5_4B: _rules_thm5_4b,
    FamilyTag.THM5_4C: _rules_thm5_4c,
    FamilyTag.THM5_6: _rules_thm5_6,
    FamilyTag.LEM5_8: _rules_p,
    FamilyTag.LEM6_4: _rules_lem6_4,
    FamilyTag.PROD_A1I2M: _rules_prod_i2m,
    FamilyTag.PROD_A1N2: _rules_prod_n2,
    **{tag: _rules_thm7_1 for tag in FamilyTag if tag.is_thm7_1},
    **{tag: _rules_cor7_2 for tag in FamilyTag if tag.is_cor7_2},
}


# ============================================================================
# FamilyMetadata
# ============================================================================

class CausticSample(BaseModel):
    """Точка (t2, t3) с ожидаемым типом алгебры"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    point: Tuple[RationalField, RationalField] = Field(..., description="Точка (t2, t3)")
    expected: AlgebraType = Field(..., description="Ожидаемый тип")


class FamilyMetadata(BaseModel):
    """
    Ожидаемая классификация построенной таблицы.

    Attributes:
        generic_type: Общий тип T_tM
        origin_type: Тип T_0M
        caustic: Описание каустики
        caustic_points: Контрольные точки с ожидаемыми типами
        type_resolution: Усечение, начиная с которого общий тип различим
        euler_weights: Веса (w2, w3) поля Эйлера, если оно квазиоднородно
        euler_holomorphic: Голоморфно ли приложенное поле Эйлера
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    generic_type: AlgebraType = Field(..., description="Общий тип")
    origin_type: AlgebraType = Field(..., description="Тип в начале координат")
    caustic: str = Field(default='', description="Описание каустики")
    caustic_points: List[CausticSample] = Field(default_factory=list, description="Точки каустики")
    type_resolution: int = Field(default=1, description="Минимальное усечение для общего типа")
    euler_weights: Optional[Tuple[RationalField, RationalField]] = Field(
        None, description="Веса (w2, w3)")
    euler_holomorphic: bool = Field(default=True, description="Голоморфность поля Эйлера")
