"""
Загрузка и сохранение JSON-документов fmankit.

Этот модуль:
1. Описывает форматы fmankit-table/1, fmankit-field/1, fmankit-init/1 (pydantic)
2. Проверяет документы при чтении (неизвестные ключи, литералы рядов, полюса)
3. Конвертирует документы в MultTable, VectorField, InitialData и обратно
"""

import logging
from enum import Enum
from pathlib import Path
from typing import Dict, List, Literal, Optional, Type, TypeVar, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from analytics.pde import InitialData
from models.exceptions import ParseError
from models.families import RationalField
from models.fields import PoleSeries, VectorField
from models.series import Series2
from models.tables import (
    AbcFrame,
    GhFrame,
    MultTable,
    abc_to_table,
    frame_names,
    gh_to_table,
    table_to_abc,
    table_to_gh,
)

logger = logging.getLogger(__name__)

TABLE_FORMAT = "fmankit-table/1"
FIELD_FORMAT = "fmankit-field/1"
INIT_FORMAT = "fmankit-init/1"

Entries = List[List[Union[int, str]]]


class Frame(str, Enum):
    """Репер, в котором записаны коэффициенты таблицы"""
    TILDE = "tilde"
    ABC = "abc"
    GH = "gh"


def _canonical(entries: Entries, truncation: int) -> Entries:
    """Строгая проверка литерала и приведение к канонической записи"""
    return Series2.from_entries(entries, truncation).to_entries()


# ============================================================================
# Документы
# ============================================================================

class TableDocument(BaseModel):
    """Таблица умножения в одном из реперов tilde/abc/gh"""

    model_config = ConfigDict(extra='forbid')

    format: Literal["fmankit-table/1"] = Field(default=TABLE_FORMAT, description="Версия формата")
    truncation: int = Field(..., ge=1, description="Усечение D")
    frame: Frame = Field(default=Frame.TILDE, description="Репер")
    coefficients: Dict[str, Entries] = Field(default_factory=dict, description="Коэффициенты")

    @model_validator(mode='after')
    def coefficients_match_frame(self):
        names = frame_names(self.frame.value)
        unknown = sorted(set(self.coefficients) - set(names))
        if unknown:
            raise ValueError(f"unknown coefficients for frame {self.frame.value}: {unknown}")
        self.coefficients = {name: _canonical(self.coefficients.get(name, []), self.truncation)
                             for name in names}
        return self

    def series(self) -> Dict[str, Series2]:
        return {name: Series2.from_entries(entries, self.truncation)
                for name, entries in self.coefficients.items()}

    def to_gh(self) -> GhFrame:
        if self.frame != Frame.GH:
            raise ParseError(f"Document is in frame {self.frame.value}, not gh")
        return GhFrame(**self.series())

    def to_table(self) -> MultTable:
        """
        Tilde-таблица документа.

        Raises:
            FrameDegenerate: Для GH-данных с необратимым h2
        """
        coeffs = self.series()
        if self.frame == Frame.ABC:
            return abc_to_table(AbcFrame(**coeffs))
        if self.frame == Frame.GH:
            return gh_to_table(GhFrame(**coeffs))
        return MultTable(**coeffs)

    @classmethod
    def from_table(cls, table: MultTable, frame: Frame = Frame.TILDE) -> 'TableDocument':
        frame = Frame(frame)
        if frame == Frame.ABC:
            coeffs = table_to_abc(table).coefficients()
        elif frame == Frame.GH:
            coeffs = table_to_gh(table).coefficients()
        else:
            coeffs = table.coefficients()
        return cls.from_coefficients(coeffs, table.truncation, frame)

    @classmethod
    def from_gh(cls, gh: GhFrame) -> 'TableDocument':
        return cls.from_coefficients(gh.coefficients(), gh.truncation, Frame.GH)

    @classmethod
    def from_coefficients(cls, coeffs: Dict[str, Series2], truncation: int,
                          frame: Frame) -> 'TableDocument':
        return cls(truncation=truncation, frame=frame,
                   coefficients={name: s.with_truncation(truncation).to_entries()
                                 for name, s in coeffs.items()})


class PoleEntry(BaseModel):
    """Мероморфный коэффициент t2^(-pole) * series"""

    model_config = ConfigDict(extra='forbid')

    pole: int = Field(default=0, ge=0, description="Порядок полюса")
    series: Entries = Field(default_factory=list, description="Числитель")


class FieldDocument(BaseModel):
    """Векторное поле (c*t1 + eps1) d1 + eps2 d2 + eps3 d3"""

    model_config = ConfigDict(extra='forbid')

    format: Literal["fmankit-field/1"] = Field(default=FIELD_FORMAT, description="Версия формата")
    truncation: int = Field(..., ge=1, description="Усечение D")
    c: RationalField = Field(..., description="Коэффициент при t1")
    eps1: Entries = Field(default_factory=list, description="eps1 при t1 = 0")
    eps2: PoleEntry = Field(default_factory=PoleEntry, description="eps2")
    eps3: PoleEntry = Field(default_factory=PoleEntry, description="eps3")

    @model_validator(mode='after')
    def entries_are_canonical(self):
        self.eps1 = _canonical(self.eps1, self.truncation)
        for name in ('eps2', 'eps3'):
            entry = getattr(self, name)
            entry.series = _canonical(entry.series, self.truncation)
            numerator = Series2.from_entries(entry.series, self.truncation)
            if entry.pole > 0 and (numerator.is_zero() or numerator.divisible_by_t2()):
                raise ValueError(f"{name}: pole order {entry.pole} is not canonical")
        return self

    def to_field(self) -> VectorField:
        d = self.truncation

        def pole_series(entry: PoleEntry) -> PoleSeries:
            return PoleSeries(entry.pole, Series2.from_entries(entry.series, d))

        return VectorField(c=self.c, eps1=Series2.from_entries(self.eps1, d),
                           eps2=pole_series(self.eps2), eps3=pole_series(self.eps3))

    @classmethod
    def from_field(cls, field_: VectorField) -> 'FieldDocument':
        d = field_.truncation

        def entry(p: PoleSeries) -> PoleEntry:
            return PoleEntry(pole=p.pole, series=p.series.with_truncation(d).to_entries())

        return cls(truncation=d, c=field_.c, eps1=field_.eps1.with_truncation(d).to_entries(),
                   eps2=entry(field_.eps2), eps3=entry(field_.eps3))


class InitialDataDocument(BaseModel):
    """Начальные данные для построения по степеням t3"""

    model_config = ConfigDict(extra='forbid')

    format: Literal["fmankit-init/1"] = Field(default=INIT_FORMAT, description="Версия формата")
    truncation: int = Field(..., ge=1, description="Усечение D")
    order: Optional[int] = Field(None, ge=0, description="Порядок по t3 (по умолчанию D-1)")
    g2: Entries = Field(default_factory=list)
    g1: Entries = Field(default_factory=list)
    g0: Entries = Field(default_factory=list)
    h2: Entries = Field(default_factory=lambda: [[0, 0, "1"]])
    h1: Entries = Field(default_factory=list)
    h0: Entries = Field(default_factory=list)

    @model_validator(mode='after')
    def entries_are_canonical(self):
        for name in ('g2', 'g1', 'g0', 'h2', 'h1', 'h0'):
            setattr(self, name, _canonical(getattr(self, name), self.truncation))
        return self

    def to_initial_data(self, order: Optional[int] = None) -> InitialData:
        """
        Raises:
            InvalidParameters: Начальные данные вне области
        """
        d = self.truncation
        chosen = order if order is not None else (self.order if self.order is not None else d - 1)
        return InitialData.create(
            **{name: Series2.from_entries(getattr(self, name), d)
               for name in ('g2', 'g1', 'g0', 'h2', 'h1', 'h0')},
            order=chosen,
        )


# ============================================================================
# Loader
# ============================================================================

DocumentT = TypeVar('DocumentT', bound=BaseModel)


class DocumentLoader:
    """
    Чтение и запись документов fmankit.

    Основные функции:
    - Разбор JSON со строгой проверкой схемы
    - Конвертация в объекты библиотеки
    - Запись в каноническом виде (повторное чтение дает тот же документ)
    """

    def _load(self, file_path: Union[str, Path], model: Type[DocumentT]) -> DocumentT:
        path = Path(file_path)
        logger.info(f"Loading {model.__name__} from {path}")
        if not path.exists():
            raise FileNotFoundError(f"Document not found: {path}")
        try:
            text = path.read_text(encoding='utf-8')
        except (UnicodeDecodeError, OSError) as e:
            raise ParseError(f"{path}: cannot read document: {e}") from e
        try:
            return model.model_validate_json(text)
        except ValidationError as e:
            messages = '; '.join(f"{'.'.join(str(x) for x in err['loc'])}: {err['msg']}"
                                 for err in e.errors())
            raise ParseError(f"{path}: {messages}") from e

    def load_table_document(self, file_path: Union[str, Path]) -> TableDocument:
        return self._load(file_path, TableDocument)

    def load_table(self, file_path: Union[str, Path]) -> MultTable:
        return self.load_table_document(file_path).to_table()

    def load_field(self, file_path: Union[str, Path]) -> VectorField:
        return self._load(file_path, FieldDocument).to_field()

    def load_initial_data(self, file_path: Union[str, Path], order: Optional[int] = None) -> InitialData:
        return self._load(file_path, InitialDataDocument).to_initial_data(order)

    def save(self, document: BaseModel, file_path: Union[str, Path]) -> Path:
        path = Path(file_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(document.model_dump_json(indent=2) + '\n', encoding='utf-8')
        logger.info(f"Saved {type(document).__name__} to {path}")
        return path

    def save_table(self, table: MultTable, file_path: Union[str, Path],
                   frame: Frame = Frame.TILDE) -> Path:
        return self.save(TableDocument.from_table(table, frame), file_path)

    def save_gh(self, gh: GhFrame, file_path: Union[str, Path]) -> Path:
        return self.save(TableDocument.from_gh(gh), file_path)

    def save_field(self, field_: VectorField, file_path: Union[str, Path]) -> Path:
        return self.save(FieldDocument.from_field(field_), file_path)
