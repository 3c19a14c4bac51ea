"""
Models package для fmankit.

Содержит ряды, таблицы умножения, векторные поля и каталог нормальных форм.
"""

from models.exceptions import (
    FmankitError,
    NotAUnit,
    NotDivisible,
    NotAssociative,
    PreconditionFailed,
    FrameDegenerate,
    InvalidParameters,
    UnknownFamily,
    PoleAtPoint,
    ParseError,
)
from models.series import Series2, ExtSeries, parse_rational, format_rational
from models.tables import (
    AlgebraType,
    MultTable,
    AbcFrame,
    GhFrame,
    abc_to_table,
    table_to_abc,
    gh_to_table,
    table_to_gh,
)
from models.fields import PoleSeries, VectorField
from models.families import FamilyTag, FamilySpec, FamilyMetadata, N2Form
from models.products import Factor2d, PlaneEuler, product
from models.catalog import BuildResult, build, build_family

__all__ = [
    # Exceptions
    'FmankitError',
    'NotAUnit',
    'NotDivisible',
    'NotAssociative',
    'PreconditionFailed',
    'FrameDegenerate',
    'InvalidParameters',
    'UnknownFamily',
    'PoleAtPoint',
    'ParseError',

    # Series
    'Series2',
    'ExtSeries',
    'parse_rational',
    'format_rational',

    # Tables
    'AlgebraType',
    'MultTable',
    'AbcFrame',
    'GhFrame',
    'abc_to_table',
    'table_to_abc',
    'gh_to_table',
    'table_to_gh',

    # Fields
    'PoleSeries',
    'VectorField',

    # Catalog
    'FamilyTag',
    'FamilySpec',
    'FamilyMetadata',
    'N2Form',
    'Factor2d',
    'PlaneEuler',
    'product',
    'BuildResult',
    'build',
    'build_family',
]
