"""
Иерархия исключений fmankit.

Все ошибки библиотеки наследуются от FmankitError, поэтому CLI может
отделить ошибки ввода (код выхода 2) от прочих сбоев.
"""

from typing import Any, Optional


class FmankitError(Exception):
    """Базовое исключение библиотеки"""


class NotAUnit(FmankitError, ArithmeticError):
    """Ряд необратим: свободный член равен нулю"""


class NotDivisible(FmankitError, ArithmeticError):
    """Точное деление на t2 невозможно"""


class NotAssociative(FmankitError):
    """
    Таблица умножения не ассоциативна.

    Attributes:
        residuals: Невязки (a1+a3c3, b1-a3c2, c1+a2c2)
    """

    def __init__(self, message: str, residuals: Optional[Any] = None):
        super().__init__(message)
        self.residuals = residuals


class PreconditionFailed(FmankitError):
    """
    Не выполнено предусловие операции.

    Attributes:
        residuals: Ненулевые невязки, нарушившие предусловие
    """

    def __init__(self, message: str, residuals: Optional[Any] = None):
        super().__init__(message)
        self.residuals = residuals


class FrameDegenerate(FmankitError):
    """(e, d2, d2^2) не является репером: определитель замены не обратим"""


class InvalidParameters(FmankitError, ValueError):
    """Параметры вне допустимой области"""


class UnknownFamily(FmankitError, KeyError):
    """Для семейства нет опубликованной системы ограничений"""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ''


class PoleAtPoint(FmankitError):
    """Векторное поле имеет полюс в запрошенной точке"""


class ParseError(FmankitError, ValueError):
    """Ошибка разбора документа или литерала ряда"""
