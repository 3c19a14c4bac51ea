"""
Генераторы случайных данных для unit тестов.
"""

from fractions import Fraction

import numpy as np

from models.series import Series2
from models.tables import AbcFrame, MultTable, abc_to_table


def random_polynomial(rng: np.random.Generator, degree: int, truncation: int,
                      max_denominator: int = 1) -> Series2:
    """Многочлен степени <= degree с числителями из [-3, 3] и знаменателями до max_denominator"""
    coeffs = {}
    for i in range(degree + 1):
        for j in range(degree + 1 - i):
            value = int(rng.integers(-3, 4))
            if value and max_denominator > 1:
                coeffs[(i, j)] = Fraction(value, int(rng.integers(1, max_denominator + 1)))
            elif value:
                coeffs[(i, j)] = Fraction(value)
    return Series2(coeffs, truncation)


def random_associative_table(rng: np.random.Generator, degree: int, truncation: int,
                             square_zero: bool = False) -> MultTable:
    """Ассоциативная таблица; при square_zero = True a2 = a3 = c2 = c3 = 0 (F-многообразие)"""
    names = ('a2', 'a3', 'b2', 'b3', 'c2', 'c3')
    coeffs = {name: random_polynomial(rng, degree, truncation, max_denominator=2) for name in names}
    if square_zero:
        for name in ('a2', 'a3', 'c2', 'c3'):
            coeffs[name] = Series2.zero(truncation)
    return abc_to_table(AbcFrame.associative(**coeffs))
