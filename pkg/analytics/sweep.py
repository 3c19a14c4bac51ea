"""
Проверка каталога нормальных форм по сетке параметров.

Основные функции:
1. Перебор семейств и параметров (p, q, m, gamma, формы поля на N2)
2. Для каждой таблицы: ассоциативность, оба F-критерия, поле Эйлера, типы
3. Сводка по семействам и экспорт в Excel
"""

import logging
import time
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
import pandas as pd

from analytics.euler import euler_residual_ok
from analytics.spectrum import SpectrumIdeal, f_condition_bracket
from analytics.tangent_algebra import (
    classify_at,
    generic_type,
    is_associative,
    is_f_manifold_closed_form,
)
from config.settings import SweepSettings
from models.catalog import build
from models.exceptions import FmankitError
from models.families import FamilySpec, FamilyTag, N2Form
from models.series import format_rational

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = [
    'family', 'params', 'truncation', 'associative', 'f_closed_form', 'f_bracket',
    'methods_agree', 'euler_ok', 'generic_type', 'expected_generic', 'origin_type',
    'expected_origin', 'caustic_ok', 'seconds', 'passed', 'error',
]


def random_gamma(rng: np.random.Generator, length: int, bound: int) -> List[str]:
    """Случайный вектор рациональных чисел с числителями и знаменателями до bound"""
    numerators = rng.integers(-bound, bound + 1, size=length)
    denominators = rng.integers(1, bound + 1, size=length)
    return [format_rational(Fraction(int(n), int(d))) for n, d in zip(numerators, denominators)]


class CatalogSweepAnalyzer:
    """
    Анализатор каталога.

    Строит каждое семейство на сетке параметров и сверяет результат
    с ожидаемой классификацией из метаданных.

    Attributes:
        truncation: Усечение D
        settings: Сетка параметров
        families: Проверяемые семейства (по умолчанию все)
    """

    def __init__(
        self,
        truncation: int,
        settings: Optional[SweepSettings] = None,
        families: Optional[List[FamilyTag]] = None,
    ):
        self.truncation = truncation
        self.settings = settings or SweepSettings()
        self.families = [FamilyTag.parse(f) for f in families] if families else list(FamilyTag)
        self.rng = np.random.default_rng(self.settings.seed)

        self.sweep_df: Optional[pd.DataFrame] = None
        self.summary_df: Optional[pd.DataFrame] = None

        logger.info(f"Initialized CatalogSweepAnalyzer for {len(self.families)} families "
                    f"at truncation {truncation}")

    # ------------------------------------------------------------------
    # Сетка параметров
    # ------------------------------------------------------------------

    def _gammas(self, p: int, leading_nonzero: bool, avoid_one: bool) -> List[List[str]]:
        gammas = []
        if not leading_nonzero:
            gammas.append(['0'] * (p - 1))
        for _ in range(self.settings.random_gamma_count):
            gamma = random_gamma(self.rng, p - 1, self.settings.gamma_bound)
            if leading_nonzero and Fraction(gamma[0]) in ((0, 1) if avoid_one else (0,)):
                gamma[0] = '2'
            gammas.append(gamma)
        if leading_nonzero and not gammas:
            gammas.append(['2'] + ['0'] * (p - 2))
        return gammas

    def parameter_grid(self, tag: FamilyTag) -> Iterator[Dict]:
        """Наборы параметров для семейства"""
        s = self.settings
        if tag in (FamilyTag.THM5_6, FamilyTag.LEM5_8):
            for p in s.p_values:
                yield {'p': p}
        elif tag == FamilyTag.LEM6_4:
            for p2 in s.p_values:
                for p3 in s.p_values:
                    yield {'p2': p2, 'p3': p3}
        elif tag.is_thm7_1:
            letter = tag.branch_letter
            for p in s.p_values:
                qs = [q for q in s.q_values if q >= p] if letter in ('a', 'c') else [None]
                for q in qs:
                    avoid_one = letter == 'a' and q == p
                    for gamma in self._gammas(p, letter in ('a', 'c'), avoid_one):
                        params = {'p': p, 'gamma': gamma}
                        if q is not None:
                            params['q'] = q
                        yield params
        elif tag == FamilyTag.COR7_2_AI:
            yield {}
        elif tag == FamilyTag.COR7_2_AII:
            for q in s.q_values:
                if q >= 3:
                    yield {'q': q}
        elif tag == FamilyTag.COR7_2_AIII:
            for p in s.p_values:
                if p >= 3:
                    yield {'p': p}
        elif tag == FamilyTag.COR7_2_C:
            for q in s.q_values:
                yield {'q': q}
        elif tag.is_cor7_2:
            for p in s.p_values:
                yield {'p': p}
        elif tag == FamilyTag.PROD_A1I2M:
            for m in s.m_values:
                yield {'m': m}
        elif tag == FamilyTag.PROD_A1N2:
            yield {'n2_form': N2Form.UNIT}
            yield {'n2_form': N2Form.ZERO}
            yield {'n2_form': N2Form.LINEAR, 'n2_c0': '1/2'}
            yield {'n2_form': N2Form.POWER, 'n2_r': 2, 'n2_c1': '3'}
        else:
            yield {}

    # ------------------------------------------------------------------
    # Проверка одной таблицы
    # ------------------------------------------------------------------

    def check_spec(self, spec: FamilySpec) -> Dict:
        """Одна строка отчета"""
        d = self.truncation
        row = {column: None for column in SWEEP_COLUMNS}
        row.update({'family': spec.tag.value, 'params': spec.label(), 'truncation': d})
        start = time.perf_counter()
        try:
            result = build(spec, d)
            table, metadata = result.table, result.metadata

            row['associative'] = is_associative(table)
            row['f_closed_form'] = is_f_manifold_closed_form(table).verdict
            row['f_bracket'] = f_condition_bracket(SpectrumIdeal.from_table(table)).verdict
            row['methods_agree'] = row['f_closed_form'] == row['f_bracket']
            row['euler_ok'] = all(euler_residual_ok(table, f) for f in result.fields)

            row['generic_type'] = generic_type(table).algebra_type.value
            row['expected_generic'] = metadata.generic_type.value
            row['origin_type'] = classify_at(table, (0, 0)).value
            row['expected_origin'] = metadata.origin_type.value
            row['caustic_ok'] = all(classify_at(table, sample.point) == sample.expected
                                    for sample in metadata.caustic_points)

            generic_ok = (d < metadata.type_resolution
                          or row['generic_type'] == row['expected_generic'])
            row['passed'] = bool(row['associative'] and row['f_closed_form'] and row['f_bracket']
                                 and row['euler_ok'] and generic_ok and row['caustic_ok']
                                 and row['origin_type'] == row['expected_origin'])
        except FmankitError as e:
            logger.warning(f"{spec.label()}: {type(e).__name__}: {e}")
            row['error'] = f"{type(e).__name__}: {e}"
            row['passed'] = False
        row['seconds'] = round(time.perf_counter() - start, 4)
        return row

    def iter_specs(self) -> Iterator[FamilySpec]:
        for tag in self.families:
            for params in self.parameter_grid(tag):
                yield FamilySpec.create(tag, **params)

    def run(self) -> pd.DataFrame:
        """
        Проверяет все семейства на сетке.

        Returns:
            DataFrame: одна строка на построенную таблицу
        """
        logger.info("Running catalog sweep...")
        rows = [self.check_spec(spec) for spec in self.iter_specs()]
        self.sweep_df = pd.DataFrame(rows, columns=SWEEP_COLUMNS)
        failed = int((~self.sweep_df['passed'].astype(bool)).sum())
        logger.info(f"Catalog sweep finished: {len(rows)} builds, {failed} failed")
        return self.sweep_df

    def summary(self) -> pd.DataFrame:
        """Сводка по семействам: число построений, успешных, время"""
        if self.sweep_df is None:
            self.run()
        df = self.sweep_df.assign(passed=self.sweep_df['passed'].astype(bool))
        summary = df.groupby('family', sort=False).agg(
            builds=('params', 'count'),
            passed=('passed', 'sum'),
            seconds=('seconds', 'sum'),
        ).reset_index()
        summary['failed'] = summary['builds'] - summary['passed']
        self.summary_df = summary
        return summary

    def failures(self) -> pd.DataFrame:
        if self.sweep_df is None:
            self.run()
        return self.sweep_df[~self.sweep_df['passed'].astype(bool)]

    def all_passed(self) -> bool:
        return self.failures().empty

    def export_to_excel(self, file_path: str):
        """
        Экспортирует результаты в Excel (листы Sweep, Summary, Failures).

        Args:
            file_path: Путь к файлу Excel
        """
        logger.info(f"Exporting catalog sweep to {file_path}...")
        if self.sweep_df is None:
            self.run()
        summary = self.summary() if self.summary_df is None else self.summary_df

        with pd.ExcelWriter(file_path, engine='openpyxl') as writer:
            self.sweep_df.to_excel(writer, sheet_name='Sweep', index=False)
            summary.to_excel(writer, sheet_name='Summary', index=False)
            self.failures().to_excel(writer, sheet_name='Failures', index=False)

        logger.info(f"Successfully exported catalog sweep to {file_path}")

    def print_sweep_report(self):
        """Печатает сводку в консоль"""
        summary = self.summary() if self.summary_df is None else self.summary_df

        print("\n" + "=" * 80)
        print("CATALOG SWEEP")
        print("=" * 80)
        print(f"truncation: {self.truncation}")
        print(f"builds: {len(self.sweep_df)}")
        print("-" * 80)
        print(f"{'Family':<16} {'Builds':>8} {'Passed':>8} {'Failed':>8} {'Seconds':>10}")
        print("-" * 80)
        for _, row in summary.iterrows():
            print(f"{row['family']:<16} {row['builds']:>8} {row['passed']:>8} "
                  f"{row['failed']:>8} {row['seconds']:>10.2f}")
        print("=" * 80)

        failures = self.failures()
        if not failures.empty:
            print("\nFAILURES:")
            for _, row in failures.iterrows():
                reason = row['error'] or (
                    f"generic {row['generic_type']}/{row['expected_generic']}, "
                    f"origin {row['origin_type']}/{row['expected_origin']}, "
                    f"euler {row['euler_ok']}, caustic {row['caustic_ok']}")
                print(f"  {row['params']}: {reason}")
            print("=" * 80 + "\n")
