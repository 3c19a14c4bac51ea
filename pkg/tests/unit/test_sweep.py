"""
Unit тесты для CatalogSweepAnalyzer.
"""

import numpy as np
import pandas as pd
import pytest

from analytics import sweep as sweep_module
from analytics.sweep import SWEEP_COLUMNS, CatalogSweepAnalyzer, random_gamma
from config.settings import SweepSettings
from models.exceptions import InvalidParameters
from models.families import FamilyTag


@pytest.fixture
def small_settings():
    return SweepSettings(p_values=[2, 3], q_values=[2, 3], m_values=[3, 4],
                         random_gamma_count=1, gamma_bound=2, seed=1)


@pytest.fixture
def analyzer(small_settings):
    return CatalogSweepAnalyzer(8, small_settings,
                                families=['Lem6_5', 'Thm5_6', 'Ex6_2_A3', 'Prod_A1N2'])


class TestParameterGrid:
    """Наборы параметров по семействам"""

    def test_thm7_1a_respects_domain(self, small_settings):
        analyzer = CatalogSweepAnalyzer(6, small_settings, families=['Thm7_1a'])
        grid = list(analyzer.parameter_grid(FamilyTag.THM7_1A))
        assert grid
        for params in grid:
            assert params['q'] >= params['p']
            assert params['gamma'][0] not in ('0', '1') or params['q'] != params['p']
            assert params['gamma'][0] != '0'

    def test_thm7_1b_includes_zero_gamma(self, small_settings):
        analyzer = CatalogSweepAnalyzer(6, small_settings, families=['Thm7_1b'])
        grid = list(analyzer.parameter_grid(FamilyTag.THM7_1B))
        assert {'p': 2, 'gamma': ['0']} in grid

    def test_product_n2_forms(self, small_settings):
        analyzer = CatalogSweepAnalyzer(6, small_settings)
        assert len(list(analyzer.parameter_grid(FamilyTag.PROD_A1N2))) == 4

    def test_every_spec_is_valid(self, small_settings):
        analyzer = CatalogSweepAnalyzer(6, small_settings)
        specs = list(analyzer.iter_specs())
        assert {spec.tag for spec in specs} == set(FamilyTag)

    def test_random_gamma(self):
        rng = np.random.default_rng(0)
        gamma = random_gamma(rng, 3, 2)
        assert len(gamma) == 3
        assert all(isinstance(g, str) for g in gamma)


class TestSweepRun:
    """Прогон, сводка и экспорт"""

    def test_run(self, analyzer):
        df = analyzer.run()
        assert list(df.columns) == SWEEP_COLUMNS
        assert len(df) == 1 + 2 + 1 + 4
        assert analyzer.all_passed()
        assert df['methods_agree'].all()

    def test_summary(self, analyzer):
        summary = analyzer.summary()
        assert list(summary['family']) == ['Lem6_5', 'Thm5_6', 'Ex6_2_A3', 'Prod_A1N2']
        assert (summary['failed'] == 0).all()

    def test_failure_is_recorded(self, analyzer, monkeypatch):
        def failing_build(spec, truncation):
            raise InvalidParameters("broken")

        monkeypatch.setattr(sweep_module, 'build', failing_build)
        df = analyzer.run()
        assert not analyzer.all_passed()
        assert df['error'].str.contains('InvalidParameters').all()
        assert len(analyzer.failures()) == len(df)

    def test_export_to_excel(self, analyzer, tmp_path):
        path = tmp_path / "sweep.xlsx"
        analyzer.export_to_excel(str(path))
        sheets = pd.read_excel(path, sheet_name=None)
        assert set(sheets) == {'Sweep', 'Summary', 'Failures'}
        assert len(sheets['Sweep']) == len(analyzer.sweep_df)
        assert sheets['Failures'].empty

    def test_print_report(self, analyzer, capsys):
        analyzer.run()
        analyzer.print_sweep_report()
        out = capsys.readouterr().out
        assert 'CATALOG SWEEP' in out
        assert 'Lem6_5' in out
