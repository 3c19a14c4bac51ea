"""
Проверка каталога нормальных форм.

Строит все семейства на сетке параметров из config/settings.yaml,
сверяет классификацию и поля Эйлера и сохраняет отчет в Excel.
"""

import sys
from pathlib import Path

from analytics.sweep import CatalogSweepAnalyzer
from config.logging_config import configure_logging
from config.settings import load_settings


def main() -> int:
    """Основная функция для запуска проверки каталога."""

    print("\n" + "=" * 80)
    print("CATALOG SWEEP")
    print("=" * 80 + "\n")

    # 1. Загружаем настройки
    print("Step 1: Loading settings...")
    settings = load_settings()
    configure_logging(settings.log_level)
    print(f"  Truncation: {settings.truncation}\n")

    # 2. Строим и проверяем семейства
    print("Step 2: Building and checking families...")
    analyzer = CatalogSweepAnalyzer(settings.truncation, settings.sweep)
    sweep_df = analyzer.run()
    print(f"  Checked {len(sweep_df)} builds\n")

    # 3. Выводим отчет в консоль
    analyzer.print_sweep_report()

    # 4. Экспортируем в Excel
    print("Step 3: Exporting results to Excel...")
    output_path = Path(settings.sweep.output)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    analyzer.export_to_excel(str(output_path))
    print(f"  Results saved to: {output_path}\n")

    print("=" * 80)
    print("SWEEP PASSED" if analyzer.all_passed() else "SWEEP HAS FAILURES")
    print("=" * 80 + "\n")
    return 0 if analyzer.all_passed() else 1


if __name__ == "__main__":
    sys.exit(main())
