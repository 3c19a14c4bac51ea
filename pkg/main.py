"""
Командная строка fmankit.

Команды:
    check        Ассоциативность и F-условие двумя способами
    classify     Общий тип, типы в точках, R-инварианты и дискриминант
    generate     Нормальная форма из каталога (таблица и поля Эйлера)
    euler-check  Проверка поля Эйлера и регулярности
    pde-solve    F-многообразие по начальным данным на t3 = 0
    spectrum     Образующие идеала спектра и нормальные формы скобок
    sweep        Проверка каталога по сетке параметров

Коды возврата: 0 - вердикт истинен, 1 - вердикт ложен, 2 - ошибка входных данных.
"""

import argparse
import json
import logging
import re
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from analytics.euler import euler_residual_ok, lie_residual, regular_at, symmetry_residual
from analytics.pde import solve
from analytics.spectrum import (
    SectionIdeal,
    SpectrumIdeal,
    f_condition_bracket,
    gh_bracket_residuals,
)
from analytics.sweep import CatalogSweepAnalyzer
from analytics.tangent_algebra import (
    associativity_residuals,
    classify_at,
    generic_type,
    is_f_manifold_closed_form,
    r_invariants,
)
from config.logging_config import configure_logging
from config.settings import Settings, load_settings
from data.loaders.document_loader import DocumentLoader, Frame
from models.catalog import build
from models.exceptions import FmankitError, InvalidParameters, PreconditionFailed
from models.families import FamilySpec
from models.series import parse_rational
from models.tables import MultTable, table_to_abc

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT_ERROR = 2


# ============================================================================
# Вывод
# ============================================================================

def _report(key: str, value) -> None:
    print(f"{key}: {value}")


def _yes(flag: bool) -> str:
    return 'yes' if flag else 'no'


def _lowered(table: MultTable, truncation: Optional[int]) -> MultTable:
    """Таблица с усечением, пониженным до явно заданного --truncation"""
    if truncation is None or truncation >= table.truncation:
        return table
    return table.map(lambda s: s.with_truncation(truncation))


def _point(values: Sequence[str]):
    return tuple(parse_rational(v) for v in values)


def parse_param(text: str) -> Dict[str, object]:
    """
    Разбор --param key=value.

    Значения: целые числа, рациональные "a/b" (строкой), JSON-списки для
    литералов рядов и векторов gamma, прочее - строкой.
    """
    if '=' not in text:
        raise InvalidParameters(f"--param expects key=value, got {text!r}")
    key, raw = text.split('=', 1)
    raw = raw.strip()
    if raw.startswith('['):
        try:
            value = json.loads(raw)
        except json.JSONDecodeError as e:
            raise InvalidParameters(f"--param {key}: invalid JSON list: {e}") from e
    elif re.fullmatch(r'-?\d+', raw):
        value = int(raw)
    else:
        value = raw
    return {key.strip(): value}


# ============================================================================
# Команды
# ============================================================================

def cmd_check(args, settings: Settings) -> int:
    loader = DocumentLoader()
    document = loader.load_table_document(args.path)
    table = _lowered(document.to_table(), args.truncation)
    _report('truncation', table.truncation)
    _report('frame', document.frame.value)

    residuals = associativity_residuals(table)
    associative = all(r.is_zero() for r in residuals)
    _report('associative', _yes(associative))
    if not associative:
        for name, r in zip(('residual_a1', 'residual_b1', 'residual_c1'), residuals):
            if not r.is_zero():
                _report(name, r)
        return EXIT_FALSE

    closed = is_f_manifold_closed_form(table)
    if document.frame == Frame.GH and table.truncation == document.truncation:
        ideal = SpectrumIdeal.from_gh(document.to_gh())
    else:
        ideal = SpectrumIdeal.from_table(table)
    bracket = f_condition_bracket(ideal)
    case = closed.case.value if closed.case else 'unresolved'
    _report('f_closed_form', f"{_yes(closed.verdict)} (case {case})" if closed.verdict else 'no')
    _report('f_bracket', f"{_yes(bracket.verdict)} ({ideal.frame.value}-generators)")
    _report('methods_agree', _yes(closed.verdict == bracket.verdict))
    for name, r in closed.residuals.items():
        _report(f"residual {name}", r)
    for name, nf in bracket.residuals.items():
        _report(f"bracket {name}", nf)
    return EXIT_OK if closed.verdict and bracket.verdict else EXIT_FALSE


def cmd_classify(args, settings: Settings) -> int:
    loader = DocumentLoader()
    table = _lowered(loader.load_table(args.path), args.truncation)
    _report('truncation', table.truncation)

    result = generic_type(table)
    _report('generic_type', result.algebra_type.value)
    for warning in result.warnings:
        _report('warning', warning)
    _report('type at (0, 0)', classify_at(table, (0, 0)).value)
    for values in args.at or []:
        point = _point(values)
        _report(f"type at ({values[0]}, {values[1]})", classify_at(table, point).value)

    degree = args.caustic_degree if args.caustic_degree is not None else table.truncation - 1
    for name, series in r_invariants(table).as_dict().items():
        _report(name, series.with_truncation(min(degree + 1, series.truncation)))
    return EXIT_OK


def cmd_generate(args, settings: Settings) -> int:
    params: Dict[str, object] = {}
    for text in args.param or []:
        params.update(parse_param(text))
    spec = FamilySpec.create(args.family, **params)
    result = build(spec, settings.truncation)
    table = result.table

    closed = is_f_manifold_closed_form(table)
    euler_ok = [euler_residual_ok(table, f) for f in result.fields]
    if not closed.verdict or not all(euler_ok):
        raise PreconditionFailed(f"{spec.label()} failed its self-check",
                                 residuals=closed.residuals)

    _report('family', spec.label())
    _report('truncation', settings.truncation)
    _report('generic_type', result.metadata.generic_type.value)
    _report('origin_type', result.metadata.origin_type.value)
    _report('euler_fields', len(result.fields))

    loader = DocumentLoader()
    frame = Frame(args.frame) if args.frame else (Frame.GH if result.gh is not None else Frame.TILDE)
    if frame == Frame.GH and result.gh is not None:
        path = loader.save_gh(result.gh, args.output)
    else:
        path = loader.save_table(table, args.output, frame)
    _report('table', path)

    if args.field_out:
        base = Path(args.field_out)
        for k, field_ in enumerate(result.fields):
            target = base if k == 0 else base.with_name(f"{base.stem}_{k}{base.suffix}")
            _report('field', loader.save_field(field_, target))
    return EXIT_OK


def cmd_euler_check(args, settings: Settings) -> int:
    loader = DocumentLoader()
    table = _lowered(loader.load_table(args.table), args.truncation)
    field_ = loader.load_field(args.field)
    _report('truncation', min(table.truncation, field_.truncation))

    if field_.c == 0:
        residual, label = symmetry_residual(table, field_), 'symmetry'
    else:
        residual, label = lie_residual(table, field_), 'euler'
    _report(label, _yes(residual.is_zero()))
    _report('pole_order', residual.pole_order)
    for i, j in residual.nonzero_pairs():
        _report(f"residual ({i},{j})", ', '.join(str(x) for x in residual.pairs[(i, j)]))

    verdict = residual.is_zero()
    if args.regular_at:
        point = _point(args.regular_at)
        regular = regular_at(table, field_, point)
        _report(f"regular at ({args.regular_at[0]}, {args.regular_at[1]})", _yes(regular))
        verdict = verdict and regular
    return EXIT_OK if verdict else EXIT_FALSE


def cmd_pde_solve(args, settings: Settings) -> int:
    loader = DocumentLoader()
    init = loader.load_initial_data(args.init, args.order)
    solution = solve(init)
    gh = solution.truncated()
    residuals = gh_bracket_residuals(gh)

    _report('truncation', init.truncation)
    _report('order', solution.order)
    _report('precision', solution.precision)
    _report('residual_precision', solution.residual_precision)
    _report('f_manifold', _yes(residuals.is_f_manifold()))
    for name in ('g2', 'g1', 'g0'):
        _report(name, getattr(gh, name))
    if args.output:
        _report('output', loader.save_gh(gh, args.output))
    return EXIT_OK if residuals.is_f_manifold() else EXIT_FALSE


def cmd_spectrum(args, settings: Settings) -> int:
    loader = DocumentLoader()
    document = loader.load_table_document(args.path)
    table = _lowered(document.to_table(), args.truncation)
    if document.frame == Frame.GH and table.truncation == document.truncation:
        ideal = SpectrumIdeal.from_gh(document.to_gh())
    else:
        ideal = SpectrumIdeal.from_table(table)

    _report('truncation', table.truncation)
    _report('frame', ideal.frame.value)
    for name, generator in ideal.generators.items():
        _report(f"generator {name}", generator)
    result = f_condition_bracket(ideal)
    for name, normal_form in result.normal_forms.items():
        _report(f"reduced {name}", normal_form)
    _report('f_manifold', _yes(result.verdict))

    abc = table_to_abc(table)
    # при a = c = 0 и b3 = 0 радикал идеала равен (y1 - 1, y2, y3 - b2)
    if all(x.is_zero() for x in (abc.a2, abc.a3, abc.c2, abc.c3, abc.b3)):
        section = SectionIdeal(abc.b2)
        _report('radical', '(y1-1, y2, y3-b2)')
        _report('radical_bracket_closed', _yes(section.is_bracket_closed()))
        _report('note', 'the radical is bracket-closed only when d2 b2 = 0; '
                        'the F-condition is decided by the ideal itself')
    return EXIT_OK if result.verdict else EXIT_FALSE


def cmd_sweep(args, settings: Settings) -> int:
    analyzer = CatalogSweepAnalyzer(settings.truncation, settings.sweep,
                                    families=args.family or None)
    analyzer.run()
    analyzer.print_sweep_report()
    output = args.output or settings.sweep.output
    Path(output).parent.mkdir(parents=True, exist_ok=True)
    analyzer.export_to_excel(output)
    _report('truncation', settings.truncation)
    _report('output', output)
    return EXIT_OK if analyzer.all_passed() else EXIT_FALSE


# ============================================================================
# Парсер
# ============================================================================

class _Parser(argparse.ArgumentParser):
    """Парсер, принимающий отрицательные рациональные значения (-3/2) за аргументы, а не за флаги"""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(r'^-\.?\d')


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='fmankit', description='F-manifold toolkit')
    parser.add_argument('--truncation', type=int, default=None,
                        help='truncation order D (default: FMANKIT_TRUNCATION or settings.yaml)')
    parser.add_argument('--config', default=None, help='settings YAML file')
    parser.add_argument('--verbose', action='store_true', help='DEBUG logging')
    parser.add_argument('--log-json', action='store_true', help='JSON log lines')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('check', help='associativity and F-condition')
    p.add_argument('path')
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser('classify', help='generic and pointwise algebra types')
    p.add_argument('path')
    p.add_argument('--at', nargs=2, action='append', metavar=('T2', 'T3'))
    p.add_argument('--caustic-degree', type=int, default=None)
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser('generate', help='catalog normal form')
    p.add_argument('family')
    p.add_argument('--param', action='append', metavar='KEY=VALUE')
    p.add_argument('-o', '--output', required=True)
    p.add_argument('--field-out', default=None)
    p.add_argument('--frame', choices=[f.value for f in Frame], default=None)
    p.set_defaults(handler=cmd_generate)

    p = sub.add_parser('euler-check', help='Euler field residuals')
    p.add_argument('table')
    p.add_argument('field')
    p.add_argument('--regular-at', nargs=2, metavar=('T2', 'T3'))
    p.set_defaults(handler=cmd_euler_check)

    p = sub.add_parser('pde-solve', help='F-manifold from initial data')
    p.add_argument('--init', required=True)
    p.add_argument('--order', type=int, default=None)
    p.add_argument('-o', '--output', default=None)
    p.set_defaults(handler=cmd_pde_solve)

    p = sub.add_parser('spectrum', help='spectrum generators and bracket normal forms')
    p.add_argument('path')
    p.set_defaults(handler=cmd_spectrum)

    p = sub.add_parser('sweep', help='catalog sweep with Excel report')
    p.add_argument('--family', action='append')
    p.add_argument('-o', '--output', default=None)
    p.set_defaults(handler=cmd_sweep)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = load_settings(args.config, args.truncation)
        level = 'DEBUG' if args.verbose else settings.log_level
        configure_logging(level, json_format=args.log_json)
        return args.handler(args, settings)
    except (FmankitError, OSError) as e:
        print(f"ERROR - {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == '__main__':
    sys.exit(main())
