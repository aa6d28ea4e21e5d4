"""
Команды CLI: разбор аргументов и выполнение над рабочим пространством
"""

import argparse
import csv
import logging
import sys
from pathlib import Path

from config.settings import EXIT_OK, EXIT_PROPERTY_FAILS, WATCH_DEBOUNCE
from .algebra import validate_algebra
from .diagram import colimit, commutativity_degree, limit, project_colimit, project_limit
from .emitters import format_map_csv, format_value, format_workspace
from .errors import SemioError, SemioticError, SpecError
from .grammar import validate_configuration
from .inference import (
    answers, consequence_closure, consistency_check, entails, eval_rl, gamma, parse_formula,
)
from .relation import bayes_conditional, classify
from .semiotic import ConstantRelation, NamedRelation, encode_dataset, integrate, validate_model
from .utils import configure_runtime, current_cap
from .workspace import load_spec

logger = logging.getLogger(__name__)


def _emit(text, args):
    """Данные - в --out или в stdout."""
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
        logger.info(f"Результат записан в {args.out}")
    else:
        sys.stdout.write(text)


def _names(text):
    return [n.strip() for n in text.split(",") if n.strip()] if text else []


def parse_degree(text, algebra):
    """'top', 'bot', число или кортеж '(a,b)' -> значение алгебры."""
    text = text.strip()
    if text == "top":
        return algebra.top
    if text == "bot":
        return algebra.bot
    try:
        if text.startswith("("):
            value = tuple(float(x) for x in text.strip("()").split(","))
        else:
            value = float(text)
    except ValueError:
        raise SemioticError(f"Некорректное значение истинности: {text}")
    return algebra.check_value(value)


def _diagram(semiotic, name):
    if name not in semiotic.diagrams:
        raise SemioticError(f"Неизвестная диаграмма: {name}")
    return semiotic.diagrams[name]


def _comp(semiotic, name):
    if name not in semiotic.comps:
        raise SemioticError(f"Неизвестный компонент: {name}")
    return semiotic.comps[name]


def cmd_check(args):
    """Проверка алгебры, модели, скетча и конфигураций диаграмм."""
    ws = load_spec(args.spec)
    s = ws.semiotic
    ok = True

    report = validate_algebra(s.algebra)
    if report.ok:
        print(f"✅ алгебра {s.algebra_name} ({report.algebra}): {len(report.laws)} законов выполнены")
    else:
        ok = False
        for law in report.failures():
            print(f"❌ алгебра {s.algebra_name}: закон {law.law} нарушен, свидетель {law.witness}")

    library = s.library()
    for name in s.diagrams:
        config_report = validate_configuration(s.configuration(name), library)
        if not config_report.valid:
            ok = False
            print(f"❌ диаграмма {name}: {'; '.join(config_report.problems)}")

    model_report = validate_model(s.system(), s.model(), args.cap)
    for condition in model_report.conditions:
        if condition.passed:
            print(f"✅ {condition.name}" + (f": {condition.message}" if condition.message else ""))
        else:
            ok = False
            witness = f", свидетель {condition.witness}" if condition.witness is not None else ""
            print(f"❌ {condition.name}: {condition.message}{witness}")
    logger.info(f"📊 Проверка {args.spec}: {'успешно' if ok else 'есть нарушения'}")
    return EXIT_OK if ok else EXIT_PROPERTY_FAILS


def _cmd_construct(args, construct, projected):
    s = load_spec(args.spec).semiotic
    diagram = _diagram(s, args.diagram)
    result = projected(diagram, args.cap) if args.project else construct(diagram, args.cap)
    _emit(format_map_csv(result, args.cap), args)
    return EXIT_OK


def cmd_limit(args):
    return _cmd_construct(args, limit, project_limit)


def cmd_colimit(args):
    return _cmd_construct(args, colimit, project_colimit)


def cmd_commutes(args):
    s = load_spec(args.spec).semiotic
    diagram = _diagram(s, args.diagram)
    sources = _names(args.sources) or None
    report = commutativity_degree(diagram, sources=sources, cap=args.cap)
    threshold = parse_degree(args.lam, s.algebra)
    print(f"degree: {format_value(report.degree)}")
    print(f"witness: {' '.join(report.witness) if report.witness else '-'}")
    print(f"checked: {report.checked}")
    return EXIT_OK if s.algebra.leq(threshold, report.degree) else EXIT_PROPERTY_FAILS


def cmd_classify(args):
    s = load_spec(args.spec).semiotic
    result = classify(_comp(s, args.comp))
    for prop, value in result.as_dict().items():
        print(f"{prop}: {'yes' if value else 'no'}")
    return EXIT_OK


def cmd_bayes(args):
    s = load_spec(args.spec).semiotic
    result = bayes_conditional(_comp(s, args.comp), tuple(_names(args.given)),
                               direction=args.direction)
    _emit(format_map_csv(result, args.cap), args)
    return EXIT_OK


def cmd_gamma(args):
    s = load_spec(args.spec).semiotic
    result = gamma(s.resolve(args.left), s.resolve(args.right), args.cap)
    print(f"quality: {format_value(result.quality)}")
    print(f"witness: {' '.join(result.witness) if result.witness else '-'}")
    if args.out:
        _emit(format_map_csv(result.pointwise, args.cap), args)
    return EXIT_OK


def cmd_consistent(args):
    s = load_spec(args.spec).semiotic
    domain = s.resolve(args.domain) if args.domain else None
    result = consistency_check(s.resolve(args.concept), s.resolve(args.relation),
                               parse_degree(args.lam, s.algebra), args.mode, domain, args.cap)
    print(f"holds: {'yes' if result.holds else 'no'}")
    print(f"fiber: {len(result.fiber)}/{result.size}")
    return EXIT_OK if result.holds else EXIT_PROPERTY_FAILS


def cmd_answers(args):
    ws = load_spec(args.spec)
    pool = ws.pool(args.pool, args.cap)
    lam = parse_degree(args.lam, ws.semiotic.algebra)
    for ans in answers(pool.diagram(args.relation), lam, pool):
        print(ans.concept + (f"@{ans.domain}" if ans.domain else ""))
    return EXIT_OK


def cmd_infer(args):
    ws = load_spec(args.spec)
    pool = ws.pool(args.pool, args.cap)
    lam = parse_degree(args.lam, ws.semiotic.algebra)
    premises = _names(args.premises)
    if args.goal:
        holds = entails(premises, args.goal, lam, pool)
        print(f"{','.join(premises)} |- {args.goal}: {'yes' if holds else 'no'}")
        return EXIT_OK if holds else EXIT_PROPERTY_FAILS
    for name in consequence_closure(premises, lam, pool):
        print(name)
    return EXIT_OK


def cmd_rl(args):
    ws = load_spec(args.spec)
    pool = ws.pool(args.pool, args.cap)
    a = ws.semiotic.algebra
    formula = parse_formula(args.formula)
    split = tuple(parse_degree(x, a) for x in _names(args.split)) if args.split else None
    holds = eval_rl(formula, ws.semiotic.resolve_map(args.concept, args.cap),
                    parse_degree(args.lam, a), pool, split)
    print(f"{args.concept} |= {formula}: {'yes' if holds else 'no'}")
    return EXIT_OK if holds else EXIT_PROPERTY_FAILS


def cmd_integrate(args):
    operands = [load_spec(path).semiotic for path in args.specs]
    result = integrate(operands, name=args.name, cap=args.cap)
    _emit(format_workspace(result), args)
    return EXIT_OK


def cmd_encode_dataset(args):
    ws = load_spec(args.spec)
    s = ws.semiotic
    mapping = {}
    for item in _names(args.columns):
        column, _, oset = item.partition("=")
        if oset not in s.osets:
            raise SemioticError(f"Неизвестное Ω-множество столбца {column}: {oset}")
        mapping[column] = s.osets[oset]
    with open(args.csv, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise SemioticError(f"Файл {args.csv} пуст")
        rows = [tuple(v.strip() for v in row) for row in reader if row]
    missing = [h for h in header if h not in mapping]
    if missing:
        raise SemioticError(f"Для столбцов {missing} не указаны Ω-множества (--columns)")
    encoding = encode_dataset(rows, [(h, mapping[h]) for h in header], name=args.name)
    if isinstance(encoding.relation, ConstantRelation):
        raise SemioticError("Пустой набор данных не записывается в .sem")
    clashes = [n for n in list(encoding.comps) + list(encoding.diagrams) + [args.name]
               if n in s.comps or n in s.diagrams or n in s.relations]
    if clashes:
        raise SemioticError(f"Имена уже заняты в спецификации: {clashes}")
    s.comps.update(encoding.comps)
    s.diagrams.update(encoding.diagrams)
    s.relations[args.name] = NamedRelation(args.name, encoding.relation)
    _emit(format_workspace(s), args)
    return EXIT_OK


def check_file(path, cap=None):
    """Команда check для одного файла (режим watch): код завершения без исключений."""
    args = argparse.Namespace(spec=str(path), cap=cap)
    try:
        return cmd_check(args)
    except SpecError as e:
        for d in e.diagnostics:
            logger.error(f"❌ {d}")
        return e.exit_code
    except SemioError as e:
        logger.error(f"❌ {path}: {e}")
        return e.exit_code


def cmd_watch(args):
    from .watcher import run_watch
    return run_watch(args.directory, lambda path: check_file(path, args.cap),
                     debounce=args.debounce)


COMMANDS = {
    "check": cmd_check,
    "limit": cmd_limit,
    "colimit": cmd_colimit,
    "commutes": cmd_commutes,
    "classify": cmd_classify,
    "bayes": cmd_bayes,
    "gamma": cmd_gamma,
    "consistent": cmd_consistent,
    "answers": cmd_answers,
    "infer": cmd_infer,
    "rl": cmd_rl,
    "integrate": cmd_integrate,
    "encode-dataset": cmd_encode_dataset,
    "watch": cmd_watch,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="semio", description="Нечеткая категорная семиотика: проверка и вычисления над .sem")
    parser.add_argument("--epsilon", type=float, default=None, help="Допуск сравнения значений")
    parser.add_argument("--cap", type=int, default=None, help="Предел перебора кортежей")
    parser.add_argument("--out", default=None, help="Файл для вывода данных")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="Проверить алгебру, модель и скетч")
    p.add_argument("spec")

    for name in ("limit", "colimit"):
        p = sub.add_parser(name, help=f"{name} диаграммы в CSV")
        p.add_argument("spec")
        p.add_argument("--diagram", required=True)
        p.add_argument("--project", action="store_true", help="Проекция на s(D)")

    p = sub.add_parser("commutes", help="Степень коммутативности")
    p.add_argument("spec")
    p.add_argument("--diagram", required=True)
    p.add_argument("--sources", default=None, help="Вершины-источники через запятую")
    p.add_argument("--lambda", dest="lam", default="top", help="Требуемая степень")

    p = sub.add_parser("classify", help="Свойства мульти-морфизма")
    p.add_argument("spec")
    p.add_argument("--comp", required=True)

    p = sub.add_parser("bayes", help="Условное распределение")
    p.add_argument("spec")
    p.add_argument("--comp", required=True)
    p.add_argument("--given", required=True, help="Наблюдаемые элементы через запятую")
    p.add_argument("--direction", default="target-given-source",
                   choices=["target-given-source", "source-given-target"])

    p = sub.add_parser("gamma", help="Γ между концептами")
    p.add_argument("spec")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)

    p = sub.add_parser("consistent", help="λ-согласованность концепта с отношением")
    p.add_argument("spec")
    p.add_argument("--concept", required=True)
    p.add_argument("--relation", required=True)
    p.add_argument("--lambda", dest="lam", default="top")
    p.add_argument("--mode", default="forall", choices=["forall", "exists", "forall_on"])
    p.add_argument("--domain", default=None)

    p = sub.add_parser("answers", help="λ-ответы отношения в пуле")
    p.add_argument("spec")
    p.add_argument("--pool", required=True)
    p.add_argument("--relation", required=True)
    p.add_argument("--lambda", dest="lam", default="top")

    p = sub.add_parser("infer", help="Следствия A_λ(U) или проверка U |- D")
    p.add_argument("spec")
    p.add_argument("--pool", required=True)
    p.add_argument("--from", dest="premises", default="")
    p.add_argument("--goal", default=None)
    p.add_argument("--lambda", dest="lam", default="top")

    p = sub.add_parser("rl", help="Формула λ-RL")
    p.add_argument("spec")
    p.add_argument("--pool", required=True)
    p.add_argument("--concept", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--lambda", dest="lam", default="top")
    p.add_argument("--split", default=None, help="Пороги λ0,λ1 для связки верхнего уровня")

    p = sub.add_parser("integrate", help="Интеграция семиотик в один .sem")
    p.add_argument("specs", nargs="+")
    p.add_argument("--name", default="integrated")

    p = sub.add_parser("encode-dataset", help="Кодирование CSV как отношения")
    p.add_argument("spec")
    p.add_argument("--csv", required=True)
    p.add_argument("--columns", required=True, help="столбец=Ω-множество через запятую")
    p.add_argument("--name", default="dataset")

    p = sub.add_parser("watch", help="Перепроверять .sem при изменениях")
    p.add_argument("directory")
    p.add_argument("--debounce", type=float, default=WATCH_DEBOUNCE)
    return parser


def run_command(args):
    """
    Выполняет команду.

    Args:
        args (argparse.Namespace): Разобранные аргументы

    Returns:
        int: Код завершения
    """
    configure_runtime(args.epsilon, args.cap)
    if args.cap is None:
        args.cap = current_cap()
    logger.info(f"🚀 Команда {args.command}")
    return COMMANDS[args.command](args)
