"""
Сборка рабочего пространства из объявлений .sem: алгебры, знаки,
Ω-множества, компоненты, диаграммы, отношения, скетч, пулы и правила.
Ошибки ссылок и проверки собираются в диагностику с позициями.
"""

import logging
from pathlib import Path

from config.settings import OMEGA_SIGN
from .algebra import make_algebra
from .diagram import Arrow, MultiDiagram
from .errors import Diagnostic, SemioError, SourceSpan, SpecError
from .grammar import Semantics
from .inference import Atom, Binary, HypothesisPool
from .parser import (
    AlgebraDecl, BindingDecl, CompDecl, DiagramDecl, OsetDecl, PoolDecl as PoolStatement,
    RelationDecl, RuleDecl, SignDecl, SizeDecl, TotalDecl, parse_statements,
)
from .relation import MultiMorphism, Port, SOURCE, TARGET, crisp_omega_set, make_omega_set
from .semiotic import (
    AtomRelation, ConnectiveRelation, NamedRelation, PoolDecl, Semiotic,
)
from .utils import dedupe_names

logger = logging.getLogger(__name__)


def parse_value(node):
    """Текст значения -> float, кортеж -> кортеж значений."""
    if isinstance(node, tuple):
        return tuple(parse_value(n) for n in node)
    return float(str(node))


class Workspace:
    """Разобранная спецификация и построенная по ней семиотика."""

    def __init__(self, file="<spec>"):
        self.file = file
        self.statements = []
        self.spans = {}
        self.diagnostics = []
        self.semiotic = None

    def error(self, message, span):
        self.diagnostics.append(Diagnostic(message, span))

    def pool(self, name, cap=None):
        """Пул гипотез по объявлению pool."""
        s = self.semiotic
        if name not in s.pools:
            raise SpecError([Diagnostic(f"Неизвестный пул: {name}",
                                        SourceSpan.file_start(self.file))])
        decl = s.pools[name]
        return HypothesisPool(
            {n: s.resolve(n) for n in decl.diagrams},
            {n: s.resolve(n) for n in decl.concepts},
            {n: s.resolve(n) for n in decl.domains},
            name=name, cap=cap)


def _declare(ws, kind, name, span, registry):
    if name in registry:
        ws.error(f"Повторное объявление {kind} {name} (первое: {ws.spans[(kind, name)]})", span)
        return False
    ws.spans[(kind, name)] = span
    return True


def _build_algebra(ws, decl, algebras):
    kind = decl.kind
    params = {}
    try:
        if kind == "chain":
            if len(decl.args) != 1 or not decl.args[0].isdigit():
                ws.error("chain требует целый аргумент n", decl.span)
                return None
            params["n"] = int(decl.args[0])
        elif kind == "table":
            if decl.carrier is None:
                ws.error("Табличная алгебра требует строку carrier", decl.span)
                return None
            params["carrier"] = [parse_value(v) for v in decl.carrier]
            params["tensor"] = {(parse_value(x), parse_value(y)): parse_value(z)
                                for x, y, z in (item.parts for item in decl.tensor)}
            if decl.residuum:
                params["residuum"] = {(parse_value(x), parse_value(y)): parse_value(z)
                                      for x, y, z in (item.parts for item in decl.residuum)}
        elif kind == "product_of":
            missing = [n for n in decl.args if n not in algebras]
            if missing or not decl.args:
                ws.error(f"product_of ссылается на необъявленные алгебры {missing}", decl.span)
                return None
            params["factors"] = [algebras[n] for n in decl.args]
        elif decl.args:
            ws.error(f"Алгебра {kind} не принимает аргументов", decl.span)
            return None
        return make_algebra(kind, **params)
    except ValueError as e:
        ws.error(f"Некорректное число: {e}", decl.span)
    except SemioError as e:
        ws.error(str(e), decl.span)
    return None


def _port_oset(ws, semiotic, sign, span):
    candidates = [o for o in semiotic.osets.values() if o.sign == sign]
    if not candidates:
        ws.error(f"Для знака {sign} не объявлено ни одного Ω-множества", span)
        return None
    if len(candidates) == 1:
        return candidates[0]
    support = []
    for o in candidates:
        support.extend(x for x in o.support if x not in support)
    return crisp_omega_set(sign, support, semiotic.algebra, name=f"{sign}*")


def _build_comp(ws, decl, semiotic):
    a = semiotic.algebra
    predicate = decl.targets == [OMEGA_SIGN]
    targets = [] if predicate else decl.targets
    for sign in decl.sources + targets:
        if sign not in semiotic.ontology:
            ws.error(f"Компонент {decl.name}: необъявленный знак {sign}", decl.span)
            return None
    if OMEGA_SIGN in decl.sources + targets:
        ws.error(f"Компонент {decl.name}: {OMEGA_SIGN} допустим только как единственная цель",
                 decl.span)
        return None
    osets = [_port_oset(ws, semiotic, s, decl.span) for s in decl.sources + targets]
    if any(o is None for o in osets):
        return None
    names = dedupe_names(decl.sources + targets)
    roles = [SOURCE] * len(decl.sources) + [TARGET] * len(targets)
    ports = [Port(n, r, o) for n, r, o in zip(names, roles, osets)]
    table = {}
    ok = True
    for item in decl.entries:
        key, value = item.parts
        if len(key) != len(ports):
            ws.error(f"Запись {decl.name}: ожидается {len(ports)} элементов, получено {len(key)}",
                     item.span)
            ok = False
            continue
        unknown = [(p.name, e) for p, e in zip(ports, key) if e not in p.oset]
        if unknown:
            ws.error(f"Запись {decl.name}: неизвестный элемент {unknown[0][1]} порта {unknown[0][0]}",
                     item.span)
            ok = False
            continue
        if key in table:
            ws.error(f"Запись {decl.name}: повторный кортеж {' '.join(key)}", item.span)
            ok = False
            continue
        try:
            table[key] = a.check_value(parse_value(value))
        except (ValueError, SemioError) as e:
            ws.error(f"Запись {decl.name}: {e}", item.span)
            ok = False
    if not ok:
        return None
    return MultiMorphism(a, ports, table, name=decl.name)


def _build_diagram(ws, decl, semiotic):
    vertices = {}
    ok = True
    for item in decl.nodes:
        ident, oset_name = item.parts
        if ident in vertices:
            ws.error(f"Диаграмма {decl.name}: повторная вершина {ident}", item.span)
            ok = False
        elif oset_name not in semiotic.osets:
            ws.error(f"Диаграмма {decl.name}: неизвестное Ω-множество {oset_name}", item.span)
            ok = False
        else:
            vertices[ident] = semiotic.osets[oset_name]
    arrows = []
    seen = set()
    for item in decl.edges:
        ident, label, sources, targets = item.parts
        if ident in seen:
            ws.error(f"Диаграмма {decl.name}: повторная стрелка {ident}", item.span)
            ok = False
            continue
        seen.add(ident)
        comp = semiotic.comps.get(label)
        if comp is None:
            ws.error(f"Диаграмма {decl.name}: неизвестный компонент {label}", item.span)
            ok = False
            continue
        if len(sources) != len(comp.sources) or len(targets) != len(comp.targets):
            ws.error(f"Стрелка {ident}: {label} ожидает {len(comp.sources)} -> {len(comp.targets)} "
                     f"вершин, получено {len(sources)} -> {len(targets)}", item.span)
            ok = False
            continue
        for v, port in zip(sources + targets, comp.ports):
            if v not in vertices:
                ws.error(f"Стрелка {ident}: неизвестная вершина {v}", item.span)
                ok = False
            elif vertices[v].sign != port.sign:
                ws.error(f"Стрелка {ident}: вершина {v} имеет знак {vertices[v].sign}, "
                         f"ожидается {port.sign}", item.span)
                ok = False
        arrows.append(Arrow(ident, comp, sources, targets))
    sources = decl.sources if decl.sources is not None else list(vertices)
    unknown = [v for v in sources if v not in vertices]
    if unknown:
        ws.error(f"Диаграмма {decl.name}: источники {unknown} не являются вершинами", decl.span)
        ok = False
    if not ok:
        return None
    return MultiDiagram(semiotic.algebra, vertices, arrows, tuple(sources), name=decl.name)


def _build_relation(ws, expr, semiotic, span):
    if isinstance(expr, Atom):
        if expr.name in semiotic.relations:
            return semiotic.relations[expr.name]
        if expr.name in semiotic.diagrams:
            return AtomRelation(semiotic.diagrams[expr.name])
        ws.error(f"Неизвестная диаграмма или отношение {expr.name}", span)
        return None
    if isinstance(expr, Binary):
        left = _build_relation(ws, expr.left, semiotic, span)
        right = _build_relation(ws, expr.right, semiotic, span)
        if left is None or right is None:
            return None
        try:
            return ConnectiveRelation(expr.op, left, right)
        except SemioError as e:
            ws.error(str(e), span)
            return None
    ws.error("Модальности [I]/[C] недопустимы в определении отношения", span)
    return None


def build_workspace(statements, file="<spec>"):
    """
    Строит рабочее пространство по объявлениям.

    Args:
        statements (list): Результат parse_statements
        file (str): Имя файла

    Returns:
        Workspace: Рабочее пространство с семиотикой

    Raises:
        SpecError: ошибки ссылок и проверки с позициями
    """
    ws = Workspace(file)
    ws.statements = list(statements)
    by_kind = lambda cls: [s for s in statements if isinstance(s, cls)]

    algebras = {}
    active = None
    for decl in by_kind(AlgebraDecl):
        if not _declare(ws, "algebra", decl.name, decl.span, algebras):
            continue
        algebra = _build_algebra(ws, decl, algebras)
        if algebra is not None:
            algebras[decl.name] = algebra
            active = decl.name
    if active is None:
        if not ws.diagnostics:
            ws.error("Не объявлена ни одна алгебра", SourceSpan.file_start(file))
        raise SpecError(ws.diagnostics)

    semiotic = Semiotic(Path(file).stem if file != "<spec>" else "spec",
                        algebras[active], algebra_name=active, algebras=algebras,
                        semantics=Semantics())
    ws.semiotic = semiotic

    signs = {}
    for decl in by_kind(SignDecl):
        if decl.name == OMEGA_SIGN:
            ws.error(f"Знак {OMEGA_SIGN} зарезервирован", decl.span)
            continue
        if _declare(ws, "sign", decl.name, decl.span, signs):
            signs[decl.name] = decl
    for decl in signs.values():
        missing = [p for p in decl.parents if p not in signs]
        if missing:
            ws.error(f"Знак {decl.name}: неизвестные обобщения {missing}", decl.span)
            continue
        try:
            semiotic.ontology.add(decl.name, decl.parents)
        except SemioError as e:
            ws.error(str(e), decl.span)

    for decl in by_kind(OsetDecl):
        if not _declare(ws, "oset", decl.name, decl.span, semiotic.osets):
            continue
        if decl.sign not in signs:
            ws.error(f"Ω-множество {decl.name}: необъявленный знак {decl.sign}", decl.span)
            continue
        entries = []
        for item in decl.sims:
            x, y, value = item.parts
            if x not in decl.support or y not in decl.support:
                ws.error(f"Ω-множество {decl.name}: неизвестный элемент в ({x}, {y})", item.span)
                continue
            try:
                entries.append((x, y, parse_value(value)))
            except ValueError:
                ws.error(f"Ω-множество {decl.name}: некорректное значение {value}", item.span)
        try:
            semiotic.osets[decl.name] = make_omega_set(
                decl.sign, decl.support, semiotic.algebra, entries, name=decl.name)
        except SemioError as e:
            ws.error(str(e), decl.span)

    for decl in by_kind(CompDecl):
        if not _declare(ws, "comp", decl.name, decl.span, semiotic.comps):
            continue
        comp = _build_comp(ws, decl, semiotic)
        if comp is not None:
            semiotic.comps[decl.name] = comp

    for decl in by_kind(DiagramDecl):
        if decl.name in semiotic.relations:
            ws.error(f"Имя {decl.name} уже занято", decl.span)
            continue
        if not _declare(ws, "diagram", decl.name, decl.span, semiotic.diagrams):
            continue
        diagram = _build_diagram(ws, decl, semiotic)
        if diagram is not None:
            semiotic.diagrams[decl.name] = diagram

    for decl in by_kind(RelationDecl):
        if decl.name in semiotic.diagrams:
            ws.error(f"Имя {decl.name} уже занято диаграммой", decl.span)
            continue
        if not _declare(ws, "relation", decl.name, decl.span, semiotic.relations):
            continue
        term = _build_relation(ws, decl.expr, semiotic, decl.span)
        if term is not None:
            semiotic.relations[decl.name] = NamedRelation(decl.name, term)

    named = lambda n: n in semiotic.diagrams or n in semiotic.relations
    for decl in by_kind(TotalDecl):
        if not named(decl.name):
            ws.error(f"total: неизвестная диаграмма {decl.name}", decl.span)
        elif decl.name not in semiotic.totals:
            semiotic.totals.append(decl.name)

    for decl in by_kind(BindingDecl):
        if decl.comp not in semiotic.comps:
            ws.error(f"{decl.kind}def: неизвестный компонент {decl.comp}", decl.span)
        elif decl.diagram not in semiotic.diagrams:
            ws.error(f"{decl.kind}def: неизвестная диаграмма {decl.diagram}", decl.span)
        else:
            target = semiotic.limit_bindings if decl.kind == "limit" else semiotic.colimit_bindings
            target.append((decl.comp, decl.diagram))

    for decl in by_kind(PoolStatement):
        if not _declare(ws, "pool", decl.name, decl.span, semiotic.pools):
            continue
        unknown = [n for n in decl.diagrams + decl.concepts + decl.domains
                   if not named(n) and not (n in semiotic.comps and semiotic.comps[n].is_predicate())]
        if unknown:
            ws.error(f"Пул {decl.name}: неизвестные отношения {unknown}", decl.span)
            continue
        semiotic.pools[decl.name] = PoolDecl(list(decl.diagrams), list(decl.concepts),
                                             list(decl.domains))

    for decl in by_kind(SizeDecl):
        if decl.label in semiotic.semantics.sizes:
            ws.error(f"Повторный размер для {decl.label}", decl.span)
            continue
        try:
            size = int(decl.value)
        except ValueError:
            size = 0
        if size < 1:
            ws.error(f"Размер {decl.label}: ожидалось целое число ≥ 1, получено {decl.value}",
                     decl.span)
            continue
        semiotic.semantics.sizes[decl.label] = size

    for decl in by_kind(RuleDecl):
        if decl.lhs in semiotic.semantics.rules:
            ws.error(f"Повторное правило для {decl.lhs}", decl.span)
            continue
        unknown = [r for r in decl.rhs
                   if r not in semiotic.comps and r not in {d.lhs for d in by_kind(RuleDecl)}]
        if unknown:
            ws.error(f"Правило {decl.lhs}: неизвестные метки {unknown}", decl.span)
            continue
        semiotic.semantics.rules[decl.lhs] = tuple(decl.rhs)
        ws.spans[("rule", decl.lhs)] = decl.span
    for lhs in semiotic.semantics.rules:
        try:
            semiotic.semantics.check_rule(lhs)
        except SemioError as e:
            ws.error(str(e), ws.spans[("rule", lhs)])

    if ws.diagnostics:
        raise SpecError(ws.diagnostics)
    logger.info(f"✅ {file}: {len(semiotic.osets)} Ω-множеств, {len(semiotic.comps)} компонентов, "
                f"{len(semiotic.diagrams)} диаграмм, {len(semiotic.relations)} отношений")
    return ws


def parse_spec(text, file="<spec>"):
    """Текст .sem -> рабочее пространство или SpecError с диагностикой."""
    return build_workspace(parse_statements(text, file), file)


def load_spec(path):
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise SpecError([Diagnostic(f"Не удалось прочитать файл: {e}",
                                    SourceSpan.file_start(str(path)))])
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        head = data[:e.start]
        line = head.count(b"\n") + 1
        column = e.start - (head.rfind(b"\n") + 1) + 1
        raise SpecError([Diagnostic(f"Файл не в кодировке UTF-8: байт 0x{data[e.start]:02x}",
                                    SourceSpan(str(path), line, column, column + 1))])
    return parse_spec(text, str(path))
