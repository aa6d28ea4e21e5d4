"""
Знаковые системы со скетч-данными, модели и их проверка, логические
структурные компоненты, связки диаграмм, кодирование наборов данных,
естественные преобразования и интеграция семиотик.
"""

import logging
from dataclasses import dataclass, field

from config.settings import OMEGA_SIGN
from .algebra import ProductAlgebra, product_lower, product_upper
from .diagram import (
    Arrow, MultiDiagram, commutativity_degree, colimit, limit, project_limit,
)
from .errors import IntegrationClashError, SemioticError
from .grammar import (
    ConfigArrow, Configuration, Library, Ontology, Semantics, check_semantics, dual,
)
from .relation import (
    MultiMorphism, OmegaSet, Port, SOURCE, TARGET, algebra_omega_set, align_ports, classify,
    compose, crisp_omega_set, equal, omega_map, product_omega_sets, rerole, transpose,
)
from .utils import dedupe_names, enumerate_product

logger = logging.getLogger(__name__)

CONNECTIVE_SYMBOLS = {"tensor": "&", "implies": "->", "meet": "/\\", "join": "\\/"}


@dataclass
class Model:
    """Интерпретация: знак -> Ω-множество, метка -> мульти-морфизм."""

    algebra: object
    sign_map: dict
    comp_map: dict

    def oset(self, sign):
        if sign == OMEGA_SIGN and sign not in self.sign_map:
            return algebra_omega_set(self.algebra, OMEGA_SIGN)
        try:
            return self.sign_map[sign]
        except KeyError:
            raise SemioticError(f"Знак {sign} не интерпретирован моделью")

    def comp(self, label):
        try:
            return self.comp_map[label]
        except KeyError:
            raise SemioticError(f"Компонент {label} не интерпретирован моделью")


@dataclass
class SignSystem:
    """Библиотека и скетч: тотальные диаграммы E, привязки пределов U и копределов coU."""

    library: Library
    totals: dict = field(default_factory=dict)
    limit_bindings: list = field(default_factory=list)
    colimit_bindings: list = field(default_factory=list)
    semantics: Semantics = field(default_factory=Semantics)


def requirement_of(morphism):
    """Слово требований мульти-морфизма: знаки источников, затем дуальные знаки целей."""
    word = tuple(p.sign for p in morphism.sources)
    if morphism.is_predicate():
        return word + (dual(OMEGA_SIGN),)
    return word + tuple(dual(p.sign) for p in morphism.targets)


# --- термы отношений ------------------------------------------------------

class RelationTerm:
    """Отношение: Ω-отображение над именованными переменными."""

    def variables(self):
        raise NotImplementedError

    def evaluate(self, cap=None):
        raise NotImplementedError

    def describe(self):
        raise NotImplementedError

    def rebind(self, diagrams, relations):
        return self


class AtomRelation(RelationTerm):
    """Диаграмма как отношение: проекция предела на s(D)."""

    def __init__(self, diagram):
        self.diagram = diagram
        self._cache = None

    def variables(self):
        return [(v, self.diagram.vertices[v]) for v in self.diagram.sources]

    def evaluate(self, cap=None):
        if self._cache is None:
            self._cache = project_limit(self.diagram, cap)
        return self._cache

    def describe(self):
        return self.diagram.name

    def rebind(self, diagrams, relations):
        return AtomRelation(diagrams[self.diagram.name])


class NamedRelation(RelationTerm):
    """Ссылка на именованное отношение."""

    def __init__(self, name, term):
        self.name = name
        self.term = term

    def variables(self):
        return self.term.variables()

    def evaluate(self, cap=None):
        return self.term.evaluate(cap)

    def describe(self):
        return self.name

    def rebind(self, diagrams, relations):
        return relations[self.name]


class ConstantRelation(RelationTerm):
    def __init__(self, algebra, value, variables=()):
        self.algebra = algebra
        self.value = algebra.check_value(value)
        self._variables = list(variables)

    def variables(self):
        return list(self._variables)

    def evaluate(self, cap=None):
        table = {key: self.value for key in enumerate_product(
            [o.support for _, o in self._variables], cap)}
        return omega_map(self.algebra, self._variables, table, name="const")

    def describe(self):
        raise SemioticError("Постоянное отношение не имеет записи в языке спецификаций")


class ConnectiveRelation(RelationTerm):
    """
    Связка диаграмм: общие входы (по имени вершины) связаны диагональю,
    выходы подаются на операцию алгебры.
    """

    def __init__(self, op, left, right):
        if op not in CONNECTIVE_SYMBOLS:
            raise SemioticError(f"Неизвестная связка диаграмм: {op}")
        self.op = op
        self.left = left
        self.right = right
        self._variables = _merge_variables(left.variables(), right.variables())
        self._cache = None

    def variables(self):
        return list(self._variables)

    def evaluate(self, cap=None):
        if self._cache is not None:
            return self._cache
        l, r = self.left.evaluate(cap), self.right.evaluate(cap)
        a = l.algebra
        op = "residuum" if self.op == "implies" else self.op
        names = [n for n, _ in self._variables]
        table = {}
        for key in enumerate_product([o.support for _, o in self._variables], cap):
            assignment = dict(zip(names, key))
            table[key] = a.apply(op, l.value_at(assignment), r.value_at(assignment))
        self._cache = omega_map(a, self._variables, table, name=self.describe())
        return self._cache

    def describe(self):
        def wrap(term):
            text = term.describe()
            return f"({text})" if isinstance(term, ConnectiveRelation) else text
        return f"{wrap(self.left)} {CONNECTIVE_SYMBOLS[self.op]} {wrap(self.right)}"

    def rebind(self, diagrams, relations):
        return ConnectiveRelation(self.op, self.left.rebind(diagrams, relations),
                                  self.right.rebind(diagrams, relations))


def _merge_variables(left, right):
    merged = list(left)
    known = dict(left)
    for name, oset in right:
        if name in known:
            other = known[name]
            if other.sign != oset.sign or other.support != oset.support:
                raise SemioticError(
                    f"Переменная {name} связана с разными Ω-множествами: "
                    f"{other.name} и {oset.name}")
            continue
        merged.append((name, oset))
        known[name] = oset
    return merged


def diagram_connective(op, d0, d1):
    """Связка двух отношений (диаграмм или термов)."""
    wrap = lambda d: AtomRelation(d) if isinstance(d, MultiDiagram) else d
    return ConnectiveRelation(op, wrap(d0), wrap(d1))


def relation_map(term, cap=None):
    if isinstance(term, MultiDiagram):
        return project_limit(term, cap)
    if isinstance(term, MultiMorphism):
        return term
    return term.evaluate(cap)


def truth_degree(relation, cap=None):
    """
    Степень истинности ⋀_x̄ ([x̄] ⇒ r(x̄)) и кортеж, на котором достигается минимум.

    Returns:
        tuple: (степень, свидетель)
    """
    r = relation_map(relation, cap)
    a = r.algebra
    degree = a.top
    witness = None
    for key, value in r.all_items(cap):
        v = a.residuum(r.extent(key), value)
        if witness is None or not a.leq(degree, v):
            witness = key
        degree = a.meet(degree, v)
    return degree, witness


def is_true_relation(relation, cap=None):
    degree, _ = truth_degree(relation, cap)
    return relation_map(relation, cap).algebra.is_top(degree)


# --- кодирование наборов данных ----------------------------------------------

@dataclass
class DatasetEncoding:
    relation: RelationTerm
    diagrams: dict
    comps: dict


def encode_dataset(rows, columns, name="dataset"):
    """
    Кодирует таблицу как ∨ по строкам диаграмм-уравнений: для строки (c₁…c_n)
    диаграмма с вершинами-столбцами и унарными стрелками [x_i = c_i].

    Args:
        rows (list): Кортежи значений
        columns (list): Пары (имя столбца, Ω-множество)

    Returns:
        DatasetEncoding: терм отношения, диаграммы строк и предикаты
    """
    if not columns:
        raise SemioticError("Набор данных без столбцов")
    algebra = columns[0][1].algebra
    comps = {}
    diagrams = {}
    terms = []
    for k, row in enumerate(rows):
        row = tuple(row)
        if len(row) != len(columns):
            raise SemioticError(f"Строка {k + 1}: ожидается {len(columns)} значений")
        arrows = []
        for (col, oset), value in zip(columns, row):
            if value not in oset:
                raise SemioticError(f"Строка {k + 1}: значение {value!r} вне носителя столбца {col}")
            comp_name = f"is_{col}_{oset.index(value)}"
            if comp_name not in comps:
                table = {(x,): oset.sim(x, value) for x in oset.support}
                comps[comp_name] = MultiMorphism(
                    algebra, [Port(oset.sign, SOURCE, oset)], table, name=comp_name)
            arrows.append(Arrow(f"e_{col}", comps[comp_name], (col,), ()))
        diagram = MultiDiagram(algebra, dict(columns), arrows,
                               tuple(c for c, _ in columns), name=f"{name}_row{k + 1}")
        diagrams[diagram.name] = diagram
        terms.append(AtomRelation(diagram))
    if not terms:
        logger.info("Пустой набор данных кодируется постоянным ⊥")
        return DatasetEncoding(ConstantRelation(algebra, algebra.bot, columns), {}, {})
    term = terms[0]
    for t in terms[1:]:
        term = ConnectiveRelation("join", term, t)
    logger.info(f"✅ Закодировано {len(terms)} строк набора {name}")
    return DatasetEncoding(term, diagrams, comps)


# --- логические компоненты -------------------------------------------------

def logic_component(kind, model, signs=(), n=2):
    """
    Структурные компоненты логической семиотики.

    Args:
        kind (str): diagonal | codiagonal | similarity | rename | truth
        model (Model): Модель, в которой разрешаются знаки
        signs (list): Знаки (один для diagonal/codiagonal, слово для similarity,
                      пара для rename)
        n (int): Число копий для diagonal/codiagonal

    Returns:
        MultiMorphism: Сгенерированная таблица
    """
    a = model.algebra
    if kind == "truth":
        return MultiMorphism(a, [], {(): a.top}, name="top")
    osets = [model.oset(s) for s in signs]
    if kind in ("diagonal", "codiagonal"):
        if len(osets) != 1:
            raise SemioticError(f"{kind} требует один знак")
        oset = osets[0]
        names = dedupe_names([oset.sign] * (n + 1))
        ports = [Port(names[0], SOURCE, oset)] + [Port(x, TARGET, oset) for x in names[1:]]
        table = {}
        for key in enumerate_product([oset.support] * (n + 1)):
            table[key] = a.tensor_all(oset.sim(key[0], x) for x in key[1:])
        diagonal = MultiMorphism(a, ports, table, name=f"diag{n}_{oset.sign}")
        return diagonal if kind == "diagonal" else transpose(diagonal)
    if kind == "similarity":
        names = dedupe_names([o.sign for o in osets] * 2)
        k = len(osets)
        ports = [Port(x, SOURCE, o) for x, o in zip(names, osets + osets)]
        table = {}
        for key in enumerate_product([o.support for o in osets + osets]):
            table[key] = a.tensor_all(o.sim(x, y) for o, x, y in zip(osets, key[:k], key[k:]))
        return MultiMorphism(a, ports, table, name="sim_" + "_".join(signs))
    if kind == "rename":
        if len(osets) != 2:
            raise SemioticError("rename требует два знака")
        s, u = osets
        ports = [Port(s.sign, SOURCE, s), Port(u.sign if u.sign != s.sign else u.sign + "'", TARGET, u)]
        table = {(x, x): a.top for x in s.support if x in u}
        return MultiMorphism(a, ports, table, name=f"rename_{s.sign}_{u.sign}")
    raise SemioticError(f"Неизвестный логический компонент: {kind}")


# --- интерпретация конфигураций и модели ------------------------------------

def bind_configuration(config, model):
    """Связывает конфигурацию с моделью: вершины -> Ω-множества, стрелки -> таблицы."""
    vertices = {v: model.oset(sign) for v, sign in config.vertices.items()}
    arrows = [Arrow(arr.id, model.comp(arr.label), tuple(arr.sources), tuple(arr.targets))
              for arr in config.arrows]
    return MultiDiagram(model.algebra, vertices, arrows, name=config.name)


def interpret(config, model, cap=None):
    """
    Интерпретация конфигурации: мульти-морфизм i(D) ⇀ o(D),
    ⋁ по внутренним вершинам предела.
    """
    diagram = bind_configuration(config, model)
    inputs = config.input_vertices()
    outputs = [v for v in config.output_vertices() if v not in inputs]
    projected = project_limit(diagram.with_sources(inputs + outputs), cap)
    return rerole(projected, inputs)


def extend_model(model, library, semantics):
    """
    Продолжение модели на составные метки: свертка композиции по нормальной форме.

    Raises:
        SemioticError: если у метки нет нормальной формы из атомарных компонентов
    """
    semantics.validate()
    comp_map = dict(model.comp_map)
    for label in semantics.rules:
        if label in model.comp_map:
            continue
        comp_map[label] = interpret_label(model, label, semantics)
    return Model(model.algebra, dict(model.sign_map), comp_map)


def interpret_label(model, label, semantics):
    chain = semantics.normal_form(label)
    missing = [r for r in chain if r not in model.comp_map]
    if missing:
        raise SemioticError(f"Метка {label} не имеет нормальной формы: нет {missing}")
    result = model.comp_map[chain[0]]
    for r in chain[1:]:
        result = compose(result, model.comp_map[r])
    return MultiMorphism(result.algebra, result.ports, dict(result.items()), name=label)


@dataclass
class Condition:
    name: str
    passed: bool
    degree: object = None
    witness: object = None
    message: str = ""


@dataclass
class ModelReport:
    conditions: list = field(default_factory=list)

    @property
    def ok(self):
        return all(c.passed for c in self.conditions)

    def failures(self):
        return [c for c in self.conditions if not c.passed]


def positional_equal(f, g):
    """Равенство таблиц при позиционном сопоставлении портов."""
    if len(f.ports) != len(g.ports):
        return False, None
    if any(p.support != q.support for p, q in zip(f.ports, g.ports)):
        return False, None
    a = f.algebra
    for key, value in f.all_items():
        if not a.eq(value, g.value(key)):
            return False, key
    return True, None


def validate_model(system, model, cap=None):
    """
    Проверяет модель против знаковой системы: тотальность E (с лучшим λ
    и худшим кортежем), U и coU, сохранение требований, монотонность
    по онтологии, согласованность правил ≡_l и ≡_w.

    Returns:
        ModelReport: Результат по каждому условию
    """
    report = ModelReport()
    add = report.conditions.append

    for name, item in system.totals.items():
        if isinstance(item, MultiDiagram):
            result = commutativity_degree(item, cap=cap)
            add(Condition(f"E:{name}", result.commutative, result.degree, result.witness,
                          f"лучший λ = {result.degree}"))
        else:
            degree, witness = truth_degree(item, cap)
            add(Condition(f"E:{name}", model.algebra.is_top(degree), degree, witness,
                          f"лучший λ = {degree}"))

    for kind, bindings, construct in (("U", system.limit_bindings, limit),
                                      ("coU", system.colimit_bindings, colimit)):
        for label, diagram in bindings:
            if label not in model.comp_map:
                add(Condition(f"{kind}:{label}", False, message="компонент не интерпретирован"))
                continue
            same, witness = positional_equal(model.comp_map[label], construct(diagram, cap))
            add(Condition(f"{kind}:{label}", same, witness=witness,
                          message=f"{label} {'=' if same else '≠'} {kind} {diagram.name}"))

    for label, comp in model.comp_map.items():
        unknown = [p.sign for p in comp.ports
                   if p.sign not in model.sign_map and p.sign != OMEGA_SIGN]
        expected = system.library.requirements.get(label)
        ok = not unknown and (expected is None or expected == requirement_of(comp))
        add(Condition(f"requirements:{label}", ok,
                      message="" if ok else f"неизвестные знаки {unknown} или несоответствие требованию"))

    ontology = system.library.ontology
    for sign in ontology.signs:
        for parent in ontology.parents(sign):
            child_set, parent_set = model.sign_map.get(sign), model.sign_map.get(parent)
            if child_set is None or parent_set is None:
                continue
            witness = _monotonicity_witness(child_set, parent_set)
            add(Condition(f"ontology:{sign}<={parent}", witness is None, witness=witness))

    problems = check_semantics(system.library, system.semantics)
    for lhs, rhs in system.semantics.rules.items():
        if lhs in model.comp_map and all(r in model.comp_map for r in rhs):
            folded = interpret_label(
                Model(model.algebra, model.sign_map,
                      {k: v for k, v in model.comp_map.items() if k != lhs}),
                lhs, system.semantics)
            if not equal(model.comp_map[lhs], folded):
                problems.append(f"{lhs}: M({lhs}) ≠ композиции {' '.join(rhs)}")
    add(Condition("semantics:labels", not problems, message="; ".join(problems)))

    word_problems = []
    for w0, w1 in system.semantics.word_rules:
        try:
            s0 = product_omega_sets(*(model.oset(s) for s in w0))
            s1 = product_omega_sets(*(model.oset(s) for s in w1))
        except SemioticError as e:
            word_problems.append(str(e))
            continue
        if not s0.same_as(s1):
            word_problems.append(f"{' '.join(w0)} ≢ {' '.join(w1)}")
    add(Condition("semantics:words", not word_problems, message="; ".join(word_problems)))

    for c in report.failures():
        logger.warning(f"⚠️ Условие модели {c.name} нарушено: {c.message} {c.witness or ''}")
    return report


def _monotonicity_witness(child, parent):
    a = child.algebra
    for x in child.support:
        if x not in parent:
            return (x,)
        for y in child.support:
            if y in parent and not a.leq(child.sim(x, y), parent.sim(x, y)):
                return (x, y)
    return None


# --- естественные преобразования ---------------------------------------------

@dataclass
class NaturalityReport:
    holds: bool
    witness: tuple = None


def check_natural_transformation(m1, m2, f, g, config, cap=None):
    """
    Проверяет f⊗M₂(D) = M₁(D)⊗g для эпиморфизмов f: M₁(i(D)) ⇀ M₂(i(D)),
    g: M₁(o(D)) ⇀ M₂(o(D)).

    Raises:
        SemioticError: если f или g не эпиморфизмы
    """
    for name, h in (("f", f), ("g", g)):
        if not classify(h).epi:
            raise SemioticError(f"{name} не является эпиморфизмом")
    left = compose(f, interpret(config, m2, cap))
    right = compose(interpret(config, m1, cap), g)
    mapping = align_ports(left, right)
    if mapping is None:
        return NaturalityReport(False, None)
    a = left.algebra
    for key, value in left.all_items(cap):
        other_key = [None] * len(key)
        for i, j in enumerate(mapping):
            other_key[j] = key[i]
        other = right.value(tuple(other_key))
        if not a.eq(value, other):
            logger.info(f"Естественность нарушена в кортеже {key}")
            return NaturalityReport(False, key)
    return NaturalityReport(True, None)


def compose_natural_transformations(first, second):
    (f1, g1), (f2, g2) = first, second
    return compose(f1, f2), compose(g1, g2)


def mining_schema(d, diagram, cap=None):
    """d ⊗ Lim D над всеми вершинами диаграммы."""
    unknown = [p.name for p in d.ports if p.name not in diagram.vertices]
    if unknown:
        raise SemioticError(f"Концепт ссылается на вершины вне диаграммы: {unknown}")
    lim = limit(diagram, cap)
    a = lim.algebra
    names = lim.port_names
    table = {}
    for key, value in lim.items():
        assignment = dict(zip(names, key))
        table[key] = a.tensor(d.value_at(assignment), value)
    return MultiMorphism(a, lim.ports, table, name=f"{d.name}⊗Lim {diagram.name}")


# --- семиотика и интеграция --------------------------------------------------

@dataclass
class PoolDecl:
    diagrams: list = field(default_factory=list)
    concepts: list = field(default_factory=list)
    domains: list = field(default_factory=list)


@dataclass
class Semiotic:
    """
    Знаковая система вместе с моделью: все объявления по именам.
    Порядок словарей - порядок объявления.
    """

    name: str
    algebra: object
    algebra_name: str = "Omega"
    algebras: dict = field(default_factory=dict)
    ontology: Ontology = field(default_factory=Ontology)
    osets: dict = field(default_factory=dict)
    comps: dict = field(default_factory=dict)
    diagrams: dict = field(default_factory=dict)
    relations: dict = field(default_factory=dict)
    totals: list = field(default_factory=list)
    limit_bindings: list = field(default_factory=list)
    colimit_bindings: list = field(default_factory=list)
    pools: dict = field(default_factory=dict)
    semantics: Semantics = field(default_factory=Semantics)

    def library(self):
        ontology = Ontology()
        for sign in self.ontology.signs:
            ontology.add(sign, self.ontology.parents(sign))
        ontology.add(OMEGA_SIGN)
        library = Library(ontology)
        for label, comp in self.comps.items():
            library.add(label, requirement_of(comp))
        return library

    def model(self):
        sign_map = {}
        for oset in self.osets.values():
            sign_map.setdefault(oset.sign, oset)
        return Model(self.algebra, sign_map, dict(self.comps))

    def resolve(self, name):
        """Диаграмма, отношение или предикат по имени."""
        if name in self.relations:
            return self.relations[name]
        if name in self.diagrams:
            return self.diagrams[name]
        if name in self.comps and self.comps[name].is_predicate():
            return self.comps[name]
        raise SemioticError(f"Неизвестное отношение: {name}")

    def resolve_map(self, name, cap=None):
        return relation_map(self.resolve(name), cap)

    def system(self):
        totals = {name: self.resolve(name) for name in self.totals}
        return SignSystem(
            self.library(), totals,
            [(label, self.diagrams[d]) for label, d in self.limit_bindings],
            [(label, self.diagrams[d]) for label, d in self.colimit_bindings],
            self.semantics)

    def configuration(self, name):
        """Конфигурация диаграммы: вершины со знаками, стрелки с метками."""
        d = self.diagrams[name]
        return Configuration(
            {v: o.sign for v, o in d.vertices.items()},
            [ConfigArrow(a.id, a.morphism.name, a.sources, a.targets) for a in d.arrows],
            name)


def _embed_value(product, index, value):
    """Вложение нелогического значения: ⊤ -> ⊤, остальное с заполнением ⊥."""
    if product.factors[index].is_top(value):
        return product.top
    return product_lower(product, index, value)


def _lift_oset_values(oset, index, product):
    return {(x, y): _embed_value(product, index, oset.sim(x, y))
            for x in oset.support for y in oset.support}


def _lift_comp_values(comp, index, product, cap=None):
    # только отношения в Ω получают заполнение ⊤
    lift = product_upper if comp.is_predicate() else _embed_value
    return {key: lift(product, index, value) for key, value in comp.all_items(cap)}


def _diagram_shape(d):
    return ([(v, o.name) for v, o in d.vertices.items()],
            [(a.id, a.morphism.name, a.sources, a.targets) for a in d.arrows],
            d.sources)


def integrate(semiotics, name="integrated", cap=None):
    """
    Интеграция семиотик: объединение знаков, компонентов и скетчей;
    алгебра - произведение алгебр операндов. Отношения в Ω операнда i
    поднимаются вложением с заполнением ⊤ и пересекаются покомпонентно;
    Ω-множества и прочие компоненты сохраняют ⊥ и ⊤ (заполнение ⊥) и
    объединяются.

    Raises:
        IntegrationClashError: одинаковые имена с разной интерпретацией
    """
    if not semiotics:
        raise SemioticError("Нечего интегрировать")
    product = ProductAlgebra([s.algebra for s in semiotics])
    owners = {}
    ontology = Ontology()
    oset_values, oset_proto = {}, {}
    comp_values, comp_proto = {}, {}

    def clash(kind, item, i, witness=None):
        first = semiotics[owners[(kind, item)]].name
        raise IntegrationClashError(
            f"{kind} {item}: разная интерпретация в {first} и {semiotics[i].name}"
            + (f", свидетель {witness}" if witness is not None else ""),
            sources=(first, semiotics[i].name), witness=witness)

    def merge(store, key, values, combine):
        if key not in store:
            store[key] = values
        else:
            store[key] = {k: combine(store[key][k], v) for k, v in values.items()}

    for i, s in enumerate(semiotics):
        ontology = ontology.merged(s.ontology)
        for oname, oset in s.osets.items():
            if ("oset", oname) in owners:
                proto = oset_proto[oname]
                if proto.sign != oset.sign or proto.support != oset.support:
                    clash("oset", oname, i)
                for x in oset.support:
                    for y in oset.support:
                        if not _same_value(proto.sim(x, y), oset.sim(x, y), product.epsilon):
                            clash("oset", oname, i, (x, y))
            else:
                owners[("oset", oname)] = i
                oset_proto[oname] = oset
            merge(oset_values, oname, _lift_oset_values(oset, i, product), product.join)

        for cname, comp in s.comps.items():
            if ("comp", cname) in owners:
                proto = comp_proto[cname]
                if requirement_of(proto) != requirement_of(comp) or \
                        [p.support for p in proto.ports] != [p.support for p in comp.ports]:
                    clash("comp", cname, i)
                if not comp.is_predicate():
                    for key, value in comp.all_items(cap):
                        if not _same_value(proto.value(key), value, product.epsilon):
                            clash("comp", cname, i, key)
            else:
                owners[("comp", cname)] = i
                comp_proto[cname] = comp
            merge(comp_values, cname, _lift_comp_values(comp, i, product, cap),
                  product.meet if comp.is_predicate() else product.join)

    result = Semiotic(name, product, algebra_name=name)
    for alg_name, s in zip(dedupe_names([s.algebra_name for s in semiotics]), semiotics):
        result.algebras[alg_name] = s.algebra
    result.algebras[name] = product
    result.ontology = ontology
    for oname, proto in oset_proto.items():
        result.osets[oname] = OmegaSet(proto.sign, proto.support, product,
                                       {k: v for k, v in oset_values[oname].items()
                                        if not product.is_bot(v)}, name=oname)
    osets_by_old = {}
    for s in semiotics:
        for oname, oset in s.osets.items():
            osets_by_old[id(oset)] = result.osets[oname]
    for cname, proto in comp_proto.items():
        ports = [Port(p.name, p.role, _port_oset(p.oset, osets_by_old, product))
                 for p in proto.ports]
        result.comps[cname] = MultiMorphism(product, ports, comp_values[cname], name=cname)

    shapes = {}
    for i, s in enumerate(semiotics):
        for dname, d in s.diagrams.items():
            shape = _diagram_shape(d)
            if dname in shapes and shapes[dname] != shape:
                owners.setdefault(("diagram", dname), i)
                clash("diagram", dname, i)
            if dname not in shapes:
                owners[("diagram", dname)] = i
                shapes[dname] = shape
                result.diagrams[dname] = MultiDiagram(
                    product,
                    {v: result.osets[o.name] for v, o in d.vertices.items()},
                    [Arrow(a.id, result.comps[a.morphism.name], a.sources, a.targets)
                     for a in d.arrows],
                    d.sources, name=dname)

    texts = {}
    for i, s in enumerate(semiotics):
        for rname, term in s.relations.items():
            text = term.describe() if not isinstance(term, NamedRelation) else term.term.describe()
            if rname in texts and texts[rname] != text:
                owners.setdefault(("relation", rname), i)
                clash("relation", rname, i)
            owners.setdefault(("relation", rname), i)
            texts[rname] = text
    for i, s in enumerate(semiotics):
        for rname, term in s.relations.items():
            if rname not in result.relations:
                inner = term.term if isinstance(term, NamedRelation) else term
                result.relations[rname] = NamedRelation(
                    rname, inner.rebind(result.diagrams, result.relations))

    for i, s in enumerate(semiotics):
        for item in s.totals:
            if item not in result.totals:
                result.totals.append(item)
        for binding in s.limit_bindings:
            if binding not in result.limit_bindings:
                result.limit_bindings.append(binding)
        for binding in s.colimit_bindings:
            if binding not in result.colimit_bindings:
                result.colimit_bindings.append(binding)
        for pname, pool in s.pools.items():
            if pname in result.pools and result.pools[pname] != pool:
                owners.setdefault(("pool", pname), i)
                clash("pool", pname, i)
            owners.setdefault(("pool", pname), i)
            result.pools.setdefault(pname, pool)
        for lhs, rhs in s.semantics.rules.items():
            known = result.semantics.rules.get(lhs)
            if known is not None and tuple(known) != tuple(rhs):
                owners.setdefault(("rule", lhs), i)
                clash("rule", lhs, i)
            owners.setdefault(("rule", lhs), i)
            result.semantics.rules[lhs] = tuple(rhs)
        for label, size in s.semantics.sizes.items():
            if result.semantics.sizes.get(label, size) != size:
                owners.setdefault(("size", label), i)
                clash("size", label, i)
            owners.setdefault(("size", label), i)
            result.semantics.sizes[label] = size
        for pair in s.semantics.word_rules:
            if pair not in result.semantics.word_rules:
                result.semantics.word_rules.append(pair)

    logger.info(f"✅ Интегрировано {len(semiotics)} семиотик: {len(result.osets)} Ω-множеств, "
                f"{len(result.comps)} компонентов, {len(result.diagrams)} диаграмм")
    return result


def _same_value(x, y, epsilon):
    if isinstance(x, tuple) or isinstance(y, tuple):
        if not (isinstance(x, tuple) and isinstance(y, tuple)) or len(x) != len(y):
            return False
        return all(abs(p - q) <= epsilon for p, q in zip(x, y))
    return abs(float(x) - float(y)) <= epsilon


def _port_oset(oset, osets_by_old, product):
    """Ω-множество порта после интеграции (объединенные носители поднимаются как четкие)."""
    if id(oset) in osets_by_old:
        return osets_by_old[id(oset)]
    return crisp_omega_set(oset.sign, oset.support, product, name=oset.name)


def integration_schema_colimit(vertex_maps, arrows, cap=None):
    """
    Копредел схемы интеграции: ⊗ интерпретаций вершин, умноженное для каждой
    пары вершин на ⋁ соединяющих их стрелок; пара без стрелок дает ⊤.

    Args:
        vertex_maps (dict): Имя вершины -> Ω-отображение (порты - переменные)
        arrows (list): Тройки (вершина, вершина, Ω-отображение над переменными)

    Returns:
        MultiMorphism: Ω-отображение над объединением переменных
    """
    if not vertex_maps:
        raise SemioticError("Схема интеграции без вершин")
    variables = []
    for m in vertex_maps.values():
        variables = _merge_variables(variables, [(p.name, p.oset) for p in m.ports])
    for _, _, m in arrows:
        variables = _merge_variables(variables, [(p.name, p.oset) for p in m.ports])
    for u, v, _ in arrows:
        if u not in vertex_maps or v not in vertex_maps:
            raise SemioticError(f"Стрелка схемы ссылается на неизвестную вершину {u} или {v}")
    algebra = next(iter(vertex_maps.values())).algebra
    families = {}
    for u, v, m in arrows:
        families.setdefault((u, v), []).append(m)
    names = [n for n, _ in variables]
    table = {}
    for key in enumerate_product([o.support for _, o in variables], cap):
        assignment = dict(zip(names, key))
        value = algebra.tensor_all(m.value_at(assignment) for m in vertex_maps.values())
        for family in families.values():
            value = algebra.tensor(value, algebra.join_all(m.value_at(assignment) for m in family))
        table[key] = value
    return omega_map(algebra, variables, table, name="Ω(J)")
