"""
Исчисление согласованности: Γ, λ-модели, ответы, модальные операторы
□/◇, внутренность и замыкание, отношение следования ⊢_λ на конечных
пулах гипотез и вычисление формул λ-RL.
"""

import logging
from dataclasses import dataclass, field

from .diagram import MultiDiagram, project_limit
from .errors import InferenceError
from .relation import MultiMorphism, omega_map
from .utils import enumerate_product

logger = logging.getLogger(__name__)

MODES = ("forall", "exists", "forall_on")


def as_map(item, cap=None):
    """Ω-отображение концепта, диаграммы или терма отношения."""
    if isinstance(item, MultiMorphism):
        return item
    if isinstance(item, MultiDiagram):
        return project_limit(item, cap)
    if hasattr(item, "evaluate"):
        return item.evaluate(cap)
    raise InferenceError(f"Ожидается концепт или отношение, получено {type(item).__name__}")


def project_onto(m, names):
    """Проекция Ω-отображения на подмножество портов: ⋁ по остальным."""
    a = m.algebra
    index = [m.port_names.index(n) for n in names]
    table = {}
    for key, value in m.items():
        head = tuple(key[i] for i in index)
        table[head] = a.join(table.get(head, a.bot), value)
    return omega_map(a, [(m.ports[i].name, m.ports[i].oset) for i in index], table,
                     name=f"π{m.name}")


@dataclass
class GammaResult:
    pointwise: MultiMorphism
    quality: object
    witness: tuple = None


def _aligned(m0, m1):
    """Пара Ω-отображений над общими переменными и способ получения значения второго."""
    n0, n1 = m0.port_names, m1.port_names
    by_name0 = {p.name: p.support for p in m0.ports}
    by_name1 = {p.name: p.support for p in m1.ports}
    if set(n0) == set(n1) and all(by_name0[n] == by_name1[n] for n in n0):
        return m0, lambda key: m1.value_at(dict(zip(n0, key)))
    if len(n0) == len(n1) and all(p.support == q.support for p, q in zip(m0.ports, m1.ports)):
        return m0, m1.value
    if set(n1) < set(n0) and all(by_name0[n] == by_name1[n] for n in n1):
        p0 = project_onto(m0, n1)
        return m1, lambda key: p0.value_at(dict(zip(n1, key)))
    if set(n0) < set(n1) and all(by_name0[n] == by_name1[n] for n in n0):
        return _aligned(project_onto(m1, n0), m0)
    raise InferenceError(f"Несравнимые носители концептов: {n0} и {n1}")


def gamma(d0, d1, cap=None):
    """
    Γ(d₀,d₁) = d₀ ⇔ d₁ поточечно и его ⋀ (качество).
    Если один концепт проецируется на другой, сравнивается проекция.

    Returns:
        GammaResult: поточечное отображение, качество и худший кортеж
    """
    m0, m1 = as_map(d0, cap), as_map(d1, cap)
    base, other = _aligned(m0, m1)
    a = base.algebra
    table = {}
    quality = a.top
    witness = None
    for key in enumerate_product(base.supports, cap):
        value = a.biimp(base.value(key), other(key))
        table[key] = value
        if witness is None or not a.leq(quality, value):
            witness = key
        quality = a.meet(quality, value)
    pointwise = omega_map(a, [(p.name, p.oset) for p in base.ports], table, name="Γ")
    return GammaResult(pointwise, quality, witness)


@dataclass
class ConsistencyResult:
    holds: bool
    fiber: list = field(default_factory=list)
    size: int = 0


def top_fiber(m, cap=None):
    a = m.algebra
    return [key for key, value in m.items() if a.is_top(value)]


def consistency_check(d, diagram, lam, mode="forall", domain=None, cap=None):
    """
    λ-согласованность концепта d с отношением: слой {x̄ : Γ(d, M(D))(x̄) ≥ λ}.

    Args:
        mode (str): forall - слой совпадает со всем носителем,
                    exists - слой непуст,
                    forall_on - слой содержит ⊤-слой домена D′

    Returns:
        ConsistencyResult: вердикт, слой и размер носителя
    """
    if mode not in MODES:
        raise InferenceError(f"Неизвестный режим согласованности: {mode}")
    result = gamma(d, diagram, cap)
    a = result.pointwise.algebra
    keys = list(enumerate_product(result.pointwise.supports, cap))
    fiber = [k for k in keys if a.leq(lam, result.pointwise.value(k))]
    if mode == "forall":
        holds = len(fiber) == len(keys)
    elif mode == "exists":
        holds = bool(fiber)
    else:
        if domain is None:
            raise InferenceError("Режим forall_on требует домен")
        dom = as_map(domain, cap)
        names = result.pointwise.port_names
        if set(dom.port_names) != set(names):
            raise InferenceError(f"Домен {dom.name} определен над другими переменными")
        fiber_set = set(fiber)
        holds = all(
            tuple(dict(zip(dom.port_names, k))[n] for n in names) in fiber_set
            for k in top_fiber(dom, cap))
    return ConsistencyResult(holds, fiber, len(keys))


# --- пулы гипотез ----------------------------------------------------------

@dataclass(frozen=True)
class Answer:
    concept: str
    domain: str = None


class HypothesisPool:
    """
    Конечный пул: отношения (диаграммы), концепты и домены D′.
    Все Ω-отображения определены над одними переменными.
    """

    def __init__(self, diagrams=None, concepts=None, domains=None, name="pool", cap=None):
        self.name = name
        self.cap = cap
        self.diagrams = {k: as_map(v, cap) for k, v in (diagrams or {}).items()}
        self.concepts = {k: as_map(v, cap) for k, v in (concepts or {}).items()}
        self.domains = {k: as_map(v, cap) for k, v in (domains or {}).items()}
        maps = list(self.diagrams.values()) + list(self.concepts.values()) + list(self.domains.values())
        if not maps:
            raise InferenceError(f"Пул {name} пуст")
        reference = maps[0]
        self.variables = [(p.name, p.oset) for p in reference.ports]
        self.names = [n for n, _ in self.variables]
        supports = {n: o.support for n, o in self.variables}
        for m in maps:
            if set(m.port_names) != set(self.names) or \
                    any(p.support != supports[p.name] for p in m.ports):
                raise InferenceError(f"{m.name}: переменные не совпадают с переменными пула {name}")
        self.algebra = reference.algebra
        self.keys = list(enumerate_product([o.support for _, o in self.variables], cap))
        self._dense = {}
        self._answers = {}
        logger.debug(f"Пул {name}: {len(self.diagrams)} отношений, {len(self.concepts)} концептов, "
                     f"{len(self.domains)} доменов")

    def dense(self, m):
        """Значения над всеми кортежами пула (в порядке переменных пула)."""
        if isinstance(m, dict):
            return m
        cached = self._dense.get(id(m))
        if cached is not None and cached[0] is m:
            return cached[1]
        m = as_map(m, self.cap)
        values = {k: m.value_at(dict(zip(self.names, k))) for k in self.keys}
        self._dense[id(m)] = (m, values)
        return values

    def to_map(self, values, name):
        return omega_map(self.algebra, self.variables, values, name=name)

    def fiber(self, domain):
        if domain is None:
            return self.keys
        return [k for k, v in self.dense(self.domains[domain]).items() if self.algebra.is_top(v)]

    def diagram(self, name):
        try:
            return self.diagrams[name]
        except KeyError:
            raise InferenceError(f"Отношение {name} отсутствует в пуле {self.name}")

    def answers(self, name, lam):
        key = (name, lam)
        if key not in self._answers:
            self._answers[key] = answers(self.diagram(name), lam, self)
        return self._answers[key]


def _le_on(a, f, g, keys):
    return all(a.leq(f[k], g[k]) for k in keys)


def answers(diagram, lam, pool):
    """
    ans_λ(D) в пределах пула: концепты, λ-согласованные с D на ⊤-слое
    некоторого домена (или на всем носителе, если доменов нет).

    Returns:
        list: Answer(концепт, домен)
    """
    a = pool.algebra
    target = pool.dense(diagram)
    result = []
    domains = list(pool.domains) or [None]
    for cname, concept in pool.concepts.items():
        values = pool.dense(concept)
        passing = {k for k in pool.keys if a.leq(lam, a.biimp(values[k], target[k]))}
        for dom in domains:
            if all(k in passing for k in pool.fiber(dom)):
                result.append(Answer(cname, dom))
    return result


def answer_cover(name, lam, pool):
    """Наименьший g с D ∈ □_λ g: ⋁ ответов, ограниченных их доменами."""
    a = pool.algebra
    cover = {k: a.bot for k in pool.keys}
    for ans in pool.answers(name, lam):
        values = pool.dense(pool.concepts[ans.concept])
        for k in pool.fiber(ans.domain):
            cover[k] = a.join(cover[k], values[k])
    return cover


def box(g, lam, pool):
    """□_λ g: отношения пула, все ответы которых ≤_{D′} g."""
    a = pool.algebra
    gv = pool.dense(g)
    return [name for name in pool.diagrams
            if all(_le_on(a, pool.dense(pool.concepts[ans.concept]), gv, pool.fiber(ans.domain))
                   for ans in pool.answers(name, lam))]


def diamond(g, lam, pool):
    """◇_λ g: отношения пула, у которых есть ответ f с g ≤_{D′} f."""
    a = pool.algebra
    gv = pool.dense(g)
    return [name for name in pool.diagrams
            if any(_le_on(a, gv, pool.dense(pool.concepts[ans.concept]), pool.fiber(ans.domain))
                   for ans in pool.answers(name, lam))]


def interior(g, lam, pool):
    """int_λ(g): ⋁ покрытий ответов отношений из □_λ g."""
    a = pool.algebra
    result = {k: a.bot for k in pool.keys}
    for name in box(g, lam, pool):
        cover = answer_cover(name, lam, pool)
        result = {k: a.join(result[k], cover[k]) for k in pool.keys}
    return pool.to_map(result, "int")


def closure(g, lam, pool):
    """cl_λ(g): ⋀ по ответам f_{D′} с g ≤_{D′} f от f вне D′ дополненного ⊤."""
    a = pool.algebra
    gv = pool.dense(g)
    result = {k: a.top for k in pool.keys}
    for name in pool.diagrams:
        for ans in pool.answers(name, lam):
            values = pool.dense(pool.concepts[ans.concept])
            fiber = pool.fiber(ans.domain)
            if not _le_on(a, gv, values, fiber):
                continue
            for k in fiber:
                result[k] = a.meet(result[k], values[k])
    return pool.to_map(result, "cl")


def answers_of_set(relations, lam, pool):
    """ans_λ(U): ⋁ покрытий ответов отношений из U."""
    a = pool.algebra
    result = {k: a.bot for k in pool.keys}
    for name in relations:
        cover = answer_cover(name, lam, pool)
        result = {k: a.join(result[k], cover[k]) for k in pool.keys}
    return pool.to_map(result, "ans")


def mod_lambda(relations, lam, pool):
    """mod_λ(U): ⋀ концептов пула g с □_λ g ⊆ U."""
    a = pool.algebra
    relations = set(relations)
    result = {k: a.top for k in pool.keys}
    for cname, concept in pool.concepts.items():
        if set(box(concept, lam, pool)) <= relations:
            values = pool.dense(concept)
            result = {k: a.meet(result[k], values[k]) for k in pool.keys}
    return pool.to_map(result, "mod")


def consequence_closure(relations, lam, pool):
    """A_λ(U) = □_λ(ans_λ(U))."""
    return box(answers_of_set(relations, lam, pool), lam, pool)


def codified_by(relations, lam, pool):
    """C_λ(U) = ◇_λ(mod_λ(U))."""
    return diamond(mod_lambda(relations, lam, pool), lam, pool)


def entails(relations, name, lam, pool):
    """U ⊢_λ D."""
    relations = list(relations)
    unknown = [r for r in relations + [name] if r not in pool.diagrams]
    if unknown:
        raise InferenceError(f"Отношения вне пула: {unknown}")
    return name in consequence_closure(relations, lam, pool)


# --- λ-RL ------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Interior:
    body: object

    def __str__(self):
        return f"[I]{_wrap(self.body)}"


@dataclass(frozen=True)
class Closure:
    body: object

    def __str__(self):
        return f"[C]{_wrap(self.body)}"


BINARY_SYMBOLS = {"tensor": "&", "implies": "->", "meet": "/\\", "join": "\\/"}


@dataclass(frozen=True)
class Binary:
    op: str
    left: object
    right: object

    def __post_init__(self):
        if self.op not in BINARY_SYMBOLS:
            raise InferenceError(f"Неизвестная связка формулы: {self.op}")

    def __str__(self):
        return f"{_wrap(self.left)} {BINARY_SYMBOLS[self.op]} {_wrap(self.right)}"


def _wrap(node):
    return f"({node})" if isinstance(node, Binary) else str(node)


def parse_formula(text):
    """Разбор формулы λ-RL той же грамматикой выражений, что и relation."""
    from .parser import parse_expression
    return parse_expression(text)


def formula_atoms(formula):
    if isinstance(formula, Atom):
        return [formula.name]
    if isinstance(formula, (Interior, Closure)):
        return formula_atoms(formula.body)
    if isinstance(formula, Binary):
        return formula_atoms(formula.left) + formula_atoms(formula.right)
    raise InferenceError(f"Некорректная формула: {formula!r}")


def rl_degree(formula, g, lam, pool):
    """
    Степень выполнимости: атом - качество Γ(g, M(D)), [I]/[C] - степень
    для int_λ(g)/cl_λ(g), связки - операция алгебры над степенями.
    """
    a = pool.algebra
    if isinstance(formula, Atom):
        return gamma(g, pool.diagram(formula.name), pool.cap).quality
    if isinstance(formula, Interior):
        return rl_degree(formula.body, interior(g, lam, pool), lam, pool)
    if isinstance(formula, Closure):
        return rl_degree(formula.body, closure(g, lam, pool), lam, pool)
    if isinstance(formula, Binary):
        op = "residuum" if formula.op == "implies" else formula.op
        return a.apply(op, rl_degree(formula.left, g, lam, pool),
                       rl_degree(formula.right, g, lam, pool))
    raise InferenceError(f"Некорректная формула: {formula!r}")


def eval_rl(formula, g, lam, pool, split=None):
    """
    g ⊨_λ φ.

    Args:
        split (tuple): Пороги (λ₀, λ₁) для связки верхнего уровня; тогда
                       проверяются g ⊨_λ₀ φ₀ и g ⊨_λ₁ φ₁

    Returns:
        bool: Вердикт
    """
    a = pool.algebra
    if split is not None:
        if not isinstance(formula, Binary):
            raise InferenceError("Разложение порога применимо только к связке")
        lam0, lam1 = split
        return eval_rl(formula.left, g, lam0, pool) and eval_rl(formula.right, g, lam1, pool)
    return a.leq(lam, rl_degree(formula, g, lam, pool))
