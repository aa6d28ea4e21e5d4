"""
Мульти-диаграммы: пределы и копределы, производные конструкции
(уравнитель, расслоенное произведение, коуравнитель, кодекартов квадрат),
степень коммутативности, классификаторы и обратная конструкция
концепт -> диаграмма.
"""

import logging
import math
from dataclasses import dataclass

from .algebra import require_divisible
from .errors import DiagramError
from .relation import (
    MultiMorphism, Port, SOURCE, TARGET, is_faithful, _totality_witness, omega_map,
)
from .utils import check_cap, enumerate_product

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Arrow:
    id: str
    morphism: MultiMorphism
    sources: tuple
    targets: tuple

    @property
    def vertices(self):
        return self.sources + self.targets


class MultiDiagram:
    """
    Мультиграф: вершины связаны с Ω-множествами, мульти-стрелки -
    с мульти-морфизмами. s(D) - выделенные вершины-источники.
    """

    def __init__(self, algebra, vertices, arrows=(), sources=(), name=None):
        self.algebra = algebra
        self.name = name or "D"
        self.vertices = dict(vertices)
        if len(self.vertices) != len(list(vertices)):
            raise DiagramError(f"{self.name}: повторяющиеся идентификаторы вершин")
        self.arrows = []
        seen = set()
        for arrow in arrows:
            if not isinstance(arrow, Arrow):
                arrow = Arrow(arrow[0], arrow[1], tuple(arrow[2]), tuple(arrow[3]))
            if arrow.id in seen:
                raise DiagramError(f"{self.name}: повторяющийся идентификатор стрелки {arrow.id}")
            seen.add(arrow.id)
            self._check_arrow(arrow)
            self.arrows.append(arrow)
        self.sources = tuple(sources)
        for v in self.sources:
            if v not in self.vertices:
                raise DiagramError(f"{self.name}: источник {v} не является вершиной")

    def _check_arrow(self, arrow):
        m = arrow.morphism
        if len(arrow.sources) != len(m.sources) or len(arrow.targets) != len(m.targets):
            raise DiagramError(
                f"{self.name}: стрелка {arrow.id} ожидает {len(m.sources)} -> {len(m.targets)} "
                f"вершин, получено {len(arrow.sources)} -> {len(arrow.targets)}")
        for v, port in zip(arrow.vertices, m.ports):
            if v not in self.vertices:
                raise DiagramError(f"{self.name}: стрелка {arrow.id} ссылается на неизвестную вершину {v}")
            if self.vertices[v].sign != port.sign:
                raise DiagramError(
                    f"{self.name}: стрелка {arrow.id}: вершина {v} имеет знак "
                    f"{self.vertices[v].sign}, ожидается {port.sign}")

    def __repr__(self):
        return f"MultiDiagram({self.name}: {len(self.vertices)} вершин, {len(self.arrows)} стрелок)"

    def with_sources(self, sources):
        return MultiDiagram(self.algebra, self.vertices, self.arrows, sources, self.name)

    def ordered_vertices(self):
        """Порядок портов предела: сначала s(D), затем остальные вершины."""
        rest = [v for v in self.vertices if v not in self.sources]
        return list(self.sources) + rest

    def tuple_count(self):
        return math.prod(len(o.support) for o in self.vertices.values())


def _arrow_value(arrow, assignment):
    return arrow.morphism.value(tuple(assignment[v] for v in arrow.vertices))


def _evaluate(diagram, combine, cap=None):
    """
    Перебор кортежей с отсечением по ⊥. Для combine='tensor' значения стрелок
    перемножаются по мере назначения вершин, для 'join' объединяются в конце.
    """
    a = diagram.algebra
    order = diagram.ordered_vertices()
    check_cap(diagram.tuple_count(), cap)
    position = {v: i for i, v in enumerate(order)}
    ready = [[] for _ in order]
    for arrow in diagram.arrows:
        if arrow.vertices:
            ready[max(position[v] for v in arrow.vertices)].append(arrow)
    closed = [arrow for arrow in diagram.arrows if not arrow.vertices]

    table = {}
    base = a.top
    if combine == "tensor":
        for arrow in closed:
            base = a.tensor(base, arrow.morphism.value(()))
    if a.is_bot(base):
        return order, table

    assignment = {}
    osets = [diagram.vertices[v] for v in order]

    def finish(value):
        if combine == "join":
            if diagram.arrows:
                value = a.tensor(value, a.join_all(
                    _arrow_value(arrow, assignment) for arrow in diagram.arrows))
        if not a.is_bot(value):
            table[tuple(assignment[v] for v in order)] = value

    def extend(i, value):
        if i == len(order):
            finish(value)
            return
        v = order[i]
        oset = osets[i]
        for element in oset.support:
            assignment[v] = element
            current = a.tensor(value, oset.sim(element, element))
            if combine == "tensor":
                for arrow in ready[i]:
                    if a.is_bot(current):
                        break
                    current = a.tensor(current, _arrow_value(arrow, assignment))
            if not a.is_bot(current):
                extend(i + 1, current)
        assignment.pop(v, None)

    extend(0, base)
    return order, table


def _as_morphism(diagram, order, table, kind):
    ports = [Port(v, SOURCE if v in diagram.sources else TARGET, diagram.vertices[v])
             for v in order]
    return MultiMorphism(diagram.algebra, ports, table, name=f"{kind} {diagram.name}")


def limit(diagram, cap=None):
    """
    Предел: Lim D(x̄) = [x̄] ⊗ ⊗_f D(f)(x̄|f). Порты результата - вершины,
    s(D) источники, остальные цели.

    Raises:
        CapExceededError: если число кортежей превышает предел
    """
    order, table = _evaluate(diagram, "tensor", cap)
    logger.debug(f"Предел {diagram.name}: {len(table)} ненулевых кортежей")
    return _as_morphism(diagram, order, table, "Lim")


def colimit(diagram, cap=None):
    """Копредел: [x̄] ⊗ ⋁_f D(f)(x̄|f); для дискретной диаграммы равен пределу."""
    order, table = _evaluate(diagram, "join", cap)
    return _as_morphism(diagram, order, table, "coLim")


def project_to_sources(diagram, morphism):
    """⋁ по вершинам, не входящим в s(D): Ω-отображение над источниками."""
    a = diagram.algebra
    n = len(diagram.sources)
    table = {}
    for key, value in morphism.items():
        head = key[:n]
        table[head] = a.join(table.get(head, a.bot), value)
    return omega_map(a, [(v, diagram.vertices[v]) for v in diagram.sources], table,
                     name=f"{morphism.name}|s")


def project_limit(diagram, cap=None):
    return project_to_sources(diagram, limit(diagram, cap))


def project_colimit(diagram, cap=None):
    return project_to_sources(diagram, colimit(diagram, cap))


def _parallel(r, s):
    if [(p.sign, p.role) for p in r.ports] != [(p.sign, p.role) for p in s.ports]:
        raise DiagramError(f"{r.name} и {s.name} не параллельны")


def kan_construct(kind, r, s, cap=None):
    """
    Производные конструкции как пределы/копределы малых диаграмм:
    equalizer [x,y]⊗R⊗S, coequalizer [x,y]⊗(R∨S), pullback R: X⇀Z, S: Y⇀Z
    с общей целью, pushout R: Z⇀X, S: Z⇀Y с общим источником.
    """
    a = r.algebra
    if kind in ("equalizer", "coequalizer"):
        _parallel(r, s)
        vertices = {p.name: p.oset for p in r.ports}
        ids = tuple(p.name for p in r.ports)
        n = len(r.sources)
        arrows = [Arrow("R", r, ids[:n], ids[n:]), Arrow("S", s, ids[:n], ids[n:])]
        d = MultiDiagram(a, vertices, arrows, ids[:n], name=kind)
        return limit(d, cap) if kind == "equalizer" else colimit(d, cap)
    if kind in ("pullback", "pushout"):
        shared_r = r.targets if kind == "pullback" else r.sources
        shared_s = s.targets if kind == "pullback" else s.sources
        if [p.sign for p in shared_r] != [p.sign for p in shared_s]:
            raise DiagramError(f"{kind}: {r.name} и {s.name} не имеют общей "
                               f"{'цели' if kind == 'pullback' else 'области'}")
        own_r = r.sources if kind == "pullback" else r.targets
        own_s = s.sources if kind == "pullback" else s.targets
        vertices = {}
        r_ids = tuple(f"r.{p.name}" for p in own_r)
        s_ids = tuple(f"s.{p.name}" for p in own_s)
        z_ids = tuple(f"z.{p.name}" for p in shared_r)
        for vid, p in zip(r_ids + s_ids + z_ids, own_r + own_s + shared_r):
            vertices[vid] = p.oset
        if kind == "pullback":
            arrows = [Arrow("R", r, r_ids, z_ids), Arrow("S", s, s_ids, z_ids)]
            d = MultiDiagram(a, vertices, arrows, r_ids + s_ids, name=kind)
            return limit(d, cap)
        arrows = [Arrow("R", r, z_ids, r_ids), Arrow("S", s, z_ids, s_ids)]
        d = MultiDiagram(a, vertices, arrows, z_ids, name=kind)
        return colimit(d, cap)
    raise DiagramError(f"Неизвестная конструкция: {kind}")


@dataclass
class CommutativityReport:
    degree: object
    commutative: bool
    lambda_commutative: object
    witness: tuple
    checked: int


def commutativity_degree(diagram, sources=None, restrict=None, cap=None):
    """
    Степень коммутативности: ⋀ по кортежам источников s̄ от
    (⋁_n̄ Lim D(s̄,n̄)) ⇔ (⋁_n̄ [s̄,n̄]).

    Args:
        diagram (MultiDiagram): Диаграмма
        sources (list): Вершины-источники (по умолчанию s(D))
        restrict (callable): Предикат на словаре вершина -> элемент

    Returns:
        CommutativityReport: степень, флаг коммутативности и худший кортеж
    """
    a = diagram.algebra
    if sources is not None:
        diagram = diagram.with_sources(sources)
    projected = project_limit(diagram, cap)
    rest = [v for v in diagram.vertices if v not in diagram.sources]
    hidden = a.tensor_all(
        a.join_all(diagram.vertices[v].sim(e, e) for e in diagram.vertices[v].support)
        for v in rest)
    degree = a.top
    witness = None
    checked = 0
    source_osets = [diagram.vertices[v] for v in diagram.sources]
    for key in enumerate_product([o.support for o in source_osets], cap):
        if restrict is not None and not restrict(dict(zip(diagram.sources, key))):
            continue
        checked += 1
        rhs = a.tensor(a.tensor_all(o.sim(e, e) for o, e in zip(source_osets, key)), hidden)
        value = a.biimp(projected.value(key), rhs)
        if witness is None or not a.leq(degree, value):
            witness = key
        degree = a.meet(degree, value)
    commutative = a.is_top(degree)
    logger.info(f"📊 Степень коммутативности {diagram.name}: {degree} ({checked} кортежей)")
    return CommutativityReport(degree, commutative, degree, witness, checked)


def classifier_from_diagram(diagram, target, observations, cap=None):
    """
    Классификатор (Lim D)(D(v1) | a2,…,an)(x) = [ā] ⇒ ⊗_f D(f)(x, ā).

    Args:
        diagram (MultiDiagram): Диаграмма с тотальными и точными стрелками
        target (str): Вершина v1
        observations (dict): Значения остальных вершин

    Returns:
        MultiMorphism: Ω-отображение над D(v1)
    """
    a = diagram.algebra
    require_divisible(a, DiagramError, "Классификатор")
    if target not in diagram.vertices:
        raise DiagramError(f"Неизвестная вершина {target}")
    others = [v for v in diagram.vertices if v != target]
    missing = [v for v in others if v not in observations]
    if missing:
        raise DiagramError(f"Не заданы наблюдения для вершин {missing}")
    for v in others:
        if observations[v] not in diagram.vertices[v]:
            raise DiagramError(f"Наблюдение {observations[v]!r} вне носителя вершины {v}")
    for arrow in diagram.arrows:
        witness = _totality_witness(arrow.morphism)
        if witness is not None or not is_faithful(arrow.morphism):
            raise DiagramError(f"Стрелка {arrow.id} должна быть тотальной и точной")

    weight = a.tensor_all(diagram.vertices[v].extent(observations[v]) for v in others)
    oset = diagram.vertices[target]
    table = {}
    assignment = dict(observations)
    for x in oset.support:
        assignment[target] = x
        body = a.tensor_all(_arrow_value(arrow, assignment) for arrow in diagram.arrows)
        table[(x,)] = a.residuum(weight, body)
    return omega_map(a, [(target, oset)], table, name=f"{diagram.name}({target}|…)")


def is_simple_classifier(diagram, target):
    """Цель не является источником стрелок и каждая стрелка имеет один источник."""
    return all(target not in arrow.sources and len(arrow.sources) == 1
               for arrow in diagram.arrows)


def concept_to_diagram(g, name=None):
    """
    Обратная конструкция: для концепта g ≤ [x̄] строит однострелочную
    диаграмму A₀ ⇀ A₁…A_n с таблицей f(x̄) = [x̄] ⇒ g(x̄), так что Lim D = g.
    """
    a = g.algebra
    require_divisible(a, DiagramError, "Построение диаграммы по концепту")
    if not g.ports:
        raise DiagramError("Концепт без портов не задает диаграмму")
    for key, value in g.items():
        if not a.leq(value, g.extent(key)):
            raise DiagramError(f"Концепт превышает протяженность в кортеже {key}")
    ports = [Port(p.name, SOURCE if i == 0 else TARGET, p.oset) for i, p in enumerate(g.ports)]
    table = {}
    for key in enumerate_product(g.supports):
        table[key] = a.residuum(g.extent(key), g.value(key))
    f = MultiMorphism(a, ports, table, name=f"[x]⇒{g.name}")
    ids = tuple(p.name for p in g.ports)
    return MultiDiagram(a, {p.name: p.oset for p in g.ports},
                        [Arrow("f", f, ids[:1], ids[1:])], ids, name=name or f"D({g.name})")
