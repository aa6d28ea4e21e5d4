"""
Ω-множества с подобиями и мульти-морфизмы (Ω-значные таблицы с портами):
композиция, транспонирование, классификация, байесовские условные
распределения и соединение по ключам.
"""

import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass

from .algebra import require_divisible
from .errors import RelationError, AmbiguousMatchError
from .utils import check_cap, dedupe_names, enumerate_product

logger = logging.getLogger(__name__)

SOURCE = "source"
TARGET = "target"


class OmegaSet:
    """
    Конечный носитель с Ω-значным симметричным подобием [a=b].
    Диагональ подобия - протяженность [a].
    """

    def __init__(self, sign, support, algebra, sim, name=None, violations=()):
        self.sign = sign
        self.name = name or sign
        self.support = tuple(support)
        self.algebra = algebra
        self._sim = dict(sim)
        self._index = {a: i for i, a in enumerate(self.support)}
        self.violations = tuple(violations)

    def __repr__(self):
        return f"OmegaSet({self.name}:{self.sign}, |{len(self.support)}|)"

    def __contains__(self, a):
        return a in self._index

    def index(self, a):
        try:
            return self._index[a]
        except KeyError:
            raise RelationError(f"Элемент {a!r} не принадлежит носителю {self.name}")

    def sim(self, a, b):
        return self._sim.get((a, b), self.algebra.bot)

    def extent(self, a):
        self.index(a)
        return self.sim(a, a)

    def is_crisp(self):
        a = self.algebra
        return all(
            a.eq(self.sim(x, y), a.top if x == y else a.bot)
            for x in self.support for y in self.support
        )

    def same_as(self, other):
        if self.support != other.support:
            return False
        return all(
            self.algebra.eq(self.sim(x, y), other.sim(x, y))
            for x in self.support for y in self.support
        )


def make_omega_set(sign, support, algebra, entries=(), strict=False, name=None):
    """
    Строит Ω-множество. Не заданные элементы диагонали равны ⊤, прочие ⊥;
    таблица симметризуется.

    Args:
        sign (str): Знак, который интерпретирует множество
        support (list): Упорядоченный носитель
        algebra (Algebra): Алгебра значений
        entries (list): Тройки (a, b, значение)
        strict (bool): Нарушение ⊗-транзитивности считать ошибкой

    Returns:
        OmegaSet: Ω-множество; нарушения транзитивности в .violations

    Raises:
        RelationError: несимметричные значения, неизвестные элементы, strict-нарушения
    """
    support = tuple(support)
    if len(set(support)) != len(support):
        raise RelationError(f"Повторяющиеся элементы в носителе {name or sign}")
    known = set(support)
    explicit = {}
    for a, b, value in entries:
        if a not in known or b not in known:
            raise RelationError(f"Подобие {name or sign}: неизвестный элемент в ({a}, {b})")
        value = algebra.check_value(value)
        if (b, a) in explicit and not algebra.eq(explicit[(b, a)], value):
            raise RelationError(
                f"Подобие {name or sign} несимметрично: [{a}={b}]={value}, [{b}={a}]={explicit[(b, a)]}"
            )
        explicit[(a, b)] = value

    sim = {}
    for x in support:
        sim[(x, x)] = algebra.top
    for (a, b), value in explicit.items():
        sim[(a, b)] = value
        sim[(b, a)] = value
    sim = {k: v for k, v in sim.items() if not algebra.is_bot(v)}

    violations = _transitivity_violations(support, algebra, sim)
    if violations:
        a, b, c = violations[0]
        message = (f"Подобие {name or sign} не ⊗-транзитивно: "
                   f"[{a}={b}]⊗[{b}={c}] > [{a}={c}] ({len(violations)} нарушений)")
        if strict:
            raise RelationError(message)
        logger.warning(f"⚠️ {message}")
    return OmegaSet(sign, support, algebra, sim, name=name, violations=violations)


def _transitivity_violations(support, algebra, sim):
    bot = algebra.bot
    result = []
    for a in support:
        for b in support:
            ab = sim.get((a, b), bot)
            if algebra.is_bot(ab):
                continue
            for c in support:
                lhs = algebra.tensor(ab, sim.get((b, c), bot))
                if not algebra.leq(lhs, sim.get((a, c), bot)):
                    result.append((a, b, c))
    return result


def crisp_omega_set(sign, support, algebra, name=None):
    return make_omega_set(sign, support, algebra, name=name)


def algebra_omega_set(algebra, sign="Omega"):
    """Носитель конечной алгебры как Ω-множество с подобием x⇔y."""
    if not algebra.is_finite:
        raise RelationError(f"Носитель {algebra.describe()} бесконечен, Ω-множество не построить")
    support = algebra.carrier
    sim = {}
    for x in support:
        for y in support:
            v = algebra.biimp(x, y)
            if not algebra.is_bot(v):
                sim[(x, y)] = v
    return OmegaSet(sign, support, algebra, sim, name=sign)


def extent(alpha, a):
    return alpha.extent(a)


def globals_of(alpha):
    """Глобальные элементы: [a] = ⊤."""
    return [a for a in alpha.support if alpha.algebra.is_top(alpha.sim(a, a))]


def product_omega_sets(*osets):
    """Произведение Ω-множеств: подобие - ⊗ покомпонентных подобий."""
    if not osets:
        raise RelationError("Произведение требует хотя бы одно Ω-множество")
    algebra = osets[0].algebra
    support = list(itertools.product(*(o.support for o in osets)))
    check_cap(len(support) ** 2)
    sim = {}
    for x in support:
        for y in support:
            v = algebra.tensor_all(o.sim(a, b) for o, a, b in zip(osets, x, y))
            if not algebra.is_bot(v):
                sim[(x, y)] = v
    sign = "*".join(o.sign for o in osets)
    return OmegaSet(sign, support, algebra, sim, name=sign)


def observable_projection(alpha, keep):
    """
    Наблюдаемое описание: подобие на сохраняемых атрибутах равно
    супремуму полного подобия по всем дополнениям скрытых атрибутов.

    Args:
        alpha (OmegaSet): Множество над произведением атрибутов (кортежи)
        keep (list): Индексы сохраняемых атрибутов

    Returns:
        OmegaSet: Проекция
    """
    if not keep:
        raise RelationError("Список сохраняемых атрибутов пуст")
    width = len(alpha.support[0]) if alpha.support else 0
    for k in keep:
        if not 0 <= k < width:
            raise RelationError(f"Атрибут {k} вне диапазона 0..{width - 1}")
    algebra = alpha.algebra
    project = lambda x: tuple(x[k] for k in keep)
    support = list(dict.fromkeys(project(x) for x in alpha.support))
    sim = {}
    for x in alpha.support:
        for y in alpha.support:
            key = (project(x), project(y))
            sim[key] = algebra.join(sim.get(key, algebra.bot), alpha.sim(x, y))
    sim = {k: v for k, v in sim.items() if not algebra.is_bot(v)}
    return OmegaSet(alpha.sign, support, algebra, sim, name=f"{alpha.name}|{keep}")


@dataclass(frozen=True)
class Port:
    name: str
    role: str
    oset: OmegaSet

    @property
    def sign(self):
        return self.oset.sign

    @property
    def support(self):
        return self.oset.support

    def flipped(self):
        return Port(self.name, TARGET if self.role == SOURCE else SOURCE, self.oset)

    def with_role(self, role):
        return Port(self.name, role, self.oset)


class MultiMorphism:
    """
    Ω-значная таблица над произведением носителей портов.
    Порты упорядочены: сначала источники, затем цели. Хранятся только
    значения, отличные от ⊥.
    """

    def __init__(self, algebra, ports, table=None, name=None):
        self.algebra = algebra
        self.name = name
        ports = list(ports)
        order = [i for i, p in enumerate(ports) if p.role == SOURCE] + \
                [i for i, p in enumerate(ports) if p.role == TARGET]
        if len(order) != len(ports):
            raise RelationError("Роль порта должна быть source или target")
        self.ports = tuple(ports[i] for i in order)
        names = [p.name for p in self.ports]
        if len(set(names)) != len(names):
            raise RelationError(f"Повторяющиеся имена портов: {names}")
        self._table = {}
        for key, value in (table or {}).items():
            key = tuple(key)
            if len(key) != len(ports):
                raise RelationError(f"Кортеж {key} не соответствует арности {len(ports)}")
            for port, element in zip(ports, key):
                if element not in port.oset:
                    raise RelationError(
                        f"Элемент {element!r} не принадлежит носителю порта {port.name}")
            value = algebra.check_value(value)
            if not algebra.is_bot(value):
                self._table[tuple(key[i] for i in order)] = value

    def __repr__(self):
        label = self.name or "f"
        src = ",".join(p.name for p in self.sources)
        tgt = ",".join(p.name for p in self.targets)
        return f"MultiMorphism({label}: {src} ⇀ {tgt}, {len(self._table)} значений)"

    @property
    def sources(self):
        return tuple(p for p in self.ports if p.role == SOURCE)

    @property
    def targets(self):
        return tuple(p for p in self.ports if p.role == TARGET)

    @property
    def port_names(self):
        return [p.name for p in self.ports]

    @property
    def supports(self):
        return [p.support for p in self.ports]

    def value(self, key):
        return self._table.get(tuple(key), self.algebra.bot)

    def value_at(self, assignment):
        """Значение по словарю имя порта -> элемент."""
        return self.value(tuple(assignment[p.name] for p in self.ports))

    def sort_key(self, key):
        return tuple(p.oset.index(e) for p, e in zip(self.ports, key))

    def items(self):
        """Значения, отличные от ⊥, в лексикографическом порядке носителей."""
        return sorted(self._table.items(), key=lambda kv: self.sort_key(kv[0]))

    def all_items(self, cap=None):
        """Все кортежи (включая ⊥) в лексикографическом порядке."""
        for key in enumerate_product(self.supports, cap):
            yield key, self.value(key)

    def extent(self, key):
        return self.algebra.tensor_all(p.oset.sim(e, e) for p, e in zip(self.ports, key))

    def with_ports(self, ports, name=None):
        """Та же таблица с новыми описаниями портов (в том же порядке)."""
        ports = list(ports)
        return MultiMorphism(self.algebra, ports, dict(self._table), name=name or self.name)

    def is_predicate(self):
        return not self.targets


def omega_map(algebra, ports, table, name=None):
    """Ω-отображение: все порты - источники (значение в Ω)."""
    return MultiMorphism(
        algebra, [Port(n, SOURCE, o) for n, o in ports], table, name=name)


def similarity_morphism(oset, source_name=None, target_name=None):
    """Подобие [·=·] как мульти-морфизм A ⇀ A."""
    src = source_name or oset.sign
    tgt = target_name or f"{oset.sign}'"
    table = {(a, b): oset.sim(a, b) for a in oset.support for b in oset.support}
    return MultiMorphism(
        oset.algebra, [Port(src, SOURCE, oset), Port(tgt, TARGET, oset)], table,
        name=f"[=]_{oset.name}")


def crisp_identity(oset, source_name=None, target_name=None):
    """Четкая единица 1_A."""
    a = oset.algebra
    src = source_name or oset.sign
    tgt = target_name or f"{oset.sign}'"
    table = {(x, x): a.top for x in oset.support}
    return MultiMorphism(a, [Port(src, SOURCE, oset), Port(tgt, TARGET, oset)], table,
                         name=f"1_{oset.name}")


def map_morphism(mapping, alpha, beta, name=None):
    """χ_f для отображения f: A → B: χ_f(a,b) = [a]⊗[f(a)=b]."""
    a = alpha.algebra
    table = {}
    for x in alpha.support:
        if x not in mapping:
            raise RelationError(f"Отображение не определено на {x!r}")
        for y in beta.support:
            table[(x, y)] = a.tensor(alpha.extent(x), beta.sim(mapping[x], y))
    return MultiMorphism(
        a, [Port(alpha.sign, SOURCE, alpha), Port(beta.sign + "'" if beta.sign == alpha.sign
                                                  else beta.sign, TARGET, beta)],
        table, name=name or "χ")


def _contraction(f, g):
    f_targets = defaultdict(list)
    for i, p in enumerate(f.ports):
        if p.role == TARGET:
            f_targets[p.sign].append(i)
    g_sources = defaultdict(list)
    for i, p in enumerate(g.ports):
        if p.role == SOURCE:
            g_sources[p.sign].append(i)
    pairs = []
    for sign, f_idx in f_targets.items():
        g_idx = g_sources.get(sign)
        if not g_idx:
            continue
        if len(f_idx) > 1 or len(g_idx) > 1:
            raise AmbiguousMatchError(
                f"Знак {sign} встречается несколько раз на границе свертки; "
                "переименуйте порты")
        fi, gi = f_idx[0], g_idx[0]
        if f.ports[fi].support != g.ports[gi].support:
            raise RelationError(f"Носители знака {sign} в композиции не совпадают")
        pairs.append((fi, gi))
    return pairs


def compose(f, g, name=None):
    """
    Композиция мульти-морфизмов: свертка по целям f и источникам g
    с одинаковыми знаками, значение ⋁ по свертке f⊗g. Без общих знаков -
    тензорное произведение (a,c,b,d).

    Returns:
        MultiMorphism: порты - источники f, новые источники g, оставшиеся цели f, цели g
    """
    if f.algebra is not g.algebra and f.algebra.describe() != g.algebra.describe():
        raise RelationError("Композиция мульти-морфизмов над разными алгебрами")
    algebra = f.algebra
    pairs = _contraction(f, g)
    f_contracted = {fi for fi, _ in pairs}
    g_contracted = {gi for _, gi in pairs}

    f_src = [i for i, p in enumerate(f.ports) if p.role == SOURCE]
    f_tgt = [i for i, p in enumerate(f.ports) if p.role == TARGET and i not in f_contracted]
    g_src = [i for i, p in enumerate(g.ports) if p.role == SOURCE and i not in g_contracted]
    g_tgt = [i for i, p in enumerate(g.ports) if p.role == TARGET]

    layout = [("f", i) for i in f_src] + [("g", i) for i in g_src] + \
             [("f", i) for i in f_tgt] + [("g", i) for i in g_tgt]
    raw_ports = [(f if side == "f" else g).ports[i] for side, i in layout]
    names = dedupe_names([p.name for p in raw_ports])
    ports = [Port(n, p.role, p.oset) for n, p in zip(names, raw_ports)]

    grouped = defaultdict(list)
    for key, value in g.items():
        grouped[tuple(key[gi] for _, gi in pairs)].append((key, value))

    table = {}
    for f_key, f_value in f.items():
        contraction_key = tuple(f_key[fi] for fi, _ in pairs)
        for g_key, g_value in grouped.get(contraction_key, ()):
            value = algebra.tensor(f_value, g_value)
            if algebra.is_bot(value):
                continue
            out = tuple((f_key if side == "f" else g_key)[i] for side, i in layout)
            table[out] = algebra.join(table.get(out, algebra.bot), value)
    logger.debug(f"Композиция {f.name}⊗{g.name}: свертка по {len(pairs)} знакам, "
                 f"{len(table)} ненулевых значений")
    return MultiMorphism(algebra, ports, table, name=name)


def transpose(f):
    """f°: роли всех портов меняются местами, f°(b,a) = f(a,b)."""
    ports = [p.flipped() for p in f.ports]
    table = {key: value for key, value in f.items()}
    return MultiMorphism(f.algebra, ports, table, name=f"{f.name}°" if f.name else None)


def rerole(f, sources):
    """Назначает источниками порты с указанными именами, остальные - цели."""
    sources = set(sources)
    unknown = sources - set(f.port_names)
    if unknown:
        raise RelationError(f"Неизвестные порты: {sorted(unknown)}")
    ports = [p.with_role(SOURCE if p.name in sources else TARGET) for p in f.ports]
    return MultiMorphism(f.algebra, ports, dict(f.items()), name=f.name)


def align_ports(f, g, by_role=True):
    """
    Сопоставляет порты g портам f жадно по (роль, знак).

    Returns:
        list: Для каждого порта f индекс порта g, или None если сопоставление невозможно
    """
    if len(f.ports) != len(g.ports):
        return None
    used = set()
    mapping = []
    for p in f.ports:
        for j, q in enumerate(g.ports):
            if j in used or q.sign != p.sign or (by_role and q.role != p.role):
                continue
            if q.support != p.support:
                continue
            used.add(j)
            mapping.append(j)
            break
        else:
            return None
    return mapping


def _compare(f, g, relation, by_role=True):
    mapping = align_ports(f, g, by_role)
    if mapping is None:
        return False
    a = f.algebra
    g_table = {tuple(key[j] for j in mapping): v for key, v in g.items()}
    keys = set(dict(f.items())) | set(g_table)
    return all(relation(f.value(k), g_table.get(k, a.bot)) for k in keys)


def equal(f, g, by_role=True):
    """Равенство таблиц в пределах ε после выравнивания портов."""
    return _compare(f, g, f.algebra.eq, by_role)


def leq(f, g, by_role=True):
    return _compare(f, g, f.algebra.leq, by_role)


def _row_tuples(ports, cap=None):
    return list(enumerate_product([p.support for p in ports], cap))


def _tuple_sim(ports, x, y):
    algebra = ports[0].oset.algebra if ports else None
    return algebra.tensor_all(p.oset.sim(a, b) for p, a, b in zip(ports, x, y))


def _split(f):
    n = len(f.sources)
    return n, (lambda key: (key[:n], key[n:]))


def _side_similarity(f, ports, oset):
    """Подобие на стороне: заданное Ω-множество или произведение подобий портов."""
    a = f.algebra
    if oset is None:
        if not ports:
            return lambda x, y: a.top
        return lambda x, y: _tuple_sim(ports, x, y)
    if len(ports) != 1 or oset.sign != ports[0].sign:
        raise RelationError(
            f"Знак {oset.sign} не соответствует портам {[p.sign for p in ports]}")
    return lambda x, y: oset.sim(x[0], y[0])


def _fill(f):
    """Плотная матрица f(a,b) по кортежам источников и целей."""
    rows = _row_tuples(f.sources)
    cols = _row_tuples(f.targets)
    check_cap(len(rows) * len(cols))
    matrix = {(r, c): f.value(r + c) for r in rows for c in cols}
    return rows, cols, matrix


def is_total(f, alpha=None):
    """[a]_α = ⋁_b f(a,b) для всех a."""
    return _totality_witness(f, alpha) is None


def _totality_witness(f, alpha=None):
    a = f.algebra
    sim_a = _side_similarity(f, f.sources, alpha)
    rows, cols, m = _fill(f)
    for r in rows:
        if not a.eq(sim_a(r, r), a.join_all(m[(r, c)] for c in cols)):
            return r
    return None


def is_faithful(f, beta=None):
    """[b]_β = ⋁_a f(a,b) для всех b."""
    a = f.algebra
    sim_b = _side_similarity(f, f.targets, beta)
    rows, cols, m = _fill(f)
    return all(a.eq(sim_b(c, c), a.join_all(m[(r, c)] for r in rows)) for c in cols)


@dataclass
class Classification:
    total: bool
    faithful: bool
    epi: bool
    mono: bool
    iso: bool
    orthogonal: bool
    left_adjoint_of_transpose: bool

    def as_dict(self):
        return dict(self.__dict__)


def classify(f, alpha=None, beta=None):
    """
    Вычисляет свойства мульти-морфизма по определяющим равенствам:
    epi: f°⊗α⊗f = β; mono: α = f⊗β⊗f°; ортогональность: f⊗f° = α и f°⊗f = β;
    сопряженность: α ≤ f⊗f° и f°⊗f ≤ β.

    Args:
        f (MultiMorphism): Мульти-морфизм
        alpha (OmegaSet): Подобие источников (по умолчанию произведение портов)
        beta (OmegaSet): Подобие целей

    Returns:
        Classification: Флаги свойств
    """
    a = f.algebra
    sim_a = _side_similarity(f, f.sources, alpha)
    sim_b = _side_similarity(f, f.targets, beta)
    rows, cols, m = _fill(f)
    check_cap(len(rows) ** 2 * len(cols) + len(rows) * len(cols) ** 2)
    eq, leq_ = a.eq, a.leq

    total = all(a.eq(sim_a(r, r), a.join_all(m[(r, c)] for c in cols)) for r in rows)
    faithful = all(a.eq(sim_b(c, c), a.join_all(m[(r, c)] for r in rows)) for c in cols)

    # h(a', b) = ⋁_a f(a,b)⊗α(a,a')
    h = {(r2, c): a.join_all(a.tensor(m[(r, c)], sim_a(r, r2)) for r in rows)
         for r2 in rows for c in cols}
    epi = all(
        eq(a.join_all(a.tensor(h[(r2, c)], m[(r2, c2)]) for r2 in rows), sim_b(c, c2))
        for c in cols for c2 in cols
    )
    # k(a, b') = ⋁_b f(a,b)⊗β(b,b')
    k = {(r, c2): a.join_all(a.tensor(m[(r, c)], sim_b(c, c2)) for c in cols)
         for r in rows for c2 in cols}
    mono = all(
        eq(sim_a(r, r2), a.join_all(a.tensor(k[(r, c2)], m[(r2, c2)]) for c2 in cols))
        for r in rows for r2 in rows
    )
    ffo = {(r, r2): a.join_all(a.tensor(m[(r, c)], m[(r2, c)]) for c in cols)
           for r in rows for r2 in rows}
    fof = {(c, c2): a.join_all(a.tensor(m[(r, c)], m[(r, c2)]) for r in rows)
           for c in cols for c2 in cols}
    orthogonal = all(eq(ffo[(r, r2)], sim_a(r, r2)) for r in rows for r2 in rows) and \
        all(eq(fof[(c, c2)], sim_b(c, c2)) for c in cols for c2 in cols)
    adjoint = all(leq_(sim_a(r, r2), ffo[(r, r2)]) for r in rows for r2 in rows) and \
        all(leq_(fof[(c, c2)], sim_b(c, c2)) for c in cols for c2 in cols)
    return Classification(total, faithful, epi, mono, epi and mono, orthogonal, adjoint)


def is_independent(f, g):
    """f и g независимы, если f⊗g = g⊗f с точностью до порядка портов."""
    try:
        fg = compose(f, g)
        gf = compose(g, f)
    except RelationError as e:
        logger.debug(f"Композиция не определена: {e}")
        return False
    return equal(fg, gf)


def bayes_conditional(f, given, alpha=None, beta=None, direction="target-given-source"):
    """
    Условное распределение по правилу Байеса в делимой логике:
    f(β|a)(b) = [a]_α ⇒ f(a,b), либо f(α|b)(a) = [b]_β ⇒ f(a,b).

    Args:
        f (MultiMorphism): Мульти-морфизм
        given (tuple): Наблюдаемый кортеж источников (или целей)
        direction (str): target-given-source | source-given-target

    Returns:
        MultiMorphism: Ω-отображение над свободной стороной
    """
    require_divisible(f.algebra, RelationError, "Условное распределение")
    a = f.algebra
    given = tuple(given) if isinstance(given, (tuple, list)) else (given,)
    if direction == "target-given-source":
        observed, free, sim = f.sources, f.targets, _side_similarity(f, f.sources, alpha)
        witness = _totality_witness(f, alpha)
        if witness is not None:
            raise RelationError(f"{f.name}: мульти-морфизм не тотален, свидетель {witness}")
    elif direction == "source-given-target":
        observed, free, sim = f.targets, f.sources, _side_similarity(f, f.targets, beta)
        if not is_faithful(f, beta):
            raise RelationError(f"{f.name}: мульти-морфизм не точен (faithful)")
    else:
        raise RelationError(f"Неизвестное направление: {direction}")
    if len(given) != len(observed):
        raise RelationError(f"Ожидается {len(observed)} наблюдаемых значений, получено {len(given)}")
    for port, element in zip(observed, given):
        port.oset.index(element)

    weight = sim(given, given)
    table = {}
    for key in _row_tuples(free):
        full = given + key if direction == "target-given-source" else key + given
        table[key] = a.residuum(weight, f.value(full))
    return omega_map(a, [(p.name, p.oset) for p in free], table,
                     name=f"{f.name}|{','.join(map(str, given))}")


def keyed_join(d0, d1, key_sign):
    """
    Соединение по ключевому знаку: d0(x̄)⊗d1(ȳ) при равных ключах;
    ключевой столбец сохраняется один раз.
    """
    def key_port(d):
        idx = [i for i, p in enumerate(d.ports) if p.sign == key_sign]
        if not idx:
            raise RelationError(f"Ключевой знак {key_sign} отсутствует в {d.name}")
        if len(idx) > 1:
            raise AmbiguousMatchError(f"Ключевой знак {key_sign} встречается в {d.name} несколько раз")
        return idx[0]

    k0, k1 = key_port(d0), key_port(d1)
    a = d0.algebra
    rest = [i for i in range(len(d1.ports)) if i != k1]
    raw_ports = list(d0.ports) + [d1.ports[i] for i in rest]
    names = dedupe_names([p.name for p in raw_ports])
    ports = [Port(n, p.role, p.oset) for n, p in zip(names, raw_ports)]

    by_key = defaultdict(list)
    for key, value in d1.items():
        by_key[key[k1]].append((key, value))
    table = {}
    for key0, v0 in d0.items():
        for key1, v1 in by_key.get(key0[k0], ()):
            v = a.tensor(v0, v1)
            if not a.is_bot(v):
                table[key0 + tuple(key1[i] for i in rest)] = v
    return MultiMorphism(a, ports, table, name=f"{d0.name}⋈{d1.name}")


def indexed_product(morphisms, key_sign):
    """K-индексированное произведение: левая свертка keyed_join."""
    if not morphisms:
        raise RelationError("Индексированное произведение пустого списка")
    result = morphisms[0]
    for m in morphisms[1:]:
        result = keyed_join(result, m, key_sign)
    return result
