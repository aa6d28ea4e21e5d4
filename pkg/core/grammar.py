"""
Поляризованные онтологии знаков, слова, склейка слов, библиотеки
компонентов, конфигурации (графы), их проверка, склейка и нормализация.
"""

import logging
from dataclasses import dataclass, field

from config.settings import OMEGA_SIGN, OUTPUT_MARK
from .errors import GrammarError

logger = logging.getLogger(__name__)


def is_output(sign):
    return sign.endswith(OUTPUT_MARK)


def dual(sign):
    """Инволюция (_)⁺: вход <-> выход."""
    return sign[:-len(OUTPUT_MARK)] if is_output(sign) else sign + OUTPUT_MARK


def base_sign(sign):
    return dual(sign) if is_output(sign) else sign


def parse_word(text):
    """'a b+ c' -> ('a', 'b+', 'c'); пустая строка - пустое слово ⊥."""
    return tuple(text.split()) if isinstance(text, str) else tuple(text)


def format_word(word):
    return " ".join(word) if word else "⊥"


class Ontology:
    """
    Частичный порядок на входных знаках (λ ≤ μ: μ обобщает λ),
    продолженный на выходные знаки через (_)⁺.
    """

    def __init__(self, parents=None):
        self._parents = {}
        for sign, ps in (parents or {}).items():
            self.add(sign, ps)

    def add(self, sign, parents=()):
        if is_output(sign):
            raise GrammarError(f"Знак онтологии {sign} должен быть входным")
        if isinstance(parents, str):
            parents = (parents,)
        new = [p for p in (parents or ()) if p not in self._parents.get(sign, ())]
        # ребро sign -> p замыкает цикл, если sign уже обобщает p
        if any(p == sign or sign in self._ancestors(p) for p in new):
            raise GrammarError(f"Цикл в онтологии через знак {sign}")
        known = self._parents.setdefault(sign, [])
        for p in new:
            self._parents.setdefault(p, [])
            if p not in known:
                known.append(p)

    @property
    def signs(self):
        return list(self._parents)

    def __contains__(self, sign):
        return base_sign(sign) in self._parents

    def parents(self, sign):
        return list(self._parents.get(sign, ()))

    def _ancestors(self, sign, strict=False):
        seen = []
        stack = list(self._parents.get(sign, ()))
        while stack:
            s = stack.pop()
            if s in seen:
                continue
            seen.append(s)
            stack.extend(self._parents.get(s, ()))
        return seen if strict else [sign] + seen

    def leq(self, a, b):
        """a ≤ b (b - обобщение a); входы и выходы несравнимы."""
        if is_output(a) != is_output(b):
            return False
        return base_sign(b) in self._ancestors(base_sign(a))

    def merged(self, other):
        result = Ontology()
        for source in (self, other):
            for sign in source.signs:
                result.add(sign, source.parents(sign))
        return result


def flat_ontology(signs):
    return Ontology({s: () for s in signs})


def word_io(word):
    """Разделяет слово на входную и выходную подпоследовательности."""
    word = parse_word(word)
    return (tuple(s for s in word if not is_output(s)),
            tuple(s for s in word if is_output(s)))


def glue_words(w, w2, ontology=None):
    """
    Упорядоченное исключение выходных знаков: берется первый выходной знак λ⁺
    из w, для которого в w' есть вход λ или его обобщение; первое такое
    вхождение удаляется из w', знак - из w. Повторяется, пока есть пары.

    Returns:
        tuple: Остаток w, за которым следует остаток w'
    """
    ontology = ontology or Ontology()
    left, right = list(parse_word(w)), list(parse_word(w2))

    def matches(needed, offered):
        return needed == offered or ontology.leq(needed, offered)

    while True:
        for i, s in enumerate(left):
            if not is_output(s):
                continue
            needed = dual(s)
            j = next((j for j, t in enumerate(right)
                      if not is_output(t) and matches(needed, t)), None)
            if j is not None:
                del left[i]
                del right[j]
                break
        else:
            break
    return tuple(left + right)


class Library:
    """Библиотека: метки компонентов и слова требований над онтологией."""

    def __init__(self, ontology, requirements=None):
        self.ontology = ontology
        self.requirements = {}
        for label, word in (requirements or {}).items():
            self.add(label, word)

    def add(self, label, word):
        word = parse_word(word)
        for s in word:
            if s not in self.ontology:
                raise GrammarError(f"Знак {s} в требовании {label} отсутствует в онтологии")
        self.requirements[label] = word

    @property
    def labels(self):
        return list(self.requirements)

    def requirement(self, label):
        try:
            return self.requirements[label]
        except KeyError:
            raise GrammarError(f"Неизвестная метка компонента: {label}")

    def leq(self, other):
        """Подбиблиотека: каждая метка с тем же требованием и онтология согласована."""
        for label, word in self.requirements.items():
            if other.requirements.get(label) != word:
                return False
        return all(
            other.ontology.leq(s, p) for s in self.ontology.signs for p in self.ontology.parents(s)
        )


def closure_requirements(library, labels):
    """Требование L*(r₁…r_n): левая свертка склейки слов; пустая цепочка - ⊥."""
    result = ()
    for label in labels:
        result = glue_words(result, library.requirement(label), library.ontology)
    return result


@dataclass
class ConfigArrow:
    id: str
    label: str
    sources: tuple
    targets: tuple


@dataclass
class Configuration:
    """Граф компонентов: вершины помечены входными знаками, стрелки - метками."""

    vertices: dict
    arrows: list = field(default_factory=list)
    name: str = "D"

    def incoming(self, v):
        return [a for a in self.arrows if v in a.targets]

    def outgoing(self, v):
        return [a for a in self.arrows if v in a.sources]

    def input_vertices(self):
        return [v for v in self.vertices if not self.incoming(v)]

    def output_vertices(self):
        return [v for v in self.vertices if not self.outgoing(v)]

    def inputs(self):
        return tuple(self.vertices[v] for v in self.input_vertices())

    def outputs(self):
        return tuple(dual(self.vertices[v]) for v in self.output_vertices())


def configuration_word(config):
    """i(D) за которым следует o(D)."""
    return config.inputs() + config.outputs()


@dataclass
class ConfigurationReport:
    configuration: Configuration
    problems: list
    inputs: tuple
    outputs: tuple

    @property
    def valid(self):
        return not self.problems


def validate_configuration(config, library):
    """
    Проверяет, что каждая стрелка удовлетворяет требованию своей метки:
    знак вершины-источника ≤ требуемого, требуемый знак цели ≤ знака вершины.

    Returns:
        ConfigurationReport: список нарушений по стрелкам, i(D) и o(D)
    """
    ont = library.ontology
    problems = []
    for arrow in config.arrows:
        if arrow.label not in library.requirements:
            problems.append(f"{arrow.id}: неизвестная метка {arrow.label}")
            continue
        ins, outs = word_io(library.requirement(arrow.label))
        if not arrow.targets and outs == (dual(OMEGA_SIGN),):
            # отношение без вершины-цели: значение в Ω
            outs = ()
        if len(ins) != len(arrow.sources) or len(outs) != len(arrow.targets):
            problems.append(
                f"{arrow.id}: арность {len(arrow.sources)} -> {len(arrow.targets)}, "
                f"ожидается {len(ins)} -> {len(outs)}")
            continue
        for v, needed in zip(arrow.sources, ins):
            sign = config.vertices.get(v)
            if sign is None:
                problems.append(f"{arrow.id}: неизвестная вершина {v}")
            elif not ont.leq(sign, needed):
                problems.append(f"{arrow.id}: вершина {v} знака {sign}, ожидается {needed}")
        for v, produced in zip(arrow.targets, outs):
            sign = config.vertices.get(v)
            if sign is None:
                problems.append(f"{arrow.id}: неизвестная вершина {v}")
            elif not ont.leq(dual(produced), sign):
                problems.append(f"{arrow.id}: вершина {v} знака {sign}, ожидается {dual(produced)}")
    for p in problems:
        logger.warning(f"⚠️ Конфигурация {config.name}: {p}")
    return ConfigurationReport(config, problems, config.inputs(), config.outputs())


def _fresh(name, taken, prefix):
    candidate = name
    k = 1
    while candidate in taken:
        k += 1
        candidate = f"{name}{prefix}{k}"
    return candidate


def glue_diagrams(d1, d2, name=None):
    """
    D⊗D': вершины o(D) и i(D') с равными метками отождествляются
    в порядке следования; остальные остаются различными.
    """
    available = list(d1.output_vertices())
    mapping = {}
    for v in d2.input_vertices():
        label = d2.vertices[v]
        match = next((u for u in available if d1.vertices[u] == label), None)
        if match is not None:
            available.remove(match)
            mapping[v] = match
    taken = set(d1.vertices)
    for v in d2.vertices:
        if v not in mapping:
            mapping[v] = _fresh(v, taken, "'")
            taken.add(mapping[v])
    vertices = dict(d1.vertices)
    for v, sign in d2.vertices.items():
        vertices.setdefault(mapping[v], sign)
    arrow_ids = {a.id for a in d1.arrows}
    arrows = list(d1.arrows)
    for a in d2.arrows:
        new_id = _fresh(a.id, arrow_ids, "'")
        arrow_ids.add(new_id)
        arrows.append(ConfigArrow(new_id, a.label,
                                  tuple(mapping[v] for v in a.sources),
                                  tuple(mapping[v] for v in a.targets)))
    return Configuration(vertices, arrows, name or f"{d1.name}⊗{d2.name}")


def single_arrow_configuration(library, label, arrow_id=None, name=None):
    """Конфигурация из одной стрелки с вершинами по требованию метки."""
    ins, outs = word_io(library.requirement(label))
    arrow_id = arrow_id or label
    vertices = {}
    src = []
    for k, s in enumerate(ins):
        vid = f"{arrow_id}.i{k}"
        vertices[vid] = s
        src.append(vid)
    tgt = []
    for k, s in enumerate(outs):
        vid = f"{arrow_id}.o{k}"
        vertices[vid] = dual(s)
        tgt.append(vid)
    return Configuration(vertices, [ConfigArrow(arrow_id, label, tuple(src), tuple(tgt))],
                         name or label)


def chain_configuration(library, labels, prefix="c"):
    """Склейка однострелочных конфигураций цепочки меток."""
    result = Configuration({}, [], prefix)
    for k, label in enumerate(labels):
        piece = single_arrow_configuration(library, label, f"{prefix}.{k}")
        result = glue_diagrams(result, piece, prefix)
    return result


@dataclass
class Semantics:
    """
    Ориентированные правила ≡_l (метка -> цепочка меток) и пары ≡_w.
    Размер метки берется из sizes (объявление size); без объявления
    атомарная метка имеет размер 1, составная - 1 + сумма размеров правой
    части, и для нее проверка сводится к отсутствию циклов.
    """

    rules: dict = field(default_factory=dict)
    word_rules: list = field(default_factory=list)
    sizes: dict = field(default_factory=dict)

    def size(self, label, _stack=()):
        if label in self.sizes:
            return self.sizes[label]
        if label in _stack:
            raise GrammarError(f"Правила не уменьшают размер: цикл через {label}")
        if label not in self.rules:
            return 1
        return 1 + sum(self.size(r, _stack + (label,)) for r in self.rules[label])

    def check_rule(self, lhs):
        rhs = self.rules[lhs]
        if not rhs:
            raise GrammarError(f"Правило для {lhs} имеет пустую правую часть")
        if self.size(lhs) <= sum(self.size(r) for r in rhs):
            raise GrammarError(f"Правило {lhs} => {' '.join(rhs)} не уменьшает размер")

    def validate(self):
        """Отклоняет правила, не уменьшающие размер."""
        for lhs in self.rules:
            self.check_rule(lhs)
        return self

    def words_equivalent(self, w0, w1):
        w0, w1 = parse_word(w0), parse_word(w1)
        if w0 == w1:
            return True
        return any({parse_word(a), parse_word(b)} == {w0, w1} for a, b in self.word_rules)

    def normal_form(self, label):
        """Раскрывает метку до атомарных меток."""
        if label not in self.rules:
            return (label,)
        result = ()
        for r in self.rules[label]:
            result += self.normal_form(r)
        return result


def check_semantics(library, semantics):
    """
    Согласованность ≡_l и ≡_w: для l₀ ≡_l l₁ требования L*(l₀) и L*(l₁)
    должны быть ≡_w-эквивалентны.

    Returns:
        list: Описания нарушений
    """
    problems = []
    for lhs, rhs in semantics.rules.items():
        if lhs not in library.requirements:
            continue
        try:
            glued = closure_requirements(library, rhs)
        except GrammarError as e:
            problems.append(str(e))
            continue
        if not semantics.words_equivalent(library.requirement(lhs), glued):
            problems.append(
                f"{lhs}: требование {format_word(library.requirement(lhs))} "
                f"≢ {format_word(glued)}")
    return problems


def refine(config, semantics, library):
    """
    Нормализация: стрелки с составными метками заменяются конфигурациями
    их цепочек (i/o отождествляются по позиции) до неподвижной точки.
    """
    semantics.validate()
    current = config
    while True:
        target = next((a for a in current.arrows if a.label in semantics.rules), None)
        if target is None:
            return current
        piece = chain_configuration(library, semantics.rules[target.label], prefix=target.id)
        ins, outs = piece.input_vertices(), piece.output_vertices()
        if len(ins) != len(target.sources) or len(outs) != len(target.targets):
            raise GrammarError(
                f"Раскрытие {target.label} имеет границу {len(ins)} -> {len(outs)}, "
                f"стрелка {target.id} - {len(target.sources)} -> {len(target.targets)}")
        mapping = dict(zip(ins, target.sources))
        mapping.update(zip(outs, target.targets))
        vertices = dict(current.vertices)
        for v, sign in piece.vertices.items():
            if v not in mapping:
                mapping[v] = _fresh(v, set(vertices), "'")
                vertices[mapping[v]] = sign
        arrows = [a for a in current.arrows if a is not target]
        for a in piece.arrows:
            arrows.append(ConfigArrow(a.id, a.label,
                                      tuple(mapping[v] for v in a.sources),
                                      tuple(mapping[v] for v in a.targets)))
        logger.debug(f"Раскрыта стрелка {target.id} ({target.label}) в {len(piece.arrows)} стрелок")
        current = Configuration(vertices, arrows, config.name)


def is_subobject(sub, config):
    """
    Подобъект в форме разложения D = D''⊗D'⊗D''': вершины и стрелки D'
    входят в D с теми же метками и связями.
    """
    for v, sign in sub.vertices.items():
        if config.vertices.get(v) != sign:
            return False
    arrows = {a.id: a for a in config.arrows}
    for a in sub.arrows:
        other = arrows.get(a.id)
        if other is None or (other.label, other.sources, other.targets) != \
                (a.label, a.sources, a.targets):
            return False
    return True


def _standard_library(signs, components, constants=None):
    ontology = flat_ontology(list(signs) + [OMEGA_SIGN])
    library = Library(ontology)
    for s in signs:
        for label, word in components(s):
            library.add(label, word)
        for c in (constants or {}).get(s, ()):
            library.add(f"const_{s}_{c}", (dual(s),))
    library.add("top", (dual(OMEGA_SIGN),))
    return library


def binary_library(signs, constants=None):
    return _standard_library(
        signs, lambda s: [(f"eq_{s}", (s, s, dual(OMEGA_SIGN)))], constants)


def linear_library(signs, constants=None):
    return _standard_library(
        signs, lambda s: [(f"eq_{s}", (s, s, dual(OMEGA_SIGN))),
                          (f"ge_{s}", (s, s, dual(OMEGA_SIGN)))], constants)


def additive_library(signs, constants=None):
    return _standard_library(
        signs, lambda s: [(f"eq_{s}", (s, s, dual(OMEGA_SIGN))),
                          (f"plus_{s}", (s, s, dual(s)))], constants)


def multiplicative_library(signs, constants=None):
    return _standard_library(
        signs, lambda s: [(f"eq_{s}", (s, s, dual(OMEGA_SIGN))),
                          (f"times_{s}", (s, s, dual(s)))], constants)
