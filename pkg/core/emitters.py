"""
Вывод результатов: Ω-отображения в CSV, семиотика в текст .sem
"""

import csv
import io
import logging

from config.settings import CSV_SIGNIFICANT_DIGITS, OMEGA_SIGN
from .algebra import FiniteAlgebra, ProductAlgebra
from .semiotic import NamedRelation
from .utils import dedupe_names, enumerate_product

logger = logging.getLogger(__name__)


def format_value(value):
    """Число с 9 значащими цифрами; значения произведения - '(a,b)'."""
    if isinstance(value, tuple):
        return "(" + ",".join(format_value(v) for v in value) + ")"
    text = f"{float(value):.{CSV_SIGNIFICANT_DIGITS}g}"
    if text == "-0":
        text = "0"
    if all(ch.isdigit() or ch == "-" for ch in text):
        text += ".0"
    return text


def format_map_csv(m, cap=None):
    """
    CSV Ω-отображения: заголовок - имена портов и value, строки
    по всем кортежам в лексикографическом порядке носителей.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(m.port_names + ["value"])
    count = 0
    for key in enumerate_product(m.supports, cap):
        writer.writerow(list(key) + [format_value(m.value(key))])
        count += 1
    logger.debug(f"CSV {m.name}: {count} строк")
    return buffer.getvalue()


def _algebra_lines(semiotic):
    names = {id(a): n for n, a in semiotic.algebras.items()}
    taken = set(semiotic.algebras)
    emitted = []
    lines = []

    def emit(name, algebra):
        if name in emitted:
            return
        if isinstance(algebra, ProductAlgebra):
            factor_names = []
            for factor in algebra.factors:
                fname = names.get(id(factor))
                if fname is None:
                    fname = dedupe_names(sorted(taken) + [f"{name}_f"])[-1]
                    taken.add(fname)
                    names[id(factor)] = fname
                emit(fname, factor)
                factor_names.append(fname)
            lines.append(f"algebra {name} product_of {' '.join(factor_names)}")
        elif isinstance(algebra, FiniteAlgebra) and algebra.kind == "table":
            carrier = algebra.carrier
            body = [f"  carrier {' '.join(format_value(v) for v in carrier)}"]
            for x in carrier:
                for y in carrier:
                    body.append(f"  tensor {format_value(x)} {format_value(y)} "
                                f"{format_value(algebra.tensor(x, y))}")
            for x in carrier:
                for y in carrier:
                    body.append(f"  residuum {format_value(x)} {format_value(y)} "
                                f"{format_value(algebra.residuum(x, y))}")
            lines.append(f"algebra {name} table {{\n" + "\n".join(body) + "\n}")
        else:
            lines.append(f"algebra {name} {algebra.describe()}")
        emitted.append(name)

    for name, algebra in semiotic.algebras.items():
        if name != semiotic.algebra_name:
            emit(name, algebra)
    emit(semiotic.algebra_name, semiotic.algebra)
    if emitted[-1] != semiotic.algebra_name:
        # активной считается последняя объявленная алгебра
        lines.append(lines.pop(emitted.index(semiotic.algebra_name)))
    return lines


def _oset_block(oset):
    a = oset.algebra
    lines = [f"oset {oset.name} : {oset.sign} {{", f"  support {' '.join(oset.support)}"]
    for i, x in enumerate(oset.support):
        for y in oset.support[i:]:
            value = oset.sim(x, y)
            if x == y and a.is_top(value):
                continue
            if x != y and a.is_bot(value):
                continue
            lines.append(f"  sim {x} {y} {format_value(value)}")
    lines.append("}")
    return "\n".join(lines)


def _comp_block(comp):
    sources = " ".join(p.sign for p in comp.sources)
    targets = OMEGA_SIGN if comp.is_predicate() else " ".join(p.sign for p in comp.targets)
    header = f"comp {comp.name} : {sources} -> {targets}".replace(":  ->", ": ->")
    items = comp.items()
    if not items:
        return header
    lines = [header + " {"]
    for key, value in items:
        lines.append(f"  entry {' '.join(key)} = {format_value(value)}".replace("entry  =", "entry ="))
    lines.append("}")
    return "\n".join(lines)


def _diagram_block(diagram):
    lines = [f"diagram {diagram.name} {{"]
    for v, oset in diagram.vertices.items():
        lines.append(f"  node {v} : {oset.name}")
    for arrow in diagram.arrows:
        lines.append(f"  edge {arrow.id} : {arrow.morphism.name} "
                     f"({' '.join(arrow.sources)} -> {' '.join(arrow.targets)})")
    lines.append(f"  sources {' '.join(diagram.sources)}")
    lines.append("}")
    return "\n".join(lines)


def format_workspace(semiotic):
    """
    Текст .sem, из которого разбор восстанавливает ту же семиотику.

    Args:
        semiotic (Semiotic): Семиотика (в том числе результат интеграции)

    Returns:
        str: Текст спецификации
    """
    parts = ["\n".join(_algebra_lines(semiotic))]
    signs = []
    for sign in semiotic.ontology.signs:
        if sign == OMEGA_SIGN:
            continue
        parents = semiotic.ontology.parents(sign)
        signs.append(f"sign {sign}" + (f" <= {', '.join(parents)}" if parents else ""))
    if signs:
        parts.append("\n".join(signs))
    parts.extend(_oset_block(o) for o in semiotic.osets.values())
    parts.extend(_comp_block(c) for c in semiotic.comps.values())
    parts.extend(_diagram_block(d) for d in semiotic.diagrams.values())
    for name, term in semiotic.relations.items():
        inner = term.term if isinstance(term, NamedRelation) else term
        parts.append(f"relation {name} = {inner.describe()}")
    sketch = [f"total {name}" for name in semiotic.totals]
    sketch += [f"limitdef {c} <- {d}" for c, d in semiotic.limit_bindings]
    sketch += [f"colimitdef {c} <- {d}" for c, d in semiotic.colimit_bindings]
    if sketch:
        parts.append("\n".join(sketch))
    for name, pool in semiotic.pools.items():
        body = [f"  {part} {' '.join(getattr(pool, part))}"
                for part in ("diagrams", "concepts", "domains") if getattr(pool, part)]
        parts.append(f"pool {name} {{\n" + "\n".join(body) + "\n}")
    rules = [f"size {label} {size}" for label, size in semiotic.semantics.sizes.items()]
    rules += [f"rule {lhs} => {' '.join(rhs)}" for lhs, rhs in semiotic.semantics.rules.items()]
    if rules:
        parts.append("\n".join(rules))
    return "\n\n".join(parts) + "\n"
