"""
Разбор языка спецификаций .sem (грамматика lark, LALR с контекстным лексером).
Результат разбора - список объявлений с позициями в исходном тексте.
"""

import logging
from dataclasses import dataclass, field

import lark
from lark import v_args
from lark.tree import Meta

from .errors import Diagnostic, SourceSpan, SpecError
from .inference import Atom, Binary, Closure, Interior

logger = logging.getLogger(__name__)

GRAMMAR = r"""
start: _statement*

_statement: algebra | sign | oset | comp | diagram | total | limitdef
          | colimitdef | pool | relation | rule | size

algebra: "algebra" ATOM ATOM ATOM* table_block? _sep?
table_block: "{" _table_line* "}"
_table_line: carrier_line | tensor_line | residuum_line
carrier_line: "carrier" value+ _sep?
tensor_line: "tensor" value value value _sep?
residuum_line: "residuum" value value value _sep?

sign: "sign" ATOM parents? _sep?
parents: "<=" ATOM ("," ATOM)*

oset: "oset" ATOM ":" ATOM "{" support sim_line* "}" _sep?
support: "support" ATOM+ _sep?
sim_line: "sim" ATOM ATOM value _sep?

comp: "comp" ATOM ":" atoms "->" atoms comp_body? _sep?
comp_body: "{" entry* "}"
entry: "entry" atoms "=" value _sep?

diagram: "diagram" ATOM "{" _diagram_line* "}" _sep?
_diagram_line: node | edge | sources
node: "node" ATOM ":" ATOM _sep?
edge: "edge" ATOM ":" ATOM "(" atoms "->" atoms ")" _sep?
sources: "sources" atoms _sep?

total: "total" ATOM _sep?
limitdef: "limitdef" ATOM "<-" ATOM _sep?
colimitdef: "colimitdef" ATOM "<-" ATOM _sep?

pool: "pool" ATOM "{" _pool_line* "}" _sep?
_pool_line: pool_diagrams | pool_concepts | pool_domains
pool_diagrams: "diagrams" atoms _sep?
pool_concepts: "concepts" atoms _sep?
pool_domains: "domains" atoms _sep?

relation: "relation" ATOM "=" expr _sep?
rule: "rule" ATOM "=>" ATOM+ _sep?
size: "size" ATOM ATOM _sep?

formula: expr

?expr: disj
     | disj "->" expr      -> implies
?disj: conj
     | disj "\\/" conj     -> join
?conj: tens
     | conj "/\\" tens     -> meet
?tens: unary
     | tens "&" unary      -> tensor
?unary: ATOM               -> atom
      | "[I]" unary        -> interior
      | "[C]" unary        -> closure
      | "(" expr ")"

atoms: ATOM*
?value: ATOM | tuple_value
tuple_value: "(" value ("," value)* ")"

_sep: ";"

ATOM: /-?[0-9.]+[eE]-[0-9]+|-?[A-Za-z0-9_.'+]+/
COMMENT: /#[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""


@dataclass
class Statement:
    span: SourceSpan


@dataclass
class AlgebraDecl(Statement):
    name: str
    kind: str
    args: list = field(default_factory=list)
    carrier: list = None
    tensor: list = field(default_factory=list)
    residuum: list = field(default_factory=list)


@dataclass
class SignDecl(Statement):
    name: str
    parents: list = field(default_factory=list)


@dataclass
class OsetDecl(Statement):
    name: str
    sign: str
    support: list = field(default_factory=list)
    sims: list = field(default_factory=list)


@dataclass
class CompDecl(Statement):
    name: str
    sources: list = field(default_factory=list)
    targets: list = field(default_factory=list)
    entries: list = field(default_factory=list)


@dataclass
class DiagramDecl(Statement):
    name: str
    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    sources: list = None


@dataclass
class TotalDecl(Statement):
    name: str


@dataclass
class BindingDecl(Statement):
    kind: str
    comp: str
    diagram: str


@dataclass
class PoolDecl(Statement):
    name: str
    diagrams: list = field(default_factory=list)
    concepts: list = field(default_factory=list)
    domains: list = field(default_factory=list)


@dataclass
class RelationDecl(Statement):
    name: str
    expr: object = None


@dataclass
class RuleDecl(Statement):
    lhs: str
    rhs: list = field(default_factory=list)


@dataclass
class SizeDecl(Statement):
    label: str
    value: str


@dataclass
class Located:
    """Элемент тела блока (sim, entry, node, edge) со своей позицией."""

    span: SourceSpan
    parts: tuple


def _span(file, meta):
    if isinstance(meta, Meta) and not getattr(meta, "empty", True):
        return SourceSpan(file, meta.line, meta.column, meta.end_column)
    if hasattr(meta, "line"):
        return SourceSpan(file, meta.line, meta.column, getattr(meta, "end_column", meta.column))
    return SourceSpan.file_start(file)


@v_args(meta=True)
class SpecTransformer(lark.Transformer):
    """Дерево разбора -> объявления."""

    def __init__(self, file):
        super().__init__()
        self.file = file

    def span(self, meta):
        return _span(self.file, meta)

    # значения и списки

    def tuple_value(self, meta, children):
        return tuple(children)

    def atoms(self, meta, children):
        return [str(c) for c in children]

    def parents(self, meta, children):
        return [str(c) for c in children]

    # выражения

    def atom(self, meta, children):
        return Atom(str(children[0]))

    def interior(self, meta, children):
        return Interior(children[0])

    def closure(self, meta, children):
        return Closure(children[0])

    def implies(self, meta, children):
        return Binary("implies", children[0], children[1])

    def join(self, meta, children):
        return Binary("join", children[0], children[1])

    def meet(self, meta, children):
        return Binary("meet", children[0], children[1])

    def tensor(self, meta, children):
        return Binary("tensor", children[0], children[1])

    def formula(self, meta, children):
        return children[0]

    # алгебры

    def carrier_line(self, meta, children):
        return ("carrier", self.span(meta), list(children))

    def tensor_line(self, meta, children):
        return ("tensor", self.span(meta), tuple(children))

    def residuum_line(self, meta, children):
        return ("residuum", self.span(meta), tuple(children))

    def table_block(self, meta, children):
        return list(children)

    def algebra(self, meta, children):
        name, kind, *rest = children
        decl = AlgebraDecl(self.span(meta), str(name), str(kind))
        for item in rest:
            if isinstance(item, list):
                for part, span, values in item:
                    if part == "carrier":
                        decl.carrier = values
                    else:
                        getattr(decl, part).append(Located(span, values))
            else:
                decl.args.append(str(item))
        return decl

    def sign(self, meta, children):
        parents = children[1] if len(children) > 1 else []
        return SignDecl(self.span(meta), str(children[0]), parents)

    def support(self, meta, children):
        return [str(c) for c in children]

    def sim_line(self, meta, children):
        return Located(self.span(meta), (str(children[0]), str(children[1]), children[2]))

    def oset(self, meta, children):
        name, sign, support, *sims = children
        return OsetDecl(self.span(meta), str(name), str(sign), support, sims)

    def entry(self, meta, children):
        return Located(self.span(meta), (tuple(children[0]), children[1]))

    def comp_body(self, meta, children):
        return list(children)

    def comp(self, meta, children):
        name, sources, targets, *body = children
        return CompDecl(self.span(meta), str(name), sources, targets, body[0] if body else [])

    def node(self, meta, children):
        return ("node", Located(self.span(meta), (str(children[0]), str(children[1]))))

    def edge(self, meta, children):
        ident, label, sources, targets = children
        return ("edge", Located(self.span(meta), (str(ident), str(label), tuple(sources), tuple(targets))))

    def sources(self, meta, children):
        return ("sources", children[0])

    def diagram(self, meta, children):
        decl = DiagramDecl(self.span(meta), str(children[0]))
        for part, item in children[1:]:
            if part == "node":
                decl.nodes.append(item)
            elif part == "edge":
                decl.edges.append(item)
            else:
                decl.sources = item
        return decl

    def total(self, meta, children):
        return TotalDecl(self.span(meta), str(children[0]))

    def limitdef(self, meta, children):
        return BindingDecl(self.span(meta), "limit", str(children[0]), str(children[1]))

    def colimitdef(self, meta, children):
        return BindingDecl(self.span(meta), "colimit", str(children[0]), str(children[1]))

    def pool_diagrams(self, meta, children):
        return ("diagrams", children[0])

    def pool_concepts(self, meta, children):
        return ("concepts", children[0])

    def pool_domains(self, meta, children):
        return ("domains", children[0])

    def pool(self, meta, children):
        decl = PoolDecl(self.span(meta), str(children[0]))
        for part, names in children[1:]:
            getattr(decl, part).extend(names)
        return decl

    def relation(self, meta, children):
        return RelationDecl(self.span(meta), str(children[0]), children[1])

    def rule(self, meta, children):
        return RuleDecl(self.span(meta), str(children[0]), [str(c) for c in children[1:]])

    def size(self, meta, children):
        return SizeDecl(self.span(meta), str(children[0]), str(children[1]))

    def start(self, meta, children):
        return list(children)


_PARSER = None


def get_parser():
    global _PARSER
    if _PARSER is None:
        _PARSER = lark.Lark(GRAMMAR, parser="lalr", lexer="contextual",
                            propagate_positions=True, start=["start", "formula"])
    return _PARSER


def _diagnostic(error, file):
    expected = sorted(getattr(error, "expected", None) or getattr(error, "allowed", None) or [])
    line = max(getattr(error, "line", 1) or 1, 1)
    column = max(getattr(error, "column", 1) or 1, 1)
    if isinstance(error, lark.exceptions.UnexpectedToken):
        found = f"неожиданный токен {error.token!r}"
    elif isinstance(error, lark.exceptions.UnexpectedCharacters):
        found = f"неожиданный символ {error.char!r}"
    elif isinstance(error, lark.exceptions.UnexpectedEOF):
        found = "неожиданный конец файла"
    else:
        found = str(error).splitlines()[0]
    message = found + (f", ожидается: {', '.join(expected)}" if expected else "")
    return Diagnostic(message, SourceSpan(file, line, column, column + 1))


def _parse(text, start, file):
    try:
        tree = get_parser().parse(text, start=start)
        return SpecTransformer(file).transform(tree)
    except lark.exceptions.UnexpectedInput as e:
        raise SpecError([_diagnostic(e, file)])
    except lark.exceptions.VisitError as e:
        raise SpecError([Diagnostic(f"Ошибка построения объявления: {e.orig_exc}",
                                    SourceSpan.file_start(file))])
    except lark.exceptions.LarkError as e:
        raise SpecError([Diagnostic(str(e), SourceSpan.file_start(file))])


def parse_statements(text, file="<spec>"):
    """
    Разбирает текст .sem.

    Args:
        text (str): Текст спецификации
        file (str): Имя файла для позиций в диагностике

    Returns:
        list: Объявления в порядке появления

    Raises:
        SpecError: синтаксическая ошибка с позицией и ожидаемыми токенами
    """
    statements = _parse(text, "start", file)
    logger.debug(f"{file}: разобрано {len(statements)} объявлений")
    return statements


def parse_expression(text, file="<formula>"):
    """Выражение над именами отношений: & -> /\\ \\/ [I] [C] и скобки."""
    return _parse(text, "formula", file)
