"""
Тесты разбора .sem: диагностика с позициями и обратимость вывода
"""

import pytest

from core.emitters import format_workspace
from core.errors import Diagnostic, SourceSpan, SpecError
from core.inference import Atom, Binary
from core.parser import CompDecl, SignDecl, parse_expression, parse_statements
from core.relation import equal
from core.workspace import load_spec, parse_spec

MINIMAL = """\
algebra W boolean
sign A
oset R : A { support a b }
"""

UNKNOWN_ELEMENT = """\
algebra P product
sign A
oset R_A : A {
  support a b
}
comp f : A -> Omega {
  entry a = 1.0
  entry z = 0.5
}
"""


def diagnostics_of(text, file="t.sem"):
    with pytest.raises(SpecError) as info:
        parse_spec(text, file)
    return info.value.diagnostics


def test_minimal_spec():
    s = parse_spec(MINIMAL, "min.sem").semiotic
    assert s.name == "min"
    assert s.algebra_name == "W"
    assert s.osets["R"].support == ("a", "b")
    assert s.osets["R"].is_crisp()


def test_statements_keep_positions():
    statements = parse_statements(UNKNOWN_ELEMENT, "f.sem")
    comp = next(s for s in statements if isinstance(s, CompDecl))
    assert comp.span.line == 6
    assert [item.span.line for item in comp.entries] == [7, 8]
    sign = next(s for s in statements if isinstance(s, SignDecl))
    assert (sign.name, sign.parents) == ("A", [])


def test_sign_generalizations():
    statements = parse_statements("sign nat <= int, num\n")
    assert statements[0].parents == ["int", "num"]


def test_syntax_error_has_position():
    diagnostics = diagnostics_of("algebra P product\nsign A\noset R_A A { support a }\n")
    assert len(diagnostics) == 1
    assert diagnostics[0].span.file == "t.sem"
    assert diagnostics[0].span.line == 3


def test_unknown_element_reported_at_entry():
    diagnostics = diagnostics_of(UNKNOWN_ELEMENT, "f.sem")
    assert len(diagnostics) == 1
    assert diagnostics[0].span.line == 8
    assert "неизвестный элемент z" in diagnostics[0].message


def test_missing_algebra():
    diagnostics = diagnostics_of("sign A\n")
    assert "Не объявлена ни одна алгебра" in diagnostics[0].message
    assert diagnostics[0].span == SourceSpan("t.sem", 1, 1, 2)


def test_duplicate_and_reserved_declarations():
    diagnostics = diagnostics_of("algebra P product\nsign A\nsign A\nsign Omega\n")
    assert [d.span.line for d in diagnostics] == [3, 4]
    assert "Повторное объявление" in diagnostics[0].message


def test_all_reference_errors_are_collected():
    text = MINIMAL + "diagram D { node x : R_Z }\ntotal Q\n"
    diagnostics = diagnostics_of(text)
    assert len(diagnostics) == 2
    assert [d.span.line for d in diagnostics] == [4, 5]


def test_chain_requires_integer_argument():
    diagnostics = diagnostics_of("algebra L chain x\n")
    assert "chain" in diagnostics[0].message


def test_diagnostic_format():
    d = Diagnostic("сообщение", SourceSpan("f.sem", 3, 5, 6))
    assert str(d) == "f.sem:3:5: error: сообщение"
    assert str(Diagnostic("без позиции")) == "error: без позиции"


def test_unknown_pool(specs_dir):
    ws = load_spec(specs_dir / "pool.sem")
    with pytest.raises(SpecError) as info:
        ws.pool("P5")
    assert info.value.diagnostics[0].span.file == str(specs_dir / "pool.sem")


def test_missing_file(tmp_path):
    with pytest.raises(SpecError) as info:
        load_spec(tmp_path / "absent.sem")
    assert info.value.diagnostics[0].span.line == 1


def test_expression_precedence():
    expr = parse_expression(r"a /\ b -> c")
    assert expr == Binary("implies", Binary("meet", Atom("a"), Atom("b")), Atom("c"))
    assert parse_expression("a & b & c") == Binary(
        "tensor", Binary("tensor", Atom("a"), Atom("b")), Atom("c"))


def test_relation_with_modality_is_rejected():
    text = MINIMAL + "comp p : A -> Omega { entry a = 1 }\n" \
        "diagram D { node x : R ; edge e : p (x -> ) }\nrelation r = [I] D\n"
    diagnostics = diagnostics_of(text)
    assert diagnostics[0].span.line == 6


@pytest.mark.parametrize("name", ["linear.sem", "pool.sem", "additive.sem"])
def test_formatted_workspace_parses_back(specs_dir, name):
    original = load_spec(specs_dir / name).semiotic
    text = format_workspace(original)
    again = parse_spec(text, name).semiotic
    assert list(again.osets) == list(original.osets)
    for oset in original.osets:
        o0, o1 = original.osets[oset], again.osets[oset]
        assert o1.support == o0.support
        assert all(o1.sim(x, y) == pytest.approx(o0.sim(x, y))
                   for x in o0.support for y in o0.support)
    assert list(again.comps) == list(original.comps)
    assert all(equal(again.comps[c], original.comps[c]) for c in original.comps)
    assert list(again.diagrams) == list(original.diagrams)
    assert list(again.relations) == list(original.relations)
    assert again.totals == original.totals
    assert list(again.pools) == list(original.pools)


def test_relation_description_round_trip(specs_dir):
    s = load_spec(specs_dir / "linear.sem").semiotic
    assert s.relations["antisym"].term.describe() == r"(ge_xy /\ ge_yx) -> eq_xy"


RULES = """\
algebra P product
sign A
oset R : A { support a }
comp u : A -> A
comp v : A -> A
size s SIZE
rule s => u v
"""


def test_rule_must_decrease_declared_size():
    ws = parse_spec(RULES.replace("SIZE", "3"), "r.sem")
    assert ws.semiotic.semantics.sizes == {"s": 3}
    assert ws.semiotic.semantics.normal_form("s") == ("u", "v")
    diagnostics = diagnostics_of(RULES.replace("SIZE", "2"))
    assert [d.span.line for d in diagnostics] == [7]
    assert "не уменьшает размер" in diagnostics[0].message


@pytest.mark.parametrize("size", ["0", "x"])
def test_invalid_size_declaration(size):
    diagnostics = diagnostics_of(RULES.replace("SIZE", size))
    assert diagnostics[0].span.line == 6


def test_invalid_utf8_is_located(tmp_path):
    path = tmp_path / "bad.sem"
    path.write_bytes(b"algebra P product\nsign \xff\n")
    with pytest.raises(SpecError) as info:
        load_spec(path)
    span = info.value.diagnostics[0].span
    assert (span.file, span.line, span.column) == (str(path), 2, 6)
    assert info.value.exit_code == 2
