"""
Тесты моделей знаковых систем, связок, кодирования данных и интеграции
"""

import pytest

from core.algebra import make_algebra, product_project
from core.diagram import project_limit
from core.errors import IntegrationClashError, SemioticError
from core.grammar import (
    Library, Semantics, flat_ontology, refine, single_arrow_configuration,
)
from core.relation import (
    MultiMorphism, Port, SOURCE, TARGET, crisp_identity, crisp_omega_set, equal, omega_map,
)
from core.semiotic import (
    ConstantRelation, Model, SignSystem, check_natural_transformation,
    compose_natural_transformations, diagram_connective, encode_dataset, extend_model,
    integrate, integration_schema_colimit, interpret, is_true_relation, logic_component,
    mining_schema, relation_map, requirement_of, truth_degree, validate_model,
)
from core.workspace import load_spec, parse_spec


@pytest.fixture
def linear(specs_dir):
    return load_spec(specs_dir / "linear.sem").semiotic


@pytest.fixture
def additive(specs_dir):
    return load_spec(specs_dir / "additive.sem").semiotic


def chain_model():
    b = make_algebra("boolean")
    sets = {s: crisp_omega_set(s, ["0", "1"], b) for s in "abc"}

    def step(src, tgt, mapping):
        return MultiMorphism(b, [Port(src, SOURCE, sets[src]), Port(tgt, TARGET, sets[tgt])],
                             {(x, mapping[x]): 1.0 for x in mapping}, name=f"{src}{tgt}")

    model = Model(b, sets, {"u": step("a", "b", {"0": "1", "1": "0"}),
                            "v": step("b", "c", {"0": "0", "1": "0"})})
    library = Library(flat_ontology(["a", "b", "c"]), {"u": "a b+", "v": "b c+", "s": "a c+"})
    return model, library


def test_linear_model_is_valid(linear):
    report = validate_model(linear.system(), linear.model())
    assert report.ok, report.failures()
    names = [c.name for c in report.conditions]
    assert "E:refl" in names and "E:antisym" in names
    assert "requirements:ge" in names


def test_transitivity_degree_and_witness(linear):
    degree, witness = truth_degree(linear.resolve("trans"))
    assert degree == 0.0
    assert witness == ("0", "1", "3")
    assert not is_true_relation(linear.resolve("trans"))
    assert is_true_relation(linear.resolve("antisym"))


def test_corrupted_order_fails_reflexivity(specs_dir):
    text = (specs_dir / "linear.sem").read_text(encoding="utf-8")
    broken = text.replace("entry 2 0 = 1.0 ; entry 2 1 = 1.0 ; entry 2 2 = 1.0",
                          "entry 2 0 = 1.0 ; entry 2 1 = 1.0 ; entry 2 2 = 0.5")
    assert broken != text
    s = parse_spec(broken, "broken.sem").semiotic
    failures = {c.name: c for c in validate_model(s.system(), s.model()).failures()}
    assert "E:refl" in failures
    assert failures["E:refl"].witness == ("2",)
    assert failures["E:refl"].degree == pytest.approx(0.5)


def test_limit_bindings_checked_positionally(linear):
    system = linear.system()
    system.limit_bindings = [("eq", linear.diagrams["eq_xy"]), ("ge", linear.diagrams["eq_xy"])]
    report = validate_model(system, linear.model())
    by_name = {c.name: c for c in report.conditions}
    assert by_name["U:eq"].passed
    assert not by_name["U:ge"].passed
    assert by_name["U:ge"].witness is not None


def test_additive_identity_diagram(additive):
    projected = project_limit(additive.diagrams["ident"])
    for x in ("0", "1", "2"):
        assert projected.value((x,)) == pytest.approx(1.0)
    assert validate_model(additive.system(), additive.model()).ok


def test_interpretation_of_single_arrow(additive):
    plus = additive.comps["plus"]
    assert requirement_of(plus) == ("A", "A", "A+")
    config = single_arrow_configuration(additive.library(), "plus")
    assert equal(interpret(config, additive.model()), plus)


def test_refinement_preserves_interpretation():
    model, library = chain_model()
    semantics = Semantics({"s": ("u", "v")})
    extended = extend_model(model, library, semantics)
    config = single_arrow_configuration(library, "s")
    refined = refine(config, semantics, library)
    assert equal(interpret(config, extended), interpret(refined, model))
    assert extended.comp("s").value(("0", "0")) == 1.0


def test_model_reports_missing_interpretation():
    model, _ = chain_model()
    with pytest.raises(SemioticError):
        model.comp("w")
    with pytest.raises(SemioticError):
        model.oset("d")


def test_logic_components(linear):
    model = linear.model()
    diag = logic_component("diagonal", model, ["A"])
    assert diag.port_names == ["A", "A_2", "A_3"]
    assert diag.value(("0", "1", "2")) == pytest.approx(0.5 * 0.25)
    codiag = logic_component("codiagonal", model, ["A"])
    assert len(codiag.sources) == 2 and len(codiag.targets) == 1
    sim = logic_component("similarity", model, ["A"])
    assert sim.is_predicate()
    assert sim.value(("1", "2")) == 0.5
    assert logic_component("truth", model).value(()) == 1.0
    with pytest.raises(SemioticError):
        logic_component("rename", model, ["A"])
    with pytest.raises(SemioticError):
        logic_component("swap", model, ["A"])


def test_connective_of_diagrams(linear):
    both = diagram_connective("meet", linear.diagrams["ge_xy"], linear.diagrams["ge_yx"])
    m = relation_map(both)
    assert m.port_names == ["x", "y"]
    assert m.value(("0", "1")) == pytest.approx(0.5)
    assert m.value(("2", "2")) == 1.0
    with pytest.raises(SemioticError):
        diagram_connective("xor", linear.diagrams["ge_xy"], linear.diagrams["ge_yx"])


def test_connective_rejects_conflicting_variables(linear, additive):
    with pytest.raises(SemioticError):
        diagram_connective("meet", linear.diagrams["refl"], additive.diagrams["ident"])


def test_constant_relation_has_no_spec_text(product):
    o = crisp_omega_set("A", ["0"], product)
    const = ConstantRelation(product, 0.5, [("x", o)])
    assert relation_map(const).value(("0",)) == 0.5
    with pytest.raises(SemioticError):
        const.describe()


def test_encode_dataset(specs_dir):
    s = load_spec(specs_dir / "dataset.sem").semiotic
    columns = [(c, s.osets["R_V"]) for c in "abcd"]
    rows = [("1.0", "0.5", "0.2", "0.2"), ("1.0", "1.0", "0.2", "0.2"), ("1.0", "1.0", "0.0", "0.2")]
    enc = encode_dataset(rows, columns, name="data")
    m = relation_map(enc.relation)
    for row in rows:
        assert m.value(row) == pytest.approx(1.0)
    assert m.value(("0.5", "0.5", "0.2", "0.2")) == pytest.approx(0.5)
    assert sorted(enc.diagrams) == ["data_row1", "data_row2", "data_row3"]
    assert "is_a_3" in enc.comps
    with pytest.raises(SemioticError):
        encode_dataset([("1.0", "7")], columns[:2])


def test_encode_empty_dataset_is_bottom(specs_dir):
    s = load_spec(specs_dir / "dataset.sem").semiotic
    enc = encode_dataset([], [("a", s.osets["R_V"])])
    assert relation_map(enc.relation).items() == []
    assert enc.diagrams == {}


def test_natural_transformation_between_identical_models():
    b = make_algebra("boolean")
    o = crisp_omega_set("A", ["0", "1"], b)
    neg = MultiMorphism(b, [Port("A", SOURCE, o), Port("A'", TARGET, o)],
                        {("0", "1"): 1.0, ("1", "0"): 1.0}, name="neg")
    model = Model(b, {"A": o}, {"neg": neg})
    config = single_arrow_configuration(Library(flat_ontology(["A"]), {"neg": "A A+"}), "neg")
    ident = crisp_identity(o)
    assert check_natural_transformation(model, model, ident, ident, config).holds
    assert not check_natural_transformation(model, model, ident, neg, config).holds
    partial = MultiMorphism(b, [Port("A", SOURCE, o), Port("A'", TARGET, o)], {("0", "0"): 1.0})
    with pytest.raises(SemioticError):
        check_natural_transformation(model, model, partial, ident, config)


def test_mining_schema(linear):
    d = omega_map(linear.algebra, [("x", linear.osets["R_A"])], {("0",): 0.5, ("1",): 1.0})
    mined = mining_schema(d, linear.diagrams["ge_xy"])
    assert mined.value(("0", "1")) == pytest.approx(0.25)
    assert mined.value(("1", "0")) == 1.0
    with pytest.raises(SemioticError):
        mining_schema(omega_map(linear.algebra, [("w", linear.osets["R_A"])], {}),
                      linear.diagrams["ge_xy"])


def test_integration_lifts_values(specs_dir):
    g = load_spec(specs_dir / "integ_godel.sem").semiotic
    p = load_spec(specs_dir / "integ_product.sem").semiotic
    both = integrate([g, p], name="both")
    product = both.algebra
    assert len(product.factors) == 2
    assert both.comps["f"].value(("b",)) == pytest.approx((0.3, 1.0))
    assert both.comps["g"].value(("u",)) == pytest.approx((1.0, 0.6))
    assert product_project(product, 0, both.comps["f"].value(("b",))) == pytest.approx(0.3)
    assert product_project(product, 1, both.comps["g"].value(("u",))) == pytest.approx(0.6)
    assert both.osets["R_A"].sim("a", "b") == pytest.approx((0.5, 0.0))
    assert both.osets["R_A"].sim("a", "a") == both.algebra.top
    assert both.ontology.signs and "A" in both.ontology and "B" in both.ontology


INTEG_MAPS_GODEL = """
algebra G godel
sign S
sign A
oset C : S { support p q }
oset R_A : A {
  support a b
  sim a b 0.5
}
comp h : S -> S { entry p q = 1.0 ; entry q p = 1.0 }
"""

INTEG_MAPS_PRODUCT = """
algebra P product
sign A
oset R_A : A {
  support a b
  sim a b 0.5
}
comp k : A -> Omega { entry a = 0.5 }
"""


def test_integration_keeps_crisp_structure():
    g = parse_spec(INTEG_MAPS_GODEL, "g.sem").semiotic
    p = parse_spec(INTEG_MAPS_PRODUCT, "p.sem").semiotic
    both = integrate([g, p], name="both")
    bot, top = both.algebra.bot, both.algebra.top
    assert both.osets["C"].sim("p", "q") == pytest.approx(bot)
    assert both.osets["C"].sim("p", "p") == pytest.approx(top)
    assert both.comps["h"].value(("p", "q")) == pytest.approx(top)
    assert both.comps["h"].value(("p", "p")) == pytest.approx(bot)
    # общее Ω-множество видно в обеих координатах
    assert both.osets["R_A"].sim("a", "b") == pytest.approx((0.5, 0.5))
    assert both.comps["k"].value(("a",)) == pytest.approx((1.0, 0.5))
    assert both.comps["k"].value(("b",)) == pytest.approx((1.0, 0.0))


def test_integration_clash(specs_dir):
    g = load_spec(specs_dir / "integ_godel.sem").semiotic
    clash = load_spec(specs_dir / "integ_clash.sem").semiotic
    with pytest.raises(IntegrationClashError) as info:
        integrate([g, clash])
    assert info.value.exit_code == 2
    with pytest.raises(SemioticError):
        integrate([])


def test_sign_system_defaults():
    model, library = chain_model()
    report = validate_model(SignSystem(library), model)
    assert report.ok


def test_natural_transformations_compose():
    o = crisp_omega_set("A", ["0", "1"], make_algebra("boolean"))
    ident = crisp_identity(o)
    f, g = compose_natural_transformations((ident, ident), (ident, ident))
    assert equal(f, ident) and equal(g, ident)


def test_integration_schema_colimit(linear):
    r = linear.osets["R_A"]
    a = linear.algebra
    left = omega_map(a, [("x", r)], {("0",): 0.5, ("1",): 1.0})
    right = omega_map(a, [("y", r)], {("0",): 1.0, ("1",): 0.5})
    plain = integration_schema_colimit({"u": left, "v": right}, [])
    assert plain.port_names == ["x", "y"]
    assert plain.value(("1", "0")) == 1.0
    assert plain.value(("0", "1")) == pytest.approx(0.25)
    linked = integration_schema_colimit(
        {"u": left, "v": right},
        [("u", "v", linear.resolve_map("eq_xy")), ("u", "v", linear.resolve_map("ge_xy"))])
    # ⋁(eq, ge) в (1, 0) равно ge(1, 0)
    assert linked.value(("1", "0")) == 1.0
    assert linked.value(("0", "1")) == pytest.approx(0.25 * 0.5)
    with pytest.raises(SemioticError):
        integration_schema_colimit({}, [])
    with pytest.raises(SemioticError):
        integration_schema_colimit({"u": left}, [("u", "w", left)])
