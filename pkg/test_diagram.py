"""
Тесты мульти-диаграмм: пределы, производные конструкции, коммутативность
"""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from core.algebra import make_algebra
from core.diagram import (
    Arrow, MultiDiagram, classifier_from_diagram, colimit, commutativity_degree,
    concept_to_diagram, is_simple_classifier, kan_construct, limit, project_colimit,
    project_limit,
)
from core.errors import CapExceededError, DiagramError
from core.grids import gaussian_sum_diagram, grid_points, sum_in_range
from core.relation import (
    MultiMorphism, Port, SOURCE, TARGET, crisp_identity, crisp_omega_set, equal,
    make_omega_set, omega_map,
)

P = make_algebra("product")
A = crisp_omega_set("A", ["0", "1"], P)
B = crisp_omega_set("B", ["0", "1"], P)
C = crisp_omega_set("C", ["0", "1"], P)


def rel(src, tgt, values, name):
    keys = [(x, y) for x in src.support for y in tgt.support]
    return MultiMorphism(P, [Port(src.sign, SOURCE, src), Port(tgt.sign, TARGET, tgt)],
                         dict(zip(keys, values)), name=name)


def single_arrow(f):
    return MultiDiagram(P, {"x": A, "y": B}, [Arrow("f", f, ("x",), ("y",))], ("x",), name="d")


def test_limit_of_single_arrow_is_its_table():
    f = rel(A, B, [1.0, 0.5, 0.0, 0.25], "f")
    lim = limit(single_arrow(f))
    assert [(p.name, p.role) for p in lim.ports] == [("x", SOURCE), ("y", TARGET)]
    assert equal(lim, f)
    assert project_limit(single_arrow(f)).value(("0",)) == 1.0
    assert project_limit(single_arrow(f)).value(("1",)) == 0.25


def test_limit_multiplies_extents():
    fuzzy = make_omega_set("A", ["0", "1"], P, [("1", "1", 0.5)])
    d = MultiDiagram(P, {"x": fuzzy}, [], ("x",))
    lim = limit(d)
    assert lim.value(("1",)) == 0.5
    assert equal(colimit(d), lim)


def test_colimit_joins_arrows():
    f = rel(A, B, [1.0, 0.0, 0.0, 0.0], "f")
    g = rel(A, B, [0.0, 0.0, 0.0, 0.5], "g")
    d = MultiDiagram(P, {"x": A, "y": B},
                     [Arrow("f", f, ("x",), ("y",)), Arrow("g", g, ("x",), ("y",))], ("x",))
    co = colimit(d)
    assert co.value(("0", "0")) == 1.0
    assert co.value(("1", "1")) == 0.5
    assert limit(d).items() == []


def test_enumeration_cap():
    f = rel(A, B, [1.0, 0.5, 0.0, 0.25], "f")
    with pytest.raises(CapExceededError) as info:
        limit(single_arrow(f), cap=3)
    assert info.value.exit_code == 3


def test_diagram_rejects_bad_arrows():
    f = rel(A, B, [1.0, 0.0, 0.0, 1.0], "f")
    with pytest.raises(DiagramError):
        MultiDiagram(P, {"x": A, "y": B}, [Arrow("f", f, ("x",), ())])
    with pytest.raises(DiagramError):
        MultiDiagram(P, {"x": A, "y": A}, [Arrow("f", f, ("x",), ("y",))])
    with pytest.raises(DiagramError):
        MultiDiagram(P, {"x": A}, [], ("z",))


def test_equalizer_and_coequalizer():
    r = rel(A, B, [1.0, 0.5, 0.0, 1.0], "r")
    s = rel(A, B, [0.5, 0.5, 1.0, 1.0], "s")
    eq = kan_construct("equalizer", r, s)
    co = kan_construct("coequalizer", r, s)
    assert eq.value(("0", "0")) == pytest.approx(0.5)
    assert eq.value(("0", "1")) == pytest.approx(0.25)
    assert eq.value(("1", "0")) == 0.0
    assert co.value(("1", "0")) == 1.0
    with pytest.raises(DiagramError):
        kan_construct("equalizer", r, rel(A, C, [1.0, 0.0, 0.0, 1.0], "t"))


def test_pullback_and_pushout():
    r = rel(A, C, [1.0, 0.0, 0.0, 1.0], "r")
    s = rel(B, C, [0.0, 0.5, 1.0, 0.0], "s")
    pb = kan_construct("pullback", r, s)
    assert pb.port_names == ["r.A", "s.B", "z.C"]
    assert pb.value(("0", "1", "0")) == 1.0
    assert pb.value(("1", "0", "1")) == 0.5
    assert pb.value(("0", "0", "0")) == 0.0
    po = kan_construct("pushout", rel(C, A, [1.0, 0.0, 0.0, 1.0], "r"),
                       rel(C, B, [0.5, 0.0, 0.0, 0.0], "s"))
    assert po.port_names == ["z.C", "r.A", "s.B"]
    assert po.value(("0", "0", "1")) == 1.0
    with pytest.raises(DiagramError):
        kan_construct("pullback", r, rel(B, A, [1.0, 0.0, 0.0, 1.0], "s"))
    with pytest.raises(DiagramError):
        kan_construct("fibration", r, s)


def test_grid_points_include_ends():
    points = grid_points(-3.0, 3.0, 0.5)
    assert len(points) == 13
    assert points[0] == -3.0 and points[-1] == 3.0


def test_gaussian_sum_commutes_on_wide_grid():
    d = gaussian_sum_diagram(P, w_lo=-6.0, w_hi=6.0)
    report = commutativity_degree(d)
    assert report.degree == pytest.approx(1.0, abs=1e-6)
    assert report.commutative
    assert report.checked == 13 * 13


def test_scaled_sum_is_lambda_commutative():
    d = gaussian_sum_diagram(P, w_lo=-6.0, w_hi=6.0, scale=0.8)
    report = commutativity_degree(d)
    assert report.degree == pytest.approx(0.8, abs=1e-6)
    assert not report.commutative
    assert report.witness is not None


def test_narrow_grid_commutes_only_on_restricted_sources():
    d = gaussian_sum_diagram(P)
    assert commutativity_degree(d, restrict=sum_in_range(-3.0, 3.0)).degree == \
        pytest.approx(1.0, abs=1e-6)
    full = commutativity_degree(d)
    assert full.degree < 1.0
    x, y = full.witness
    assert abs(float(x) + float(y)) > 3.0


def test_classifier_of_identity_arrow():
    ident = crisp_identity(A)
    d = MultiDiagram(P, {"x": A, "y": A}, [Arrow("i", ident, ("x",), ("y",))], ("x",))
    assert is_simple_classifier(d, "y")
    cls = classifier_from_diagram(d, "y", {"x": "0"})
    assert cls.value(("0",)) == 1.0
    assert cls.value(("1",)) == 0.0
    with pytest.raises(DiagramError):
        classifier_from_diagram(d, "y", {})
    with pytest.raises(DiagramError):
        classifier_from_diagram(d, "y", {"x": "7"})


def test_classifier_rejects_non_total_arrow():
    partial = MultiMorphism(P, [Port("A", SOURCE, A), Port("A'", TARGET, A)], {("0", "0"): 1.0})
    d = MultiDiagram(P, {"x": A, "y": A}, [Arrow("p", partial, ("x",), ("y",))], ("x",))
    with pytest.raises(DiagramError):
        classifier_from_diagram(d, "y", {"x": "0"})


def test_concept_to_diagram_recovers_concept():
    fuzzy = make_omega_set("A", ["a", "b"], P, [("b", "b", 0.5)])
    g = omega_map(P, [("v", fuzzy), ("w", B)],
                  {("a", "0"): 0.7, ("b", "1"): 0.4, ("b", "0"): 0.5}, name="g")
    d = concept_to_diagram(g)
    assert equal(limit(d), g)
    too_big = omega_map(P, [("v", fuzzy)], {("b",): 0.9})
    with pytest.raises(DiagramError):
        concept_to_diagram(too_big)


def test_projected_colimit_of_single_arrow():
    f = rel(A, B, [1.0, 0.5, 0.0, 0.25], "f")
    projected = project_colimit(single_arrow(f))
    assert projected.port_names == ["x"]
    assert projected.value(("0",)) == 1.0
    assert projected.value(("1",)) == 0.25


BOOL = make_algebra("boolean")


@st.composite
def boolean_diagrams(draw):
    """Диаграмма над булевой логикой: до 4 вершин, носители до 4, четкие стрелки."""
    count = draw(st.integers(1, 4))
    vertices = {f"v{i}": crisp_omega_set(f"S{i}", [str(k) for k in range(draw(st.integers(1, 4)))],
                                         BOOL)
                for i in range(count)}
    names = list(vertices)
    arrows, tables = [], []
    for n in range(draw(st.integers(0, 4))):
        src, tgt = draw(st.sampled_from(names)), draw(st.sampled_from(names))
        keys = [(x, y) for x in vertices[src].support for y in vertices[tgt].support]
        held = {k for k in keys if draw(st.booleans())}
        m = MultiMorphism(BOOL, [Port("src", SOURCE, vertices[src]),
                                 Port("tgt", TARGET, vertices[tgt])],
                          {k: 1.0 for k in held}, name=f"f{n}")
        arrows.append(Arrow(f"f{n}", m, (src,), (tgt,)))
        tables.append((src, tgt, held))
    return MultiDiagram(BOOL, vertices, arrows, (), name="rnd"), tables


@given(sample=boolean_diagrams())
@settings(max_examples=50, deadline=None)
def test_boolean_limit_is_classical_limit(sample):
    d, tables = sample
    names = list(d.vertices)
    classical = set()
    for key in itertools.product(*(d.vertices[v].support for v in names)):
        point = dict(zip(names, key))
        if all((point[src], point[tgt]) in held for src, tgt, held in tables):
            classical.add(key)
    top_fiber = {key for key, value in limit(d).items() if value == 1.0}
    assert top_fiber == classical
