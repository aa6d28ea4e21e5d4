"""
Тесты исчисления согласованности: Γ, ответы, модальности, ⊢_λ и λ-RL
"""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from core.algebra import make_algebra
from core.errors import InferenceError
from core.inference import (
    Answer, Atom, Binary, HypothesisPool, Interior, answer_cover, answers, answers_of_set,
    closure, codified_by, consequence_closure, consistency_check, diamond, entails, eval_rl, gamma, interior,
    mod_lambda, parse_formula, rl_degree, box,
)
from core.relation import crisp_omega_set, omega_map
from core.workspace import load_spec

RELATIONS = ["D_low", "D_high", "D_mid", "D_top"]


@pytest.fixture
def workspace(specs_dir):
    return load_spec(specs_dir / "pool.sem")


@pytest.fixture
def pool(workspace):
    return workspace.pool("P4")


def subsets(names):
    for r in range(len(names) + 1):
        yield from (list(c) for c in itertools.combinations(names, r))


def le(pool, f, g):
    f, g = pool.dense(f), pool.dense(g)
    return all(pool.algebra.leq(f[k], g[k]) for k in pool.keys)


def same(pool, f, g):
    return le(pool, f, g) and le(pool, g, f)


def test_answers_at_full_degree(pool):
    assert set(answers(pool.diagram("D_low"), 1.0, pool)) == {
        Answer("C_low", "W_full"), Answer("C_low", "W_left")}
    assert set(pool.answers("D_top", 1.0)) == {
        Answer("C_top", "W_full"), Answer("C_top", "W_left")}
    assert pool.answers("D_mid", 1.0) == []


def test_answers_at_half_degree(pool):
    assert set(pool.answers("D_low", 0.5)) == {
        Answer("C_low", "W_full"), Answer("C_low", "W_left"),
        Answer("C_half", "W_left"), Answer("C_top", "W_left")}


@pytest.mark.parametrize("name", RELATIONS)
def test_answers_grow_as_threshold_drops(pool, name):
    assert set(pool.answers(name, 1.0)) <= set(pool.answers(name, 0.5))
    assert set(pool.answers(name, 0.5)) <= set(pool.answers(name, 0.0))


def test_gamma_quality_and_witness(pool):
    result = gamma(pool.concepts["C_half"], pool.diagram("D_low"))
    assert result.quality == 0.0
    assert result.witness == ("2",)
    assert result.pointwise.value(("1",)) == 1.0
    assert gamma(pool.concepts["C_low"], pool.diagram("D_low")).quality == 1.0


def test_gamma_is_reflexive_symmetric_transitive(pool):
    maps = list(pool.diagrams.values()) + list(pool.concepts.values())
    a = pool.algebra
    for m in maps:
        assert a.is_top(gamma(m, m).quality)
    for m0, m1 in itertools.product(maps, repeat=2):
        assert a.eq(gamma(m0, m1).quality, gamma(m1, m0).quality)
    for m0, m1, m2 in itertools.product(maps, repeat=3):
        chained = a.tensor(gamma(m0, m1).quality, gamma(m1, m2).quality)
        assert a.leq(chained, gamma(m0, m2).quality)


def test_gamma_rejects_unrelated_variables(pool, product):
    other = omega_map(product, [("y", crisp_omega_set("B", ["u"], product))], {("u",): 1.0})
    with pytest.raises(InferenceError):
        gamma(pool.concepts["C_low"], other)


def test_consistency_modes(workspace):
    s = workspace.semiotic
    c_half, d_low, w_left = s.diagrams["C_half"], s.diagrams["D_low"], s.diagrams["W_left"]
    assert consistency_check(s.diagrams["C_low"], d_low, 1.0).holds
    full = consistency_check(c_half, d_low, 0.5)
    assert not full.holds
    assert full.fiber == [("0",), ("1",)]
    assert full.size == 3
    assert consistency_check(c_half, d_low, 0.5, mode="exists").holds
    assert consistency_check(c_half, d_low, 0.5, mode="forall_on", domain=w_left).holds
    with pytest.raises(InferenceError):
        consistency_check(c_half, d_low, 0.5, mode="forall_on")
    with pytest.raises(InferenceError):
        consistency_check(c_half, d_low, 0.5, mode="most")


@pytest.mark.parametrize("lam", [1.0, 0.5])
def test_interior_and_closure_laws(pool, lam):
    for g in pool.concepts.values():
        inner = interior(g, lam, pool)
        outer = closure(g, lam, pool)
        assert le(pool, inner, g)
        assert same(pool, interior(inner, lam, pool), inner)
        assert le(pool, g, outer)
        assert same(pool, closure(outer, lam, pool), outer)


def test_box_and_diamond(pool):
    low = pool.concepts["C_low"]
    assert "D_low" in box(low, 1.0, pool)
    assert "D_high" not in box(low, 1.0, pool)
    assert "D_low" in diamond(low, 1.0, pool)
    assert "D_mid" not in diamond(low, 1.0, pool)


@pytest.mark.parametrize("lam", [1.0, 0.5])
def test_consequence_closure_laws(pool, lam):
    for u in subsets(RELATIONS):
        closed = consequence_closure(u, lam, pool)
        assert set(u) <= set(closed)
        assert set(consequence_closure(closed, lam, pool)) == set(closed)
        for v in subsets(RELATIONS):
            if set(u) <= set(v):
                assert set(closed) <= set(consequence_closure(v, lam, pool))


def test_models_of_union_are_below_each(pool):
    for u, v in itertools.product(subsets(RELATIONS[:3]), repeat=2):
        union = mod_lambda(u + v, 1.0, pool)
        assert le(pool, union, mod_lambda(u, 1.0, pool))
        assert le(pool, union, mod_lambda(v, 1.0, pool))


def test_entailment(pool):
    assert entails(["D_low"], "D_low", 1.0, pool)
    assert not entails(["D_low"], "D_top", 1.0, pool)
    assert codified_by(["D_low"], 1.0, pool) == ["D_top"]
    with pytest.raises(InferenceError):
        entails(["D_unknown"], "D_low", 1.0, pool)


def test_pool_rejects_mismatched_variables(pool, product):
    other = omega_map(product, [("y", crisp_omega_set("A", ["0", "1", "2"], product))], {})
    with pytest.raises(InferenceError):
        HypothesisPool({"D": pool.diagram("D_low")}, {"C": other})
    with pytest.raises(InferenceError):
        HypothesisPool()
    with pytest.raises(InferenceError):
        pool.diagram("D_none")


def test_parse_formula():
    assert parse_formula(r"D_low /\ D_high") == Binary("meet", Atom("D_low"), Atom("D_high"))
    assert parse_formula("[I] D_low") == Interior(Atom("D_low"))
    assert str(parse_formula("D_low -> (D_high & D_mid)")) == "D_low -> (D_high & D_mid)"


def test_rl_atoms_and_connectives(pool):
    low = pool.concepts["C_low"]
    assert eval_rl(Atom("D_low"), low, 1.0, pool)
    both = parse_formula(r"D_low /\ D_high")
    assert rl_degree(both, low, 1.0, pool) == 0.0
    assert not eval_rl(both, low, 1.0, pool)
    assert eval_rl(both, low, 1.0, pool, split=(1.0, 0.0))
    assert eval_rl(parse_formula("D_high -> D_low"), low, 1.0, pool)
    with pytest.raises(InferenceError):
        eval_rl(Atom("D_low"), low, 1.0, pool, split=(1.0, 1.0))


def test_rl_interior(pool):
    low = pool.concepts["C_low"]
    assert same(pool, interior(low, 1.0, pool), low)
    assert eval_rl(parse_formula("[I] D_low"), low, 1.0, pool)
    assert eval_rl(parse_formula("[C] D_low"), low, 1.0, pool)


GRID = [0.0, 0.25, 0.5, 0.75, 1.0]
PRODUCT = make_algebra("product")


@st.composite
def random_pools(draw):
    """Пул над одной переменной: до 4 отношений и концептов, до 2 четких доменов."""
    support = [str(i) for i in range(draw(st.integers(1, 3)))]
    x = [("x", crisp_omega_set("A", support, PRODUCT))]

    def table(values):
        return {(e,): draw(st.sampled_from(values)) for e in support}

    def maps(prefix, count, values):
        return {f"{prefix}{i}": omega_map(PRODUCT, x, table(values), name=f"{prefix}{i}")
                for i in range(count)}

    return HypothesisPool(maps("D", draw(st.integers(1, 4)), GRID),
                          maps("C", draw(st.integers(1, 4)), GRID),
                          maps("W", draw(st.integers(0, 2)), [0.0, 1.0]), name="rnd")


def closures_by_subset(pool, lam):
    return {frozenset(u): set(consequence_closure(u, lam, pool))
            for u in subsets(list(pool.diagrams))}


@given(pool=random_pools(), lam=st.sampled_from(GRID[1:]))
@settings(max_examples=100, deadline=None)
def test_inference_rules_on_random_pools(pool, lam):
    closed = closures_by_subset(pool, lam)
    names = list(pool.diagrams)
    for u, a_u in closed.items():
        assert u <= a_u
        for v, a_v in closed.items():
            if u <= v:
                assert a_u <= a_v
            for d in names:
                if d not in a_v:
                    continue
                for d2 in closed[u | {d}]:
                    assert d2 in closed[u | v], (set(u), set(v), d, d2)


@given(pool=random_pools(), lam=st.sampled_from(GRID[1:]))
@settings(max_examples=100, deadline=None)
def test_consequences_add_no_answers(pool, lam):
    for u in subsets(list(pool.diagrams)):
        ans_u = answers_of_set(u, lam, pool)
        for d in consequence_closure(u, lam, pool):
            assert le(pool, pool.to_map(answer_cover(d, lam, pool), "cover"), ans_u)
            assert same(pool, answers_of_set(u + [d], lam, pool), ans_u)


@given(pool=random_pools(), lam0=st.sampled_from(GRID), lam1=st.sampled_from(GRID))
@settings(max_examples=100, deadline=None)
def test_threshold_monotonicity_on_random_pools(pool, lam0, lam1):
    lam0, lam1 = min(lam0, lam1), max(lam0, lam1)
    for name in pool.diagrams:
        assert set(pool.answers(name, lam1)) <= set(pool.answers(name, lam0))
    for g in pool.concepts.values():
        assert set(diamond(g, lam1, pool)) <= set(diamond(g, lam0, pool))
        assert set(box(g, lam0, pool)) <= set(box(g, lam1, pool))


@given(pool=random_pools(), lam=st.sampled_from(GRID))
@settings(max_examples=100, deadline=None)
def test_interior_and_closure_on_random_pools(pool, lam):
    a = pool.algebra
    for g in pool.concepts.values():
        inner, outer = interior(g, lam, pool), closure(g, lam, pool)
        assert le(pool, inner, g) and le(pool, g, outer)
        assert same(pool, interior(inner, lam, pool), inner)
        assert same(pool, closure(outer, lam, pool), outer)
        for h in pool.concepts.values():
            gv, hv = pool.dense(g), pool.dense(h)
            lower = pool.to_map({k: a.meet(gv[k], hv[k]) for k in pool.keys}, "meet")
            assert le(pool, interior(lower, lam, pool), inner)
            assert le(pool, closure(lower, lam, pool), outer)


@pytest.mark.parametrize("lam", [1.0, 0.5])
def test_cut_and_answer_cover_on_fixture(pool, lam):
    closed = closures_by_subset(pool, lam)
    for u, v in itertools.product(closed, repeat=2):
        for d in closed[v]:
            assert closed[u | {d}] <= closed[u | v]
    for u in subsets(RELATIONS):
        ans_u = answers_of_set(u, lam, pool)
        for d in closed[frozenset(u)]:
            assert le(pool, pool.to_map(answer_cover(d, lam, pool), "cover"), ans_u)
