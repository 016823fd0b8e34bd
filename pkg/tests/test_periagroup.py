import json
import logging
from itertools import combinations, product

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from mediangle import families as fam
from mediangle.errors import (
    BudgetExceededError, CapExceededError, IncompleteBallError, InputError, MoveError, PreconditionError,
)
from mediangle.graph import Graph, is_gated
from mediangle.groups import GroupSpec
from mediangle.periagroup import (
    Move, Presentation, apply_move, canonical_form, cayley_ball, corpus_presentations, coset_min_rep,
    coxeter, coxeter_a, default_budget, dihedral, exchange_check, flip_closure, graph_product, is_reduced,
    parabolic, parabolic_intersection, reduce, verify_semidirect, word_length, word_to_json, words_equal,
)
from mediangle.recognition import is_mediangle
from oracles import DirectProductOracle, FreeProductOracle, PermOracle, dihedral_oracle, symmetric_oracle
from test_graph import to_nx

U, V, W = (0, 1), (1, 1), (2, 1)


def words(alphabet, max_len):
    for n in range(max_len + 1):
        yield from product(alphabet, repeat=n)


def s3z3_oracle():
    return PermOracle({(0, 1): (1, 0, 2, 3, 4, 5), (1, 1): (0, 2, 1, 3, 4, 5),
                       (2, 1): (0, 1, 2, 4, 5, 3), (2, 2): (0, 1, 2, 5, 3, 4)})


# presentation, oracle, alphabet, exhaustive length
ORACLE_CASES = {
    "dihedral-3": (dihedral(3), dihedral_oracle(3), [U, V], 8),
    "dihedral-4": (dihedral(4), dihedral_oracle(4), [U, V], 8),
    "dihedral-5": (dihedral(5), dihedral_oracle(5), [U, V], 8),
    "dihedral-6": (dihedral(6), dihedral_oracle(6), [U, V], 8),
    "A3": (coxeter_a(3), symmetric_oracle(3), [U, V, W], 8),
    "Z2xZ3xZ4": (graph_product([2, 3, 4], [(0, 1), (0, 2), (1, 2)]), DirectProductOracle((2, 3, 4)),
                 [(0, 1), (1, 1), (1, 2), (2, 1), (2, 2), (2, 3)], 5),
    "Z2*Z3": (graph_product([2, 3], []), FreeProductOracle((2, 3)), [(0, 1), (1, 1), (1, 2)], 8),
    "S3xZ3": (corpus_presentations()["s3xz3"], s3z3_oracle(), [(0, 1), (1, 1), (2, 1), (2, 2)], 6),
}


# -- presentations ------------------------------------------------------


def test_validate_examples():
    coxeter(2, {(0, 1): 3})
    with pytest.raises(InputError):
        Presentation(Graph(2, [(0, 1)]), {(0, 1): 3}, [GroupSpec.cyclic(2), GroupSpec.cyclic(3)])
    Presentation(Graph(2, [(0, 1)]), {(0, 1): 2}, [GroupSpec.cyclic(3), GroupSpec.infinite()])


@pytest.mark.parametrize("labels, groups", [
    ({(0, 1): 1}, [2, 2]),
    ({}, [2, 2]),
    ({(0, 1): 2}, [2]),
])
def test_validate_rejects(labels, groups):
    with pytest.raises(InputError):
        Presentation(Graph(2, [(0, 1)]), labels, [GroupSpec.cyclic(k) for k in groups])


def test_presentation_json_round_trip():
    for p in corpus_presentations().values():
        text = json.dumps(p.to_json())
        q = Presentation.from_json(json.loads(text))
        assert q.labels == p.labels and q.groups == p.groups and q.gamma.edges == p.gamma.edges


@pytest.mark.parametrize("obj", [
    {"vertices": [{"id": 1, "group": "Z/2"}]},
    {"vertices": [{"id": 0}]},
    {"vertices": [{"id": 0, "group": "Z/2"}], "edges": [{"u": 0}]},
    {"edges": []},
])
def test_presentation_json_rejects(obj):
    with pytest.raises(InputError):
        Presentation.from_json(obj)


def test_phi_psi_and_sub():
    p = corpus_presentations()["s3xz3"]
    assert p.phi == (0, 1) and p.psi == (2,)
    sub, keep = p.sub([0, 1])
    assert keep == (0, 1) and sub.labels == {(0, 1): 3} and sub.is_coxeter


def test_word_parsing(caplog):
    p = graph_product([3, 2], [(0, 1)])
    assert p.word([0, (1, 1), {"vertex": 0, "element": 2}]) == ((0, 1), (1, 1), (0, 2))
    with caplog.at_level(logging.WARNING):
        assert p.word([(0, 0), (1, 1)]) == ((1, 1),)
    assert "identity" in caplog.text
    for bad in ([(2, 1)], [(0, 3)], [{"vertex": 0}], ["u"], [(True, 1)]):
        with pytest.raises(InputError):
            p.word(bad)
    assert word_to_json(p.word([0])) == [{"vertex": 0, "element": 1}]
    assert p.inverse(p.word([(0, 1), (1, 1)])) == ((1, 1), (0, 2))


# -- moves --------------------------------------------------------------


def test_move_examples():
    z3 = graph_product([3], [])
    assert apply_move(z3, ((0, 1), (0, 1)), Move.fusion(0)) == ((0, 2),)
    d3 = dihedral(3)
    assert apply_move(d3, (U, V, U), Move.dihedral(0)) == (V, U, V)
    d2 = dihedral(2)
    assert apply_move(d2, (U, V), Move.dihedral(0, (0, 1))) == (V, U)
    assert apply_move(z3, ((0, 1), (0, 0)), Move.reduction(1)) == ((0, 1),)


@pytest.mark.parametrize("p, w, move", [
    (dihedral(3), (U, V), Move.dihedral(0)),
    (dihedral(3), (U, V, V), Move.dihedral(0)),
    (dihedral(3), (U, V, U), Move.fusion(0)),
    (dihedral(3), (U, V, U), Move.reduction(1)),
    (dihedral(3), (U, V, U), Move.dihedral(3)),
    (dihedral(3), (U, V, U), Move.dihedral(0, (0, 2))),
    (dihedral(3), (U, V, U), Move("swap", 0)),
    (coxeter(3, {(0, 1): 2}), (U, W), Move.dihedral(0)),
])
def test_inapplicable_moves(p, w, move):
    with pytest.raises(MoveError):
        apply_move(p, w, move)


def available_moves(w):
    for i in range(len(w)):
        yield Move.fusion(i)
        yield Move.dihedral(i)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(sorted(ORACLE_CASES)), st.data())
def test_moves_are_sound(name, data):
    p, oracle, alphabet, _ = ORACLE_CASES[name]
    w = tuple(data.draw(st.lists(st.sampled_from(alphabet), max_size=10)))
    before = oracle.evaluate(w)
    for move in available_moves(w):
        try:
            new = apply_move(p, w, move)
        except MoveError:
            continue
        assert oracle.evaluate([s for s in new if s[1] != 0]) == before
        if move.kind == "fusion":
            assert len(new) == len(w) - 1
        else:
            assert len(new) == len(w)


# -- reduction and normal forms -----------------------------------------


def test_reduce_examples():
    d3 = dihedral(3)
    r = reduce(d3, (U, V, U, V))
    assert r == (V, U) and dihedral_oracle(3).length(r) == 2
    assert reduce(graph_product([3], []), ((0, 1),) * 3) == ()
    assert reduce(d3, (U, V)) == (U, V)


@pytest.mark.parametrize("name", sorted(ORACLE_CASES))
def test_reduce_matches_oracle_length_exhaustively(name):
    p, oracle, alphabet, max_len = ORACLE_CASES[name]
    for w in words(alphabet, max_len):
        assert len(reduce(p, w)) == oracle.length(w), w


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(sorted(ORACLE_CASES)), st.data())
def test_canonical_form_decides_equality(name, data):
    p, oracle, alphabet, _ = ORACLE_CASES[name]
    w1 = tuple(data.draw(st.lists(st.sampled_from(alphabet), max_size=12)))
    w2 = tuple(data.draw(st.lists(st.sampled_from(alphabet), max_size=12)))
    c1 = canonical_form(p, w1)
    assert canonical_form(p, c1) == c1
    assert oracle.evaluate(c1) == oracle.evaluate(w1)
    assert len(c1) == oracle.length(w1)
    assert words_equal(p, w1, w2) == (oracle.evaluate(w1) == oracle.evaluate(w2))


def test_canonical_form_examples():
    d2 = dihedral(2)
    assert canonical_form(d2, (V, U)) == (U, V)
    assert canonical_form(dihedral(3), (V, U, V)) == (U, V, U)
    assert canonical_form(d2, ()) == ()


def test_words_equal_examples():
    d3 = dihedral(3)
    assert words_equal(d3, (U, V) * 3, ())
    assert words_equal(dihedral(2), (U, V), (V, U))
    assert not words_equal(d3, (U,), (V,))


@pytest.mark.parametrize("name", ["dihedral-4", "A3", "S3xZ3", "Z2xZ3xZ4"])
def test_reduced_words_form_one_flip_closure(name):
    p, oracle, alphabet, _ = ORACLE_CASES[name]
    max_len = 6 if len(alphabet) <= 4 else 4
    by_element = {}
    for w in words(alphabet, max_len):
        el = oracle.evaluate(w)
        if len(w) == oracle.length(w):
            by_element.setdefault(el, set()).add(tuple(w))
    assert len(by_element) > 1
    for el, reduced in by_element.items():
        # flips preserve length, so every word in the closure was enumerated
        closure = set(flip_closure(p, min(reduced)))
        assert all(is_reduced(p, x) for x in closure)
        assert closure == reduced, (name, el)


def test_infinite_cyclic_words():
    p = Presentation(Graph(2, [(0, 1)]), {(0, 1): 2}, [GroupSpec.infinite(), GroupSpec.cyclic(2)])
    assert reduce(p, ((0, 3), (0, -3))) == ()
    assert reduce(p, ((0, 2), (1, 1), (0, 5))) in {((0, 7), (1, 1)), ((1, 1), (0, 7))}
    assert canonical_form(p, ((1, 1), (0, -1))) == ((0, -1), (1, 1))
    assert words_equal(p, ((0, 1), (1, 1)), ((1, 1), (0, 1)))
    free = Presentation(Graph(2), {}, [GroupSpec.infinite(), GroupSpec.cyclic(2)])
    assert not words_equal(free, ((0, 1), (1, 1)), ((1, 1), (0, 1)))
    assert word_length(free, ((0, 1), (1, 1), (1, 1), (0, 4))) == 1
    with pytest.raises(InputError):
        cayley_ball(p)
    with pytest.raises(InputError):
        p.syllables()


def test_budget(monkeypatch):
    d = dihedral(3)
    w = (U, V) * 3
    with pytest.raises(BudgetExceededError):
        flip_closure(coxeter(3, {(0, 1): 2, (1, 2): 2, (0, 2): 2}), (U, V, W), budget=2)
    assert len(flip_closure(coxeter(3, {(0, 1): 2, (1, 2): 2, (0, 2): 2}), (U, V, W))) == 6
    monkeypatch.setenv("MEDIANGLE_BUDGET", "1")
    assert default_budget() == 1
    with pytest.raises(BudgetExceededError):
        reduce(d, w)
    monkeypatch.setenv("MEDIANGLE_BUDGET", "lots")
    with pytest.raises(InputError):
        default_budget()
    monkeypatch.delenv("MEDIANGLE_BUDGET")
    assert default_budget() == 10 ** 6


# -- exchange and cosets ------------------------------------------------


def test_exchange_examples():
    d3 = dihedral(3)
    r = exchange_check(d3, (U, V, U), V)
    assert r["case"] == "shorter" and r["holds"] and r["len_gs"] == 2
    assert r["witness"][-1] == {"vertex": 1, "element": 1}
    z3 = graph_product([3], [])
    r = exchange_check(z3, ((0, 1),), (0, 1))
    assert r["case"] == "equal" and r["holds"] and r["witness"] == [{"vertex": 0, "element": 1}]
    r = exchange_check(d3, (), U)
    assert r["case"] == "longer" and r["holds"]
    with pytest.raises(InputError):
        exchange_check(d3, (U, U), V)


@pytest.mark.parametrize("name", ["A3", "S3xZ3", "dihedral-5"])
def test_exchange_holds_for_all_elements(name):
    p, _, alphabet, _ = ORACLE_CASES[name]
    ball = cayley_ball(p)
    for w in ball.reps:
        for s in alphabet:
            assert exchange_check(p, w, s)["holds"], (w, s)


def test_coset_min_rep_examples():
    d3 = dihedral(3)
    assert coset_min_rep(d3, (U, V, U), [1]) == (V, U)
    assert coset_min_rep(d3, (), [0, 1]) == ()
    assert coset_min_rep(d3, (U,), [0]) == ()
    with pytest.raises(PreconditionError):
        coset_min_rep(graph_product([3], []), (), [0])
    with pytest.raises(InputError):
        coset_min_rep(d3, (), [5])


@pytest.mark.parametrize("t", [(0,), (1,), (0, 1), (0, 2), (1, 2)])
def test_coset_min_rep_is_unique_minimum(t):
    p = coxeter_a(3)
    oracle = symmetric_oracle(3)
    sub_gens = [oracle.gens[(u, 1)] for u in t]
    ball = cayley_ball(p)
    for w in ball.reps:
        g = oracle.evaluate(w)
        coset = {g}
        frontier = [g]
        while frontier:
            frontier = [oracle.mul(x, s) for x in frontier for s in sub_gens if oracle.mul(x, s) not in coset]
            coset.update(frontier)
        best = min(oracle.lengths[x] for x in coset)
        assert sum(oracle.lengths[x] == best for x in coset) == 1
        m = coset_min_rep(p, w, t)
        assert oracle.evaluate(m) in coset and len(m) == best


# -- Cayley balls -------------------------------------------------------


@pytest.mark.parametrize("p, expected", [
    (dihedral(3), fam.cycle(6)),
    (graph_product([3, 2], [(0, 1)]), fam.hamming(2, 3)),
    (graph_product([4], []), fam.complete(4)),
])
def test_cayley_ball_examples(p, expected):
    ball = cayley_ball(p)
    assert ball.complete and ball.order == expected.n and ball.reps[0] == ()
    assert nx.is_isomorphic(to_nx(ball.graph), to_nx(expected))


@pytest.mark.parametrize("name", sorted(corpus_presentations()))
def test_cayley_ball_labels_and_mediangle(name):
    p = corpus_presentations()[name]
    ball = cayley_ball(p)
    assert ball.complete
    for (i, j), s in ball.labels.items():
        assert canonical_form(p, ball.reps[i] + (s,)) == ball.reps[j]
    for i, w in enumerate(ball.reps):
        assert canonical_form(p, w) == w and ball.element_of(w) == i
    assert is_mediangle(ball.graph).holds


def test_cayley_ball_sizes_match_oracles():
    for name in ("dihedral-5", "A3", "S3xZ3"):
        p, oracle, _, _ = ORACLE_CASES[name]
        ball = cayley_ball(p)
        assert ball.order == oracle.order
        assert len({oracle.evaluate(w) for w in ball.reps}) == oracle.order


def test_partial_ball():
    p = coxeter(3, {})
    ball = cayley_ball(p, radius=2)
    assert not ball.complete and ball.order == 1 + 3 + 6
    assert ball.graph.ball is not None and ball.graph.ball.radius == 2
    with pytest.raises(IncompleteBallError):
        ball.group()
    with pytest.raises(IncompleteBallError):
        ball.element_of((U, V, W))
    with pytest.raises(CapExceededError):
        cayley_ball(p, vertex_cap=50)
    capped = cayley_ball(p, radius=5, vertex_cap=50)
    assert not capped.complete and capped.order == 50
    with pytest.raises(InputError):
        cayley_ball(p, radius=-1)


def test_cayley_ball_json_is_deterministic():
    p = corpus_presentations()["s3xz3"]
    a = json.dumps(cayley_ball(p).to_json(), sort_keys=True)
    b = json.dumps(cayley_ball(Presentation.from_json(p.to_json())).to_json(), sort_keys=True)
    assert a == b


# -- semidirect and parabolics ------------------------------------------


@pytest.mark.parametrize("name, order, kernel", [("prism", 6, 3), ("hexagon", 6, 1), ("s3xz3", 18, 3)])
def test_semidirect_examples(name, order, kernel):
    r = verify_semidirect(corpus_presentations()[name])
    assert r["holds"] and r["order"] == order and r["kernel_order"] == kernel
    assert r["order"] == r["kernel_order"] * r["coxeter_order"]


def test_semidirect_needs_complete_ball():
    p = coxeter(2, {})
    with pytest.raises(IncompleteBallError):
        verify_semidirect(p, cayley_ball(p, radius=3))


def test_parabolic_examples():
    p = dihedral(3)
    ball = cayley_ball(p)
    assert parabolic(p, ball, (), [0]) == tuple(sorted((0, ball.element_of((U,)))))
    coset = parabolic(p, ball, (V,), [0])
    assert coset == tuple(sorted((ball.element_of((V,)), ball.element_of((V, U)))))
    s4 = coxeter_a(3)
    ball4 = cayley_ball(s4)
    sub = parabolic(s4, ball4, (), [0, 1])
    assert len(sub) == 6 and is_gated(ball4.graph, sub)
    with pytest.raises(InputError):
        parabolic(s4, ball4, (), [7])


def test_parabolic_intersection_examples():
    p = dihedral(3)
    ball = cayley_ball(p)
    r = parabolic_intersection(p, ball, ((), [0]), ((), [1]))
    assert r.xi == () and r.elements == frozenset({0})
    s4 = coxeter_a(3)
    ball4 = cayley_ball(s4)
    r = parabolic_intersection(s4, ball4, ((), [0, 1]), ((), [1, 2]))
    assert r.xi == (1,) and len(r.elements) == 2
    r = parabolic_intersection(s4, ball4, ((W,), [0, 1]), ((), [1, 2]))
    oracle = symmetric_oracle(3)
    a = oracle.gens[(0, 1)]
    b = oracle.gens[(1, 1)]
    c = oracle.gens[(2, 1)]
    # c <a, b> c and <b, c> as permutation sets
    sab = {oracle.identity}
    for _ in range(6):
        sab |= {oracle.mul(x, y) for x in sab for y in (a, b)}
    sbc = {oracle.identity}
    for _ in range(6):
        sbc |= {oracle.mul(x, y) for x in sbc for y in (b, c)}
    conj = {oracle.mul(oracle.mul(c, x), c) for x in sab}
    brute = conj & sbc
    assert {oracle.evaluate(ball4.reps[e]) for e in r.elements} == brute


def test_vertex_group_conjugates_meet_trivially():
    p = corpus_presentations()["s3xz3"]
    grp = cayley_ball(p).group()
    for u, v in combinations(range(p.n), 2):
        a = grp.vertex_group(u)
        for g in range(grp.n):
            meet = grp.conjugate_set(g, grp.vertex_group(v)) & a
            if meet != {0}:
                assert p.groups[u].order == p.groups[v].order == 2 and meet == a
