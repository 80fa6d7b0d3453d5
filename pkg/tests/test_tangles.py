"""Flat tangles, diagrams, PD ingestion and Reidemeister helpers."""

import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from covkh.tangles import (
    BoundaryMismatch,
    FlatTangle,
    ParseError,
    TangleDiagram,
    add_bigon,
    add_kink,
    braid_closure,
    compose,
    count_components,
    diagram_from_json,
    enumerate_flat_tangles,
    enumerate_matchings,
    identity,
    matching_key,
    parse_diagram,
    pd_signs,
    pd_to_diagram,
    r3_pair,
    resolve,
    split_diagram,
    stack,
)


def flat(n_in, n_out):
    return st.sampled_from(enumerate_flat_tangles(n_in, n_out))


widths = st.integers(0, 2)


@st.composite
def chain(draw, length=3):
    ns = [draw(widths) for _ in range(length + 1)]
    return [draw(flat(ns[i], ns[i + 1])) for i in range(length)]


@pytest.mark.parametrize("n", range(6))
def test_matchings_are_catalan(n):
    ms = enumerate_matchings(n)
    assert len(ms) == math.comb(2 * n, n) // (n + 1)
    assert len({matching_key(m) for m in ms}) == len(ms)


def test_cap_after_cup_is_one_loop():
    cup = enumerate_flat_tangles(0, 1)[0]
    cap = enumerate_flat_tangles(1, 0)[0]
    t = compose(cap, cup)
    assert (t.n_in, t.n_out, t.loops) == (0, 0, 1)


def test_non_planar_rejected():
    with pytest.raises(ValueError):
        FlatTangle(2, 0, (2, 3, 0, 1))


def test_boundary_mismatch():
    with pytest.raises(BoundaryMismatch):
        compose(identity(2), identity(1))


@given(chain())
def test_compose_associative(ts):
    t1, t2, t3 = ts
    assert compose(t3, compose(t2, t1)) == compose(compose(t3, t2), t1)


@given(widths.flatmap(lambda n: widths.flatmap(lambda m: flat(n, m))))
def test_identity_is_neutral(t):
    assert compose(identity(t.n_out), t) == t
    assert compose(t, identity(t.n_in)) == t


@given(chain(2))
def test_bar_reverses_composition(ts):
    t1, t2 = ts
    assert t1.bar().bar() == t1
    assert compose(t2, t1).bar() == compose(t1.bar(), t2.bar())


def test_resolution_of_a_twist():
    # 0-smoothing of a negative-type crossing is horizontal: cap then cup
    T = TangleDiagram(1, (("neg", 0),))
    t = resolve(T, (0,))
    assert t.arcs() == [(0, 1), (2, 3)]
    assert resolve(T, (1,)) == identity(1)
    assert resolve(TangleDiagram(1, (("pos", 0),)), (0,)) == identity(1)
    assert resolve(TangleDiagram(0, ()), ()) == FlatTangle(0, 0, ())


def test_resolution_bits_checked():
    with pytest.raises(ValueError):
        resolve(TangleDiagram(1, (("neg", 0),)), (0, 1))


def test_word_validation():
    with pytest.raises(ValueError):
        TangleDiagram(0, (("cap", 0),))
    with pytest.raises(ValueError):
        TangleDiagram(1, (("pos", 1),))


def test_stack_and_split_roundtrip(diagrams):
    T = diagrams["figure8"]
    for k in range(len(T.slices) + 1):
        lo, up = split_diagram(T, k)
        glued = stack(lo, up)
        assert glued.slices == T.slices
        assert glued.signs() == T.signs()


def test_braid_closure_trefoil():
    T = braid_closure(2, [1, 1, 1])
    assert T.n_crossings == 3 and count_components(T) == 1
    assert sorted(T.signs()) in ([1, 1, 1], [-1, -1, -1])


def test_pd_signs_match_diagram(pd_codes, diagrams):
    for name, pd in pd_codes.items():
        if pd:
            assert sorted(pd_signs(pd)) == sorted(diagrams[name].signs()), name


def test_pd_components(pd_codes, diagrams):
    expected = {"hopf+": 2, "hopf-": 2}
    for name, T in diagrams.items():
        assert count_components(T) == expected.get(name, 1), name


def test_empty_pd_is_unknot():
    T = pd_to_diagram([])
    assert T.n_crossings == 0 and count_components(T) == 1


def test_json_forms():
    T = diagram_from_json({"type": "word", "n_in": 0, "slices": [{"cup": 0}, {"cap": 0}]})
    assert T.n_out == 0 and T.n_crossings == 0
    B = diagram_from_json({"type": "braid", "strands": 2, "word": [1, -1]})
    assert B.n_crossings == 2
    P = parse_diagram(json.dumps({"type": "pd", "crossings": [[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]]}))
    assert P.n_crossings == 3


@pytest.mark.parametrize("text, where", [
    ('{"type": "pd", "crossings": [[1, 2, 3]]}', "crossings[0]"),
    ('{"type": "word", "n_in": 0, "slices": [{"twist": 0}]}', "slices[0]"),
    ('{"type": "pd",\n  "crossings": [1, 2', "line 2"),
    ('{"type": "knot"}', "unknown input type"),
    ('[1, 2]', "type"),
])
def test_parse_errors_locate_problem(text, where):
    with pytest.raises(ParseError, match=where.replace("[", r"\[").replace("]", r"\]")):
        parse_diagram(text)


def test_reidemeister_helpers_change_crossing_counts(diagrams):
    T = diagrams["trefoil+"]
    assert add_kink(T, 2, 0, "pos").n_crossings == 4
    assert add_bigon(T, 2, 0).n_crossings == 5
    a, b = r3_pair(T, 2, 0)
    assert a.n_crossings == b.n_crossings == 6
    with pytest.raises(ValueError):
        r3_pair(T, 2, 0, ("pos", "neg", "pos"))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 5), st.sampled_from(["pos", "neg"]))
def test_kink_sign(level_seed, kind):
    T = TangleDiagram(0, (("cup", 0), ("cap", 0)))
    K = add_kink(T, 1, level_seed % 2, kind)
    assert K.n_crossings == 1 and count_components(K) == 1
