"""Cube complexes, the bimodule structure and tensor products."""

import pytest

from covkh.arc_algebra import alpha, build_arc_algebra
from covkh.checks import gluing_check
from covkh.complex import (
    EVEN,
    ODD,
    TangleBimodule,
    build_complex,
    kh_complex,
    kh_normalization,
    tensor_kh,
)
from covkh.homology import homology
from covkh.ring import RingElem
from covkh.tangles import TangleDiagram, split_diagram

one = RingElem.promote(1)


def _add(acc, vec, c=one):
    for k, v in vec.items():
        acc[k] = acc.get(k, RingElem()) + v * c
    return {k: v for k, v in acc.items() if not v.is_zero()}


def _scaled(vec, mono):
    return {k: v * RingElem({mono: 1}) for k, v in vec.items()}


def test_unknot_complex():
    C = kh_complex(TangleDiagram(0, (("cup", 0), ("cap", 0))))
    assert len(C) == 2
    assert sorted(g.q for g in C.gens) == [-1, 1]
    assert all(g.h == 0 for g in C.gens)


@pytest.mark.parametrize("name", ["hopf+", "hopf-", "trefoil+", "figure8"])
def test_d_squared_and_degrees_over_R(diagrams, name):
    C = kh_complex(diagrams[name])
    assert C.check_degrees()
    assert C.d_squared_zero()
    for spec in (EVEN, ODD):
        assert C.specialize(spec).d_squared_zero()


def test_specialize_twice():
    C = kh_complex(TangleDiagram(1, (("pos", 0),)))
    E = C.specialize(EVEN)
    assert E.specialize(EVEN) is E
    with pytest.raises(ValueError):
        E.specialize(ODD)


def test_normalization_counts_crossings():
    T = TangleDiagram(1, (("pos", 0), ("pos", 0), ("neg", 0)))
    npos, nneg = T.writhe_counts()
    assert kh_normalization(T) == (-nneg, npos + nneg + npos - 2 * nneg)


BIMODULE_CASES = [
    TangleDiagram(1, (("pos", 0),)),
    TangleDiagram(1, (("neg", 0),)),
    TangleDiagram(1, (("pos", 0), ("pos", 0))),
    TangleDiagram(1, (("cap", 0), ("cup", 0), ("pos", 0))),
    TangleDiagram(2, (("pos", 1), ("neg", 2))),
]


@pytest.mark.parametrize("T", BIMODULE_CASES, ids=lambda T: str(T.slices))
def test_bimodule_axioms(T):
    """``d`` commutes with both actions and the actions associate up to ``alpha``."""
    B = TangleBimodule(T)
    C = B.complex
    Hl, Hr = build_arc_algebra(T.n_out), build_arc_algebra(T.n_in)

    def d(vec):
        out = {}
        for i, v in vec.items():
            out = _add(out, C.diff[i], v)
        return out

    def left(y, vec):
        out = {}
        for i, v in vec.items():
            out = _add(out, B.left_action(y, i), v)
        return out

    def right(vec, x):
        out = {}
        for i, v in vec.items():
            out = _add(out, B.right_action(i, x), v)
        return out

    checked = 0
    for idx in range(len(C.gens)):
        for y in Hl.basis():
            assert d(B.left_action(y, idx)) == left(y, C.diff[idx])
        for x in Hr.basis():
            assert d(B.right_action(idx, x)) == right(C.diff[idx], x)
        gm = B.shifted_degree(idx)
        for y2 in Hl.basis():
            if y2[0] != gm.target:
                continue
            for y1 in Hl.basis():
                if y1[0] != y2[1]:
                    continue
                lhs = {}
                for k, v in Hl.multiply({y1: one}, {y2: one}).items():
                    lhs = _add(lhs, B.left_action(k, idx), v)
                rhs = left(y1, B.left_action(y2, idx))
                assert lhs == _scaled(rhs, alpha(Hl.gdegree(y1), Hl.gdegree(y2), gm))
                checked += 1
        for x2 in Hr.basis():
            if x2[1] != gm.source:
                continue
            for x1 in Hr.basis():
                if x1[1] != x2[0]:
                    continue
                lhs = {}
                for k, v in Hr.multiply({x2: one}, {x1: one}).items():
                    lhs = _add(lhs, B.right_action(idx, k), v)
                rhs = right(right({idx: one}, x2), x1)
                assert rhs == _scaled(lhs, alpha(gm, Hr.gdegree(x2), Hr.gdegree(x1)))
                checked += 1
            for y in Hl.basis():
                if y[0] != gm.target:
                    continue
                lhs = right(B.left_action(y, idx), x2)
                rhs = left(y, B.right_action(idx, x2))
                assert lhs == _scaled(rhs, alpha(Hl.gdegree(y), gm, Hr.gdegree(x2)))
                checked += 1
    assert checked > 0


@pytest.mark.parametrize("spec", [EVEN, ODD], ids=["even", "odd"])
def test_flat_tensor_product(diagrams, spec):
    """For crossingless pieces the tensor product is already the composite."""
    cup, cap = split_diagram(diagrams["unknot"], 1)
    rep = gluing_check(cap, cup, spec)
    assert rep.isomorphic
    assert rep.composite.total_rank() == 2
    C = tensor_kh(cap, cup, spec)
    assert C.d_squared_zero()


def test_cap_on_parallel_strands_is_rejected():
    # both bottom strands point up by default, so no cap can join them
    with pytest.raises(ValueError):
        kh_complex(TangleDiagram(1, (("cap", 0),)))


@pytest.mark.parametrize("spec", [EVEN, ODD], ids=["even", "odd"])
def test_small_gluing(diagrams, spec):
    T = diagrams["hopf+"]
    for cut in range(1, len(T.slices)):
        T1, T2 = split_diagram(T, cut)
        if T1.n_out == 0 or T1.n_crossings + T2.n_crossings == 0:
            continue
        rep = gluing_check(T2, T1, spec)
        assert rep.isomorphic, cut
        assert rep.composite == homology(kh_complex(T), spec)


@pytest.mark.parametrize("name", ["trefoil+", "figure8"])
def test_crossing_order_does_not_change_homology(diagrams, name):
    T = diagrams[name]
    k = T.n_crossings
    base = {s: homology(kh_complex(T), s) for s in (EVEN, ODD)}
    for order in (list(reversed(range(k))), list(range(1, k)) + [0]):
        C = kh_complex(T, order=order)
        assert C.d_squared_zero()
        for s in (EVEN, ODD):
            assert homology(C, s) == base[s]


def test_build_complex_records_blocks():
    T = TangleDiagram(1, (("pos", 0),))
    C = build_complex(T)
    blocks = C.info["blocks"]
    assert len(C.info["closures"]) == 1  # B^1 has a single matching
    assert len(blocks) == 2
    assert sum(b.space.rank for b in blocks.values()) == len(C)
