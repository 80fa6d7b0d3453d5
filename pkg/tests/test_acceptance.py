"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` (the lines are printed even
without ``-s``) or directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import sys
import time
from typing import Callable, Dict, List, Tuple

import pytest

from covkh.checks import (
    check_arc_algebras,
    check_cocycle,
    check_d_squared,
    check_iota_oracle,
    check_tqft_relations,
    gluing_check,
)
from covkh.complex import EVEN, ODD, kh_complex
from covkh.corpus import PD_CODES, corpus
from covkh.homology import euler_characteristic, homology
from covkh.oracle import classical_khovanov, jones_polynomial
from covkh.tangles import (
    add_bigon,
    add_kink,
    insert_crossings,
    pd_to_diagram,
    r3_pair,
    split_diagram,
    strand_orientations,
)

Outcome = Tuple[bool, str]
SPECS = {"even": EVEN, "odd": ODD}

# (corpus name, cut level): T1 = the first `cut` slices, T2 = the rest
GLUING_CUTS = [
    ("trefoil+", 3), ("trefoil+", 4), ("hopf-", 3),
    ("figure8", 3), ("figure8", 4), ("figure8", 5),
    ("5_1", 3), ("6_2", 3),
]


def _tables(T, order=None) -> Dict[str, object]:
    C = kh_complex(T, order=order)
    return {name: homology(C, spec) for name, spec in SPECS.items()}


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------


def criterion_1() -> Outcome:
    res = check_cocycle(2)
    ok = res.passed and res.seconds < 60
    return ok, f"{res.checked} quadruples over B^0, B^1, B^2 in {res.seconds:.1f}s, {len(res.failures)} failures"


def criterion_2() -> Outcome:
    res = check_arc_algebras(2)
    return res.passed, f"{res.checked} unit and associativity identities on H^1, H^2, {len(res.failures)} failures"


def criterion_3() -> Outcome:
    rel = check_tqft_relations(4)
    orc = check_iota_oracle(4)
    ok = rel.passed and orc.passed
    return ok, (f"{rel.checked} relation instances, {orc.checked} exchange pairs vs the TQFT oracle, "
                f"{len(rel.failures) + len(orc.failures)} failures")


def criterion_4() -> Outcome:
    t = time.perf_counter()
    res = check_d_squared(corpus())
    dt = time.perf_counter() - t
    return res.passed and dt < 300, f"{res.checked} diagrams, d^2 = 0 over R, {dt:.1f}s"


def criterion_5() -> Outcome:
    bad: List[str] = []
    D = corpus()
    unknot = homology(kh_complex(D["unknot"]), EVEN).entries
    if unknot != {(0, 1): (1, ()), (0, -1): (1, ())}:
        bad.append(f"unknot {unknot}")
    tref = homology(kh_complex(D["trefoil+"]), EVEN).entries
    want = {(0, 1): (1, ()), (0, 3): (1, ()), (2, 5): (1, ()), (3, 9): (1, ()), (3, 7): (0, (2,))}
    if tref != want:
        bad.append(f"trefoil {tref}")
    for name, T in D.items():
        ours = homology(kh_complex(T), EVEN)
        if ours != classical_khovanov(PD_CODES[name]):
            bad.append(f"{name} differs from the classical oracle")
        if euler_characteristic(ours) != jones_polynomial(PD_CODES[name]):
            bad.append(f"{name} Euler characteristic != Jones")
    return not bad, "; ".join(bad) or f"unknot, trefoil table, oracle and Jones agree on {len(D)} links"


def criterion_6() -> Outcome:
    bad = []
    for name, T in corpus().items():
        t = _tables(T)
        if t["even"].mod_p_dims(2) != t["odd"].mod_p_dims(2):
            bad.append(name)
    return not bad, ("mismatch: " + ", ".join(bad)) if bad else "F_2 dimensions agree on every corpus link"


def _reidemeister_variants(T, rng: random.Random) -> List[Tuple[str, object, object]]:
    """``(label, A, B)`` pairs whose homology must agree."""
    out = []
    levels = strand_orientations(T)
    n = len(T.slices)
    L = rng.randrange(1, n)
    p = rng.randrange(T.widths[L])
    for kind in ("pos", "neg"):
        out.append((f"R1 {kind}", T, add_kink(T, L, p, kind)))
    par = [(l, i) for l in range(1, n) for i in range(T.widths[l] - 1) if levels[l][i] == levels[l][i + 1]]
    anti = [(l, i) for l in range(1, n) for i in range(T.widths[l] - 1) if levels[l][i] != levels[l][i + 1]]
    for label, cands in (("R2 parallel", par), ("R2 antiparallel", anti)):
        if cands:
            l, i = rng.choice(cands)
            for first in ("pos", "neg"):
                out.append((f"{label} {first}", T, add_bigon(T, l, i, first)))
    wide = [(l, i) for l in range(1, n) for i in range(T.widths[l] - 2)]
    base = T
    if not wide:
        # open a curl first; just above its cup the diagram is two strands wider
        base = add_kink(T, L, p, "pos")
        wide = [(L + 1, i) for i in range(base.widths[L + 1] - 2)]
    l, i = rng.choice(wide)
    flip = {"pos": "neg", "neg": "pos"}
    for kinds in (("pos", "pos", "pos"), ("neg", "pos", "pos"), ("neg", "neg", "neg")):
        a, b = r3_pair(base, l, i, kinds)
        out.append((f"R3 {'/'.join(kinds)}", a, b))
        if T.n_crossings <= 4:
            # w w^-1 is T up to R2 moves; replacing w by its R3 partner is one R3 move
            k1, k2, k3 = kinds
            undo = [(flip[k3], i), (flip[k2], i + 1), (flip[k1], i)]
            a2 = insert_crossings(base, l, [(k1, i), (k2, i + 1), (k3, i)] + undo)
            b2 = insert_crossings(base, l, [(k3, i + 1), (k2, i), (k1, i + 1)] + undo)
            out.append((f"R3 {'/'.join(kinds)} against the original", T, a2))
            out.append((f"R3 {'/'.join(kinds)} against the original, moved", T, b2))
    return out


def criterion_7() -> Outcome:
    rng = random.Random(0)
    bad, count = [], 0
    for name, T in corpus().items():
        base = _tables(T)
        for label, A, B in _reidemeister_variants(T, rng):
            if (base if A is T else _tables(A)) != _tables(B):
                bad.append(f"{name} {label}")
            count += 1
    return not bad, ("failed: " + ", ".join(bad)) if bad else f"{count} move pairs equal at both specialisations"


def criterion_8() -> Outcome:
    bad, lines = [], []
    D = corpus()
    for name, cut in GLUING_CUTS:
        T1, T2 = split_diagram(D[name], cut)
        for sname, spec in SPECS.items():
            t = time.perf_counter()
            rep = gluing_check(T2, T1, spec)
            dt = time.perf_counter() - t
            if not rep.isomorphic or dt > 300:
                bad.append(f"{name}@{cut} {sname} ({dt:.0f}s)")
        lines.append(f"{name}@{cut}")
    return not bad, ("failed: " + ", ".join(bad)) if bad else (
        f"{len(GLUING_CUTS)} decompositions ({', '.join(lines)}) at both specialisations")


def criterion_9() -> Outcome:
    rng = random.Random(1)
    bad, count = [], 0
    for name, T in corpus().items():
        k = T.n_crossings
        if k < 2:
            continue
        base = _tables(T)
        for _ in range(2):
            order = list(range(k))
            rng.shuffle(order)
            count += 1
            if _tables(T, order) != base:
                bad.append(f"{name} order {order}")
        pd = [list(X) for X in PD_CODES[name]]
        rng.shuffle(pd)
        count += 1
        if _tables(pd_to_diagram(pd)) != base:
            bad.append(f"{name} shuffled PD")
    return not bad, ("failed: " + ", ".join(bad)) if bad else f"{count} re-enumerations leave every table unchanged"


CRITERIA: Dict[int, Callable[[], Outcome]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9,
}


def _report(n: int) -> Outcome:
    t = time.perf_counter()
    ok, detail = CRITERIA[n]()
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({time.perf_counter() - t:.1f}s) {detail}"
    return ok, line


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, capsys):
    ok, line = _report(n)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [_report(n) for n in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
