"""Independent reference invariants computed straight from PD codes.

Nothing here touches the chronological machinery: the classical
Khovanov complex uses the ordinary Frobenius algebra ``Z[x]/(x^2)`` with
the usual cube signs, and the Jones polynomial comes from the Kauffman
bracket state sum.  Both serve as oracles for the main pipeline at the
even specialisation.

Conventions: for a crossing ``[i, j, k, l]`` the 0-smoothing joins
``i-j`` and ``k-l``, the 1-smoothing joins ``i-l`` and ``j-k``.  With
``r`` ones, ``n+``/``n-`` positive/negative crossings and ``v+ = 1``,
``v- = x``, a generator sits in homological degree ``r - n-`` and
quantum degree ``#v+ - #v- + r + n+ - 2 n-``.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from typing import Dict, List, Sequence, Tuple

from .homology import HomologyTable, sparse_invariant_factors
from .tangles import UnionFind, pd_signs

PD = Sequence[Sequence[int]]


def _state_circles(pd: PD, state: Sequence[int]) -> Tuple[Dict[int, int], List[int]]:
    labels = sorted({e for X in pd for e in X})
    index = {e: n for n, e in enumerate(labels)}
    uf = UnionFind(len(labels))
    for (i, j, k, l), bit in zip(pd, state):
        if bit == 0:
            uf.union(index[i], index[j])
            uf.union(index[k], index[l])
        else:
            uf.union(index[i], index[l])
            uf.union(index[j], index[k])
    roots = sorted({uf.find(n) for n in range(len(labels))})
    circle = {e: roots.index(uf.find(index[e])) for e in labels}
    return circle, roots


def _edge_map(pd: PD, state: Sequence[int], j: int):
    """Classical merge/split when crossing ``j`` flips 0 -> 1.

    Returns ``{source basis: [(target basis, coeff), ...]}``; a basis index
    has bit ``c`` set when circle ``c`` carries ``x``.
    """
    src, src_roots = _state_circles(pd, state)
    tgt_state = list(state)
    tgt_state[j] = 1
    dst, dst_roots = _state_circles(pd, tgt_state)
    ns, nt = len(src_roots), len(dst_roots)
    i, jj, k, _ = pd[j]
    a, b = src[i], src[k]
    image = {}
    for e, c in src.items():
        image.setdefault(c, dst[e])

    def pack(bits: Dict[int, int]) -> int:
        return sum(1 << c for c, v in bits.items() if v)

    out = {}
    for basis in range(1 << ns):
        bits = {c: (basis >> c) & 1 for c in range(ns)}
        rest = {image[c]: v for c, v in bits.items() if c not in (a, b)}
        if a != b:  # merge: 1*1 = 1, 1*x = x, x*x = 0
            if bits[a] and bits[b]:
                continue
            t = dict(rest)
            t[dst[i]] = bits[a] | bits[b]
            out[basis] = [(pack(t), 1)]
        else:  # split: 1 -> 1(x)x + x(x)1, x -> x(x)x
            p, q = dst[i], dst[jj]
            if bits[a]:
                t = dict(rest)
                t[p] = t[q] = 1
                out[basis] = [(pack(t), 1)]
            else:
                terms = []
                for one in (p, q):
                    t = dict(rest)
                    t[p] = t[q] = 0
                    t[one] = 1
                    terms.append((pack(t), 1))
                out[basis] = terms
    return out, ns, nt


def classical_khovanov(pd: PD) -> HomologyTable:
    """Integral Khovanov homology at ``(1, 1, 1)`` from a PD code."""
    n = len(pd)
    if n == 0:  # the unknot
        return HomologyTable({(0, 1): (1, ()), (0, -1): (1, ())})
    signs = pd_signs(pd)
    npos = sum(1 for s in signs if s > 0)
    nneg = n - npos
    gens: Dict[Tuple[int, int], List[Tuple[Tuple[int, ...], int]]] = defaultdict(list)
    index: Dict[Tuple[Tuple[int, ...], int], int] = {}
    for state in itertools.product((0, 1), repeat=n):
        _, roots = _state_circles(pd, state)
        r = sum(state)
        for basis in range(1 << len(roots)):
            minus = bin(basis).count("1")
            q = (len(roots) - 2 * minus) + r + npos - 2 * nneg
            key = (state, basis)
            gens[(r - nneg, q)].append(key)
    for (h, q), keys in gens.items():
        for pos, key in enumerate(keys):
            index[key] = pos
    table = {}
    ranks: Dict[Tuple[int, int], int] = {}
    tors: Dict[Tuple[int, int], List[int]] = {}
    for (h, q), keys in gens.items():
        entries = {}
        for col, (state, basis) in enumerate(keys):
            for j in range(n):
                if state[j]:
                    continue
                emap, _, _ = _edge_map_cached(pd, state, j)
                sign = -1 if sum(state[:j]) % 2 else 1
                tgt = list(state)
                tgt[j] = 1
                tgt = tuple(tgt)
                for b2, c in emap.get(basis, []):
                    row = index[(tgt, b2)]
                    entries[(row, col)] = entries.get((row, col), 0) + sign * c
        factors = sparse_invariant_factors({k: v for k, v in entries.items() if v})
        ranks[(h, q)] = len(factors)
        tors[(h + 1, q)] = [d for d in factors if d > 1]
    for (h, q), keys in gens.items():
        free = len(keys) - ranks.get((h, q), 0) - ranks.get((h - 1, q), 0)
        t = tuple(sorted(tors.get((h, q), [])))
        if free or t:
            table[(h, q)] = (free, t)
    return HomologyTable(table)


_EDGE_CACHE: Dict[Tuple, tuple] = {}


def _edge_map_cached(pd: PD, state: Tuple[int, ...], j: int):
    key = (tuple(map(tuple, pd)), state, j)
    if key not in _EDGE_CACHE:
        _EDGE_CACHE[key] = _edge_map(pd, state, j)
    return _EDGE_CACHE[key]


def kauffman_bracket(pd: PD) -> Dict[int, int]:
    """``<D>`` as ``{exponent of A: coefficient}`` with ``<O> = 1``.

    The A-smoothing of ``[i, j, k, l]`` is its 0-smoothing above.
    """
    n = len(pd)
    out: Dict[int, int] = defaultdict(int)
    if n == 0:
        return {0: 1}
    for state in itertools.product((0, 1), repeat=n):
        _, roots = _state_circles(pd, state)
        a = n - 2 * sum(state)  # (#A - #B)
        # delta^(loops - 1), delta = -A^2 - A^-2
        poly = {a: 1}
        for _ in range(len(roots) - 1):
            nxt: Dict[int, int] = defaultdict(int)
            for e, c in poly.items():
                nxt[e + 2] -= c
                nxt[e - 2] -= c
            poly = nxt
        for e, c in poly.items():
            out[e] += c
    return {e: c for e, c in sorted(out.items()) if c}


def jones_polynomial(pd: PD) -> Dict[int, int]:
    """Unnormalised Jones polynomial in ``q`` (unknot ``q + q^-1``).

    From the bracket: ``f = (-A^3)^(-w) <D>``, then ``A^2 = -q^-1`` and a
    factor ``q + q^-1``.  Equals the graded Euler characteristic of
    Khovanov homology.
    """
    signs = pd_signs(pd) if pd else []
    w = sum(signs)
    br = kauffman_bracket(pd)
    f: Dict[int, int] = {}
    for e, c in br.items():
        f[e - 3 * w] = f.get(e - 3 * w, 0) + c * (-1) ** (w % 2)
    jq: Dict[int, int] = defaultdict(int)
    for e, c in f.items():
        if e % 2:
            raise ArithmeticError("odd power of A in the normalised bracket")
        m = e // 2  # A^(2m) = (-1)^m q^(-m)
        coeff = c * (-1) ** (m % 2)
        jq[-m + 1] += coeff
        jq[-m - 1] += coeff
    return {e: c for e, c in sorted(jq.items()) if c}
