"""Integer homology of specialised complexes.

Ranks and torsion come from Smith normal forms of the differentials,
computed blockwise per quantum degree.  Sparse elimination with unit
pivots removes almost everything; whatever remains is handed to sympy's
invariant-factor routine.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from .complex import GradedComplex, Spec


def smith_normal_form(rows: Sequence[Sequence[int]]) -> Tuple[List[int], int]:
    """Invariant factors (nonzero, ascending by divisibility) and rank of a dense matrix."""
    sparse = {}
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            if v:
                sparse[(i, j)] = int(v)
    factors = sparse_invariant_factors(sparse)
    return factors, len(factors)


def sparse_invariant_factors(entries: Dict[Tuple[int, int], int]) -> List[int]:
    """Nonzero invariant factors of a sparse integer matrix ``{(i, j): v}``.

    Unit pivots are eliminated first, choosing the pivot whose row and
    column are shortest to limit fill-in; the residual matrix goes through
    a dense Smith normal form.
    """
    rows: Dict[int, Dict[int, int]] = defaultdict(dict)
    cols: Dict[int, set] = defaultdict(set)
    for (i, j), v in entries.items():
        if v:
            rows[i][j] = v
            cols[j].add(i)
    units = 0
    while True:
        pivot = None
        best = None
        for i, row in rows.items():
            for j, v in row.items():
                if v == 1 or v == -1:
                    cost = (len(row) - 1) * (len(cols[j]) - 1)
                    if best is None or cost < best:
                        best, pivot = cost, (i, j)
                        if cost == 0:
                            break
            if best == 0:
                break
        if pivot is None:
            break
        pi, pj = pivot
        prow = rows.pop(pi)
        pv = prow[pj]
        for j in prow:
            cols[j].discard(pi)
        for i in list(cols[pj]):
            row = rows[i]
            factor = row[pj] * pv  # pv = +-1 so row[pj]/pv == row[pj]*pv
            for j, v in prow.items():
                new = row.get(j, 0) - factor * v
                if new:
                    if j not in row:
                        cols[j].add(i)
                    row[j] = new
                elif j in row:
                    del row[j]
                    cols[j].discard(i)
            if not row:
                del rows[i]
        cols.pop(pj, None)
        units += 1
    rest = [(i, j, v) for i, row in rows.items() for j, v in row.items()]
    factors = [1] * units
    if rest:
        ri = sorted({i for i, _, _ in rest})
        cj = sorted({j for _, j, _ in rest})
        rpos = {i: k for k, i in enumerate(ri)}
        cpos = {j: k for k, j in enumerate(cj)}
        dense = [[0] * len(cj) for _ in ri]
        for i, j, v in rest:
            dense[rpos[i]][cpos[j]] = v
        inv = invariant_factors(Matrix(dense), domain=ZZ)
        factors += [abs(int(d)) for d in inv if d != 0]
    return sorted(factors)


@dataclass
class HomologyTable:
    """Bigraded integer homology: ``(h, q) -> (free_rank, torsion)``."""

    entries: Dict[Tuple[int, int], Tuple[int, Tuple[int, ...]]] = field(default_factory=dict)

    def rank(self, h: int, q: int) -> int:
        return self.entries.get((h, q), (0, ()))[0]

    def torsion(self, h: int, q: int) -> Tuple[int, ...]:
        return self.entries.get((h, q), (0, ()))[1]

    def total_rank(self) -> int:
        return sum(r for r, _ in self.entries.values())

    def mod_p_dims(self, p: int = 2) -> Dict[Tuple[int, int], int]:
        """Dimensions over ``F_p`` by the universal coefficient theorem."""
        out: Dict[Tuple[int, int], int] = defaultdict(int)
        for (h, q), (r, tors) in self.entries.items():
            out[(h, q)] += r
            k = sum(1 for t in tors if t % p == 0)
            out[(h, q)] += k
            out[(h - 1, q)] += k  # Tor term lands one degree lower
        return {key: v for key, v in out.items() if v}

    def __eq__(self, other) -> bool:
        return isinstance(other, HomologyTable) and self.entries == other.entries

    def to_json(self) -> List[dict]:
        return [
            {"h": h, "q": q, "rank": r, "torsion": list(t)}
            for (h, q), (r, t) in sorted(self.entries.items())
        ]

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def render(self) -> str:
        """Plain-text grid: rows are quantum degrees, columns homological degrees."""
        if not self.entries:
            return "(zero)"
        hs = sorted({h for h, _ in self.entries})
        qs = sorted({q for _, q in self.entries}, reverse=True)
        hmin, hmax = hs[0], hs[-1]
        cells = {}
        for (h, q), (r, t) in self.entries.items():
            parts = []
            if r:
                parts.append("Z" if r == 1 else f"Z^{r}")
            parts += [f"Z/{d}" for d in t]
            cells[(h, q)] = "+".join(parts)
        width = max(6, max(len(c) for c in cells.values()) + 1)
        head = "q\\h".rjust(5) + "".join(str(h).rjust(width) for h in range(hmin, hmax + 1))
        lines = [head]
        for q in qs:
            line = str(q).rjust(5)
            for h in range(hmin, hmax + 1):
                line += cells.get((h, q), ".").rjust(width)
            lines.append(line)
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"HomologyTable({self.to_json()})"


def _q_block(block: Tuple[Dict[int, int], Dict[int, Dict[Tuple[int, int], int]]]):
    """Homology of one quantum degree: ``(sizes by h, matrix entries by h)``."""
    sizes, mats = block
    ranks: Dict[int, int] = {}
    tors: Dict[int, List[int]] = {}
    for h, entries in mats.items():
        factors = sparse_invariant_factors(entries)
        ranks[h] = len(factors)
        tors[h + 1] = [d for d in factors if d > 1]
    out = {}
    for h, size in sizes.items():
        free = size - ranks.get(h, 0) - ranks.get(h - 1, 0)
        t = tuple(sorted(tors.get(h, [])))
        if free < 0:
            raise ArithmeticError("negative homology rank; d^2 != 0?")
        if free or t:
            out[h] = (free, t)
    return out


def homology(C: GradedComplex, spec: Spec = (1, 1, 1), jobs: int = 1) -> HomologyTable:
    """Bigraded homology of ``C`` at the specialisation ``spec``.

    The differential preserves the quantum degree, so each quantum degree
    is an independent block.  With ``jobs > 1`` the blocks are reduced by a
    process pool; the table does not depend on the scheduling.
    """
    Cs = C.specialize(spec) if C.spec is None else C
    by_q: Dict[int, Dict[int, List[int]]] = defaultdict(lambda: defaultdict(list))
    for idx, g in enumerate(Cs.gens):
        by_q[g.q][g.h].append(idx)
    blocks = []
    qs = sorted(by_q)
    for q in qs:
        by_h = by_q[q]
        mats = {}
        for h, idxs in by_h.items():
            pos = {g: k for k, g in enumerate(by_h.get(h + 1, []))}
            entries = {}
            for c, j in enumerate(idxs):
                for i, v in Cs.diff[j].items():
                    if i not in pos:
                        if v:
                            raise ValueError("differential is not homogeneous")
                        continue
                    entries[(pos[i], c)] = v
            mats[h] = entries
        blocks.append(({h: len(idxs) for h, idxs in by_h.items()}, mats))
    if jobs > 1 and len(blocks) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_q_block, blocks))
    else:
        results = [_q_block(b) for b in blocks]
    table: Dict[Tuple[int, int], Tuple[int, Tuple[int, ...]]] = {}
    for q, res in zip(qs, results):
        for h, val in res.items():
            table[(h, q)] = val
    return HomologyTable(table)


def euler_characteristic(tab: HomologyTable) -> Dict[int, int]:
    """Graded Euler characteristic ``sum (-1)^h rank q^q`` as ``{exponent: coeff}``."""
    out: Dict[int, int] = defaultdict(int)
    for (h, q), (r, _) in tab.entries.items():
        out[q] += (-1) ** (h % 2) * r
    return {e: c for e, c in sorted(out.items()) if c}


def format_laurent(poly: Dict[int, int], var: str = "q") -> str:
    if not poly:
        return "0"
    terms = []
    for e in sorted(poly, reverse=True):
        c = poly[e]
        mono = "1" if e == 0 else (var if e == 1 else f"{var}^{e}")
        if e != 0 and abs(c) == 1:
            body = mono
        elif e == 0:
            body = str(abs(c))
        else:
            body = f"{abs(c)}*{mono}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    first_sign, first = terms[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        text += f" {sign} {body}"
    return text
