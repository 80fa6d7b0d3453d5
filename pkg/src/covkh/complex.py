"""Cube of resolutions, the complexes F(T) and kh(T), and their tensor products.

For a tangle diagram ``T`` with crossings ``1..k`` (ordered bottom to top)
and a closure pair ``(a, b)`` the vertex ``xi`` of the cube carries
``F(b-bar T_xi a)`` shifted by the cobordism ``W_xi`` made of the saddles of
the 0-coordinates of ``xi`` (lowest crossing first).  The edge map for the
crossing ``j`` is

    d_{xi,j} = (-1)^{p(xi,j)} * iota(H_{xi,j})^{-1} * F(saddle_j),

where ``H_{xi,j}`` moves the ``j``-th saddle of ``W_xi`` to the bottom and
``p(xi,j)`` counts the 1-coordinates above ``j``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .cobordism import (
    ClosedDiagram,
    DiagramBuilder,
    Movie,
    Saddle,
    iota,
    saddle_matrix,
)
from .ring import Bidegree, Monomial, RingElem, add_deg
from .tangles import (
    FlatTangle,
    Skeleton,
    TangleDiagram,
    build_skeleton,
    enumerate_matchings,
    permute_skeleton,
    skeleton_flat,
)
from .tqft import RMatrix, StateSpace

Spec = Tuple[int, int, int]
EVEN: Spec = (1, 1, 1)
ODD: Spec = (1, -1, 1)


@dataclass(frozen=True)
class Generator:
    """A basis element of a graded complex.

    Attributes
    ----------
    h, q:
        Homological and quantum degree.
    key:
        Identifying data (vertex, closure, labeling, ...).
    """

    h: int
    q: int
    key: tuple


@dataclass
class GradedComplex:
    """A bigraded free complex with a column-sparse differential.

    ``diff[j]`` maps row index to coefficient for the image of generator
    ``j``.  Coefficients are :class:`RingElem` over R, or plain integers once
    specialised (``spec`` records which).
    """

    gens: List[Generator]
    diff: List[Dict[int, object]]
    spec: Optional[Spec] = None
    info: dict = field(default_factory=dict)

    def specialize(self, spec: Spec) -> "GradedComplex":
        if self.spec is not None:
            if tuple(spec) != tuple(self.spec):
                raise ValueError("complex is already specialised differently")
            return self
        x, y, z = spec
        diff = []
        for col in self.diff:
            new = {}
            for i, v in col.items():
                s = v.specialize(x, y, z)
                if s:
                    new[i] = s
            diff.append(new)
        return GradedComplex(self.gens, diff, tuple(spec), dict(self.info))

    def d_squared_zero(self) -> bool:
        """Check ``d o d = 0`` exactly (over R or over Z)."""
        zero = 0 if self.spec is not None else RingElem()
        for col in self.diff:
            acc: Dict[int, object] = {}
            for k, v in col.items():
                for i, w in self.diff[k].items():
                    acc[i] = acc.get(i, zero) + w * v
            for val in acc.values():
                if val != 0 and not (isinstance(val, RingElem) and val.is_zero()):
                    return False
        return True

    def check_degrees(self) -> bool:
        """Every nonzero entry raises ``h`` by one and preserves ``q``."""
        for j, col in enumerate(self.diff):
            g = self.gens[j]
            for i in col:
                if self.gens[i].h != g.h + 1 or self.gens[i].q != g.q:
                    return False
        return True

    def shifted(self, dh: int, dq: int) -> "GradedComplex":
        gens = [Generator(g.h + dh, g.q + dq, g.key) for g in self.gens]
        return GradedComplex(gens, self.diff, self.spec, dict(self.info))

    def __len__(self) -> int:
        return len(self.gens)


# ---------------------------------------------------------------------------
# Cube of resolutions
# ---------------------------------------------------------------------------


def closure_pairs(n_in: int, n_out: int) -> List[Tuple[FlatTangle, FlatTangle]]:
    """All closure pairs ``(a, b)`` with ``a`` in ``B^n_in`` and ``b`` in ``B^n_out``."""
    return [(a, b) for a in enumerate_matchings(n_in) for b in enumerate_matchings(n_out)]


def closed_skeleton(sk: Skeleton, a: FlatTangle, b: FlatTangle, extra_top=None):
    """Closed diagram ``b-bar T a`` with one gadget per crossing (state unset).

    Node numbering follows the skeleton so gadget ``k`` is crossing ``k``.
    """
    bld = DiagramBuilder()
    bld.nodes(sk.n_nodes)
    bld.wires.extend(sk.wires)
    for g in sk.gadgets:
        bld.gadget(g.bl, g.br, g.tl, g.tr, "H")
    bld.cap_off(a, sk.bottom)
    bld.cap_off(b, sk.top)
    return bld.build()


def sign_exponent(xi: Sequence[int], j: int) -> int:
    """``p(xi, j)``: number of 1-coordinates strictly above crossing ``j``."""
    return sum(1 for l in range(j + 1, len(xi)) if xi[l])


class Cube:
    """The cube of resolutions of a tangle diagram for one closure pair."""

    def __init__(self, T: TangleDiagram, a: FlatTangle, b: FlatTangle, sk: Optional[Skeleton] = None):
        self.T = T
        self.sk = sk if sk is not None else build_skeleton(T)
        self.a, self.b = a, b
        self.k = len(self.sk.gadgets)
        self.base = closed_skeleton(self.sk, a, b)

    def diagram(self, xi: Sequence[int]) -> ClosedDiagram:
        return self.base.with_states([self.sk.state(i, bit) for i, bit in enumerate(xi)])

    def saddle(self, j: int) -> Saddle:
        return Saddle(j, self.sk.arrow(j))

    def w_movie(self, xi: Sequence[int]) -> Movie:
        """``1_b-bar W_xi 1_a``: saddles of the zero coordinates, lowest first."""
        return Movie(self.diagram(xi), tuple(self.saddle(j) for j in range(self.k) if xi[j] == 0))

    def w_degree(self, xi: Sequence[int]) -> Bidegree:
        return self.w_movie(xi).degree()

    def push_scalar(self, xi: Sequence[int], j: int) -> Monomial:
        """``iota(H_{xi,j})``: move saddle ``j`` of ``W_xi`` to the bottom."""
        movie = self.w_movie(xi)
        zeros = [l for l in range(self.k) if xi[l] == 0]
        pos = zeros.index(j)
        order = [pos] + [i for i in range(len(zeros)) if i != pos]
        return iota(movie, order)

    def edge_map(self, xi: Sequence[int], j: int) -> Tuple[RMatrix, Monomial]:
        """Matrix of the saddle ``j`` at vertex ``xi`` and the scalar ``iota(H)^{-1}``."""
        if xi[j] != 0:
            raise ValueError("edge maps start at a 0-coordinate")
        mat = saddle_matrix(self.diagram(xi), self.saddle(j))
        return mat, self.push_scalar(xi, j).inverse()


def vertices(k: int) -> List[Tuple[int, ...]]:
    return list(itertools.product((0, 1), repeat=k))


@dataclass
class VertexBlock:
    closure: Tuple[FlatTangle, FlatTangle]
    xi: Tuple[int, ...]
    space: StateSpace
    offset: int
    w_degree: Bidegree
    tangle: FlatTangle  # T_xi


def build_complex(T: TangleDiagram, closures: Optional[Iterable[Tuple[FlatTangle, FlatTangle]]] = None,
                  order: Optional[Sequence[int]] = None) -> GradedComplex:
    """The complex ``F(T)`` over R, summed over the closure pairs.

    Homological degree is ``|xi|``; quantum degree is
    ``kappa(deg_R) + n_in + kappa(deg W_xi)`` (no crossing normalisation).
    ``order`` re-enumerates the crossings (new crossing ``m`` is the
    ``order[m]``-th from the bottom); the default is bottom to top.
    """
    sk = build_skeleton(T)
    if order is not None:
        sk = permute_skeleton(sk, order)
    k = len(sk.gadgets)
    if closures is None:
        closures = closure_pairs(T.n_in, T.n_out)
    gens: List[Generator] = []
    blocks: Dict[Tuple[int, Tuple[int, ...]], VertexBlock] = {}
    cubes = []
    closures = list(closures)
    for ci, (a, b) in enumerate(closures):
        cube = Cube(T, a, b, sk)
        cubes.append(cube)
        for xi in vertices(k):
            D = cube.diagram(xi)
            space = D.space()
            wdeg = cube.w_degree(xi)
            tangle = skeleton_flat(sk, [sk.state(i, bit) for i, bit in enumerate(xi)])
            blocks[(ci, xi)] = VertexBlock((a, b), xi, space, len(gens), wdeg, tangle)
            h = sum(xi)
            for basis in range(space.rank):
                p = space.degree(basis)
                q = p[0] + p[1] + T.n_in + wdeg[0] + wdeg[1]
                gens.append(Generator(h, q, (ci, xi, basis)))
    diff: List[Dict[int, RingElem]] = [dict() for _ in gens]
    for ci, cube in enumerate(cubes):
        for xi in vertices(k):
            src = blocks[(ci, xi)]
            for j in range(k):
                if xi[j]:
                    continue
                tgt_xi = xi[:j] + (1,) + xi[j + 1:]
                tgt = blocks[(ci, tgt_xi)]
                mat, mono = cube.edge_map(xi, j)
                coeff = RingElem({mono: -1 if sign_exponent(xi, j) % 2 else 1})
                for i, col, v in mat.entries():
                    diff[src.offset + col][tgt.offset + i] = v * coeff
    info = {"blocks": blocks, "closures": closures, "diagram": T, "k": k}
    return GradedComplex(gens, diff, None, info)


def kh_normalization(T: TangleDiagram) -> Tuple[int, int]:
    """Homological and quantum shifts turning ``F(T)`` into ``kh(T)``.

    With ``n+`` / ``n-`` positive / negative crossings the shifts are
    ``(-n-, k + n+ - 2 n-)`` where ``k = n+ + n-``: the ``k`` compensates for
    the ``-#saddles`` carried by ``W_xi``.
    """
    npos, nneg = T.writhe_counts()
    return -nneg, (npos + nneg) + npos - 2 * nneg


def kh_complex(T: TangleDiagram, closures=None, order: Optional[Sequence[int]] = None) -> GradedComplex:
    """``kh(T)``: ``F(T)`` with the per-crossing normalisation applied."""
    dh, dq = kh_normalization(T)
    C = build_complex(T, closures, order)
    out = C.shifted(dh, dq)
    out.info["normalization"] = (dh, dq)
    return out


# ---------------------------------------------------------------------------
# Bimodule structure of F(T)
# ---------------------------------------------------------------------------


class TangleBimodule:
    """``F(T)`` as a graded ``H^m``-``H^n`` bimodule.

    Generators are those of :func:`build_complex`.  A generator ``m`` in the
    vertex ``xi`` of closure ``(a, b)`` carries the unshifted degree
    ``deg_R(m)`` and the shifted degree ``(T_1, deg_R(m) + deg(1_b W_xi 1_a))``
    with ``T_1`` the all-ones resolution.  The actions on shifted elements
    are the surgery compositions twisted by

    * left: ``y . m = beta_1 * lambda(|y|, deg W_xi) * (y m)``;
    * right: ``m . x = beta_1 * (m x)``;

    where ``beta_1`` exchanges the surgery with the saddles of ``W_xi``.
    """

    def __init__(self, T: TangleDiagram):
        from .tangles import reduce as reduce_tangle

        self.T = T
        self.sk = build_skeleton(T)
        self.k = len(self.sk.gadgets)
        self.complex = build_complex(T)
        self.blocks: Dict[Tuple[FlatTangle, FlatTangle, Tuple[int, ...]], VertexBlock] = {
            (blk.closure[0], blk.closure[1], xi): blk for (ci, xi), blk in self.complex.info["blocks"].items()
        }
        self.top_tangle, _ = reduce_tangle(skeleton_flat(self.sk, [self.sk.state(i, 1) for i in range(self.k)]))
        self._block_of: List[VertexBlock] = []
        for g in self.complex.gens:
            ci, xi, _ = g.key
            self._block_of.append(self.complex.info["blocks"][(ci, xi)])

    @property
    def n_in(self) -> int:
        return self.T.n_in

    @property
    def n_out(self) -> int:
        return self.T.n_out

    def block(self, idx: int) -> VertexBlock:
        return self._block_of[idx]

    def basis_index(self, idx: int) -> int:
        return self.complex.gens[idx].key[2]

    def p(self, idx: int) -> Bidegree:
        blk = self.block(idx)
        return blk.space.degree(self.basis_index(idx))

    def shifted_degree(self, idx: int):
        from .arc_algebra import GDegree

        blk = self.block(idx)
        a, b = blk.closure
        return GDegree(self.top_tangle, add_deg(self.p(idx), blk.w_degree), a, b)

    def _pieces(self, xi):
        from .arc_algebra import SkeletonPiece

        return SkeletonPiece(self.sk, tuple(self.sk.state(i, bit) for i, bit in enumerate(xi)))

    def _w_saddles(self, stack, piece: int, xi) -> List[Saddle]:
        gads = stack.gadgets[piece]
        return [Saddle(gads[j], self.sk.arrow(j)) for j in range(self.k) if xi[j] == 0]

    def _beta_one(self, stack, piece: int, xi) -> Monomial:
        surgery = [Saddle(g, "up") for g in stack.junctions[0]]
        w = self._w_saddles(stack, piece, xi)
        movie = Movie(stack.diagram, tuple(surgery + w))
        ns = len(surgery)
        order = list(range(ns, ns + len(w))) + list(range(ns))
        return iota(movie, order)

    @lru_cache(maxsize=None)
    def left_block(self, c: FlatTangle, b: FlatTangle, a: FlatTangle, xi: Tuple[int, ...]):
        """Matrix of ``F(c-bar b) (x) F(b-bar T_xi a) -> F(c-bar T_xi a)`` and ``beta_1``."""
        from .arc_algebra import FlatPiece, surgery_product
        from .tangles import identity

        target = Cube(self.T, a, c, self.sk).diagram(xi)
        n = self.sk.n_nodes
        prod = surgery_product(self._pieces(xi), FlatPiece(identity(self.n_out)), a, b, c, target,
                               lambda st: list(zip(st.nodes[0], range(n))))
        return prod.matrix, self._beta_one(prod.stack, 0, xi)

    @lru_cache(maxsize=None)
    def right_block(self, c: FlatTangle, b: FlatTangle, a: FlatTangle, xi: Tuple[int, ...]):
        """Matrix of ``F(c-bar T_xi b) (x) F(b-bar a) -> F(c-bar T_xi a)`` and ``beta_1``."""
        from .arc_algebra import FlatPiece, surgery_product
        from .tangles import identity

        target = Cube(self.T, a, c, self.sk).diagram(xi)
        n = self.sk.n_nodes
        prod = surgery_product(FlatPiece(identity(self.n_in)), self._pieces(xi), a, b, c, target,
                               lambda st: list(zip(st.nodes[1], range(n))))
        return prod.matrix, self._beta_one(prod.stack, 1, xi)

    def left_action(self, y, idx: int) -> Dict[int, RingElem]:
        """``y . m`` for an arc algebra basis element ``y = (b, c, i)`` (``b -> c``)."""
        from .ring import lambda_R

        b, c, i = y
        blk = self.block(idx)
        a, b2 = blk.closure
        if b2 != b:
            return {}
        mat, beta1 = self.left_block(c, b, a, blk.xi)
        from .arc_algebra import flat_closure
        from .tangles import identity

        ry = flat_closure(identity(self.n_out), b, c).space()
        py = ry.degree(i)
        scalar = beta1 * lambda_R(py, blk.w_degree)
        col = mat.cols[i * blk.space.rank + self.basis_index(idx)]
        tgt = self.blocks[(a, c, blk.xi)]
        return {tgt.offset + r: v * RingElem({scalar: 1}) for r, v in col.items()}

    def right_action(self, idx: int, x) -> Dict[int, RingElem]:
        """``m . x`` for an arc algebra basis element ``x = (a, b, i)`` (``a -> b``)."""
        a, b, i = x
        blk = self.block(idx)
        b2, c = blk.closure
        if b2 != b:
            return {}
        mat, beta1 = self.right_block(c, b, a, blk.xi)
        from .arc_algebra import flat_closure
        from .tangles import identity

        rx = flat_closure(identity(self.n_in), a, b).space().rank
        col = mat.cols[self.basis_index(idx) * rx + i]
        tgt = self.blocks[(a, c, blk.xi)]
        return {tgt.offset + r: v * RingElem({beta1: 1}) for r, v in col.items()}


# ---------------------------------------------------------------------------
# Tensor products over the arc algebra
# ---------------------------------------------------------------------------


class NonFreeQuotient(ArithmeticError):
    """The coequalizer relations have no unit pivot left (torsion would appear)."""


def unit_pivot_reduce(rows: List[Dict[int, int]], columns: Sequence[int]):
    """Integer row reduction of relation vectors using only ``+-1`` pivots.

    Returns ``(free, expr)``: the columns that survive as a basis of the
    quotient and, for every eliminated column, its expression
    ``{free_column: coefficient}`` in the quotient.
    """
    work = [dict(r) for r in rows if r]
    pivots: Dict[int, Dict[int, int]] = {}
    while work:
        best = None
        for ri, row in enumerate(work):
            for col, v in row.items():
                if v in (1, -1):
                    cost = len(row)
                    if best is None or cost < best[0]:
                        best = (cost, ri, col)
        if best is None:
            raise NonFreeQuotient("relations have no unit pivot")
        _, ri, pc = best
        prow = work.pop(ri)
        pv = prow[pc]
        # pc = -pv * sum_{j != pc} prow[j] * j   (since pv = +-1)
        sub = {j: -pv * v for j, v in prow.items() if j != pc}
        for other in pivots.values():
            if pc in other:
                c = other.pop(pc)
                for j, v in sub.items():
                    nv = other.get(j, 0) + c * v
                    if nv:
                        other[j] = nv
                    else:
                        other.pop(j, None)
        nxt = []
        for row in work:
            if pc in row:
                c = row.pop(pc)
                for j, v in sub.items():
                    nv = row.get(j, 0) + c * v
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
            if row:
                nxt.append(row)
        work = nxt
        pivots[pc] = sub
    free = [c for c in columns if c not in pivots]
    return free, pivots


def tensor_complexes(M2: TangleBimodule, M1: TangleBimodule, spec: Spec = EVEN) -> GradedComplex:
    """``F(T2) (x)_{H^n} F(T1)`` at a specialisation, as a graded complex.

    The tensor product is the quotient of the pairs ``m' (x) m`` with equal
    middle closure by the relations
    ``(m' . x) (x) m - alpha(|m'|, |x|, |m|) m' (x) (x . m)``, computed per
    outer closure pair and pair of cube vertices by unit-pivot reduction.
    The differential is ``d m' (x) m + (-1)^{h(m')} m' (x) d m`` projected to
    the quotient basis.  Homological degrees add; the quantum degree is
    ``kappa`` of the composite grading plus the number of bottom points
    pairs.  No crossing normalisation is applied (see
    :func:`tensor_kh`).
    """
    from .arc_algebra import alpha, build_arc_algebra, g_compose

    if M1.n_out != M2.n_in:
        raise ValueError("middle algebras differ")
    x_, y_, z_ = spec
    H = build_arc_algebra(M1.n_out)
    C1, C2 = M1.complex, M2.complex
    n = M1.n_in

    def spec_vec(vec: Dict[int, RingElem]) -> Dict[int, int]:
        out = {}
        for k, v in vec.items():
            s = v.specialize(x_, y_, z_)
            if s:
                out[k] = s
        return out

    # pairs grouped by (outer closures, vertices)
    groups: Dict[tuple, List[Tuple[int, int]]] = {}
    by_target1: Dict[FlatTangle, List[int]] = {}
    for i1 in range(len(C1.gens)):
        by_target1.setdefault(M1.block(i1).closure[1], []).append(i1)
    for i2 in range(len(C2.gens)):
        b, c = M2.block(i2).closure
        for i1 in by_target1.get(b, []):
            a = M1.block(i1).closure[0]
            key = (a, c, M2.block(i2).xi, M1.block(i1).xi)
            groups.setdefault(key, []).append((i2, i1))
    pair_index: Dict[Tuple[int, int], int] = {}
    for key in sorted(groups, key=repr):
        for pr in groups[key]:
            pair_index[pr] = len(pair_index)

    # relations, grouped like the pairs
    rels: Dict[tuple, List[Dict[int, int]]] = {key: [] for key in groups}
    g1 = [M1.shifted_degree(i) for i in range(len(C1.gens))]
    g2 = [M2.shifted_degree(i) for i in range(len(C2.gens))]
    basis_H = H.basis()
    for i2 in range(len(C2.gens)):
        bp, c = M2.block(i2).closure
        for x in basis_H:
            b, b2, _ = x
            if b2 != bp:
                continue
            right = spec_vec(M2.right_action(i2, x))
            gx = H.gdegree(x)
            for i1 in by_target1.get(b, []):
                left = spec_vec(M1.left_action(x, i1))
                a = M1.block(i1).closure[0]
                coeff = alpha(g2[i2], gx, g1[i1]).specialize(x_, y_, z_)
                row: Dict[int, int] = {}
                for j2, v in right.items():
                    col = pair_index[(j2, i1)]
                    row[col] = row.get(col, 0) + v
                for j1, v in left.items():
                    col = pair_index[(i2, j1)]
                    row[col] = row.get(col, 0) - coeff * v
                row = {k: v for k, v in row.items() if v}
                if row:
                    key = (a, c, M2.block(i2).xi, M1.block(i1).xi)
                    rels[key].append(row)
    free_all: List[int] = []
    expr: Dict[int, Dict[int, int]] = {}
    for key in sorted(groups, key=repr):
        cols = [pair_index[pr] for pr in groups[key]]
        free, piv = unit_pivot_reduce(rels[key], cols)
        free_all += free
        expr.update(piv)
    pairs = {v: k for k, v in pair_index.items()}
    pos = {c: i for i, c in enumerate(free_all)}

    def project(col: int) -> Dict[int, int]:
        if col in pos:
            return {pos[col]: 1}
        return {pos[j]: v for j, v in expr[col].items()}

    gens: List[Generator] = []
    for col in free_all:
        i2, i1 = pairs[col]
        gdeg = g_compose(g2[i2], g1[i1])
        h = C2.gens[i2].h + C1.gens[i1].h
        q = gdeg.p[0] + gdeg.p[1] + n
        gens.append(Generator(h, q, ("tensor", i2, i1)))
    d1 = [spec_vec(col) for col in C1.diff]
    d2 = [spec_vec(col) for col in C2.diff]
    diff: List[Dict[int, int]] = []
    for col in free_all:
        i2, i1 = pairs[col]
        sign = -1 if C2.gens[i2].h % 2 else 1
        acc: Dict[int, int] = {}
        terms = [((j2, i1), v) for j2, v in d2[i2].items()]
        terms += [((i2, j1), sign * v) for j1, v in d1[i1].items()]
        for pr, v in terms:
            for r, w in project(pair_index[pr]).items():
                acc[r] = acc.get(r, 0) + v * w
        diff.append({r: v for r, v in acc.items() if v})
    info = {"pairs": [pairs[c] for c in free_all], "relations": sum(len(r) for r in rels.values())}
    return GradedComplex(gens, diff, tuple(spec), info)


def tensor_kh(T2: TangleDiagram, T1: TangleDiagram, spec: Spec = EVEN) -> GradedComplex:
    """``kh(T2) (x)_{H^n} kh(T1)``: the tensor product with both normalisations."""
    C = tensor_complexes(TangleBimodule(T2), TangleBimodule(T1), spec)
    h1, q1 = kh_normalization(T1)
    h2, q2 = kh_normalization(T2)
    return C.shifted(h1 + h2, q1 + q2)
