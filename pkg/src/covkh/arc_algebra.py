"""The covering arc algebra and the composition maps of flat tangles.

For a flat tangle ``t`` from ``2n`` to ``2m`` points the bimodule
``F(t)`` is the direct sum of ``F(b-bar t a)`` over crossingless matchings
``a`` of ``2n`` points and ``b`` of ``2m`` points.  The composition map
``mu[t2, t1]`` glues ``c-bar t2 b`` on top of ``b-bar t1 a`` and applies the
canonical surgery along ``b b-bar`` (one upward saddle per arc of ``b``,
right to left).  With ``t1 = t2 = 1_n`` this is the multiplication of
``H^n``.

Elements are handled as sparse vectors ``{basis_key: RingElem}``.  The
tensor factor ``x (x) y`` places ``x`` (the upper piece) first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

from .cobordism import ClosedDiagram, DiagramBuilder, Movie, Saddle, iota
from .ring import ONE, Bidegree, Monomial, RingElem, X, add_deg, lambda_R
from .tangles import (
    BoundaryMismatch,
    FlatTangle,
    Skeleton,
    compose,
    enumerate_matchings,
    identity,
    reduce,
)
from .tqft import LABEL_DEG, RMatrix, StateSpace


# ---------------------------------------------------------------------------
# Stacked diagrams
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FlatPiece:
    """A flat tangle used as one layer of a stacked closed diagram."""

    t: FlatTangle

    @property
    def n_in(self) -> int:
        return self.t.n_in

    @property
    def n_out(self) -> int:
        return self.t.n_out

    def place(self, bld: DiagramBuilder):
        bottom = bld.nodes(2 * self.t.n_in)
        top = bld.nodes(2 * self.t.n_out)
        loops = bld.flat(self.t, bottom, top)
        return bottom, top, bottom + top + loops, []


@dataclass(frozen=True)
class SkeletonPiece:
    """A tangle diagram skeleton with its gadgets in the given states."""

    sk: Skeleton
    states: Tuple[str, ...]

    @property
    def n_in(self) -> int:
        return self.sk.n_in

    @property
    def n_out(self) -> int:
        return self.sk.n_out

    def place(self, bld: DiagramBuilder):
        local = bld.nodes(self.sk.n_nodes)
        for u, v in self.sk.wires:
            bld.wire(local[u], local[v])
        gads = [
            bld.gadget(local[g.bl], local[g.br], local[g.tl], local[g.tr], st)
            for g, st in zip(self.sk.gadgets, self.states)
        ]
        return [local[i] for i in self.sk.bottom], [local[i] for i in self.sk.top], local, gads


@dataclass
class Stack:
    """A closed diagram made of pieces glued along surgery junctions.

    ``nodes[i]`` lists the nodes of piece ``i`` in piece-local order,
    ``gadgets[i]`` its own gadgets, and ``junctions[i]`` the surgery gadgets
    between pieces ``i`` and ``i + 1`` (right to left).
    """

    diagram: ClosedDiagram
    nodes: List[List[int]]
    gadgets: List[List[int]]
    junctions: List[List[int]]


def build_stack(pieces: Sequence, middles: Sequence[FlatTangle], a: FlatTangle, c: FlatTangle) -> Stack:
    """Stack ``pieces`` (lowest first) capped by ``a`` below and ``c-bar`` above.

    Between consecutive pieces sits ``m-bar m`` realised as surgery gadgets
    in state ``H``, for the corresponding matching ``m`` of ``middles``.
    """
    if len(middles) != len(pieces) - 1:
        raise ValueError("need one middle matching between consecutive pieces")
    if a.n_in != pieces[0].n_in or c.n_in != pieces[-1].n_out:
        raise BoundaryMismatch("outer closures do not match the pieces")
    for p, m, q in zip(pieces, middles, pieces[1:]):
        if p.n_out != m.n_in or q.n_in != m.n_in:
            raise BoundaryMismatch("middle closure does not match the pieces")
    bld = DiagramBuilder()
    placed = [p.place(bld) for p in pieces]
    bld.cap_off(a, placed[0][0])
    bld.cap_off(c, placed[-1][1])
    junctions = [bld.junction(m, placed[i][1], placed[i + 1][0]) for i, m in enumerate(middles)]
    return Stack(bld.build(), [p[2] for p in placed], [p[3] for p in placed], junctions)


def piece_closure(piece, a: FlatTangle, b: FlatTangle) -> Stack:
    return build_stack([piece], [], a, b)


# ---------------------------------------------------------------------------
# Identifications between tensor factors and circles
# ---------------------------------------------------------------------------


def circle_correspondence(src: ClosedDiagram, dst: ClosedDiagram,
                          node_pairs: Iterable[Tuple[int, int]], complete: bool = True) -> Dict[int, int]:
    """Match the circles of ``src`` with those of ``dst``.

    Circles sharing a node of ``node_pairs`` are matched.  With
    ``complete`` the remaining (free) circles are matched in increasing
    label order; otherwise ``src`` may embed into part of ``dst``.
    """
    smap, _ = src.circle_map()
    dmap, _ = dst.circle_map()
    out: Dict[int, int] = {}
    for u, v in node_pairs:
        cs, cd = smap[u], dmap[v]
        if out.setdefault(cs, cd) != cd:
            raise ValueError("node identification is inconsistent on a circle")
    if len(set(out.values())) != len(out):
        raise ValueError("node identification merges circles")
    if not complete:
        if len(out) != src.n_circles():
            raise ValueError("some circles carry no identified node")
        return out
    rest_s = [c for c in src.circles() if c not in out]
    used = set(out.values())
    rest_d = [c for c in dst.circles() if c not in used]
    if len(rest_s) != len(rest_d):
        raise ValueError("circle counts differ")
    out.update(zip(rest_s, rest_d))
    return out


def reorder_monomial(bits: Sequence[int], positions: Sequence[int]) -> Monomial:
    """Braiding scalar for moving tensor factors into new positions.

    ``bits[i]`` is the label of the factor now in slot ``i`` and
    ``positions[i]`` the slot it has to reach.  Each pair that changes its
    relative order contributes ``lambda(|x|, |y|)`` where ``x`` was first.
    """
    out = ONE
    for i in range(len(bits)):
        for j in range(i + 1, len(bits)):
            if positions[i] > positions[j]:
                out = out * lambda_R(LABEL_DEG[bits[i]], LABEL_DEG[bits[j]])
    return out


def tensor_embedding(factors: Sequence[Tuple[StateSpace, Dict[int, int]]],
                     target: StateSpace) -> RMatrix:
    """Matrix of ``F(D_1) (x) ... (x) F(D_r) -> F(D)`` for a disjoint union.

    ``factors`` lists the factor spaces with their circle maps into
    ``target``.  The column of ``x_1 (x) ... (x) x_r`` is the mixed-radix
    index with the first factor most significant.
    """
    ranks = [sp.rank for sp, _ in factors]
    cols = []
    for combo in itertools.product(*[range(r) for r in ranks]):
        bits: List[int] = []
        slots: List[int] = []
        for (sp, cmap), basis in zip(factors, combo):
            for i, circ in enumerate(sp.circles):
                bits.append((basis >> i) & 1)
                slots.append(target.index[cmap[circ]])
        if sorted(slots) != list(range(target.k)):
            raise ValueError("factors do not cover the target circles exactly once")
        idx = 0
        for b, s in zip(bits, slots):
            if b:
                idx |= 1 << s
        cols.append({idx: RingElem({reorder_monomial(bits, slots): 1})})
    total = 1
    for r in ranks:
        total *= r
    return RMatrix(target.rank, total, cols)


def relabel_matrix(src: ClosedDiagram, dst: ClosedDiagram, cmap: Dict[int, int]) -> RMatrix:
    """Canonical isomorphism ``F(src) -> F(dst)`` along a circle bijection."""
    return tensor_embedding([(src.space(), cmap)], dst.space())


# ---------------------------------------------------------------------------
# Composition maps
# ---------------------------------------------------------------------------


@dataclass
class SurgeryProduct:
    """Data of one composition ``F(c-bar P2 b) (x) F(b-bar P1 a) -> target``."""

    stack: Stack
    movie: Movie
    upper: Stack
    lower: Stack
    matrix: RMatrix  # from the tensor product (upper factor first) to the target


def surgery_product(lower_piece, upper_piece, a: FlatTangle, b: FlatTangle, c: FlatTangle,
                    target: ClosedDiagram, target_pairs) -> SurgeryProduct:
    """Surgery composition of two pieces into an explicitly given target.

    ``target_pairs(stack)`` returns node pairs identifying the end state of
    the surgery with ``target``.
    """
    stack = build_stack([lower_piece, upper_piece], [b], a, c)
    upper = piece_closure(upper_piece, b, c)
    lower = piece_closure(lower_piece, a, b)
    start = stack.diagram
    up_map = circle_correspondence(upper.diagram, start, zip(upper.nodes[0], stack.nodes[1]), False)
    lo_map = circle_correspondence(lower.diagram, start, zip(lower.nodes[0], stack.nodes[0]), False)
    embed = tensor_embedding([(upper.diagram.space(), up_map), (lower.diagram.space(), lo_map)],
                             start.space())
    movie = Movie(start, tuple(Saddle(g, "up") for g in stack.junctions[0]))
    end = movie.end
    cmap = circle_correspondence(end, target, target_pairs(stack))
    mat = relabel_matrix(end, target, cmap) @ movie.matrix() @ embed
    return SurgeryProduct(stack, movie, upper, lower, mat)


def composite_pairs(t2: FlatTangle, t1: FlatTangle):
    """Node pairs identifying a flat surgery end state with ``c-bar t2 t1 a``."""

    def pairs(stack: Stack):
        lo, hi = stack.nodes
        n1 = 2 * t1.n_in
        n2 = 2 * t2.n_out
        bottom = lo[:n1]
        top = hi[2 * t2.n_in:2 * t2.n_in + n2]
        return list(zip(bottom, range(n1))) + list(zip(top, range(n1, n1 + n2)))

    return pairs


def flat_closure(t: FlatTangle, a: FlatTangle, b: FlatTangle) -> ClosedDiagram:
    return piece_closure(FlatPiece(t), a, b).diagram


@lru_cache(maxsize=None)
def mu_block(t2: FlatTangle, t1: FlatTangle, c: FlatTangle, b: FlatTangle, a: FlatTangle) -> RMatrix:
    """``mu_{cba}[t2, t1]``: ``F(c-bar t2 b) (x) F(b-bar t1 a) -> F(c-bar t2 t1 a)``.

    Columns are indexed by ``x * rank_lower + y`` for ``x (x) y``.
    """
    if t1.n_out != t2.n_in:
        raise BoundaryMismatch("tangles are not composable")
    t = compose(t2, t1)
    target = flat_closure(t, a, c)
    return surgery_product(FlatPiece(t1), FlatPiece(t2), a, b, c, target,
                           composite_pairs(t2, t1)).matrix


def mu(t2: FlatTangle, t1: FlatTangle) -> Dict[Tuple[FlatTangle, FlatTangle, FlatTangle], RMatrix]:
    """All blocks ``mu_{cba}[t2, t1]`` indexed by ``(c, b, a)``.

    Products of elements whose middle closures differ vanish and have no
    block.
    """
    if t1.n_out != t2.n_in:
        raise BoundaryMismatch("tangles are not composable")
    out = {}
    for a in enumerate_matchings(t1.n_in):
        for b in enumerate_matchings(t1.n_out):
            for c in enumerate_matchings(t2.n_out):
                out[(c, b, a)] = mu_block(t2, t1, c, b, a)
    return out


# ---------------------------------------------------------------------------
# The grading category
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GDegree:
    """A morphism ``(t, p): a -> b`` of the grading category."""

    tangle: FlatTangle
    p: Bidegree
    source: FlatTangle
    target: FlatTangle

    def __post_init__(self):
        if self.tangle.loops:
            raise ValueError("grading tangles are reduced")
        if self.source.n_in != self.tangle.n_in or self.target.n_in != self.tangle.n_out:
            raise BoundaryMismatch("endpoints do not match the tangle")

    def __str__(self) -> str:
        return f"({self.tangle}, {self.p})"


def g_identity(a: FlatTangle) -> GDegree:
    n = a.n_in
    return GDegree(identity(n), (n, 0), a, a)


def g_compose(g2: GDegree, g1: GDegree) -> GDegree:
    """``(t', p') o (t, p) = (reduce(t' t), p + p' + s_cba(t', t))``."""
    if g1.target != g2.source:
        raise BoundaryMismatch("grading morphisms are not composable")
    t, _ = reduce(compose(g2.tangle, g1.tangle))
    s = surgery_shift(g2.tangle, g1.tangle, g2.target, g1.target, g1.source)
    return GDegree(t, add_deg(add_deg(g1.p, g2.p), s), g1.source, g2.target)


@lru_cache(maxsize=None)
def surgery_shift(t2: FlatTangle, t1: FlatTangle, c: FlatTangle, b: FlatTangle, a: FlatTangle) -> Bidegree:
    """``s_cba(t2, t1)``: the degree of the canonical surgery."""
    stack = build_stack([FlatPiece(t1), FlatPiece(t2)], [b], a, c)
    return Movie(stack.diagram, tuple(Saddle(g, "up") for g in stack.junctions[0])).degree()


def lower_closure(t: FlatTangle, a: FlatTangle) -> FlatTangle:
    """The matching ``t a`` seen from the top of ``t``, free loops dropped."""
    low, _ = reduce(compose(t, a.bar()))
    return low.bar()


def upper_closure(t: FlatTangle, d: FlatTangle) -> FlatTangle:
    """The matching ``d-bar t`` seen from the bottom of ``t``, free loops dropped."""
    high, _ = reduce(compose(d, t))
    return high


def alpha_one(t2: FlatTangle, t1: FlatTangle, t0: FlatTangle,
              d: FlatTangle, c: FlatTangle, b: FlatTangle, a: FlatTangle) -> Monomial:
    """``alpha_1``: swap the two surgeries on ``d-bar t2 c c-bar t1 b b-bar t0 a``.

    The lower movie performs the ``b`` surgery first, the upper one the
    ``c`` surgery first.  Below the ``b`` junction the diagram only sees
    the matching ``t0 a`` (free loops take no part in the saddles), and
    likewise above the ``c`` junction, so the value is computed on that
    reduced diagram.
    """
    return _alpha_one(t1, c, b, lower_closure(t0, a), upper_closure(t2, d))


@lru_cache(maxsize=None)
def _alpha_one(t1: FlatTangle, c: FlatTangle, b: FlatTangle, low: FlatTangle, high: FlatTangle) -> Monomial:
    pieces = [FlatPiece(identity(b.n_in)), FlatPiece(t1), FlatPiece(identity(c.n_in))]
    stack = build_stack(pieces, [b, c], low, high)
    nb, nc = len(stack.junctions[0]), len(stack.junctions[1])
    events = tuple(Saddle(g, "up") for g in stack.junctions[0] + stack.junctions[1])
    order = list(range(nb, nb + nc)) + list(range(nb))
    return iota(Movie(stack.diagram, events), order)


def alpha(g2: GDegree, g1: GDegree, g0: GDegree) -> Monomial:
    """Associator ``alpha(g2, g1, g0) = alpha_1 * lambda(s_cba(t1, t0), p2)``."""
    if g0.target != g1.source or g1.target != g2.source:
        raise BoundaryMismatch("grading morphisms are not composable")
    a, b, c, d = g0.source, g0.target, g1.target, g2.target
    a1 = alpha_one(g2.tangle, g1.tangle, g0.tangle, d, c, b, a)
    s = surgery_shift(g1.tangle, g0.tangle, c, b, a)
    return a1 * lambda_R(s, g2.p)


# ---------------------------------------------------------------------------
# Bimodules of flat tangles and the arc algebra
# ---------------------------------------------------------------------------

BasisKey = Tuple[FlatTangle, FlatTangle, int]  # (source a, target b, labeling)
Vector = Dict[BasisKey, RingElem]


class ArcBimodule:
    """``F(t)`` for a flat tangle ``t``: blocks ``F(b-bar t a)`` per closure pair."""

    def __init__(self, t: FlatTangle):
        self.t = t
        self.reduced, _ = reduce(t)
        self.sources = enumerate_matchings(t.n_in)
        self.targets = enumerate_matchings(t.n_out)
        self.spaces: Dict[Tuple[FlatTangle, FlatTangle], StateSpace] = {
            (a, b): flat_closure(t, a, b).space() for a in self.sources for b in self.targets
        }

    def basis(self) -> List[BasisKey]:
        return [(a, b, i) for (a, b), sp in self.spaces.items() for i in range(sp.rank)]

    def degree(self, key: BasisKey) -> Bidegree:
        a, b, i = key
        return self.spaces[(a, b)].degree(i)

    def gdegree(self, key: BasisKey) -> GDegree:
        a, b, _ = key
        return GDegree(self.reduced, self.degree(key), a, b)

    def qdegree(self, key: BasisKey) -> int:
        p = self.degree(key)
        return p[0] + p[1] + self.t.n_in

    def rank(self) -> int:
        return sum(sp.rank for sp in self.spaces.values())


def compose_elements(t2: FlatTangle, t1: FlatTangle, x: Vector, y: Vector) -> Vector:
    """``mu[t2, t1](x, y)`` extended bilinearly; ``x`` lies in ``F(t2)``."""
    out: Vector = {}
    for (b2, c, i), u in x.items():
        for (a, b, j), v in y.items():
            if b != b2:
                continue
            lower_rank = 1 << flat_closure(t1, a, b).n_circles()
            col = mu_block(t2, t1, c, b, a).cols[i * lower_rank + j]
            for r, w in col.items():
                key = (a, c, r)
                out[key] = out.get(key, RingElem()) + u * v * w
    return {k: v for k, v in out.items() if not v.is_zero()}


class ArcAlgebra(ArcBimodule):
    """The arc algebra ``H^n`` with its multiplication and units."""

    def __init__(self, n: int):
        super().__init__(identity(n))
        self.n = n
        self.matchings = self.sources

    def unit(self, a: FlatTangle) -> Vector:
        """``1_a``: every circle of ``a-bar a`` labelled ``v+``.

        Over R the all-``v+`` labeling is only defined up to a power of
        ``X`` (it depends on the order in which the circles are born).  The
        unit is the representative ``X^k e`` that is idempotent, which is
        ``mu(e, e)`` itself because ``X^2 = 1``.
        """
        e = {(a, a, 0): RingElem.promote(1)}
        return self.multiply(e, e)

    def multiply(self, x: Vector, y: Vector) -> Vector:
        return compose_elements(self.t, self.t, x, y)

    def structure_constants(self) -> List[dict]:
        """Nonzero products of basis elements, in a deterministic order."""
        from .tangles import matching_key
        from .ring import render

        out = []
        for x in self.basis():
            for y in self.basis():
                if x[0] != y[1]:
                    continue
                prod = self.multiply({x: RingElem.promote(1)}, {y: RingElem.promote(1)})
                for (a, c, r), v in sorted(prod.items(), key=lambda kv: (matching_key(kv[0][0]),
                                                                          matching_key(kv[0][1]),
                                                                          kv[0][2])):
                    out.append({
                        "left": [matching_key(x[0]), matching_key(x[1]), x[2]],
                        "right": [matching_key(y[0]), matching_key(y[1]), y[2]],
                        "result": [matching_key(a), matching_key(c), r],
                        "coefficient": render(v),
                    })
        return out


def build_arc_algebra(n: int) -> ArcAlgebra:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return ArcAlgebra(n)


def unit_scalar_left(g: GDegree) -> Monomial:
    """Left unitor ``lambda(Id_b, g)`` of the grading category: ``1_b x = this * x``."""
    return ONE


def unit_scalar_right(g: GDegree) -> Monomial:
    """Right unitor: ``x 1_a = lambda_R(p, (|a|, 0)) X^{|a|} x``."""
    n = g.source.n_in
    return lambda_R(g.p, (n, 0)) * X ** n


# ---------------------------------------------------------------------------
# Structural checks
# ---------------------------------------------------------------------------


def _objects(max_n: int) -> List[FlatTangle]:
    return [a for n in range(max_n + 1) for a in enumerate_matchings(n)]


def _morphisms(a: FlatTangle, b: FlatTangle, p: Bidegree) -> List[GDegree]:
    from .tangles import enumerate_flat_tangles

    return [GDegree(t, p, a, b) for t in enumerate_flat_tangles(a.n_in, b.n_in)]


def coboundary(w: GDegree, x: GDegree, y: GDegree, z: GDegree) -> Monomial:
    """``d alpha(w, x, y, z)``; equal to ``1`` for a 3-cocycle.

    The morphisms compose as ``w x y z`` (``z`` first).
    """
    xy = g_compose(x, y)
    wx = g_compose(w, x)
    yz = g_compose(y, z)
    lhs = alpha(w, x, y) * alpha(w, xy, z) * alpha(x, y, z)
    rhs = alpha(wx, y, z) * alpha(w, x, yz)
    return lhs / rhs


_PROBES = ((0, 0), (1, 0), (0, 1))


@dataclass
class CocycleReport:
    quadruples: int
    classes: int
    failures: List[tuple]


def cocycle_check(max_n: int = 2) -> CocycleReport:
    """Check ``d alpha = 1`` on every composable quadruple over ``B^0 .. B^max_n``.

    A quadruple ``w x y z`` through objects ``a .. e`` enters ``d alpha``
    only through the matchings ``z a`` (below ``b``) and ``e-bar w`` (above
    ``d``), because every scalar involved is computed on diagrams that see
    nothing else.  Quadruples are grouped by that data; each group is
    evaluated on one of its members and counted with its multiplicity.

    The ``Z^2`` components enter through characters, so every group is
    evaluated with all of them zero and with each one set to each unit
    vector in turn.
    """
    from collections import defaultdict

    from .tangles import enumerate_flat_tangles

    objs = _objects(max_n)
    quads = 0
    classes = 0
    failures = []
    for b, c, d in itertools.product(objs, repeat=3):
        lows = defaultdict(list)
        for a in objs:
            for tz in enumerate_flat_tangles(a.n_in, b.n_in):
                lows[lower_closure(tz, a)].append((a, tz))
        highs = defaultdict(list)
        for e in objs:
            for tw in enumerate_flat_tangles(d.n_in, e.n_in):
                highs[upper_closure(tw, e)].append((e, tw))
        for ty in enumerate_flat_tangles(b.n_in, c.n_in):
            for tx in enumerate_flat_tangles(c.n_in, d.n_in):
                for zs in lows.values():
                    a, tz = zs[0]
                    for ws in highs.values():
                        e, tw = ws[0]
                        classes += 1
                        quads += len(zs) * len(ws)
                        for slot in range(4):
                            for p in _PROBES if slot == 0 else _PROBES[1:]:
                                ps = [(0, 0)] * 4
                                ps[slot] = p
                                val = coboundary(GDegree(tw, ps[3], d, e), GDegree(tx, ps[2], c, d),
                                                 GDegree(ty, ps[1], b, c), GDegree(tz, ps[0], a, b))
                                if val != ONE:
                                    failures.append((a, b, c, d, e, tz, ty, tx, tw, tuple(ps), val))
    return CocycleReport(quads, classes, failures)
