"""Chronological cobordisms as movies of saddles on gadget diagrams.

A :class:`ClosedDiagram` is a closed planar 1-manifold assembled from a
fixed wiring between nodes plus a list of *gadgets*.  A gadget is a small
square with four ports (bottom-left, bottom-right, top-left, top-right)
that is smoothed either horizontally (``"H"``: arcs ``bl-br`` and
``tl-tr``) or vertically (``"V"``: arcs ``bl-tl`` and ``br-tr``).  Crossing
sites of a tangle diagram and the surgery sites of the arc-algebra
multiplication are gadgets.

A saddle toggles one gadget.  Its arrow (``up``/``down`` for ``H -> V``,
``left``/``right`` for ``V -> H``) runs along the core of the band, from the
*tail* arc to the *head* arc.  This is all the framing data the TQFT needs:

* a saddle joining two circles is a merge ``m(head (x) tail)``;
* a saddle splitting a circle produces ``(left piece) (x) (right piece)``
  where left and right are read off while looking along the arrow.

The scalar attached to exchanging two consecutive saddles is provided by
:func:`transpose_scalar`, an explicit case table, and validated against
the TQFT by :func:`oracle_scalar`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple

from .ring import ONE, XY, Bidegree, Monomial, RingElem, X, Y, Z, lambda_R
from .tangles import FlatTangle, UnionFind, matching_arcs
from .tqft import AbstractEvent, RMatrix, StateSpace, apply_event

ARROWS_HV = ("up", "down")
ARROWS_VH = ("left", "right")

SADDLE_DEGREES = {"merge": (-1, 0), "split": (0, -1)}


class NonExchangeable(ValueError):
    """Raised when two events cannot be swapped in a movie."""


class InvalidEvent(ValueError):
    """Raised when an event does not apply to the current diagram."""


@dataclass(frozen=True)
class Saddle:
    """A saddle at ``gadget`` whose band core points in direction ``arrow``."""

    gadget: int
    arrow: str

    def __post_init__(self):
        if self.arrow not in ARROWS_HV + ARROWS_VH:
            raise ValueError(f"unknown arrow {self.arrow!r}")

    def reversed(self) -> "Saddle":
        flip = {"up": "down", "down": "up", "left": "right", "right": "left"}
        return Saddle(self.gadget, flip[self.arrow])


@dataclass(frozen=True)
class ClosedDiagram:
    """Closed planar 1-manifold with toggleable gadgets.

    Nodes ``0..n_nodes-1``; each node lies on exactly two arcs (wires or
    gadget arcs).  ``gadgets[g] = (bl, br, tl, tr)``.
    """

    n_nodes: int
    wires: Tuple[Tuple[int, int], ...]
    gadgets: Tuple[Tuple[int, int, int, int], ...]
    states: Tuple[str, ...]

    def with_state(self, g: int, state: str) -> "ClosedDiagram":
        st = list(self.states)
        st[g] = state
        return ClosedDiagram(self.n_nodes, self.wires, self.gadgets, tuple(st))

    def with_states(self, states: Sequence[str]) -> "ClosedDiagram":
        return ClosedDiagram(self.n_nodes, self.wires, self.gadgets, tuple(states))

    def circle_map(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """Return ``(label_of_node, labels)``; a label is the smallest node on the circle."""
        return _circle_map(self.n_nodes, self.wires, self.gadgets, self.states)

    def circles(self) -> Tuple[int, ...]:
        return self.circle_map()[1]

    def space(self) -> StateSpace:
        return StateSpace(self.circles())

    def n_circles(self) -> int:
        return len(self.circles())

    def arc_circle(self, g: int, arc: str) -> int:
        """Label of the circle through arc ``arc`` of gadget ``g``.

        ``arc`` is ``bottom``/``top`` (state H) or ``left``/``right`` (state V).
        """
        bl, br, tl, tr = self.gadgets[g]
        node = {"bottom": bl, "top": tl, "left": bl, "right": br}[arc]
        return self.circle_map()[0][node]


@lru_cache(maxsize=500000)
def _circle_map(n_nodes, wires, gadgets, states):
    uf = UnionFind(n_nodes)
    for u, v in wires:
        uf.union(u, v)
    for (bl, br, tl, tr), st in zip(gadgets, states):
        if st == "H":
            uf.union(bl, br)
            uf.union(tl, tr)
        else:
            uf.union(bl, tl)
            uf.union(br, tr)
    # union-find keeps the smallest node as root
    label = tuple(uf.find(x) for x in range(n_nodes))
    return label, tuple(sorted(set(label)))


# Band geometry per arrow: (state before, state after, tail arc, head arc,
# arc on the left of the arrow afterwards, arc on the right afterwards).
_GEOMETRY = {
    "up": ("H", "V", "bottom", "top", "left", "right"),
    "down": ("H", "V", "top", "bottom", "right", "left"),
    "left": ("V", "H", "right", "left", "bottom", "top"),
    "right": ("V", "H", "left", "right", "top", "bottom"),
}


@dataclass(frozen=True)
class SaddleData:
    """A saddle resolved against a diagram."""

    kind: str  # merge / split
    before: ClosedDiagram
    after: ClosedDiagram
    tail: int  # circle labels in ``before``
    head: int
    left: int  # circle labels in ``after``
    right: int
    event: AbstractEvent

    @property
    def degree(self) -> Bidegree:
        return SADDLE_DEGREES[self.kind]

    @property
    def inputs(self) -> Tuple[int, ...]:
        return tuple(sorted({self.tail, self.head}))

    @property
    def outputs(self) -> Tuple[int, ...]:
        return tuple(sorted({self.left, self.right}))


def resolve_saddle(diagram: ClosedDiagram, s: Saddle) -> SaddleData:
    """Classify a saddle on ``diagram`` and build its abstract event."""
    return _resolve_saddle(diagram, s)


@lru_cache(maxsize=500000)
def _resolve_saddle(diagram: ClosedDiagram, s: Saddle) -> SaddleData:
    pre, post, tail_arc, head_arc, left_arc, right_arc = _GEOMETRY[s.arrow]
    if diagram.states[s.gadget] != pre:
        raise InvalidEvent(f"saddle {s} needs gadget state {pre}")
    after = diagram.with_state(s.gadget, post)
    tail = diagram.arc_circle(s.gadget, tail_arc)
    head = diagram.arc_circle(s.gadget, head_arc)
    left = after.arc_circle(s.gadget, left_arc)
    right = after.arc_circle(s.gadget, right_arc)
    if tail != head:
        if left != right:
            raise AssertionError("saddle on two circles cannot give two circles")
        ev = AbstractEvent("merge", (head, tail), (left,))
        return SaddleData("merge", diagram, after, tail, head, left, right, ev)
    if left == right:
        raise AssertionError("saddle on one circle must split it")
    ev = AbstractEvent("split", (tail,), (left, right))
    return SaddleData("split", diagram, after, tail, head, left, right, ev)


def saddle_matrix(diagram: ClosedDiagram, s: Saddle) -> RMatrix:
    data = resolve_saddle(diagram, s)
    return apply_event(data.before.space(), data.after.space(), data.event)


# ---------------------------------------------------------------------------
# Movies
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Movie:
    """A start diagram followed by saddles applied bottom to top."""

    start: ClosedDiagram
    events: Tuple[Saddle, ...] = ()

    def states(self) -> List[ClosedDiagram]:
        out = [self.start]
        for s in self.events:
            out.append(resolve_saddle(out[-1], s).after)
        return out

    def resolved(self) -> List[SaddleData]:
        out = []
        cur = self.start
        for s in self.events:
            data = resolve_saddle(cur, s)
            out.append(data)
            cur = data.after
        return out

    @property
    def end(self) -> ClosedDiagram:
        return self.states()[-1]

    def degree(self) -> Bidegree:
        a = b = 0
        for d in self.resolved():
            a += d.degree[0]
            b += d.degree[1]
        return (a, b)

    def matrix(self) -> RMatrix:
        return apply_movie(self)

    def reorder(self, order: Sequence[int]) -> "Movie":
        return Movie(self.start, tuple(self.events[i] for i in order))

    def dump(self) -> str:
        lines = [f"start circles {list(self.start.circles())}"]
        for d, s in zip(self.resolved(), self.events):
            lines.append(
                f"{d.kind:5s} gadget={s.gadget} arrow={s.arrow} tail={d.tail} head={d.head} "
                f"left={d.left} right={d.right} -> {list(d.after.circles())}"
            )
        return "\n".join(lines)


def apply_movie(m: Movie) -> RMatrix:
    """Matrix of a movie (identity for the empty movie)."""
    mat = RMatrix.identity(m.start.space().rank)
    for d in m.resolved():
        mat = apply_event(d.before.space(), d.after.space(), d.event) @ mat
    return mat


# ---------------------------------------------------------------------------
# Exchange scalars
# ---------------------------------------------------------------------------


def _swap(diagram: ClosedDiagram, lower: Saddle, upper: Saddle):
    if lower.gadget == upper.gadget:
        raise NonExchangeable("two saddles on the same gadget cannot be exchanged")
    first = resolve_saddle(diagram, lower)
    second = resolve_saddle(first.after, upper)
    try:
        first_b = resolve_saddle(diagram, upper)
        second_b = resolve_saddle(first_b.after, lower)
    except InvalidEvent as exc:  # pragma: no cover - gadgets are independent
        raise NonExchangeable(str(exc)) from exc
    return first, second, first_b, second_b


def classify_exchange(diagram: ClosedDiagram, lower: Saddle, upper: Saddle) -> str:
    """Name of the exchange case, used for reporting and the case table."""
    first, second, first_b, second_b = _swap(diagram, lower, upper)
    return _classify(first, second, first_b, second_b)[0]


def _classify(first, second, first_b, second_b):
    touched1 = set(first.inputs)
    touched2 = set(first_b.inputs)
    if not touched1 & touched2:
        return "disjoint", None
    k1, k2 = first.kind, second.kind
    if k1 == "merge" and k2 == "merge":
        return "merge-merge", None
    if k1 == "split" and k2 == "split":
        return "split-split", None
    if k1 == "merge" and k2 == "split":
        if first_b.kind == "merge":
            # both saddles join the same two circles
            return "double-bridge", None
        return "merge-split", None
    # split then merge
    if first_b.kind == "split" and second_b.kind == "merge":
        return "genus", None
    return "split-merge", None


def transpose_scalar(diagram: ClosedDiagram, lower: Saddle, upper: Saddle) -> Monomial:
    """Scalar ``c`` with ``F(upper first, then lower) = c * F(lower first, then upper)``.

    Cases (the first saddle in the original order is ``s1``, the second
    ``s2``):

    * disjoint supports: ``lambda_R(|s1|, |s2|)``;
    * two merges of three circles: ``X``;
    * two splits producing three circles: ``Y``;
    * two saddles both bridging the same two circles (merge then split,
      or the reverse): ``X`` if the arrows point towards different
      circles, ``Y`` if they point towards the same circle;
    * a merge followed by a split of a third circle configuration, i.e.
      merge-then-split exchanged with split-then-merge: ``Z``, and ``Z^-1``
      in the opposite direction;
    * two saddles on one circle that split it and join it back (genus):
      ``1`` or ``XY`` depending on the frames, see :func:`_genus_scalar`.
    """
    first, second, first_b, second_b = _swap(diagram, lower, upper)
    case, _ = _classify(first, second, first_b, second_b)
    if case == "disjoint":
        return lambda_R(first.degree, first_b.degree)
    if case == "merge-merge":
        return X
    if case == "split-split":
        return Y
    if case == "merge-split":
        return Z
    if case == "split-merge":
        return Z.inverse()
    if case == "double-bridge":
        return _double_bridge_scalar(first, first_b)
    return _genus_scalar(first, second, first_b, second_b)


def _double_bridge_scalar(m1: SaddleData, m2: SaddleData) -> Monomial:
    """Two merges between the same pair of circles, seen from one state."""
    return Y if m1.head == m2.head else X


GENUS_RULE = "A"


def _genus_scalar(first: SaddleData, second: SaddleData, first_b, second_b) -> Monomial:
    """One-circle configuration: split by ``first`` then merge by ``second``.

    Rule: if the second saddle runs from the right piece of the first
    split to its left piece, the exchange scalar is 1; otherwise it is XY.
    """
    forward = second.tail == first.right and second.head == first.left
    if GENUS_RULE == "A":
        return ONE if forward else XY
    return XY if forward else ONE


def iota(movie: Movie, order: Sequence[int]) -> Monomial:
    """Scalar of reordering ``movie.events`` into ``[events[i] for i in order]``.

    The reordering is realised by adjacent swaps (bubble sort), and the
    result is the product of the exchange scalars of the swaps.  With the
    convention of :func:`transpose_scalar` the result ``c`` satisfies
    ``F(reordered) = c * F(movie)``.
    """
    if sorted(order) != list(range(len(movie.events))):
        raise ValueError("order must be a permutation of the events")
    rank = {ev_idx: pos for pos, ev_idx in enumerate(order)}
    current = list(range(len(movie.events)))
    total = ONE
    changed = True
    while changed:
        changed = False
        for k in range(len(current) - 1):
            if rank[current[k]] > rank[current[k + 1]]:
                total = total * _swap_at(movie, current, k)
                current[k], current[k + 1] = current[k + 1], current[k]
                changed = True
    return total


def _swap_at(movie: Movie, current: List[int], k: int) -> Monomial:
    diagram = movie.start
    for idx in current[:k]:
        diagram = resolve_saddle(diagram, movie.events[idx]).after
    return transpose_scalar(diagram, movie.events[current[k]], movie.events[current[k + 1]])


def iota_swaps(start: ClosedDiagram, events: Sequence[Saddle], swaps: Sequence[int]) -> Monomial:
    """Product of exchange scalars along an explicit list of adjacent swaps."""
    current = list(events)
    total = ONE
    for k in swaps:
        diagram = start
        for s in current[:k]:
            diagram = resolve_saddle(diagram, s).after
        total = total * transpose_scalar(diagram, current[k], current[k + 1])
        current[k], current[k + 1] = current[k + 1], current[k]
    return total


class OracleError(ValueError):
    """Raised when two movies are not related by a unique monomial."""


def matrix_ratio(m1: RMatrix, m2: RMatrix) -> List[Monomial]:
    """All monomials ``c`` with ``m2 = c * m1`` (``m1`` must be nonzero)."""
    if m1.is_zero():
        raise OracleError("reference map is zero")
    # candidates from one nonzero entry: c * e1 = e2
    i, j, e1 = next(iter(m1.entries()))
    e2 = m2[i, j]
    cands = []
    for ex in (0, 1):
        for ey in (0, 1):
            for zp in _z_candidates(e1, e2):
                c = Monomial(ex, ey, zp)
                if e1 * c == e2:
                    cands.append(c)
    return [c for c in cands if m1.scale(c) == m2]


def _z_candidates(e1: RingElem, e2: RingElem) -> List[int]:
    if e1.is_zero() or e2.is_zero():
        return []
    z1 = min(m.z_pow for m, _ in e1.items())
    z2 = min(m.z_pow for m, _ in e2.items())
    return [z2 - z1]


def oracle_scalar(m1: Movie, m2: Movie) -> Monomial:
    """The unique monomial ``c`` with ``F(m2) = c * F(m1)``.

    Raises
    ------
    OracleError
        If ``F(m1)`` is zero, no monomial works, or several do.
    """
    if m1.start != m2.start:
        raise OracleError("movies have different start diagrams")
    a, b = apply_movie(m1), apply_movie(m2)
    cands = matrix_ratio(a, b)
    if not cands:
        raise OracleError("no monomial relates the two movies")
    if len(cands) > 1:
        raise OracleError(f"ambiguous: {', '.join(map(str, cands))}")
    return cands[0]


def oracle_candidates(m1: Movie, m2: Movie) -> List[Monomial]:
    return matrix_ratio(apply_movie(m1), apply_movie(m2))


# ---------------------------------------------------------------------------
# Building diagrams from flat pieces
# ---------------------------------------------------------------------------


class DiagramBuilder:
    """Incrementally assemble a :class:`ClosedDiagram`."""

    def __init__(self):
        self.n_nodes = 0
        self.wires: List[Tuple[int, int]] = []
        self.gadgets: List[Tuple[int, int, int, int]] = []
        self.states: List[str] = []

    def node(self) -> int:
        self.n_nodes += 1
        return self.n_nodes - 1

    def nodes(self, k: int) -> List[int]:
        return [self.node() for _ in range(k)]

    def wire(self, u: int, v: int) -> None:
        self.wires.append((u, v))

    def loop(self) -> int:
        u = self.node()
        self.wire(u, u)
        return u

    def gadget(self, bl: int, br: int, tl: int, tr: int, state: str) -> int:
        self.gadgets.append((bl, br, tl, tr))
        self.states.append(state)
        return len(self.gadgets) - 1

    def flat(self, t: FlatTangle, bottom: Sequence[int], top: Sequence[int]) -> List[int]:
        """Wire a flat tangle between given bottom and top nodes; return its loop nodes."""
        pts = list(bottom) + list(top)
        for p, q in t.arcs():
            self.wire(pts[p], pts[q])
        return [self.loop() for _ in range(t.loops)]

    def cap_off(self, a: FlatTangle, points: Sequence[int]) -> None:
        """Close ``points`` with the arcs of matching ``a``."""
        for p, q in matching_arcs(a):
            self.wire(points[p], points[q])

    def junction(self, b: FlatTangle, lower: Sequence[int], upper: Sequence[int]) -> List[int]:
        """Surgery sites for ``b-bar`` over ``lower`` and ``b`` under ``upper``.

        One gadget per arc of ``b`` in state ``H``; gadgets are returned in
        right-to-left order of the arcs (by right endpoint), which is the
        order in which the canonical surgery performs the saddles.
        """
        arcs = sorted(matching_arcs(b), key=lambda pq: -pq[1])
        out = []
        for i, j in arcs:
            out.append(self.gadget(lower[i], lower[j], upper[i], upper[j], "H"))
        return out

    def glue(self, lower: Sequence[int], upper: Sequence[int]) -> None:
        for u, v in zip(lower, upper):
            self.wire(u, v)

    def build(self) -> ClosedDiagram:
        return ClosedDiagram(self.n_nodes, tuple(self.wires), tuple(self.gadgets), tuple(self.states))


def closure_diagram(t: FlatTangle, a: FlatTangle, b: FlatTangle) -> ClosedDiagram:
    """The closed diagram ``b-bar t a``."""
    bld = DiagramBuilder()
    bottom = bld.nodes(2 * t.n_in)
    top = bld.nodes(2 * t.n_out)
    bld.flat(t, bottom, top)
    bld.cap_off(a, bottom)
    bld.cap_off(b, top)
    return bld.build()


def canonical_surgery(t2: FlatTangle, b: FlatTangle, t1: FlatTangle,
                      c: FlatTangle, a: FlatTangle) -> Movie:
    """Movie ``W_cba(t2, t1)`` from ``c-bar t2 b b-bar t1 a`` to ``c-bar t2 t1 a``.

    One upward saddle per arc of ``b``, processed right to left.
    """
    if t1.n_out != b.n_in or t2.n_in != b.n_in or t1.n_in != a.n_in or t2.n_out != c.n_in:
        from .tangles import BoundaryMismatch

        raise BoundaryMismatch("closures do not match the tangles")
    bld = DiagramBuilder()
    bot1 = bld.nodes(2 * t1.n_in)
    top1 = bld.nodes(2 * t1.n_out)
    bot2 = bld.nodes(2 * t2.n_in)
    top2 = bld.nodes(2 * t2.n_out)
    bld.flat(t1, bot1, top1)
    bld.flat(t2, bot2, top2)
    bld.cap_off(a, bot1)
    bld.cap_off(c, top2)
    gads = bld.junction(b, top1, bot2)
    return Movie(bld.build(), tuple(Saddle(g, "up") for g in gads))


def surgery_degree(t2: FlatTangle, t1: FlatTangle, c: FlatTangle, b: FlatTangle,
                   a: FlatTangle) -> Bidegree:
    """``s_cba(t2, t1)``: the degree of the canonical surgery movie."""
    return _surgery_degree(t2, t1, c, b, a)


@lru_cache(maxsize=200000)
def _surgery_degree(t2, t1, c, b, a):
    return canonical_surgery(t2, b, t1, c, a).degree()
