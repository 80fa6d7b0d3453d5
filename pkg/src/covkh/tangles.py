"""Flat tangles, crossingless matchings and crossing diagrams.

Boundary points of a flat tangle ``t`` with ``n_in`` bottom pairs and
``n_out`` top pairs are indexed ``0 .. 2*n_in - 1`` for the bottom points
(left to right) followed by ``2*n_in .. 2*n_in + 2*n_out - 1`` for the top
points (left to right).  A :class:`FlatTangle` stores the fixed-point-free
pairing of these points plus a count of free loops.

A :class:`TangleDiagram` is a bottom-to-top word of elementary slices.  The
slice ``("pos", i)`` is a crossing between strands ``i`` and ``i+1`` whose
over-strand runs from bottom-left to top-right; ``("neg", i)`` has the
over-strand running from bottom-right to top-left.  These names match the
crossing signs when both strands are oriented upward; the actual sign of a
crossing is computed from the orientation data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple


class BoundaryMismatch(ValueError):
    """Raised when tangles with incompatible boundaries are glued."""


class UnionFind:
    """Small union-find with path halving."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if rx < ry:
                self.parent[ry] = rx
            else:
                self.parent[rx] = ry


# ---------------------------------------------------------------------------
# Flat tangles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FlatTangle:
    """A crossingless tangle from ``2*n_in`` bottom to ``2*n_out`` top points.

    Attributes
    ----------
    n_in, n_out:
        Number of bottom and top endpoint pairs.
    partner:
        ``partner[p]`` is the boundary point matched with ``p``.
    loops:
        Number of free circles.
    """

    n_in: int
    n_out: int
    partner: Tuple[int, ...]
    loops: int = 0

    def __post_init__(self):
        size = 2 * self.n_in + 2 * self.n_out
        if len(self.partner) != size:
            raise ValueError("partner table has the wrong size")
        for p, q in enumerate(self.partner):
            if q == p or self.partner[q] != p:
                raise ValueError("partner table is not a fixed-point-free involution")
        if not _is_planar(self.n_in, self.n_out, self.partner):
            raise ValueError("matching is not planar")
        if self.loops < 0:
            raise ValueError("negative loop count")

    # basic structure ------------------------------------------------------
    @property
    def size(self) -> int:
        return 2 * self.n_in + 2 * self.n_out

    def arcs(self) -> List[Tuple[int, int]]:
        """Arcs as sorted pairs ``(p, q)`` with ``p < q``, sorted by ``p``."""
        return [(p, q) for p, q in enumerate(self.partner) if p < q]

    def bottom(self, i: int) -> int:
        return i

    def top(self, j: int) -> int:
        return 2 * self.n_in + j

    def is_matching(self) -> bool:
        return self.n_out == 0

    def reduce(self) -> Tuple["FlatTangle", int]:
        """Return the loop-free tangle and the number of loops removed."""
        return FlatTangle(self.n_in, self.n_out, self.partner, 0), self.loops

    def bar(self) -> "FlatTangle":
        """Mirror image in the horizontal axis (swaps bottom and top)."""
        n, m = self.n_in, self.n_out

        def flip(p: int) -> int:
            return p + 2 * m if p < 2 * n else p - 2 * n

        partner = [0] * self.size
        for p, q in enumerate(self.partner):
            partner[flip(p)] = flip(q)
        return FlatTangle(m, n, tuple(partner), self.loops)

    def __str__(self) -> str:
        def name(p):
            return f"b{p}" if p < 2 * self.n_in else f"t{p - 2 * self.n_in}"

        arcs = " ".join(f"{name(p)}-{name(q)}" for p, q in self.arcs())
        loops = f" +{self.loops} loops" if self.loops else ""
        return f"FlatTangle({self.n_in}->{self.n_out}: {arcs}{loops})"


def _is_planar(n_in: int, n_out: int, partner: Sequence[int]) -> bool:
    size = 2 * n_in + 2 * n_out
    # circular order: bottom left-to-right, then top right-to-left
    pos = list(range(2 * n_in)) + [2 * n_in + (2 * n_out - 1 - j) for j in range(2 * n_out)]
    order = sorted(range(size), key=lambda p: pos[p])
    stack: List[int] = []
    for p in order:
        if stack and partner[p] == stack[-1]:
            stack.pop()
        else:
            stack.append(p)
    return not stack


def identity(n: int) -> FlatTangle:
    """The identity flat tangle ``1_n`` on ``2n`` strands."""
    partner = [0] * (4 * n)
    for i in range(2 * n):
        partner[i] = 2 * n + i
        partner[2 * n + i] = i
    return FlatTangle(n, n, tuple(partner))


def matching_from_arcs(n: int, arcs: Iterable[Tuple[int, int]]) -> FlatTangle:
    """A crossingless matching in ``B^n`` from arcs on points ``0..2n-1``."""
    partner = [-1] * (2 * n)
    for p, q in arcs:
        partner[p] = q
        partner[q] = p
    return FlatTangle(n, 0, tuple(partner))


def compose(t2: FlatTangle, t1: FlatTangle) -> FlatTangle:
    """Glue ``t2`` on top of ``t1``.

    Raises
    ------
    BoundaryMismatch
        If ``t1.n_out != t2.n_in``.
    """
    if t1.n_out != t2.n_in:
        raise BoundaryMismatch(f"cannot glue {t2.n_in}-pair bottom onto {t1.n_out}-pair top")
    n, m, k = t1.n_in, t1.n_out, t2.n_out
    # nodes: t1 points (0..2n+2m-1), then t2 points offset by 2n+2m
    off = t1.size
    uf = UnionFind(t1.size + t2.size)
    for p, q in enumerate(t1.partner):
        uf.union(p, q)
    for p, q in enumerate(t2.partner):
        uf.union(off + p, off + q)
    for j in range(2 * m):
        uf.union(t1.top(j), off + t2.bottom(j))
    outer = [t1.bottom(i) for i in range(2 * n)] + [off + t2.top(j) for j in range(2 * k)]
    by_root: Dict[int, List[int]] = {}
    for idx, node in enumerate(outer):
        by_root.setdefault(uf.find(node), []).append(idx)
    partner = [0] * len(outer)
    for members in by_root.values():
        p, q = members
        partner[p], partner[q] = q, p
    # closed circles made entirely of glued middle points
    middle_roots = {uf.find(t1.top(j)) for j in range(2 * m)}
    new_loops = len(middle_roots - set(by_root))
    return FlatTangle(n, k, tuple(partner), t1.loops + t2.loops + new_loops)


def reduce(t: FlatTangle) -> Tuple[FlatTangle, int]:
    return t.reduce()


@lru_cache(maxsize=None)
def enumerate_matchings(n: int) -> Tuple[FlatTangle, ...]:
    """All Catalan-many crossingless matchings of ``2n`` points, deterministically ordered."""

    def gen(points: Tuple[int, ...]):
        if not points:
            yield ()
            return
        first = points[0]
        for k in range(1, len(points), 2):
            inner, outer = points[1:k], points[k + 1:]
            for a in gen(inner):
                for b in gen(outer):
                    yield ((first, points[k]),) + a + b

    return tuple(matching_from_arcs(n, arcs) for arcs in gen(tuple(range(2 * n))))


@lru_cache(maxsize=None)
def enumerate_flat_tangles(n_in: int, n_out: int) -> Tuple[FlatTangle, ...]:
    """All loopless flat tangles from ``2 n_in`` to ``2 n_out`` points.

    They correspond to crossingless matchings of the boundary read in
    circular order (bottom left to right, then top right to left).
    """
    nb = 2 * n_in

    def point(pos: int) -> int:
        return pos if pos < nb else nb + (2 * n_out - 1 - (pos - nb))

    out = []
    for m in enumerate_matchings(n_in + n_out):
        partner = [0] * (nb + 2 * n_out)
        for p, q in m.arcs():
            partner[point(p)] = point(q)
            partner[point(q)] = point(p)
        out.append(FlatTangle(n_in, n_out, tuple(partner)))
    return tuple(out)


def matching_arcs(a: FlatTangle) -> List[Tuple[int, int]]:
    """Arcs of a matching (bottom points only) as pairs ``(i, j)`` with ``i < j``."""
    if a.n_out != 0:
        raise ValueError("not a crossingless matching")
    return a.arcs()


def matching_key(a: FlatTangle) -> str:
    """Compact string such as ``"(())"`` for a matching."""
    chars = []
    for p, q in enumerate(a.partner):
        chars.append("(" if q > p else ")")
    return "".join(chars)


# ---------------------------------------------------------------------------
# Crossing diagrams
# ---------------------------------------------------------------------------

SLICE_KINDS = ("cup", "cap", "pos", "neg")


@dataclass(frozen=True)
class TangleDiagram:
    """A tangle diagram given as a bottom-to-top word of slices.

    Parameters
    ----------
    n_in:
        Number of bottom endpoint pairs.
    slices:
        Sequence of ``(kind, i)`` with kind in ``cup, cap, pos, neg``.
        A cup at ``i`` inserts two new strands at positions ``i, i+1``; a
        cap at ``i`` joins strands ``i, i+1``; crossings act on strands
        ``i, i+1``.
    orientation:
        Optional tuple of ``+1`` (upward) / ``-1`` (downward) for the bottom
        strands followed by one entry per cup (``+1`` means the left leg of
        the cup points up).  Closed components are oriented from the first
        cup met on them.  ``None`` selects the default (all ``+1``).
    """

    n_in: int
    slices: Tuple[Tuple[str, int], ...]
    orientation: Optional[Tuple[int, ...]] = None
    widths: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        width = 2 * self.n_in
        widths = [width]
        for kind, i in self.slices:
            if kind not in SLICE_KINDS:
                raise ValueError(f"unknown slice kind {kind!r}")
            if kind == "cup":
                if not 0 <= i <= width:
                    raise ValueError(f"cup position {i} out of range for width {width}")
                width += 2
            else:
                if not 0 <= i <= width - 2:
                    raise ValueError(f"{kind} position {i} out of range for width {width}")
                if kind == "cap":
                    width -= 2
            widths.append(width)
        if width % 2:
            raise ValueError("odd number of top endpoints")
        object.__setattr__(self, "widths", tuple(widths))

    @property
    def n_out(self) -> int:
        return self.widths[-1] // 2

    @property
    def crossings(self) -> List[int]:
        """Slice indices of the crossings, in bottom-to-top order."""
        return [k for k, (kind, _) in enumerate(self.slices) if kind in ("pos", "neg")]

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    def crossing_types(self) -> List[str]:
        return [self.slices[k][0] for k in self.crossings]

    def skeleton(self) -> "Skeleton":
        return build_skeleton(self)

    def signs(self) -> List[int]:
        """Crossing signs (+1 / -1) in bottom-to-top order."""
        return crossing_signs(self)

    def writhe_counts(self) -> Tuple[int, int]:
        s = self.signs()
        return sum(1 for x in s if x > 0), sum(1 for x in s if x < 0)

    def to_json(self) -> dict:
        out = {"type": "word", "n_in": self.n_in,
               "slices": [{kind: i} for kind, i in self.slices]}
        if self.orientation is not None:
            out["orientation"] = list(self.orientation)
        return out


def stack(lower: TangleDiagram, upper: TangleDiagram) -> TangleDiagram:
    """Diagram of ``upper`` glued on top of ``lower``; crossings of ``lower`` come first."""
    if lower.n_out != upper.n_in:
        raise BoundaryMismatch("tangle boundaries do not match")
    orient = None
    if lower.orientation is not None or upper.orientation is not None:
        top = strand_orientations(lower)[-1]
        up = _full_orientation(upper)
        if upper.orientation is not None and tuple(top) != tuple(up[: 2 * upper.n_in]):
            raise ValueError("orientations disagree at the gluing line")
        orient = tuple(_full_orientation(lower)) + tuple(up[2 * upper.n_in:])
    return TangleDiagram(lower.n_in, lower.slices + upper.slices, orient)


def _full_orientation(T: TangleDiagram) -> Tuple[int, ...]:
    n_cups = sum(1 for k, _ in T.slices if k == "cup")
    if T.orientation is None:
        return (1,) * (2 * T.n_in + n_cups)
    return T.orientation


@dataclass
class Gadget:
    """A local smoothing site with four ports.

    ``bl, br, tl, tr`` are node ids of the bottom-left, bottom-right,
    top-left and top-right ports.  In state ``"H"`` the arcs are
    ``bl-br`` (bottom) and ``tl-tr`` (top); in state ``"V"`` they are
    ``bl-tl`` (left) and ``br-tr`` (right).
    """

    bl: int
    br: int
    tl: int
    tr: int


@dataclass
class Skeleton:
    """Wiring of a tangle diagram with every crossing cut out as a gadget."""

    n_in: int
    n_out: int
    n_nodes: int
    wires: List[Tuple[int, int]]
    gadgets: List[Gadget]
    kinds: List[str]  # 'pos' / 'neg' per gadget, bottom-to-top
    bottom: List[int]
    top: List[int]

    def zero_state(self, k: int) -> str:
        """State of gadget ``k`` in its 0-smoothing."""
        return "V" if self.kinds[k] == "pos" else "H"

    def state(self, k: int, bit: int) -> str:
        zero = self.zero_state(k)
        if bit == 0:
            return zero
        return "H" if zero == "V" else "V"

    def arrow(self, k: int) -> str:
        """Arrow of the 0-to-1 saddle at crossing ``k``: up or left."""
        return "left" if self.kinds[k] == "pos" else "up"


def build_skeleton(T: TangleDiagram) -> Skeleton:
    nodes = 0

    def new() -> int:
        nonlocal nodes
        nodes += 1
        return nodes - 1

    bottom = [new() for _ in range(2 * T.n_in)]
    current = list(bottom)
    wires: List[Tuple[int, int]] = []
    gadgets: List[Gadget] = []
    kinds: List[str] = []
    for kind, i in T.slices:
        if kind == "cup":
            u = new()
            v = new()
            wires.append((u, v))
            current[i:i] = [u, v]
        elif kind == "cap":
            wires.append((current[i], current[i + 1]))
            del current[i:i + 2]
        else:
            g = Gadget(new(), new(), new(), new())
            wires.append((current[i], g.bl))
            wires.append((current[i + 1], g.br))
            current[i:i + 2] = [g.tl, g.tr]
            gadgets.append(g)
            kinds.append(kind)
    top = [new() for _ in current]
    for c, t in zip(current, top):
        wires.append((c, t))
    return Skeleton(T.n_in, len(top) // 2, nodes, wires, gadgets, kinds, bottom, top)


def flat_skeleton(t: FlatTangle) -> Skeleton:
    """Skeleton of a flat tangle: no gadgets, one self-wired node per free loop."""
    n = 2 * (t.n_in + t.n_out)
    wires = list(t.arcs())
    loops = list(range(n, n + t.loops))
    wires += [(u, u) for u in loops]
    return Skeleton(t.n_in, t.n_out, n + t.loops, wires, [], [],
                    list(range(2 * t.n_in)), list(range(2 * t.n_in, n)))


def stack_skeletons(lower: Skeleton, upper: Skeleton) -> Skeleton:
    """Glue ``upper`` on top of ``lower``; gadgets of ``lower`` keep their indices."""
    if lower.n_out != upper.n_in:
        raise BoundaryMismatch("skeleton boundaries do not match")
    off = lower.n_nodes
    wires = list(lower.wires) + [(u + off, v + off) for u, v in upper.wires]
    wires += [(u, v + off) for u, v in zip(lower.top, upper.bottom)]
    gadgets = list(lower.gadgets) + [
        Gadget(g.bl + off, g.br + off, g.tl + off, g.tr + off) for g in upper.gadgets
    ]
    return Skeleton(lower.n_in, upper.n_out, off + upper.n_nodes, wires, gadgets,
                    list(lower.kinds) + list(upper.kinds), list(lower.bottom),
                    [u + off for u in upper.top])


def resolve(T: TangleDiagram, xi: Sequence[int]) -> FlatTangle:
    """Flat tangle obtained by smoothing crossing ``k`` according to ``xi[k]``.

    ``pos`` crossings have vertical 0-smoothing, ``neg`` crossings have
    horizontal 0-smoothing.
    """
    sk = build_skeleton(T)
    if len(xi) != len(sk.gadgets):
        raise ValueError(f"expected {len(sk.gadgets)} smoothing bits, got {len(xi)}")
    states = [sk.state(k, b) for k, b in enumerate(xi)]
    return skeleton_flat(sk, states)


def skeleton_flat(sk: Skeleton, states: Sequence[str]) -> FlatTangle:
    uf = UnionFind(sk.n_nodes)
    for u, v in sk.wires:
        uf.union(u, v)
    for g, st in zip(sk.gadgets, states):
        if st == "H":
            uf.union(g.bl, g.br)
            uf.union(g.tl, g.tr)
        else:
            uf.union(g.bl, g.tl)
            uf.union(g.br, g.tr)
    outer = sk.bottom + sk.top
    by_root: Dict[int, List[int]] = {}
    for idx, node in enumerate(outer):
        by_root.setdefault(uf.find(node), []).append(idx)
    partner = [0] * len(outer)
    for members in by_root.values():
        p, q = members
        partner[p], partner[q] = q, p
    roots = {uf.find(x) for x in range(sk.n_nodes)}
    return FlatTangle(sk.n_in, sk.n_out, tuple(partner), len(roots - set(by_root)))


# ---------------------------------------------------------------------------
# Orientation and signs
# ---------------------------------------------------------------------------


def strand_orientations(T: TangleDiagram) -> List[List[int]]:
    """Orientation (+1 up, -1 down) of every strand position at every level.

    Returns a list with one entry per level (``len(slices)+1`` levels); each
    entry lists the orientations of the strands crossing that level.

    Raises
    ------
    ValueError
        If the orientation data is inconsistent (a cap joining two strands
        pointing the same way, or a crossing reversing a strand).
    """
    orient = list(_full_orientation(T))
    n_bottom = 2 * T.n_in
    # Propagate along components: each strand segment gets an orientation
    # from its component; components are traced with a union-find over
    # segments and the direction is fixed by the first seed encountered.
    segs: List[List[int]] = []  # segment ids per level
    seg_count = 0

    def new_seg() -> int:
        nonlocal seg_count
        seg_count += 1
        return seg_count - 1

    level = [new_seg() for _ in range(n_bottom)]
    segs.append(level)
    # relation: (seg_a, seg_b, same) meaning orientation(seg_b) = +/- orientation(seg_a)
    relations: List[Tuple[int, int, int]] = []
    seeds: Dict[int, int] = {s: orient[i] for i, s in enumerate(level)}
    cup_idx = n_bottom
    for kind, i in T.slices:
        level = list(level)
        if kind == "cup":
            u, v = new_seg(), new_seg()
            relations.append((u, v, -1))
            seeds[u] = orient[cup_idx]
            cup_idx += 1
            level[i:i] = [u, v]
        elif kind == "cap":
            relations.append((level[i], level[i + 1], -1))
            del level[i:i + 2]
        else:
            a, b = new_seg(), new_seg()
            # strand from position i continues to position i+1 and vice versa
            relations.append((level[i], b, 1))
            relations.append((level[i + 1], a, 1))
            level[i:i + 2] = [a, b]
        segs.append(level)
    # resolve by BFS
    adj: Dict[int, List[Tuple[int, int]]] = {s: [] for s in range(seg_count)}
    for a, b, sgn in relations:
        adj[a].append((b, sgn))
        adj[b].append((a, sgn))
    value: Dict[int, int] = {}
    for s0 in sorted(seeds):  # bottom strands first, then cups in order
        if s0 in value:
            continue
        value[s0] = seeds[s0]
        queue = [s0]
        while queue:
            s = queue.pop()
            for t, sgn in adj[s]:
                if t not in value:
                    value[t] = value[s] * sgn
                    queue.append(t)
    for s in range(n_bottom):
        if value[s] != seeds[s]:
            raise ValueError("inconsistent orientations of the bottom strands")
    return [[value[s] for s in lvl] for lvl in segs]


def explicit_orientation(T: TangleDiagram, start: int = 0, stop: Optional[int] = None) -> Tuple[int, ...]:
    """Orientation tuple for the sub-word ``slices[start:stop]`` of ``T``.

    Bottom strands take their orientation at level ``start`` and every cup
    the actual orientation of its left leg, so the sub-diagram is oriented
    exactly as inside ``T``.
    """
    levels = strand_orientations(T)
    stop = len(T.slices) if stop is None else stop
    out = list(levels[start])
    for j in range(start, stop):
        kind, i = T.slices[j]
        if kind == "cup":
            out.append(levels[j + 1][i])
    return tuple(out)


def split_diagram(T: TangleDiagram, k: int) -> Tuple[TangleDiagram, TangleDiagram]:
    """Cut ``T`` after ``k`` slices into ``(T1, T2)`` with ``T = T2 T1``."""
    if not 0 <= k <= len(T.slices):
        raise ValueError("cut position out of range")
    lower = TangleDiagram(T.n_in, T.slices[:k], explicit_orientation(T, 0, k))
    n_mid = T.widths[k] // 2
    upper = TangleDiagram(n_mid, T.slices[k:], explicit_orientation(T, k))
    return lower, upper


def crossing_signs(T: TangleDiagram) -> List[int]:
    """Sign of every crossing (bottom-to-top) under the diagram's orientation."""
    levels = strand_orientations(T)
    signs = []
    for k, (kind, i) in enumerate(T.slices):
        if kind not in ("pos", "neg"):
            continue
        o_left, o_right = levels[k][i], levels[k][i + 1]
        parallel = o_left == o_right
        if kind == "pos":
            signs.append(1 if parallel else -1)
        else:
            signs.append(-1 if parallel else 1)
    return signs


def count_components(T: TangleDiagram) -> int:
    """Number of connected components (arcs and circles) of the diagram."""
    sk = build_skeleton(T)
    uf = UnionFind(sk.n_nodes)
    for u, v in sk.wires:
        uf.union(u, v)
    for g in sk.gadgets:
        uf.union(g.bl, g.tr)
        uf.union(g.br, g.tl)
    return len({uf.find(x) for x in range(sk.n_nodes)})


def braid_closure(n_strands: int, word: Sequence[int]) -> TangleDiagram:
    """Closure of a braid on ``n_strands`` strands as a slice word.

    ``word`` lists generators ``+i`` / ``-i`` (1-based); ``+i`` is the
    crossing ``pos`` between strands ``i`` and ``i+1``.  Braid strands run
    upward on the left, return strands downward on the right.
    """
    slices: List[Tuple[str, int]] = [("cup", k) for k in range(n_strands)]
    for g in word:
        if g == 0 or abs(g) >= n_strands:
            raise ValueError(f"invalid braid generator {g}")
        slices.append(("pos" if g > 0 else "neg", abs(g) - 1))
    slices += [("cap", k) for k in reversed(range(n_strands))]
    return TangleDiagram(0, tuple(slices))


def permute_skeleton(sk: Skeleton, order: Sequence[int]) -> Skeleton:
    """Re-enumerate crossings: new crossing ``m`` is old crossing ``order[m]``."""
    if sorted(order) != list(range(len(sk.gadgets))):
        raise ValueError("order must be a permutation of the crossings")
    return Skeleton(sk.n_in, sk.n_out, sk.n_nodes, list(sk.wires),
                    [sk.gadgets[i] for i in order], [sk.kinds[i] for i in order],
                    list(sk.bottom), list(sk.top))


# ---------------------------------------------------------------------------
# Planar diagram codes
# ---------------------------------------------------------------------------


class ParseError(ValueError):
    """Malformed tangle input; the message names the offending location."""


def _pd_directions(crossings: Sequence[Tuple[int, int, int, int]]) -> List[List[bool]]:
    """``incoming[c][s]``: whether the edge in slot ``s`` of crossing ``c`` enters it.

    Under-strands run from slot 0 to slot 2.  Over-strand directions are
    propagated along edges (an edge leaves one slot and enters the other);
    a component without under-passes falls back to label succession.
    """
    slots: Dict[int, List[Tuple[int, int]]] = {}
    for c, X in enumerate(crossings):
        for s, e in enumerate(X):
            slots.setdefault(e, []).append((c, s))
    for e, occ in slots.items():
        if len(occ) != 2:
            raise ParseError(f"edge label {e} occurs {len(occ)} times (expected 2)")
    inc: List[List[Optional[bool]]] = [[True, None, False, None] for _ in crossings]

    def other(c: int, s: int) -> Tuple[int, int]:
        a, b = slots[crossings[c][s]]
        return b if a == (c, s) else a

    def settle(c: int, s: int, val: bool, queue: List[Tuple[int, int]]) -> None:
        cur = inc[c][s]
        if cur is None:
            inc[c][s] = val
            queue.append((c, s))
        elif cur != val:
            raise ParseError(f"inconsistent strand directions at crossing {c}")

    queue = [(c, s) for c in range(len(crossings)) for s in (0, 2)]
    labels = sorted(slots)
    while True:
        while queue:
            c, s = queue.pop()
            d, t = other(c, s)
            settle(d, t, not inc[c][s], queue)
            if t in (1, 3):
                settle(d, (t + 2) % 4, inc[c][s], queue)
        pending = [(c, s) for c in range(len(crossings)) for s in (1, 3) if inc[c][s] is None]
        if not pending:
            break
        c, s = pending[0]
        j, l = crossings[c][1], crossings[c][3]
        nxt = labels[(labels.index(j) + 1) % len(labels)]
        settle(c, 1, l == nxt, queue)
        settle(c, 3, l != nxt, queue)
    return [[bool(v) for v in row] for row in inc]


class _Sweep:
    """Slice-word builder with a labelled top boundary."""

    def __init__(self):
        self.bd: List[object] = []
        self.slices: List[Tuple[str, int]] = []
        self.orient: List[int] = []

    def cup(self, pos: int, label, left_up: bool) -> None:
        self.slices.append(("cup", pos))
        self.bd[pos:pos] = [label, label]
        self.orient.append(1 if left_up else -1)

    def cap(self, pos: int) -> None:
        self.slices.append(("cap", pos))
        del self.bd[pos:pos + 2]

    def cross(self, pos: int, kind: str, tl, tr) -> None:
        self.slices.append((kind, pos))
        self.bd[pos:pos + 2] = [tl, tr]

    def wrap(self) -> None:
        """Carry the leftmost strand over all others to the right end."""
        for i in range(len(self.bd) - 1):
            self.cross(i, "pos", self.bd[i + 1], self.bd[i])

    def autocap(self) -> None:
        changed = True
        while changed:
            changed = False
            for i in range(len(self.bd) - 1):
                if self.bd[i] == self.bd[i + 1]:
                    self.cap(i)
                    changed = True
                    break


def _runs(X, bd) -> List[Tuple[int, int, int, int]]:
    """Candidate attachments ``(k, shared, s0, q)`` for crossing ``X``.

    ``k`` consecutive slots ``s0, s0+1, ...`` (counter-clockwise) carry
    labels sitting at consecutive positions ``q, q+1, ...`` of the cyclic
    boundary; ``shared`` counts all slots whose labels are on the boundary.
    """
    pos = {lab: i for i, lab in enumerate(bd)}
    w = len(bd)
    shared = sum(1 for e in X if e in pos)
    out = []
    for s0 in range(4):
        if X[s0] not in pos:
            continue
        q = pos[X[s0]]
        k = 1
        while k < 4 and X[(s0 + k) % 4] in pos and pos[X[(s0 + k) % 4]] == (q + k) % w:
            k += 1
        out.append((k, shared, s0, q))
    return out


def pd_to_diagram(crossings: Sequence[Sequence[int]]) -> TangleDiagram:
    """Convert a PD code into an oriented slice word.

    Each ``[i, j, k, l]`` lists the edges at a crossing counter-clockwise,
    starting from the incoming under-strand.  Crossings are attached one at
    a time on top of the diagram built so far, always choosing the crossing
    whose already-placed edges form the longest consecutive run on the
    boundary (ties: runs that need no wrapping, then lowest index in the
    input, then lowest slot).  When the
    run wraps around the ends of the boundary, the leftmost strand is
    carried over all others to the right end, an isotopy through the point
    at infinity.  An empty code is the unknot.
    """
    X = [tuple(int(e) for e in c) for c in crossings]
    for n, c in enumerate(X):
        if len(c) != 4:
            raise ParseError(f"crossing {n} must have 4 edge labels")
    if not X:
        return TangleDiagram(0, (("cup", 0), ("cap", 0)), (1,))
    inc = _pd_directions(X)
    sw = _Sweep()
    todo = list(range(len(X)))
    while todo:
        best = None
        for c in todo:
            for k, shared, s0, q in _runs(X[c], sw.bd):
                key = (-(k == shared), -k, q + k > len(sw.bd), c, s0)
                if best is None or key < best[0]:
                    best = (key, c, s0, q, k)
        if best is None:
            c, s0, k = todo[0], 0, 0
            q = len(sw.bd)
        else:
            _, c, s0, q, k = best
        todo.remove(c)
        C = X[c]
        slot = [(s0 + m) % 4 for m in range(4)]  # BL, BR, TR, TL
        if k and q + k > len(sw.bd):
            for _ in range((q + k) - len(sw.bd)):
                sw.wrap()
            q = len(sw.bd) - k
        if k == 0:
            p = len(sw.bd)
            if C[slot[0]] == C[slot[1]]:
                sw.cup(p, C[slot[0]], inc[c][slot[0]])
            else:
                sw.cup(p, C[slot[0]], not inc[c][slot[0]])
                sw.cup(p + 2, C[slot[1]], inc[c][slot[1]])
                p += 1
        else:
            p = q
            if k == 1:
                sw.cup(p + 1, C[slot[1]], inc[c][slot[1]])
        kind = "neg" if slot[0] % 2 == 0 else "pos"
        sw.cross(p, kind, C[slot[3]], C[slot[2]])
        sw.autocap()
    stalls = 0
    while sw.bd:
        w = len(sw.bd)
        sw.wrap()
        sw.autocap()
        stalls = stalls + 1 if len(sw.bd) == w else 0
        if stalls > w:
            raise ParseError("PD code is not planar: boundary cannot be closed")
    return TangleDiagram(0, tuple(sw.slices), tuple(sw.orient))


def pd_signs(crossings: Sequence[Sequence[int]]) -> List[int]:
    """Crossing signs read off a PD code (input order)."""
    X = [tuple(c) for c in crossings]
    inc = _pd_directions(X)
    # positive iff the over-strand enters at slot 3 (goes right to left
    # when the under-strand points up)
    return [1 if inc[c][3] else -1 for c in range(len(X))]


# ---------------------------------------------------------------------------
# JSON input
# ---------------------------------------------------------------------------


def diagram_from_json(obj) -> TangleDiagram:
    """Build a diagram from ``{"type": "pd" | "word" | "braid", ...}``."""
    if not isinstance(obj, dict) or "type" not in obj:
        raise ParseError("expected an object with a 'type' field")
    kind = obj["type"]
    if kind == "pd":
        cr = obj.get("crossings")
        if not isinstance(cr, list):
            raise ParseError("'crossings' must be a list")
        for n, c in enumerate(cr):
            if not (isinstance(c, list) and len(c) == 4 and all(isinstance(e, int) for e in c)):
                raise ParseError(f"crossings[{n}]: expected four integer edge labels")
        return pd_to_diagram(cr)
    if kind == "word":
        n_in = obj.get("n_in", 0)
        if not isinstance(n_in, int) or n_in < 0:
            raise ParseError("'n_in' must be a nonnegative integer")
        slices = []
        for n, s in enumerate(obj.get("slices", [])):
            if not (isinstance(s, dict) and len(s) == 1):
                raise ParseError(f"slices[{n}]: expected a single-key object")
            (k, i), = s.items()
            if k not in SLICE_KINDS or not isinstance(i, int):
                raise ParseError(f"slices[{n}]: unknown slice {s!r}")
            slices.append((k, i))
        orient = obj.get("orientation")
        try:
            T = TangleDiagram(n_in, tuple(slices), tuple(orient) if orient is not None else None)
            strand_orientations(T)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
        return T
    if kind == "braid":
        try:
            return braid_closure(int(obj["strands"]), [int(g) for g in obj["word"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"braid: {exc}") from exc
    raise ParseError(f"unknown input type {kind!r}")


def parse_diagram(text: str) -> TangleDiagram:
    """Parse JSON text; syntax errors report line and column."""
    import json

    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return diagram_from_json(obj)


# ---------------------------------------------------------------------------
# Reidemeister moves on slice words
# ---------------------------------------------------------------------------


def _insert(T: TangleDiagram, level: int, new: Sequence[Tuple[str, int]], cup_orients: Sequence[int]) -> TangleDiagram:
    full = explicit_orientation(T)
    n_bottom = 2 * T.n_in
    cups_before = sum(1 for k, _ in T.slices[:level] if k == "cup")
    orient = full[:n_bottom + cups_before] + tuple(cup_orients) + full[n_bottom + cups_before:]
    return TangleDiagram(T.n_in, T.slices[:level] + tuple(new) + T.slices[level:], orient)


def add_kink(T: TangleDiagram, level: int, pos: int, kind: str = "pos") -> TangleDiagram:
    """Reidemeister I: a curl on the strand at ``pos`` just above ``level`` slices."""
    o = strand_orientations(T)[level][pos]
    return _insert(T, level, [("cup", pos + 1), (kind, pos), ("cap", pos + 1)], [o])


def add_bigon(T: TangleDiagram, level: int, pos: int, first: str = "pos") -> TangleDiagram:
    """Reidemeister II: strands ``pos, pos+1`` cross twice, one passing over."""
    second = "neg" if first == "pos" else "pos"
    return _insert(T, level, [(first, pos), (second, pos)], [])


def insert_crossings(T: TangleDiagram, level: int, word: Sequence[Tuple[str, int]]) -> TangleDiagram:
    """Insert crossing slices ``(kind, pos)`` just above ``level`` slices."""
    if any(kind not in ("pos", "neg") for kind, _ in word):
        raise ValueError("only crossings can be inserted")
    return _insert(T, level, list(word), [])


def r3_pair(T: TangleDiagram, level: int, pos: int, kinds: Tuple[str, str, str] = ("pos", "pos", "pos")
            ) -> Tuple[TangleDiagram, TangleDiagram]:
    """Two diagrams differing by Reidemeister III on strands ``pos..pos+2``.

    The first inserts crossings at ``pos, pos+1, pos`` and the second at
    ``pos+1, pos, pos+1`` with the kinds permuted so the strand heights
    agree (``kinds`` is given for the first word).
    """
    k1, k2, k3 = kinds
    if k1 == k3 != k2:
        raise ValueError("kinds (a, b, a) with a != b do not form a Reidemeister III pair")
    a = _insert(T, level, [(k1, pos), (k2, pos + 1), (k3, pos)], [])
    b = _insert(T, level, [(k3, pos + 1), (k2, pos), (k1, pos + 1)], [])
    return a, b
