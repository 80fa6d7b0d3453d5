"""Degree shifts by cobordisms and their compatibility scalars.

A :class:`Shift` ``W^v`` pairs a chronological cobordism with corners
``W : t -> t'`` with a bidegree ``v``.  It acts on grading morphisms by

    Phi_{W^v}(t, p) = (t', p + v + deg(1_b-bar W 1_a)),

with ``v`` thought of as sitting at the top of the cobordism.  The
scalars relating composites of such shifts are

* ``beta``: horizontal composition against the surgery of the grading
  category,
* ``gamma``: vertical composition,
* ``xi``: interchange of horizontal and vertical composition,
* ``tau_commut``: commutativity of squares of homogeneous maps.

Each scalar is a product of an exchange scalar ``iota`` of an explicit
change of chronology, available through the ``*_movies`` helpers for
comparison with the TQFT oracle, and of ``lambda_R`` twists.

Cobordisms are realised on a :class:`~covkh.tangles.Skeleton`: a wiring
diagram with gadgets whose states toggle under saddles.  Births and
positive deaths are only ever glued on free loops (see
:func:`remove_loop_shift`) and are tracked by count.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Sequence, Tuple

from .arc_algebra import GDegree, SkeletonPiece, Stack, build_stack, surgery_shift
from .cobordism import ARROWS_HV, Movie, Saddle, iota
from .ring import Bidegree, Monomial, ONE, add_deg, lambda_R
from .tangles import (
    FlatTangle,
    Skeleton,
    TangleDiagram,
    UnionFind,
    build_skeleton,
    flat_skeleton,
    reduce,
    skeleton_flat,
    stack_skeletons,
)

BIRTH_DEGREE: Bidegree = (1, 0)
DEATH_DEGREE: Bidegree = (0, 1)


class NotComposable(ValueError):
    """Raised when shifts or grading morphisms cannot be composed as requested."""


def _toggle(state: str) -> str:
    return "V" if state == "H" else "H"


@dataclass(frozen=True, eq=False)
class Shift:
    """A cobordism with corners ``W`` together with a bidegree shift ``v``.

    Parameters
    ----------
    sk:
        Wiring skeleton of the underlying tangle.
    start:
        Gadget states (``"H"``/``"V"``) of the source tangle.
    events:
        Saddles, bottom to top; ``Saddle.gadget`` indexes ``sk.gadgets``.
    v:
        The bidegree shift.
    births, deaths:
        Number of free loops of the source capped by births, and of the
        target capped by positive deaths.
    """

    sk: Skeleton
    start: Tuple[str, ...]
    events: Tuple[Saddle, ...] = ()
    v: Bidegree = (0, 0)
    births: int = 0
    deaths: int = 0
    _levels: List[Tuple[str, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.start) != len(self.sk.gadgets):
            raise ValueError("one start state per gadget is required")
        levels = [tuple(self.start)]
        for s in self.events:
            cur = list(levels[-1])
            need = "H" if s.arrow in ARROWS_HV else "V"
            if cur[s.gadget] != need:
                raise ValueError(f"saddle {s} does not apply to state {cur[s.gadget]}")
            cur[s.gadget] = _toggle(need)
            levels.append(tuple(cur))
        object.__setattr__(self, "_levels", levels)

    # -- construction -----------------------------------------------------

    @classmethod
    def identity(cls, t: FlatTangle, v: Bidegree = (0, 0)) -> "Shift":
        """The identity cobordism ``t x I`` shifted by ``v``."""
        return cls(flat_skeleton(t), (), (), v)

    @classmethod
    def cube(cls, T: TangleDiagram, start: Sequence[int], flips: Sequence[int] = (),
             v: Bidegree = (0, 0), sk: Optional[Skeleton] = None) -> "Shift":
        """Saddles of a cube of resolutions.

        Starting at the resolution ``start`` (one bit per crossing), flip
        the crossings in ``flips`` in order.  A ``0 -> 1`` flip is the
        cube edge saddle.  A ``1 -> 0`` flip is the reverse saddle, which
        carries the edge arrow of the other crossing type (``up`` for
        ``H -> V``, ``left`` for ``V -> H``).
        """
        sk = sk if sk is not None else build_skeleton(T)
        bits = list(start)
        events = []
        for j in flips:
            if bits[j] == 0:
                events.append(Saddle(j, sk.arrow(j)))
            else:
                events.append(Saddle(j, "up" if sk.arrow(j) == "left" else "left"))
            bits[j] ^= 1
        return cls(sk, tuple(sk.state(i, b) for i, b in enumerate(start)), tuple(events), v)

    def with_v(self, v: Bidegree) -> "Shift":
        return replace(self, v=v)

    # -- data ------------------------------------------------------------

    @property
    def n_in(self) -> int:
        return self.sk.n_in

    @property
    def n_out(self) -> int:
        return self.sk.n_out

    @property
    def end(self) -> Tuple[str, ...]:
        return self._levels[-1]

    @property
    def source(self) -> FlatTangle:
        return skeleton_flat(self.sk, self.start)

    @property
    def target(self) -> FlatTangle:
        return skeleton_flat(self.sk, self.end)

    def is_neutral(self) -> bool:
        return not self.events and not self.births and not self.deaths and self.v == (0, 0)

    def piece(self, states: Optional[Sequence[str]] = None) -> SkeletonPiece:
        return SkeletonPiece(self.sk, tuple(self.start if states is None else states))

    def placed_events(self, gadgets: Sequence[int]) -> List[Saddle]:
        """The saddles renumbered to the gadgets of a placed piece."""
        return [Saddle(gadgets[s.gadget], s.arrow) for s in self.events]

    def closed_movie(self, a: FlatTangle, b: FlatTangle) -> Movie:
        """``1_b-bar W 1_a`` (births and deaths omitted)."""
        st = build_stack([self.piece()], [], a, b)
        return Movie(st.diagram, tuple(self.placed_events(st.gadgets[0])))

    def degree(self, a: FlatTangle, b: FlatTangle) -> Bidegree:
        """``deg(1_b-bar W 1_a)``."""
        d = self.closed_movie(a, b).degree()
        return add_deg(d, (self.births * BIRTH_DEGREE[0], self.births * BIRTH_DEGREE[1]),
                       (self.deaths * DEATH_DEGREE[0], self.deaths * DEATH_DEGREE[1]))

    def applies_to(self, g: GDegree) -> bool:
        return (g.source.n_in == self.n_in and g.target.n_in == self.n_out
                and reduce(self.source)[0] == g.tangle)

    def apply(self, g: GDegree) -> GDegree:
        """``Phi_{W^v}(g)``."""
        _require_applies(self, g)
        p = add_deg(g.p, self.v, self.degree(g.source, g.target))
        return GDegree(reduce(self.target)[0], p, g.source, g.target)


def _require_applies(s: Shift, g: GDegree) -> None:
    if not s.applies_to(g):
        raise NotComposable(f"shift with source {s.source} does not apply to {g}")


def hcompose(s2: Shift, s1: Shift) -> Shift:
    """``W2^{v2} . W1^{v1} = (W2 . W1)^{v2 + v1}``; the saddles of ``W1`` come first."""
    if s1.n_out != s2.n_in:
        raise NotComposable("side boundaries do not match")
    sk = stack_skeletons(s1.sk, s2.sk)
    off = len(s1.sk.gadgets)
    events = s1.events + tuple(Saddle(s.gadget + off, s.arrow) for s in s2.events)
    return Shift(sk, s1.start + s2.start, events, add_deg(s2.v, s1.v),
                 s1.births + s2.births, s1.deaths + s2.deaths)


def vcompose(s2: Shift, s1: Shift) -> Shift:
    """``W2^{v2} o W1^{v1} = (W2 o W1)^{v2 + v1}``: ``W1`` below ``W2``."""
    if s2.sk != s1.sk or s1.end != s2.start:
        raise NotComposable("target of the lower shift is not the source of the upper one")
    if s1.deaths or s2.births:
        raise NotComposable("births and deaths only sit at the outer ends")
    return Shift(s1.sk, s1.start, s1.events + s2.events, add_deg(s2.v, s1.v),
                 s1.births, s2.deaths)


# ---------------------------------------------------------------------------
# Horizontal composition: beta
# ---------------------------------------------------------------------------


def _pair_stack(s2: Shift, s1: Shift, g2: GDegree, g1: GDegree) -> Stack:
    if g1.target != g2.source:
        raise NotComposable("grading morphisms are not composable")
    _require_applies(s1, g1)
    _require_applies(s2, g2)
    return build_stack([s1.piece(), s2.piece()], [g1.target], g1.source, g2.target)


def beta_movies(s2: Shift, s1: Shift, g2: GDegree, g1: GDegree) -> Tuple[Movie, List[int]]:
    """Movie ``[surgery, W1, W2]`` and the order giving ``[W1, W2, surgery]``."""
    st = _pair_stack(s2, s1, g2, g1)
    surgery = [Saddle(g, "up") for g in st.junctions[0]]
    w1 = s1.placed_events(st.gadgets[0])
    w2 = s2.placed_events(st.gadgets[1])
    ns, nw = len(surgery), len(w1) + len(w2)
    order = list(range(ns, ns + nw)) + list(range(ns))
    return Movie(st.diagram, tuple(surgery + w1 + w2)), order


def beta_one(s2: Shift, s1: Shift, g2: GDegree, g1: GDegree) -> Monomial:
    movie, order = beta_movies(s2, s1, g2, g1)
    return iota(movie, order)


def beta(s2: Shift, s1: Shift, g2: GDegree, g1: GDegree) -> Monomial:
    """``beta = beta_1 beta_2 beta_2' beta_2''`` for ``Phi_{s2}(g2) Phi_{s1}(g1)``.

    * ``beta_1``: moving the surgery of ``(g2, g1)`` above ``W2 . W1``;
    * ``beta_2 = lambda(s_cba(t2', t1'), v2 + v1)``;
    * ``beta_2' = lambda(deg(1_c-bar W2 1_b), v1)``;
    * ``beta_2'' = lambda(p2, deg(1_b-bar W1 1_a) + v1)``.
    """
    a, b, c = g1.source, g1.target, g2.target
    b1 = beta_one(s2, s1, g2, g1)
    t1p, t2p = reduce(s1.target)[0], reduce(s2.target)[0]
    b2 = lambda_R(surgery_shift(t2p, t1p, c, b, a), add_deg(s2.v, s1.v))
    b2p = lambda_R(s2.degree(b, c), s1.v)
    b2pp = lambda_R(g2.p, add_deg(s1.degree(a, b), s1.v))
    return b1 * b2 * b2p * b2pp


# ---------------------------------------------------------------------------
# Vertical composition and interchange: gamma, xi
# ---------------------------------------------------------------------------


def gamma(s2: Shift, s1: Shift, g: GDegree) -> Monomial:
    """``gamma_{W2, W1}(g) = lambda(deg(1_b-bar W2 1_a), v1)``."""
    if s2.sk != s1.sk or s1.end != s2.start:
        raise NotComposable("shifts are not vertically composable")
    _require_applies(s1, g)
    return lambda_R(s2.degree(g.source, g.target), s1.v)


def _check_square(s2p: Shift, s2: Shift, s1p: Shift, s1: Shift) -> None:
    for up, low in ((s2p, s2), (s1p, s1)):
        if up.sk != low.sk or low.end != up.start:
            raise NotComposable("interchange square is not vertically composable")
    if s1.n_out != s2.n_in:
        raise NotComposable("interchange square is not horizontally composable")


def xi_movies(s2p: Shift, s2: Shift, s1p: Shift, s1: Shift, g: GDegree) -> Tuple[Movie, List[int]]:
    """Movie of ``(W2' o W2) . (W1' o W1)`` and the order of ``(W2' . W1') o (W2 . W1)``."""
    _check_square(s2p, s2, s1p, s1)
    sk = stack_skeletons(s1.sk, s2.sk)
    whole = Shift(sk, s1.start + s2.start)
    _require_applies(whole, g)
    st = build_stack([whole.piece()], [], g.source, g.target)
    gads = st.gadgets[0]
    off = len(s1.sk.gadgets)
    w1 = s1.placed_events(gads)
    w1p = s1p.placed_events(gads)
    w2 = s2.placed_events(gads[off:])
    w2p = s2p.placed_events(gads[off:])
    k1, k1p, k2 = len(w1), len(w1p), len(w2)
    idx = list(range(k1 + k1p + k2 + len(w2p)))
    i_w1 = idx[:k1]
    i_w1p = idx[k1:k1 + k1p]
    i_w2 = idx[k1 + k1p:k1 + k1p + k2]
    i_w2p = idx[k1 + k1p + k2:]
    order = i_w1 + i_w2 + i_w1p + i_w2p
    return Movie(st.diagram, tuple(w1 + w1p + w2 + w2p)), order


def xi(s2p: Shift, s2: Shift, s1p: Shift, s1: Shift, g: GDegree) -> Monomial:
    """Interchange scalar ``Xi = iota(H) lambda(v2, v1')`` of a square.

    ``H`` relates ``(W2' o W2) . (W1' o W1)`` and ``(W2' . W1') o (W2 . W1)``
    on the closure of ``g``, whose tangle is the composite of the sources
    of ``W2`` and ``W1``.  The exchange scalar is taken from the second
    movie to the first one, i.e. ``F(first) = iota * F(second)``; the
    opposite direction breaks the vertical compatibility with ``beta``.
    """
    movie, order = xi_movies(s2p, s2, s1p, s1, g)
    return iota(movie, order).inverse() * lambda_R(s2.v, s1p.v)


# ---------------------------------------------------------------------------
# Commutativity
# ---------------------------------------------------------------------------


class NotInSystem(ValueError):
    """The pair of composites is not related by the commutativity system."""


def tau_movies(s2p: Shift, s1p: Shift, s2: Shift, s1: Shift, g: GDegree) -> Tuple[Movie, List[int]]:
    """Movie of ``W2' o W1'`` and the order that produces ``W2 o W1``."""
    sk = s1p.sk
    if not (s2p.sk == sk and s2.sk == sk and s1.sk == sk):
        raise NotInSystem("all four shifts must live on one tangle")
    if s1p.end != s2p.start or s1.end != s2.start or s1p.start != s1.start or s2p.end != s2.end:
        raise NotInSystem("the composites do not have common ends")
    lhs = list(s1p.events + s2p.events)
    rhs = list(s1.events + s2.events)
    used = [False] * len(lhs)
    order = []
    for ev in rhs:
        for i, e in enumerate(lhs):
            if not used[i] and e == ev:
                used[i] = True
                order.append(i)
                break
        else:
            raise NotInSystem("the composites do not have the same saddles")
    if len(order) != len(lhs):
        raise NotInSystem("the composites do not have the same saddles")
    _require_applies(s1, g)
    st = build_stack([s1.piece()], [], g.source, g.target)
    gads = st.gadgets[0]
    return Movie(st.diagram, tuple(Saddle(gads[e.gadget], e.arrow) for e in lhs)), order


def tau_commut(s2p: Shift, s1p: Shift, s2: Shift, s1: Shift, g: GDegree) -> Monomial:
    """``tau = iota(H)^{-1} lambda(v1, v2)`` for ``H : W2' o W1' => W2 o W1``.

    Requires ``v2' = v1`` and ``v1' = v2``.
    """
    if s2p.v != s1.v or s1p.v != s2.v:
        raise NotInSystem("shift bidegrees are not swapped")
    movie, order = tau_movies(s2p, s1p, s2, s1, g)
    return iota(movie, order).inverse() * lambda_R(s1.v, s2.v)


# ---------------------------------------------------------------------------
# Normalisations
# ---------------------------------------------------------------------------


def euler_characteristic(W: Shift) -> int:
    """``chi(W)``: strips over arcs count 1, annuli over loops 0, saddles -1."""
    arcs = W.n_in + W.n_out
    return arcs + W.births + W.deaths - len(W.events)


def boundary_circles(W: Shift) -> int:
    """Number of circles in the boundary of ``W`` (corners smoothed)."""
    t, tp = W.source, W.target
    n = 2 * (t.n_in + t.n_out)
    uf = UnionFind(n)
    for p, q in t.arcs():
        uf.union(p, q)
    for p, q in tp.arcs():
        uf.union(p, q)
    sides = len({uf.find(x) for x in range(n)})
    return sides + t.loops - W.births + tp.loops - W.deaths


def chi_defect(W: Shift) -> Bidegree:
    """``((chi(W_hat) - chi(W)) / 2, same)`` with ``W_hat`` a minimal cobordism.

    A minimal cobordism caps each boundary circle of ``W`` with its own
    disc, so ``chi(W_hat)`` is the number of boundary circles.
    """
    diff = boundary_circles(W) - euler_characteristic(W)
    if diff % 2 or diff < 0:
        raise ArithmeticError("inconsistent Euler characteristic")
    return (diff // 2, diff // 2)


def minimal_shift_v(W: Shift) -> Bidegree:
    """Bidegree ``u`` with ``Phi_{W^v} = Phi_{W_hat^u}`` on degrees.

    Every handle lowers ``deg W`` by ``(1, 1)``, so the shift of the
    minimal cobordism is ``v - chi_defect(W)``.
    """
    d = chi_defect(W)
    return (W.v[0] - d[0], W.v[1] - d[1])


def remove_loop_shift(s: Shift, at: str = "source") -> Tuple[Shift, Callable[[GDegree], Monomial]]:
    """Absorb a free loop of the source (birth) or the target (positive death).

    Returns the new shift and the scalar ``m -> c(|m|) m`` of the natural
    isomorphism.  For a birth the bidegree drops by ``(1, 0)`` and
    ``c(g) = lambda((1, 0), deg(1_b-bar W 1_a))``; for a death it drops by
    ``(0, 1)`` and ``c = 1``.
    """
    if at == "source":
        if s.source.loops - s.births < 1:
            raise ValueError("the source has no free loop")
        new = replace(s, v=(s.v[0] - BIRTH_DEGREE[0], s.v[1] - BIRTH_DEGREE[1]), births=s.births + 1)

        def correction(g: GDegree) -> Monomial:
            return lambda_R(BIRTH_DEGREE, s.degree(g.source, g.target))

        return new, correction
    if at == "target":
        if s.target.loops - s.deaths < 1:
            raise ValueError("the target has no free loop")
        new = replace(s, v=(s.v[0] - DEATH_DEGREE[0], s.v[1] - DEATH_DEGREE[1]), deaths=s.deaths + 1)
        return new, lambda g: ONE
    raise ValueError("at must be 'source' or 'target'")
