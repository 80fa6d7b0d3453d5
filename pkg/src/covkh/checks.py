"""Finite structural checks shared by the command line and the test suite.

Every check returns a :class:`CheckResult`.  Randomised checks draw from
a :class:`random.Random` seeded by the caller, so a failing sample can be
replayed exactly.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Sequence, Tuple

from . import arc_algebra as arc
from .cobordism import (
    Movie,
    NonExchangeable,
    apply_movie,
    iota,
    matrix_ratio,
    transpose_scalar,
)
from .complex import Cube, Spec, closure_pairs, kh_complex, tensor_kh, vertices
from .grading import (
    Shift,
    beta,
    beta_movies,
    beta_one,
    gamma,
    hcompose,
    tau_commut,
    tau_movies,
    vcompose,
    xi,
    xi_movies,
)
from .homology import homology
from .ring import ONE, Bidegree, Monomial, RingElem, lambda_R
from .tangles import (
    FlatTangle,
    TangleDiagram,
    build_skeleton,
    enumerate_matchings,
    reduce,
)
from .tqft import AbstractEvent, RMatrix, StateSpace, apply_events


@dataclass
class CheckResult:
    """Outcome of one structural check."""

    name: str
    checked: int = 0
    failures: List[str] = field(default_factory=list)
    seconds: float = 0.0
    details: Dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, message: str) -> None:
        self.failures.append(message)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "failures": len(self.failures),
            "examples": self.failures[:5],
            "details": dict(sorted(self.details.items())),
        }


def _timed(fn: Callable[..., CheckResult]) -> Callable[..., CheckResult]:
    def wrapper(*args, **kwargs) -> CheckResult:
        start = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - start
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# ---------------------------------------------------------------------------
# Grading category and arc algebras
# ---------------------------------------------------------------------------


@_timed
def check_cocycle(max_n: int = 2) -> CheckResult:
    """``d alpha = 1`` on every composable quadruple over ``B^0 .. B^max_n``."""
    rep = arc.cocycle_check(max_n)
    res = CheckResult("cocycle", checked=rep.quadruples, details={"classes": rep.classes})
    for f in rep.failures[:20]:
        res.fail(f"d alpha = {f[-1]} at p = {f[-2]}")
    return res


@_timed
def check_arc_algebras(max_n: int = 2) -> CheckResult:
    """Unitality and quasi-associativity of ``H^1 .. H^max_n`` on all basis triples."""
    res = CheckResult("arc-algebra")
    one = RingElem.promote(1)
    for n in range(1, max_n + 1):
        H = arc.build_arc_algebra(n)
        basis = H.basis()
        for x in basis:
            g = H.gdegree(x)
            res.checked += 2
            if H.multiply(H.unit(x[1]), {x: one}) != {x: RingElem({arc.unit_scalar_left(g): 1})}:
                res.fail(f"left unit fails on H^{n} element {x}")
            if H.multiply({x: one}, H.unit(x[0])) != {x: RingElem({arc.unit_scalar_right(g): 1})}:
                res.fail(f"right unit fails on H^{n} element {x}")
        for z in basis:
            for y in basis:
                if y[1] != z[0]:
                    continue
                for x in basis:
                    if x[1] != y[0]:
                        continue
                    res.checked += 1
                    lhs = H.multiply(H.multiply({z: one}, {y: one}), {x: one})
                    rhs = H.multiply({z: one}, H.multiply({y: one}, {x: one}))
                    a = RingElem({arc.alpha(H.gdegree(z), H.gdegree(y), H.gdegree(x)): 1})
                    if lhs != {k: v * a for k, v in rhs.items()}:
                        res.fail(f"(zy)x != alpha z(yx) in H^{n}")
    return res


# ---------------------------------------------------------------------------
# TQFT relations
# ---------------------------------------------------------------------------


def _events(circles: Sequence[int], fresh: Sequence[int]) -> Iterator[AbstractEvent]:
    for h, t in itertools.permutations(circles, 2):
        for o in fresh:
            yield AbstractEvent("merge", (h, t), (o,))
    for c in circles:
        for p, q in itertools.permutations(fresh, 2):
            yield AbstractEvent("split", (c,), (p, q))
        yield AbstractEvent("death+", (c,), ())
    for o in fresh:
        yield AbstractEvent("birth", (), (o,))


def _after(circles: Sequence[int], ev: AbstractEvent) -> Tuple[int, ...]:
    return tuple(sorted((set(circles) - set(ev.inputs)) | set(ev.outputs)))


def _movie(start: Sequence[int], events: Sequence[AbstractEvent]) -> RMatrix:
    states = [tuple(sorted(start))]
    for ev in events:
        states.append(_after(states[-1], ev))
    return apply_events([StateSpace(s) for s in states], events)


def _shifted(ev: AbstractEvent, by: int) -> AbstractEvent:
    return AbstractEvent(ev.kind, tuple(c + by for c in ev.inputs), tuple(c + by for c in ev.outputs))


def braiding(left: Sequence[int], right: Sequence[int], by: int) -> RMatrix:
    """Symmetric braiding moving the circles ``left`` past ``right``.

    The source has the circles ``left + right``; in the target the
    ``left`` circles are relabelled ``c + by`` so that they come last.
    A labeling ``x (x) y`` goes to ``lambda_R(|x|, |y|) y (x) x``.
    """
    src = StateSpace(tuple(left) + tuple(right))
    dst = StateSpace(tuple(right) + tuple(c + by for c in left))
    cols = []
    for basis in range(src.rank):
        lx = [src.label(basis, c) for c in left]
        ly = [src.label(basis, c) for c in right]
        dx = (lx.count(0), -lx.count(1))
        dy = (ly.count(0), -ly.count(1))
        out = 0
        for c, bit in zip(left, lx):
            out |= bit << dst.index[c + by]
        for c, bit in zip(right, ly):
            out |= bit << dst.index[c]
        cols.append({out: RingElem({lambda_R(dx, dy): 1})})
    return RMatrix(dst.rank, src.rank, cols)


@_timed
def check_tqft_relations(max_circles: int = 4) -> CheckResult:
    """Local relations of the chronological TQFT as matrix identities.

    * reversing a merge frame multiplies by ``X``, a split frame by ``Y``,
      and ``death- = Y death+``;
    * a birth merged in as the head is the identity, and so is a split
      whose first output dies positively (the other frames cost ``X`` and
      ``Y``);
    * disjoint events commute up to ``lambda_R`` of their degrees;
    * planar exchange: the braiding intertwines ``W`` then ``W'`` with the
      relabelled ``W'`` then ``W`` up to ``lambda_R(|W'|, |W|)``.

    States have at most ``max_circles`` circles.
    """
    from .ring import X, Y

    res = CheckResult("tqft-relations")
    counts: Dict[str, int] = {}

    def record(kind: str, ok: bool, msg: str) -> None:
        res.checked += 1
        counts[kind] = counts.get(kind, 0) + 1
        if not ok:
            res.fail(f"{kind}: {msg}")

    for k in range(1, max_circles + 1):
        base = tuple(range(0, 2 * k, 2))
        for ev in _events(base, (1, 3)):
            start_m = _movie(base, [ev])
            if ev.kind == "merge":
                rev = AbstractEvent("merge", ev.inputs[::-1], ev.outputs)
                record("reverse-merge", _movie(base, [rev]) == start_m.scale(X), str(ev))
            elif ev.kind == "split":
                rev = AbstractEvent("split", ev.inputs, ev.outputs[::-1])
                record("reverse-split", _movie(base, [rev]) == start_m.scale(Y), str(ev))
            elif ev.kind == "death+":
                neg = AbstractEvent("death-", ev.inputs, ev.outputs)
                record("reverse-death", _movie(base, [neg]) == start_m.scale(Y), str(ev))
        if k < max_circles:
            ident = RMatrix.identity(1 << k)
            for c in base:
                for new in (c - 1, c + 1):
                    for out in (c - 1, c + 1):
                        if out == new:
                            continue
                        birth = AbstractEvent("birth", (), (new,))
                        for head_first, scalar in ((True, ONE), (False, X)):
                            ins = (new, c) if head_first else (c, new)
                            m = _movie(base, [birth, AbstractEvent("merge", ins, (out,))])
                            rel = _relabel(base, c, out)
                            record("birth-merge", m == (rel @ ident).scale(scalar), f"c={c} new={new}")
                        for dying_first, scalar in ((True, ONE), (False, Y)):
                            outs = (new, out) if dying_first else (out, new)
                            m = _movie(base, [AbstractEvent("split", (c,), outs),
                                              AbstractEvent("death+", (new,), ())])
                            rel = _relabel(base, c, out)
                            record("split-death", m == rel.scale(scalar), f"c={c} new={new}")
    # disjoint events, all kinds, with interleaved circle labels
    for k in range(0, max_circles):
        base = tuple(range(0, 2 * k, 2))
        for w in _events(base, (1, 3)):
            rest = [c for c in base if c not in w.inputs]
            for wp in _events(rest, (5, 7)):
                if len(_after(_after(base, w), wp)) > max_circles:
                    continue
                a = _movie(base, [w, wp])
                b = _movie(base, [wp, w])
                record("commute", b == a.scale(lambda_R(w.degree, wp.degree)), f"{w} {wp}")
    # planar exchange through the braiding
    for ka in range(0, 3):
        for kb in range(0, 3):
            left = tuple(range(0, 2 * ka, 2))
            right = tuple(range(20, 20 + 2 * kb, 2))
            for w in _events(left, (1, 3)):
                for wp in _events(right, (21, 23)):
                    left2, right2 = _after(left, w), _after(right, wp)
                    if len(left2) + len(right2) > max_circles:
                        continue
                    f = _movie(left + right, [w, wp])
                    moved = tuple(c + 100 for c in left)
                    g = _movie(right + moved, [wp, _shifted(w, 100)])
                    lhs = braiding(left2, right2, 100) @ f
                    rhs = (g @ braiding(left, right, 100)).scale(lambda_R(wp.degree, w.degree))
                    record("planar-exchange", lhs == rhs, f"{w} {wp}")
    res.details = counts
    return res


def _relabel(base: Sequence[int], old: int, new: int) -> RMatrix:
    """Identity on labelings after renaming circle ``old`` to ``new``."""
    src = StateSpace(base)
    dst = StateSpace([new if c == old else c for c in base])
    cols = []
    for basis in range(src.rank):
        out = 0
        for c in base:
            out |= src.label(basis, c) << dst.index[new if c == old else c]
        cols.append({out: RingElem.promote(1)})
    return RMatrix(dst.rank, src.rank, cols)


# ---------------------------------------------------------------------------
# Random diagrams and shifts
# ---------------------------------------------------------------------------


def random_diagram(rng: random.Random, n_in: int, n_out: int, max_crossings: int) -> TangleDiagram:
    """A random slice word from ``2 n_in`` to ``2 n_out`` points."""
    for _ in range(1000):
        width = 2 * n_in
        slices = []
        steps = max_crossings + rng.randint(0, 2) + abs(n_out - n_in)
        for _ in range(steps):
            opts = ["cup"]
            if width >= 2:
                opts += ["pos", "neg"] * 2 + ["cap"]
            kind = rng.choice(opts)
            if kind == "cup":
                slices.append(("cup", rng.randint(0, width)))
                width += 2
            else:
                slices.append((kind, rng.randint(0, width - 2)))
                if kind == "cap":
                    width -= 2
        if width == 2 * n_out and sum(1 for kd, _ in slices if kd in ("pos", "neg")) <= max_crossings:
            return TangleDiagram(n_in, tuple(slices))
    raise RuntimeError("could not sample a diagram")  # pragma: no cover


def _random_v(rng: random.Random) -> Bidegree:
    return (rng.randint(-1, 1), rng.randint(-1, 1))


def random_shift(rng: random.Random, n_in: int, n_out: int, max_crossings: int = 2) -> Shift:
    T = random_diagram(rng, n_in, n_out, max_crossings)
    sk = build_skeleton(T)
    k = len(sk.gadgets)
    start = [rng.randint(0, 1) for _ in range(k)]
    flips = [rng.randrange(k) for _ in range(rng.randint(0, min(k, 2)))] if k else []
    return Shift.cube(T, start, flips, _random_v(rng), sk=sk)


def _random_g(rng: random.Random, s: Shift, a: FlatTangle, b: FlatTangle) -> arc.GDegree:
    return arc.GDegree(reduce(s.source)[0], (rng.randint(-2, 2), rng.randint(-2, 2)), a, b)


def _vertical_pair(rng: random.Random, n_in: int, n_out: int) -> Tuple[Shift, Shift]:
    T = random_diagram(rng, n_in, n_out, 3)
    sk = build_skeleton(T)
    k = len(sk.gadgets)
    start = [rng.randint(0, 1) for _ in range(k)]
    f1 = [rng.randrange(k) for _ in range(rng.randint(0, min(k, 2)))] if k else []
    bits = list(start)
    for f in f1:
        bits[f] ^= 1
    f2 = [rng.randrange(k) for _ in range(rng.randint(0, min(k, 2)))] if k else []
    return (Shift.cube(T, start, f1, _random_v(rng), sk=sk),
            Shift.cube(T, bits, f2, _random_v(rng), sk=sk))


def _square(rng: random.Random, n_in: int, n_out: int):
    """Two ways ``j i`` and ``j' i'`` around a face of a cube, or ``None``."""
    for _ in range(100):
        T = random_diagram(rng, n_in, n_out, 3)
        sk = build_skeleton(T)
        k = len(sk.gadgets)
        if k >= 2:
            break
    else:
        return None
    x, y = rng.sample(range(k), 2)
    start = [rng.randint(0, 1) for _ in range(k)]
    start[x] = start[y] = 0
    vx, vy = _random_v(rng), _random_v(rng)
    sx = list(start)
    sx[x] = 1
    sy = list(start)
    sy[y] = 1
    i = Shift.cube(T, start, [x], vx, sk=sk)
    j = Shift.cube(T, sx, [y], vy, sk=sk)
    ip = Shift.cube(T, start, [y], vy, sk=sk)
    jp = Shift.cube(T, sy, [x], vx, sk=sk)
    return i, j, ip, jp


def _matching(rng: random.Random, n: int) -> FlatTangle:
    return rng.choice(enumerate_matchings(n))


@_timed
def check_shift_coherence(samples: int = 100, seed: int = 0) -> CheckResult:
    """Coherence of ``beta``, ``gamma``, ``Xi`` and ``tau`` on random shifts.

    Three identities are sampled ``samples`` times each:

    * horizontal: ``alpha beta(kj, i) beta(k, j) = beta(k, ji) beta(j, i) alpha'``;
    * vertical: ``beta(j'i', ji) gamma(j', i') gamma(j, i) Xi
      = gamma(j'j, i'i) beta(i', i) beta(j', j)``;
    * commutativity: ``tau`` of a horizontal composite of squares equals
      the product of the ``tau`` of the factors, up to ``beta`` and ``Xi``.
    """
    rng = random.Random(seed)
    res = CheckResult("shift-coherence")
    counts = {"horizontal": 0, "vertical": 0, "commutativity": 0, "tau-inverse": 0}
    for _ in range(samples):
        n0, n1, n2, n3 = (rng.choice([0, 1, 2]) for _ in range(4))
        i = random_shift(rng, n0, n1)
        j = random_shift(rng, n1, n2)
        k = random_shift(rng, n2, n3)
        a, b, c, d = (_matching(rng, n) for n in (n0, n1, n2, n3))
        g, g1, g2 = _random_g(rng, i, a, b), _random_g(rng, j, b, c), _random_g(rng, k, c, d)
        kj, ji = hcompose(k, j), hcompose(j, i)
        lhs = arc.alpha(g2, g1, g) * beta(kj, i, arc.g_compose(g2, g1), g) * beta(k, j, g2, g1)
        rhs = (beta(k, ji, g2, arc.g_compose(g1, g)) * beta(j, i, g1, g)
               * arc.alpha(k.apply(g2), j.apply(g1), i.apply(g)))
        res.checked += 1
        counts["horizontal"] += 1
        if lhs != rhs:
            res.fail(f"horizontal: {lhs} != {rhs} (widths {n0},{n1},{n2},{n3})")
    for _ in range(samples):
        n0, n1, n2 = (rng.choice([0, 1, 2]) for _ in range(3))
        a, b, c = (_matching(rng, n) for n in (n0, n1, n2))
        i, j = _vertical_pair(rng, n0, n1)
        ip, jp = _vertical_pair(rng, n1, n2)
        g, gp = _random_g(rng, i, a, b), _random_g(rng, ip, b, c)
        gg = arc.g_compose(gp, g)
        lhs = (beta(vcompose(jp, ip), vcompose(j, i), gp, g) * gamma(jp, ip, gp)
               * gamma(j, i, g) * xi(jp, ip, j, i, gg))
        rhs = (gamma(hcompose(jp, j), hcompose(ip, i), gg) * beta(ip, i, gp, g)
               * beta(jp, j, ip.apply(gp), i.apply(g)))
        res.checked += 1
        counts["vertical"] += 1
        if lhs != rhs:
            res.fail(f"vertical: {lhs} != {rhs}")
        s1, s2 = _square(rng, n0, n1), _square(rng, n1, n2)
        if s1 is None or s2 is None:
            continue
        i1, j1, i1p, j1p = s1
        i2, j2, i2p, j2p = s2
        g, gp = _random_g(rng, i1, a, b), _random_g(rng, i2, b, c)
        gg = arc.g_compose(gp, g)
        lhs = (beta(vcompose(j2p, i2p), vcompose(j1p, i1p), gp, g) * xi(j2p, i2p, j1p, i1p, gg)
               * tau_commut(hcompose(j2p, j1p), hcompose(i2p, i1p), hcompose(j2, j1), hcompose(i2, i1), gg))
        rhs = (tau_commut(j2p, i2p, j2, i2, gp) * tau_commut(j1p, i1p, j1, i1, g)
               * beta(vcompose(j2, i2), vcompose(j1, i1), gp, g) * xi(j2, i2, j1, i1, gg))
        res.checked += 2
        counts["commutativity"] += 1
        counts["tau-inverse"] += 1
        if lhs != rhs:
            res.fail(f"commutativity: {lhs} != {rhs}")
        if tau_commut(j1p, i1p, j1, i1, g) * tau_commut(j1, i1, j1p, i1p, g) != ONE:
            res.fail("tau is not inverse to its reverse")
    res.details = counts
    return res


# ---------------------------------------------------------------------------
# Exchange scalars against the TQFT
# ---------------------------------------------------------------------------


class _OracleTally:
    def __init__(self, res: CheckResult):
        self.res = res
        self.counts = {"unique": 0, "ambiguous": 0, "zero": 0}

    def compare(self, movie: Movie, order: Sequence[int], value: Monomial, label: str) -> None:
        ref = apply_movie(movie)
        self.res.checked += 1
        if ref.is_zero():
            self.counts["zero"] += 1
            return
        cands = matrix_ratio(ref, apply_movie(movie.reorder(order)))
        if value not in cands:
            self.res.fail(f"{label}: iota {value} but the TQFT gives {[str(c) for c in cands]}")
        else:
            self.counts["unique" if len(cands) == 1 else "ambiguous"] += 1


def _cube_diagrams(rng: random.Random, max_crossings: int, tangles: int) -> List[TangleDiagram]:
    from .corpus import corpus

    out = [T for T in corpus().values() if T.n_crossings <= max_crossings]
    for _ in range(tangles):
        n_in, n_out = rng.choice([0, 1, 2]), rng.choice([0, 1, 2])
        out.append(random_diagram(rng, n_in, n_out, max_crossings))
    return out


@_timed
def check_iota_oracle(max_crossings: int = 4, tangles: int = 12, samples: int = 100,
                      seed: int = 0) -> CheckResult:
    """``iota`` against direct TQFT evaluation.

    Covers every exchangeable pair of saddles at every vertex of the cubes
    of the corpus diagrams with at most ``max_crossings`` crossings and of
    ``tangles`` random tangles (all closures), plus the reordering movies
    behind ``beta``, ``Xi`` and ``tau`` on ``samples`` random shifts.
    Where several monomials relate the two maps the value of ``iota`` must
    be among them; zero maps carry no information and are only counted.
    """
    rng = random.Random(seed)
    res = CheckResult("iota-oracle")
    tally = _OracleTally(res)
    for T in _cube_diagrams(rng, max_crossings, tangles):
        sk = build_skeleton(T)
        k = len(sk.gadgets)
        for a, b in closure_pairs(T.n_in, T.n_out):
            cube = Cube(T, a, b, sk)
            for xi_ in vertices(k):
                D = cube.diagram(xi_)
                zeros = [j for j in range(k) if xi_[j] == 0]
                for j, l in itertools.combinations(zeros, 2):
                    movie = Movie(D, (cube.saddle(j), cube.saddle(l)))
                    try:
                        value = transpose_scalar(D, movie.events[0], movie.events[1])
                    except NonExchangeable:
                        continue
                    tally.compare(movie, (1, 0), value, f"cube pair {j},{l}")
                if len(zeros) > 2:
                    for j in zeros:
                        movie = cube.w_movie(xi_)
                        pos = zeros.index(j)
                        order = [pos] + [m for m in range(len(zeros)) if m != pos]
                        tally.compare(movie, order, iota(movie, order), "push to bottom")
    for _ in range(samples):
        n0, n1, n2 = (rng.choice([0, 1, 2]) for _ in range(3))
        a, b, c = (_matching(rng, n) for n in (n0, n1, n2))
        i, j = _vertical_pair(rng, n0, n1)
        ip, jp = _vertical_pair(rng, n1, n2)
        g, gp = _random_g(rng, i, a, b), _random_g(rng, ip, b, c)
        m, o = beta_movies(ip, i, gp, g)
        tally.compare(m, o, beta_one(ip, i, gp, g), "beta")
        m, o = xi_movies(jp, ip, j, i, arc.g_compose(gp, g))
        tally.compare(m, o, iota(m, o), "Xi")
        sq = _square(rng, n0, n1)
        if sq is not None:
            i1, j1, i1p, j1p = sq
            g1 = _random_g(rng, i1, a, b)
            m, o = tau_movies(j1p, i1p, j1, i1, g1)
            tally.compare(m, o, iota(m, o), "tau")
    res.details = tally.counts
    return res


# ---------------------------------------------------------------------------
# Complexes
# ---------------------------------------------------------------------------


@_timed
def check_d_squared(diagrams: Dict[str, TangleDiagram]) -> CheckResult:
    """``d^2 = 0`` over R for each diagram, all closures."""
    res = CheckResult("d-squared")
    for name, T in diagrams.items():
        res.checked += 1
        C = kh_complex(T)
        if not C.d_squared_zero():
            res.fail(f"d^2 != 0 on {name}")
    return res


@dataclass
class GluingReport:
    glued: "object"
    composite: "object"

    @property
    def isomorphic(self) -> bool:
        return self.glued == self.composite


def gluing_check(T2: TangleDiagram, T1: TangleDiagram, spec: Spec) -> GluingReport:
    """Homology of ``kh(T2) (x) kh(T1)`` against that of the stacked diagram."""
    from .tangles import stack

    glued = homology(tensor_kh(T2, T1, spec), spec)
    composite = homology(kh_complex(stack(T1, T2)), spec)
    return GluingReport(glued, composite)


def structure_checks(seed: int = 0, samples: int = 100) -> List[CheckResult]:
    """The suite run by ``check structure``."""
    from .corpus import corpus

    small = {n: T for n, T in corpus().items() if T.n_crossings <= 6}
    return [
        check_cocycle(2),
        check_arc_algebras(2),
        check_tqft_relations(4),
        check_shift_coherence(samples, seed),
        check_iota_oracle(4, seed=seed, samples=samples),
        check_d_squared(small),
    ]
