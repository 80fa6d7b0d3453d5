"""The chronological TQFT on closed 1-manifolds.

A closed diagram with ``k`` circles is sent to ``A^{(x) k}`` where
``A = R v+ (+) R v-``.  Circles are identified by integer labels and
ordered increasingly; a basis element is an integer whose bit ``i`` is the
label of the ``i``-th circle (``0`` for ``v+``, ``1`` for ``v-``).

Elementary events act on the tensor factors of the circles they touch.
The factors are first moved to the front with the symmetric braiding
``tau(m (x) n) = lambda_R(|m|, |n|) n (x) m``, the local map is applied,
and the output factors are moved back into canonical position.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .ring import ONE, Bidegree, Monomial, RingElem, X, Y, Z, lambda_R

PLUS = 0
MINUS = 1

LABEL_DEG = {PLUS: (1, 0), MINUS: (0, -1)}

# lambda_R on label degrees, stored as (eps_x, eps_y, z) triples
_LAM = {(a, b): tuple(lambda_R(LABEL_DEG[a], LABEL_DEG[b])) for a in (0, 1) for b in (0, 1)}

XZ = X * Z
YZ = Y * Z

# local maps: input bits -> list of (output bits, monomial)
MERGE_TABLE = {
    (PLUS, PLUS): [((PLUS,), ONE)],
    (PLUS, MINUS): [((MINUS,), ONE)],
    (MINUS, PLUS): [((MINUS,), XZ)],
    (MINUS, MINUS): [],
}
SPLIT_TABLE = {
    (PLUS,): [((MINUS, PLUS), ONE), ((PLUS, MINUS), YZ)],
    (MINUS,): [((MINUS, MINUS), ONE)],
}
BIRTH_TABLE = {(): [((PLUS,), ONE)]}
DEATH_POS_TABLE = {(PLUS,): [], (MINUS,): [((), ONE)]}
DEATH_NEG_TABLE = {(PLUS,): [], (MINUS,): [((), Y)]}

EVENT_DEGREES = {
    "birth": (1, 0),
    "death+": (0, 1),
    "death-": (0, 1),
    "merge": (-1, 0),
    "split": (0, -1),
}


@dataclass(frozen=True)
class AbstractEvent:
    """An elementary cobordism acting on labelled circles.

    ``inputs`` and ``outputs`` are circle labels in the order the local map
    expects them: a merge takes ``(head, tail)`` and returns ``(out,)``; a
    split takes ``(src,)`` and returns ``(first, second)``; a birth returns
    ``(new,)``; a death takes ``(c,)``.
    """

    kind: str
    inputs: Tuple[int, ...]
    outputs: Tuple[int, ...]

    @property
    def degree(self) -> Bidegree:
        return EVENT_DEGREES[self.kind]

    def table(self):
        return {
            "merge": MERGE_TABLE,
            "split": SPLIT_TABLE,
            "birth": BIRTH_TABLE,
            "death+": DEATH_POS_TABLE,
            "death-": DEATH_NEG_TABLE,
        }[self.kind]


class StateSpace:
    """Free R-module on the labelings of an ordered list of circles."""

    __slots__ = ("circles", "index")

    def __init__(self, circles: Iterable[int]):
        self.circles = tuple(sorted(circles))
        self.index = {c: i for i, c in enumerate(self.circles)}

    @property
    def k(self) -> int:
        return len(self.circles)

    @property
    def rank(self) -> int:
        return 1 << len(self.circles)

    def degree(self, basis: int) -> Bidegree:
        minus = bin(basis).count("1")
        return (self.k - minus, -minus)

    def label(self, basis: int, circle: int) -> int:
        return (basis >> self.index[circle]) & 1

    def __eq__(self, other) -> bool:
        return isinstance(other, StateSpace) and self.circles == other.circles

    def __hash__(self) -> int:
        return hash(self.circles)

    def __repr__(self) -> str:
        return f"StateSpace({list(self.circles)})"


class RMatrix:
    """Sparse matrix over R stored by columns: ``cols[j] = {i: RingElem}``."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols: Optional[List[Dict[int, RingElem]]] = None):
        self.nrows = nrows
        self.ncols = ncols
        self.cols = cols if cols is not None else [dict() for _ in range(ncols)]

    @classmethod
    def identity(cls, n: int) -> "RMatrix":
        return cls(n, n, [{i: RingElem.promote(1)} for i in range(n)])

    def __getitem__(self, key: Tuple[int, int]) -> RingElem:
        i, j = key
        return self.cols[j].get(i, RingElem())

    def __matmul__(self, other: "RMatrix") -> "RMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in matrix product")
        out = []
        for col in other.cols:
            acc: Dict[int, RingElem] = {}
            for k, b in col.items():
                for i, a in self.cols[k].items():
                    acc[i] = acc[i] + a * b if i in acc else a * b
            out.append({i: v for i, v in acc.items() if not v.is_zero()})
        return RMatrix(self.nrows, other.ncols, out)

    def __add__(self, other: "RMatrix") -> "RMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch in matrix sum")
        out = []
        for c1, c2 in zip(self.cols, other.cols):
            acc = dict(c1)
            for i, v in c2.items():
                acc[i] = acc[i] + v if i in acc else v
            out.append({i: v for i, v in acc.items() if not v.is_zero()})
        return RMatrix(self.nrows, self.ncols, out)

    def scale(self, c) -> "RMatrix":
        c = RingElem.promote(c)
        out = []
        for col in self.cols:
            new = {i: v * c for i, v in col.items()}
            out.append({i: v for i, v in new.items() if not v.is_zero()})
        return RMatrix(self.nrows, self.ncols, out)

    def __neg__(self) -> "RMatrix":
        return self.scale(-1)

    def __sub__(self, other: "RMatrix") -> "RMatrix":
        return self + (-other)

    def is_zero(self) -> bool:
        return all(not col for col in self.cols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RMatrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and (self - other).is_zero()

    def entries(self):
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                yield i, j, v

    def specialize(self, x: int, y: int, z: int) -> Dict[Tuple[int, int], int]:
        out = {}
        for i, j, v in self.entries():
            s = v.specialize(x, y, z)
            if s:
                out[(i, j)] = s
        return out

    def to_dense(self) -> List[List[RingElem]]:
        rows = [[RingElem() for _ in range(self.ncols)] for _ in range(self.nrows)]
        for i, j, v in self.entries():
            rows[i][j] = v
        return rows

    def __repr__(self) -> str:
        return f"RMatrix({self.nrows}x{self.ncols}, nnz={sum(len(c) for c in self.cols)})"


def _mono(t) -> Monomial:
    return Monomial(t[0] & 1, t[1] & 1, t[2])


def _acc(acc, t):
    return (acc[0] ^ t[0], acc[1] ^ t[1], acc[2] + t[2])


def event_terms(src: StateSpace, dst: StateSpace, ev: AbstractEvent, basis: int):
    """Image of one basis element as a list of ``(dst_basis, Monomial)``."""
    table = ev.table()
    in_pos = [src.index[c] for c in ev.inputs]
    rest = [c for c in src.circles if c not in ev.inputs]
    bits_in = tuple((basis >> p) & 1 for p in in_pos)
    rest_bits = {c: (basis >> src.index[c]) & 1 for c in rest}
    # move the inputs to the front, in the order the local map expects
    acc = (0, 0, 0)
    for a, p in enumerate(in_pos):
        lab = bits_in[a]
        for c in rest:
            if src.index[c] < p:
                acc = _acc(acc, _LAM[(rest_bits[c], lab)])
        for b in range(a + 1, len(in_pos)):
            if in_pos[b] < p:
                # in_pos[b] was before in_pos[a] originally, now after
                acc = _acc(acc, _LAM[(bits_in[b], lab)])
    out_pos = [dst.index[c] for c in ev.outputs]
    rest_dst = [(dst.index[c], rest_bits[c]) for c in rest]
    base = 0
    for pos, lab in rest_dst:
        if lab:
            base |= 1 << pos
    result = []
    for bits_out, mono in table[bits_in]:
        acc2 = _acc(acc, tuple(mono))
        # move outputs from the front back into canonical position
        for a, p in enumerate(out_pos):
            lab = bits_out[a]
            for pos, rlab in rest_dst:
                if pos < p:
                    acc2 = _acc(acc2, _LAM[(lab, rlab)])
            for b in range(a + 1, len(out_pos)):
                if out_pos[b] < p:
                    acc2 = _acc(acc2, _LAM[(lab, bits_out[b])])
        idx = base
        for pos, lab in zip(out_pos, bits_out):
            if lab:
                idx |= 1 << pos
        result.append((idx, _mono(acc2)))
    return result


def apply_event(src: StateSpace, dst: StateSpace, ev: AbstractEvent) -> RMatrix:
    """Matrix of an elementary event from ``src`` to ``dst``."""
    _check_event(src, dst, ev)
    return _event_matrix_cached(src.circles, dst.circles, ev)


@lru_cache(maxsize=200000)
def _event_matrix_cached(src_c, dst_c, ev) -> RMatrix:
    src, dst = StateSpace(src_c), StateSpace(dst_c)
    cols = []
    for basis in range(src.rank):
        cols.append({i: RingElem({m: 1}) for i, m in event_terms(src, dst, ev, basis)})
    return RMatrix(dst.rank, src.rank, cols)


def _check_event(src: StateSpace, dst: StateSpace, ev: AbstractEvent) -> None:
    arity = {"merge": (2, 1), "split": (1, 2), "birth": (0, 1), "death+": (1, 0), "death-": (1, 0)}
    if ev.kind not in arity:
        raise ValueError(f"unknown event kind {ev.kind!r}")
    if (len(ev.inputs), len(ev.outputs)) != arity[ev.kind]:
        raise ValueError(f"{ev.kind} has the wrong number of circles")
    src_set, dst_set = set(src.circles), set(dst.circles)
    if not set(ev.inputs) <= src_set or len(set(ev.inputs)) != len(ev.inputs):
        raise ValueError("event inputs are not distinct circles of the source state")
    if not set(ev.outputs) <= dst_set or len(set(ev.outputs)) != len(ev.outputs):
        raise ValueError("event outputs are not distinct circles of the target state")
    if src_set - set(ev.inputs) != dst_set - set(ev.outputs):
        raise ValueError("untouched circles differ between source and target")


def apply_events(states: Sequence[StateSpace], events: Sequence[AbstractEvent]) -> RMatrix:
    """Ordered product of event matrices along a sequence of states."""
    if len(states) != len(events) + 1:
        raise ValueError("need one more state than events")
    mat = RMatrix.identity(states[0].rank)
    for k, ev in enumerate(events):
        mat = apply_event(states[k], states[k + 1], ev) @ mat
    return mat


def local_degree(ev: AbstractEvent) -> Bidegree:
    return EVENT_DEGREES[ev.kind]
