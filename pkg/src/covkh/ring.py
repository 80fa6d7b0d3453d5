"""Exact arithmetic in R = Z[X, Y, Z^{+-1}] / (X^2 = Y^2 = 1).

A monomial of R is ``X^ex * Y^ey * Z^k`` with ``ex, ey`` in ``{0, 1}`` and
``k`` any integer.  Every monomial is a unit.  General ring elements are
finitely supported integer combinations of monomials, kept in canonical
form (no zero coefficients) so that equality is structural.

The bilinear pairing ``lambda_R`` on bidegrees drives every sign-like
scalar in the rest of the package.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, NamedTuple, Tuple, Union

Bidegree = Tuple[int, int]


class Monomial(NamedTuple):
    """The monomial ``X^eps_x * Y^eps_y * Z^z_pow``."""

    eps_x: int = 0
    eps_y: int = 0
    z_pow: int = 0

    def __mul__(self, other: "Monomial") -> "Monomial":  # type: ignore[override]
        if not isinstance(other, Monomial):
            return NotImplemented
        return Monomial(self.eps_x ^ other.eps_x, self.eps_y ^ other.eps_y,
                        self.z_pow + other.z_pow)

    def inverse(self) -> "Monomial":
        return Monomial(self.eps_x, self.eps_y, -self.z_pow)

    def __truediv__(self, other: "Monomial") -> "Monomial":
        return self * other.inverse()

    def __pow__(self, k: int) -> "Monomial":  # type: ignore[override]
        return Monomial(self.eps_x & (k & 1), self.eps_y & (k & 1), self.z_pow * k)

    def specialize(self, x: int, y: int, z: int) -> int:
        """Evaluate at ``X=x, Y=y, Z=z`` with each value in ``{1, -1}``."""
        val = 1
        if self.eps_x and x == -1:
            val = -val
        if self.eps_y and y == -1:
            val = -val
        if self.z_pow % 2 and z == -1:
            val = -val
        return val

    def __str__(self) -> str:
        parts = []
        if self.eps_x:
            parts.append("X")
        if self.eps_y:
            parts.append("Y")
        if self.z_pow == 1:
            parts.append("Z")
        elif self.z_pow:
            parts.append(f"Z^{self.z_pow}")
        return "*".join(parts) if parts else "1"

    def __repr__(self) -> str:
        return f"Monomial({self})"


ONE = Monomial(0, 0, 0)
X = Monomial(1, 0, 0)
Y = Monomial(0, 1, 0)
Z = Monomial(0, 0, 1)
XY = Monomial(1, 1, 0)


def lambda_R(d1: Bidegree, d2: Bidegree) -> Monomial:
    """Return ``X^{a'a} Y^{b'b} Z^{a'b - b'a}`` for ``d1=(a',b')``, ``d2=(a,b)``.

    >>> str(lambda_R((1, 2), (3, 4)))
    'X*Z^-2'
    """
    a1, b1 = d1
    a2, b2 = d2
    return Monomial((a1 * a2) & 1, (b1 * b2) & 1, a1 * b2 - b1 * a2)


def add_deg(*degs: Bidegree) -> Bidegree:
    """Componentwise sum of bidegrees."""
    return (sum(d[0] for d in degs), sum(d[1] for d in degs))


def neg_deg(d: Bidegree) -> Bidegree:
    return (-d[0], -d[1])


class RingElem:
    """An element of R stored as ``{Monomial: nonzero int}``.

    Instances are immutable and hashable.  Integers and monomials are
    promoted automatically in arithmetic.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Union[Mapping[Monomial, int], Iterable, None] = None):
        acc: dict = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for mono, coeff in items:
                if coeff:
                    mono = Monomial(*mono)
                    acc[mono] = acc.get(mono, 0) + coeff
        self._terms = {m: c for m, c in acc.items() if c}
        self._hash = None

    # construction helpers -------------------------------------------------
    @classmethod
    def promote(cls, value) -> "RingElem":
        if isinstance(value, RingElem):
            return value
        if isinstance(value, Monomial):
            return cls({value: 1})
        if isinstance(value, int):
            return cls({ONE: value})
        raise TypeError(f"cannot interpret {value!r} as an element of R")

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def as_monomial(self) -> Tuple[int, Monomial] | None:
        """Return ``(coeff, mono)`` if this is a single term, else ``None``."""
        if len(self._terms) != 1:
            return None
        (mono, coeff), = self._terms.items()
        return coeff, mono

    # arithmetic -----------------------------------------------------------
    def __add__(self, other) -> "RingElem":
        other = RingElem.promote(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return RingElem(out)

    __radd__ = __add__

    def __neg__(self) -> "RingElem":
        return RingElem({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "RingElem":
        return self + (-RingElem.promote(other))

    def __rsub__(self, other) -> "RingElem":
        return RingElem.promote(other) - self

    def __mul__(self, other) -> "RingElem":
        other = RingElem.promote(other)
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 * m2
                out[m] = out.get(m, 0) + c1 * c2
        return RingElem(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        try:
            other = RingElem.promote(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def specialize(self, x: int, y: int, z: int) -> int:
        return sum(c * m.specialize(x, y, z) for m, c in self._terms.items())

    # text -----------------------------------------------------------------
    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"RingElem({render(self)!r})"


def ring_mul(u, v) -> RingElem:
    return RingElem.promote(u) * RingElem.promote(v)


def specialize(u, x: int, y: int, z: int) -> int:
    """Evaluate ``u`` at ``X=x, Y=y, Z=z`` (each ``+1`` or ``-1``)."""
    for val in (x, y, z):
        if val not in (1, -1):
            raise ValueError("specialization values must be +1 or -1")
    if isinstance(u, int):
        return u
    if isinstance(u, Monomial):
        return u.specialize(x, y, z)
    return RingElem.promote(u).specialize(x, y, z)


def _mono_key(m: Monomial):
    return (m.z_pow, m.eps_x, m.eps_y)


def render(u: RingElem) -> str:
    """Render as a signed sum, e.g. ``"X*Z^-2 - Y"``."""
    if u.is_zero():
        return "0"
    pieces = []
    for mono in sorted(u._terms, key=_mono_key):
        coeff = u._terms[mono]
        body = str(mono)
        mag = abs(coeff)
        if body == "1":
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag}*{body}"
        if not pieces:
            pieces.append(text if coeff > 0 else "-" + text)
        else:
            pieces.append(("+ " if coeff > 0 else "- ") + text)
    return " ".join(pieces)


_FACTOR_RE = re.compile(r"^(X|Y|Z|\d+)(?:\^(-?\d+))?$")


def parse(text: str) -> RingElem:
    """Parse the grammar produced by :func:`render`.

    Terms are ``[coeff*]factor*factor...`` where factors are ``X``, ``Y``,
    ``Z`` with an optional integer exponent (``Z^-2``), separated by ``+``
    or ``-``.

    Raises
    ------
    ValueError
        With the character position of the first unparsable token.
    """
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty ring expression")
    # split into signed terms, keeping '-' that belongs to an exponent
    terms = []
    i = 0
    start = 0
    sign = 1
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        i = start = 1
    while i <= len(s):
        if i == len(s) or (s[i] in "+-" and s[i - 1] != "^"):
            terms.append((sign, s[start:i], start))
            if i < len(s):
                sign = -1 if s[i] == "-" else 1
            start = i + 1
        i += 1
    acc: dict = {}
    for sign, body, pos in terms:
        if not body:
            raise ValueError(f"missing term at position {pos}")
        coeff = sign
        mono = ONE
        for factor in body.split("*"):
            m = _FACTOR_RE.match(factor)
            if not m:
                raise ValueError(f"cannot parse factor {factor!r} near position {pos}")
            base, exp = m.group(1), int(m.group(2)) if m.group(2) else 1
            if base.isdigit():
                if m.group(2):
                    coeff *= int(base) ** exp
                else:
                    coeff *= int(base)
            else:
                gen = {"X": X, "Y": Y, "Z": Z}[base]
                mono = mono * gen ** exp
        acc[mono] = acc.get(mono, 0) + coeff
    return RingElem(acc)
