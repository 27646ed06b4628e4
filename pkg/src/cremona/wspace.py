"""Projective tuples of forms (points of W_d), degree-drop factorization and
the chordal metric on coefficient space."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg
from .fields import Field
from .polyring import (
    ArityError,
    DegreeError,
    HomogeneousPoly,
    NotDivisibleError,
    _check_tuple,
    divide_exact,
    gcd_tuple,
    monomials,
)


class MapTuple:
    """Projective class of an (n+1)-tuple of degree-d forms, not all zero.

    Stored in canonical form: the first nonzero coefficient, scanning the
    components in order and each one in descending monomial order, is 1.
    Two tuples are the same point of W_d iff they compare equal.
    """

    __slots__ = ("components", "field", "n", "d", "_hash")

    def __init__(self, components: Sequence[HomogeneousPoly], degree: int | None = None):
        comps = list(components)
        if len(comps) < 2:
            raise ArityError("a map tuple needs at least two components")
        d = _check_tuple(comps, nvars=len(comps))
        if degree is not None:
            if any(c.terms for c in comps) and d != degree:
                raise DegreeError(f"components have degree {d}, declared {degree}")
            d = degree
        lead = next((c for c in comps if c.terms), None)
        if lead is None:
            raise ValueError("map tuple with all components zero")
        F = lead.field
        s = lead.leading_term()[1]
        if s != 1:
            inv = F.inv(s)
            comps = [c * inv for c in comps]
        comps = [c if c.terms else HomogeneousPoly.zero(F, c.nvars, d) for c in comps]
        self.components = tuple(comps)
        self.field = F
        self.n = len(comps) - 1
        self.d = d
        self._hash = None

    @classmethod
    def identity(cls, field: Field, n: int, d: int = 1) -> "MapTuple":
        from .polyring import variables
        xs = variables(field, n + 1)
        if d == 1:
            return cls(xs)
        a = xs[0] ** (d - 1)
        return cls([a * x for x in xs])

    def __eq__(self, other):
        if not isinstance(other, MapTuple):
            return NotImplemented
        return self.d == other.d and self.components == other.components

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.d, self.components))
        return self._hash

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __len__(self):
        return len(self.components)

    def __str__(self):
        from .grammar import format_tuple
        return format_tuple(self.components)

    def __repr__(self):
        return f"MapTuple({str(self)!r}, {self.field})"

    def scaled(self, s: HomogeneousPoly) -> "MapTuple":
        """(s*f_0 : ... : s*f_n), of degree d + deg s."""
        return MapTuple([s * c for c in self.components], self.d + s.degree)

    def coefficient_vector(self) -> list:
        basis = monomials(self.n + 1, self.d)
        out = []
        for c in self.components:
            out.extend(c.coefficient_vector(basis))
        return out

    def sparse_vector(self) -> dict:
        return {(i, e): v for i, c in enumerate(self.components) for e, v in c.terms.items()}

    def evaluate(self, point: Sequence) -> tuple:
        return tuple(c.evaluate(point) for c in self.components)


@dataclass(frozen=True)
class ReducedForm:
    """original = cofactor * reduced, with gcd(reduced) = 1 and cofactor monic."""

    reduced: MapTuple
    cofactor: HomogeneousPoly

    @property
    def degree(self) -> int:
        return self.reduced.d


def normalize(t: MapTuple) -> ReducedForm:
    """Strip the common factor of the components of ``t``."""
    g = gcd_tuple(t.components)
    if g.degree == 0:
        return ReducedForm(t, g)
    reduced = MapTuple([divide_exact(c, g) for c in t.components], t.d - g.degree)
    return ReducedForm(reduced, g)


def true_degree(t: MapTuple) -> int:
    return normalize(t).degree


def is_reduced(t: MapTuple) -> bool:
    return gcd_tuple(t.components).degree == 0


def is_multiple_of_identity(t: MapTuple) -> Optional[HomogeneousPoly]:
    """The form a with t = (a*x_0 : ... : a*x_n), or None if there is none."""
    from .polyring import variables
    xs = variables(t.field, t.n + 1)
    a = None
    for c, x in zip(t.components, xs):
        if t.d < 1:
            return None
        try:
            q = divide_exact(c, x)
        except NotDivisibleError:
            return None
        if a is None:
            a = q
        elif q != a:
            return None
    return a


def _require_rational(*ts: MapTuple):
    for t in ts:
        if not t.field.is_rational:
            raise ValueError(f"the chordal metric needs an archimedean field; got {t.field}")


def _dot(v: dict, w: dict):
    if len(v) > len(w):
        v, w = w, v
    return sum((c * w[k] for k, c in v.items() if k in w), Fraction(0))


def distance_sq(p: MapTuple, q: MapTuple) -> Fraction:
    """Squared chordal (Fubini-Study sine) distance between two points of W_d.

    sum_{i<j} (v_i w_j - v_j w_i)^2 / (|v|^2 |w|^2), evaluated through
    Lagrange's identity as 1 - (v.w)^2 / (|v|^2 |w|^2).
    """
    _require_rational(p, q)
    if p.n != q.n or p.d != q.d:
        raise DegreeError(f"W_d points of shape (n={p.n}, d={p.d}) and (n={q.n}, d={q.d})")
    v, w = p.sparse_vector(), q.sparse_vector()
    vv, ww, vw = _dot(v, v), _dot(w, w), _dot(v, w)
    return (vv * ww - vw * vw) / (vv * ww)


def distance(p: MapTuple, q: MapTuple) -> float:
    """Floating-point chordal distance (square root of :func:`distance_sq`)."""
    return math.sqrt(float(distance_sq(p, q)))


def fiber_basis(g: MapTuple, d: int) -> list[MapTuple]:
    """The tuples g * x^c spanning the degree-d representatives of g's map."""
    from .polyring import HomogeneousPoly as HP
    basis = []
    for c in monomials(g.n + 1, d - g.d):
        xc = HP.monomial(g.field, c)
        basis.append(MapTuple([xc * gi for gi in g.components], d))
    return basis


def fiber_distance_sq(t: MapTuple, g: MapTuple) -> Fraction:
    """Squared sine of the angle between t and the fiber {g * a : deg a = d - m}.

    Zero exactly when t and g define the same rational map. Computed by an
    exact orthogonal projection onto the span of the tuples g * x^c.
    """
    _require_rational(t, g)
    if t.n != g.n:
        raise ArityError(f"n={t.n} vs n={g.n}")
    if g.d > t.d:
        raise DegreeError(f"fiber degree {g.d} exceeds tuple degree {t.d}")
    if not is_reduced(g):
        raise ValueError("fiber_distance_sq needs a reduced tuple g")
    v = t.sparse_vector()
    B = [b.sparse_vector() for b in fiber_basis(g, t.d)]
    gram = [[_dot(bi, bj) for bj in B] for bi in B]
    beta = [_dot(bi, v) for bi in B]
    alpha = linalg.solve(gram, beta)
    proj = sum((a * b for a, b in zip(alpha, beta)), Fraction(0))
    vv = _dot(v, v)
    return (vv - proj) / vv
