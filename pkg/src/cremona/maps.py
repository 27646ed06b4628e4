"""Certified birational maps of P^n.

A :class:`CremonaMap` carries its inverse together with the cofactors of
both compositions, so birationality is witnessed by explicit substitution
rather than by the Jacobian (which vanishes for some birational maps in
small characteristic, e.g. the standard quadratic map over F_2).
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from . import linalg
from .fields import Field
from .polyring import (
    HomogeneousPoly,
    _add,
    _mul,
    _one,
    _scale,
    NotDivisibleError,
    jacobian_det,
    monomials,
    substitute,
    variables,
)
from .wspace import MapTuple, normalize

log = logging.getLogger(__name__)

RANDOM_COMBINATIONS = 32
_COMBINATION_SEED = 20240601


class CertificateError(RuntimeError):
    """A stored inverse certificate failed re-verification."""


class NotBirationalError(ValueError):
    pass


class SingularMatrixError(ValueError):
    pass


def compose_tuples(f: MapTuple, g: MapTuple) -> MapTuple:
    """Formal composite f o g = (f_0(g) : ... : f_n(g)), degree deg f * deg g."""
    if f.n != g.n:
        raise ValueError(f"cannot compose maps of P^{f.n} and P^{g.n}")
    return MapTuple([substitute(fi, g.components) for fi in f.components], f.d * g.d)


def _cofactor(g: MapTuple, f: MapTuple) -> Optional[HomogeneousPoly]:
    """a with g o f = a * id exactly (no rescaling), or None if there is none."""
    comps = [substitute(gi, f.components) for gi in g.components]
    nv = f.n + 1
    xs = variables(f.field, nv)
    k = next((i for i, c in enumerate(comps) if c.terms), None)
    if k is None:
        return HomogeneousPoly.zero(f.field, nv, g.d * f.d - 1)
    try:
        a = comps[k] / xs[k]
    except NotDivisibleError:
        return None
    if all(c == a * x for c, x in zip(comps, xs)):
        return a
    return None


@dataclass(frozen=True)
class CremonaMap:
    """A reduced tuple with a verified inverse.

    ``inverse o forward = cofactor * id`` and
    ``forward o inverse = reverse_cofactor * id``, both cofactors nonzero.
    """

    forward: MapTuple
    inverse: MapTuple
    cofactor: HomogeneousPoly
    reverse_cofactor: HomogeneousPoly

    @classmethod
    def from_pair(cls, forward: MapTuple, inverse: MapTuple, *,
                  known_reduced: bool = False) -> "CremonaMap":
        """Verify that ``inverse`` inverts ``forward`` and build the map.

        ``known_reduced`` skips the gcd checks when the caller has already
        normalized both tuples; the composition checks always run.
        """
        if forward.n != inverse.n:
            raise CertificateError("forward and inverse act on different spaces")
        if not known_reduced and (normalize(forward).degree != forward.d
                                  or normalize(inverse).degree != inverse.d):
            raise CertificateError("forward and inverse must be reduced tuples")
        bound = forward.d ** (forward.n - 1)
        if inverse.d > bound:
            raise CertificateError(f"inverse degree {inverse.d} exceeds bound {bound}")
        a = _cofactor(inverse, forward)
        if a is None or not a.terms:
            raise CertificateError("inverse o forward is not a nonzero multiple of the identity")
        b = _cofactor(forward, inverse)
        if b is None or not b.terms:
            raise CertificateError("forward o inverse is not a nonzero multiple of the identity")
        return cls(forward, inverse, a, b)

    @property
    def n(self) -> int:
        return self.forward.n

    @property
    def field(self) -> Field:
        return self.forward.field

    @property
    def degree(self) -> int:
        return self.forward.d

    @property
    def inverse_degree(self) -> int:
        return self.inverse.d

    def verify(self) -> bool:
        a = _cofactor(self.inverse, self.forward)
        b = _cofactor(self.forward, self.inverse)
        return a == self.cofactor and b == self.reverse_cofactor and bool(a) and bool(b)

    def __call__(self, point):
        return apply_to_point(self, point)

    def __matmul__(self, other: "CremonaMap") -> "CremonaMap":
        return compose(self, other)

    def __str__(self):
        return str(self.forward)


def true_degree(f: CremonaMap) -> int:
    return f.forward.d


# ---------------------------------------------------------------------------
# birationality via the inverse linear system


def _power_table(f: MapTuple, e: int) -> dict:
    """Products f^c = prod f_i^{c_i} for every exponent c of degree e."""
    P = f.field.p
    nv = f.n + 1
    table = {(0,) * nv: _one(nv, P)}
    for deg in range(1, e + 1):
        for c in monomials(nv, deg):
            i = next(k for k, x in enumerate(c) if x)
            prev = c[:i] + (c[i] - 1,) + c[i + 1:]
            table[c] = _mul(table[prev], f.components[i].terms, P)
    return table


def inverse_system(f: MapTuple, e: int, powers: dict | None = None):
    """Linear equations G_i x_j - G_j x_i = 0 on the coefficients of g.

    Unknown ``i * dim + k`` is the coefficient of the k-th degree-e monomial
    in g_i, where G_i = g_i(f). Returns (rows, ncols, monomial list).
    """
    P = f.field.p
    nv = f.n + 1
    monos = monomials(nv, e)
    if powers is None:
        powers = _power_table(f, e)
    dim = len(monos)
    ncols = nv * dim
    rows: dict = {}
    for i in range(nv):
        for k, c in enumerate(monos):
            col = i * dim + k
            for mono, coef in powers[c].items():
                for j in range(nv):
                    if j == i:
                        continue
                    target = mono[:j] + (mono[j] + 1,) + mono[j + 1:]
                    key = (i, j, target) if i < j else (j, i, target)
                    row = rows.get(key)
                    if row is None:
                        row = rows[key] = {}
                    v = row.get(col, 0) + (coef if i < j else -coef)
                    row[col] = v % P if P else v
    dense = []
    for row in rows.values():
        if any(row.values()):
            r = [0] * ncols
            for col, v in row.items():
                r[col] = v
            dense.append(r)
    return dense, ncols, monos


def _tuple_from_vector(vec: Sequence, monos: list, field: Field, e: int) -> list[HomogeneousPoly]:
    nv = len(monos[0])
    dim = len(monos)
    out = []
    for i in range(nv):
        terms = {m: field(vec[i * dim + k]) for k, m in enumerate(monos) if vec[i * dim + k]}
        out.append(HomogeneousPoly(field, nv, terms, e, _trusted=True))
    return out


def _composite_terms(vec: Sequence, monos: list, powers: dict, P: int, nv: int) -> list[dict]:
    dim = len(monos)
    out = []
    for i in range(nv):
        acc: dict = {}
        for k, m in enumerate(monos):
            c = vec[i * dim + k]
            if c:
                acc = _add(acc, _scale(powers[m], c, P), P)
        out.append(acc)
    return out


def _candidates(basis: list[list], field: Field):
    yield from basis
    if len(basis) < 2:
        return
    rng = random.Random(_COMBINATION_SEED)
    P = field.p
    for _ in range(RANDOM_COMBINATIONS):
        if P:
            coeffs = [rng.randrange(P) for _ in basis]
        else:
            coeffs = [rng.randint(-7, 7) for _ in basis]
        vec = [sum(c * b[j] for c, b in zip(coeffs, basis)) for j in range(len(basis[0]))]
        if P:
            vec = [v % P for v in vec]
        yield vec


def find_inverse(f: MapTuple, e: int) -> Optional[MapTuple]:
    """An inverse of the reduced tuple ``f`` of degree exactly e, if one exists."""
    P = f.field.p
    nv = f.n + 1
    powers = _power_table(f, e)
    rows, ncols, monos = inverse_system(f, e, powers)
    basis = linalg.nullspace(rows, ncols, P)
    for vec in _candidates(basis, f.field):
        if not any(vec):
            continue
        comps = _composite_terms(vec, monos, powers, P, nv)
        if not any(comps):
            continue  # g o f = 0: f is not dominant
        g = _tuple_from_vector(vec, monos, f.field, e)
        return normalize(MapTuple(g, e)).reduced
    return None


def certify_birational(t: MapTuple) -> Optional[CremonaMap]:
    """Decide birationality of ``t``; on success return the certified map.

    The tuple is reduced first; candidate inverse degrees e = 1, 2, ...,
    d^(n-1) are swept upward, so the stored inverse has minimal degree.
    """
    red = normalize(t).reduced
    d, n = red.d, red.n
    if d == 0:
        return None
    if red.field.is_rational and not jacobian_det(red.components).terms:
        return None
    bound = d ** (n - 1)
    for e in range(1, bound + 1):
        g = find_inverse(red, e)
        if g is not None:
            return CremonaMap.from_pair(red, g, known_reduced=True)
    if red.field.is_rational:
        log.info("nonzero Jacobian but no inverse of degree <= %d for %s", bound, red)
    return None


def require_birational(t: MapTuple) -> CremonaMap:
    f = certify_birational(t)
    if f is None:
        raise NotBirationalError(f"{t} is not birational")
    return f


def inverse(f: CremonaMap) -> CremonaMap:
    try:
        return CremonaMap.from_pair(f.inverse, f.forward)
    except CertificateError as exc:
        raise CertificateError(f"stored inverse certificate is corrupt: {exc}") from None


def compose(f: CremonaMap, g: CremonaMap) -> CremonaMap:
    """f o g, reduced, with inverse g^-1 o f^-1."""
    fwd = normalize(compose_tuples(f.forward, g.forward)).reduced
    inv = normalize(compose_tuples(g.inverse, f.inverse)).reduced
    return CremonaMap.from_pair(fwd, inv)


def apply_to_point(f, point: Sequence):
    """Image of a point, canonically scaled, or None at an indeterminacy point."""
    t = f.forward if isinstance(f, CremonaMap) else f
    F = t.field
    pt = [F(x) for x in point]
    if len(pt) != t.n + 1:
        raise ValueError(f"point has {len(pt)} coordinates, expected {t.n + 1}")
    if not any(pt):
        raise ValueError("the zero vector is not a projective point")
    img = t.evaluate(pt)
    return canonical_point(img, F)


def canonical_point(coords: Sequence, field: Field):
    lead = next((c for c in coords if c), None)
    if lead is None:
        return None
    inv = field.inv(lead)
    return tuple(field(c * inv) for c in coords)


# ---------------------------------------------------------------------------
# constructors


def identity(field: Field, n: int) -> CremonaMap:
    t = MapTuple(variables(field, n + 1))
    return CremonaMap.from_pair(t, t)


def standard_quadratic(field: Field) -> CremonaMap:
    """(x0 : x1 : x2) -> (x1 x2 : x0 x2 : x0 x1), an involution of P^2."""
    x0, x1, x2 = variables(field, 3)
    s = MapTuple([x1 * x2, x0 * x2, x0 * x1])
    return CremonaMap.from_pair(s, s)


def linear_from_matrix(M: Sequence[Sequence], field: Field) -> CremonaMap:
    """The automorphism x -> M x of P^n."""
    m = len(M)
    if m < 2 or any(len(r) != m for r in M):
        raise ValueError("need a square matrix of size n+1 >= 2")
    P = field.p
    A = [[field(x) for x in r] for r in M]
    if not linalg.det(A, P):
        raise SingularMatrixError("matrix is singular")
    Ainv = linalg.inverse(A, P)
    xs = variables(field, m)

    def form(rows):
        out = []
        for r in rows:
            acc = HomogeneousPoly.zero(field, m, 1)
            for c, x in zip(r, xs):
                if c:
                    acc = acc + x * c
            out.append(acc)
        return MapTuple(out, 1)

    return CremonaMap.from_pair(form(A), form(Ainv))


def de_jonquieres(field: Field, n: int, q: HomogeneousPoly) -> CremonaMap:
    """Homogenized (x1 + q, x2, ..., xn) for a form q not involving x1.

    Affinely x1 -> x1 + q(1, x2, ..., xn); the inverse subtracts q.
    """
    if n < 2:
        raise ValueError("de Jonquieres maps need n >= 2")
    if q.nvars != n + 1:
        raise ValueError(f"q must be a form in x0..x{n}")
    if 1 in q.variables():
        raise ValueError("q must not involve x1")
    if q.degree < 1:
        raise ValueError("q must have positive degree")
    m = q.degree
    xs = variables(field, n + 1)
    h = xs[0] ** (m - 1)

    def build(s):
        comps = [h * x for x in xs]
        comps[1] = comps[1] + q * s
        return normalize(MapTuple(comps, m)).reduced

    return CremonaMap.from_pair(build(1), build(-1))
