"""Parametric families of tuples (morphisms A -> Bir(P^n)) and the standard
degenerating examples.

A family lives in the ring k[x_0..x_n, a_0..a_k]: each component is
homogeneous of degree d in the x's and of a common degree in the a's.
Parameter points are projective and use the same canonical scaling as
tuples (first nonzero coordinate 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .fields import QQ, Field
from .maps import canonical_point, certify_birational
from .polyring import (
    HomogeneousPoly,
    _add,
    _mul,
    _one,
    divide_exact,
    gcd_tuple,
    variables,
)
from .wspace import MapTuple, is_multiple_of_identity, normalize


class FamilyError(ValueError):
    """A parameter point is not admissible for a family."""


def _bidegree(p: HomogeneousPoly, nx: int) -> Optional[tuple[int, int]]:
    degs = {(sum(e[:nx]), sum(e[nx:])) for e in p.terms}
    if len(degs) > 1:
        raise ValueError(f"{p} is not bihomogeneous in (x, a)")
    return degs.pop() if degs else None


@dataclass(frozen=True)
class ParametricFamily:
    n: int
    nparams: int
    components: tuple
    constraints: tuple = ()
    excluded: tuple = ()
    d: int = dc_field(init=False)
    param_degree: int = dc_field(init=False)

    def __post_init__(self):
        nx = self.n + 1
        if len(self.components) != nx:
            raise ValueError(f"family needs {nx} components, got {len(self.components)}")
        if self.nparams < 1:
            raise ValueError("family needs at least one parameter")
        bidegs = {b for c in self.components if (b := _bidegree(c, nx)) is not None}
        if not bidegs:
            raise ValueError("family with all components zero")
        if len(bidegs) > 1:
            raise ValueError(f"components have different bidegrees {sorted(bidegs)}")
        d, k = bidegs.pop()
        for c in self.constraints:
            if c.nvars != self.nparams:
                raise ValueError("constraints must be forms in the parameters only")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "param_degree", k)
        object.__setattr__(self, "excluded", tuple(
            canonical_point(pt, self.field) for pt in self.excluded))

    @property
    def field(self) -> Field:
        return self.components[0].field

    @property
    def nvars(self) -> int:
        return self.n + 1 + self.nparams

    def __str__(self):
        from .grammar import format_poly
        nx = self.n + 1
        body = " : ".join(format_poly(c, nx) for c in self.components)
        cons = ", ".join(
            format_poly(c.embed(self.nvars, range(nx, self.nvars)), nx) for c in self.constraints)
        return f"[{body}] over {{{cons}}} params (a0..a{self.nparams - 1})"

    def canonical(self, pt: Sequence) -> tuple:
        if len(pt) != self.nparams:
            raise FamilyError(f"parameter point has {len(pt)} coordinates, expected {self.nparams}")
        c = canonical_point([self.field(x) for x in pt], self.field)
        if c is None:
            raise FamilyError("the zero vector is not a parameter point")
        return c

    def check_point(self, pt: Sequence) -> tuple:
        """Canonical form of ``pt`` after checking it lies on the base."""
        from .grammar import format_point, format_poly
        c = self.canonical(pt)
        shown = format_point(c, self.field)
        for q in self.constraints:
            if q.evaluate(c):
                cs = format_poly(q.embed(self.nvars, range(self.n + 1, self.nvars)), self.n + 1)
                raise FamilyError(f"point {shown} is off the base variety: constraint {cs} does not vanish")
        if c in self.excluded:
            raise FamilyError(f"point {shown} is excluded from the family's domain")
        return c

    def components_at(self, pt: Sequence) -> list[HomogeneousPoly]:
        nx = self.n + 1
        vals = {nx + j: v for j, v in enumerate(pt)}
        return [c.restrict(vals, range(nx)) for c in self.components]


def specialize(F: ParametricFamily, pt: Sequence) -> MapTuple:
    pt = F.check_point(pt)
    comps = F.components_at(pt)
    if not any(c.terms for c in comps):
        from .grammar import format_point
        raise FamilyError(f"every component vanishes at {format_point(pt, F.field)}; "
                          "the family is undefined there")
    return MapTuple(comps, F.d)


@dataclass(frozen=True)
class ProfileEntry:
    point: tuple
    degree: int
    is_identity: bool


@dataclass(frozen=True)
class DegreeProfile:
    entries: tuple

    def degrees(self) -> list[int]:
        return [e.degree for e in self.entries]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def profile_entry(F: ParametricFamily, pt: Sequence) -> ProfileEntry:
    t = specialize(F, pt)
    red = normalize(t).reduced
    return ProfileEntry(F.canonical(pt), red.d, is_multiple_of_identity(t) is not None)


def degree_profile(F: ParametricFamily, points: Iterable[Sequence]) -> DegreeProfile:
    return DegreeProfile(tuple(profile_entry(F, pt) for pt in points))


@dataclass(frozen=True)
class GenericReduction:
    """family = cofactor * reduced, cofactor being the gcd over k[x, a]."""

    reduced: ParametricFamily
    cofactor: HomogeneousPoly


def generic_reduction(F: ParametricFamily) -> GenericReduction:
    """Divide out the common factor of the components in k[x, a].

    Base constraints are ignored here (the gcd is taken in the free
    polynomial ring), so this can miss factors that only appear modulo
    the base ideal; that is what makes the nodal cubic family degenerate.
    """
    g = gcd_tuple(F.components)
    comps = tuple(divide_exact(c, g) if c.terms else
                  HomogeneousPoly.zero(F.field, F.nvars, c.degree - g.degree)
                  for c in F.components)
    red = ParametricFamily(F.n, F.nparams, comps, F.constraints, F.excluded)
    return GenericReduction(red, g)


def reduced_lift_at_point(F: ParametricFamily, pt: Sequence) -> MapTuple:
    """Value at ``pt`` of the generically reduced family.

    This is the value any lift of the family of constant formal degree must
    take. Where the true degree is constant it is the reduced tuple; at a
    degeneration point it keeps the extra factor, and two points with the
    same image in Bir can then receive different lift values.
    """
    pt = F.check_point(pt)
    red = generic_reduction(F).reduced
    comps = red.components_at(pt)
    if not any(c.terms for c in comps):
        from .grammar import format_point
        raise FamilyError(f"the reduced family vanishes at {format_point(pt, F.field)}")
    return MapTuple(comps, red.d)


def _subst_terms(p: HomogeneousPoly, images: Sequence[dict], nvars: int, P: int) -> dict:
    cache: dict = {}
    out: dict = {}
    for e, c in p.terms.items():
        t = {(0,) * nvars: c}
        for i, k in enumerate(e):
            if k:
                key = (i, k)
                if key not in cache:
                    acc = _one(nvars, P)
                    for _ in range(k):
                        acc = _mul(acc, images[i], P)
                    cache[key] = acc
                t = _mul(t, cache[key], P)
        out = _add(out, t, P)
    return out


def pullback(F: ParametricFamily, param_map: Sequence[HomogeneousPoly]) -> ParametricFamily:
    """Compose the family with a map of parameter spaces u -> (phi_0(u) : ... : phi_k(u))."""
    if len(param_map) != F.nparams:
        raise ValueError(f"parameter map has {len(param_map)} components, expected {F.nparams}")
    m = param_map[0].nvars
    nx = F.n + 1
    nv = nx + m
    P = F.field.p
    images = [HomogeneousPoly.var(F.field, nv, i).terms for i in range(nx)]
    images += [q.embed(nv, range(nx, nv)).terms for q in param_map]
    comps = tuple(HomogeneousPoly(F.field, nv, _subst_terms(c, images, nv, P), _trusted=True)
                  for c in F.components)
    comps = tuple(c if c.terms else HomogeneousPoly.zero(F.field, nv, F.d) for c in comps)
    cons = []
    for q in F.constraints:
        qq = HomogeneousPoly(F.field, m, _subst_terms(q, [p.terms for p in param_map], m, P),
                             _trusted=True)
        if qq.terms:
            cons.append(qq)
    return ParametricFamily(F.n, m, comps, tuple(cons))


# ---------------------------------------------------------------------------
# fixtures


def _ring(field: Field, n: int, nparams: int):
    nv = n + 1 + nparams
    vs = variables(field, nv)
    return vs[: n + 1], vs[n + 1:]


def example31_family(n: int = 2, field: Field = QQ) -> ParametricFamily:
    """(x0(a x2 + c x0) : x1(a x2 + b x0) : x2(a x2 + c x0) : ... : xn(a x2 + c x0)).

    Parameters (a:b:c) range over P^2 minus (0:1:0) and (0:0:1); the line
    b = c is sent to the identity and the rest to maps of degree 2.
    """
    if n < 2:
        raise ValueError("the family needs n >= 2")
    xs, (a, b, c) = _ring(field, n, 3)
    u = a * xs[2] + c * xs[0]
    comps = [x * u for x in xs]
    comps[1] = xs[1] * (a * xs[2] + b * xs[0])
    return ParametricFamily(n, 3, tuple(comps), (), ((0, 1, 0), (0, 0, 1)))


def nodal_cubic_family(n: int = 2, field: Field = QQ) -> ParametricFamily:
    """(x0 R : x1 S : x2 R : ... : xn R) over the cubic abc = a^3 + b^3, with
    R = a x2^2 + c x0 x2 + b x0^2 and S = a x2^2 + (b + c) x0 x2 + (a + b) x0^2."""
    if n < 2:
        raise ValueError("the family needs n >= 2")
    xs, (a, b, c) = _ring(field, n, 3)
    x0, x2 = xs[0], xs[2]
    R = a * x2 * x2 + c * x0 * x2 + b * x0 * x0
    S = a * x2 * x2 + (b + c) * x0 * x2 + (a + b) * x0 * x0
    comps = [x * R for x in xs]
    comps[1] = xs[1] * S
    pa, pb, pc = variables(field, 3)
    cubic = pa * pb * pc - pa ** 3 - pb ** 3
    return ParametricFamily(n, 3, tuple(comps), (cubic,))


def phi_parametrization(field: Field = QQ) -> tuple[HomogeneousPoly, ...]:
    """(u:v) -> (u^2 v : u v^2 : u^3 + v^3), birational onto the nodal cubic."""
    u, v = variables(field, 2)
    return (u * u * v, u * v * v, u ** 3 + v ** 3)


def phi_point(u, v, field: Field = QQ) -> tuple:
    u, v = field(u), field(v)
    pt = (u * u * v, u * v * v, u ** 3 + v ** 3)
    return canonical_point([field(x) for x in pt], field)


def phi_points(count: int, field: Field = QQ) -> list[tuple]:
    """Distinct points phi(u:v) of the cubic, starting with the node."""
    seen: list[tuple] = []
    params = [(1, 0), (0, 1)]
    h = 1
    while len(params) < 4 * count + 8:
        for u in range(-h, h + 1):
            for v in (h, -h):
                params.append((u, v))
            params.append((h, u))
        h += 1
    for u, v in params:
        if not (u or v):
            continue
        try:
            pt = phi_point(u, v, field)
        except ZeroDivisionError:
            continue
        if pt is not None and pt not in seen:
            seen.append(pt)
        if len(seen) == count:
            break
    return seen


def f_mk(m: int, k: int, n: int = 2, field: Field = QQ) -> MapTuple:
    """Homogenized x1 -> x1 + x2^m / k (identity on the other coordinates)."""
    if m < 1 or k < 1 or n < 2:
        raise ValueError("need m, k >= 1 and n >= 2")
    xs = variables(field, n + 1)
    h = xs[0] ** (m - 1)
    comps = [h * x for x in xs]
    comps[1] = comps[1] + xs[2] ** m * field(Fraction(1, k))
    return MapTuple(comps, m)


def f_m(d: int, m: int, n: int = 2, field: Field = QQ) -> MapTuple:
    """(x0 x2^(d-1) : x1 (x2^(d-1) + x0^(d-1) / m) : x2^d : x3 x2^(d-1) : ...)."""
    if d < 1 or m < 1 or n < 2:
        raise ValueError("need d, m >= 1 and n >= 2")
    xs = variables(field, n + 1)
    h = xs[2] ** (d - 1)
    comps = [x * h for x in xs]
    comps[1] = xs[1] * (h + xs[0] ** (d - 1) * field(Fraction(1, m)))
    return MapTuple(comps, d)


def f_infinity(d: int, n: int = 2, field: Field = QQ) -> MapTuple:
    """Limit of f_m as m grows: x2^(d-1) times the identity."""
    xs = variables(field, n + 1)
    h = xs[2] ** (d - 1)
    return MapTuple([x * h for x in xs], d)


def certify_profile(F: ParametricFamily, points: Iterable[Sequence]) -> list:
    """certify_birational on every specialization (None entries are failures)."""
    return [certify_birational(specialize(F, pt)) for pt in points]
