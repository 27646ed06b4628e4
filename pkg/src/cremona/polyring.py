"""Sparse homogeneous polynomials in x_0..x_n over Q or F_p.

Terms are stored as a dict mapping exponent tuples to nonzero field
elements. The global monomial order is graded lexicographic with
x_0 > x_1 > ... > x_n; since every polynomial here is homogeneous this is
plain lex on the exponent tuple.

The ``_``-prefixed helpers work on raw term dicts and are shared with the
linear-algebra heavy modules; they never check homogeneity.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from itertools import combinations_with_replacement
from math import lcm
from typing import Iterable, Sequence

from .fields import Field

Terms = dict  # exponent tuple -> coefficient


class ArityError(ValueError):
    """Operands live in polynomial rings with different numbers of variables."""


class DegreeError(ValueError):
    """Operands have incompatible degrees."""


class NotDivisibleError(ArithmeticError):
    """Exact division requested but the divisor does not divide."""


class NonHomogeneousError(ValueError):
    pass


# ---------------------------------------------------------------------------
# raw term-dict kernels


def _clean(terms: Terms, p: int) -> Terms:
    if p:
        return {e: c % p for e, c in terms.items() if c % p}
    return {e: c for e, c in terms.items() if c}


def _add(a: Terms, b: Terms, p: int) -> Terms:
    r = dict(a)
    for e, c in b.items():
        v = r.get(e, 0) + c
        if p:
            v %= p
        if v:
            r[e] = v
        else:
            r.pop(e, None)
    return r


def _sub(a: Terms, b: Terms, p: int) -> Terms:
    r = dict(a)
    for e, c in b.items():
        v = r.get(e, 0) - c
        if p:
            v %= p
        if v:
            r[e] = v
        else:
            r.pop(e, None)
    return r


def _scale(a: Terms, s, p: int) -> Terms:
    if not s:
        return {}
    if p:
        return {e: c * s % p for e, c in a.items()}
    return {e: c * s for e, c in a.items()}


def _mul(a: Terms, b: Terms, p: int) -> Terms:
    if len(a) > len(b):
        a, b = b, a
    r: Terms = {}
    get = r.get
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple([x + y for x, y in zip(ea, eb)])
            r[e] = get(e, 0) + ca * cb
    return _clean(r, p)


def _mono_mul(a: Terms, mono: tuple, coeff, p: int) -> Terms:
    r = {}
    for e, c in a.items():
        v = c * coeff
        if p:
            v %= p
        if v:
            r[tuple([x + y for x, y in zip(e, mono)])] = v
    return r


def _inv(c, p: int):
    return pow(c, -1, p) if p else 1 / c


def _lead(a: Terms):
    """Leading (exponent, coefficient) in graded lex order."""
    e = max(a, key=lambda t: (sum(t), t))
    return e, a[e]


def _monic(a: Terms, p: int) -> Terms:
    if not a:
        return a
    _, c = _lead(a)
    if c == 1:
        return a
    return _scale(a, _inv(c, p), p)


def _divexact(a: Terms, b: Terms, p: int) -> Terms:
    """Quotient a / b; raises NotDivisibleError when b does not divide a."""
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    q: Terms = {}
    r = dict(a)
    eb, cb = _lead(b)
    icb = _inv(cb, p)
    key = lambda t: (sum(t), t)
    while r:
        er = max(r, key=key)
        diff = tuple(x - y for x, y in zip(er, eb))
        if min(diff) < 0:
            raise NotDivisibleError("divisor does not divide dividend")
        c = r[er] * icb
        if p:
            c %= p
        q[diff] = c
        r = _sub(r, _mono_mul(b, diff, c, p), p)
    return q


def _vars_of(a: Terms) -> set:
    s = set()
    for e in a:
        for i, x in enumerate(e):
            if x:
                s.add(i)
    return s


def _deg_in(a: Terms, v: int) -> int:
    return max((e[v] for e in a), default=-1)


def _coeffs_in(a: Terms, v: int) -> dict:
    """Split ``a`` as sum_j c_j * x_v^j; returns {j: c_j} with x_v removed."""
    out: dict = {}
    for e, c in a.items():
        j = e[v]
        if j:
            e = e[:v] + (0,) + e[v + 1:]
        out.setdefault(j, {})[e] = c
    return out


def _one(nvars: int, p: int) -> Terms:
    from fractions import Fraction
    return {(0,) * nvars: 1 if p else Fraction(1)}


def _content_in(a: Terms, v: int, nvars: int, p: int) -> Terms:
    g: Terms = {}
    for c in sorted(_coeffs_in(a, v).values(), key=len):
        g = _gcd(g, c, nvars, p)
        if len(g) == 1 and not any(next(iter(g))):
            break
    return g


def _prem(a: Terms, b: Terms, v: int, p: int) -> Terms:
    """Pseudo-remainder of a by b, both viewed as polynomials in x_v."""
    db = _deg_in(b, v)
    lb = _coeffs_in(b, v)[db]
    r = a
    while r:
        dr = _deg_in(r, v)
        if dr < db:
            break
        lr = _coeffs_in(r, v)[dr]
        shift = [0] * len(next(iter(b)))
        shift[v] = dr - db
        r = _sub(_mul(r, lb, p), _mul(_mono_mul(b, tuple(shift), 1, p), lr, p), p)
    return r


def _is_const(a: Terms) -> bool:
    return len(a) == 1 and not any(next(iter(a)))


def _gcd(a: Terms, b: Terms, nvars: int, p: int) -> Terms:
    """Monic gcd by recursive content / primitive-part reduction.

    The primitive parts are run through a primitive polynomial remainder
    sequence in the highest-index variable; contents recurse on the
    coefficient polynomials, which involve strictly fewer variables.
    """
    if not a:
        return _monic(b, p)
    if not b:
        return _monic(a, p)
    if _is_const(a) or _is_const(b):
        return _one(nvars, p)
    va, vb = _vars_of(a), _vars_of(b)
    v = max(va | vb)
    if v not in va:
        return _gcd(a, _content_in(b, v, nvars, p), nvars, p)
    if v not in vb:
        return _gcd(_content_in(a, v, nvars, p), b, nvars, p)
    ca = _content_in(a, v, nvars, p)
    cb = _content_in(b, v, nvars, p)
    c = _gcd(ca, cb, nvars, p)
    r0 = _divexact(a, ca, p)
    r1 = _divexact(b, cb, p)
    if _deg_in(r0, v) < _deg_in(r1, v):
        r0, r1 = r1, r0
    while True:
        r = _prem(r0, r1, v, p)
        if not r:
            break
        if _deg_in(r, v) == 0:
            r1 = {}
            break
        r = _monic(_divexact(r, _content_in(r, v, nvars, p), p), p)
        r0, r1 = r1, r
    if not r1:
        return _monic(c, p)
    g = _divexact(r1, _content_in(r1, v, nvars, p), p)
    return _monic(_mul(c, g, p), p)


# ---------------------------------------------------------------------------


def monomials(nvars: int, d: int) -> list[tuple]:
    """Exponent tuples of degree d in ``nvars`` variables, descending grlex."""
    if d < 0:
        return []
    out = []
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


class HomogeneousPoly:
    """Immutable homogeneous polynomial.

    The zero polynomial has no terms and keeps the nominal ``degree`` it was
    built with, so a degree-d slot of a tuple can hold zero.
    """

    __slots__ = ("field", "nvars", "terms", "degree", "_hash")

    def __init__(self, field: Field, nvars: int, terms: Terms | None = None,
                 degree: int | None = None, *, _trusted: bool = False):
        if terms is None:
            terms = {}
        if not _trusted:
            terms = {tuple(e): field(c) for e, c in terms.items()}
            terms = {e: c for e, c in terms.items() if c}
            for e in terms:
                if len(e) != nvars or min(e, default=0) < 0:
                    raise ArityError(f"exponent {e} does not fit {nvars} variables")
        if terms:
            degs = {sum(e) for e in terms}
            if len(degs) != 1:
                raise NonHomogeneousError(f"terms of degrees {sorted(degs)} mixed")
            d = degs.pop()
            if degree is not None and degree != d:
                raise DegreeError(f"declared degree {degree} but terms have degree {d}")
            degree = d
        elif degree is None:
            degree = 0
        self.field = field
        self.nvars = nvars
        self.terms = terms
        self.degree = degree
        self._hash = None

    # constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, field: Field, nvars: int, degree: int = 0) -> "HomogeneousPoly":
        return cls(field, nvars, {}, degree, _trusted=True)

    @classmethod
    def one(cls, field: Field, nvars: int) -> "HomogeneousPoly":
        return cls(field, nvars, {(0,) * nvars: field.one}, 0, _trusted=True)

    @classmethod
    def constant(cls, field: Field, nvars: int, c) -> "HomogeneousPoly":
        c = field(c)
        return cls(field, nvars, {(0,) * nvars: c} if c else {}, 0, _trusted=True)

    @classmethod
    def var(cls, field: Field, nvars: int, i: int) -> "HomogeneousPoly":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls(field, nvars, {tuple(e): field.one}, 1, _trusted=True)

    @classmethod
    def monomial(cls, field: Field, exps: Sequence[int], coeff=1) -> "HomogeneousPoly":
        return cls(field, len(exps), {tuple(exps): coeff})

    def _new(self, terms: Terms, degree: int) -> "HomogeneousPoly":
        return HomogeneousPoly(self.field, self.nvars, terms, degree, _trusted=True)

    # basic protocol ---------------------------------------------------------

    @property
    def n(self) -> int:
        return self.nvars - 1

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, HomogeneousPoly):
            return (self.field == other.field and self.nvars == other.nvars
                    and self.terms == other.terms)
        if not self.terms and other == 0:
            return True
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        from .grammar import format_poly
        return f"HomogeneousPoly({format_poly(self)!r}, {self.field})"

    def __str__(self):
        from .grammar import format_poly
        return format_poly(self)

    def sorted_terms(self) -> list[tuple[tuple, object]]:
        """Terms in descending monomial order."""
        return sorted(self.terms.items(), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms)
        return e, self.terms[e]

    def monic(self) -> "HomogeneousPoly":
        if not self.terms:
            return self
        return self._new(_monic(self.terms, self.field.p), self.degree)

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), self.field.zero)

    def coefficient_vector(self, basis: Sequence[tuple]) -> list:
        z = self.field.zero
        return [self.terms.get(e, z) for e in basis]

    def variables(self) -> set[int]:
        return _vars_of(self.terms)

    # arithmetic -------------------------------------------------------------

    def _check_ring(self, other: "HomogeneousPoly"):
        if self.nvars != other.nvars:
            raise ArityError(f"{self.nvars} vs {other.nvars} variables")
        if self.field != other.field:
            raise ArityError(f"fields {self.field} and {other.field} differ")

    def __add__(self, other):
        if not isinstance(other, HomogeneousPoly):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other):
        if not isinstance(other, HomogeneousPoly):
            return NotImplemented
        return add(self, -other)

    def __neg__(self):
        return self._new(_scale(self.terms, self.field(-1), self.field.p), self.degree)

    def __mul__(self, other):
        if isinstance(other, HomogeneousPoly):
            return mul(self, other)
        s = self.field(other)
        return self._new(_scale(self.terms, s, self.field.p), self.degree)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        r = HomogeneousPoly.one(self.field, self.nvars)
        base = self
        while k:
            if k & 1:
                r = r * base
            base = base * base
            k >>= 1
        return r

    def __truediv__(self, other):
        if isinstance(other, HomogeneousPoly):
            return divide_exact(self, other)
        return self * self.field.inv(self.field(other))

    # calculus / evaluation --------------------------------------------------

    def derivative(self, i: int) -> "HomogeneousPoly":
        return partial_derivative(self, i)

    def substitute(self, f: Sequence["HomogeneousPoly"]) -> "HomogeneousPoly":
        return substitute(self, f)

    def __call__(self, *point):
        return self.evaluate(point)

    def evaluate(self, point: Sequence):
        if len(point) != self.nvars:
            raise ArityError(f"point has {len(point)} coordinates, expected {self.nvars}")
        F = self.field
        p = F.p
        pt = [F(x) for x in point]
        total = F.zero
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v = v * x ** k
            total += v
        return total % p if p else total

    def restrict(self, values: dict[int, object], keep: Sequence[int]) -> "HomogeneousPoly":
        """Plug ``values`` into some variables and re-index onto ``keep``.

        Every variable must be either assigned or kept. The result is
        homogeneous when the assigned and kept blocks are graded separately
        (bihomogeneous input), which is how families use it.
        """
        F = self.field
        p = F.p
        vals = {i: F(v) for i, v in values.items()}
        out: Terms = {}
        for e, c in self.terms.items():
            v = c
            for i, x in vals.items():
                if e[i]:
                    v = v * x ** e[i]
            if not v:
                continue
            k = tuple(e[i] for i in keep)
            out[k] = out.get(k, 0) + v
        out = _clean(out, p)
        if out:
            return HomogeneousPoly(F, len(keep), out, _trusted=True)
        kd = {sum(e[i] for i in keep) for e in self.terms}
        return HomogeneousPoly.zero(F, len(keep), kd.pop() if len(kd) == 1 else 0)

    def embed(self, nvars: int, positions: Sequence[int]) -> "HomogeneousPoly":
        """Re-index variable i onto ``positions[i]`` in a ring of ``nvars`` variables."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * nvars
            for i, k in enumerate(e):
                ne[positions[i]] += k
            out[tuple(ne)] = c
        return HomogeneousPoly(self.field, nvars, out, self.degree, _trusted=True)


Poly = HomogeneousPoly


def _compatible_degree(p: HomogeneousPoly, q: HomogeneousPoly):
    if p.terms and q.terms and p.degree != q.degree:
        raise DegreeError(f"degrees {p.degree} and {q.degree} differ")


def add(p: HomogeneousPoly, q: HomogeneousPoly) -> HomogeneousPoly:
    p._check_ring(q)
    _compatible_degree(p, q)
    d = p.degree if p.terms else q.degree
    return p._new(_add(p.terms, q.terms, p.field.p), d)


def mul(p: HomogeneousPoly, q: HomogeneousPoly) -> HomogeneousPoly:
    p._check_ring(q)
    return p._new(_mul(p.terms, q.terms, p.field.p), p.degree + q.degree)


def partial_derivative(p: HomogeneousPoly, i: int) -> HomogeneousPoly:
    if not 0 <= i < p.nvars:
        raise IndexError(f"variable index {i} out of range 0..{p.nvars - 1}")
    F = p.field
    out = {}
    for e, c in p.terms.items():
        k = e[i]
        if k:
            out[e[:i] + (k - 1,) + e[i + 1:]] = c * k
    return p._new(_clean(out, F.p), max(p.degree - 1, 0))


def _check_tuple(f: Sequence[HomogeneousPoly], nvars: int | None = None) -> int:
    """Common degree of a tuple of polynomials (zero slots are compatible)."""
    if not f:
        raise ArityError("empty tuple")
    F, nv = f[0].field, f[0].nvars
    if nvars is not None and nv != nvars:
        raise ArityError(f"tuple lives in {nv} variables, expected {nvars}")
    degs = set()
    for g in f:
        if g.nvars != nv or g.field != F:
            raise ArityError("tuple components live in different rings")
        if g.terms:
            degs.add(g.degree)
    if len(degs) > 1:
        raise DegreeError(f"tuple components have degrees {sorted(degs)}")
    return degs.pop() if degs else f[0].degree


def substitute(p: HomogeneousPoly, f: Sequence[HomogeneousPoly]) -> HomogeneousPoly:
    """p(f_0, ..., f_n): plug a tuple of common degree d into p (degree e*d)."""
    if len(f) != p.nvars:
        raise ArityError(f"substituting {len(f)} polynomials into {p.nvars} variables")
    d = _check_tuple(f)
    F = f[0].field
    if F != p.field:
        raise ArityError("fields differ")
    P = F.p
    nv = f[0].nvars
    images = [q.terms for q in f]
    pterms = p.terms
    scale = 1
    if not P:
        # clear denominators and work over Z: p(f) = (M p)(L f) / (M L^e)
        L = _denominator_lcm(images)
        M = _denominator_lcm([pterms])
        images = [{e: int(c * L) for e, c in t.items()} for t in images]
        pterms = {e: int(c * M) for e, c in pterms.items()}
        scale = M * L ** p.degree
    cache: dict = {}

    def power(i, k):
        key = (i, k)
        if key not in cache:
            if k == 0:
                cache[key] = _one(nv, P)
            elif k == 1:
                cache[key] = images[i]
            else:
                cache[key] = _mul(power(i, k - 1), images[i], P)
        return cache[key]

    out: Terms = {}
    for e, c in pterms.items():
        t = {(0,) * nv: c}
        for i, k in enumerate(e):
            if k:
                t = _mul(t, power(i, k), P)
                if not t:
                    break
        out = _add(out, t, P)
    if not P:
        out = {e: Fraction(c, scale) for e, c in out.items()}
    return HomogeneousPoly(F, nv, out, p.degree * d, _trusted=True)


def _denominator_lcm(term_dicts) -> int:
    L = 1
    for t in term_dicts:
        for c in t.values():
            L = lcm(L, Fraction(c).denominator)
    return L


def gcd(p: HomogeneousPoly, q: HomogeneousPoly) -> HomogeneousPoly:
    return gcd_tuple([p, q])


def gcd_tuple(polys: Iterable[HomogeneousPoly]) -> HomogeneousPoly:
    """Monic (leading coefficient 1) gcd of a list of homogeneous polynomials."""
    polys = list(polys)
    if not polys:
        raise ValueError("gcd of an empty list")
    first = polys[0]
    for g in polys[1:]:
        first._check_ring(g)
    nz = sorted((g for g in polys if g.terms), key=lambda g: (g.degree, len(g.terms)))
    if not nz:
        raise ValueError("gcd of all-zero polynomials is undefined")
    P, nv = first.field.p, first.nvars
    g = _monic(nz[0].terms, P)
    for h in nz[1:]:
        if _is_const(g):
            break
        g = _gcd(g, h.terms, nv, P)
    d = sum(next(iter(g)))
    return HomogeneousPoly(first.field, nv, g, d, _trusted=True)


def divide_exact(p: HomogeneousPoly, q: HomogeneousPoly) -> HomogeneousPoly:
    p._check_ring(q)
    if not q.terms:
        raise ZeroDivisionError("division by the zero polynomial")
    if not p.terms:
        return p._new({}, max(p.degree - q.degree, 0))
    return p._new(_divexact(p.terms, q.terms, p.field.p), p.degree - q.degree)


def jacobian_matrix(f: Sequence[HomogeneousPoly]) -> list[list[HomogeneousPoly]]:
    return [[partial_derivative(fi, j) for j in range(fi.nvars)] for fi in f]


def jacobian_det(f: Sequence[HomogeneousPoly]) -> HomogeneousPoly:
    """det(d f_i / d x_j) by fraction-free (Bareiss) elimination over k[x]."""
    if not f:
        raise ArityError("empty tuple")
    nv = f[0].nvars
    if len(f) != nv:
        raise ArityError(f"jacobian needs {nv} components, got {len(f)}")
    d = _check_tuple(f)
    if d < 1 and any(g.terms for g in f):
        raise DegreeError("jacobian of a constant tuple")
    F, P = f[0].field, f[0].field.p
    out_deg = nv * (d - 1)
    M = [[g.terms for g in row] for row in jacobian_matrix(f)]
    size = nv
    sign = 1
    prev = _one(nv, P)
    for k in range(size - 1):
        if not M[k][k]:
            for r in range(k + 1, size):
                if M[r][k]:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return HomogeneousPoly.zero(F, nv, out_deg)
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                num = _sub(_mul(M[k][k], M[i][j], P), _mul(M[i][k], M[k][j], P), P)
                M[i][j] = _divexact(num, prev, P) if num else {}
            M[i][k] = {}
        prev = M[k][k]
    det = M[size - 1][size - 1]
    if sign < 0:
        det = _scale(det, F(-1), P)
    return HomogeneousPoly(F, nv, det, out_deg, _trusted=True)


def variables(field: Field, nvars: int) -> list[HomogeneousPoly]:
    return [HomogeneousPoly.var(field, nvars, i) for i in range(nvars)]


def linear_form(field: Field, coeffs: Sequence) -> HomogeneousPoly:
    nv = len(coeffs)
    return HomogeneousPoly(field, nv, {
        tuple(1 if j == i else 0 for j in range(nv)): c for i, c in enumerate(coeffs)
    }, 1)


def product(polys: Iterable[HomogeneousPoly]) -> HomogeneousPoly:
    return reduce(mul, polys)
