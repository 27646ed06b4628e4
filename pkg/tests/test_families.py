import random

import pytest
from hypothesis import given, settings, strategies as st

from cremona.families import (
    FamilyError,
    ParametricFamily,
    certify_profile,
    degree_profile,
    example31_family,
    f_mk,
    generic_reduction,
    nodal_cubic_family,
    phi_parametrization,
    phi_point,
    phi_points,
    pullback,
    reduced_lift_at_point,
    specialize,
)
from cremona.fields import GF, QQ
from cremona.grammar import parse_tuple
from cremona.polyring import variables
from cremona.wspace import is_multiple_of_identity, normalize

EX31 = example31_family(2)
NODAL = nodal_cubic_family(2)
PULLED = pullback(NODAL, phi_parametrization())
ID2 = parse_tuple("[x0 : x1 : x2]", QQ, 2)


def T(text, n=2):
    return parse_tuple(text, QQ, n)


def ex31_points(rng, count, on_line):
    pts = []
    while len(pts) < count:
        a, b = rng.randint(-5, 5), rng.randint(-5, 5)
        c = b if on_line else rng.randint(-5, 5)
        if (b == c) != on_line or not (a or b or c):
            continue
        if a == 0 and (b == 0 or c == 0 or not on_line):
            continue
        pts.append((a, b, c))
    return pts


class TestFixtures:
    def test_example31_components(self):
        nx = 3
        xs = variables(QQ, 6)
        x0, x1, x2, a, b, c = xs
        assert EX31.components == (x0 * (a * x2 + c * x0), x1 * (a * x2 + b * x0), x2 * (a * x2 + c * x0))
        assert (EX31.d, EX31.param_degree, EX31.nparams) == (2, 1, 3)
        assert EX31.n == nx - 1

    def test_phi_on_cubic(self):
        assert phi_point(1, 1) == (1, 1, 2)
        cubic = NODAL.constraints[0]
        for pt in phi_points(30):
            assert cubic.evaluate(pt) == 0
        assert phi_points(25)[0] == (0, 0, 1)
        assert len(set(phi_points(25))) == 25

    def test_f_mk(self):
        assert f_mk(2, 1, 2) == T("[x0^2 : x0*x1 + x2^2 : x0*x2]")
        assert f_mk(3, 2, 3) == T("[x0^3 : x0^2*x1 + 1/2*x2^3 : x0^2*x2 : x0^2*x3]", 3)

    def test_fixture_errors(self):
        with pytest.raises(ValueError):
            example31_family(1)
        with pytest.raises(ValueError):
            f_mk(0, 1)

    def test_bidegree_checked(self):
        x0, x1, a0, a1 = variables(QQ, 4)
        with pytest.raises(ValueError):
            ParametricFamily(1, 2, (x0 * a0, x1 * a0 * a1))


class TestSpecialize:
    def test_example31_off_line(self):
        t = specialize(EX31, (1, 1, 0))
        assert t == T("[x0*x2 : x1*(x2+x0) : x2*x2]")
        assert normalize(t).degree == 2

    def test_example31_line_point(self):
        t = specialize(EX31, (1, 0, 0))
        assert is_multiple_of_identity(t) is not None
        assert normalize(t).reduced == ID2

    def test_example31_line_a_zero(self):
        # off L but with a = 0 the common factor is x0: a diagonal linear map
        for b, c in [(1, 2), (3, -1), (-2, 5)]:
            r = normalize(specialize(EX31, (0, b, c)))
            assert r.degree == 1 and str(r.cofactor) == "x0"
            assert r.reduced == T(f"[{c}*x0 : {b}*x1 : {c}*x2]")
            assert is_multiple_of_identity(r.reduced) is None

    def test_example31_injective_off_line(self):
        pts = ex31_points(random.Random(9), 30, on_line=False)
        pts += [(0, 1, 2), (0, 3, -1)]
        images = {normalize(specialize(EX31, pt)).reduced for pt in pts}
        assert len(images) == len({EX31.canonical(pt) for pt in pts})

    def test_example31_excluded(self):
        for pt in ((0, 1, 0), (0, 0, 1), (0, 3, 0)):
            with pytest.raises(FamilyError, match="excluded"):
                specialize(EX31, pt)

    def test_nodal_node(self):
        t = specialize(NODAL, (0, 0, 1))
        assert normalize(t).reduced == ID2
        assert str(is_multiple_of_identity(t)) == "x0*x2"

    def test_nodal_one_one_two(self):
        r = normalize(specialize(NODAL, (1, 1, 2)))
        assert r.reduced == T("[x0*(x2+x0) : x1*(x2+2*x0) : x2*(x2+x0)]")
        assert str(r.cofactor) == "x0 + x2"

    def test_off_base(self):
        with pytest.raises(FamilyError, match=r"\(1:1:1\) is off the base"):
            specialize(NODAL, (1, 1, 1))

    def test_bad_points(self):
        with pytest.raises(FamilyError):
            specialize(NODAL, (0, 0, 0))
        with pytest.raises(FamilyError):
            specialize(NODAL, (1, 1))

    def test_total_vanishing(self):
        x0, x1, a0, a1 = variables(QQ, 4)
        F = ParametricFamily(1, 2, (x0 * a0, x1 * a0))
        with pytest.raises(FamilyError, match="vanishes"):
            specialize(F, (0, 1))


class TestProfiles:
    def test_example31_off_line(self):
        pts = ex31_points(random.Random(1), 20, on_line=False)
        prof = degree_profile(EX31, pts)
        assert prof.degrees() == [2] * 20
        assert not any(e.is_identity for e in prof)

    def test_example31_line(self):
        pts = ex31_points(random.Random(2), 5, on_line=True)
        prof = degree_profile(EX31, pts)
        assert prof.degrees() == [1] * 5
        assert all(e.is_identity for e in prof)

    def test_nodal_profile(self):
        pts = phi_points(20)
        prof = degree_profile(NODAL, pts)
        assert prof.entries[0].point == (0, 0, 1)
        assert prof.degrees() == [1] + [2] * 19
        assert prof.entries[0].is_identity
        assert all(e.degree <= NODAL.d for e in prof)

    def test_every_specialization_birational(self):
        pts = ex31_points(random.Random(3), 6, False) + ex31_points(random.Random(4), 3, True)
        assert all(f is not None and f.verify() for f in certify_profile(EX31, pts))
        assert all(f is not None and f.verify() for f in certify_profile(NODAL, phi_points(8)))


class TestLifts:
    def test_constant_degree_region(self):
        for pt in ex31_points(random.Random(5), 10, on_line=False):
            lift = reduced_lift_at_point(EX31, pt)
            assert lift.d == 2
            assert lift == normalize(specialize(EX31, pt)).reduced

    def test_pullback_shape(self):
        assert PULLED.nparams == 2 and PULLED.d == 3
        g = generic_reduction(PULLED)
        u, v = variables(QQ, 5)[3:]
        x0, x2 = variables(QQ, 5)[0], variables(QQ, 5)[2]
        assert g.cofactor == (u * x0 + v * x2).monic()
        assert g.reduced.d == 2

    def test_non_liftability_witness(self):
        a = reduced_lift_at_point(PULLED, (1, 0))
        b = reduced_lift_at_point(PULLED, (0, 1))
        assert a == T("[x0*x2 : x1*x2 : x2^2]")
        assert b == T("[x0^2 : x0*x1 : x0*x2]")
        assert a != b
        assert phi_point(1, 0) == phi_point(0, 1) == (0, 0, 1)
        assert normalize(a).reduced == normalize(b).reduced == ID2


def _specialize_then_normalize_agrees(F, pt):
    """normalize(specialize) == normalize(specialize of the generic reduction)
    wherever the generic cofactor survives at pt."""
    g = generic_reduction(F)
    nx = F.n + 1
    cof = g.cofactor.restrict({nx + j: v for j, v in enumerate(F.canonical(pt))}, range(nx))
    if not cof.terms:
        return
    left = normalize(specialize(F, pt)).reduced
    right = normalize(specialize(g.reduced, pt)).reduced
    assert left == right


@settings(max_examples=30)
@given(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6))
def test_reduction_commutes_example31(a, b, c):
    if not (a or b or c) or (a == 0 and (b == 0 or c == 0)):
        return
    xs = variables(QQ, 6)
    s = xs[0] * xs[3] + xs[1] * xs[4] * 2
    scaled = ParametricFamily(2, 3, tuple(s * comp for comp in EX31.components), (), EX31.excluded)
    _specialize_then_normalize_agrees(EX31, (a, b, c))
    _specialize_then_normalize_agrees(scaled, (a, b, c))


@settings(max_examples=15)
@given(st.integers(-4, 4), st.integers(-4, 4))
def test_reduction_commutes_nodal(u, v):
    if not (u or v):
        return
    _specialize_then_normalize_agrees(NODAL, phi_point(u, v))
    _specialize_then_normalize_agrees(PULLED, (u, v))


def test_pullback_matches_nodal_values():
    for u, v in [(1, 1), (2, -1), (1, 3), (3, 2)]:
        a = normalize(specialize(PULLED, (u, v))).reduced
        b = normalize(specialize(NODAL, phi_point(u, v))).reduced
        assert a == b


def test_prime_field_family():
    F = nodal_cubic_family(2, GF(5))
    prof = degree_profile(F, phi_points(4, GF(5)))
    assert prof.degrees()[0] == 1
    assert all(d <= 2 for d in prof.degrees())
