import random
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from cremona.fields import QQ, GF
from cremona.polyring import HomogeneousPoly, monomials
from cremona.wspace import MapTuple

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polys(draw, nvars=3, degree=None, field=QQ, max_terms=4):
    d = draw(st.integers(0, 3)) if degree is None else degree
    monos = monomials(nvars, d)
    chosen = draw(st.lists(st.sampled_from(monos), max_size=max_terms, unique=True))
    if field.is_rational:
        coeffs = draw(st.lists(small_rationals, min_size=len(chosen), max_size=len(chosen)))
    else:
        coeffs = draw(st.lists(st.integers(0, field.p - 1), min_size=len(chosen), max_size=len(chosen)))
    return HomogeneousPoly(field, nvars, dict(zip(chosen, coeffs)), d)


def random_tuple(rng: random.Random, n: int, d: int, field=QQ, density=0.5) -> MapTuple:
    monos = monomials(n + 1, d)
    while True:
        comps = []
        for _ in range(n + 1):
            terms = {m: Fraction(rng.randint(-3, 3)) if field.is_rational else rng.randrange(field.p)
                     for m in monos if rng.random() < density}
            comps.append(HomogeneousPoly(field, n + 1, terms, d))
        if any(c.terms for c in comps):
            return MapTuple(comps, d)


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def F2():
    return GF(2)


# acceptance reporting: tests marked criterion(number, title) get one summary line each

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if rep.when == "call" or (rep.failed and number not in _CRITERIA):
        _CRITERIA[number] = (title, rep.passed and rep.when == "call", getattr(item, "detail", ""))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok, detail = _CRITERIA[number]
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)


@pytest.fixture
def detail(request):
    """Attach a short result string to the acceptance summary line."""
    def put(text: str):
        request.node.detail = text
    return put
