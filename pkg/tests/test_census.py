import random

import pytest

from cremona.census import (
    BudgetExceeded,
    _Kernel,
    class_count,
    class_vector,
    classify_tuple,
    enumerate_hd,
    partition_ranges,
    sample_random,
    space_dimension,
)
from cremona.fields import GF
from cremona.maps import certify_birational
from oracle import gl_count


@pytest.mark.parametrize("n, p", [(1, 2), (1, 3), (2, 2), (1, 5)])
def test_degree_one_matches_matrix_oracle(n, p):
    expected = gl_count(n, p) // (p - 1)
    r = enumerate_hd(n, 1, p)
    assert r.birational == expected
    assert r.strata == ((1, expected),)


def test_frozen_counts():
    assert enumerate_hd(2, 1, 2).birational == 168
    assert enumerate_hd(1, 1, 3).birational == 24
    # P^1: degree-d birational maps are the linear ones hidden behind a common factor
    r = enumerate_hd(1, 2, 2)
    assert r.birational == 18 and r.strata == ((1, 18),)
    assert enumerate_hd(1, 2, 3).strata == ((1, 96),)


def test_report_invariants():
    r = enumerate_hd(1, 2, 3)
    assert r.total_classes == (3 ** space_dimension(1, 2) - 1) // 2 == class_count(1, 2, 3)
    assert sum(c for _, c in r.strata) == r.birational
    assert r.examined == r.total_classes


def test_class_vectors_are_canonical_and_distinct():
    N, p = 4, 3
    seen = set()
    for i in range(class_count(1, 1, p)):
        v = class_vector(i, N, p)
        assert next(x for x in v if x) == 1
        seen.add(tuple(v))
    assert len(seen) == (p ** N - 1) // (p - 1)


@pytest.mark.parametrize("n, d, p", [(2, 1, 2), (1, 2, 3), (1, 1, 5)])
def test_partition_invariance(n, d, p):
    reports = [enumerate_hd(n, d, p, partitions=k) for k in (1, 4, 16)]
    assert reports[0] == reports[1] == reports[2]
    assert reports[0].as_dict() == reports[1].as_dict() == reports[2].as_dict()


def test_workers_do_not_change_counts():
    a = enumerate_hd(2, 1, 2, partitions=4, workers=1)
    b = enumerate_hd(2, 1, 2, partitions=4, workers=2)
    assert a == b


def test_partition_ranges_cover():
    for total in (0, 1, 7, 100):
        for k in (1, 3, 16):
            rs = partition_ranges(total, k)
            assert rs[0][0] == 0 and rs[-1][1] == total
            assert all(a[1] == b[0] for a, b in zip(rs, rs[1:]))


def test_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_hd(2, 2, 3)
    with pytest.raises(BudgetExceeded):
        enumerate_hd(2, 1, 2, budget=100)


def test_not_prime():
    with pytest.raises(ValueError):
        enumerate_hd(1, 1, 4)


class TestSample:
    def test_zero_trials(self):
        r = sample_random(2, 2, 2, 0, seed=1)
        assert r.birational == 0 and r.strata == () and r.examined == 0

    def test_full_space_matches_enumeration(self):
        total = class_count(2, 1, 2)
        s = sample_random(2, 1, 2, total, seed=5)
        e = enumerate_hd(2, 1, 2)
        assert (s.birational, s.strata) == (e.birational, e.strata)

    def test_deterministic(self):
        a = sample_random(2, 2, 2, 400, seed=11)
        b = sample_random(2, 2, 2, 400, seed=11, partitions=4)
        assert (a.birational, a.strata) == (b.birational, b.strata)
        assert a.as_dict()["rng"] == "python-random-mt19937"

    def test_too_many_trials(self):
        with pytest.raises(ValueError):
            sample_random(1, 1, 2, class_count(1, 1, 2) + 1, seed=0)

    @pytest.mark.slow
    def test_large_sample_reproducible(self):
        a = sample_random(2, 2, 3, 10_000, seed=2024)
        b = sample_random(2, 2, 3, 10_000, seed=2024)
        assert a.as_dict() == b.as_dict()
        assert a.birational > 0


@pytest.mark.parametrize("n, d, p, seed", [(2, 2, 2, 0), (2, 2, 3, 1), (1, 3, 2, 2), (2, 1, 3, 3)])
def test_kernel_agrees_with_certification(n, d, p, seed):
    rng = random.Random(seed)
    kernel = _Kernel(n, d, p)
    N = space_dimension(n, d)
    total = class_count(n, d, p)
    hits = 0
    for idx in rng.sample(range(total), 150):
        vec = class_vector(idx, N, p)
        t = kernel.tuple_of(vec)
        f = certify_birational(t)
        assert kernel.screen(vec) == (f is not None)
        hits += f is not None
    assert hits > 0 or p == 3


def test_kernel_agrees_on_known_maps():
    F2 = GF(2)
    from cremona.grammar import parse_tuple
    sigma = parse_tuple("[x1*x2 : x0*x2 : x0*x1]", F2, 2)
    assert classify_tuple(sigma) == 2
    assert classify_tuple(parse_tuple("[x0^2 : x1^2 : x2^2]", F2, 2)) is None
    assert classify_tuple(parse_tuple("[x0^2 : x0*x1 + x2^2 : x0*x2]", F2, 2)) == 2
    assert classify_tuple(parse_tuple("[x0^2 : x0*x1 : x0*x2]", F2, 2)) == 1
