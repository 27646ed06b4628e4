"""Exhaustive and sampled censuses of H_d over prime fields.

Every projective class of (n+1)-tuples of degree-d forms over F_p is
visited once through its canonical representative (first nonzero
coefficient 1). A fast screening kernel decides whether a class admits an
inverse certificate; every hit is then run through
:func:`cremona.maps.certify_birational`, whose certificate is re-verified by
substitution, and binned by reduced degree.
"""

from __future__ import annotations

import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Optional

from .fields import Field, is_prime
from .maps import certify_birational
from .polyring import HomogeneousPoly, monomials
from .wspace import MapTuple

DEFAULT_BUDGET = 2 ** 24
RNG_ALGORITHM = "python-random-mt19937"


class BudgetExceeded(ValueError):
    pass


class CensusMismatch(RuntimeError):
    """Screening kernel and full certification disagree on a class."""


@dataclass(frozen=True)
class CensusReport:
    n: int
    d: int
    p: int
    method: str
    total_classes: int
    examined: int
    birational: int
    strata: tuple  # ((reduced degree, count), ...) ascending
    partitions: int = field(default=1, compare=False)
    seed: Optional[int] = None
    rng: Optional[str] = None
    duration: float = field(default=0.0, compare=False)

    def stratum(self, degree: int) -> int:
        return dict(self.strata).get(degree, 0)

    def as_dict(self, timing: bool = False) -> dict:
        out = {
            "n": self.n, "d": self.d, "p": self.p, "method": self.method,
            "total_classes": self.total_classes, "examined": self.examined,
            "birational": self.birational,
            "strata": {str(k): v for k, v in self.strata},
        }
        if self.seed is not None:
            out["seed"] = self.seed
            out["rng"] = self.rng
        if timing:
            out["duration_seconds"] = round(self.duration, 3)
        return out


def space_dimension(n: int, d: int) -> int:
    """Number of coefficients of an (n+1)-tuple of degree-d forms."""
    return (n + 1) * comb(d + n, n)


def class_count(n: int, d: int, p: int) -> int:
    N = space_dimension(n, d)
    return (p ** N - 1) // (p - 1)


def class_vector(index: int, N: int, p: int) -> list[int]:
    """The index-th canonical representative (leading 1, lexicographic blocks)."""
    k = 0
    while True:
        block = p ** (N - 1 - k)
        if index < block:
            break
        index -= block
        k += 1
    vec = [0] * N
    vec[k] = 1
    pos = N - 1
    while index:
        index, r = divmod(index, p)
        vec[pos] = r
        pos -= 1
    return vec


class _Kernel:
    """Decides whether a tuple admits g with g o h = a * id, a != 0, of some
    degree e <= d^(n-1). Works on the unreduced tuple: if h = c * f then
    g(h) = c^e g(f), so the answer agrees with certification of f."""

    def __init__(self, n: int, d: int, p: int):
        self.n, self.d, self.p = n, d, p
        self.nv = nv = n + 1
        self.field = Field(p)
        self.monos_d = monomials(nv, d)
        self.dim_d = len(self.monos_d)
        self.max_e = d ** (n - 1) if d else 0
        index = {}

        def idx(k):
            if k not in index:
                index[k] = {m: i for i, m in enumerate(monomials(nv, k))}
            return index[k]

        # mult[(k1, k2)][i][j] -> index of the product monomial in degree k1 + k2
        self._idx = idx
        self._mult: dict = {}
        self._shift: dict = {}
        self._gf2: dict = {}
        self.pairs = [(i, j) for i in range(nv) for j in range(i + 1, nv)]
        self.emonos = {e: monomials(nv, e) for e in range(1, self.max_e + 1)}
        # build order for power products: (monomial, parent monomial, variable)
        self.plan = {}
        for e in range(1, self.max_e + 1):
            steps = []
            for deg in range(1, e + 1):
                for c in monomials(nv, deg):
                    i = next(k for k, x in enumerate(c) if x)
                    parent = c[:i] + (c[i] - 1,) + c[i + 1:]
                    steps.append((c, parent, i, deg))
            self.plan[e] = steps

    def mult(self, k1: int, k2: int):
        key = (k1, k2)
        if key not in self._mult:
            a, b = monomials(self.nv, k1), monomials(self.nv, k2)
            target = self._idx(k1 + k2)
            self._mult[key] = [[target[tuple(x + y for x, y in zip(ma, mb))] for mb in b] for ma in a]
        return self._mult[key]

    def shift(self, k: int):
        if k not in self._shift:
            target = self._idx(k + 1)
            self._shift[k] = [
                [target[m[:j] + (m[j] + 1,) + m[j + 1:]] for m in monomials(self.nv, k)]
                for j in range(self.nv)
            ]
        return self._shift[k]

    def _mul(self, a: dict, b: dict, ka: int, kb: int) -> dict:
        p = self.p
        mt = self.mult(ka, kb)
        r: dict = {}
        for i, x in a.items():
            row = mt[i]
            for j, y in b.items():
                t = row[j]
                r[t] = (r.get(t, 0) + x * y) % p
        return {k: v for k, v in r.items() if v}

    def components(self, vec: list[int]) -> list[dict]:
        D = self.dim_d
        return [{k: v for k, v in enumerate(vec[i * D:(i + 1) * D]) if v} for i in range(self.nv)]

    def _independent(self, comps: list[dict]) -> bool:
        p = self.p
        rows = [[c.get(k, 0) for k in range(self.dim_d)] for c in comps]
        from .linalg import rank
        return rank(rows, self.dim_d, p) == self.nv

    def screen(self, vec: list[int]) -> bool:
        if self.p == 2:
            return self._screen_gf2(vec)
        comps = self.components(vec)
        if not self._independent(comps):
            return False  # image inside a hyperplane
        p, nv, d = self.p, self.nv, self.d
        for e in range(1, self.max_e + 1):
            powers = {(0,) * nv: {0: 1}}
            for c, parent, i, deg in self.plan[e]:
                if c not in powers:
                    powers[c] = self._mul(powers[parent], comps[i], (deg - 1) * d, d)
            monos = self.emonos[e]
            dim = len(monos)
            ncols = nv * dim
            sh = self.shift(e * d)
            rows: dict = {}
            for i in range(nv):
                for k, c in enumerate(monos):
                    col = i * dim + k
                    for m, coef in powers[c].items():
                        for j in range(nv):
                            if j == i:
                                continue
                            if i < j:
                                key = (i, j, sh[j][m])
                                v = coef
                            else:
                                key = (j, i, sh[j][m])
                                v = p - coef
                            row = rows.get(key)
                            if row is None:
                                rows[key] = {col: v}
                            else:
                                row[col] = (row.get(col, 0) + v) % p
            basis = self._nullspace(rows, ncols)
            for vecg in basis:
                if self._composite_nonzero(vecg, powers, monos, e):
                    return True
            if basis:
                return False  # nonzero g with g o h = 0: h is not dominant
        return False

    # GF(2): polynomials are bitmasks over monomial indices, rows are bitmasks over unknowns

    def _gf2_tables(self, e: int):
        if e not in self._gf2:
            nv, d = self.nv, self.d
            monos = self.emonos[e]
            sh = self.shift(e * d)
            width = len(monomials(nv, e * d + 1))
            pair = {(i, j): k for k, (i, j) in enumerate(self.pairs)}
            rowids = [[tuple(pair[min(i, j), max(i, j)] * width + sh[j][m] for j in range(nv) if j != i)
                       for m in range(len(sh[0]))] for i in range(nv)]
            self._gf2[e] = (monos, rowids, len(self.pairs) * width)
        return self._gf2[e]

    def _mul_gf2(self, a: int, b: int, ka: int, kb: int) -> int:
        mt = self.mult(ka, kb)
        r = 0
        bb = _bits(b)
        for i in _bits(a):
            row = mt[i]
            for j in bb:
                r ^= 1 << row[j]
        return r

    def _screen_gf2(self, vec: list[int]) -> bool:
        nv, d, D = self.nv, self.d, self.dim_d
        comps = [sum(1 << k for k in range(D) if vec[i * D + k]) for i in range(nv)]
        if _rank_gf2(comps) < nv:
            return False  # image inside a hyperplane
        powers = {(0,) * nv: 1}
        for e in range(1, self.max_e + 1):
            for c, parent, i, deg in self.plan[e]:
                if c not in powers:
                    powers[c] = self._mul_gf2(powers[parent], comps[i], (deg - 1) * d, d)
            monos, rowids, nrows = self._gf2_tables(e)
            dim = len(monos)
            rows = [0] * nrows
            for i in range(nv):
                rid = rowids[i]
                for k, c in enumerate(monos):
                    bit = 1 << (i * dim + k)
                    for m in _bits(powers[c]):
                        for r in rid[m]:
                            rows[r] ^= bit
            basis = _nullspace_gf2_masks([r for r in rows if r], nv * dim)
            for g in basis:
                for i in range(nv):
                    acc = 0
                    for k in _bits(g >> (i * dim) & ((1 << dim) - 1)):
                        acc ^= powers[monos[k]]
                    if acc:
                        return True
            if basis:
                return False  # nonzero g with g o h = 0: h is not dominant
        return False

    def _nullspace(self, rows: dict, ncols: int) -> list[list[int]]:
        p = self.p
        if p == 2:
            masks = []
            for row in rows.values():
                m = 0
                for c, v in row.items():
                    if v:
                        m |= 1 << c
                if m:
                    masks.append(m)
            return _nullspace_gf2(masks, ncols)
        from .linalg import nullspace
        dense = []
        for row in rows.values():
            if any(row.values()):
                r = [0] * ncols
                for c, v in row.items():
                    r[c] = v
                dense.append(r)
        return nullspace(dense, ncols, p)

    def _composite_nonzero(self, vecg, powers, monos, e) -> bool:
        p = self.p
        dim = len(monos)
        for i in range(self.nv):
            acc: dict = {}
            for k, c in enumerate(monos):
                s = vecg[i * dim + k]
                if s:
                    for m, v in powers[c].items():
                        acc[m] = (acc.get(m, 0) + s * v) % p
            if any(acc.values()):
                return True
        return False

    def tuple_of(self, vec: list[int]) -> MapTuple:
        F = self.field
        D = self.dim_d
        comps = []
        for i in range(self.nv):
            terms = {self.monos_d[k]: v for k, v in enumerate(vec[i * D:(i + 1) * D]) if v}
            comps.append(HomogeneousPoly(F, self.nv, terms, self.d, _trusted=True))
        return MapTuple(comps, self.d)


def _bits(m: int) -> list[int]:
    out = []
    while m:
        low = m & -m
        out.append(low.bit_length() - 1)
        m ^= low
    return out


def _rank_gf2(masks: list[int]) -> int:
    pivots: dict = {}
    for m in masks:
        while m:
            c = m.bit_length() - 1
            r = pivots.get(c)
            if r is None:
                pivots[c] = m
                break
            m ^= r
    return len(pivots)


def _nullspace_gf2_masks(masks: list[int], ncols: int) -> list[int]:
    """Nullspace basis over GF(2), rows and vectors as bitmasks."""
    pivots: dict = {}  # leading column -> row
    for m in masks:
        while m:
            c = m.bit_length() - 1
            r = pivots.get(c)
            if r is None:
                pivots[c] = m
                break
            m ^= r
    cols = sorted(pivots)
    for a, c in enumerate(cols):
        r = pivots[c]
        for low in reversed(cols[:a]):
            if r >> low & 1:
                r ^= pivots[low]
        pivots[c] = r
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        x = 1 << f
        for c, r in pivots.items():
            if r >> f & 1:
                x |= 1 << c
        basis.append(x)
    return basis


def _nullspace_gf2(masks: list[int], ncols: int) -> list[list[int]]:
    pivots: dict = {}  # column -> reduced row mask
    for m in masks:
        for c, r in pivots.items():
            if m >> c & 1:
                m ^= r
        if not m:
            continue
        c = m.bit_length() - 1
        for c2, r in list(pivots.items()):
            if r >> c & 1:
                pivots[c2] = r ^ m
        pivots[c] = m
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        x = [0] * ncols
        x[f] = 1
        for c, r in pivots.items():
            if r >> f & 1:
                x[c] = 1
        basis.append(x)
    return basis


def _classify(kernel: _Kernel, vec: list[int]) -> Optional[int]:
    """Reduced degree of a birational class, or None."""
    if not kernel.screen(vec):
        return None
    # certify_birational re-checks both compositions by substitution (CremonaMap.from_pair)
    f = certify_birational(kernel.tuple_of(vec))
    if f is None:
        raise CensusMismatch(f"screening accepted {kernel.tuple_of(vec)} but certification failed")
    return f.degree


def _run_range(args) -> Counter:
    n, d, p, start, stop = args
    kernel = _Kernel(n, d, p)
    N = space_dimension(n, d)
    counts: Counter = Counter()
    for idx in range(start, stop):
        deg = _classify(kernel, class_vector(idx, N, p))
        if deg is not None:
            counts[deg] += 1
    return counts


def _run_indices(args) -> Counter:
    n, d, p, indices = args
    kernel = _Kernel(n, d, p)
    N = space_dimension(n, d)
    counts: Counter = Counter()
    for idx in indices:
        deg = _classify(kernel, class_vector(idx, N, p))
        if deg is not None:
            counts[deg] += 1
    return counts


def _check_args(n: int, d: int, p: int):
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")


def partition_ranges(total: int, partitions: int) -> list[tuple[int, int]]:
    if partitions < 1:
        raise ValueError("need at least one partition")
    step, extra = divmod(total, partitions)
    out, start = [], 0
    for i in range(partitions):
        stop = start + step + (1 if i < extra else 0)
        out.append((start, stop))
        start = stop
    return out


def _map(fn, jobs: list, workers: int):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, jobs))


def _merge(parts) -> Counter:
    total: Counter = Counter()
    for c in parts:
        total.update(c)
    return total


def enumerate_hd(n: int, d: int, p: int, partitions: int = 1, workers: int = 1,
                 budget: int = DEFAULT_BUDGET) -> CensusReport:
    """Count the birational classes of W_d(F_p), stratified by reduced degree.

    The class range is cut into ``partitions`` contiguous chunks, run on up to
    ``workers`` processes; counts are merged by addition, so the report does
    not depend on either number.
    """
    _check_args(n, d, p)
    total = class_count(n, d, p)
    if total > budget:
        raise BudgetExceeded(f"{total} classes exceed the budget of {budget}")
    t0 = time.perf_counter()
    jobs = [(n, d, p, a, b) for a, b in partition_ranges(total, partitions)]
    counts = _merge(_map(_run_range, jobs, workers))
    return CensusReport(
        n=n, d=d, p=p, method="enumerate", total_classes=total, examined=total,
        birational=sum(counts.values()), strata=tuple(sorted(counts.items())),
        partitions=partitions, duration=time.perf_counter() - t0)


def sample_random(n: int, d: int, p: int, trials: int, seed: int, partitions: int = 1,
                  workers: int = 1) -> CensusReport:
    """Census over ``trials`` distinct classes drawn without replacement."""
    _check_args(n, d, p)
    total = class_count(n, d, p)
    if trials < 0 or trials > total:
        raise ValueError(f"trials must lie in [0, {total}]")
    t0 = time.perf_counter()
    rng = random.Random(seed)
    picks = sorted(rng.sample(range(total), trials))
    jobs = [(n, d, p, picks[a:b]) for a, b in partition_ranges(trials, partitions)]
    counts = _merge(_map(_run_indices, jobs, workers))
    return CensusReport(
        n=n, d=d, p=p, method="sample", total_classes=total, examined=trials,
        birational=sum(counts.values()), strata=tuple(sorted(counts.items())),
        partitions=partitions, seed=seed, rng=RNG_ALGORITHM,
        duration=time.perf_counter() - t0)


def classify_tuple(t: MapTuple) -> Optional[int]:
    """Reduced degree of a birational tuple through the screening kernel."""
    kernel = _Kernel(t.n, t.d, t.field.p)
    vec = t.coefficient_vector()
    return _classify(kernel, list(vec))
