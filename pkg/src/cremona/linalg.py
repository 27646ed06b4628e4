"""Exact dense linear algebra over Q and F_p.

Over Q the forward pass is fraction-free (Bareiss): rows are first scaled
to integers, and every elimination step divides exactly by the previous
pivot, which keeps entry growth polynomial. Over F_p it is ordinary
Gaussian elimination. Pivots are chosen by fixed column order, so results
are deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence


def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for r in rows:
        den = 1
        for x in r:
            if x:
                den = lcm(den, Fraction(x).denominator)
        out.append([int(Fraction(x) * den) for x in r])
    return out


def _bareiss_echelon(M: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form; returns (rows, pivot columns)."""
    M = [r[:] for r in M]
    m = len(M)
    pivots: list[int] = []
    prev = 1
    row = 0
    for col in range(ncols):
        if row >= m:
            break
        sel = next((i for i in range(row, m) if M[i][col]), None)
        if sel is None:
            continue
        if sel != row:
            M[row], M[sel] = M[sel], M[row]
        pr = M[row]
        pv = pr[col]
        for i in range(row + 1, m):
            ri = M[i]
            f = ri[col]
            if f:
                for j in range(col + 1, ncols):
                    ri[j] = (pv * ri[j] - f * pr[j]) // prev
            else:
                for j in range(col + 1, ncols):
                    ri[j] = (pv * ri[j]) // prev
            ri[col] = 0
        prev = pv
        pivots.append(col)
        row += 1
    return M[:row], pivots


def _rref_mod_p(rows: Sequence[Sequence[int]], ncols: int, p: int) -> tuple[list[list[int]], list[int]]:
    M = [[x % p for x in r] for r in rows]
    m = len(M)
    pivots = []
    row = 0
    for col in range(ncols):
        if row >= m:
            break
        sel = next((i for i in range(row, m) if M[i][col]), None)
        if sel is None:
            continue
        M[row], M[sel] = M[sel], M[row]
        inv = pow(M[row][col], -1, p)
        pr = [x * inv % p for x in M[row]]
        M[row] = pr
        for i in range(m):
            if i != row:
                f = M[i][col]
                if f:
                    ri = M[i]
                    for j in range(col, ncols):
                        if pr[j]:
                            ri[j] = (ri[j] - f * pr[j]) % p
        pivots.append(col)
        row += 1
    return M[:row], pivots


def _nullspace_from_echelon_q(E: list[list[int]], pivots: list[int], ncols: int) -> list[list[Fraction]]:
    # back substitution on the integer echelon form
    free = [j for j in range(ncols) if j not in set(pivots)]
    basis = []
    for fcol in free:
        x = [Fraction(0)] * ncols
        x[fcol] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            row = E[r]
            s = sum((row[j] * x[j] for j in range(c + 1, ncols) if row[j] and x[j]), Fraction(0))
            x[c] = -s / row[c]
        basis.append(x)
    return basis


def nullspace(rows: Sequence[Sequence], ncols: int, p: int = 0) -> list[list]:
    """Basis of {x : A x = 0}, one vector per free column (that entry is 1)."""
    if ncols == 0:
        return []
    if p:
        R, pivots = _rref_mod_p(rows, ncols, p)
        pset = set(pivots)
        basis = []
        for fcol in (j for j in range(ncols) if j not in pset):
            x = [0] * ncols
            x[fcol] = 1
            for r, c in enumerate(pivots):
                x[c] = -R[r][fcol] % p
            basis.append(x)
        return basis
    E, pivots = _bareiss_echelon(_integer_rows(rows), ncols)
    return _nullspace_from_echelon_q(E, pivots, ncols)


def rank(rows: Sequence[Sequence], ncols: int, p: int = 0) -> int:
    if p:
        return len(_rref_mod_p(rows, ncols, p)[1])
    return len(_bareiss_echelon(_integer_rows(rows), ncols)[1])


def det(M: Sequence[Sequence], p: int = 0):
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1) if p == 0 else 1
    if p:
        A = [[x % p for x in r] for r in M]
        d = 1
        for c in range(n):
            sel = next((i for i in range(c, n) if A[i][c]), None)
            if sel is None:
                return 0
            if sel != c:
                A[c], A[sel] = A[sel], A[c]
                d = -d
            d = d * A[c][c] % p
            inv = pow(A[c][c], -1, p)
            for i in range(c + 1, n):
                f = A[i][c] * inv % p
                if f:
                    A[i] = [(a - f * b) % p for a, b in zip(A[i], A[c])]
        return d % p
    dens = []
    for r in M:
        den = 1
        for x in r:
            den = lcm(den, Fraction(x).denominator)
        dens.append(den)
    A = [[int(Fraction(x) * dn) for x in r] for r, dn in zip(M, dens)]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not A[k][k]:
            sel = next((i for i in range(k + 1, n) if A[i][k]), None)
            if sel is None:
                return Fraction(0)
            A[k], A[sel] = A[sel], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[k][k] * A[i][j] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    total_den = 1
    for dn in dens:
        total_den *= dn
    return Fraction(sign * A[n - 1][n - 1], total_den)


def solve(A: Sequence[Sequence], b: Sequence, p: int = 0) -> list:
    """Unique solution of a square nonsingular system A x = b."""
    n = len(A)
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    if p:
        R, piv = _rref_mod_p(aug, n + 1, p)
        if piv != list(range(n)):
            raise ValueError("singular system")
        return [R[i][n] for i in range(n)]
    M = [[Fraction(x) for x in r] for r in aug]
    for c in range(n):
        sel = next((i for i in range(c, n) if M[i][c]), None)
        if sel is None:
            raise ValueError("singular system")
        M[c], M[sel] = M[sel], M[c]
        pv = M[c][c]
        M[c] = [x / pv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * bb for a, bb in zip(M[i], M[c])]
    return [M[i][n] for i in range(n)]


def inverse(M: Sequence[Sequence], p: int = 0) -> list[list]:
    n = len(M)
    cols = [solve(M, [1 if i == j else 0 for i in range(n)], p) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]
