"""Integer and modular diagonalisation for finite abelian group computations.

Two routes live here.  ``smith_normal_form`` is an exact integer algorithm
in pure Python for small matrices and tests.  ``diagonalize_mod`` works over
Z/E with numpy and is what the cohomology engine uses: whenever E kills
every group in sight, the cokernel of an integer matrix only depends on the
matrix modulo E.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import NamedTuple

import numpy as np

from .errors import InternalError, ShapeError


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def smith_normal_form(A):
    """Exact integer Smith form: returns (U, D, V) with U*A*V = D.

    U and V are unimodular; D is diagonal with d1 | d2 | ... and nonnegative
    entries.  Pivots are chosen by smallest absolute value, then lowest index.
    """
    D = [list(map(int, row)) for row in A]
    m = len(D)
    n = len(D[0]) if m else 0
    if any(len(r) != n for r in D):
        raise ShapeError("ragged matrix")
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst += q * row src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for k in range(min(m, n)):
        while True:
            best = None
            for i in range(k, m):
                for j in range(k, n):
                    v = abs(D[i][j])
                    if v and (best is None or v < best[0]):
                        best = (v, i, j)
            if best is None:
                break
            _, i, j = best
            swap_rows(k, i)
            swap_cols(k, j)
            p = D[k][k]
            done = True
            for i in range(k + 1, m):
                if D[i][k]:
                    add_row(i, k, -(D[i][k] // p))
                    if D[i][k]:
                        done = False
            for j in range(k + 1, n):
                if D[k][j]:
                    add_col(j, k, -(D[k][j] // p))
                    if D[k][j]:
                        done = False
            if not done:
                continue
            # divisibility: fold an offending row into row k and start over
            bad = next(((i, j) for i in range(k + 1, m) for j in range(k + 1, n) if D[i][j] % p), None)
            if bad is None:
                break
            add_row(k, bad[0], 1)
        if D[k][k] < 0:
            D[k] = [-x for x in D[k]]
            U[k] = [-x for x in U[k]]
    return U, D, V


def diagonal(D) -> list[int]:
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


class DiagonalForm(NamedTuple):
    orders: list  # cyclic orders of the cokernel, one per row
    pivots: list
    U: np.ndarray | None
    V: np.ndarray | None


def diagonalize_mod(M, E: int, track_u: bool = False, track_v: bool = False) -> DiagonalForm:
    """Diagonalise an integer matrix over Z/E.

    U*M*V is congruent to diag(pivots) mod E.  orders[i] = gcd(pivot_i, E),
    and E for rows past the rank, so the cokernel of M on (Z/E)^rows is the
    direct sum of the Z/orders[i].
    """
    A = np.array(M, dtype=np.int64) % E
    if A.ndim != 2:
        raise ShapeError("expected a 2-d matrix")
    m, n = A.shape
    U = np.eye(m, dtype=np.int64) if track_u else None
    V = np.eye(n, dtype=np.int64) if track_v else None
    pivots = []
    for k in range(min(m, n)):
        sub = A[k:, k:]
        nz = np.argwhere(sub != 0)
        if len(nz) == 0:
            break
        while True:
            sub = A[k:, k:]
            vals = np.where(sub != 0, sub, E + 1)
            i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
            if vals[i, j] > E:
                raise InternalError("pivot vanished during elimination")
            i += k
            j += k
            if i != k:
                A[[k, i]] = A[[i, k]]
                if U is not None:
                    U[[k, i]] = U[[i, k]]
            if j != k:
                A[:, [k, j]] = A[:, [j, k]]
                if V is not None:
                    V[:, [k, j]] = V[:, [j, k]]
            p = int(A[k, k])
            q = A[k + 1:, k] // p
            if q.any():
                A[k + 1:] = (A[k + 1:] - q[:, None] * A[k]) % E
                if U is not None:
                    U[k + 1:] = (U[k + 1:] - q[:, None] * U[k]) % E
            q = A[k, k + 1:] // p
            if q.any():
                A[:, k + 1:] = (A[:, k + 1:] - A[:, k][:, None] * q[None, :]) % E
                if V is not None:
                    V[:, k + 1:] = (V[:, k + 1:] - V[:, k][:, None] * q[None, :]) % E
            if not A[k + 1:, k].any() and not A[k, k + 1:].any():
                break
        pivots.append(int(A[k, k]))
    d = [math.gcd(p, E) for p in pivots] + [E] * (m - len(pivots))
    return DiagonalForm(d, pivots, U, V)


def cokernel_orders(M, E: int) -> list[int]:
    """Cyclic orders (possibly 1) of (Z/E)^rows / image(M)."""
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        return [E] * M.shape[0]
    return diagonalize_mod(M, E).orders


def kernel_lattice(Q, source_orders, target_orders) -> np.ndarray:
    """Generators of the kernel of x -> Q x from (+) Z/t_j to (+) Z/r_i.

    Rows of the result are generators, reduced mod source orders.  They span
    the kernel together with the relations t_j e_j.
    """
    Q = np.asarray(Q, dtype=np.int64)
    t = np.asarray(source_orders, dtype=np.int64)
    r = np.asarray(target_orders, dtype=np.int64)
    a = len(t)
    if Q.shape != (len(r), a):
        raise ShapeError(f"matrix shape {Q.shape} does not match orders ({len(r)}, {a})")
    if a and len(r) and ((Q * t[None, :]) % r[:, None]).any():
        i, j = map(int, np.argwhere((Q * t[None, :]) % r[:, None])[0])
        raise InternalError(f"homomorphism not well defined at entry ({i}, {j})")
    gens = np.eye(a, dtype=np.int64)
    for i in range(len(r)):
        ri = int(r[i])
        if ri == 1:
            continue
        vals = [int(v) for v in (gens @ Q[i]) % ri]
        nz = [k for k, v in enumerate(vals) if v]
        if not nz:
            continue
        p = nz[0]
        for k in nz[1:]:
            g, s, u = xgcd(vals[p], vals[k])
            a_p, a_k = vals[p] // g, vals[k] // g
            gp = s * gens[p] + u * gens[k]
            gk = a_k * gens[p] - a_p * gens[k]
            gens[p] = gp % t
            gens[k] = gk % t
            vals[p], vals[k] = g, 0
        g = math.gcd(vals[p], ri)
        gens[p] = gens[p] * (ri // g) % t
    keep = gens.any(axis=1)
    return gens[keep] if keep.any() else np.zeros((0, a), dtype=np.int64)


def factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def canonical_factors(orders) -> list[int]:
    """Invariant factors d1 | d2 | ... (all > 1) of a direct sum of cyclic groups."""
    per_prime: dict[int, list[int]] = {}
    for o in orders:
        for p, e in factor(int(o)).items():
            per_prime.setdefault(p, []).append(e)
    if not per_prime:
        return []
    width = max(len(v) for v in per_prime.values())
    out = [1] * width
    for p, exps in per_prime.items():
        exps = sorted(exps)
        for i, e in enumerate(exps):
            out[width - len(exps) + i] *= p ** e
    return out


def primary_from_counts(counts: Counter) -> list[int]:
    """Invariant factors from #{q : d q = 0} for every prime power d dividing |H|.

    ``counts`` maps each prime power p^j (and 1) to the size of the p^j-torsion.
    """
    orders = []
    primes = sorted({p for d in counts if d > 1 for p in factor(d)})
    for p in primes:
        j = 1
        prev = 1
        layers = []
        while p ** j in counts:
            c = counts[p ** j]
            ratio = c // prev
            k = round(math.log(ratio, p)) if ratio > 1 else 0
            layers.append(k)  # number of cyclic p-factors of order >= p^j
            prev = c
            j += 1
        for idx, k in enumerate(layers):
            nxt = layers[idx + 1] if idx + 1 < len(layers) else 0
            orders.extend([p ** (idx + 1)] * (k - nxt))
    return canonical_factors(orders)
