"""Cochain groups as finite abelian groups, coboundary matrices and H^n.

C^n(G, A) is a product of cyclic groups, one factor per (tuple, block,
unit generator of that block).  A cochain is encoded by its exponent vector
(discrete logs block by block).  The coboundary becomes an integer matrix
between two such presentations, and Z^n, B^n, H^n are read off by modular
diagonalisation.  ``cohomology_bruteforce`` enumerates everything instead
and serves as the oracle.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .action import PartialAction
from .cochain import (
    Cochain,
    _moduli,
    cocycle_violation,
    delta,
    delta_values,
    domain_mask,
    identity_cochain,
)
from .errors import InternalError, InvalidParameter, NotACochain, TooLarge
from .ring import block_dlog, block_unit_generators
from .snf import canonical_factors, cokernel_orders, diagonalize_mod, kernel_lattice, primary_from_counts

BRUTEFORCE_BOUND = 2 ** 20


class AbelianPresentation:
    """C^n(G, A) as a direct sum of cyclic groups Z/order."""

    def __init__(self, pa: PartialAction, n: int):
        self.action = pa
        self.degree = n
        G = pa.group
        slots, blocks, gens, gidx, orders, labels = [], [], [], [], [], []
        mask = domain_mask(pa, n)
        for r, xs in enumerate(G.tuples(n)):
            for b in np.flatnonzero(mask[r]):
                for gi, (g, o) in enumerate(block_unit_generators(pa.ring.blocks[b])):
                    slots.append(r)
                    blocks.append(int(b))
                    gens.append(g)
                    gidx.append(gi)
                    orders.append(o)
                    labels.append((xs, int(b), gi))
        self.slot = np.array(slots, dtype=np.int64)
        self.block = np.array(blocks, dtype=np.int64)
        self.generator = np.array(gens, dtype=np.int64)
        self.gen_index = np.array(gidx, dtype=np.int64)
        self.orders = np.array(orders, dtype=np.int64)
        self.labels = labels
        self._mask = mask
        self._power = [np.array([pow(int(g), e, pa.ring.blocks[b]) for e in range(o)], dtype=np.int64)
                       for g, b, o in zip(gens, blocks, orders)]
        self._by_modulus = {}
        for j, b in enumerate(blocks):
            m = pa.ring.blocks[b]
            self._by_modulus.setdefault(m, []).append(j)

    def __len__(self) -> int:
        return len(self.orders)

    @property
    def factors(self) -> list[tuple]:
        return list(zip(self.labels, (int(o) for o in self.orders)))

    @property
    def order(self) -> int:
        return math.prod(int(o) for o in self.orders)

    @property
    def exponent(self) -> int:
        return math.lcm(1, *(int(o) for o in self.orders))

    def encode_values(self, V: np.ndarray) -> np.ndarray:
        """Exponent vectors for value arrays of shape (..., rows, k)."""
        out = np.zeros(V.shape[:-2] + (len(self),), dtype=np.int64)
        for m, ids in self._by_modulus.items():
            table = np.zeros((m, 2), dtype=np.int64)
            for res, exps in block_dlog(m).items():
                table[res, :len(exps)] = exps
            ids = np.array(ids)
            residues = V[..., self.slot[ids], self.block[ids]]
            out[..., ids] = table[residues, self.gen_index[ids]]
        return out

    def encode(self, f: Cochain) -> np.ndarray:
        if f.action is not self.action or f.degree != self.degree:
            raise NotACochain("cochain does not belong to this presentation")
        return self.encode_values(f.values)

    def decode_values(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.int64)
        V = np.broadcast_to(self._mask.astype(np.int64), X.shape[:-1] + self._mask.shape).copy()
        mods = _moduli(self.action)
        for j in range(len(self)):
            s, b = self.slot[j], self.block[j]
            V[..., s, b] = V[..., s, b] * self._power[j][X[..., j] % self.orders[j]] % mods[b]
        return V

    def decode(self, x) -> Cochain:
        return Cochain(self.action, self.degree, self.decode_values(np.asarray(x)), check=False)


def present_cochain_group(pa: PartialAction, n: int) -> AbelianPresentation:
    key = ("presentation", n)
    if key not in pa._cache:
        pa._cache[key] = AbelianPresentation(pa, n)
    return pa._cache[key]


@dataclass(frozen=True, eq=False)
class HomMatrix:
    """Column j is the image of source generator j, reduced mod target orders."""

    matrix: np.ndarray
    source: AbelianPresentation
    target: AbelianPresentation

    def apply(self, x) -> np.ndarray:
        return (self.matrix @ np.asarray(x, dtype=np.int64)) % self.target.orders


def delta_matrix(pa: PartialAction, n: int, checks: int = 4, rng=None) -> HomMatrix:
    """The coboundary C^n -> C^(n+1) as an integer matrix.

    ``checks`` random cochains are pushed through both the matrix and the
    coboundary itself; any disagreement raises InternalError.
    """
    key = ("delta_matrix", n)
    if key in pa._cache:
        return pa._cache[key]
    src = present_cochain_group(pa, n)
    dst = present_cochain_group(pa, n + 1)
    M = np.zeros((len(dst), len(src)), dtype=np.int64)
    chunk = 64
    for start in range(0, len(src), chunk):
        cols = np.arange(start, min(start + chunk, len(src)))
        X = np.zeros((len(cols), len(src)), dtype=np.int64)
        X[np.arange(len(cols)), cols] = 1
        images = delta_values(pa, n, src.decode_values(X))
        M[:, cols] = dst.encode_values(images).T
    hom = HomMatrix(M, src, dst)
    if checks:
        import random

        rng = rng or random.Random(0)
        bad = validate_delta_matrix(pa, hom, checks, rng)
        if bad is not None:
            raise InternalError(f"coboundary matrix disagrees with the coboundary on {bad}")
    pa._cache[key] = hom
    return hom


def validate_delta_matrix(pa: PartialAction, hom: HomMatrix, trials: int, rng):
    """Compare encode(delta(f)) with M encode(f) on random f; first failing vector or None."""
    src = hom.source
    for _ in range(trials):
        x = np.array([rng.randrange(int(o)) for o in src.orders], dtype=np.int64)
        f = src.decode(x)
        lhs = hom.target.encode(delta(pa, f))
        if not np.array_equal(lhs, hom.apply(x)):
            return x.tolist()
    return None


def _incoming(pa: PartialAction, n: int) -> np.ndarray:
    """Matrix of delta^(n-1), or an empty one for n = 0."""
    if n == 0:
        return np.zeros((len(present_cochain_group(pa, 0)), 0), dtype=np.int64)
    return delta_matrix(pa, n - 1).matrix


def cocycle_generators(pa: PartialAction, n: int) -> np.ndarray:
    """Rows generate Z^n inside the exponent coordinates of C^n."""
    key = ("cocycle_generators", n)
    if key not in pa._cache:
        src = present_cochain_group(pa, n)
        hom = delta_matrix(pa, n)
        pa._cache[key] = kernel_lattice(hom.matrix, src.orders, hom.target.orders)
    return pa._cache[key]


@dataclass(frozen=True)
class CohomologyResult:
    degree: int
    invariant_factors: tuple
    order: int
    cocycles: int
    coboundaries: int
    cochains: int

    def to_json(self) -> dict:
        return {
            "n": self.degree,
            "invariant_factors": list(self.invariant_factors),
            "order": self.order,
            "cocycles": self.cocycles,
            "coboundaries": self.coboundaries,
            "cochains": self.cochains,
        }


def cohomology(pa: PartialAction, n: int) -> CohomologyResult:
    """Invariant factors of H^n(G, A) (ascending, each dividing the next)."""
    if n < 0:
        raise InvalidParameter(f"degree must be >= 0, got {n}")
    key = ("cohomology", n)
    if key in pa._cache:
        return pa._cache[key]
    src = present_cochain_group(pa, n)
    t = src.orders
    total = src.order
    if len(t) == 0:
        res = CohomologyResult(n, (), 1, 1, 1, 1)
        pa._cache[key] = res
        return res
    E = src.exponent
    kergens = cocycle_generators(pa, n)
    P = _incoming(pa, n) % t[:, None]
    S = np.concatenate([P, np.diag(t)], axis=1)
    form = diagonalize_mod(S, E, track_u=True)
    d = np.array(form.orders, dtype=np.int64)
    quotient_by_b = math.prod(int(x) for x in d)
    z_index = math.prod(cokernel_orders(np.concatenate([kergens.T, np.diag(t)], axis=1), E))
    z_order = total // z_index
    b_order = total // quotient_by_b

    keep = d > 1
    if len(kergens) == 0 or not keep.any():
        orders = []
    else:
        Psi = (form.U[keep] @ kergens.T) % d[keep][:, None]
        m = len(kergens)
        kpsi = kernel_lattice(Psi, [E] * m, d[keep])
        rel = kpsi.T if len(kpsi) else np.zeros((m, 0), dtype=np.int64)
        orders = cokernel_orders(rel, E) if rel.shape[1] else [E] * m
    factors = tuple(canonical_factors(orders))
    order = math.prod(factors)
    if order * b_order != z_order:
        raise InternalError(f"|H| = {order} but |Z|/|B| = {z_order}/{b_order}")
    res = CohomologyResult(n, factors, order, z_order, b_order, total)
    pa._cache[key] = res
    return res


def _enumerate(orders, start: int, stop: int) -> np.ndarray:
    """Mixed-radix exponent vectors for indices start..stop-1."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((len(idx), len(orders)), dtype=np.int64)
    for j in range(len(orders) - 1, -1, -1):
        o = int(orders[j])
        out[:, j] = idx % o
        idx //= o
    return out


def _ring_power(pa: PartialAction, V: np.ndarray, k: int) -> np.ndarray:
    mods = _moduli(pa)
    out = np.ones_like(V) * (V != 0)
    base = V.copy()
    while k:
        if k & 1:
            out = out * base % mods
        base = base * base % mods
        k >>= 1
    return out


def cohomology_bruteforce(pa: PartialAction, n: int, bound: int = BRUTEFORCE_BOUND) -> CohomologyResult:
    """H^n by enumerating every cochain of degrees n and n-1."""
    src = present_cochain_group(pa, n)
    size = src.order
    prev = present_cochain_group(pa, n - 1) if n >= 1 else None
    prev_size = prev.order if prev is not None else 1
    if size > bound or prev_size > bound:
        raise TooLarge(f"|C^{n}| = {size} and |C^{n - 1}| = {prev_size}; the bound is {bound}")
    ident = identity_cochain(pa, n + 1).values
    chunk = 4096
    cocycles = []
    for start in range(0, size, chunk):
        V = src.decode_values(_enumerate(src.orders, start, min(size, start + chunk)))
        D = delta_values(pa, n, V)
        ok = (D == ident).all(axis=(1, 2))
        cocycles.append(V[ok].astype(np.int16))
    Z = np.concatenate(cocycles) if cocycles else np.zeros((0,) + domain_mask(pa, n).shape, dtype=np.int16)
    boundaries = set()
    if prev is None:
        boundaries.add(identity_cochain(pa, 0).values.astype(np.int16).tobytes())
    else:
        for start in range(0, prev_size, chunk):
            V = prev.decode_values(_enumerate(prev.orders, start, min(prev_size, start + chunk)))
            D = delta_values(pa, n - 1, V).astype(np.int16)
            boundaries.update(row.tobytes() for row in D)
    h_order, rem = divmod(len(Z), len(boundaries))
    if rem:
        raise InternalError("coboundaries do not form a subgroup of the cocycles")
    counts = Counter({1: 1})
    for p, e in _prime_powers(h_order):
        for j in range(1, e + 1):
            q = p ** j
            hits = 0
            for start in range(0, len(Z), chunk):
                W = _ring_power(pa, Z[start:start + chunk].astype(np.int64), q).astype(np.int16)
                hits += sum(row.tobytes() in boundaries for row in W)
            counts[q] = hits // len(boundaries)
    factors = tuple(primary_from_counts(counts))
    if math.prod(factors) != h_order:
        raise InternalError(f"torsion counts {dict(counts)} do not match |H| = {h_order}")
    return CohomologyResult(n, factors, h_order, len(Z), len(boundaries), size)


def _prime_powers(n: int):
    from .snf import factor

    return sorted(factor(n).items())


def solve_coboundary(pa: PartialAction, f: Cochain, method: str = "auto", bound: int = BRUTEFORCE_BOUND):
    """xi with delta(xi) = f, or None when f is not a coboundary."""
    n = f.degree
    if n < 1:
        raise InvalidParameter("coboundaries start in degree 1")
    if f.action is not pa:
        raise NotACochain("cochain belongs to a different action")
    if method == "bruteforce":
        return _solve_bruteforce(pa, f, bound)
    if method not in ("auto", "matrix"):
        raise InvalidParameter(f"unknown method {method!r}")
    if cocycle_violation(pa, f) is not None:
        return None
    src = present_cochain_group(pa, n - 1)
    tgt = present_cochain_group(pa, n)
    if len(src) == 0:
        return identity_cochain(pa, n - 1) if f == identity_cochain(pa, n) else None
    t = tgt.orders
    s = src.orders
    E = math.lcm(tgt.exponent, src.exponent)
    P = delta_matrix(pa, n - 1).matrix
    S = np.concatenate([P, np.diag(t)], axis=1) if len(t) else P
    form = diagonalize_mod(S, E, track_u=True, track_v=True)
    rhs = (form.U @ tgt.encode(f)) % E
    z = np.zeros(S.shape[1], dtype=np.int64)
    for i in range(len(rhs)):
        if i < len(form.pivots):
            p = form.pivots[i]
            g = math.gcd(p, E)
            if rhs[i] % g:
                return None
            mod = E // g
            z[i] = (int(rhs[i]) // g) * pow(p // g, -1, mod) % mod if mod > 1 else 0
        elif rhs[i] % E:
            return None
    x = (form.V @ z) % E
    xi = src.decode(x[:len(s)] % s)
    if delta(pa, xi) != f:
        raise InternalError("coboundary solve produced a witness that does not verify")
    return xi


def _solve_bruteforce(pa: PartialAction, f: Cochain, bound: int):
    src = present_cochain_group(pa, f.degree - 1)
    if src.order > bound:
        raise TooLarge(f"|C^{f.degree - 1}| = {src.order} exceeds the bound {bound}")
    chunk = 4096
    for start in range(0, src.order, chunk):
        V = src.decode_values(_enumerate(src.orders, start, min(src.order, start + chunk)))
        D = delta_values(pa, f.degree - 1, V)
        hit = np.flatnonzero((D == f.values).all(axis=(1, 2)))
        if len(hit):
            return Cochain(pa, f.degree - 1, V[hit[0]], check=False)
    return None


def random_cocycle(pa: PartialAction, n: int, rng) -> Cochain:
    """Uniformly distributed element of Z^n; rng is a random.Random."""
    src = present_cochain_group(pa, n)
    gens = cocycle_generators(pa, n)
    if len(gens) == 0:
        return identity_cochain(pa, n)
    E = src.exponent
    coeffs = np.array([rng.randrange(E) for _ in range(len(gens))], dtype=np.int64)
    x = (coeffs @ gens) % src.orders
    return src.decode(x)


def random_coboundary(pa: PartialAction, n: int, rng) -> Cochain:
    from .cochain import random_cochain

    return delta(pa, random_cochain(pa, n - 1, rng))


def invariant_factors_of_sum(*lists) -> list[int]:
    return canonical_factors([f for fs in lists for f in fs])


def check_partial_global_iso(pa: PartialAction, degrees=(0, 1, 2), samples: int = 3, rng=None) -> dict:
    """Compare partial H^n with global H^n over the envelope, plus sampled class maps.

    For each degree the invariant factors must agree.  For n >= 1 it also
    checks on random cocycles that globalisation respects products, and that
    restricting a random global cocycle and globalising again returns its
    class.
    """
    import random

    from .errors import NotCohomologous
    from .globalize import build_enveloping, compare_globalizations, components, globalize, restrict_cochain

    rng = rng or random.Random(0)
    parts = components(pa)
    envs = [build_enveloping(sub) for _, sub in parts]
    report = {"degrees": {}, "ok": True}
    for n in degrees:
        partial = list(cohomology(pa, n).invariant_factors)
        glob = invariant_factors_of_sum(*(cohomology(env.action, n).invariant_factors for env in envs))
        entry = {"partial": partial, "global": glob, "equal": partial == glob}
        if n >= 1 and samples:
            ok = True
            for _ in range(samples):
                w1, w2 = random_cocycle(pa, n, rng), random_cocycle(pa, n, rng)
                g1, g2, g12 = globalize(pa, w1), globalize(pa, w2), globalize(pa, w1 * w2)
                for o1, o2, o12 in zip(g1.orbits, g2.orbits, g12.orbits):
                    try:
                        compare_globalizations(o1.envelope, o1.u * o2.u, o12.u)
                    except NotCohomologous:
                        ok = False
                for (_, sub), env in zip(parts, envs):
                    u = random_cocycle(env.action, n, rng)
                    w = restrict_cochain(env, u)
                    if cocycle_violation(sub, w) is not None:
                        ok = False
                        continue
                    again = globalize(sub, w).orbits[0]
                    try:
                        compare_globalizations(env, u, again.u)
                    except NotCohomologous:
                        ok = False
            entry["samples"] = samples
            entry["class_map_ok"] = ok
        report["degrees"][str(n)] = entry
        report["ok"] = report["ok"] and entry["equal"] and entry.get("class_map_ok", True)
    return report
