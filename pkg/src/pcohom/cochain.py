"""Partial cochains C^n(G, A), the coboundary maps and the cocycle predicates.

A cochain of degree n stores a dense integer array of shape (|G|^n, k):
row r is the value at the r-th tuple of G^n in lexicographic order and
column b the residue on block b.  Degree 0 has a single row (the empty
tuple).  Every value must be a unit of the tuple's ideal D_(x), which means
a unit residue on each block of the ideal and 0 on every other block.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .action import PartialAction
from .errors import InternalError, InvalidParameter, NotACochain, NotACocycle, ShapeError
from .ring import Element


@lru_cache(maxsize=None)
def _inverse_table(m: int) -> np.ndarray:
    table = np.zeros(m, dtype=np.int64)
    for x in range(m):
        if math.gcd(x, m) == 1:
            table[x] = pow(x, -1, m)
    return table


def _moduli(pa: PartialAction) -> np.ndarray:
    c = pa._cache
    if "moduli" not in c:
        c["moduli"] = np.array(pa.ring.blocks, dtype=np.int64)
    return c["moduli"]


def tuple_array(order: int, n: int) -> np.ndarray:
    """All tuples of G^n as rows of an (order^n, n) array, lexicographic."""
    return _tuple_array(order, n)


@lru_cache(maxsize=64)
def _tuple_array(order: int, n: int) -> np.ndarray:
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((order,) * n).reshape(n, -1).T
    return np.ascontiguousarray(grids, dtype=np.int64)


def tuple_index(order: int, xs) -> int:
    r = 0
    for x in xs:
        r = r * order + x
    return r


def domain_mask(pa: PartialAction, n: int) -> np.ndarray:
    """Boolean (|G|^n, k) array: True where the block lies in D_(x)."""
    key = ("mask", n)
    c = pa._cache
    if key not in c:
        G = pa.group
        mask = np.zeros((G.order ** n, len(pa.ring)), dtype=bool)
        for r, xs in enumerate(G.tuples(n)):
            for b in pa.tuple_domain(xs):
                mask[r, b] = True
        mask.setflags(write=False)
        c[key] = mask
    return c[key]


def _inverse_values(pa: PartialAction, V: np.ndarray) -> np.ndarray:
    """Blockwise inverse; residues that are not units (including 0) map to 0."""
    out = np.empty_like(V)
    for b, m in enumerate(pa.ring.blocks):
        out[..., b] = _inverse_table(m)[V[..., b]]
    return out


def _apply_rows(pa: PartialAction, g: int, V: np.ndarray) -> np.ndarray:
    out = np.zeros_like(V)
    m = pa.blockmap[g]
    if m:
        src = np.fromiter(m.keys(), dtype=np.int64, count=len(m))
        dst = np.fromiter(m.values(), dtype=np.int64, count=len(m))
        out[..., dst] = V[..., src]
    return out


def _glue_indices(pa: PartialAction, n: int):
    """Row-index arrays into G^n used by the coboundary G^n -> G^(n+1).

    Returns (rest, glued, prefix): rest[r] indexes (x2..x_{n+1}), glued[i-1][r]
    indexes the tuple with x_i x_{i+1} multiplied, prefix[r] indexes (x1..xn).
    """
    key = ("glue", n)
    c = pa._cache
    if key not in c:
        G = pa.group
        N = G.order
        T = _tuple_array(N, n + 1)
        table = np.array(G.table, dtype=np.int64)
        weights = N ** np.arange(n - 1, -1, -1, dtype=np.int64)
        rows = np.arange(N ** (n + 1), dtype=np.int64)
        rest = rows % (N ** n)
        prefix = rows // N
        glued = []
        for i in range(1, n + 1):
            cols = [T[:, j] for j in range(i - 1)]
            cols.append(table[T[:, i - 1], T[:, i]])
            cols.extend(T[:, j] for j in range(i + 1, n + 1))
            glued.append(np.stack(cols, axis=1) @ weights)
        c[key] = (rest, glued, prefix)
    return c[key]


class Cochain:
    """An n-cochain of a partial action; immutable once built."""

    __slots__ = ("action", "degree", "values")

    def __init__(self, action: PartialAction, degree: int, values, check: bool = True):
        if degree < 0:
            raise InvalidParameter(f"degree must be >= 0, got {degree}")
        V = np.asarray(values, dtype=np.int64)
        rows = action.group.order ** degree
        if V.shape != (rows, len(action.ring)):
            raise ShapeError(f"degree {degree} cochain needs shape {(rows, len(action.ring))}, got {V.shape}")
        V = V % _moduli(action)
        V.setflags(write=False)
        self.action = action
        self.degree = degree
        self.values = V
        if check:
            self.check()

    @classmethod
    def from_table(cls, action: PartialAction, degree: int, table) -> "Cochain":
        """Build from a mapping tuple -> residues (every tuple of G^n must be present)."""
        G = action.group
        V = np.zeros((G.order ** degree, len(action.ring)), dtype=np.int64)
        for r, xs in enumerate(G.tuples(degree)):
            try:
                V[r] = table[xs]
            except KeyError:
                raise NotACochain(f"no value given for {xs}") from None
        return cls(action, degree, V)

    @classmethod
    def from_function(cls, action: PartialAction, degree: int, fn) -> "Cochain":
        G = action.group
        return cls(action, degree, [fn(xs) for xs in G.tuples(degree)])

    def check(self):
        mask = domain_mask(self.action, self.degree)
        V = self.values
        bad = (V != 0) != mask
        mods = _moduli(self.action)
        bad |= mask & (np.gcd(V, mods) != 1)
        if bad.any():
            r, b = map(int, np.argwhere(bad)[0])
            xs = self.tuple_at(r)
            raise NotACochain(f"value {self[xs]} at {xs} is not a unit of D_{xs} = "
                              f"{sorted(self.action.tuple_domain(xs))} (block {b})")

    def tuple_at(self, r: int) -> tuple:
        N = self.action.group.order
        out = []
        for _ in range(self.degree):
            r, x = divmod(r, N)
            out.append(x)
        return tuple(reversed(out))

    def __getitem__(self, xs) -> Element:
        xs = tuple(xs)
        if len(xs) != self.degree:
            raise ShapeError(f"degree {self.degree} cochain indexed by {xs}")
        return tuple(int(v) for v in self.values[tuple_index(self.action.group.order, xs)])

    def items(self):
        for r, xs in enumerate(self.action.group.tuples(self.degree)):
            yield xs, tuple(int(v) for v in self.values[r])

    def table(self) -> dict:
        return dict(self.items())

    def _same(self, other: "Cochain"):
        if not isinstance(other, Cochain):
            raise NotACochain(f"expected a Cochain, got {type(other).__name__}")
        if other.action is not self.action or other.degree != self.degree:
            raise NotACochain("cochains must share the action and the degree")

    def __mul__(self, other: "Cochain") -> "Cochain":
        self._same(other)
        return Cochain(self.action, self.degree, self.values * other.values % _moduli(self.action), check=False)

    def inverse(self) -> "Cochain":
        return Cochain(self.action, self.degree, _inverse_values(self.action, self.values), check=False)

    def __pow__(self, k: int) -> "Cochain":
        base = self if k >= 0 else self.inverse()
        out = identity_cochain(self.action, self.degree)
        for _ in range(abs(k)):
            out = out * base
        return out

    def __truediv__(self, other: "Cochain") -> "Cochain":
        return self * other.inverse()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return (other.action is self.action and other.degree == self.degree
                and np.array_equal(self.values, other.values))

    def __hash__(self):
        return hash((id(self.action), self.degree, self.values.tobytes()))

    def __repr__(self) -> str:
        return f"Cochain(degree={self.degree}, {self.table()!r})"

    def first_difference(self, other: "Cochain"):
        """The first tuple where two cochains disagree, or None."""
        diff = np.argwhere((self.values != other.values).any(axis=1))
        if len(diff) == 0:
            return None
        return self.tuple_at(int(diff[0, 0]))

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "values": {",".join(map(str, xs)): list(v) for xs, v in self.items()},
        }


def identity_cochain(pa: PartialAction, n: int) -> Cochain:
    """e_n(x) = 1_(x)."""
    return Cochain(pa, n, domain_mask(pa, n).astype(np.int64), check=False)


def cochain_mul(f1: Cochain, f2: Cochain) -> Cochain:
    return f1 * f2


def cochain_inv(f: Cochain) -> Cochain:
    return f.inverse()


def delta_values(pa: PartialAction, n: int, V: np.ndarray) -> np.ndarray:
    """Coboundary on raw value arrays; V may carry leading batch axes."""
    N = pa.group.order
    mods = _moduli(pa)
    Vinv = _inverse_values(pa, V)
    rest, glued, prefix = _glue_indices(pa, n)
    batch = V.shape[:-2]
    out = np.empty(batch + (N ** (n + 1), len(pa.ring)), dtype=np.int64)
    step = N ** n
    for x in range(N):
        out[..., x * step:(x + 1) * step, :] = _apply_rows(pa, x, V)
    for i, idx in enumerate(glued, start=1):
        src = Vinv if i % 2 else V
        out = out * src[..., idx, :] % mods
    src = Vinv if (n + 1) % 2 else V
    out = out * src[..., prefix, :] % mods
    return out


def delta(pa: PartialAction, f: Cochain) -> Cochain:
    """Partial coboundary, each inverse taken in the ideal of its own factor."""
    if f.action is not pa:
        raise NotACochain("cochain belongs to a different action")
    out = delta_values(pa, f.degree, f.values)
    mask = domain_mask(pa, f.degree + 1)
    if not np.array_equal(out != 0, mask):
        r = int(np.argwhere(((out != 0) != mask).any(axis=1))[0, 0])
        raise InternalError(f"coboundary value at row {r} has support different from its tuple ideal")
    return Cochain(pa, f.degree + 1, out, check=False)


def is_cocycle(pa: PartialAction, f: Cochain) -> bool:
    return delta(pa, f) == identity_cochain(pa, f.degree + 1)


def cocycle_violation(pa: PartialAction, f: Cochain):
    """First tuple where delta(f) differs from the identity, or None."""
    return delta(pa, f).first_difference(identity_cochain(pa, f.degree + 1))


def explicit_cocycle_check(pa: PartialAction, f: Cochain) -> bool:
    """Cocycle test written out directly for degrees 0, 1 and 2 (independent of delta)."""
    G, R = pa.group, pa.ring
    if f.degree == 0:
        a = f[()]
        return all(pa.apply(x, a) == R.project(a, pa.domain[x]) for x in G.elements)
    if f.degree == 1:
        for x in G.elements:
            for y in G.elements:
                lhs = R.mul(pa.apply(x, f[(y,)]), f[(x,)])
                rhs = R.project(f[(G.mul(x, y),)], pa.domain[x])
                if lhs != rhs:
                    return False
        return True
    if f.degree == 2:
        for x, y, z in G.tuples(3):
            lhs = R.mul(pa.apply(x, f[(y, z)]), f[(x, G.mul(y, z))])
            rhs = R.mul(f[(x, y)], f[(G.mul(x, y), z)])
            if lhs != rhs:
                return False
        return True
    raise InvalidParameter("explicit check is written out only for degrees 0, 1 and 2")


def random_cochain(pa: PartialAction, n: int, rng) -> Cochain:
    """Uniformly random cochain; rng is a random.Random."""
    mask = domain_mask(pa, n)
    V = np.zeros(mask.shape, dtype=np.int64)
    for b, m in enumerate(pa.ring.blocks):
        units = [x for x in range(m) if math.gcd(x, m) == 1]
        rows = np.flatnonzero(mask[:, b])
        V[rows, b] = [units[rng.randrange(len(units))] for _ in rows]
    return Cochain(pa, n, V, check=False)


def is_coboundary(pa: PartialAction, f: Cochain, method: str = "auto"):
    """A witness xi of degree n-1 with delta(xi) = f, or None."""
    from .cohomology import solve_coboundary

    if f.degree < 1:
        raise InvalidParameter("coboundaries start in degree 1")
    return solve_coboundary(pa, f, method=method)


def cohomologous(pa: PartialAction, f1: Cochain, f2: Cochain, method: str = "auto"):
    """A witness xi with f2 = f1 * delta(xi), or None."""
    if f1.degree != f2.degree:
        raise NotACocycle("cocycles of different degrees")
    for name, f in (("first", f1), ("second", f2)):
        bad = cocycle_violation(pa, f)
        if bad is not None:
            raise NotACocycle(f"{name} argument fails the cocycle identity at {bad}")
    if f1.degree == 0:
        return identity_cochain(pa, 0) if f1 == f2 else None
    return is_coboundary(pa, f2 / f1, method=method)
