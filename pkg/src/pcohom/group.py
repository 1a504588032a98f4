"""Finite groups stored as validated multiplication tables.

Elements are the dense indices ``0 .. order-1``.  The identity and the
inverse table are always recomputed from the table itself.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce

from .errors import InvalidParameter, NotAGroup

MAX_ORDER = 64


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    table: tuple[tuple[int, ...], ...]
    identity: int
    inverse: tuple[int, ...]
    name: str = field(default="", compare=False)

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def elements(self) -> range:
        return range(len(self.table))

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def inv(self, x: int) -> int:
        return self.inverse[x]

    def prod(self, xs) -> int:
        """Product x1*x2*...*xk of a sequence (identity for an empty one)."""
        return reduce(self.mul, xs, self.identity)

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inverse[x], -k
        r = self.identity
        for _ in range(k):
            r = self.table[r][x]
        return r

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != self.identity:
            y = self.table[y][x]
            k += 1
        return k

    def is_abelian(self) -> bool:
        n = self.order
        return all(self.table[i][j] == self.table[j][i] for i in range(n) for j in range(i))

    def tuples(self, n: int):
        """All elements of G^n in lexicographic order."""
        return itertools.product(range(self.order), repeat=n)

    def generated_subgroup(self, gens) -> frozenset[int]:
        sub = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.table[x][g]
                if y not in sub:
                    sub.add(y)
                    frontier.append(y)
        return frozenset(sub)

    def to_json(self) -> dict:
        return {"order": self.order, "table": [list(row) for row in self.table]}

    def __repr__(self) -> str:
        label = self.name or f"order {self.order}"
        return f"FiniteGroup({label})"


def _find_identity(table) -> int | None:
    rn = range(len(table))
    for e in rn:
        if all(table[e][x] == x == table[x][e] for x in rn):
            return e
    return None


def make_from_table(table, name: str = "", max_order: int = MAX_ORDER) -> FiniteGroup:
    """Validate a square table and return the group it defines.

    Raises NotAGroup naming the first violating element or triple.
    """
    rows = [list(r) for r in table]
    n = len(rows)
    if n == 0:
        raise NotAGroup("empty table")
    if n > max_order:
        raise InvalidParameter(f"order {n} exceeds the cap {max_order}")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise NotAGroup(f"row {i} has length {len(row)}, expected {n}")
        for j, v in enumerate(row):
            if not isinstance(v, int) or not 0 <= v < n:
                raise NotAGroup(f"entry ({i},{j}) = {v!r} is not an element index")
    e = _find_identity(rows)
    if e is None:
        raise NotAGroup("no identity element")
    inverse = []
    for x in range(n):
        inv = [y for y in range(n) if rows[x][y] == e and rows[y][x] == e]
        if not inv:
            raise NotAGroup(f"element {x} has no inverse")
        inverse.append(inv[0])
    for x, y, z in itertools.product(range(n), repeat=3):
        if rows[rows[x][y]][z] != rows[x][rows[y][z]]:
            raise NotAGroup(f"associativity fails at ({x}, {y}, {z})")
    return FiniteGroup(tuple(tuple(r) for r in rows), e, tuple(inverse), name)


def make_cyclic(n: int) -> FiniteGroup:
    if not isinstance(n, int) or n < 1:
        raise InvalidParameter(f"cyclic group order must be a positive integer, got {n!r}")
    return make_from_table([[(i + j) % n for j in range(n)] for i in range(n)], name=f"Z{n}")


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """Componentwise product; the pair (g, h) gets index g*|H| + h."""
    m = H.order
    pairs = [(g, h) for g in G.elements for h in H.elements]
    table = [[G.mul(a, c) * m + H.mul(b, d) for (c, d) in pairs] for (a, b) in pairs]
    name = f"{G.name}x{H.name}" if G.name and H.name else ""
    return make_from_table(table, name=name)


def make_symmetric(n: int) -> FiniteGroup:
    """S_n on permutations listed in lexicographic order (identity first)."""
    if n < 1:
        raise InvalidParameter(f"n must be positive, got {n!r}")
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    # (p*q)(k) = p(q(k))
    table = [[index[tuple(p[q[k]] for k in range(n))] for q in perms] for p in perms]
    return make_from_table(table, name=f"S{n}")


def make_dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n; r^i s^j has index i + n*j."""
    if n < 1:
        raise InvalidParameter(f"n must be positive, got {n!r}")

    def mul(a, b):
        i, j = a % n, a // n
        k, l = b % n, b // n
        # r^i s^j r^k s^l = r^(i + (-1)^j k) s^(j+l)
        return (i + (k if j == 0 else -k)) % n + n * ((j + l) % 2)

    return make_from_table([[mul(a, b) for b in range(2 * n)] for a in range(2 * n)], name=f"D{n}")
