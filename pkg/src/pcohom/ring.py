"""Finite products of indecomposable blocks Z/p^k.

A ring element is a plain tuple of residues, one per block.  A unital ideal
is identified with the set of block indices it contains (a frozenset); its
idempotent is 1 on those blocks and 0 elsewhere.  Elements carry no ideal
tag, so support is always checked where an element is used.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import InvalidParameter, NotAUnit, ShapeError

Element = tuple  # tuple[int, ...]
Ideal = frozenset  # frozenset[int]


def prime_power(m: int) -> tuple[int, int] | None:
    """Return (p, k) with m == p**k, or None if m is not a prime power >= 2."""
    if m < 2:
        return None
    p = next(d for d in range(2, m + 1) if m % d == 0)
    k = 0
    while m % p == 0:
        m //= p
        k += 1
    return (p, k) if m == 1 else None


@lru_cache(maxsize=None)
def block_unit_generators(m: int) -> tuple[tuple[int, int], ...]:
    """Independent generators (residue, order) of the unit group of Z/m."""
    p, k = prime_power(m)
    if p == 2:
        if k == 1:
            return ()
        if k == 2:
            return ((3, 2),)
        return ((m - 1, 2), (5, 2 ** (k - 2)))
    phi = (p - 1) * p ** (k - 1)
    for g in range(2, m):
        if math.gcd(g, m) == 1 and _mult_order(g, m) == phi:
            return ((g, phi),)
    raise AssertionError(f"no primitive root mod {m}")  # pragma: no cover


def _mult_order(a: int, m: int) -> int:
    k, x = 1, a % m
    while x != 1:
        x = x * a % m
        k += 1
    return k


@lru_cache(maxsize=None)
def block_dlog(m: int) -> dict[int, tuple[int, ...]]:
    """Residue -> exponent vector with respect to block_unit_generators(m)."""
    gens = block_unit_generators(m)
    table = {}
    for exps in itertools.product(*(range(o) for _, o in gens)):
        r = 1
        for (g, _), e in zip(gens, exps):
            r = r * pow(g, e, m) % m
        table[r] = exps
    return table


@dataclass(frozen=True)
class ProductRing:
    blocks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(int(m) for m in self.blocks))
        for i, m in enumerate(self.blocks):
            if prime_power(m) is None:
                raise InvalidParameter(f"block {i} has modulus {m}, which is not a prime power")

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def full(self) -> Ideal:
        return frozenset(range(len(self.blocks)))

    @property
    def zero(self) -> Element:
        return (0,) * len(self.blocks)

    @property
    def one(self) -> Element:
        return tuple(1 % m for m in self.blocks)

    def element(self, residues) -> Element:
        residues = tuple(residues)
        if len(residues) != len(self.blocks):
            raise ShapeError(f"expected {len(self.blocks)} residues, got {len(residues)}")
        return tuple(r % m for r, m in zip(residues, self.blocks))

    def _check(self, *elems):
        for a in elems:
            if len(a) != len(self.blocks):
                raise ShapeError(f"element {a!r} has {len(a)} residues, ring has {len(self.blocks)} blocks")

    def add(self, a: Element, b: Element) -> Element:
        self._check(a, b)
        return tuple((x + y) % m for x, y, m in zip(a, b, self.blocks))

    def sub(self, a: Element, b: Element) -> Element:
        self._check(a, b)
        return tuple((x - y) % m for x, y, m in zip(a, b, self.blocks))

    def mul(self, a: Element, b: Element) -> Element:
        self._check(a, b)
        return tuple(x * y % m for x, y, m in zip(a, b, self.blocks))

    def product(self, elems) -> Element:
        r = self.one
        for a in elems:
            r = self.mul(r, a)
        return r

    def idempotent(self, ideal) -> Element:
        return tuple(1 % m if i in ideal else 0 for i, m in enumerate(self.blocks))

    def project(self, a: Element, ideal) -> Element:
        """1_I * a."""
        return tuple(x if i in ideal else 0 for i, x in enumerate(a))

    def support(self, a: Element) -> Ideal:
        return frozenset(i for i, x in enumerate(a) if x)

    def is_unit_of(self, a: Element, ideal) -> bool:
        self._check(a)
        for i, (x, m) in enumerate(zip(a, self.blocks)):
            if i in ideal:
                if math.gcd(x, m) != 1:
                    return False
            elif x:
                return False
        return True

    def inverse_in_ideal(self, a: Element, ideal) -> Element:
        self._check(a)
        out = []
        for i, (x, m) in enumerate(zip(a, self.blocks)):
            if i in ideal:
                if math.gcd(x, m) != 1:
                    raise NotAUnit(f"residue {x} is not a unit of Z/{m} (block {i})")
                out.append(pow(x, -1, m) if m > 1 else 0)
            else:
                if x:
                    raise NotAUnit(f"block {i} is outside the ideal but carries residue {x}")
                out.append(0)
        return tuple(out)

    def power_in_ideal(self, a: Element, k: int, ideal) -> Element:
        """a**k inside the ideal; k = 0 gives 1_I."""
        if k < 0:
            a, k = self.inverse_in_ideal(a, ideal), -k
        return tuple(pow(x, k, m) if i in ideal else 0 for i, (x, m) in enumerate(zip(a, self.blocks)))

    def unit_group_structure(self, ideal) -> list[tuple[Element, int]]:
        """Independent generators of U(I) with their orders, block by block."""
        base = self.idempotent(ideal)
        gens = []
        for i in sorted(ideal):
            for g, order in block_unit_generators(self.blocks[i]):
                e = list(base)
                e[i] = g
                gens.append((tuple(e), order))
        return gens

    def units(self, ideal):
        """Every unit of I (exhaustive; desk-scale blocks only)."""
        per_block = []
        for i, m in enumerate(self.blocks):
            if i in ideal:
                per_block.append([x for x in range(m) if math.gcd(x, m) == 1])
            else:
                per_block.append([0])
        return [tuple(c) for c in itertools.product(*per_block)]

    def random_unit(self, rng, ideal) -> Element:
        out = []
        for i, m in enumerate(self.blocks):
            if i in ideal:
                while True:
                    x = rng.randrange(m)
                    if math.gcd(x, m) == 1:
                        break
                out.append(x % m)
            else:
                out.append(0)
        return tuple(out)

    def to_json(self) -> dict:
        return {"blocks": list(self.blocks)}


def ideal_meet(*ideals) -> Ideal:
    """Intersection of unital ideals, which is also their product."""
    it = iter(ideals)
    out = frozenset(next(it))
    for I in it:
        out &= I
    return out


def elem_add(R: ProductRing, a: Element, b: Element) -> Element:
    return R.add(a, b)


def elem_mul(R: ProductRing, a: Element, b: Element) -> Element:
    return R.mul(a, b)


def idempotent_of(R: ProductRing, ideal) -> Element:
    return R.idempotent(ideal)


def is_unit_of(R: ProductRing, a: Element, ideal) -> bool:
    return R.is_unit_of(a, ideal)


def inverse_in_ideal(R: ProductRing, a: Element, ideal) -> Element:
    return R.inverse_in_ideal(a, ideal)


def unit_group_structure(R: ProductRing, ideal) -> list[tuple[Element, int]]:
    return R.unit_group_structure(ideal)
