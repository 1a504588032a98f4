"""The three reference actions and seeded random restrictions of global actions."""

from __future__ import annotations

import random

from .action import PartialAction, global_action, restrict_global
from .group import FiniteGroup, direct_product, make_cyclic, make_dihedral, make_symmetric
from .ring import ProductRing


def cyclic_shift(n: int, modulus: int) -> PartialAction:
    """Z/n permuting n copies of Z/modulus cyclically (block i -> i + x)."""
    G = make_cyclic(n)
    ring = ProductRing((modulus,) * n)
    return global_action(G, ring, [[(b + x) % n for b in range(n)] for x in G.elements])


def fixture1() -> PartialAction:
    """Z3 shifting Z5^3, restricted to blocks {0, 1}."""
    return restrict_global(cyclic_shift(3, 5), {0, 1})


def fixture2() -> PartialAction:
    """Z4 on Z3 x Z3 through the swap: g and g^3 swap, g^2 fixes."""
    G = make_cyclic(4)
    ring = ProductRing((3, 3))
    return global_action(G, ring, [[0, 1], [1, 0], [0, 1], [1, 0]])


def trivial_global(G: FiniteGroup, blocks) -> PartialAction:
    ring = ProductRing(tuple(blocks))
    return global_action(G, ring, [list(range(len(ring))) for _ in G.elements])


def fixture3() -> PartialAction:
    """Z2 acting trivially on Z5."""
    return trivial_global(make_cyclic(2), (5,))


def two_orbit_example() -> PartialAction:
    """FIXTURE-1 beside one extra block Z7 on which Z3 acts trivially."""
    f1 = fixture1()
    ring = ProductRing(f1.ring.blocks + (7,))
    extra = len(f1.ring)
    domain = [d | {extra} for d in f1.domain]
    blockmap = [{**m, extra: extra} for m in f1.blockmap]
    return PartialAction(f1.group, ring, tuple(domain), tuple(blockmap))


FIXTURES = {"fixture1": fixture1, "fixture2": fixture2, "fixture3": fixture3}

SMALL_GROUPS = {
    "Z2": lambda: make_cyclic(2),
    "Z3": lambda: make_cyclic(3),
    "Z4": lambda: make_cyclic(4),
    "Z2xZ2": lambda: direct_product(make_cyclic(2), make_cyclic(2)),
    "Z5": lambda: make_cyclic(5),
    "S3": lambda: make_symmetric(3),
}

MODULI = (2, 3, 4, 5, 7, 8, 9)


def coset_action(G: FiniteGroup, subgroups, moduli) -> PartialAction:
    """Global action of G on the left cosets of each subgroup, one block per coset."""
    perms_parts = []
    blocks = []
    offset = 0
    for K, m in zip(subgroups, moduli):
        cosets = []
        seen = {}
        for g in G.elements:
            if g in seen:
                continue
            c = frozenset(G.mul(g, k) for k in K)
            for y in c:
                seen[y] = len(cosets)
            cosets.append(c)
        perms_parts.append((offset, seen, len(cosets)))
        blocks.extend([m] * len(cosets))
        offset += len(cosets)
    perms = []
    for x in G.elements:
        p = [0] * len(blocks)
        for off, seen, count in perms_parts:
            reps = {}
            for g, i in seen.items():
                reps.setdefault(i, g)
            for i in range(count):
                p[off + i] = off + seen[G.mul(x, reps[i])]
        perms.append(p)
    return global_action(G, ProductRing(tuple(blocks)), perms)


def random_instance(rng: random.Random, groups=None, max_orbits: int = 2, max_blocks: int = 4) -> PartialAction:
    """Restriction of a random coset action to a random nonempty set of blocks."""
    names = sorted(groups or SMALL_GROUPS)
    G = SMALL_GROUPS[names[rng.randrange(len(names))]]()
    while True:
        subs, mods = [], []
        for _ in range(rng.randint(1, max_orbits)):
            gens = [rng.randrange(G.order) for _ in range(rng.randint(0, 2))]
            subs.append(G.generated_subgroup(gens))
            mods.append(MODULI[rng.randrange(len(MODULI))])
        glob = coset_action(G, subs, mods)
        if len(glob.ring) <= 2 * max_blocks:
            break
    k = len(glob.ring)
    size = rng.randint(1, min(k, max_blocks))
    ideal = set(rng.sample(range(k), size))
    return restrict_global(glob, ideal)


def dihedral_example() -> PartialAction:
    """D3 on its three reflections' fixed points, restricted to two of them."""
    G = make_dihedral(3)
    H = G.generated_subgroup([3])
    glob = coset_action(G, [H], [4])
    return restrict_global(glob, {0, 1})
