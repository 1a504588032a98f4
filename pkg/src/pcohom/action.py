"""Unital partial actions on block products, stored as block bijections.

Every ring isomorphism between unital ideals of a product of blocks
permutes blocks, and a block Z/p^k has no nontrivial ring automorphisms.  So
``alpha_g`` is fully described by a bijection from the blocks of ``D_{g^-1}``
onto the blocks of ``D_g``, acting as the identity on residues.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidAction, InvalidIndex, NotAGlobalAction, NotTransitive
from .group import FiniteGroup
from .ring import Element, Ideal, ProductRing


@dataclass(frozen=True, eq=False)
class PartialAction:
    group: FiniteGroup
    ring: ProductRing
    domain: tuple  # domain[g] = D_g as a frozenset of block indices
    blockmap: tuple  # blockmap[g]: dict block of D_{g^-1} -> block of D_g
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        G = self.group
        if len(self.domain) != G.order or len(self.blockmap) != G.order:
            raise InvalidAction("domain and blockmap need one entry per group element")
        object.__setattr__(self, "domain", tuple(frozenset(d) for d in self.domain))
        object.__setattr__(self, "blockmap", tuple(dict(m) for m in self.blockmap))

    @property
    def is_global(self) -> bool:
        full = self.ring.full
        return all(d == full for d in self.domain)

    def apply(self, g: int, a: Element) -> Element:
        """alpha_g(1_{g^-1} a); zero outside D_g."""
        out = [0] * len(a)
        for b, c in self.blockmap[g].items():
            out[c] = a[b]
        return tuple(out)

    def one(self, g: int) -> Element:
        return self.ring.idempotent(self.domain[g])

    def tuple_domain(self, xs) -> Ideal:
        """D_(x1,...,xn) = D_{x1} D_{x1x2} ... D_{x1...xn}; the full ring for ()."""
        xs = tuple(xs)
        cache = self._cache.setdefault("tuple_domain", {})
        try:
            return cache[xs]
        except KeyError:
            pass
        G = self.group
        out = self.ring.full
        p = G.identity
        for x in xs:
            p = G.mul(p, x)
            out = out & self.domain[p]
        cache[xs] = out
        return out

    def validate(self) -> list[dict]:
        return validate(self)

    def require_valid(self) -> "PartialAction":
        report = validate(self)
        if report:
            raise InvalidAction(f"invalid partial action: {report[0]}")
        return self

    def to_json(self) -> dict:
        G = self.group
        return {
            "group": G.to_json(),
            "ring": self.ring.to_json(),
            "domains": {str(g): sorted(self.domain[g]) for g in G.elements},
            "maps": {
                str(g): {str(b): c for b, c in sorted(self.blockmap[g].items())}
                for g in G.elements
                if g != G.identity
            },
        }


def validate(pa: PartialAction) -> list[dict]:
    """Check the partial-action axioms exhaustively over G x G.

    Returns a list of violations; an empty list means the action is valid.
    """
    G, R = pa.group, pa.ring
    e = G.identity
    full = R.full
    report = []
    for g in G.elements:
        dom = pa.domain[g]
        if not dom <= full:
            report.append({"axiom": "domain", "g": g, "detail": "block index out of range"})
    if report:
        return report
    if pa.domain[e] != full or any(pa.blockmap[e].get(b) != b for b in full) or len(pa.blockmap[e]) != len(full):
        report.append({"axiom": "(i)", "g": e, "detail": "D_1 must be the whole ring and alpha_1 the identity"})
    for g in G.elements:
        m = pa.blockmap[g]
        src, dst = pa.domain[G.inv(g)], pa.domain[g]
        if set(m) != src or set(m.values()) != dst or len(set(m.values())) != len(m):
            report.append({"axiom": "bijection", "g": g,
                           "detail": "blockmap[g] is not a bijection from D_{g^-1} onto D_g"})
            continue
        for b, c in m.items():
            if R.blocks[b] != R.blocks[c]:
                report.append({"axiom": "moduli", "g": g, "detail": f"block {b} (Z/{R.blocks[b]}) "
                               f"matched with block {c} (Z/{R.blocks[c]})"})
    for g in G.elements:
        m = pa.blockmap[g]
        ginv = G.inv(g)
        for h in G.elements:
            lhs = {m[b] for b in pa.domain[ginv] & pa.domain[h] if b in m}
            rhs = pa.domain[g] & pa.domain[G.mul(g, h)]
            if lhs != rhs:
                report.append({"axiom": "(ii')", "g": g, "h": h})
    for g in G.elements:
        for h in G.elements:
            gh = G.mul(g, h)
            lawful = pa.domain[G.inv(h)] & pa.domain[G.inv(gh)]
            mh, mg, mgh = pa.blockmap[h], pa.blockmap[g], pa.blockmap[gh]
            for b in lawful:
                if mg.get(mh.get(b)) != mgh.get(b):
                    report.append({"axiom": "(iii')", "g": g, "h": h, "block": b})
                    break
    return report


def global_action(group: FiniteGroup, ring: ProductRing, perms) -> PartialAction:
    """Global action from a block permutation per group element (perms[g][b] = image of b)."""
    full = ring.full
    return PartialAction(group, ring, tuple(full for _ in group.elements),
                         tuple({b: perms[g][b] for b in range(len(ring))} for g in group.elements))


def restrict_global(glob: PartialAction, ideal) -> PartialAction:
    """Restriction of a global action to the unital ideal on the given blocks.

    The blocks of the ideal are renumbered 0..k-1 in increasing order.
    """
    if not glob.is_global:
        raise NotAGlobalAction("every domain of a global action must be the whole ring")
    if validate(glob):
        raise NotAGlobalAction(f"not a valid action: {validate(glob)[0]}")
    G = glob.group
    kept = sorted(ideal)
    new = {b: i for i, b in enumerate(kept)}
    ring = ProductRing(tuple(glob.ring.blocks[b] for b in kept))
    I = frozenset(kept)
    domain, blockmap = [], []
    for g in G.elements:
        image = frozenset(glob.blockmap[g][b] for b in I)
        domain.append(frozenset(new[b] for b in I & image))
    for g in G.elements:
        src = {b for b in I if glob.blockmap[g][b] in I}
        blockmap.append({new[b]: new[glob.blockmap[g][b]] for b in src})
    return PartialAction(G, ring, tuple(domain), tuple(blockmap))


def apply(pa: PartialAction, g: int, a: Element) -> Element:
    return pa.apply(g, a)


def orbits(pa: PartialAction) -> list[list[int]]:
    """Blocks grouped into classes connected by some alpha_x, sorted by least block."""
    parent = list(range(len(pa.ring)))

    def find(b):
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        return b

    for m in pa.blockmap:
        for b, c in m.items():
            rb, rc = find(b), find(c)
            if rb != rc:
                parent[max(rb, rc)] = min(rb, rc)
    classes: dict[int, list[int]] = {}
    for b in range(len(pa.ring)):
        classes.setdefault(find(b), []).append(b)
    return sorted(classes.values())


def is_transitive(pa: PartialAction) -> bool:
    return len(orbits(pa)) <= 1


def restrict_to_blocks(pa: PartialAction, blocks) -> PartialAction:
    """The action on an invariant union of orbits, blocks renumbered in order."""
    kept = sorted(blocks)
    new = {b: i for i, b in enumerate(kept)}
    S = frozenset(kept)
    for m in pa.blockmap:
        for b, c in m.items():
            if (b in S) != (c in S):
                raise InvalidAction(f"block set {kept} is not invariant (alpha maps {b} to {c})")
    ring = ProductRing(tuple(pa.ring.blocks[b] for b in kept))
    domain = tuple(frozenset(new[b] for b in d & S) for d in pa.domain)
    blockmap = tuple({new[b]: new[c] for b, c in m.items() if b in S} for m in pa.blockmap)
    return PartialAction(pa.group, ring, domain, blockmap)


@dataclass(frozen=True, eq=False)
class TransitivityData:
    """Stabilizer H of a base block, a left transversal of H, and the bar/eta tables.

    ``lambda_`` lists the transversal elements g with A_1 inside D_{g^-1};
    ``block_of[g]`` is the block alpha_g(A_1) they are identified with.
    """

    action: PartialAction
    base: int
    stabilizer: frozenset
    transversal: tuple
    bar: tuple
    eta: tuple
    lambda_: tuple
    block_of: dict
    position: dict  # transversal element -> its index in the transversal

    def theta(self, g: int, a: Element) -> Element:
        return theta(self, g, a)

    def eta_n(self, g: int, xs) -> int:
        """eta_n^g(x1,...,xn) = eta(xn^-1 * bar(x_{n-1}^-1 ... x1^-1 g))."""
        G = self.action.group
        c = g
        for x in xs[:-1]:
            c = G.mul(G.inv(x), c)
        return self.eta[G.mul(G.inv(xs[-1]), self.bar[c])]

    def tau(self, g: int, xs) -> tuple:
        xs = tuple(xs)
        return tuple(self.eta_n(g, xs[:k]) for k in range(1, len(xs) + 1))

    def sigma(self, g: int, xs, i: int) -> tuple:
        """sigma_{n,i}^g(x1,...,xn) for 0 <= i <= n; i = 0 gives (g^-1, x1, ..., xn)."""
        G = self.action.group
        xs = tuple(xs)
        c = g
        for x in xs[:i]:
            c = G.mul(G.inv(x), c)
        return self.tau(g, xs[:i]) + (G.inv(self.bar[c]),) + xs[i:]


def transitivity_data(pa: PartialAction, base: int | None = None, order=None) -> TransitivityData:
    """Stabilizer, transversal, bar and eta tables for a transitive action.

    The transversal is chosen greedily following ``order`` (default: element
    index order), always seeded with the identity.
    """
    orbs = orbits(pa)
    if len(orbs) != 1:
        raise NotTransitive(f"action has {len(orbs)} orbits on blocks")
    G = pa.group
    if base is None:
        base = orbs[0][0]
    if not 0 <= base < len(pa.ring):
        raise InvalidIndex(f"base block {base} out of range")
    H = frozenset(x for x in G.elements
                  if base in pa.domain[G.inv(x)] and pa.blockmap[x][base] == base)
    if order is None:
        order = list(G.elements)
    transversal = [G.identity]
    bar = [None] * G.order
    for h in H:
        bar[h] = G.identity
    for x in order:
        if bar[x] is None:
            transversal.append(x)
            for h in H:
                bar[G.mul(x, h)] = x
    if any(b is None for b in bar):
        raise InvalidIndex("order does not list every group element")
    eta = tuple(G.mul(G.inv(x), bar[x]) for x in G.elements)
    lam = tuple(g for g in transversal if base in pa.domain[G.inv(g)])
    block_of = {g: pa.blockmap[g][base] for g in lam}
    if sorted(block_of.values()) != list(range(len(pa.ring))):
        raise NotTransitive("transversal does not reach every block exactly once")
    return TransitivityData(pa, base, H, tuple(transversal), tuple(bar), eta, lam, block_of,
                            {g: i for i, g in enumerate(transversal)})


def theta(td: TransitivityData, g: int, a: Element) -> Element:
    """theta_g(a) = alpha_g(pr_1(a)): the base-block residue moved to block A_g."""
    try:
        block = td.block_of[g]
    except KeyError:
        raise InvalidIndex(f"{g} is not in the block index set of the transversal") from None
    out = [0] * len(a)
    out[block] = a[td.base]
    return tuple(out)


def index_maps(td: TransitivityData, g: int, xs):
    """(tau_n^g(xs), [sigma_{n,0}^g(xs), ..., sigma_{n,n}^g(xs)])."""
    xs = tuple(xs)
    return td.tau(g, xs), [td.sigma(g, xs, i) for i in range(len(xs) + 1)]
