"""Enveloping actions and globalisation of partial cocycles.

The pipeline for a partial n-cocycle w on a transitive action:

* transport w to w' and the witness eps with w = delta(eps) w';
* extend to a full-unit cochain w~ satisfying the extended cocycle identity;
* lift to a global cocycle u on functions G -> A, then read u off on the
  envelope blocks, one copy of the base block per transversal element.

Non-transitive actions are split into orbits and handled one orbit at a
time.  Two views of u are kept: ``u_function[r, t]`` is the value u(x)|_t
on functions, and ``u`` is the block view over the envelope ring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .action import (
    PartialAction,
    TransitivityData,
    global_action,
    orbits,
    restrict_global,
    restrict_to_blocks,
    transitivity_data,
)
from .cochain import (
    Cochain,
    _apply_rows,
    _glue_indices,
    _inverse_values,
    _moduli,
    cocycle_violation,
    cohomologous,
    delta,
    delta_values,
    domain_mask,
    identity_cochain,
    tuple_index,
)
from .errors import InternalError, InvalidParameter, NotACochain, NotACocycle, NotCohomologous
from .ring import ProductRing


@dataclass(frozen=True, eq=False)
class EnvelopingAction:
    """Global action of G on one copy of the base block per transversal element."""

    source: PartialAction
    td: TransitivityData
    ring: ProductRing
    beta: tuple  # beta[x][i] = position of bar(x g_i)
    embed: dict  # g in Lambda -> its position in the transversal
    action: PartialAction

    @property
    def transversal(self) -> tuple:
        return self.td.transversal

    def phi(self, a) -> tuple:
        """Embed a source element: block g carries a on block alpha_g(A_1), or 0 off Lambda."""
        out = [0] * len(self.ring)
        for g, i in self.embed.items():
            out[i] = a[self.td.block_of[g]]
        return tuple(out)

    def phi_values(self, V: np.ndarray) -> np.ndarray:
        out = np.zeros(V.shape[:-1] + (len(self.ring),), dtype=np.int64)
        for g, i in self.embed.items():
            out[..., i] = V[..., self.td.block_of[g]]
        return out

    def unembed_values(self, V: np.ndarray) -> np.ndarray:
        out = np.zeros(V.shape[:-1] + (len(self.source.ring),), dtype=np.int64)
        for g, i in self.embed.items():
            out[..., self.td.block_of[g]] = V[..., i]
        return out

    def restricted(self) -> PartialAction:
        """restrict_global of the envelope to the embedded blocks."""
        return restrict_global(self.action, set(self.embed.values()))

    def source_relabel(self) -> dict:
        """Source block -> block index in ``restricted()``."""
        kept = sorted(self.embed.values())
        rank = {p: i for i, p in enumerate(kept)}
        return {self.td.block_of[g]: rank[p] for g, p in self.embed.items()}

    def restriction_matches(self) -> bool:
        res = self.restricted()
        rel = self.source_relabel()
        src = self.source
        for g in src.group.elements:
            if {rel[b] for b in src.domain[g]} != res.domain[g]:
                return False
            if {rel[b]: rel[c] for b, c in src.blockmap[g].items()} != res.blockmap[g]:
                return False
        return True

    def global_td(self) -> TransitivityData:
        """Transitivity data of the envelope itself, sharing H and the transversal."""
        key = "global_td"
        c = self.action._cache
        if key not in c:
            td = self.td
            c[key] = TransitivityData(self.action, 0, td.stabilizer, td.transversal, td.bar, td.eta,
                                      td.transversal, dict(td.position), dict(td.position))
        return c[key]

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "transversal": list(self.transversal),
            "beta": [list(p) for p in self.beta],
            "embed": {str(g): i for g, i in sorted(self.embed.items())},
            "base": self.td.base,
        }


def build_enveloping(pa: PartialAction, base: int | None = None, order=None) -> EnvelopingAction:
    if base is None and order is None and "envelope" in pa._cache:
        return pa._cache["envelope"]
    td = transitivity_data(pa, base, order)
    G = pa.group
    pos = td.position
    beta = tuple(tuple(pos[td.bar[G.mul(x, g)]] for g in td.transversal) for x in G.elements)
    m = pa.ring.blocks[td.base]
    ring = ProductRing((m,) * len(td.transversal))
    env = EnvelopingAction(pa, td, ring, beta, {g: pos[g] for g in td.lambda_},
                           global_action(G, ring, beta))
    if base is None and order is None:
        pa._cache["envelope"] = env
    return env


def _own_inverse(x: int, m: int) -> int:
    """Inverse inside the factor's own ideal: 0 when the block lies outside it."""
    return pow(x, -1, m) if math.gcd(x, m) == 1 else 0


def w_prime(td: TransitivityData, w: Cochain) -> Cochain:
    """w'(x) = 1_(x) times the assembly over g in Lambda of theta_g(w(tau^g(x)))."""
    return Cochain(td.action, w.degree, _transported(td, w) * domain_mask(td.action, w.degree))


def _transported(td: TransitivityData, w: Cochain) -> np.ndarray:
    """The assembly of theta_g(w(tau^g(x))) without the idempotent: full units."""
    pa = td.action
    G = pa.group
    n = w.degree
    if n < 1:
        raise InvalidParameter("w' is defined for degree >= 1")
    V = np.zeros((G.order ** n, len(pa.ring)), dtype=np.int64)
    for r, xs in enumerate(G.tuples(n)):
        for g in td.lambda_:
            V[r, td.block_of[g]] = w.values[tuple_index(G.order, td.tau(g, xs)), td.base]
    return V


def epsilon(td: TransitivityData, w: Cochain) -> Cochain:
    """The degree n-1 witness with w = delta(eps) * w'."""
    pa = td.action
    G = pa.group
    n = w.degree
    if n < 1:
        raise InvalidParameter("epsilon is defined for degree >= 1")
    m = pa.ring.blocks[td.base]
    V = np.zeros((G.order ** (n - 1), len(pa.ring)), dtype=np.int64)
    for r, ys in enumerate(G.tuples(n - 1)):
        for g in td.lambda_:
            acc = 1
            for i in range(n):
                x = int(w.values[tuple_index(G.order, td.sigma(g, ys, i)), td.base])
                acc = acc * (_own_inverse(x, m) if i % 2 else x) % m
            V[r, td.block_of[g]] = acc
    V = V * domain_mask(pa, n - 1)
    return Cochain(pa, n - 1, V)


def transport_identity(td: TransitivityData, w: Cochain):
    """First tuple where w != delta(eps) * w', or None."""
    rhs = delta(td.action, epsilon(td, w)) * w_prime(td, w)
    return w.first_difference(rhs)


def reconstruction(td: TransitivityData, w: Cochain) -> Cochain:
    """Rebuild w blockwise from its values shifted by g^-1 (the block-by-block reconstruction)."""
    pa = td.action
    G = pa.group
    n = w.degree
    m = pa.ring.blocks[td.base]
    b0 = td.base
    N = G.order

    def val(xs, sign):
        x = int(w.values[tuple_index(N, xs), b0])
        return x if sign > 0 else _own_inverse(x, m)

    V = np.zeros((N ** n, len(pa.ring)), dtype=np.int64)
    for r, xs in enumerate(G.tuples(n)):
        for g in td.lambda_:
            gi = G.inv(g)
            acc = val((G.mul(gi, xs[0]),) + xs[1:], 1)
            for k in range(1, n):
                glued = xs[:k - 1] + (G.mul(xs[k - 1], xs[k]),) + xs[k + 1:]
                acc = acc * val((gi,) + glued, (-1) ** k) % m
            acc = acc * val((gi,) + xs[:-1], (-1) ** n) % m
            V[r, td.block_of[g]] = acc
    return Cochain(pa, n, V * domain_mask(pa, n), check=False)


def trivial_action(pa: PartialAction) -> PartialAction:
    """G acting trivially on all of A: cochains over it are full-unit tables G^n -> U(A)."""
    c = pa._cache
    if "trivial" not in c:
        full = pa.ring.full
        c["trivial"] = PartialAction(pa.group, pa.ring, tuple(full for _ in pa.group.elements),
                                     tuple({b: b for b in full} for _ in pa.group.elements))
    return c["trivial"]


def extended_identity_values(pa: PartialAction, n: int, V: np.ndarray) -> np.ndarray:
    """Left side of the extended cocycle identity for a full-unit table of degree n."""
    return delta_values(pa, n, V)


def _first_rows_mask(pa: PartialAction, n: int) -> np.ndarray:
    """Row r of G^(n+1) -> the idempotent 1_{x1}."""
    N = pa.group.order
    ones = np.array([pa.one(x) for x in pa.group.elements], dtype=np.int64)
    return np.repeat(ones, N ** n, axis=0)


def _tilde_delta(pa: PartialAction, n: int, Et: np.ndarray) -> np.ndarray:
    """Coboundary-like map on full units where the first factor uses alpha~_x (1 off D_x)."""
    N = pa.group.order
    mods = _moduli(pa)
    inv = _inverse_values(pa, Et)
    _, glued, prefix = _glue_indices(pa, n)
    out = np.empty((N ** (n + 1), len(pa.ring)), dtype=np.int64)
    step = N ** n
    for x in pa.group.elements:
        moved = _apply_rows(pa, x, Et)
        off = np.ones(len(pa.ring), dtype=bool)
        off[list(pa.domain[x])] = False
        moved[:, off] = 1
        out[x * step:(x + 1) * step] = moved
    for i, idx in enumerate(glued, start=1):
        out = out * (inv if i % 2 else Et)[idx] % mods
    out = out * (inv if (n + 1) % 2 else Et)[prefix] % mods
    return out


@dataclass(eq=False)
class Extension:
    w: Cochain
    w_tilde: Cochain  # over trivial_action(source)
    w_tilde_prime: Cochain | None
    eps: Cochain | None
    checks: dict = field(default_factory=dict)


def w_tilde(td: TransitivityData, w: Cochain) -> Extension:
    """Extend a partial cocycle to a full-unit cochain satisfying the extended identity.

    Verifies (a) w = 1_(x) w~, (b) the extended identity for w~, (c) the same
    identity for w~' and the transport identity w = delta(eps) w'.  Any
    failure raises InternalError naming the offending tuple.
    """
    pa = td.action
    if w.action is not pa:
        raise NotACochain("cocycle belongs to a different action")
    bad = cocycle_violation(pa, w)
    if bad is not None:
        raise NotACocycle(f"cocycle identity fails at {bad}")
    n = w.degree
    triv = trivial_action(pa)
    mods = _moduli(pa)
    if n == 0:
        wt = Cochain(triv, 0, w.values)
        ext = Extension(w, wt, None, None)
    else:
        eps = epsilon(td, w)
        bad = w.first_difference(delta(pa, eps) * w_prime(td, w))
        if bad is not None:
            raise InternalError(f"w = delta(eps) w' fails at {bad}")
        wtp = _transported(td, w)
        et = np.where(domain_mask(pa, n - 1), eps.values, 1)
        wt = _tilde_delta(pa, n - 1, et) * wtp % mods
        ext = Extension(w, Cochain(triv, n, wt), Cochain(triv, n, wtp), eps)
        ext.checks["transport"] = True
    mask = domain_mask(pa, n)
    restr = ext.w_tilde.values * mask
    if not np.array_equal(restr, w.values):
        raise InternalError(f"restriction law fails at {w.tuple_at(int(np.argwhere((restr != w.values).any(1))[0, 0]))}")
    ext.checks["restriction"] = True
    target = _first_rows_mask(pa, n)
    for name, tab in (("extended_identity", ext.w_tilde), ("quasi_identity", ext.w_tilde_prime)):
        if tab is None:
            continue
        lhs = extended_identity_values(pa, n, tab.values)
        if not np.array_equal(lhs, target):
            r = int(np.argwhere((lhs != target).any(1))[0, 0])
            raise InternalError(f"{name} fails at {identity_cochain(pa, n + 1).tuple_at(r)}")
        ext.checks[name] = True
    return ext


@dataclass(eq=False)
class Globalization:
    envelope: EnvelopingAction
    degree: int
    u: Cochain  # block view over envelope.action
    u_function: np.ndarray  # [row of G^n, t, block of A]
    extension: Extension
    checks: dict = field(default_factory=dict)


def lift_global(env: EnvelopingAction, ext: Extension) -> Globalization:
    """Lift w~ to a global cocycle u and verify it in both views."""
    pa = env.source
    G = pa.group
    N = G.order
    td = env.td
    n = ext.w_tilde.degree
    mods = _moduli(pa)
    W = ext.w_tilde.values
    Winv = _inverse_values(pa, W)

    def idx(xs):
        return tuple_index(N, xs)

    U = np.empty((N ** n, N, len(pa.ring)), dtype=np.int64)
    for r, xs in enumerate(G.tuples(n)):
        for t in G.elements:
            if n == 0:
                U[r, t] = W[0]
                continue
            ti = G.inv(t)
            acc = (W if n % 2 == 0 else Winv)[idx((ti,) + xs[:-1])]
            acc = acc * W[idx((G.mul(ti, xs[0]),) + xs[1:])] % mods
            for i in range(1, n):
                glued = xs[:i - 1] + (G.mul(xs[i - 1], xs[i]),) + xs[i + 1:]
                acc = acc * (W if i % 2 == 0 else Winv)[idx((ti,) + glued)] % mods
            U[r, t] = acc
    checks = {}

    # global cocycle in the function view: beta_x(f)|_t = f(x^-1 t)
    Uinv = _inverse_values(pa, U)
    one = np.array(pa.ring.one, dtype=np.int64)
    for xs in G.tuples(n + 1):
        x1 = xs[0]
        for t in G.elements:
            acc = U[idx(xs[1:]), G.mul(G.inv(x1), t)]
            for i in range(1, n + 1):
                glued = xs[:i - 1] + (G.mul(xs[i - 1], xs[i]),) + xs[i + 1:]
                acc = acc * (U if i % 2 == 0 else Uinv)[idx(glued), t] % mods
            acc = acc * (U if (n + 1) % 2 == 0 else Uinv)[idx(xs[:-1]), t] % mods
            if not np.array_equal(acc, one):
                raise InternalError(f"lifted cochain fails the global cocycle identity at {xs}, t = {t}")
    checks["global_cocycle_function_view"] = True

    # restriction law phi(w(x)) = phi(1_(x)) u(x), phi(a)|_t = alpha_{t^-1}(1_t a)
    w = ext.w
    for r, xs in enumerate(G.tuples(n)):
        wx = tuple(int(v) for v in w.values[r])
        ex = pa.ring.idempotent(pa.tuple_domain(xs))
        for t in G.elements:
            lhs = pa.apply(G.inv(t), wx)
            rhs = pa.ring.mul(pa.apply(G.inv(t), ex), tuple(int(v) for v in U[r, t]))
            if lhs != rhs:
                raise InternalError(f"restriction law fails at {xs}, t = {t}")
    checks["restriction_function_view"] = True

    if not np.array_equal(U[:, G.identity], W):
        raise InternalError("germ of u at the identity differs from w~")
    checks["germ"] = True

    # block view: envelope block g carries u|_g on the base block
    b0 = td.base
    blk = np.empty((N ** n, len(env.ring)), dtype=np.int64)
    for i, g in enumerate(td.transversal):
        blk[:, i] = U[:, g, b0]
        gi = G.inv(g)
        for t in G.elements:
            s = G.mul(gi, t)
            if b0 in pa.domain[s]:
                b = pa.blockmap[G.inv(s)][b0]
                if not np.array_equal(U[:, t, b], blk[:, i]):
                    raise InternalError(f"u is not constant on envelope block {g} (t = {t})")
    checks["block_view_consistent"] = True
    u = Cochain(env.action, n, blk)
    bad = cocycle_violation(env.action, u)
    if bad is not None:
        raise InternalError(f"block view of u fails the global cocycle identity at {bad}")
    checks["global_cocycle"] = True
    lhs = env.phi_values(w.values)
    rhs = env.phi_values(domain_mask(pa, n).astype(np.int64)) * blk % _moduli(env.action)
    if not np.array_equal(lhs, rhs):
        raise InternalError("restriction law fails in the block view")
    checks["restriction"] = True
    return Globalization(env, n, u, U, ext, checks)


def restrict_cochain(env: EnvelopingAction, u: Cochain) -> Cochain:
    """The partial cochain w with phi(w(x)) = phi(1_(x)) u(x)."""
    if u.action is not env.action:
        raise NotACochain("global cochain belongs to a different envelope")
    mask = domain_mask(env.source, u.degree)
    return Cochain(env.source, u.degree, env.unembed_values(u.values) * mask)


def transport(env_from: EnvelopingAction, env_to: EnvelopingAction, u: Cochain) -> Cochain:
    """Move a global cochain between envelopes built on different transversals."""
    if env_from.source is not env_to.source or env_from.td.base != env_to.td.base:
        raise InvalidParameter("envelopes must share the source action and the base block")
    V = np.empty((u.values.shape[0], len(env_to.ring)), dtype=np.int64)
    bar = env_to.td.bar
    pos = env_to.td.position
    for i, g in enumerate(env_from.transversal):
        V[:, pos[bar[g]]] = u.values[:, i]
    return Cochain(env_to.action, u.degree, V)


@dataclass(eq=False)
class OrbitGlobalization:
    blocks: list
    action: PartialAction
    envelope: EnvelopingAction
    w: Cochain
    u: Cochain
    globalization: Globalization


@dataclass(eq=False)
class GlobalizeReport:
    degree: int
    orbits: list
    checks: dict

    @property
    def valid(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "orbits": [
                {
                    "blocks": o.blocks,
                    "envelope": o.envelope.to_json(),
                    "u": o.u.to_json(),
                    "checks": dict(sorted(o.globalization.checks.items())),
                }
                for o in self.orbits
            ],
            "checks": dict(sorted(self.checks.items())),
        }


def components(pa: PartialAction) -> list:
    """(blocks, orbit action) per orbit; the same objects on every call."""
    c = pa._cache
    if "components" not in c:
        parts = orbits(pa)
        if len(parts) == 1:
            c["components"] = [(parts[0], pa)]
        else:
            c["components"] = [(blocks, restrict_to_blocks(pa, blocks)) for blocks in parts]
    return c["components"]


def globalize(pa: PartialAction, w: Cochain, order=None) -> GlobalizeReport:
    """Globalise a partial cocycle orbit by orbit, verifying every identity on the way."""
    if w.action is not pa:
        raise NotACochain("cocycle belongs to a different action")
    bad = cocycle_violation(pa, w)
    if bad is not None:
        raise NotACocycle(f"cocycle identity fails at {bad}")
    results = []
    for blocks, sub in components(pa):
        wsub = w if sub is pa else Cochain(sub, w.degree, w.values[:, blocks])
        env = build_enveloping(sub, order=order)
        ext = w_tilde(env.td, wsub)
        glob = lift_global(env, ext)
        results.append(OrbitGlobalization(list(blocks), sub, env, wsub, glob.u, glob))
    checks = {}
    for key in ("global_cocycle", "restriction", "germ"):
        checks[key] = all(r.globalization.checks.get(key, False) for r in results)
    return GlobalizeReport(w.degree, results, checks)


@dataclass(eq=False)
class Comparison:
    witness: Cochain
    method: str


def compare_globalizations(env: EnvelopingAction, u1: Cochain, u2: Cochain, xi: Cochain | None = None) -> Comparison:
    """A global cochain zeta with u2 = u1 * delta(zeta), verified by multiplication.

    The witness is built from the transport construction on the envelope;
    if that ever fails to verify, a lattice search over the envelope is used.
    """
    n = u1.degree
    if u2.degree != n:
        raise InvalidParameter("globalizations of different degrees")
    if n < 1:
        raise InvalidParameter("degree-0 globalizations are compared by equality")
    for u in (u1, u2):
        if u.action is not env.action:
            raise NotACochain("global cochain belongs to a different envelope")
        bad = cocycle_violation(env.action, u)
        if bad is not None:
            raise NotACocycle(f"global cocycle identity fails at {bad}")
    src = env.source
    w1, w2 = restrict_cochain(env, u1), restrict_cochain(env, u2)
    if xi is None:
        if w1 == w2:
            xi = identity_cochain(src, n - 1)
        else:
            xi = cohomologous(src, w1, w2)
            if xi is None:
                raise NotCohomologous("the restricted partial cocycles are not cohomologous")
    elif w2 != w1 * delta(src, xi):
        raise NotCohomologous("supplied witness does not relate the restricted cocycles")
    gtd = env.global_td()
    e1, e2 = epsilon(gtd, u1), epsilon(gtd, u2)
    G = src.group
    td = env.td
    V = np.empty((G.order ** (n - 1), len(env.ring)), dtype=np.int64)
    for r, ys in enumerate(G.tuples(n - 1)):
        for i, g in enumerate(td.transversal):
            V[r, i] = xi.values[tuple_index(G.order, td.tau(g, ys)), td.base]
    xi_prime = Cochain(env.action, n - 1, V)
    zeta = e2 / e1 * xi_prime
    if u1 * delta(env.action, zeta) == u2:
        return Comparison(zeta, "constructive")
    from .cohomology import solve_coboundary

    zeta = solve_coboundary(env.action, u2 / u1)
    if zeta is None:
        raise NotCohomologous("no global cochain relates the two globalizations")
    return Comparison(zeta, "lattice")
