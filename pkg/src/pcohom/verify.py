"""Seeded theorem suite over one action, the engine behind ``pcohom verify``.

Every randomized choice is drawn from one ``random.Random(seed)`` in a fixed
order, so identical inputs give identical reports.
"""

from __future__ import annotations

import random

from .action import PartialAction, validate
from .cochain import Cochain, delta, identity_cochain, is_cocycle, random_cochain
from .cohomology import (
    BRUTEFORCE_BOUND,
    cohomology,
    cohomology_bruteforce,
    invariant_factors_of_sum,
    present_cochain_group,
    random_cocycle,
)
from .errors import InternalError, InvalidAction, InvalidParameter, NotCohomologous
from .globalize import (
    build_enveloping,
    compare_globalizations,
    components,
    epsilon,
    lift_global,
    transport,
    w_prime,
    w_tilde,
)

MAX_DEGREE = 4
PROPERTIES = ("delta_squared", "transport_theorem", "w_tilde", "lift", "uniqueness", "partial_global_iso")


class _Check:
    def __init__(self):
        self.checked = 0
        self.failure = None
        self.notes: dict = {}

    def fail(self, sample, detail):
        if self.failure is None:
            self.failure = {"sample": sample, "detail": detail}

    def to_json(self) -> dict:
        out = {"pass": self.failure is None, "checked": self.checked, **self.notes}
        if self.failure is not None:
            out["counterexample"] = self.failure
        return out


def _orbit_cocycle(sub: PartialAction, blocks, w: Cochain) -> Cochain:
    return w if sub is w.action else Cochain(sub, w.degree, w.values[:, list(blocks)])


def _fmt(xs) -> str:
    return ",".join(map(str, xs))


def reversed_order(pa: PartialAction) -> list[int]:
    return list(reversed(pa.group.elements))


def verify_degree(pa: PartialAction, n: int, trials: int, rng: random.Random, oracle: bool = False,
                  bound: int = BRUTEFORCE_BOUND) -> dict:
    checks = {name: _Check() for name in PROPERTIES}

    c = checks["delta_squared"]
    e2 = identity_cochain(pa, n + 2)
    for i in range(trials):
        f = random_cochain(pa, n, rng)
        dd = delta(pa, delta(pa, f))
        c.checked += 1
        bad = dd.first_difference(e2)
        if bad is not None:
            c.fail(i, f"delta(delta(f)) differs from the identity at ({_fmt(bad)})")

    parts = components(pa)
    envs = [(blocks, sub, build_enveloping(sub), build_enveloping(sub, order=reversed_order(sub)))
            for blocks, sub in parts]
    methods: dict = {}
    for i in range(trials):
        w = random_cocycle(pa, n, rng)
        for blocks, sub, env1, env2 in envs:
            ws = _orbit_cocycle(sub, blocks, w)
            if n >= 1:
                c = checks["transport_theorem"]
                c.checked += 1
                eps, wp = epsilon(env1.td, ws), w_prime(env1.td, ws)
                bad = ws.first_difference(delta(sub, eps) * wp)
                if bad is not None:
                    c.fail(i, f"w differs from delta(eps) w' at ({_fmt(bad)})")
                elif not is_cocycle(sub, wp):
                    c.fail(i, "w' is not a cocycle")
            c = checks["w_tilde"]
            c.checked += 1
            try:
                ext1 = w_tilde(env1.td, ws)
            except InternalError as exc:
                c.fail(i, str(exc))
                continue
            c = checks["lift"]
            c.checked += 1
            try:
                g1 = lift_global(env1, ext1)
            except InternalError as exc:
                c.fail(i, str(exc))
                continue
            c = checks["uniqueness"]
            c.checked += 1
            try:
                g2 = lift_global(env2, w_tilde(env2.td, ws))
                u2 = transport(env2, env1, g2.u)
                if n == 0:
                    if u2 != g1.u:
                        c.fail(i, "degree-0 globalizations from two transversals differ")
                    continue
                cmp = compare_globalizations(env1, g1.u, u2)
                methods[cmp.method] = methods.get(cmp.method, 0) + 1
                if g1.u * delta(env1.action, cmp.witness) != u2:
                    c.fail(i, "witness does not satisfy u2 = u1 delta(zeta)")
            except (InternalError, NotCohomologous) as exc:
                c.fail(i, str(exc))
    if n == 0:
        checks["transport_theorem"].notes["applicable"] = False
    if methods:
        checks["uniqueness"].notes["witness_methods"] = dict(sorted(methods.items()))

    c = checks["partial_global_iso"]
    c.checked = 1
    partial = list(cohomology(pa, n).invariant_factors)
    glob = invariant_factors_of_sum(*(cohomology(env1.action, n).invariant_factors for _, _, env1, _ in envs))
    c.notes.update({"partial": partial, "global": glob})
    if partial != glob:
        c.fail(0, f"partial factors {partial} differ from global factors {glob}")

    out = {name: chk.to_json() for name, chk in checks.items()}
    if oracle:
        entry = {"checked": 0, "pass": True}
        if present_cochain_group(pa, n).order <= bound:
            brute = list(cohomology_bruteforce(pa, n, bound).invariant_factors)
            entry.update(checked=1, bruteforce=brute, **{"pass": brute == partial})
        else:
            entry["skipped"] = f"|C^{n}| exceeds the bound {bound}"
        out["oracle"] = entry
    return out


def verify(pa: PartialAction, degrees=(1, 2), trials: int = 25, seed: int = 0, oracle: bool = False,
           bound: int = BRUTEFORCE_BOUND) -> dict:
    """Run the theorem suite and return a JSON-ready report with a top-level "pass"."""
    report = validate(pa)
    if report:
        raise InvalidAction(f"invalid partial action: {report[0]}")
    degrees = sorted(set(int(n) for n in degrees))
    for n in degrees:
        if not 0 <= n <= MAX_DEGREE:
            raise InvalidParameter(f"degree {n} outside 0..{MAX_DEGREE}")
    if trials < 1:
        raise InvalidParameter("trials must be positive")
    rng = random.Random(seed)
    results = {str(n): verify_degree(pa, n, trials, rng, oracle, bound) for n in degrees}
    ok = all(entry["pass"] for res in results.values() for entry in res.values())
    return {"seed": seed, "trials": trials, "degrees": degrees, "results": results, "pass": ok}
