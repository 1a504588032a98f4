"""Acceptance suite: eight exact criteria, each printing one PASS/FAIL line.

Run alone with ``python3 tests/test_acceptance.py`` or ``pytest tests/test_acceptance.py -s``.
Checks that need the cocycle identity evaluate it tuple by tuple with scalar
ring arithmetic rather than through the vectorized coboundary.
"""

from __future__ import annotations

import functools
import random
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from pcohom.cochain import (
    Cochain,
    delta,
    delta_values,
    domain_mask,
    identity_cochain,
    is_cocycle,
    random_cochain,
)
from pcohom.cohomology import cohomology, cohomology_bruteforce, present_cochain_group, random_cocycle
from pcohom.fixtures import (
    dihedral_example,
    fixture1,
    fixture2,
    fixture3,
    random_instance,
    trivial_global,
    two_orbit_example,
)
from pcohom.globalize import (
    build_enveloping,
    compare_globalizations,
    epsilon,
    globalize,
    lift_global,
    transport,
    w_prime,
    w_tilde,
)
from pcohom.group import make_cyclic

ROOT = Path(__file__).resolve().parent.parent
FIX = ROOT / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"
BOUND = 2 ** 20

FIXTURES = {"fixture1": fixture1, "fixture2": fixture2, "fixture3": fixture3}


def announce(capsys, number: int, title: str, ok: bool, elapsed: float, detail: str = ""):
    line = f"ACCEPTANCE {number} {title}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f} s)"
    if detail:
        line += f" {detail}"
    with capsys.disabled():
        print("\n" + line)


def scalar_identity(pa, table, xs):
    """alpha_x1(1_{x1^-1} t(x2..)) * prod t(..x_i x_(i+1)..)^(-1)^i * t(x1..xn)^(-1)^(n+1).

    ``table`` maps an n-tuple to a unit of the whole ring.
    """
    G, R = pa.group, pa.ring
    n = len(xs) - 1
    x1 = xs[0]

    def signed(v, k):
        return R.inverse_in_ideal(v, R.full) if k % 2 else v

    acc = pa.apply(x1, R.project(table(tuple(xs[1:])), pa.domain[G.inv(x1)]))
    for i in range(1, n + 1):
        glued = xs[:i - 1] + (G.mul(xs[i - 1], xs[i]),) + xs[i + 1:]
        acc = R.mul(acc, signed(table(tuple(glued)), i))
    return R.mul(acc, signed(table(tuple(xs[:-1])), n + 1))


def as_tuple(row) -> tuple:
    return tuple(int(v) for v in row)


@functools.lru_cache(maxsize=None)
def fixture_cocycles():
    """25 seeded random cocycles per fixture per degree 1..3, with generation time."""
    rng = random.Random(2026)
    start = time.perf_counter()
    out = {}
    for name, make in FIXTURES.items():
        pa = make()
        for n in (1, 2, 3):
            out[name, n] = (pa, [random_cocycle(pa, n, rng) for _ in range(25)])
    return out, time.perf_counter() - start


def test_criterion_1_delta_squared(capsys):
    rng = random.Random(1)
    actions = [make() for make in FIXTURES.values()]
    inst = random.Random(20)
    actions += [random_instance(inst) for _ in range(20)]
    start = time.perf_counter()
    failures = []
    for k, pa in enumerate(actions):
        for n in (0, 1, 2):
            e = identity_cochain(pa, n + 2)
            for _ in range(25):
                f = random_cochain(pa, n, rng)
                if delta(pa, delta(pa, f)) != e:
                    failures.append((k, n))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 10
    announce(capsys, 1, "delta squares to the identity", ok, elapsed,
             f"[{len(actions)} actions x 3 degrees x 25 cochains]")
    assert not failures, failures[:5]
    assert elapsed < 10


def test_criterion_2_transport(capsys):
    data, gen_time = fixture_cocycles()
    start = time.perf_counter()
    failures = []
    for (name, n), (pa, ws) in data.items():
        td = build_enveloping(pa).td
        for i, w in enumerate(ws):
            wp = w_prime(td, w)
            if delta(pa, epsilon(td, w)) * wp != w or not is_cocycle(pa, wp):
                failures.append((name, n, i))
    elapsed = time.perf_counter() - start + gen_time
    ok = not failures and elapsed < 30
    announce(capsys, 2, "w = delta(eps) w' with w' a cocycle", ok, elapsed, f"[{25 * len(data)} cocycles]")
    assert not failures, failures[:5]
    assert elapsed < 30


def check_globalization(pa, w) -> list[str]:
    problems = []
    env = build_enveloping(pa)
    G = pa.group
    n = w.degree
    ext = w_tilde(env.td, w)
    wt = ext.w_tilde
    if not np.array_equal(wt.values * domain_mask(pa, n), w.values):
        problems.append("restriction of w~")
    one = {x: pa.one(x) for x in G.elements}
    for xs in G.tuples(n + 1):
        if scalar_identity(pa, lambda ys: wt[ys], xs) != one[xs[0]]:
            problems.append(f"extended identity at {xs}")
            break
    glob = lift_global(env, ext)
    u = glob.u
    genv, R = env.action, env.ring
    for xs in G.tuples(n + 1):
        if scalar_identity(genv, lambda ys: u[ys], xs) != R.one:
            problems.append(f"global cocycle identity at {xs}")
            break
    for xs in G.tuples(n):
        lhs = env.phi(w[xs])
        rhs = R.mul(env.phi(pa.ring.idempotent(pa.tuple_domain(xs))), u[xs])
        if lhs != rhs:
            problems.append(f"restriction law of u at {xs}")
            break
    if not np.array_equal(glob.u_function[:, G.identity], wt.values):
        problems.append("germ at the identity")
    return problems


def test_criterion_3_globalization(capsys):
    data, _ = fixture_cocycles()
    start = time.perf_counter()
    failures = []
    for (name, n), (pa, ws) in data.items():
        for i, w in enumerate(ws):
            problems = check_globalization(pa, w)
            if problems:
                failures.append((name, n, i, problems[0]))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    announce(capsys, 3, "extension and global lift", ok, elapsed, f"[{25 * len(data)} cocycles]")
    assert not failures, failures[:5]
    assert elapsed < 60


def test_criterion_4_uniqueness(capsys):
    rng = random.Random(4)
    start = time.perf_counter()
    failures = []
    checked = 0
    distinct = []
    for name, make in FIXTURES.items():
        pa = make()
        env1 = build_enveloping(pa)
        env2 = build_enveloping(pa, order=list(reversed(pa.group.elements)))
        if env1.transversal != env2.transversal:
            distinct.append(name)
        for n in (1, 2):
            for i in range(10):
                w = random_cocycle(pa, n, rng)
                u1 = lift_global(env1, w_tilde(env1.td, w)).u
                u2 = transport(env2, env1, lift_global(env2, w_tilde(env2.td, w)).u)
                zeta = compare_globalizations(env1, u1, u2).witness
                checked += 1
                if u1 * delta(env1.action, zeta) != u2:
                    failures.append((name, n, i))
    elapsed = time.perf_counter() - start
    announce(capsys, 4, "globalizations are cohomologous", not failures, elapsed,
             f"[{checked} pairs; transversals differ for {', '.join(distinct)}]")
    assert not failures, failures


def bruteforce_instances():
    out = [(name, make()) for name, make in FIXTURES.items()]
    out += [("two_orbit", two_orbit_example()), ("dihedral", dihedral_example())]
    out += [(f"random{s}", random_instance(random.Random(s))) for s in range(1000, 1020)]
    return out


def test_criterion_5_snf_matches_bruteforce(capsys):
    start = time.perf_counter()
    anchors = [
        ("H1(Z2, U(Z5))", fixture3(), 1, (2,)),
        ("H2(Z2, U(Z3))", trivial_global(make_cyclic(2), (3,)), 2, (2,)),
    ]
    failures = []
    for label, pa, n, expected in anchors:
        brute = cohomology_bruteforce(pa, n).invariant_factors
        snf = cohomology(pa, n).invariant_factors
        if not brute == snf == expected:
            failures.append((label, brute, snf))
    checked = skipped = 0
    for label, pa in bruteforce_instances():
        for n in range(4):
            sizes = [present_cochain_group(pa, n).order]
            if n:
                sizes.append(present_cochain_group(pa, n - 1).order)
            if max(sizes) > BOUND:
                skipped += 1
                continue
            checked += 1
            brute = cohomology_bruteforce(pa, n).invariant_factors
            snf = cohomology(pa, n).invariant_factors
            if brute != snf:
                failures.append((label, n, brute, snf))
    elapsed = time.perf_counter() - start
    announce(capsys, 5, "SNF factors equal brute force", not failures, elapsed,
             f"[2 anchors, {checked} instance-degrees, {skipped} above 2^20]")
    assert not failures, failures


def test_criterion_6_partial_global_iso(capsys):
    start = time.perf_counter()
    failures = []
    table = {}
    for name in ("fixture1", "fixture2"):
        pa = FIXTURES[name]()
        env = build_enveloping(pa)
        for n in (0, 1, 2):
            partial = cohomology(pa, n).invariant_factors
            glob = cohomology(env.action, n).invariant_factors
            table[name, n] = list(partial)
            if partial != glob:
                failures.append((name, n, partial, glob))
    elapsed = time.perf_counter() - start
    announce(capsys, 6, "partial and global cohomology agree", not failures, elapsed,
             "[" + "; ".join(f"{k[0]} H{k[1]}={v}" for k, v in table.items()) + "]")
    assert not failures, failures


def zero_cocycles(pa):
    pres = present_cochain_group(pa, 0)
    X = np.array(np.meshgrid(*[np.arange(o) for o in pres.orders], indexing="ij")).reshape(len(pres.orders), -1).T
    V = pres.decode_values(X)
    ident = identity_cochain(pa, 1).values
    ok = (delta_values(pa, 0, V) == ident).all(axis=(1, 2))
    return V[ok]


def test_criterion_7_degree_zero(capsys):
    start = time.perf_counter()
    failures = []
    checked = 0
    actions = [make() for make in FIXTURES.values()] + [two_orbit_example(), dihedral_example()]
    for k, pa in enumerate(actions):
        for V in zero_cocycles(pa):
            w = Cochain(pa, 0, V)
            for o in globalize(pa, w).orbits:
                env, sub = o.envelope, o.action
                g = o.globalization
                wv = as_tuple(o.w.values[0])
                if not all(as_tuple(g.u_function[0, t]) == wv for t in sub.group.elements):
                    failures.append((k, wv, "not constant"))
                R, genv = env.ring, env.action
                target = env.phi(wv)
                phi_one = env.phi(sub.ring.one)
                survivors = [
                    v for v in R.units(R.full)
                    if all(genv.apply(x, v) == v for x in sub.group.elements) and R.mul(phi_one, v) == target
                ]
                checked += 1
                if survivors != [as_tuple(o.u.values[0])]:
                    failures.append((k, wv, survivors))
    elapsed = time.perf_counter() - start
    announce(capsys, 7, "degree-0 globalization is the unique constant", not failures, elapsed,
             f"[{checked} orbit cocycles, every envelope unit tried]")
    assert not failures, failures[:5]


GOLDEN_RUNS = {
    "verify_fixture1.json": ["verify", "fixture1.json", "--seed", "42", "--trials", "25", "--degrees", "1,2"],
    "verify_fixture2.json": ["verify", "fixture2.json", "--seed", "7", "--trials", "25", "--degrees", "3"],
    "verify_fixture3.json": ["verify", "fixture3.json", "--seed", "3", "--trials", "25", "--degrees", "0,1,2"],
}


def test_criterion_8_cli_determinism(capsys, tmp_path):
    start = time.perf_counter()
    failures = []
    for golden, args in GOLDEN_RUNS.items():
        argv = [args[0], str(FIX / args[1]), *args[2:]]
        outs = []
        for run in range(2):
            target = tmp_path / f"{run}_{golden}"
            proc = subprocess.run([sys.executable, "-m", "pcohom", *argv, "-o", str(target)],
                                  capture_output=True, cwd=tmp_path)
            if proc.returncode != 0:
                failures.append((golden, run, proc.returncode, proc.stderr.decode()[-200:]))
            outs.append(target.read_bytes() if target.exists() else b"")
        if outs[0] != outs[1]:
            failures.append((golden, "runs differ"))
        if outs[0] != (GOLDEN / golden).read_bytes():
            failures.append((golden, "differs from golden"))
    elapsed = time.perf_counter() - start
    announce(capsys, 8, "CLI reports are deterministic", not failures, elapsed,
             f"[{len(GOLDEN_RUNS)} golden files, 2 runs each]")
    assert not failures, failures


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
