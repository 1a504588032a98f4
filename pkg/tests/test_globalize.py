import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pcohom.action import is_transitive, transitivity_data, validate
from pcohom.cochain import Cochain, delta, identity_cochain, is_cocycle, random_cochain
from pcohom.cohomology import random_cocycle, solve_coboundary
from pcohom.errors import InvalidParameter, NotACocycle, NotTransitive
from pcohom.fixtures import dihedral_example, fixture1, fixture2, fixture3, random_instance, two_orbit_example
from pcohom.globalize import (
    build_enveloping,
    compare_globalizations,
    epsilon,
    globalize,
    lift_global,
    reconstruction,
    restrict_cochain,
    transport,
    transport_identity,
    w_prime,
    w_tilde,
)


def transitive_instances():
    out = [fixture1(), fixture2(), fixture3(), dihedral_example()]
    rng = random.Random(11)
    while len(out) < 9:
        pa = random_instance(rng, max_orbits=1)
        if is_transitive(pa):
            out.append(pa)
    return out


def test_envelope_fixture1(f1):
    env = build_enveloping(f1)
    assert env.ring.blocks == (5, 5, 5)
    assert env.transversal == (0, 1, 2)
    assert env.beta[1] == (1, 2, 0)
    assert env.embed == {0: 0, 1: 1}
    assert env.restriction_matches()
    assert validate(env.action) == []


def test_envelope_of_global_action(f2):
    env = build_enveloping(f2)
    assert env.ring.blocks == (3, 3)
    assert env.transversal == (0, 1)
    assert env.beta[1] == (1, 0) and env.beta[2] == (0, 1)
    assert sorted(env.embed.values()) == [0, 1]
    assert env.restriction_matches()


@pytest.mark.parametrize("pa", transitive_instances())
def test_envelope_invariants(pa):
    env = build_enveloping(pa)
    G = pa.group
    for x in G.elements:
        for y in G.elements:
            xy = env.beta[G.mul(x, y)]
            assert xy == tuple(env.beta[x][env.beta[y][i]] for i in range(len(env.ring)))
    assert env.restriction_matches()
    # phi(1_g) = beta_g(phi(1_A)) phi(1_A) in the block view
    one = env.phi(pa.ring.one)
    for g in G.elements:
        moved = env.action.apply(g, one)
        assert env.phi(pa.one(g)) == env.ring.mul(moved, one)


def test_envelope_requires_transitivity():
    with pytest.raises(NotTransitive):
        build_enveloping(two_orbit_example())


def test_w_prime_and_epsilon_of_identity(f1):
    td = transitivity_data(f1)
    e1 = identity_cochain(f1, 1)
    assert w_prime(td, e1) == e1
    assert epsilon(td, e1) == identity_cochain(f1, 0)


def test_w_prime_trivial_stabilizer_specialisation(f1, rng):
    td = transitivity_data(f1)
    for _ in range(5):
        w = random_cochain(f1, 1, rng)
        wp = w_prime(td, w)
        base = w[(0,)][td.base]
        for x in f1.group.elements:
            expect = tuple(base if b in f1.tuple_domain((x,)) else 0 for b in range(2))
            assert wp[(x,)] == expect


@pytest.mark.parametrize("pa", transitive_instances())
def test_transport_theorem_and_reconstruction(pa):
    td = transitivity_data(pa)
    rng = random.Random(7)
    for n in (1, 2, 3):
        for _ in range(4):
            w = random_cocycle(pa, n, rng)
            assert transport_identity(td, w) is None
            assert w == delta(pa, epsilon(td, w)) * w_prime(td, w)
            assert is_cocycle(pa, w_prime(td, w))
            assert reconstruction(td, w) == w


def test_w_tilde_identity_cocycle(f1):
    ext = w_tilde(transitivity_data(f1), identity_cochain(f1, 1))
    mask = identity_cochain(f1, 1).values
    assert np.array_equal(ext.w_tilde.values * mask, mask)
    assert all(ext.checks.values())


@pytest.mark.parametrize("pa", transitive_instances())
def test_w_tilde_checks(pa):
    td = transitivity_data(pa)
    rng = random.Random(3)
    for n in (1, 2):
        ext = w_tilde(td, random_cocycle(pa, n, rng))
        assert set(ext.checks) == {"transport", "restriction", "extended_identity", "quasi_identity"}
        assert all(ext.checks.values())


def test_w_tilde_rejects_non_cocycle(f3):
    f = Cochain.from_table(f3, 1, {(0,): (2,), (1,): (3,)})
    with pytest.raises(NotACocycle):
        w_tilde(transitivity_data(f3), f)


def test_lift_fixture3_nontrivial_class(f3):
    w = Cochain.from_table(f3, 1, {(0,): (1,), (1,): (4,)})
    env = build_enveloping(f3)
    assert len(env.transversal) == 1
    g = lift_global(env, w_tilde(env.td, w))
    assert g.u[(1,)] == (4,) and g.u[(0,)] == (1,)


def test_lift_of_identity_is_a_coboundary(f1):
    env = build_enveloping(f1)
    g = lift_global(env, w_tilde(env.td, identity_cochain(f1, 1)))
    assert solve_coboundary(env.action, g.u) is not None


def test_globalize_degree_zero(f1):
    a = Cochain(f1, 0, [[2, 2]])
    rep = globalize(f1, a)
    assert rep.valid
    assert rep.orbits[0].u[()] == (2, 2, 2)


def test_globalize_two_orbits(rng):
    pa = two_orbit_example()
    for n in (0, 1, 2):
        w = random_cocycle(pa, n, rng)
        rep = globalize(pa, w)
        assert rep.valid and len(rep.orbits) == 2
        assert [o.blocks for o in rep.orbits] == [[0, 1], [2]]
        for o in rep.orbits:
            assert restrict_cochain(o.envelope, o.u) == o.w


def test_globalize_identity_class(any_action):
    for n in (1, 2):
        rep = globalize(any_action, identity_cochain(any_action, n))
        assert rep.valid
        for o in rep.orbits:
            assert solve_coboundary(o.envelope.action, o.u) is not None


def test_globalize_rejects_non_cocycle(f3):
    with pytest.raises(NotACocycle):
        globalize(f3, Cochain.from_table(f3, 1, {(0,): (2,), (1,): (3,)}))


def test_compare_trivial_and_constructed(f2, rng):
    env = build_enveloping(f2)
    w = random_cocycle(f2, 2, rng)
    u = globalize(f2, w).orbits[0].u
    cmp = compare_globalizations(env, u, u)
    assert u * delta(env.action, cmp.witness) == u
    zeta0 = random_cochain(env.action, 1, rng)
    u2 = u * delta(env.action, zeta0)
    cmp = compare_globalizations(env, u, u2)
    assert u * delta(env.action, cmp.witness) == u2


def test_compare_rejects_degree_zero(f1):
    env = build_enveloping(f1)
    u = globalize(f1, identity_cochain(f1, 0)).orbits[0].u
    with pytest.raises(InvalidParameter):
        compare_globalizations(env, u, u)


@pytest.mark.parametrize("pa", transitive_instances())
def test_two_transversal_orderings_are_cohomologous(pa):
    rng = random.Random(5)
    env1 = build_enveloping(pa)
    env2 = build_enveloping(pa, order=list(reversed(pa.group.elements)))
    for n in (1, 2):
        w = random_cocycle(pa, n, rng)
        u1 = lift_global(env1, w_tilde(env1.td, w)).u
        u2 = transport(env2, env1, lift_global(env2, w_tilde(env2.td, w)).u)
        cmp = compare_globalizations(env1, u1, u2)
        assert cmp.method == "constructive"
        assert u1 * delta(env1.action, cmp.witness) == u2


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 3))
def test_globalize_random_instances(seed, n):
    rng = random.Random(seed)
    pa = random_instance(rng)
    w = random_cocycle(pa, n, rng)
    rep = globalize(pa, w)
    assert rep.valid
    for o in rep.orbits:
        assert o.globalization.checks["germ"]
        assert restrict_cochain(o.envelope, o.u) == o.w
