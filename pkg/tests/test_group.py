import itertools

import pytest
from hypothesis import given, strategies as st

from pcohom.errors import InvalidParameter, NotAGroup
from pcohom.group import direct_product, make_cyclic, make_dihedral, make_from_table, make_symmetric

KLEIN = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]


def test_cyclic_small_tables():
    assert [list(r) for r in make_cyclic(1).table] == [[0]]
    assert [list(r) for r in make_cyclic(2).table] == [[0, 1], [1, 0]]
    assert list(make_cyclic(3).inverse) == [0, 2, 1]


def test_cyclic_zero_rejected():
    with pytest.raises(InvalidParameter):
        make_cyclic(0)


def test_from_table_detects_group():
    G = make_from_table([[0, 1], [1, 0]])
    assert G.order == 2 and G.identity == 0
    K = make_from_table(KLEIN)
    assert list(K.inverse) == [0, 1, 2, 3]


def test_from_table_missing_inverse():
    with pytest.raises(NotAGroup, match="1 has no inverse"):
        make_from_table([[0, 1], [1, 1]])


def test_from_table_non_associative():
    # a Latin square with identity 0 that is not associative
    table = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(NotAGroup, match="associativity"):
        make_from_table(table)


def test_identity_not_at_zero():
    # Z2 with the identity stored at index 1
    G = make_from_table([[1, 0], [0, 1]])
    assert G.identity == 1
    assert G.inv(0) == 0


def test_order_cap():
    with pytest.raises(InvalidParameter):
        make_cyclic(65)


def test_direct_products():
    V = direct_product(make_cyclic(2), make_cyclic(2))
    assert [list(r) for r in V.table] == KLEIN
    G = make_symmetric(3)
    T = direct_product(G, make_cyclic(1))
    assert T.table == G.table
    C6 = direct_product(make_cyclic(2), make_cyclic(3))
    assert C6.order == 6
    # (1, 1) has index 1*3 + 1
    assert C6.element_order(4) == 6


@pytest.mark.parametrize("G", [make_cyclic(5), make_symmetric(3), make_dihedral(4),
                               direct_product(make_cyclic(2), make_cyclic(4))])
def test_constructed_groups_satisfy_axioms(G):
    el = G.elements
    for x, y, z in itertools.product(el, repeat=3):
        assert G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z))
    assert all(G.inv(G.inv(x)) == x for x in el)
    assert G.inv(G.identity) == G.identity
    make_from_table(G.table)


@given(st.integers(min_value=1, max_value=12))
def test_cyclic_is_abelian(n):
    G = make_cyclic(n)
    assert G.is_abelian()
    assert all(G.table[i][j] == G.table[j][i] for i in G.elements for j in G.elements)


def test_symmetric_not_abelian():
    assert not make_symmetric(3).is_abelian()
    assert make_symmetric(3).order == 6


def test_tuples_and_subgroups():
    G = make_cyclic(4)
    assert list(G.tuples(2))[:3] == [(0, 0), (0, 1), (0, 2)]
    assert list(G.tuples(0)) == [()]
    assert G.generated_subgroup([2]) == frozenset({0, 2})
    assert G.generated_subgroup([]) == frozenset({0})
    assert G.power(1, 3) == 3 and G.power(1, -1) == 3
