"""
Tests for group construction, subgroups, cosets, quotients and the derived series.
"""
import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grouplens.core.groups import (
    Group,
    Subgroup,
    derived_series,
    derived_subgroup,
    element_order,
    from_cayley_table,
    from_permutations,
    index,
    inv,
    is_normal,
    is_soluble,
    left_cosets,
    make_alternating,
    make_cyclic,
    make_dihedral,
    make_direct_product,
    make_symmetric,
    mod_inverse,
    mul,
    normal_closure,
    normal_subgroups,
    normalizer,
    p_part,
    right_cosets,
    subgroup_closure,
    subgroup_from_members,
    trivial_subgroup,
    whole_group,
)
from grouplens.core.catalog import CATALOG_SPECS, parse_group_spec
from grouplens.core.quotients import quotient
from grouplens.errors import (
    ContainmentError,
    CoprimalityError,
    ElementRangeError,
    GroupValidationError,
    InvalidOrderError,
    InvariantViolationError,
    NormalityError,
    SizeLimitError,
)

SMALL_GROUPS = [
    make_cyclic(1),
    make_cyclic(6),
    make_symmetric(3),
    make_dihedral(4),
    make_alternating(4),
    make_direct_product(make_cyclic(2), make_cyclic(2)),
]


def test_make_cyclic():
    """Test cyclic tables and inverses."""
    assert make_cyclic(1).order == 1
    z6 = make_cyclic(6)
    assert z6.rows[2][5] == 1
    assert make_cyclic(3).inverses[1] == 2
    with pytest.raises(InvalidOrderError):
        make_cyclic(0)


def test_make_symmetric(s3: Group, s4: Group):
    """Test symmetric groups in lexicographic one-line order."""
    assert s3.order == 6
    assert s4.order == 24
    assert s3.labels == ("012", "021", "102", "120", "201", "210")
    assert s3.order_statistics() == {1: 1, 2: 3, 3: 2}
    with pytest.raises(SizeLimitError):
        make_symmetric(7)


def test_permutation_product_applies_left_factor_first(s3: Group):
    """(a·b)(i) = b(a(i))."""
    for a, b in itertools.product(s3.elements, repeat=2):
        pa, pb = s3.permutations[a], s3.permutations[b]
        assert s3.permutations[s3.mul(a, b)] == tuple(pb[pa[i]] for i in range(3))


def test_make_alternating(a4: Group):
    """Test A4 keeps the even permutations."""
    assert a4.order == 12
    assert a4.order_statistics() == {1: 1, 2: 3, 3: 8}


def test_dihedral_and_product():
    """Test D_n and direct products."""
    d5 = make_dihedral(5)
    assert d5.order == 10
    assert d5.order_statistics() == {1: 1, 2: 5, 5: 4}
    klein = make_direct_product(make_cyclic(2), make_cyclic(2))
    assert klein.order == 4
    assert all(klein.element_order(x) == 2 for x in klein.elements[1:])


def test_from_permutations_matches_symmetric(s3: Group):
    """Test closure of a 3-cycle and a swap gives a copy of S3."""
    g = from_permutations(3, [(1, 2, 0), (1, 0, 2)])
    assert g.order == 6
    assert g.order_statistics() == s3.order_statistics()
    assert g.labels[0] == "012"


def test_from_permutations_cap():
    """Test the element cap stops runaway closures."""
    with pytest.raises(SizeLimitError):
        from_permutations(5, [(1, 2, 3, 4, 0), (1, 0, 2, 3, 4)], cap=100)
    with pytest.raises(GroupValidationError):
        from_permutations(3, [(0, 0, 1)])


def test_from_cayley_table_validation():
    """Test imported tables are checked for every axiom."""
    z2 = from_cayley_table([[0, 1], [1, 0]])
    assert z2 == make_cyclic(2)
    with pytest.raises(GroupValidationError):
        from_cayley_table([[0, 1], [1, 1]])
    with pytest.raises(GroupValidationError):
        from_cayley_table([[1, 0], [0, 1]])


def test_non_associative_table_names_triple():
    """A latin square with identity that is not associative."""
    table = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(GroupValidationError) as exc_info:
        from_cayley_table(table)
    assert "triple" in exc_info.value.witness


def test_element_arithmetic(z6: Group, s3: Group):
    """Test mul, inv and element_order."""
    assert mul(z6, 4, 5) == 3
    assert inv(z6, 1) == 5
    assert element_order(z6, 2) == 3
    assert element_order(s3, 0) == 1
    assert {element_order(s3, x) for x in (1, 2, 5)} == {2}
    with pytest.raises(ElementRangeError):
        mul(z6, 0, 6)


def test_power(s3: Group):
    """Test powers, including negative exponents."""
    r = s3.element("120")
    assert s3.power(r, 3) == 0
    assert s3.power(r, -1) == s3.inv(r)
    assert s3.power(r, 0) == 0


def test_subgroup_closure(z6: Group, s3: Group):
    """Test closures."""
    assert subgroup_closure(z6, []).members == (0,)
    assert subgroup_closure(z6, [2]).members == (0, 2, 4)
    assert subgroup_closure(s3, [3, 1]).order == 6


def test_subgroup_from_members_rejects_open_sets(s3: Group):
    with pytest.raises(InvariantViolationError):
        subgroup_from_members(s3, [0, 1, 2])


def test_subgroup_rejects_open_member_sets(s3: Group):
    """Closure is enforced even when Subgroup is built directly."""
    with pytest.raises(InvariantViolationError) as info:
        Subgroup(s3, (0, 1, 2), ())
    assert info.value.witness == {"pair": [1, 2]}
    assert Subgroup(s3, (0, 3, 4), (3,)).order == 3


def test_local_indices(s3: Group, a3):
    """Test the subgroup as a group in its own right."""
    local = a3.as_group
    assert local.order == 3
    assert local.is_abelian
    assert [a3.to_parent(i) for i in range(3)] == [0, 3, 4]
    with pytest.raises(ContainmentError):
        a3.to_local(1)


def test_normalizer_and_normality(s3: Group, a3):
    """Test normalizers and the index-2 normal subgroup."""
    assert normalizer(s3, whole_group(s3)) == whole_group(s3)
    swap = subgroup_closure(s3, [1])
    assert normalizer(s3, swap) == swap
    assert is_normal(s3, a3)
    assert not is_normal(s3, swap)
    for g in SMALL_GROUPS:
        for x in g.elements:
            s = subgroup_closure(g, [x])
            assert s.is_subgroup_of(normalizer(g, s))
            assert is_normal(g, s) == (normalizer(g, s) == whole_group(g))


def test_normal_subgroups(s4: Group):
    """S4 has exactly 1, V4, A4 and S4 as normal subgroups."""
    assert [n.order for n in normal_subgroups(s4)] == [1, 4, 12, 24]
    assert normal_closure(s4, [s4.element("1023")]) == whole_group(s4)


def test_left_cosets(z6: Group, s3: Group, a3):
    """Test canonical coset representatives."""
    assert left_cosets(z6, whole_group(z6)).representatives == (0,)
    assert left_cosets(s3, a3).index == 2
    assert left_cosets(z6, subgroup_closure(z6, [2])).representatives == (0, 1)


def test_cosets_decompose(s3: Group):
    """Test x = t·h for left cosets and x = h·t for right cosets."""
    swap = subgroup_closure(s3, [1])
    for cosets in (left_cosets(s3, swap), right_cosets(s3, swap)):
        for x in s3.elements:
            h, t = cosets.decompose(x)
            assert h in swap
            expected = s3.mul(t, h) if cosets.side == "left" else s3.mul(h, t)
            assert expected == x


def test_with_representatives(s3: Group):
    """Test alternative transversals and their validation."""
    swap = subgroup_closure(s3, [1])
    cosets = right_cosets(s3, swap)
    rotated = cosets.rotated()
    assert rotated.representatives[0] == 0
    assert rotated.representatives != cosets.representatives
    assert [rotated.coset_of[r] for r in rotated.representatives] == [0, 1, 2]
    with pytest.raises(ContainmentError):
        cosets.with_representatives([0, 0, 3])
    with pytest.raises(ContainmentError):
        cosets.with_representatives([1, 3, 4])


def test_quotients(z6: Group, s3: Group, a3):
    """Test quotient tables and their projections."""
    assert quotient(s3, a3).group.order == 2
    q = quotient(z6, subgroup_closure(z6, [3]))
    assert q.group.order == 3
    assert q.group.order_statistics() == {1: 1, 3: 2}
    same = quotient(s3, trivial_subgroup(s3))
    assert same.group == s3
    with pytest.raises(NormalityError):
        quotient(s3, subgroup_closure(s3, [1]))


def test_projection_is_homomorphism_exhaustively():
    for g in SMALL_GROUPS:
        for n in normal_subgroups(g):
            q = quotient(g, n)
            proj = q.projection.values
            for a, b in itertools.product(g.elements, repeat=2):
                assert proj[g.rows[a][b]] == q.group.rows[proj[a]][proj[b]]
            assert q.group.order * n.order == g.order


def test_derived_series(s3: Group, s4: Group, z6: Group):
    """Test commutator subgroups and solubility."""
    assert derived_subgroup(z6, whole_group(z6)).is_trivial
    assert derived_subgroup(s3, whole_group(s3)).order == 3
    assert [s.order for s in derived_series(s4, whole_group(s4))] == [24, 12, 4, 1]
    assert is_soluble(s4, whole_group(s4))


def test_mod_inverse():
    assert mod_inverse(2, 3) == 2
    assert mod_inverse(1, 9) == 1
    assert mod_inverse(3, 7) == 5
    assert mod_inverse(5, 1) == 1
    with pytest.raises(CoprimalityError):
        mod_inverse(2, 4)


def test_p_part_and_index(s4: Group):
    assert p_part(24, 2) == 8
    assert p_part(24, 3) == 3
    assert p_part(24, 5) == 1
    assert index(s4, whole_group(s4)) == 1


def test_structural_equality():
    """Labels and names do not take part in equality."""
    a = make_cyclic(4)
    b = Group(a.table, labels=["e", "a", "b", "c"], name="other")
    assert a == b
    assert hash(a) == hash(b)
    assert a != make_direct_product(make_cyclic(2), make_cyclic(2))


def test_generators_generate():
    for g in SMALL_GROUPS:
        assert subgroup_closure(g, g.generators).order == g.order


@given(st.data())
@settings(max_examples=200, deadline=None)
def test_group_axioms_sampled(data):
    """Associativity, identity and inverses on sampled triples."""
    g = data.draw(st.sampled_from(SMALL_GROUPS))
    a, b, c = (data.draw(st.integers(0, g.order - 1)) for _ in range(3))
    rows = g.rows
    assert rows[rows[a][b]][c] == rows[a][rows[b][c]]
    assert rows[0][a] == rows[a][0] == a
    assert rows[a][g.inverses[a]] == rows[g.inverses[a]][a] == 0


@pytest.mark.parametrize("spec", CATALOG_SPECS)
def test_catalog_group_axioms_exhaustive(spec: str):
    """Associativity, identity and inverses on every element of every catalog group."""
    g = parse_group_spec(spec)
    assert Group(g.table, check_associativity=True) == g
    table, e = g.table, np.arange(g.order)
    assert np.array_equal(table[0], e) and np.array_equal(table[:, 0], e)
    assert np.all(table[e, g.inverse] == 0)
    assert np.all(table[g.inverse, e] == 0)
    left = table[table]  # left[a, b, c] = (a·b)·c
    right = table[:, table]  # right[a, b, c] = a·(b·c)
    assert np.array_equal(left, right)


def test_tables_are_read_only(s3: Group):
    with pytest.raises(ValueError):
        s3.table[0, 0] = 1
    assert isinstance(s3.table, np.ndarray)
