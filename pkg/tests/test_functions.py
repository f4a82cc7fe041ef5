"""
Tests for arbitrary functions, their conjugates, orbits and homomorphisms.
"""
import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grouplens.core.functions import (
    GroupFunction,
    act,
    as_homomorphism,
    conjugate,
    conjugate_set,
    constant_identity,
    coset_section,
    count_homomorphisms,
    enumerate_identity_preserving,
    extend_from_generators,
    hom_from_generator_images,
    identity_map,
    image_subgroup,
    inversion,
    is_fixed_point,
    is_homomorphism,
    orbit,
    orbit_partition,
    pointwise_inverse,
    pointwise_power,
    pointwise_product,
    random_function,
    stabilizer,
    verify_action_law,
    verify_product_rule,
)
from grouplens.core.groups import Group, make_cyclic, make_symmetric, whole_group
from grouplens.core.quotients import quotient
from grouplens.core.types import IDENTITY
from grouplens.errors import (
    CertificationError,
    ElementRangeError,
    ExtensionError,
    PreconditionError,
    ShapeError,
    SizeLimitError,
)

Z2, Z3, Z4, S3 = make_cyclic(2), make_cyclic(3), make_cyclic(4), make_symmetric(3)


def values_for(domain: Group, codomain: Group):
    """Strategy for identity-preserving value tuples."""
    tail = st.lists(
        st.integers(0, codomain.order - 1), min_size=domain.order - 1, max_size=domain.order - 1
    )
    return tail.map(lambda t: (IDENTITY, *t))


def test_group_function_validation(z2: Group, s3: Group):
    """Test shape and range checks on construction."""
    with pytest.raises(ShapeError):
        GroupFunction(z2, s3, [0])
    with pytest.raises(ElementRangeError):
        GroupFunction(z2, s3, [0, 6])
    f = GroupFunction(z2, s3, [0, 1])
    assert f(1) == 1
    assert f.identity_preserving
    assert not GroupFunction(z2, s3, [2, 1]).identity_preserving


def test_conjugate_formula(s3: Group, z3: Group):
    """f^a(x) = f(a)⁻¹ f(ax), computed by hand for one function."""
    f = GroupFunction(z3, s3, [0, 1, 3])
    fa = conjugate(f, 1)
    # f(1)⁻¹ = 1 since element 1 is a transposition
    expected = [s3.mul(1, f(z3.mul(1, x))) for x in z3.elements]
    assert list(fa.values) == expected
    assert fa.values[0] == IDENTITY


def test_conjugates_preserve_identity_even_from_arbitrary_functions(s3: Group, z2: Group):
    f = GroupFunction(z2, s3, [4, 1])
    assert all(conjugate(f, a).identity_preserving for a in z2.elements)


def test_action_law_exhaustive_z3_s3():
    """(f^a)^b = f^{ab} over every identity-preserving Z3 → S3."""
    for f in enumerate_identity_preserving(Z3, S3):
        for a, b in itertools.product(Z3.elements, repeat=2):
            assert verify_action_law(f, a, b)


def test_act_is_left_action(s3: Group, rng):
    f = random_function(s3, s3, rng)
    for a, b in itertools.product(s3.elements, repeat=2):
        assert act(act(f, b), a) == act(f, s3.mul(a, b))


def test_act_rejects_non_identity_preserving(z2: Group, s3: Group):
    with pytest.raises(PreconditionError):
        act(GroupFunction(z2, s3, [1, 0]), 1)


def test_fixed_points_are_homomorphisms():
    """Fixed points of the action are exactly the homomorphisms."""
    for f in enumerate_identity_preserving(Z2, S3):
        assert is_fixed_point(f) == is_homomorphism(f)
    for f in enumerate_identity_preserving(Z3, S3):
        assert is_fixed_point(f) == is_homomorphism(f)


def test_homomorphism_conjugates_to_itself(s3: Group):
    f = inversion(make_cyclic(6))
    assert conjugate_set(f) == {f.values}
    assert stabilizer(identity_map(s3)) == whole_group(s3)


def test_orbit_stabilizer(s3: Group, rng):
    """|orbit| · |Stab| = |G| and members are the right-coset conjugates."""
    for _ in range(10):
        f = random_function(s3, s3, rng)
        o = orbit(f)
        assert o.size * o.stabilizer.order == s3.order
        assert {m.values for m in o.members} == conjugate_set(f)
        assert o.representatives[0] == IDENTITY


def test_orbit_partition_census():
    """Z3 → S3 splits into 3 fixed points and 11 orbits of size 3."""
    sizes = [size for _, size in orbit_partition(enumerate_identity_preserving(Z3, S3))]
    assert sum(sizes) == 36
    assert sizes.count(1) == 3
    assert sizes.count(3) == 11
    sizes = [size for _, size in orbit_partition(enumerate_identity_preserving(Z2, S3))]
    assert sorted(sizes) == [1, 1, 1, 1, 2]


def test_enumeration_is_lexicographic_and_capped():
    functions = list(enumerate_identity_preserving(Z2, Z3))
    assert [f.values for f in functions] == [(0, 0), (0, 1), (0, 2)]
    with pytest.raises(SizeLimitError):
        list(enumerate_identity_preserving(S3, S3, cap=100))


def test_count_homomorphisms():
    assert count_homomorphisms(Z3, S3) == 3
    assert count_homomorphisms(Z2, S3) == 4
    assert count_homomorphisms(S3, S3) == 10
    assert count_homomorphisms(S3, Z2) == 2
    with pytest.raises(SizeLimitError):
        count_homomorphisms(S3, S3, cap=5)


def test_inversion_is_homomorphism_iff_abelian(s3: Group, z6: Group):
    assert is_homomorphism(inversion(z6))
    assert not is_homomorphism(inversion(s3))


def test_as_homomorphism_kernel_and_image(s3: Group, z2: Group):
    sign = GroupFunction(s3, z2, [0, 1, 1, 0, 0, 1])
    hom = as_homomorphism(sign)
    assert hom.kernel.members == (0, 3, 4)
    assert hom.image.order == 2
    with pytest.raises(CertificationError) as exc_info:
        as_homomorphism(GroupFunction(s3, z2, [0, 1, 0, 0, 0, 0]))
    assert "pair" in exc_info.value.witness


def test_extend_from_generators(s3: Group, z2: Group, z6: Group, z3: Group):
    """Generator images complete to a homomorphism or are rejected."""
    hom = hom_from_generator_images(z6, [2], z3)
    assert list(hom.values) == [0, 2, 1, 0, 2, 1]
    with pytest.raises(ExtensionError):
        extend_from_generators(z2, [1], [s3.element("120")], s3)
    with pytest.raises(ShapeError):
        extend_from_generators(z2, [1], [], s3)


def test_pointwise_operations(s3: Group, z3: Group):
    f = GroupFunction(z3, s3, [0, 1, 3])
    g = GroupFunction(z3, s3, [0, 2, 4])
    assert pointwise_product(f, g).values == tuple(s3.mul(a, b) for a, b in zip(f.values, g.values))
    assert pointwise_product(f, pointwise_inverse(f)) == constant_identity(z3, s3)
    assert pointwise_power(f, 6) == constant_identity(z3, s3)
    with pytest.raises(ShapeError):
        pointwise_product(f, GroupFunction(z3, z3, [0, 1, 2]))


def test_then_composes(s3: Group, z2: Group):
    f = identity_map(s3)
    sign = GroupFunction(s3, z2, [0, 1, 1, 0, 0, 1])
    assert f.then(sign) == sign
    with pytest.raises(ShapeError):
        sign.then(f)


def test_image_subgroup(z3: Group, s3: Group):
    f = GroupFunction(z3, s3, [0, 1, 0])
    assert image_subgroup(f).members == (0, 1)


def test_coset_section_projects(s3: Group, a3):
    """π ∘ f̂ is the target homomorphism for both transversals."""
    q = quotient(s3, a3)
    target = hom_from_generator_images(Z2, [1], q.group)
    for reps in (None, q.cosets.rotated().representatives):
        section = coset_section(q, target, reps)
        assert section.then(q.projection.function).values == target.values
    assert coset_section(q, target, q.cosets.rotated().representatives).values == (0, 5)


@given(values_for(Z4, S3), values_for(Z4, S3), st.integers(0, 3), st.integers(0, 3))
@settings(max_examples=200, deadline=None)
def test_product_rule(f_values, g_values, a, x):
    """(f*g)^a(x) = (f^a(x))^{g(a)} · g^a(x)."""
    f = GroupFunction(Z4, S3, f_values)
    g = GroupFunction(Z4, S3, g_values)
    assert verify_product_rule(f, g, a, x)


@given(values_for(S3, Z4), st.integers(0, 5), st.integers(0, 5))
@settings(max_examples=200, deadline=None)
def test_action_law_sampled(values, a, b):
    assert verify_action_law(GroupFunction(S3, Z4, values), a, b)


def test_random_function_respects_identity(rng):
    f = random_function(S3, Z4, rng)
    assert f.identity_preserving
    assert len(f.values) == S3.order
    g = random_function(S3, Z4, np.random.default_rng(1), identity_preserving=False)
    assert all(0 <= v < 4 for v in g.values)
