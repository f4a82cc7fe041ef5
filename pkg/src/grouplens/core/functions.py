"""
Arbitrary functions between finite groups as data.

The conjugate of f by a is f^a(x) = f(a)⁻¹ f(ax). Conjugates are identity
preserving, (f^a)^b = f^{ab}, and f ↦ f^{(a⁻¹)} is a left action of the
domain on identity-preserving functions whose fixed points are exactly the
homomorphisms.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Iterator, Optional, Sequence

import numpy as np

from grouplens.config import get_settings
from grouplens.core.groups import (
    Group,
    Subgroup,
    right_cosets,
    subgroup_closure,
    subgroup_from_members,
)
from grouplens.core.types import IDENTITY, Element, Values
from grouplens.errors import (
    CertificationError,
    ElementRangeError,
    ExtensionError,
    InvariantViolationError,
    PreconditionError,
    ShapeError,
    SizeLimitError,
)

if TYPE_CHECKING:
    from grouplens.core.quotients import QuotientGroup

logger = logging.getLogger(__name__)


class GroupFunction:
    """A total function domain → codomain stored as a dense value array."""

    __slots__ = ("domain", "codomain", "values")

    def __init__(self, domain: Group, codomain: Group, values: Iterable[int]):
        vals: Values = tuple(int(v) for v in values)
        if len(vals) != domain.order:
            raise ShapeError(
                "Function needs one value per domain element",
                {"values": len(vals), "domain_order": domain.order},
            )
        m = codomain.order
        for x, v in enumerate(vals):
            if not 0 <= v < m:
                raise ElementRangeError(
                    "Function value outside the codomain", {"element": x, "value": v}
                )
        self.domain = domain
        self.codomain = codomain
        self.values = vals

    def __call__(self, x: Element) -> Element:
        return self.values[x]

    @property
    def identity_preserving(self) -> bool:
        return self.values[0] == IDENTITY

    def then(self, other: "GroupFunction") -> "GroupFunction":
        """other ∘ self."""
        if self.codomain != other.domain:
            raise ShapeError("Cannot compose: codomain and domain differ")
        return GroupFunction(self.domain, other.codomain, (other.values[v] for v in self.values))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupFunction):
            return NotImplemented
        return (
            self.values == other.values
            and self.domain == other.domain
            and self.codomain == other.codomain
        )

    def __hash__(self) -> int:
        return hash(self.values)

    def __repr__(self) -> str:
        return f"GroupFunction({self.domain.name}→{self.codomain.name}, {list(self.values)})"


@dataclass(frozen=True)
class Homomorphism:
    """A GroupFunction certified to preserve products, with kernel and image."""

    function: GroupFunction
    kernel: Subgroup
    image: Subgroup

    @property
    def domain(self) -> Group:
        return self.function.domain

    @property
    def codomain(self) -> Group:
        return self.function.codomain

    @property
    def values(self) -> Values:
        return self.function.values

    @property
    def is_trivial(self) -> bool:
        return self.image.is_trivial

    def __call__(self, x: Element) -> Element:
        return self.function.values[x]


@dataclass(frozen=True)
class FunctionOrbit:
    """
    The distinct conjugates of a function.

    members[i] = conjugate(base, representatives[i]); the representatives are
    the canonical right-coset representatives of the stabilizer, since
    f^{s·a} = f^a whenever s stabilizes f.
    """

    base: GroupFunction
    representatives: tuple[Element, ...]
    members: tuple[GroupFunction, ...]
    stabilizer: Subgroup

    def __post_init__(self):
        if len(self.members) * self.stabilizer.order != self.base.domain.order:
            raise InvariantViolationError(
                "Orbit-stabilizer count failed",
                {"orbit": len(self.members), "stabilizer": self.stabilizer.order},
            )

    @property
    def size(self) -> int:
        return len(self.members)


# Constructors


def constant_identity(domain: Group, codomain: Group) -> GroupFunction:
    return GroupFunction(domain, codomain, [IDENTITY] * domain.order)


def inversion(group: Group) -> GroupFunction:
    """The map g ↦ g⁻¹, a homomorphism exactly when the group is abelian."""
    return GroupFunction(group, group, group.inverses)


def identity_map(group: Group) -> GroupFunction:
    return GroupFunction(group, group, group.elements)


# The function action


def conjugate(f: GroupFunction, a: Element) -> GroupFunction:
    """f^a(x) = f(a)⁻¹ f(ax)."""
    f.domain.check(a)
    vals = f.values
    row_fa = f.codomain.rows[f.codomain.inverses[vals[a]]]
    return GroupFunction(f.domain, f.codomain, [row_fa[vals[y]] for y in f.domain.rows[a]])


def _require_identity_preserving(f: GroupFunction) -> None:
    if not f.identity_preserving:
        raise PreconditionError(
            "The function action is defined on identity-preserving functions only",
            {"value_at_identity": f.values[0]},
        )


def act(f: GroupFunction, a: Element) -> GroupFunction:
    """a · f = f^{(a⁻¹)}."""
    _require_identity_preserving(f)
    return conjugate(f, f.domain.inv(a))


def pointwise_product(f: GroupFunction, g: GroupFunction) -> GroupFunction:
    """(f*g)(x) = f(x)g(x)."""
    if f.domain != g.domain or f.codomain != g.codomain:
        raise ShapeError("Pointwise product needs matching domain and codomain")
    rows = f.codomain.rows
    return GroupFunction(f.domain, f.codomain, [rows[a][b] for a, b in zip(f.values, g.values)])


def pointwise_inverse(f: GroupFunction) -> GroupFunction:
    inv = f.codomain.inverses
    return GroupFunction(f.domain, f.codomain, [inv[v] for v in f.values])


def pointwise_power(f: GroupFunction, k: int) -> GroupFunction:
    return GroupFunction(f.domain, f.codomain, [f.codomain.power(v, k) for v in f.values])


def conjugate_set(f: GroupFunction) -> set[Values]:
    """Values of every conjugate f^a, a ranging over the domain."""
    return {conjugate(f, a).values for a in f.domain.elements}


def random_function(
    domain: Group,
    codomain: Group,
    rng: np.random.Generator,
    identity_preserving: bool = True,
) -> GroupFunction:
    values = rng.integers(0, codomain.order, size=domain.order)
    if identity_preserving:
        values[0] = IDENTITY
    return GroupFunction(domain, codomain, values.tolist())


def verify_action_law(f: GroupFunction, a: Element, b: Element) -> bool:
    """(f^a)^b = f^{ab} and f^a(1) = 1."""
    fa = conjugate(f, a)
    return fa.values[0] == IDENTITY and conjugate(fa, b) == conjugate(f, f.domain.mul(a, b))


def verify_product_rule(f: GroupFunction, g: GroupFunction, a: Element, x: Element) -> bool:
    """(f*g)^a(x) = (f^a(x))^{g(a)} · g^a(x)."""
    H = f.codomain
    lhs = conjugate(pointwise_product(f, g), a).values[x]
    rhs = H.rows[H.conjugate(conjugate(f, a).values[x], g.values[a])][conjugate(g, a).values[x]]
    return lhs == rhs


def is_fixed_point(f: GroupFunction) -> bool:
    """a · f = f for every a in the domain."""
    return all(act(f, a).values == f.values for a in f.domain.elements)


# Homomorphisms


def homomorphism_witness(f: GroupFunction) -> Optional[tuple[Element, Element]]:
    """First pair (x, y) with f(xy) ≠ f(x)f(y), or None."""
    V = np.asarray(f.values, dtype=np.int64)
    lhs = V[f.domain.table]
    rhs = f.codomain.table[V[:, None], V[None, :]]
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        x, y = bad[0]
        return int(x), int(y)
    return None


def is_homomorphism(f: GroupFunction) -> bool:
    return homomorphism_witness(f) is None


def image_subgroup(f: GroupFunction) -> Subgroup:
    """f(G) = ⟨f(g) | g ∈ G⟩."""
    return subgroup_closure(f.codomain, sorted(set(f.values)))


def as_homomorphism(f: GroupFunction) -> Homomorphism:
    witness = homomorphism_witness(f)
    if witness is not None:
        raise CertificationError(
            "Function is not a homomorphism", {"pair": list(witness)}
        )
    kernel = subgroup_from_members(f.domain, [x for x, v in enumerate(f.values) if v == IDENTITY])
    return Homomorphism(f, kernel, image_subgroup(f))


def certify(f: GroupFunction, what: str) -> Homomorphism:
    """as_homomorphism for constructions that must succeed."""
    try:
        return as_homomorphism(f)
    except CertificationError as exc:
        raise InvariantViolationError(f"{what} is not a homomorphism", exc.witness) from exc


def _extend(
    domain: Group,
    generators: Sequence[Element],
    images: Sequence[Element],
    codomain: Group,
) -> tuple[Optional[list[int]], Optional[dict]]:
    """Propagate generator images along the Cayley graph; (values, None) or (None, witness)."""
    rows_d, rows_c = domain.rows, codomain.rows
    values = [-1] * domain.order
    values[IDENTITY] = IDENTITY
    reached = [IDENTITY]
    for x in reached:
        vx = values[x]
        for g, img in zip(generators, images):
            y = rows_d[x][g]
            v = rows_c[vx][img]
            if values[y] == -1:
                values[y] = v
                reached.append(y)
            elif values[y] != v:
                return None, {"element": y, "values": [values[y], v]}
    if len(reached) != domain.order:
        return None, {"reached": len(reached), "order": domain.order}
    return values, None


def extend_from_generators(
    domain: Group,
    generators: Sequence[Element],
    images: Sequence[Element],
    codomain: Group,
) -> Homomorphism:
    """Complete generator images to a homomorphism, rejecting inconsistent completions."""
    if len(generators) != len(images):
        raise ShapeError(
            "Need one image per generator",
            {"generators": len(generators), "images": len(images)},
        )
    domain.check(*generators)
    codomain.check(*images)
    values, witness = _extend(domain, generators, images, codomain)
    if values is None:
        raise ExtensionError("Generator images do not extend to a homomorphism", witness)
    return certify(GroupFunction(domain, codomain, values), "Generator extension")


def hom_from_generator_images(domain: Group, images: Sequence[Element], codomain: Group) -> Homomorphism:
    """Homomorphism given by images of the domain's canonical generators."""
    return extend_from_generators(domain, domain.generators, images, codomain)


def count_homomorphisms(domain: Group, codomain: Group, cap: Optional[int] = None) -> int:
    """Count homomorphisms by generator-image search, independent of the action."""
    cap = cap if cap is not None else get_settings().ENUMERATION_CAP
    gens = domain.generators
    total = codomain.order ** len(gens)
    if total > cap:
        raise SizeLimitError(
            f"Generator-image search of {total} candidates exceeds cap {cap}",
            {"count": total, "cap": cap},
        )
    count = 0
    for images in itertools.product(codomain.elements, repeat=len(gens)):
        values, _ = _extend(domain, gens, images, codomain)
        if values is not None:
            count += 1
    return count


# Orbits and stabilizers


def stabilizer(f: GroupFunction) -> Subgroup:
    """Stab(f) = {a : f^a = f}."""
    _require_identity_preserving(f)
    members = [a for a in f.domain.elements if conjugate(f, a).values == f.values]
    return subgroup_from_members(f.domain, members)


def orbit(f: GroupFunction) -> FunctionOrbit:
    _require_identity_preserving(f)
    stab = stabilizer(f)
    cosets = right_cosets(f.domain, stab)
    members = tuple(conjugate(f, r) for r in cosets.representatives)
    member_values = {m.values for m in members}
    if len(member_values) != len(members):
        raise InvariantViolationError("Orbit representatives gave repeated conjugates")
    acted = {act(f, a).values for a in f.domain.elements}
    if acted != member_values:
        raise InvariantViolationError("Action orbit and conjugate set differ")
    return FunctionOrbit(f, cosets.representatives, members, stab)


def enumerate_identity_preserving(
    domain: Group,
    codomain: Group,
    cap: Optional[int] = None,
) -> Iterator[GroupFunction]:
    """All functions with f(1) = 1 in lexicographic order of their values."""
    cap = cap if cap is not None else get_settings().ENUMERATION_CAP
    count = codomain.order ** (domain.order - 1)
    if count > cap:
        raise SizeLimitError(
            f"Enumerating {count} functions exceeds cap {cap}", {"count": count, "cap": cap}
        )
    for tail in itertools.product(codomain.elements, repeat=domain.order - 1):
        yield GroupFunction(domain, codomain, (IDENTITY,) + tail)


def orbit_partition(functions: Iterable[GroupFunction]) -> Iterator[tuple[GroupFunction, int]]:
    """
    Yield (first member, orbit size) for each orbit met in the stream.

    For a lexicographic stream the first member met is the least one, so
    orbits come out in canonical order.
    """
    seen: set[Values] = set()
    for f in functions:
        if f.values in seen:
            continue
        conj = conjugate_set(f)
        seen |= conj
        yield f, len(conj)


def coset_section(
    q: "QuotientGroup",
    target_hom: Homomorphism,
    representatives: Optional[Sequence[Element]] = None,
) -> GroupFunction:
    """
    f̂ : G → H with projection ∘ f̂ = target_hom.

    Canonical coset representatives are used unless another transversal is
    given (one element per quotient element, in quotient order).
    """
    if target_hom.codomain != q.group:
        raise ShapeError("Homomorphism does not map into the quotient")
    cosets = q.cosets if representatives is None else q.cosets.with_representatives(representatives)
    reps = cosets.representatives
    return GroupFunction(target_hom.domain, q.parent, (reps[v] for v in target_hom.values))
