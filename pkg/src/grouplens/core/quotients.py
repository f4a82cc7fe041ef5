"""
Quotient groups over canonical left-coset representatives.
"""
from __future__ import annotations

from dataclasses import dataclass

from grouplens.core.functions import GroupFunction, Homomorphism, certify
from grouplens.core.groups import (
    CosetSystem,
    Group,
    Subgroup,
    require_parent,
    is_normal,
    left_cosets,
    subgroup_closure,
)
from grouplens.core.types import Element
from grouplens.errors import InvariantViolationError, NormalityError


@dataclass(frozen=True)
class QuotientGroup:
    """
    G/N as its own table; quotient element i is the coset of
    cosets.representatives[i].
    """

    group: Group
    projection: Homomorphism
    kernel: Subgroup
    cosets: CosetSystem

    @property
    def parent(self) -> Group:
        return self.kernel.parent

    def representative(self, q: Element) -> Element:
        return self.cosets.representatives[q]

    def image_of(self, s: Subgroup) -> Subgroup:
        """π(s) as a subgroup of the quotient."""
        proj = self.projection.values
        return subgroup_closure(self.group, sorted({proj[x] for x in s.members}))


def quotient(g: Group, n: Subgroup) -> QuotientGroup:
    require_parent(g, n)
    if not is_normal(g, n):
        raise NormalityError(
            f"Subgroup of order {n.order} is not normal in {g.name}",
            {"generators": list(n.generators)},
        )
    cosets = left_cosets(g, n)
    rows, coset_of = g.rows, cosets.coset_of
    reps = cosets.representatives
    table = [[coset_of[rows[a][b]] for b in reps] for a in reps]
    group = Group(
        table,
        labels=[g.labels[r] for r in reps],
        name=f"{g.name}/N{n.order}",
    )
    projection = certify(GroupFunction(g, group, coset_of), "Quotient projection")
    if projection.kernel != n:
        raise InvariantViolationError("Projection kernel differs from the normal subgroup")
    return QuotientGroup(group, projection, n, cosets)
