"""
Distributors: the analogue of commutators for arbitrary functions.

[x,y;f] = f(y)⁻¹ f(x)⁻¹ f(xy), so that f(xy) = f(x) f(y) [x,y;f]. For the
inversion map the distributors are commutators; for a coset section they
form the factor set of the extension.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from grouplens.config import get_settings
from grouplens.core.functions import (
    GroupFunction,
    Homomorphism,
    certify,
    conjugate,
    image_subgroup,
    is_homomorphism,
)
from grouplens.core.groups import Subgroup, is_normal, normal_subgroups, subgroup_closure
from grouplens.core.quotients import QuotientGroup, quotient
from grouplens.core.types import Element
from grouplens.errors import InvariantViolationError, NormalityError, SizeLimitError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DistributorTable:
    """entries[x, y] = [x,y;f]; materialized only on demand."""

    function: GroupFunction
    entries: np.ndarray

    def __post_init__(self):
        n = self.function.domain.order
        if self.entries.shape != (n, n):
            raise InvariantViolationError("Distributor table has the wrong shape")

    def distinct_values(self) -> list[Element]:
        return np.unique(self.entries).tolist()


def _distributor(f: GroupFunction, x: Element, y: Element) -> Element:
    rows_c, inv_c = f.codomain.rows, f.codomain.inverses
    v = f.values
    return rows_c[rows_c[inv_c[v[y]]][inv_c[v[x]]]][v[f.domain.rows[x][y]]]


def distributor(f: GroupFunction, x: Element, y: Element) -> Element:
    """
    [x,y;f], evaluated both as f(y)⁻¹f(x)⁻¹f(xy) and as f(y)⁻¹f^x(y).
    """
    f.domain.check(x, y)
    H = f.codomain
    first = _distributor(f, x, y)
    second = H.rows[H.inverses[f.values[y]]][conjugate(f, x).values[y]]
    if first != second:
        raise InvariantViolationError(
            "Distributor definitions disagree", {"x": x, "y": y, "values": [first, second]}
        )
    xy = f.domain.rows[x][y]
    if H.rows[H.rows[f.values[x]][f.values[y]]][first] != f.values[xy]:
        raise InvariantViolationError("f(xy) = f(x)f(y)[x,y;f] failed", {"x": x, "y": y})
    return first


def distributor_table(f: GroupFunction) -> DistributorTable:
    Tc, Td = f.codomain.table, f.domain.table
    F = np.asarray(f.values, dtype=np.int64)
    inv_F = f.codomain.inverse[F]
    # partial[x, y] = f(y)⁻¹ f(x)⁻¹
    partial = Tc[inv_F[None, :], inv_F[:, None]]
    entries = Tc[partial, F[Td]]
    entries.setflags(write=False)
    return DistributorTable(f, entries)


def distributor_operator(f: GroupFunction, a: Element) -> GroupFunction:
    """D_a f (x) = [x,a;f]."""
    f.domain.check(a)
    return GroupFunction(f.domain, f.codomain, [_distributor(f, x, a) for x in f.domain.elements])


def verify_triple_identity(f: GroupFunction, x: Element, y: Element, z: Element) -> bool:
    """[y,z;f][x,yz;f] = [x,y;f]^{f(z)} [xy,z;f]."""
    f.domain.check(x, y, z)
    H, rows_d = f.codomain, f.domain.rows
    lhs = H.rows[_distributor(f, y, z)][_distributor(f, x, rows_d[y][z])]
    rhs = H.rows[H.conjugate(_distributor(f, x, y), f.values[z])][_distributor(f, rows_d[x][y], z)]
    return lhs == rhs


def verify_action_shift(f: GroupFunction, x: Element, y: Element, z: Element) -> bool:
    """[xy,z;f] = [x,z;f][y,z;f^x]."""
    f.domain.check(x, y, z)
    H = f.codomain
    lhs = _distributor(f, f.domain.rows[x][y], z)
    rhs = H.rows[_distributor(f, x, z)][_distributor(conjugate(f, x), y, z)]
    return lhs == rhs


def distributor_subgroup(f: GroupFunction) -> Subgroup:
    """[G,G;f] = ⟨[x,y;f]⟩, asserted normal in f(G)."""
    values = distributor_table(f).distinct_values()
    sub = subgroup_closure(f.codomain, values)
    image = image_subgroup(f)
    if not sub.is_subgroup_of(image) or not is_normal(f.codomain, sub, within=image):
        raise InvariantViolationError(
            "Distributor subgroup is not normal in the image", {"order": sub.order}
        )
    logger.debug("Distributor subgroup of order %d inside image of order %d", sub.order, image.order)
    return sub


def _local(image: Subgroup, sub: Subgroup) -> Subgroup:
    """sub ≤ image re-expressed inside image.as_group."""
    return subgroup_closure(image.as_group, [image.to_local(x) for x in sub.members])


def _through_quotient(f: GroupFunction, image: Subgroup, q: QuotientGroup) -> GroupFunction:
    proj = q.projection.values
    return GroupFunction(f.domain, q.group, [proj[image.to_local(v)] for v in f.values])


def canonical_quotient(f: GroupFunction) -> tuple[QuotientGroup, Homomorphism]:
    """f(G)/[G,G;f] together with the homomorphism π∘f into it."""
    image = image_subgroup(f)
    kernel = _local(image, distributor_subgroup(f))
    try:
        q = quotient(image.as_group, kernel)
    except NormalityError as exc:
        raise InvariantViolationError("Distributor subgroup is not normal", exc.witness) from exc
    return q, certify(_through_quotient(f, image, q), "Canonical quotient map")


def canonical_quotient_hom(f: GroupFunction) -> Homomorphism:
    return canonical_quotient(f)[1]


def minimality_table(f: GroupFunction, cap: Optional[int] = None) -> list[dict]:
    """For every K ⊴ f(G): whether π_K∘f is a homomorphism and whether [G,G;f] ≤ K."""
    cap = cap if cap is not None else get_settings().MINIMALITY_CAP
    image = image_subgroup(f)
    if image.order > cap:
        raise SizeLimitError(
            f"Image of order {image.order} exceeds minimality cap {cap}",
            {"order": image.order, "cap": cap},
        )
    distributors = _local(image, distributor_subgroup(f))
    rows = []
    for k in normal_subgroups(image.as_group):
        q = quotient(image.as_group, k)
        rows.append(
            {
                "kernel_members": [image.to_parent(x) for x in k.members],
                "homomorphism": is_homomorphism(_through_quotient(f, image, q)),
                "contains_distributors": distributors.is_subgroup_of(k),
            }
        )
    return rows


def verify_minimality(f: GroupFunction, cap: Optional[int] = None) -> bool:
    """π_K∘f is a homomorphism exactly when [G,G;f] ≤ K, over every K ⊴ f(G)."""
    return all(row["homomorphism"] == row["contains_distributors"] for row in minimality_table(f, cap))


def factor_set_in_kernel(q: QuotientGroup, section: GroupFunction) -> bool:
    """The distributors of a coset section lie in the kernel (they are its factor set)."""
    return all(v in q.kernel for v in distributor_table(section).distinct_values())
