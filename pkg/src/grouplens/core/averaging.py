"""
The average function and the transfer.

Averaging an orbit of conjugates into an abelian group yields a
homomorphism. The transfer is a power of the average of the function
f(h·t_i) = π(h) built from right cosets H·t_i.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from grouplens.core.functions import (
    GroupFunction,
    Homomorphism,
    certify,
    conjugate,
    image_subgroup,
    is_homomorphism,
    orbit,
    pointwise_power,
    stabilizer,
)
from grouplens.core.groups import CosetSystem, Group, Subgroup, require_parent, right_cosets
from grouplens.core.types import IDENTITY, Element
from grouplens.errors import AbelianError, InvariantViolationError, ShapeError

logger = logging.getLogger(__name__)


def _orbit_product(codomain: Group, functions: Iterable[GroupFunction], n: int) -> list[Element]:
    rows = codomain.rows
    acc = [IDENTITY] * n
    for member in functions:
        acc = [rows[a][b] for a, b in zip(acc, member.values)]
    return acc


def average_function(f: GroupFunction) -> Homomorphism:
    """f̄ = f^{g_1} * … * f^{g_n} over the distinct conjugates of f."""
    span = image_subgroup(f)
    if not span.is_abelian:
        raise AbelianError(
            "Average function needs an abelian value span", {"span_order": span.order}
        )
    # f and f^1 have the same conjugates, and f^1 is identity preserving.
    base = f if f.identity_preserving else conjugate(f, IDENTITY)
    members = orbit(base).members
    values = _orbit_product(f.codomain, members, f.domain.order)
    result = certify(GroupFunction(f.domain, f.codomain, values), "Average function")
    if is_homomorphism(f) and result.function != f:
        raise InvariantViolationError("Average of a homomorphism differs from it")
    return result


@dataclass(frozen=True)
class TransferSetup:
    """G ≥ H, π : H → A abelian, and right-coset representatives t_i with t_1 = 1."""

    group: Group
    subgroup: Subgroup
    target_hom: Homomorphism
    cosets: CosetSystem

    def __post_init__(self):
        require_parent(self.group, self.subgroup)
        if self.target_hom.domain != self.subgroup.as_group:
            raise ShapeError("π must be defined on the subgroup as a group")
        if not self.target_hom.image.is_abelian:
            raise AbelianError("π must map into an abelian group")
        if self.cosets.side != "right" or self.cosets.subgroup != self.subgroup:
            raise ShapeError("Transfer needs right cosets of the subgroup")

    @property
    def index(self) -> int:
        return self.cosets.index

    @property
    def target(self) -> Group:
        return self.target_hom.codomain


def make_transfer_setup(
    group: Group,
    subgroup: Subgroup,
    target_hom: Homomorphism,
    representatives: Optional[Sequence[Element]] = None,
) -> TransferSetup:
    cosets = right_cosets(group, subgroup)
    if representatives is not None:
        cosets = cosets.with_representatives(representatives)
    return TransferSetup(group, subgroup, target_hom, cosets)


def transfer_base_function(setup: TransferSetup) -> GroupFunction:
    """f(h·t_i) = π(h); stabilized by every element of H."""
    pi = setup.target_hom.values
    to_local = setup.subgroup.to_local
    values = []
    for g in setup.group.elements:
        h, _ = setup.cosets.decompose(g)
        values.append(pi[to_local(h)])
    f = GroupFunction(setup.group, setup.target, values)
    for h in setup.subgroup.members:
        if conjugate(f, h).values != f.values:
            raise InvariantViolationError("Transfer base function is not stabilized by H", {"element": h})
    return f


def _transfer_values(setup: TransferSetup, f: GroupFunction) -> list[Element]:
    """θ*(x) = ∏_i f^{t_i}(x) in representative order."""
    conjugates = (conjugate(f, t) for t in setup.cosets.representatives)
    return _orbit_product(setup.target, conjugates, setup.group.order)


def transfer_multiplicity(setup: TransferSetup, f: Optional[GroupFunction] = None) -> int:
    """m = [Stab_G(f) : H]."""
    f = f if f is not None else transfer_base_function(setup)
    stab = stabilizer(f)
    if not setup.subgroup.is_subgroup_of(stab):
        raise InvariantViolationError("Stabilizer of the base function does not contain H")
    return stab.order // setup.subgroup.order


def transfer(setup: TransferSetup) -> Homomorphism:
    f = transfer_base_function(setup)
    theta = certify(GroupFunction(setup.group, setup.target, _transfer_values(setup, f)), "Transfer")
    m = transfer_multiplicity(setup, f)
    if pointwise_power(average_function(f).function, m).values != theta.values:
        raise InvariantViolationError("Transfer is not the m-th power of the average", {"m": m})
    logger.debug("Transfer of index %d with multiplicity %d", setup.index, m)
    return theta


def classical_transfer(setup: TransferSetup) -> GroupFunction:
    """θ*(x) = ∏ π(t_i x t_{(i)x}⁻¹), where t_i x ∈ H t_{(i)x}."""
    G, A = setup.group, setup.target
    rows, inv = G.rows, G.inverses
    pi = setup.target_hom.values
    to_local = setup.subgroup.to_local
    values = []
    for x in G.elements:
        acc = IDENTITY
        for t in setup.cosets.representatives:
            tx = rows[t][x]
            h = rows[tx][inv[setup.cosets.representative_of(tx)]]
            acc = A.rows[acc][pi[to_local(h)]]
        values.append(acc)
    return GroupFunction(G, A, values)


def verify_transfer_power_relation(setup: TransferSetup) -> bool:
    """θ*(x) = f̄(x)^m for every x, m = [Stab_G(f) : H]."""
    f = transfer_base_function(setup)
    theta = _transfer_values(setup, f)
    m = transfer_multiplicity(setup, f)
    return list(pointwise_power(average_function(f).function, m).values) == theta
