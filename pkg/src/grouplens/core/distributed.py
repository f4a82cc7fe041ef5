"""
The distributed average and Schur–Zassenhaus lifting.

For f with [G,G;f] inside an abelian A, K inside Stab(f) and [G:K] prime to
|A|, the distributed average

    f̄̄(x) = f(x) · (∏_i [a_i, x; f])^m,   m·[G:K] ≡ 1 (mod |A|)

is a homomorphism, independent of K, A, the right-coset representatives
{a_i} of K and the choice of m. Applied to a coset section of an extension
with coprime kernel it produces a complement; composed along a derived
series it handles soluble kernels.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence

import numpy as np

from grouplens.config import get_settings
from grouplens.core.distributors import distributor_subgroup
from grouplens.core.functions import (
    GroupFunction,
    Homomorphism,
    certify,
    conjugate,
    coset_section,
    image_subgroup,
    is_homomorphism,
    pointwise_product,
    stabilizer,
)
from grouplens.core.groups import (
    CosetSystem,
    Group,
    Subgroup,
    derived_series,
    is_normal,
    mod_inverse,
    require_parent,
    right_cosets,
    trivial_subgroup,
)
from grouplens.core.quotients import QuotientGroup, quotient
from grouplens.core.types import IDENTITY, Element
from grouplens.errors import (
    AbelianError,
    ContainmentError,
    CoprimalityError,
    InvariantViolationError,
    NormalityError,
    NotCotwistedError,
    PreconditionError,
    ShapeError,
    SizeLimitError,
    SolubilityError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DistributedAverageContext:
    function: GroupFunction
    k_subgroup: Subgroup
    a_subgroup: Subgroup
    reps: CosetSystem
    m: int

    def __post_init__(self):
        if (self.m * self.index - 1) % self.a_subgroup.order:
            raise InvariantViolationError(
                "m does not invert the index modulo |A|",
                {"m": self.m, "index": self.index, "a_order": self.a_subgroup.order},
            )

    @property
    def index(self) -> int:
        return self.reps.index

    @property
    def domain(self) -> Group:
        return self.function.domain

    @property
    def codomain(self) -> Group:
        return self.function.codomain


def make_context(
    f: GroupFunction,
    k: Optional[Subgroup] = None,
    a: Optional[Subgroup] = None,
    representatives: Optional[Sequence[Element]] = None,
    m: Optional[int] = None,
) -> DistributedAverageContext:
    """
    Validate K ⊆ Stab(f), [G,G;f] ⊆ A with A abelian and normalized by f(G),
    and gcd([G:K], |A|) = 1. K defaults to Stab(f) and A to [G,G;f].
    """
    if not f.identity_preserving:
        raise PreconditionError(
            "Distributed average needs an identity-preserving function",
            {"value_at_identity": f.values[0]},
        )
    stab = stabilizer(f)
    if k is None:
        k = stab
    else:
        require_parent(f.domain, k)
        if not k.is_subgroup_of(stab):
            raise ContainmentError(
                "K is not contained in the stabilizer",
                {"k_order": k.order, "stabilizer_order": stab.order},
            )

    distributors = distributor_subgroup(f)
    if a is None:
        a = distributors
    else:
        require_parent(f.codomain, a)
        if not distributors.is_subgroup_of(a):
            raise ContainmentError(
                "A does not contain the distributor subgroup",
                {"distributors": list(distributors.members)},
            )
    if not a.is_abelian:
        raise AbelianError("A must be abelian", {"a_order": a.order})
    if not is_normal(f.codomain, a, within=image_subgroup(f)):
        raise NormalityError("A is not normalized by the values of f", {"a_order": a.order})

    cosets = right_cosets(f.domain, k)
    if representatives is not None:
        cosets = cosets.with_representatives(representatives)
    n = cosets.index
    if m is None:
        m = mod_inverse(n, a.order)
    else:
        if gcd(n, a.order) != 1:
            raise CoprimalityError(
                f"[G:K] = {n} is not prime to |A| = {a.order}", {"index": n, "a_order": a.order}
            )
        if m < 1 or (m * n - 1) % a.order:
            raise PreconditionError(
                "m must be a positive inverse of [G:K] modulo |A|",
                {"m": m, "index": n, "a_order": a.order},
            )
    return DistributedAverageContext(f, k, a, cosets, m)


def average_distributor(ctx: DistributedAverageContext) -> GroupFunction:
    """d(x) = (∏_i [a_i, x; f])^m, using [a, x; f] = f(x)⁻¹ f^a(x)."""
    f, H = ctx.function, ctx.codomain
    rows, inv = H.rows, H.inverses
    acc = [IDENTITY] * ctx.domain.order
    for t in ctx.reps.representatives:
        conj = conjugate(f, t).values
        acc = [rows[c][rows[inv[fx]][cx]] for c, fx, cx in zip(acc, f.values, conj)]
    d = GroupFunction(ctx.domain, H, [H.power(v, ctx.m) for v in acc])
    outside = [x for x, v in enumerate(d.values) if v not in ctx.a_subgroup]
    if outside:
        raise InvariantViolationError("Average distributor left A", {"element": outside[0]})
    return d


def distributed_average(ctx: DistributedAverageContext) -> Homomorphism:
    """f̄̄(x) = f(x)·d(x)."""
    f = ctx.function
    result = certify(pointwise_product(f, average_distributor(ctx)), "Distributed average")
    if is_homomorphism(f) and result.function != f:
        raise InvariantViolationError("Distributed average moved a homomorphism")
    return result


def verify_invariance(f: GroupFunction, contexts: Sequence[DistributedAverageContext]) -> bool:
    """Every context over f gives the same distributed average, pointwise."""
    if any(ctx.function != f for ctx in contexts):
        raise ShapeError("Every context must wrap the same function")
    results = {distributed_average(ctx).values for ctx in contexts}
    return len(results) <= 1


# Twists


def twist(
    f: GroupFunction,
    a: GroupFunction,
    *,
    within: Optional[Subgroup] = None,
    stabilized_by: Optional[Subgroup] = None,
) -> GroupFunction:
    """(f*a)(g) = f(g)a(g), checking that a maps into `within` and is stabilized by `stabilized_by`."""
    if within is not None:
        outside = [x for x, v in enumerate(a.values) if v not in within]
        if outside:
            raise ContainmentError("Twisting function leaves A", {"element": outside[0]})
    if stabilized_by is not None and not stabilized_by.is_subgroup_of(stabilizer(a)):
        raise ContainmentError("Twisting function is not stabilized by K", {"k_order": stabilized_by.order})
    return pointwise_product(f, a)


def random_stabilized_function(
    g: Group,
    k: Subgroup,
    a_subgroup: Subgroup,
    rng: np.random.Generator,
) -> GroupFunction:
    """
    A random a : G → A constant on each right coset K·t and trivial on K, so
    that a^k = a for every k in K.
    """
    require_parent(g, k)
    cosets = right_cosets(g, k)
    choices = rng.integers(0, a_subgroup.order, size=cosets.index)
    per_coset = [IDENTITY] + [a_subgroup.members[int(i)] for i in choices[1:]]
    return GroupFunction(g, a_subgroup.parent, [per_coset[c] for c in cosets.coset_of])


def twist_conjugator(a: GroupFunction, ctx: DistributedAverageContext) -> Element:
    """c = (∏_i a(t_i))^m over the context's representatives."""
    H = a.codomain
    return H.power(H.product(a.values[t] for t in ctx.reps.representatives), ctx.m)


def _trivial_on(a: GroupFunction, k: Subgroup) -> None:
    nontrivial = [x for x in k.members if a.values[x] != IDENTITY]
    if nontrivial:
        raise ContainmentError("Twisting function is not trivial on K", {"element": nontrivial[0]})


def verify_twist_theorem(f: GroupFunction, a: GroupFunction, ctx: DistributedAverageContext) -> bool:
    """
    f̄̄_{f*a}(x) = c⁻¹ f̄̄_f(x) c · ā̄(x) with c = (∏ a(t_i))^m, where ā̄ is
    trivial. Needs a into A and trivial on K.
    """
    if ctx.function != f:
        raise ShapeError("Context does not wrap f")
    _trivial_on(a, ctx.k_subgroup)
    twisted = twist(f, a, within=ctx.a_subgroup, stabilized_by=ctx.k_subgroup)
    reps = ctx.reps.representatives
    twisted_ctx = make_context(twisted, ctx.k_subgroup, ctx.a_subgroup, reps, ctx.m)
    a_ctx = make_context(a, ctx.k_subgroup, ctx.a_subgroup, reps, ctx.m)
    a_bar = distributed_average(a_ctx)
    if not a_bar.is_trivial:
        return False
    H = f.codomain
    c = twist_conjugator(a, ctx)
    base = distributed_average(ctx).values
    lhs = distributed_average(twisted_ctx).values
    rhs = tuple(H.rows[H.conjugate(v, c)][w] for v, w in zip(base, a_bar.values))
    return lhs == rhs


# Lifting


@dataclass(frozen=True)
class LiftStep:
    kernel_order: int
    index: int
    m: int


@dataclass(frozen=True)
class Lift:
    homomorphism: Homomorphism
    steps: tuple[LiftStep, ...]


def _check_coprime(kernel: Subgroup, domain: Group) -> None:
    if gcd(kernel.order, domain.order) != 1:
        raise CoprimalityError(
            f"Kernel order {kernel.order} is not prime to |G| = {domain.order}",
            {"kernel_order": kernel.order, "domain_order": domain.order},
        )


def _check_projects(lift: GroupFunction, q: QuotientGroup, f: Homomorphism) -> None:
    projected = lift.then(q.projection.function)
    bad = [x for x in f.domain.elements if projected.values[x] != f.values[x]]
    if bad:
        raise InvariantViolationError("Lift does not project to the homomorphism", {"element": bad[0]})


def lift_abelian(
    h: Group,
    a: Subgroup,
    f: Homomorphism,
    representatives: Optional[Sequence[Element]] = None,
    rotated: bool = False,
) -> Lift:
    """
    Lift f : G → H/A through H for abelian normal A with |A| prime to |G|.

    The coset section uses the canonical transversal, the rotated one, or
    the given representatives (one per quotient element).
    """
    require_parent(h, a)
    if not is_normal(h, a):
        raise NormalityError("Kernel is not normal in the extension", {"kernel_order": a.order})
    if not a.is_abelian:
        raise AbelianError("Kernel is not abelian", {"kernel_order": a.order})
    _check_coprime(a, f.domain)
    q = quotient(h, a)
    if f.codomain != q.group:
        raise ShapeError("Homomorphism does not map into the quotient by the kernel")
    if rotated and representatives is None:
        representatives = q.cosets.rotated().representatives
    section = coset_section(q, f, representatives)
    ctx = make_context(section, a=a)
    lift = distributed_average(ctx)
    _check_projects(lift.function, q, f)
    logger.debug("Abelian lift through kernel of order %d, index %d, m=%d", a.order, ctx.index, ctx.m)
    return Lift(lift, (LiftStep(a.order, ctx.index, ctx.m),))


def sz_lift_abelian(h: Group, a: Subgroup, f: Homomorphism) -> Homomorphism:
    return lift_abelian(h, a, f).homomorphism


def _soluble_series(h: Group, n: Subgroup) -> list[Subgroup]:
    require_parent(h, n)
    if not is_normal(h, n):
        raise NormalityError("Kernel is not normal in the extension", {"kernel_order": n.order})
    series = derived_series(h, n)
    if not series[-1].is_trivial:
        raise SolubilityError(
            "Kernel is not soluble", {"orders": [s.order for s in series]}
        )
    for s in series:
        if not is_normal(h, s):
            raise InvariantViolationError("Derived subgroup is not normal", {"order": s.order})
    return series


def _layer_isomorphism(upper: QuotientGroup, lower: QuotientGroup, double: QuotientGroup) -> Homomorphism:
    """H/N_j → (H/N_{j+1}) / (N_j/N_{j+1}) through coset representatives."""
    to_lower = lower.projection.values
    to_double = double.projection.values
    values = [to_double[to_lower[upper.representative(u)]] for u in upper.group.elements]
    iso = certify(GroupFunction(upper.group, double.group, values), "Layer isomorphism")
    if not iso.kernel.is_trivial or iso.image.order != double.group.order:
        raise InvariantViolationError("Layer map is not an isomorphism")
    return iso


def lift_soluble(h: Group, n: Subgroup, f: Homomorphism, rotated: bool = False) -> Lift:
    """
    Lift f : G → H/N through H for soluble normal N with |N| prime to |G|,
    one abelian layer N_j/N_{j+1} of the derived series at a time.
    """
    series = _soluble_series(h, n)
    _check_coprime(n, f.domain)
    top = quotient(h, n)
    if f.codomain != top.group:
        raise ShapeError("Homomorphism does not map into the quotient by the kernel")

    upper, current, steps = top, f, []
    for lower_sub in series[1:]:
        lower = quotient(h, lower_sub)
        kernel = lower.image_of(upper.kernel)
        double = quotient(lower.group, kernel)
        iso = _layer_isomorphism(upper, lower, double)
        moved = certify(current.function.then(iso.function), "Transported homomorphism")
        step = lift_abelian(lower.group, kernel, moved, rotated=rotated)
        logger.info("Lift layer: kernel order %d, m=%d", kernel.order, step.steps[0].m)
        steps.extend(step.steps)
        upper, current = lower, step.homomorphism

    # The last quotient is by the trivial subgroup: same table as h.
    if upper.group != h:
        raise InvariantViolationError("Final layer is not the extension itself")
    lift = certify(GroupFunction(f.domain, h, current.values), "Soluble lift")
    _check_projects(lift.function, top, f)
    return Lift(lift, tuple(steps))


def sz_lift_soluble(h: Group, n: Subgroup, f: Homomorphism) -> Homomorphism:
    return lift_soluble(h, n, f).homomorphism


def lift(h: Group, n: Subgroup, f: Homomorphism, rotated: bool = False) -> Lift:
    """Dispatch on the kernel: one abelian step, or the derived series."""
    if n.is_abelian:
        return lift_abelian(h, n, f, rotated=rotated)
    return lift_soluble(h, n, f, rotated=rotated)


def enumerate_lifts(
    h: Group,
    a: Subgroup,
    f: Homomorphism,
    cap: Optional[int] = None,
) -> list[Homomorphism]:
    """
    Distinct lifts over every choice of coset representatives for the
    quotient elements hit by f.
    """
    cap = cap if cap is not None else get_settings().LIFT_ENUMERATION_CAP
    q = quotient(h, a)
    if f.codomain != q.group:
        raise ShapeError("Homomorphism does not map into the quotient by the kernel")
    hit = sorted(set(f.values) - {IDENTITY})
    count = a.order ** len(hit)
    if count > cap:
        raise SizeLimitError(
            f"Enumerating {count} transversals exceeds cap {cap}", {"count": count, "cap": cap}
        )
    base = list(q.cosets.representatives)
    found: dict[tuple[Element, ...], Homomorphism] = {}
    for choice in itertools.product(*(q.cosets.coset(u) for u in hit)):
        reps = list(base)
        for u, r in zip(hit, choice):
            reps[u] = r
        result = lift_abelian(h, a, f, representatives=reps).homomorphism
        found.setdefault(result.values, result)
    logger.debug("Enumerated %d transversals, %d distinct lifts", count, len(found))
    return list(found.values())


def conjugate_subgroup_count(h: Group, s: Subgroup, by: Subgroup) -> int:
    """Number of distinct conjugates c⁻¹ s c with c in `by`."""
    require_parent(h, s)
    require_parent(h, by)
    return len({tuple(sorted(h.conjugate(x, c) for x in s.members)) for c in by.members})


# Conjugacy of lifts


def _difference(f1: Homomorphism, f2: Homomorphism, a_subgroup: Subgroup) -> GroupFunction:
    """diff(g) = f2(g)⁻¹ f1(g), so that f1 = f2 * diff."""
    if f1.domain != f2.domain or f1.codomain != f2.codomain:
        raise ShapeError("Lifts must share domain and codomain")
    H = f1.codomain
    values = [H.rows[H.inverses[v2]][v1] for v1, v2 in zip(f1.values, f2.values)]
    outside = [x for x, v in enumerate(values) if v not in a_subgroup]
    if outside:
        x = outside[0]
        raise NotCotwistedError(
            "Homomorphisms differ outside the kernel",
            {"element": x, "values": [f1.values[x], f2.values[x]]},
        )
    return GroupFunction(f1.domain, H, values)


def conjugator_between(
    f1: Homomorphism,
    f2: Homomorphism,
    a_subgroup: Subgroup,
    ctx: Optional[DistributedAverageContext] = None,
) -> Element:
    """
    c in A with f1(x) = c⁻¹ f2(x) c for every x, by the twist formula applied
    to the difference f2(x)⁻¹ f1(x). The default context takes K trivial.
    """
    require_parent(f1.codomain, a_subgroup)
    diff = _difference(f1, f2, a_subgroup)
    if ctx is None:
        ctx = make_context(f2.function, k=trivial_subgroup(f2.domain), a=a_subgroup)
    elif ctx.function != f2.function:
        raise ShapeError("Context does not wrap the second homomorphism")
    if not ctx.k_subgroup.is_subgroup_of(stabilizer(diff)):
        raise ContainmentError("K is not contained in the stabilizer of the difference")
    _trivial_on(diff, ctx.k_subgroup)

    H = f1.codomain
    c = twist_conjugator(diff, ctx)
    bad = [x for x in f1.domain.elements if H.conjugate(f2.values[x], c) != f1.values[x]]
    if bad:
        raise InvariantViolationError(
            "Conjugator does not conjugate the lifts", {"element": bad[0], "conjugator": c}
        )
    return c


def conjugator_between_soluble(f1: Homomorphism, f2: Homomorphism, n: Subgroup) -> Element:
    """
    c in N with f1(x) = c⁻¹ f2(x) c, composing one conjugator per derived
    series layer.
    """
    H = f1.codomain
    series = _soluble_series(H, n)
    _check_coprime(n, f1.domain)
    _difference(f1, f2, n)
    total = IDENTITY
    moved = f2
    for upper_sub, lower_sub in zip(series, series[1:]):
        lower = quotient(H, lower_sub)
        proj = lower.projection.function
        g1 = certify(f1.function.then(proj), "Projected first lift")
        g2 = certify(moved.function.then(proj), "Projected second lift")
        c_local = conjugator_between(g1, g2, lower.image_of(upper_sub))
        r = lower.representative(c_local)
        if r not in upper_sub:
            raise InvariantViolationError("Layer conjugator left the layer", {"element": r})
        total = H.rows[total][r]
        moved = certify(
            GroupFunction(f1.domain, H, [H.conjugate(v, r) for v in moved.values]),
            "Conjugated lift",
        )
    bad = [x for x in f1.domain.elements if H.conjugate(f2.values[x], total) != f1.values[x]]
    if bad:
        raise InvariantViolationError(
            "Composed conjugator does not conjugate the lifts", {"element": bad[0], "conjugator": total}
        )
    return total
