"""
Harness service for GroupLens.

Runs the constructive proofs (Cauchy by orbit counting, Sylow by normalizer
extension), orbit censuses, transfers, lifts and distributor censuses, and
wraps every result in a Report whose checks re-run the identities involved.
"""
import logging
from collections import Counter
from typing import Any, Callable, Optional

import numpy as np
from pydantic import BaseModel
from sympy import isprime

from grouplens import __version__
from grouplens.config import Settings, get_settings
from grouplens.core.averaging import (
    classical_transfer,
    make_transfer_setup,
    transfer,
    transfer_base_function,
    transfer_multiplicity,
    verify_transfer_power_relation,
)
from grouplens.core.distributed import (
    conjugate_subgroup_count,
    conjugator_between,
    conjugator_between_soluble,
    lift,
)
from grouplens.core.distributors import (
    canonical_quotient,
    distributor_subgroup,
    distributor_table,
    verify_action_shift,
    verify_minimality,
    verify_triple_identity,
)
from grouplens.core.functions import (
    GroupFunction,
    Homomorphism,
    count_homomorphisms,
    enumerate_identity_preserving,
    image_subgroup,
    inversion,
    is_homomorphism,
    orbit_partition,
    stabilizer,
)
from grouplens.core.groups import (
    Group,
    Subgroup,
    derived_subgroup,
    is_normal,
    is_soluble,
    make_cyclic,
    normalizer,
    p_part,
    subgroup_closure,
    subgroup_from_members,
    whole_group,
)
from grouplens.core.quotients import quotient
from grouplens.core.types import IDENTITY, Element
from grouplens.errors import GroupLensError, InvariantViolationError, PreconditionError
from grouplens.schemas import (
    CauchyResult,
    Check,
    DistributorCensus,
    GroupDescription,
    LiftReport,
    LiftStepReport,
    OrbitCensus,
    Report,
    SylowIteration,
    SylowResult,
    TransferReport,
)

logger = logging.getLogger(__name__)


def run_check(name: str, predicate: Callable[[], Any]) -> Check:
    """
    Evaluate a check. The predicate returns True, False, or a witness dict
    (a failure); library errors are failures carrying the error as witness.
    """
    try:
        outcome = predicate()
    except GroupLensError as exc:
        return Check(name=name, passed=False, witness=exc.to_dict())
    if isinstance(outcome, dict):
        return Check(name=name, passed=False, witness=outcome)
    return Check(name=name, passed=bool(outcome))


def require_prime_divisor(g: Group, p: int) -> None:
    if not isprime(p):
        raise PreconditionError(f"{p} is not prime", {"prime": p})
    if g.order % p:
        raise PreconditionError(f"{p} does not divide |{g.name}| = {g.order}", {"prime": p, "order": g.order})


class HarnessService:
    def __init__(
        self,
        settings: Optional[Settings] = None,
        seed: Optional[int] = None,
        cap: Optional[int] = None,
    ):
        self.settings = settings or get_settings()
        self.seed = seed if seed is not None else self.settings.SEED
        self.cap = cap if cap is not None else self.settings.ENUMERATION_CAP
        self.rng = np.random.default_rng(self.seed)

    def _report(self, command: str, inputs: dict[str, Any], result: BaseModel, checks: list[Check]) -> Report:
        return Report(
            command=command,
            version=__version__,
            inputs=inputs,
            result=result.model_dump(mode="json"),
            checks=checks,
        )

    # Cauchy and Sylow

    def orbit_census(self, domain: Group, codomain: Group) -> tuple[OrbitCensus, list[GroupFunction]]:
        """Full enumeration of identity-preserving functions split into orbits."""
        histogram: Counter[int] = Counter()
        fixed: list[GroupFunction] = []
        total = 0
        for first, size in orbit_partition(enumerate_identity_preserving(domain, codomain, self.cap)):
            histogram[size] += 1
            total += size
            if size == 1:
                fixed.append(first)
        logger.debug("Census %s -> %s: %d functions, %d orbits", domain.name, codomain.name, total, sum(histogram.values()))
        census = OrbitCensus(
            domain=domain.name,
            codomain=codomain.name,
            census_mode="full",
            functions=total,
            histogram=dict(sorted(histogram.items())),
            fixed_points=len(fixed),
            homomorphisms=count_homomorphisms(domain, codomain, self.cap),
        )
        return census, fixed

    def cauchy_element(self, g: Group, p: int) -> tuple[Element, OrbitCensus]:
        """
        An element of order p from a non-trivial fixed point of the action
        on identity-preserving functions Z_p → G.
        """
        require_prime_divisor(g, p)
        z = make_cyclic(p)
        if g.order ** (p - 1) <= self.cap:
            census, fixed = self.orbit_census(z, g)
            candidates = [f.values[1] for f in fixed if f.values[1] != IDENTITY]
        else:
            logger.warning(
                "Census of %d functions exceeds cap %d, counting fixed points only", g.order ** (p - 1), self.cap
            )
            # A fixed point is a homomorphism, so it is determined by f(1) with f(1)^p = 1.
            solutions = [x for x in g.elements if g.power(x, p) == IDENTITY]
            census = OrbitCensus(
                domain=z.name,
                codomain=g.name,
                census_mode="fixed-points-only",
                fixed_points=len(solutions),
                homomorphisms=len(solutions),
            )
            candidates = [x for x in solutions if x != IDENTITY]
        if not candidates:
            raise InvariantViolationError(
                "No non-trivial fixed point although p divides the order", {"prime": p, "order": g.order}
            )
        return candidates[0], census

    def cauchy(self, g: Group, p: int) -> Report:
        element, census = self.cauchy_element(g, p)
        order = g.element_order(element)
        checks = [
            run_check("element-has-order-p", lambda: order == p),
            run_check(
                "element-order-scan",
                lambda: element in {x for x in g.elements if g.element_order(x) == p},
            ),
            run_check(
                "fixed-points-divisible-by-p",
                lambda: census.fixed_points % p == 0 and census.fixed_points >= p,
            ),
            run_check("fixed-points-are-homomorphisms", lambda: census.fixed_points == census.homomorphisms),
        ]
        if census.census_mode == "full":
            checks.append(
                run_check(
                    "orbit-sizes-divide-p",
                    lambda: set(census.histogram) <= {1, p} and census.functions == g.order ** (p - 1),
                )
            )
        result = CauchyResult(
            group=g.name,
            prime=p,
            element=element,
            element_label=g.labels[element],
            element_order=order,
            census=census,
        )
        return self._report("cauchy", {"group": g.name, "prime": p}, result, checks)

    def sylow_subgroup(self, g: Group, p: int) -> tuple[Subgroup, list[SylowIteration]]:
        """
        Grow a p-subgroup H from a Cauchy element: while p | [G:H], p also
        divides [N_G(H):H], and an element of order p in N_G(H)/H pulls back
        to extend H.
        """
        require_prime_divisor(g, p)
        first, _ = self.cauchy_element(g, p)
        h = subgroup_closure(g, [first])
        iterations: list[SylowIteration] = []
        while (g.order // h.order) % p == 0:
            n = normalizer(g, h)
            if (n.order // h.order) % p:
                raise InvariantViolationError(
                    "p divides [G:H] but not [N(H):H]", {"subgroup": h.order, "normalizer": n.order}
                )
            local = subgroup_from_members(n.as_group, [n.to_local(x) for x in h.members])
            q = quotient(n.as_group, local)
            u, _ = self.cauchy_element(q.group, p)
            pulled = n.to_parent(q.representative(u))
            iterations.append(
                SylowIteration(
                    subgroup_order=h.order,
                    normalizer_order=n.order,
                    quotient_order=q.group.order,
                    pulled_back=pulled,
                )
            )
            h = subgroup_closure(g, h.generators + (pulled,))
            logger.info("Sylow step for p=%d: subgroup grew to order %d", p, h.order)
        return h, iterations

    def sylow(self, g: Group, p: int) -> Report:
        h, iterations = self.sylow_subgroup(g, p)
        target = p_part(g.order, p)
        checks = [
            run_check("order-is-p-part", lambda: h.order == target),
            run_check("closed", lambda: subgroup_from_members(g, h.members) == h),
            run_check(
                "normalizer-index-divisible-by-p",
                lambda: all((it.normalizer_order // it.subgroup_order) % p == 0 for it in iterations),
            ),
        ]
        result = SylowResult(
            group=g.name,
            prime=p,
            order=h.order,
            p_part=target,
            members=list(h.members),
            generators=list(h.generators),
            iterations=iterations,
        )
        return self._report("sylow", {"group": g.name, "prime": p}, result, checks)

    def census(self, domain: Group, codomain: Group) -> Report:
        census, _ = self.orbit_census(domain, codomain)
        checks = [
            run_check("fixed-points-are-homomorphisms", lambda: census.fixed_points == census.homomorphisms),
            run_check(
                "orbit-sizes-divide-domain-order",
                lambda: all(domain.order % size == 0 for size in census.histogram),
            ),
            run_check(
                "orbits-cover-functions",
                lambda: sum(size * count for size, count in census.histogram.items())
                == codomain.order ** (domain.order - 1),
            ),
        ]
        return self._report("census", {"domain": domain.name, "codomain": codomain.name}, census, checks)

    # Transfer

    def transfer(self, g: Group, h: Subgroup, target_hom: Homomorphism) -> Report:
        setup = make_transfer_setup(g, h, target_hom)
        theta = transfer(setup)
        base = transfer_base_function(setup)
        m = transfer_multiplicity(setup, base)

        def rotated_agrees():
            other = make_transfer_setup(g, h, target_hom, setup.cosets.rotated().representatives)
            return transfer(other).values == theta.values

        checks = [
            run_check("homomorphism", lambda: is_homomorphism(theta.function)),
            run_check("power-relation", lambda: verify_transfer_power_relation(setup)),
            run_check("classical-formula", lambda: classical_transfer(setup).values == theta.values),
            run_check("stabilizer-contains-subgroup", lambda: h.is_subgroup_of(stabilizer(base))),
            run_check("representative-invariance", rotated_agrees),
        ]
        result = TransferReport(
            group=g.name,
            subgroup_order=h.order,
            index=setup.index,
            multiplicity_m=m,
            transfer_values=list(theta.values),
            is_trivial=theta.is_trivial,
        )
        inputs = {"group": g.name, "subgroup": list(h.generators), "target": target_hom.codomain.name}
        return self._report("transfer", inputs, result, checks)

    # Lifting

    def lift(self, h: Group, n: Subgroup, f: Homomorphism) -> Report:
        first = lift(h, n, f)
        second = lift(h, n, f, rotated=True)
        hom = first.homomorphism
        image = hom.image
        q = quotient(h, n)
        conjugator: dict[str, Optional[Element]] = {"value": None}

        def conjugate_lifts():
            if n.is_abelian:
                c = conjugator_between(hom, second.homomorphism, n)
            else:
                c = conjugator_between_soluble(hom, second.homomorphism, n)
            conjugator["value"] = c
            return c in n

        def complement():
            if not (f.kernel.is_trivial and f.image.order == q.group.order):
                return True
            return set(image.members) & set(n.members) == {IDENTITY} and image.order * n.order == h.order

        checks = [
            run_check("homomorphism", lambda: is_homomorphism(hom.function)),
            run_check(
                "projection",
                lambda: hom.function.then(q.projection.function).values == f.values,
            ),
            run_check("conjugate-to-second-lift", conjugate_lifts),
            run_check("complement", complement),
        ]
        result = LiftReport(
            group=f.domain.name,
            extension=h.name,
            kernel_order=n.order,
            steps=[LiftStepReport(kernel_order=s.kernel_order, index=s.index, m=s.m) for s in first.steps],
            lift_values=list(hom.values),
            lift_labels=[h.labels[v] for v in hom.values],
            conjugator=conjugator["value"],
            conjugacy_class_size_of_image=conjugate_subgroup_count(h, image, n),
        )
        inputs = {"extension": h.name, "normal": list(n.generators), "domain": f.domain.name, "hom": list(f.values)}
        return self._report("lift", inputs, result, checks)

    # Distributors and descriptions

    def _sample_triples(self, g: Group) -> np.ndarray:
        return self.rng.integers(0, g.order, size=(self.settings.SAMPLE_COUNT, 3))

    def distributors(self, f: GroupFunction) -> Report:
        table = distributor_table(f)
        d = distributor_subgroup(f)
        image = image_subgroup(f)
        q, hom = canonical_quotient(f)
        triples = self._sample_triples(f.domain)
        checks = [
            run_check("normal-in-image", lambda: is_normal(f.codomain, d, within=image)),
            run_check("canonical-quotient-homomorphism", lambda: is_homomorphism(hom.function)),
            run_check(
                "triple-identity",
                lambda: all(verify_triple_identity(f, *map(int, t)) for t in triples),
            ),
            run_check(
                "action-shift",
                lambda: all(verify_action_shift(f, *map(int, t)) for t in triples),
            ),
        ]
        if image.order <= self.settings.MINIMALITY_CAP:
            checks.append(run_check("minimality", lambda: verify_minimality(f)))
        if f.domain == f.codomain and f == inversion(f.domain):
            checks.append(
                run_check(
                    "matches-derived-subgroup",
                    lambda: d == derived_subgroup(f.domain, whole_group(f.domain)),
                )
            )
        result = DistributorCensus(
            domain=f.domain.name,
            codomain=f.codomain.name,
            distinct_values=table.distinct_values(),
            subgroup_members=list(d.members),
            subgroup_order=d.order,
            image_order=image.order,
            quotient_order=q.group.order,
            homomorphism=d.is_trivial,
        )
        return self._report("distributors", {"domain": f.domain.name, "codomain": f.codomain.name}, result, checks)

    def describe(self, g: Group) -> Report:
        statistics = g.order_statistics()
        checks = [
            run_check(
                "associativity",
                lambda: Group(g.table, check_associativity=True) == g,
            ),
            run_check("inverse-law", lambda: all(g.rows[x][g.inverses[x]] == IDENTITY for x in g.elements)),
            run_check("generators-generate", lambda: subgroup_closure(g, g.generators).order == g.order),
            run_check("order-statistics-total", lambda: sum(statistics.values()) == g.order),
        ]
        result = GroupDescription(
            name=g.name,
            order=g.order,
            abelian=g.is_abelian,
            soluble=is_soluble(g, whole_group(g)),
            labels=list(g.labels),
            element_orders=[g.element_order(x) for x in g.elements],
            order_statistics=statistics,
            generators=list(g.generators),
        )
        return self._report("describe", {"group": g.name}, result, checks)
