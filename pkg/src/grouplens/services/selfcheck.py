"""
Self-check service for GroupLens.

Re-runs the library's identities over the built-in catalog, the shipped
transfer setups and extensions, and any fixture documents, collecting one
named check per property.
"""
import itertools
import json
import logging
from math import gcd
from pathlib import Path
from typing import Any, Iterator, Optional, Sequence

import numpy as np
from sympy import primefactors

from grouplens import __version__
from grouplens.config import Settings, get_settings
from grouplens.core.averaging import (
    average_function,
    classical_transfer,
    make_transfer_setup,
    transfer,
    verify_transfer_power_relation,
)
from grouplens.core.catalog import (
    ShippedExtension,
    build_catalog,
    load_function,
    load_group,
    shipped_extensions,
    shipped_transfers,
)
from grouplens.core.distributed import (
    DistributedAverageContext,
    conjugator_between,
    conjugator_between_soluble,
    distributed_average,
    enumerate_lifts,
    lift,
    lift_abelian,
    make_context,
    random_stabilized_function,
    twist,
    verify_invariance,
    verify_twist_theorem,
)
from grouplens.core.distributors import (
    canonical_quotient_hom,
    distributor_subgroup,
    verify_action_shift,
    verify_minimality,
    verify_triple_identity,
)
from grouplens.core.functions import (
    GroupFunction,
    Homomorphism,
    coset_section,
    enumerate_identity_preserving,
    inversion,
    is_fixed_point,
    is_homomorphism,
    random_function,
    verify_action_law,
    verify_product_rule,
)
from grouplens.core.groups import (
    Group,
    Subgroup,
    derived_subgroup,
    make_cyclic,
    make_symmetric,
    normal_subgroups,
    p_part,
    subgroup_closure,
    whole_group,
)
from grouplens.core.quotients import quotient
from grouplens.errors import GroupValidationError, PreconditionError
from grouplens.schemas import Check, Report
from grouplens.services.harness import HarnessService, run_check

logger = logging.getLogger(__name__)

# Full orbit enumeration for Cauchy runs up to this many functions.
SELFCHECK_CENSUS_CAP = 20_000
CAUCHY_ORDER_LIMIT = 24


def _exhaustive_action_pairs() -> list[tuple[Group, Group]]:
    z2, z3, s3 = make_cyclic(2), make_cyclic(3), make_symmetric(3)
    return [(z2, z2), (z2, z3), (z2, s3), (z3, z3), (z3, s3)]


class SelfCheckService:
    def __init__(
        self,
        settings: Optional[Settings] = None,
        seed: Optional[int] = None,
        cap: Optional[int] = None,
    ):
        self.settings = settings or get_settings()
        self.seed = seed if seed is not None else self.settings.SEED
        self.rng = np.random.default_rng(self.seed)
        census_cap = min(cap if cap is not None else self.settings.ENUMERATION_CAP, SELFCHECK_CENSUS_CAP)
        self.harness = HarnessService(self.settings, self.seed, census_cap)
        self.catalog = build_catalog()
        self.contexts_checked = 0

    def run(self, fixtures: Sequence[Path] = ()) -> Report:
        checks = [
            run_check("action-laws", self.check_action_laws),
            run_check("cauchy-census", self.check_cauchy_census),
            run_check("cauchy-elements", self.check_cauchy_elements),
            run_check("sylow-subgroups", self.check_sylow),
            run_check("product-rule", self.check_product_rule),
            run_check("average-function", self.check_average_function),
            run_check("transfer", self.check_transfer),
            run_check("distributor-identities", self.check_distributor_identities),
            run_check("distributor-subgroup", self.check_distributor_subgroup),
            run_check("distributed-average", self.check_distributed_average),
            run_check("schur-zassenhaus", self.check_lifts),
            run_check("triviality", self.check_triviality),
        ]
        checks.extend(self.check_fixture(path) for path in fixtures)
        failures = [c.name for c in checks if not c.passed]
        if failures:
            logger.warning("Selfcheck failures: %s", ", ".join(failures))
        return Report(
            command="selfcheck",
            version=__version__,
            inputs={"seed": self.seed, "fixtures": [str(p) for p in fixtures]},
            result={
                "catalog_size": len(self.catalog),
                "checks_run": len(checks),
                "contexts": self.contexts_checked,
                "failures": failures,
            },
            checks=checks,
        )

    # Function action

    def check_action_laws(self) -> Any:
        for domain, codomain in _exhaustive_action_pairs():
            for f in enumerate_identity_preserving(domain, codomain):
                for a, b in itertools.product(domain.elements, repeat=2):
                    if not verify_action_law(f, a, b):
                        return {"function": list(f.values), "a": a, "b": b}
                if is_fixed_point(f) != is_homomorphism(f):
                    return {"function": list(f.values), "fixed_point": is_fixed_point(f)}
        samples = 0
        for domain, codomain in self._sample_pairs():
            f = random_function(domain, codomain, self.rng)
            a, b = (int(v) for v in self.rng.integers(0, domain.order, size=2))
            if not verify_action_law(f, a, b):
                return {"domain": domain.name, "codomain": codomain.name, "function": list(f.values), "a": a, "b": b}
            samples += 1
        logger.debug("Action law held on %d sampled triples", samples)
        return True

    def check_cauchy_census(self) -> Any:
        z2, z3, s3 = make_cyclic(2), make_cyclic(3), make_symmetric(3)
        expected = [(z3, 36, {1: 3, 3: 11}), (z2, 6, {1: 4, 2: 1})]
        for domain, total, histogram in expected:
            census, _ = self.harness.orbit_census(domain, s3)
            if census.functions != total or census.histogram != histogram:
                return {"domain": domain.name, "functions": census.functions, "histogram": census.histogram}
        return True

    def check_cauchy_elements(self) -> Any:
        for spec, g in self.catalog.items():
            if g.order > CAUCHY_ORDER_LIMIT:
                continue
            for p in primefactors(g.order):
                element, _ = self.harness.cauchy_element(g, p)
                if g.element_order(element) != p:
                    return {"group": spec, "prime": p, "element": element}
                if not any(g.element_order(x) == p for x in g.elements):
                    return {"group": spec, "prime": p, "scan": "no element of order p"}
        return True

    def check_sylow(self) -> Any:
        s4 = self.catalog["symmetric:4"]
        for p, order in ((2, 8), (3, 3)):
            h, _ = self.harness.sylow_subgroup(s4, p)
            if h.order != order:
                return {"group": "symmetric:4", "prime": p, "order": h.order}
        for spec, g in self.catalog.items():
            for p in primefactors(g.order):
                h, iterations = self.harness.sylow_subgroup(g, p)
                if h.order != p_part(g.order, p):
                    return {"group": spec, "prime": p, "order": h.order}
                if any((it.normalizer_order // it.subgroup_order) % p for it in iterations):
                    return {"group": spec, "prime": p, "iterations": [it.model_dump() for it in iterations]}
        return True

    def _sample_pairs(self) -> Iterator[tuple[Group, Group]]:
        groups = list(self.catalog.values())
        for _ in range(self.settings.SAMPLE_COUNT):
            i, j = self.rng.integers(0, len(groups), size=2)
            yield groups[int(i)], groups[int(j)]

    def check_product_rule(self) -> Any:
        z2, s3 = make_cyclic(2), make_symmetric(3)
        every = [GroupFunction(z2, s3, v) for v in itertools.product(s3.elements, repeat=2)]
        for f, g in itertools.product(every, repeat=2):
            for a, x in itertools.product(z2.elements, repeat=2):
                if not verify_product_rule(f, g, a, x):
                    return {"f": list(f.values), "g": list(g.values), "a": a, "x": x}
        for domain, codomain in self._sample_pairs():
            f = random_function(domain, codomain, self.rng, identity_preserving=False)
            g = random_function(domain, codomain, self.rng, identity_preserving=False)
            a, x = (int(v) for v in self.rng.integers(0, domain.order, size=2))
            if not verify_product_rule(f, g, a, x):
                return {"f": list(f.values), "g": list(g.values), "a": a, "x": x}
        return True

    def check_average_function(self) -> Any:
        z4, z6 = make_cyclic(4), make_cyclic(6)
        for f in enumerate_identity_preserving(z4, z6):
            average = average_function(f)
            if not is_homomorphism(average.function):
                return {"function": list(f.values)}
            if is_homomorphism(f) and average.function != f:
                return {"function": list(f.values), "average": list(average.values)}
        return True

    def check_transfer(self) -> Any:
        for shipped in shipped_transfers():
            setup = shipped.setup
            theta = transfer(setup)
            if shipped.name == "S3>A3" and not theta.is_trivial:
                return {"setup": shipped.name, "values": list(theta.values)}
            if not verify_transfer_power_relation(setup):
                return {"setup": shipped.name, "relation": "power"}
            if classical_transfer(setup).values != theta.values:
                return {"setup": shipped.name, "relation": "classical"}
            rotated = make_transfer_setup(
                setup.group, setup.subgroup, setup.target_hom, setup.cosets.rotated().representatives
            )
            if transfer(rotated).values != theta.values:
                return {"setup": shipped.name, "relation": "representatives"}
        return True

    def check_distributor_identities(self) -> Any:
        s3 = make_symmetric(3)
        mo = inversion(s3)
        for x, y, z in itertools.product(s3.elements, repeat=3):
            if not verify_triple_identity(mo, x, y, z) or not verify_action_shift(mo, x, y, z):
                return {"function": "inversion", "triple": [x, y, z]}
        for domain, codomain in self._sample_pairs():
            f = random_function(domain, codomain, self.rng, identity_preserving=False)
            x, y, z = (int(v) for v in self.rng.integers(0, domain.order, size=3))
            if not verify_triple_identity(f, x, y, z) or not verify_action_shift(f, x, y, z):
                return {"function": list(f.values), "triple": [x, y, z]}
        return True

    def check_distributor_subgroup(self) -> Any:
        for spec, g in self.catalog.items():
            mo = inversion(g)
            if distributor_subgroup(mo) != derived_subgroup(g, whole_group(g)):
                return {"group": spec}
            canonical_quotient_hom(mo)
            if g.order <= self.settings.MINIMALITY_CAP and not verify_minimality(mo):
                return {"group": spec, "relation": "minimality"}
        small = [g for g in self.catalog.values() if g.order <= 6]
        for _ in range(20):
            i, j = self.rng.integers(0, len(small), size=2)
            f = random_function(small[int(i)], small[int(j)], self.rng, identity_preserving=False)
            canonical_quotient_hom(f)
            if not verify_minimality(f):
                return {"function": list(f.values), "relation": "minimality"}
        return True

    # Distributed average

    def _larger_abelian(self, extension: ShippedExtension) -> list[Subgroup]:
        """Abelian normal subgroups properly containing the kernel."""
        return [
            s
            for s in normal_subgroups(extension.extension)
            if s.is_abelian and extension.kernel.is_subgroup_of(s) and s != extension.kernel
        ]

    def _variants(self, ctx: DistributedAverageContext, larger: Sequence[Subgroup]) -> list[DistributedAverageContext]:
        f, a = ctx.function, ctx.a_subgroup
        variants = [
            ctx,
            make_context(f),
            make_context(f, ctx.k_subgroup, a, ctx.reps.rotated().representatives),
            make_context(f, ctx.k_subgroup, a, m=ctx.m + a.order),
        ]
        for s in larger:
            if gcd(ctx.index, s.order) == 1:
                variants.append(make_context(f, ctx.k_subgroup, s))
        return variants

    def _contexts(self) -> Iterator[tuple[DistributedAverageContext, Sequence[Subgroup], Optional[GroupFunction]]]:
        """Coset sections of every transversal, then twists of the canonical lift."""
        abelian = [e for e in shipped_extensions() if e.kernel.is_abelian]
        larger = {e.name: self._larger_abelian(e) for e in abelian}
        for e in abelian:
            q = quotient(e.extension, e.kernel)
            hit = sorted(set(e.hom.values) - {0})
            for choice in itertools.product(*(q.cosets.coset(u) for u in hit)):
                reps = list(q.cosets.representatives)
                for u, r in zip(hit, choice):
                    reps[u] = r
                section = coset_section(q, e.hom, reps)
                yield make_context(section, a=e.kernel), larger[e.name], None
        while True:
            for e in abelian:
                base = lift_abelian(e.extension, e.kernel, e.hom).homomorphism
                g = base.domain
                subgroups = [subgroup_closure(g, [x]) for x in g.elements]
                k = subgroups[int(self.rng.integers(0, len(subgroups)))]
                a = random_stabilized_function(g, k, e.kernel, self.rng)
                f = twist(base.function, a, within=e.kernel, stabilized_by=k)
                yield make_context(f, k=k, a=e.kernel), larger[e.name], a

    def check_distributed_average(self) -> Any:
        count = 0
        for ctx, larger, a in self._contexts():
            if count >= self.settings.CONTEXT_COUNT:
                break
            distributed_average(ctx)
            if not verify_invariance(ctx.function, self._variants(ctx, larger)):
                return {"function": list(ctx.function.values), "relation": "invariance"}
            if a is not None:
                base = GroupFunction(
                    ctx.domain,
                    ctx.codomain,
                    [ctx.codomain.rows[v][ctx.codomain.inverses[w]] for v, w in zip(ctx.function.values, a.values)],
                )
                base_ctx = make_context(base, ctx.k_subgroup, ctx.a_subgroup, ctx.reps.representatives, ctx.m)
                if not verify_twist_theorem(base, a, base_ctx):
                    return {"function": list(base.values), "twist": list(a.values)}
            count += 1
        self.contexts_checked = count
        return True

    # Lifting

    def _brute_conjugators(self, f1: Homomorphism, f2: Homomorphism, kernel: Subgroup) -> set[int]:
        h = f1.codomain
        return {
            c
            for c in kernel.members
            if all(h.conjugate(f2.values[x], c) == f1.values[x] for x in f1.domain.elements)
        }

    def check_lifts(self) -> Any:
        for e in shipped_extensions():
            result = lift(e.extension, e.kernel, e.hom)
            q = quotient(e.extension, e.kernel)
            if result.homomorphism.function.then(q.projection.function).values != e.hom.values:
                return {"extension": e.name, "relation": "projection"}
            if not e.kernel.is_abelian:
                if len(result.steps) < 2:
                    return {"extension": e.name, "steps": len(result.steps)}
                second = lift(e.extension, e.kernel, e.hom, rotated=True)
                conjugator_between_soluble(result.homomorphism, second.homomorphism, e.kernel)
                continue
            lifts = enumerate_lifts(e.extension, e.kernel, e.hom)
            images = {hom.image.members for hom in lifts}
            if e.name == "S3/A3" and len(images) != 3:
                return {"extension": e.name, "images": len(images)}
            for f1, f2 in itertools.combinations(lifts, 2):
                c = conjugator_between(f1, f2, e.kernel)
                brute = self._brute_conjugators(f1, f2, e.kernel)
                if c not in brute:
                    return {"extension": e.name, "conjugator": c, "brute_force": sorted(brute)}
        return True

    def check_triviality(self) -> Any:
        checked = 0
        for g in self.catalog.values():
            if g.order > 12:
                continue
            for x in g.elements:
                k = subgroup_closure(g, [x])
                for q in (2, 3, 5):
                    if gcd(g.order // k.order, q) != 1:
                        continue
                    target = make_cyclic(q)
                    a = random_stabilized_function(g, k, whole_group(target), self.rng)
                    average = distributed_average(make_context(a, k=k, a=whole_group(target)))
                    if not average.is_trivial:
                        return {"group": g.name, "k": list(k.members), "function": list(a.values)}
                    checked += 1
        logger.debug("Triviality checked on %d functions", checked)
        return checked > 0

    # Fixtures

    def check_fixture(self, path: Path) -> Check:
        def load():
            try:
                document = json.loads(Path(path).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise PreconditionError(f"Cannot read fixture {path}", {"path": str(path)}) from exc
            if not isinstance(document, dict):
                raise GroupValidationError("Fixture must be a JSON object", {"path": str(path)})
            if "domain" in document:
                load_function(document)
            else:
                load_group(document)
            return True

        return run_check(f"fixture:{Path(path).name}", load)
