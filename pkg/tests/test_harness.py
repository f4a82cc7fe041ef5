"""
Tests for the harness service behind the command line.
"""
import logging

import pytest

from grouplens.core.catalog import identity_target
from grouplens.core.functions import GroupFunction, identity_map, inversion
from grouplens.core.groups import Group, make_cyclic, subgroup_closure
from grouplens.errors import ContainmentError, PreconditionError
from grouplens.schemas import LiftReport, OrbitCensus, TransferReport
from grouplens.services.harness import HarnessService, require_prime_divisor, run_check


@pytest.fixture
def service(small_settings) -> HarnessService:
    return HarnessService(settings=small_settings)


def test_run_check_outcomes():
    """Test True, False, witness dicts and library errors."""
    assert run_check("ok", lambda: True).passed
    assert not run_check("no", lambda: False).passed
    failed = run_check("witness", lambda: {"element": 3})
    assert not failed.passed
    assert failed.witness == {"element": 3}

    def boom():
        raise ContainmentError("outside", {"element": 1})

    errored = run_check("error", boom)
    assert not errored.passed
    assert errored.witness["error"] == "containment"


def test_require_prime_divisor(s3: Group):
    require_prime_divisor(s3, 3)
    with pytest.raises(PreconditionError):
        require_prime_divisor(s3, 4)
    with pytest.raises(PreconditionError):
        require_prime_divisor(s3, 5)


def test_orbit_census(service: HarnessService, z2: Group, z3: Group, s3: Group):
    census, fixed = service.orbit_census(z3, s3)
    assert census.census_mode == "full"
    assert census.functions == 36
    assert census.histogram == {1: 3, 3: 11}
    assert census.fixed_points == census.homomorphisms == 3
    assert len(fixed) == 3
    census, _ = service.orbit_census(z2, z2)
    assert census.histogram == {1: 2}


@pytest.mark.parametrize("group_name,prime,element", [("s3", 2, 1), ("s3", 3, 3), ("z4", 2, 2)])
def test_cauchy_elements(service: HarnessService, request, group_name: str, prime: int, element: int):
    """The least non-trivial fixed point gives the reported element."""
    g = request.getfixturevalue(group_name)
    found, census = service.cauchy_element(g, prime)
    assert found == element
    assert g.element_order(found) == prime


def test_cauchy_report(service: HarnessService, s3: Group):
    report = service.cauchy(s3, 3)
    assert report.command == "cauchy"
    assert report.passed
    assert report.result["element_label"] == "120"
    assert [check.name for check in report.checks][-1] == "orbit-sizes-divide-p"


def test_cauchy_falls_back_to_fixed_points(small_settings, s4: Group, caplog):
    """Above the cap only fixed points are counted."""
    service = HarnessService(settings=small_settings, cap=10)
    with caplog.at_level(logging.WARNING):
        report = service.cauchy(s4, 3)
    assert report.passed
    census = OrbitCensus.model_validate(report.result["census"])
    assert census.census_mode == "fixed-points-only"
    assert census.fixed_points == 9
    assert census.functions is None
    assert "fixed points only" in caplog.text


def test_sylow(service: HarnessService, s4: Group):
    for p, order in ((2, 8), (3, 3)):
        report = service.sylow(s4, p)
        assert report.passed
        assert report.result["order"] == order
        assert report.result["p_part"] == order


def test_sylow_in_z12(service: HarnessService):
    h, iterations = service.sylow_subgroup(make_cyclic(12), 2)
    assert h.members == (0, 3, 6, 9)
    assert len(iterations) == 1
    assert iterations[0].pulled_back == 3


def test_census_report(service: HarnessService, z3: Group, s3: Group):
    report = service.census(z3, s3)
    assert report.passed
    census = OrbitCensus.model_validate(report.result)
    assert census.histogram == {1: 3, 3: 11}


def test_transfer_report(service: HarnessService, z6: Group):
    h = subgroup_closure(z6, [2])
    report = service.transfer(z6, h, identity_target(h))
    assert report.passed, report.failures()
    result = TransferReport.model_validate(report.result)
    assert result.transfer_values == [0, 1, 2, 0, 1, 2]
    assert result.multiplicity_m == 1
    assert result.index == 2


def test_lift_report(service: HarnessService, extensions):
    e = extensions["S3/A3"]
    report = service.lift(e.extension, e.kernel, e.hom)
    assert report.passed, report.failures()
    result = LiftReport.model_validate(report.result)
    assert result.lift_values == [0, 1]
    assert result.lift_labels == ["012", "021"]
    assert result.conjugacy_class_size_of_image == 3
    assert result.conjugator in e.kernel


def test_soluble_lift_report(service: HarnessService, extensions):
    e = extensions["S3xZ5/S3x1"]
    report = service.lift(e.extension, e.kernel, e.hom)
    assert report.passed, report.failures()
    result = LiftReport.model_validate(report.result)
    assert [step.kernel_order for step in result.steps] == [2, 3]


def test_distributors_of_inversion(service: HarnessService, s3: Group):
    report = service.distributors(inversion(s3))
    assert report.passed, report.failures()
    assert report.result["subgroup_order"] == 3
    assert report.result["quotient_order"] == 2
    assert report.result["homomorphism"] is False
    assert "matches-derived-subgroup" in {check.name for check in report.checks}


def test_distributors_of_homomorphism(service: HarnessService, s3: Group):
    report = service.distributors(identity_map(s3))
    assert report.passed
    assert report.result["homomorphism"] is True
    assert report.result["distinct_values"] == [0]


def test_distributors_of_arbitrary_function(service: HarnessService, z3: Group, s3: Group):
    report = service.distributors(GroupFunction(z3, s3, [1, 3, 5]))
    assert report.passed, report.failures()


def test_describe(service: HarnessService, s3: Group):
    report = service.describe(s3)
    assert report.passed
    assert report.result["abelian"] is False
    assert report.result["soluble"] is True
    assert report.result["element_orders"] == [1, 2, 2, 3, 3, 2]
    assert report.result["generators"] == [1, 2]
