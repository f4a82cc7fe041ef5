"""
Tests for the self-check service.
"""
import json

import pytest

from grouplens.config import Settings
from grouplens.core.catalog import dump_function, dump_group
from grouplens.core.functions import inversion
from grouplens.core.groups import make_symmetric
from grouplens.services.selfcheck import SelfCheckService

EXPECTED_CHECKS = [
    "action-laws",
    "cauchy-census",
    "cauchy-elements",
    "sylow-subgroups",
    "product-rule",
    "average-function",
    "transfer",
    "distributor-identities",
    "distributor-subgroup",
    "distributed-average",
    "schur-zassenhaus",
    "triviality",
]


@pytest.fixture(scope="module")
def report():
    service = SelfCheckService(settings=Settings(SAMPLE_COUNT=50, CONTEXT_COUNT=40, SEED=7))
    return service.run()


def test_every_check_passes(report):
    """The full suite passes over the catalog."""
    assert [check.name for check in report.checks] == EXPECTED_CHECKS
    assert report.passed, report.failures()
    assert report.result["failures"] == []


def test_report_summary(report):
    assert report.command == "selfcheck"
    assert report.result["catalog_size"] == 24
    assert report.result["checks_run"] == len(EXPECTED_CHECKS)
    assert report.result["contexts"] == 40
    assert report.inputs["seed"] == 7


def test_individual_checks(small_settings):
    service = SelfCheckService(settings=small_settings)
    assert service.check_cauchy_census() is True
    assert service.check_lifts() is True
    assert service.check_triviality() is True


def test_fixtures(small_settings, tmp_path):
    """Group and function documents load; broken ones fail their own check."""
    s3 = make_symmetric(3)
    group_path = tmp_path / "s3.json"
    group_path.write_text(dump_group(s3).model_dump_json())
    function_path = tmp_path / "inversion.json"
    function_path.write_text(dump_function(inversion(s3), claim=False).model_dump_json())
    broken_path = tmp_path / "broken.json"
    broken_path.write_text(json.dumps({"kind": "cayley", "order": 2, "table": [[0, 1], [1, 1]]}))
    false_claim = tmp_path / "claim.json"
    false_claim.write_text(dump_function(inversion(s3), claim=True).model_dump_json())

    service = SelfCheckService(settings=small_settings)
    assert service.check_fixture(group_path).passed
    assert service.check_fixture(function_path).passed
    broken = service.check_fixture(broken_path)
    assert broken.name == "fixture:broken.json"
    assert not broken.passed
    assert broken.witness["error"] == "validation"
    assert not service.check_fixture(false_claim).passed
    assert not service.check_fixture(tmp_path / "absent.json").passed


def test_action_law_at_default_sample_count():
    """The action law holds on the default number of sampled catalog triples."""
    settings = Settings()
    assert settings.SAMPLE_COUNT >= 1000
    service = SelfCheckService(settings=settings)
    assert service.check_action_laws() is True
