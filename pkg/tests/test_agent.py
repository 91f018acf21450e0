"""
Verification agent tests.
"""
import pytest

from src.agents.sampling import Sampler
from src.agents.verification_agent import SUITE_NAMES, SUITES, VerificationAgent
from src.algebra.scalars import to_text
from src.utils.exceptions import UnknownSuiteError


@pytest.fixture(scope="module")
def agent(store):
    return VerificationAgent(store, store.settings)


@pytest.mark.parametrize("suite", list(SUITES))
def test_suite_passes_at_rank_one(agent, suite):
    report = agent.run(suite, 1, max_p=4)
    assert report.passed, report.to_text()
    assert report.results
    assert all(r.identity.startswith(suite + "/") for r in report.results)


def test_report_header(agent):
    report = agent.run("scalars", 1)
    assert report.suite == "scalars"
    assert report.braiding == "-c[N=1]"
    assert report.max_p == agent.settings.default_max_p
    assert report.failures == []
    assert report.to_text().splitlines()[-1].startswith("PASSED")


def test_closed_third_product_reports_the_alternating_sign(agent):
    result = agent.run("closed-third-product", 1).results[0]
    assert result.status == "pass"
    assert "corrected" in result.note


def test_nested_step_needs_rank_two(agent):
    statuses = {r.identity: r.status for r in agent.run("partial-trace", 1).results}
    assert statuses["partial-trace/nested-step"] == "skipped"


def test_trace_morphism_without_top_grade(agent):
    report = agent.run("trace-morphism", 1, braiding="flip", max_p=3)
    assert report.passed
    assert {r.status for r in report.results} == {"skipped"}


def test_flip_profile(agent):
    report = agent.run("grade-profile", 1, braiding="flip", max_p=3)
    assert report.passed, report.to_text()


def test_sl_dual_products(agent):
    assert agent.run("products", 1, braiding="sl-dual").passed


def test_unknown_suite(agent):
    with pytest.raises(UnknownSuiteError):
        agent.run("nope", 1)
    assert "all" in SUITE_NAMES


def test_sampler_is_reproducible():
    first = Sampler(5, "label", 2)
    second = Sampler(5, "label", 2)
    assert [to_text(s) for s in first.scalars(5)] == [to_text(s) for s in second.scalars(5)]
    assert first.scalar(nonzero=True)


@pytest.mark.slow
def test_all_suites_at_rank_two(agent):
    report = agent.run("all", 2)
    assert report.passed, report.to_text()
    order = list(SUITES)
    positions = [order.index(r.identity.split("/")[0]) for r in report.results]
    assert positions == sorted(positions)


@pytest.mark.slow
def test_quantum_trace_at_rank_three(agent):
    assert agent.run("quantum-trace", 3).passed


def test_a_raising_case_fails_the_identity(agent):
    def cases():
        yield "holds", lambda: True
        yield "divides by zero", lambda: 1 // 0
        yield "never reached", lambda: True

    result = agent._check("scalars/raising", "Q(q)", cases())
    assert result.status == "fail"
    assert result.cases == 2
    assert result.counterexample.startswith("divides by zero: ZeroDivisionError")
